#pragma once

// Scan drivers, resonance metrics and CSV output.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpt/dynamics.hpp"
#include "cpt/field.hpp"
#include "cpt/structure.hpp"

namespace cpt {

struct ScanConfig {
  std::string atom_name = "rb87";
  AtomSpec atom = rb87();
  HalfInt excited_F = 1;
  Scheme scheme = Scheme::lin_par_lin;
  /// Explicit (component1, component2) polarizations; overrides the scheme.
  std::optional<std::pair<Polarization, Polarization>> polarizations;
  /// rad/s. Equal by default: each sideband carries 25% of the power.
  double rabi1 = 0.0;
  double rabi2 = 0.0;
  double detuning1_hz = 0.0;
  double detuning2_hz = 0.0;
  double B_gauss = 0.15;
  double delta_start_hz = -50.0e3;
  double delta_stop_hz = 50.0e3;
  double delta_step_hz = 100.0;
  bool doppler = false;
  double doppler_fwhm_hz = 0.0;
  int doppler_points = 21;
  RateSet rates;
  unsigned threads = 1;

  /// Rb87, lin||lin via F_e = 1, B = 0.15 G, +-50 kHz in 100 Hz steps.
  static ScanConfig defaults();
  /// Defaults with the atom swapped (rates and Doppler width follow it).
  static ScanConfig defaults(const AtomSpec& atom, std::string name);

  void validate() const;
  LevelSet levels() const;
  BichromaticField field(double raman_detuning) const;
  std::vector<double> raman_grid() const;
};

/// Rabi scale (rad/s) of each sideband in the default configuration.
double default_rabi();

struct Lineshape {
  std::vector<double> raman_hz;
  std::vector<double> absorption;
  ScanConfig config;
};

struct ResonanceMetrics {
  double background = 0.0;
  double amplitude = 0.0;
  double fwhm = 0.0;
  double contrast = 0.0;
  double amp_to_width = 0.0;
  double center = 0.0;
  std::size_t n_peaks = 0;
  bool no_resonance = false;
  /// Peak positions (Hz), refined by a parabola through three samples.
  std::vector<double> peaks;
};

Lineshape scan(const ScanConfig& config);

/// Absorption at one Raman detuning, Doppler-averaged when enabled.
double absorption_at(const LindbladModel& model, const ScanConfig& config, double raman_hz);

ResonanceMetrics extract_metrics(const Lineshape& ls);
ResonanceMetrics extract_metrics(const std::vector<double>& x, const std::vector<double>& y);

struct FamilyMember {
  double B_gauss = 0.0;
  Lineshape lineshape;
  ResonanceMetrics metrics;
  /// Distance between the outermost peaks, 0 with fewer than two.
  double peak_separation = 0.0;
};

std::vector<FamilyMember> bfield_family(const ScanConfig& config, const std::vector<double>& B_list);

struct SchemeChoice {
  Scheme scheme = Scheme::lin_par_lin;
  HalfInt excited_F = 1;
};

struct ComparisonRow {
  SchemeChoice choice;
  double rabi = 0.0;
  ResonanceMetrics metrics;
};

/// Rows ordered by scheme, then by Rabi scale. Both sidebands use each rabi.
std::vector<ComparisonRow> compare_schemes(const ScanConfig& base,
                                           const std::vector<SchemeChoice>& schemes,
                                           const std::vector<double>& rabi_values);

/// One-photon absorption of the upper ground manifold alone, summed over
/// both excited hyperfine levels. laser_hz is measured from the zero-field
/// excited centroid.
std::vector<double> one_photon_spectrum(const AtomSpec& atom, const std::vector<double>& laser_hz,
                                        double rabi, const RateSet& rates, double doppler_fwhm_hz,
                                        int doppler_points);

std::string format_number(double value);

void write_scan_csv(std::ostream& out, const Lineshape& ls, bool comments);
void write_bscan_csv(std::ostream& out, const std::vector<FamilyMember>& family, bool comments);
void write_compare_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
void write_levels_csv(std::ostream& out, const LevelSet& levels);
/// Config echo, each line prefixed "# ".
void write_config_comments(std::ostream& out, const ScanConfig& config);

}  // namespace cpt
