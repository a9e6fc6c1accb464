#pragma once

// Zeeman-resolved hyperfine structure of an alkali D1 line.
//
// Ground energies come from the Breit-Rabi formula (exact for J = 1/2);
// excited sublevels use the linear Zeeman effect. Energies are frequencies
// in Hz measured from the B = 0 centroid of their manifold.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpt/angmom.hpp"

namespace cpt {

struct AtomSpec {
  std::string name;
  HalfInt nuclear_spin;
  double gJ_ground = 0.0;
  double gJ_excited = 0.0;
  /// Nuclear g-factor in Bohr-magneton units, H_Z = muB (gJ Jz + gI Iz) B.
  double gI = 0.0;
  double hfs_ground_hz = 0.0;
  double hfs_excited_hz = 0.0;
  /// Natural linewidth Gamma in rad/s.
  double gamma_natural = 0.0;
  double doppler_fwhm_hz = 0.0;
  double bohr_hz_per_gauss = 1.399625e6;

  /// Throws InvalidArgument if a splitting or the linewidth is not positive.
  void validate() const;

  HalfInt ground_J() const { return half(1); }
  HalfInt excited_J() const { return half(1); }
  HalfInt upper_ground_F() const { return nuclear_spin + half(1); }
  HalfInt lower_ground_F() const { return nuclear_spin - half(1); }
};

/// 87Rb D1 (I = 3/2).
AtomSpec rb87();
/// 133Cs D1 (I = 7/2).
AtomSpec cs133();
/// Preset by name ("rb87", "cs133"); InvalidArgument otherwise.
AtomSpec atom_preset(std::string_view name);

enum class Manifold { ground, excited };

enum class Branch { upper, lower };

struct Level {
  Manifold manifold;
  HalfInt F;
  HalfInt m;
  double energy_hz;
  /// energy_hz minus the zero-field energy of the same hyperfine level.
  double zeeman_hz;
};

/// Ground levels ordered by F then m, excited levels by m. Matrix indices
/// everywhere else follow this order: ground first, then excited.
struct LevelSet {
  AtomSpec atom;
  double B_gauss = 0.0;
  std::vector<Level> ground_levels;
  std::vector<Level> excited_levels;
  HalfInt excited_F;

  std::size_t ground_count() const { return ground_levels.size(); }
  std::size_t excited_count() const { return excited_levels.size(); }
  std::size_t dimension() const { return ground_count() + excited_count(); }

  /// Position of |F, m> within ground_levels.
  std::optional<std::size_t> ground_index(HalfInt F, HalfInt m) const;
  /// Position of |F_e, m> within excited_levels.
  std::optional<std::size_t> excited_index(HalfInt m) const;
};

/// First-order Lande factor of hyperfine level F, nuclear term included.
double lande_g(HalfInt F, Manifold manifold, const AtomSpec& atom);

/// Exact ground-state energy (Hz) of the sublevel m on the given branch
/// (upper: F = I+1/2, lower: F = I-1/2). Stretched states use their closed
/// linear form so the result stays analytic through B = 0.
double breit_rabi_energy(const AtomSpec& atom, HalfInt m, Branch branch, double B_gauss);

/// breit_rabi_energy(B) - breit_rabi_energy(0), evaluated without the
/// cancellation of subtracting two GHz-sized numbers.
double breit_rabi_shift(const AtomSpec& atom, HalfInt m, Branch branch, double B_gauss);

/// Zero-field energy (Hz) of the excited hyperfine level F.
double excited_hyperfine_offset(const AtomSpec& atom, HalfInt F);

LevelSet build_level_set(const AtomSpec& atom, HalfInt excited_F, double B_gauss);

/// E(upper F, m_upper) - E(lower F, m_lower): the two-photon resonance of
/// that Lambda pair, in Hz.
double pair_resonance_frequency(const AtomSpec& atom, HalfInt m_lower, HalfInt m_upper,
                                double B_gauss);

}  // namespace cpt
