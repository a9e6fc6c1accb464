#pragma once

// Master-equation model of the driven atom: coherent evolution in the
// rotating frame plus spontaneous emission, buffer-gas dephasing of the
// optical coherences and isotropic ground relaxation.
//
// Density matrices are vectorized row-major, vec index = i * d + j.

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cpt/coupling.hpp"
#include "cpt/field.hpp"
#include "cpt/linalg.hpp"
#include "cpt/structure.hpp"

namespace cpt {

/// All rates in rad/s.
struct RateSet {
  double gamma_natural = 0.0;
  /// Extra decay of optical coherences is optical_dephasing / 2.
  double optical_dephasing = 0.0;
  /// Relaxation of everything toward the maximally mixed ground state.
  double ground_relaxation = 0.0;
  /// Non-radiative excited -> ground transfer, spread evenly over ground.
  double extra_excited_quench = 0.0;

  /// Gamma* = 2pi x 100 MHz, gamma_g = 2pi x 500 Hz, Gamma from the atom.
  static RateSet defaults(const AtomSpec& atom);
  void validate() const;
  /// gamma_g << Gamma is the regime the model is meant for.
  bool ground_relaxation_is_slow() const { return ground_relaxation < 0.01 * gamma_natural; }
};

struct DensityMatrix {
  Eigen::MatrixXcd rho;

  double trace() const { return rho.trace().real(); }
  double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
  /// Sum of the excited-state populations (indices >= ground_count).
  double excited_population(std::size_t ground_count) const;
};

struct LindbladGenerator {
  linalg::RowMatrix superoperator;
  std::size_t dimension = 0;

  /// max_k |sum_i L[(i,i), k]| / max|L|; zero for a trace-preserving map.
  double trace_row_defect() const;
  linalg::Vector apply(const linalg::Vector& vec_rho) const;
};

/// Precomputed generator pieces for one level set, field and rate set.
/// Only the rotating-frame diagonal depends on the Raman detuning and on a
/// Doppler shift, so scans rebuild nothing else.
class LindbladModel {
 public:
  LindbladModel(const LevelSet& levels, const BichromaticField& field, const RateSet& rates);

  /// Generator at the field's own Raman detuning.
  LindbladGenerator generator() const;
  /// Generator at the given Raman detuning (Hz) with both optical
  /// detunings lowered by doppler_shift_hz.
  LindbladGenerator generator(double raman_detuning, double doppler_shift_hz = 0.0) const;

  const LevelSet& levels() const { return levels_; }

 private:
  LevelSet levels_;
  BichromaticField field_;
  RateSet rates_;
  linalg::RowMatrix fixed_;
  std::vector<double> frame_hz_;  // diagonal at zero Raman detuning, Hz
  std::vector<double> raman_weight_;   // d(frame)/d(raman)
  std::vector<double> doppler_weight_; // d(frame)/d(shift)
};

LindbladGenerator build_lindblad(const LevelSet& levels, const BichromaticField& field,
                                 const RateSet& rates);

/// Unique stationary state, from the linear system with the first equation
/// replaced by Tr rho = 1. Throws NonUniqueSteadyState when that system is
/// singular, NumericalError when the result fails its own checks.
DensityMatrix steady_state(const LindbladGenerator& generator);

/// Scattering rate Gamma * (total excited population), photons/s per atom.
double absorption(const DensityMatrix& rho, const LevelSet& levels);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for the weight exp(-x^2), via Golub-Welsch.
QuadratureRule gauss_hermite(int points);

/// Average of spectrum(shift_hz) over a Gaussian velocity distribution with
/// the given FWHM (Hz). fwhm = 0 returns spectrum(0).
double doppler_average(const std::function<double(double)>& spectrum, double fwhm_hz, int points);

}  // namespace cpt
