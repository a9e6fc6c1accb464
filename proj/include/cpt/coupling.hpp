#pragma once

// Light-atom coupling in the two-photon rotating frame, and the algebra of
// dark and trap states built on it.
//
// Rotating frame (all entries rad/s, indices ground-then-excited):
//   upper ground F :  2pi * zeeman
//   lower ground F :  2pi * (zeeman + raman + detuning2 - detuning1)
//   excited        :  2pi * (zeeman - (detuning1 - raman/2))
// Off-diagonal (e, g) entries are the coupling operator, (g, e) their
// conjugates.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cpt/field.hpp"
#include "cpt/structure.hpp"

namespace cpt {

/// Rows = excited levels, columns = ground levels, both in LevelSet order.
struct CouplingOperator {
  Eigen::MatrixXcd matrix;
};

struct RWAHamiltonian {
  Eigen::MatrixXcd matrix;
  std::string frame_note;
};

/// A Lambda pair: |lower F, m_lower> and |upper F, m_upper>.
struct LambdaPair {
  HalfInt m_lower;
  HalfInt m_upper;
  bool operator==(const LambdaPair&) const = default;
};

struct DarkState {
  /// Amplitudes over the ground levels (LevelSet order), unit norm.
  Eigen::VectorXcd amplitudes;
  /// Ground indices of the degenerate block the state lives in.
  std::vector<std::size_t> block;
  /// ||C v|| / ||C||.
  double residual = 0.0;
  /// Raman detuning (Hz) at which the state is stationary.
  double raman_detuning = 0.0;
};

struct PairFlag {
  LambdaPair pair;
  double raman_detuning = 0.0;  ///< Hz, puts the pair on two-photon resonance
  std::size_t dark_count = 0;
};

struct SchemeReport {
  std::vector<DarkState> dark_states;
  std::vector<Level> trap_states;
  std::vector<PairFlag> pairs;
};

CouplingOperator build_coupling(const LevelSet& levels, const BichromaticField& field);

RWAHamiltonian rwa_hamiltonian(const LevelSet& levels, const BichromaticField& field);

/// Raman detuning (Hz) that makes the pair degenerate in the rotating frame.
double pair_raman_detuning(const LevelSet& levels, const BichromaticField& field,
                           const LambdaPair& pair);

/// Null vectors of the coupling operator inside degenerate ground blocks.
///
/// With a pair, the Raman detuning is first tuned to that pair's resonance.
/// Without one ("auto"), the field's own detuning is used. Blocks group
/// ground levels whose rotating-frame energies differ by less than
/// 1e-6 * Gamma/2pi; a vector counts as dark when ||C v|| <= 1e-10 ||C||.
SchemeReport stationary_dark_states(const LevelSet& levels, const BichromaticField& field,
                                    std::optional<LambdaPair> pair = std::nullopt);

/// Pair-targeted analysis of each pair in turn; dark_states collects the
/// states found in each pair's own block.
SchemeReport dark_state_census(const LevelSet& levels, const BichromaticField& field,
                               std::span<const LambdaPair> pairs);

/// (m, -m) pairs: the resonances without a first-order gJ Zeeman shift.
std::vector<LambdaPair> clock_pairs(const AtomSpec& atom);
/// Every pair with |m_upper - m_lower| <= 2 (reachable through one F_e).
std::vector<LambdaPair> all_pairs(const AtomSpec& atom);

/// Closed-form |dark(+-)> of the F_g = 1,2 -> F_e = 1 scheme:
///   N { |1, -+1> - C(e0; 1,-+1) / C(e0; 2,+-1) |2, +-1> }
/// over the ground levels. sign = +1 gives the (-1)-(+1) pair.
Eigen::VectorXcd construct_dark_pm(const LevelSet& levels, const BichromaticField& field, int sign);

/// Ground sublevels with an identically zero coupling column.
std::vector<Level> trap_states(const LevelSet& levels, const BichromaticField& field);

/// Adiabatically eliminated two-photon amplitude (rad/s)
///   sum_e conj(C(e, upper)) C(e, lower) / (2pi * one-photon detuning of e).
cplx raman_amplitude(const LevelSet& levels, const BichromaticField& field, HalfInt m_lower,
                     HalfInt m_upper);

/// Human-readable report for the command line.
std::string format_report(const SchemeReport& report, const LevelSet& levels);

}  // namespace cpt
