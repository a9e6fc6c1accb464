#include "cpt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cpt/angmom.hpp"
#include "cpt/errors.hpp"

namespace cpt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI{0.0, 1.0};

struct JumpEntry {
  std::size_t to;
  std::size_t from;
  double amplitude;
};

// Adds D(rho) = L rho L^+ - 1/2 {L^+ L, rho} for a real jump operator given
// by its nonzero entries.
void add_dissipator(linalg::RowMatrix& sup, std::size_t d, const std::vector<JumpEntry>& jump) {
  // L rho L^+ : (i,j) <- L_ik L_jl rho_kl
  for (const JumpEntry& a : jump) {
    for (const JumpEntry& b : jump) {
      sup(a.to * d + b.to, a.from * d + b.from) += a.amplitude * b.amplitude;
    }
  }
  // M = L^+ L
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (const JumpEntry& a : jump) {
    for (const JumpEntry& b : jump) {
      if (a.to == b.to) m(a.from, b.from) += a.amplitude * b.amplitude;
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t r = i * d + j;
      for (std::size_t k = 0; k < d; ++k) {
        if (m(i, k) != 0.0) sup(r, k * d + j) -= 0.5 * m(i, k);
        if (m(k, j) != 0.0) sup(r, i * d + k) -= 0.5 * m(k, j);
      }
    }
  }
}

}  // namespace

RateSet RateSet::defaults(const AtomSpec& atom) {
  RateSet r;
  r.gamma_natural = atom.gamma_natural;
  r.optical_dephasing = kTwoPi * 100.0e6;
  r.ground_relaxation = kTwoPi * 500.0;
  return r;
}

void RateSet::validate() const {
  if (gamma_natural < 0.0 || optical_dephasing < 0.0 || ground_relaxation < 0.0 ||
      extra_excited_quench < 0.0) {
    throw InvalidArgument("relaxation rates must be non-negative");
  }
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::excited_population(std::size_t ground_count) const {
  double p = 0.0;
  for (Eigen::Index i = static_cast<Eigen::Index>(ground_count); i < rho.rows(); ++i) {
    p += rho(i, i).real();
  }
  return p;
}

double LindbladGenerator::trace_row_defect() const {
  const double scale = linalg::max_abs(superoperator);
  if (scale == 0.0) return 0.0;
  const std::size_t d = dimension;
  double worst = 0.0;
  for (Eigen::Index c = 0; c < superoperator.cols(); ++c) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) s += superoperator(static_cast<Eigen::Index>(i * d + i), c);
    worst = std::max(worst, std::abs(s));
  }
  return worst / scale;
}

linalg::Vector LindbladGenerator::apply(const linalg::Vector& vec_rho) const {
  return linalg::multiply(superoperator, vec_rho);
}

LindbladModel::LindbladModel(const LevelSet& levels, const BichromaticField& field,
                             const RateSet& rates)
    : levels_(levels), field_(field), rates_(rates) {
  rates.validate();
  const std::size_t ng = levels.ground_count();
  const std::size_t ne = levels.excited_count();
  const std::size_t d = ng + ne;
  const AtomSpec& atom = levels.atom;

  // The frame diagonal is split off; H below holds only the couplings.
  BichromaticField at_zero = field;
  at_zero.raman_detuning = 0.0;
  const RWAHamiltonian h = rwa_hamiltonian(levels, at_zero);
  frame_hz_.resize(d);
  raman_weight_.assign(d, 0.0);
  doppler_weight_.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    frame_hz_[i] = h.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() / kTwoPi;
  }
  for (std::size_t g = 0; g < ng; ++g) {
    if (levels.ground_levels[g].F == atom.lower_ground_F()) raman_weight_[g] = 1.0;
  }
  for (std::size_t e = ng; e < d; ++e) {
    raman_weight_[e] = 0.5;
    doppler_weight_[e] = 1.0;
  }

  const auto n = static_cast<Eigen::Index>(d * d);
  fixed_ = linalg::RowMatrix::Zero(n, n);

  // -i [H_offdiag, rho]
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t r = i * d + j;
      for (std::size_t k = 0; k < d; ++k) {
        if (k != i) {
          const cplx hik = h.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
          if (hik != cplx(0.0, 0.0)) fixed_(r, k * d + j) += -kI * hik;
        }
        if (k != j) {
          const cplx hkj = h.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
          if (hkj != cplx(0.0, 0.0)) fixed_(r, i * d + k) += kI * hkj;
        }
      }
    }
  }

  // Spontaneous emission: one jump operator per (q, ground F). Keeping the
  // two ground manifolds apart drops coherence transfer between levels that
  // rotate ~Delta_hfs apart in the lab frame.
  const double amplitude_scale = std::sqrt(rates.gamma_natural * atom.excited_J().multiplicity());
  for (int q = -1; q <= 1; ++q) {
    for (HalfInt F : {atom.lower_ground_F(), atom.upper_ground_F()}) {
      std::vector<JumpEntry> jump;
      for (std::size_t g = 0; g < ng; ++g) {
        const Level& lg = levels.ground_levels[g];
        if (lg.F != F) continue;
        for (std::size_t e = 0; e < ne; ++e) {
          const Level& le = levels.excited_levels[e];
          if ((le.m - lg.m).twice() != 2 * q) continue;
          const double w = dipole_weight(lg.F, lg.m, le.F, le.m, q, atom.nuclear_spin,
                                         atom.ground_J(), atom.excited_J());
          if (w != 0.0) jump.push_back({g, ng + e, amplitude_scale * w});
        }
      }
      if (!jump.empty()) add_dissipator(fixed_, d, jump);
    }
  }

  if (rates.extra_excited_quench > 0.0) {
    const double a = std::sqrt(rates.extra_excited_quench / static_cast<double>(ng));
    for (std::size_t g = 0; g < ng; ++g) {
      for (std::size_t e = ng; e < d; ++e) add_dissipator(fixed_, d, {{g, e, a}});
    }
  }

  // Buffer-gas dephasing of optical coherences.
  const double dephasing = 0.5 * rates.optical_dephasing;
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t e = ng; e < d; ++e) {
      fixed_(g * d + e, g * d + e) -= dephasing;
      fixed_(e * d + g, e * d + g) -= dephasing;
    }
  }

  // gamma_g (Tr(rho) 1_g / Ng - rho)
  const double gamma_g = rates.ground_relaxation;
  if (gamma_g > 0.0) {
    for (Eigen::Index r = 0; r < n; ++r) fixed_(r, r) -= gamma_g;
    for (std::size_t g = 0; g < ng; ++g) {
      for (std::size_t k = 0; k < d; ++k) {
        fixed_(g * d + g, k * d + k) += gamma_g / static_cast<double>(ng);
      }
    }
  }
}

LindbladGenerator LindbladModel::generator() const { return generator(field_.raman_detuning); }

LindbladGenerator LindbladModel::generator(double raman_detuning, double doppler_shift_hz) const {
  const std::size_t d = levels_.dimension();
  std::vector<double> frame(d);
  for (std::size_t i = 0; i < d; ++i) {
    frame[i] = kTwoPi * (frame_hz_[i] + raman_weight_[i] * raman_detuning +
                         doppler_weight_[i] * doppler_shift_hz);
  }
  LindbladGenerator gen;
  gen.dimension = d;
  gen.superoperator = fixed_;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      gen.superoperator(i * d + j, i * d + j) += -kI * (frame[i] - frame[j]);
    }
  }
  return gen;
}

LindbladGenerator build_lindblad(const LevelSet& levels, const BichromaticField& field,
                                 const RateSet& rates) {
  return LindbladModel(levels, field, rates).generator();
}

DensityMatrix steady_state(const LindbladGenerator& generator) {
  const std::size_t d = generator.dimension;
  const auto n = static_cast<Eigen::Index>(d * d);
  if (generator.superoperator.rows() != n || generator.superoperator.cols() != n) {
    throw InvalidArgument("generator size does not match its dimension");
  }

  linalg::RowMatrix system = generator.superoperator;
  system.row(0).setZero();
  for (std::size_t i = 0; i < d; ++i) system(0, static_cast<Eigen::Index>(i * d + i)) = 1.0;
  linalg::Vector rhs = linalg::Vector::Zero(n);
  rhs(0) = 1.0;

  linalg::Vector x;
  try {
    x = linalg::solve(system, rhs, 1e-12);
  } catch (const SingularityError&) {
    throw NonUniqueSteadyState(
        "stationary state is not unique; use a non-zero ground relaxation rate");
  }

  const double scale = linalg::max_abs(generator.superoperator);
  const double residual = generator.apply(x).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * scale) {
    throw NumericalError("steady-state residual " + std::to_string(residual / scale) +
                         " exceeds tolerance");
  }

  DensityMatrix out;
  out.rho.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x(static_cast<Eigen::Index>(i * d + j));
    }
  }
  if (out.hermiticity_error() > 1e-10) {
    throw NumericalError("steady state is not Hermitian");
  }
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
  out.rho /= out.trace();
  if (out.min_eigenvalue() < -1e-9) throw NumericalError("steady state is not positive");
  return out;
}

double absorption(const DensityMatrix& rho, const LevelSet& levels) {
  return levels.atom.gamma_natural * rho.excited_population(levels.ground_count());
}

QuadratureRule gauss_hermite(int points) {
  if (points < 1) throw InvalidArgument("quadrature needs at least one point");
  const Eigen::Index n = points;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  for (Eigen::Index k = 0; k < n; ++k) {
    rule.nodes.push_back(solver.eigenvalues()(k));
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights.push_back(std::sqrt(std::numbers::pi) * v0 * v0);
  }
  return rule;
}

double doppler_average(const std::function<double(double)>& spectrum, double fwhm_hz, int points) {
  if (fwhm_hz < 0.0) throw InvalidArgument("Doppler FWHM must be non-negative");
  if (points < 1) throw InvalidArgument("Doppler average needs at least one point");
  if (fwhm_hz == 0.0) return spectrum(0.0);
  const double sigma = fwhm_hz / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const QuadratureRule rule = gauss_hermite(points);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * spectrum(std::numbers::sqrt2 * sigma * rule.nodes[k]);
  }
  return sum / std::sqrt(std::numbers::pi);
}

}  // namespace cpt
