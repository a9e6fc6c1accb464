#include "cpt/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cpt/angmom.hpp"
#include "cpt/errors.hpp"

namespace cpt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rotating-frame energy of a ground level, Hz.
double ground_frame_energy(const LevelSet& levels, const BichromaticField& field,
                           const Level& g) {
  double e = g.zeeman_hz;
  if (g.F == levels.atom.lower_ground_F()) {
    e += field.raman_detuning + field.component2.optical_detuning -
         field.component1.optical_detuning;
  }
  return e;
}

double excited_frame_energy(const BichromaticField& field, const Level& e) {
  return e.zeeman_hz - (field.component1.optical_detuning - 0.5 * field.raman_detuning);
}

void require_pair(const LevelSet& levels, const LambdaPair& pair) {
  if (!levels.ground_index(levels.atom.lower_ground_F(), pair.m_lower) ||
      !levels.ground_index(levels.atom.upper_ground_F(), pair.m_upper)) {
    throw InvalidArgument("Lambda pair (" + pair.m_lower.str() + ", " + pair.m_upper.str() +
                          ") does not exist in this level set");
  }
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

// Ground indices grouped by rotating-frame energy; deterministic order.
std::vector<std::vector<std::size_t>> degenerate_blocks(const LevelSet& levels,
                                                        const BichromaticField& field) {
  const std::size_t n = levels.ground_count();
  std::vector<double> energy(n);
  for (std::size_t i = 0; i < n; ++i) {
    energy[i] = ground_frame_energy(levels, field, levels.ground_levels[i]);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return energy[a] < energy[b]; });

  const double tolerance = 1e-6 * levels.atom.gamma_natural / kTwoPi;
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    if (k == 0 || energy[i] - energy[order[k - 1]] >= tolerance) blocks.emplace_back();
    blocks.back().push_back(i);
  }
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  return blocks;
}

std::vector<DarkState> block_null_space(const Eigen::MatrixXcd& coupling,
                                        const std::vector<std::size_t>& block, double scale,
                                        std::size_t ground_count, double raman) {
  const double threshold = 1e-10 * scale;
  const auto k = static_cast<Eigen::Index>(block.size());
  Eigen::MatrixXcd sub(coupling.rows(), k);
  for (Eigen::Index c = 0; c < k; ++c) sub.col(c) = coupling.col(static_cast<Eigen::Index>(block[c]));

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++rank;
  }

  std::vector<DarkState> out;
  for (Eigen::Index c = rank; c < k; ++c) {
    DarkState d;
    d.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ground_count));
    const Eigen::VectorXcd v = svd.matrixV().col(c);
    for (Eigen::Index r = 0; r < k; ++r) d.amplitudes(static_cast<Eigen::Index>(block[r])) = v(r);
    d.block = block;
    d.residual = scale > 0.0 ? (coupling * d.amplitudes).norm() / scale : 0.0;
    d.raman_detuning = raman;
    out.push_back(std::move(d));
  }
  return out;
}

bool contains(const std::vector<std::size_t>& block, std::size_t i) {
  return std::find(block.begin(), block.end(), i) != block.end();
}

}  // namespace

CouplingOperator build_coupling(const LevelSet& levels, const BichromaticField& field) {
  field.validate();
  const AtomSpec& atom = levels.atom;
  for (const FieldComponent* c : {&field.component1, &field.component2}) {
    if (c->target_ground_F != atom.lower_ground_F() && c->target_ground_F != atom.upper_ground_F()) {
      throw InvalidArgument("field targets ground F = " + c->target_ground_F.str() +
                            ", which this atom does not have");
    }
  }

  CouplingOperator op;
  op.matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(levels.excited_count()),
                                     static_cast<Eigen::Index>(levels.ground_count()));
  for (std::size_t gi = 0; gi < levels.ground_count(); ++gi) {
    const Level& g = levels.ground_levels[gi];
    const FieldComponent& comp = field.for_ground_F(g.F);
    for (std::size_t ei = 0; ei < levels.excited_count(); ++ei) {
      const Level& e = levels.excited_levels[ei];
      const int q = (e.m - g.m).twice() / 2;
      if (q != -1 && q != 1) continue;  // no pi light along z
      const cplx amp = comp.polarization.component(q);
      if (amp == cplx(0.0, 0.0)) continue;
      const double w = dipole_weight(g.F, g.m, e.F, e.m, q, atom.nuclear_spin, atom.ground_J(),
                                     atom.excited_J());
      op.matrix(static_cast<Eigen::Index>(ei), static_cast<Eigen::Index>(gi)) =
          comp.rabi_scale * amp * w;
    }
  }
  return op;
}

RWAHamiltonian rwa_hamiltonian(const LevelSet& levels, const BichromaticField& field) {
  const CouplingOperator c = build_coupling(levels, field);
  const auto ng = static_cast<Eigen::Index>(levels.ground_count());
  const auto ne = static_cast<Eigen::Index>(levels.excited_count());

  RWAHamiltonian h;
  h.matrix = Eigen::MatrixXcd::Zero(ng + ne, ng + ne);
  for (Eigen::Index g = 0; g < ng; ++g) {
    h.matrix(g, g) = kTwoPi * ground_frame_energy(levels, field, levels.ground_levels[g]);
  }
  for (Eigen::Index e = 0; e < ne; ++e) {
    h.matrix(ng + e, ng + e) = kTwoPi * excited_frame_energy(field, levels.excited_levels[e]);
  }
  h.matrix.block(ng, 0, ne, ng) = c.matrix;
  h.matrix.block(0, ng, ng, ne) = c.matrix.adjoint();
  h.frame_note =
      "upper ground F at its Zeeman shift; lower ground F shifted by the Raman detuning; "
      "excited levels at minus the component-1 optical detuning";
  return h;
}

double pair_raman_detuning(const LevelSet& levels, const BichromaticField& field,
                           const LambdaPair& pair) {
  require_pair(levels, pair);
  const Level& low = levels.ground_levels[*levels.ground_index(levels.atom.lower_ground_F(), pair.m_lower)];
  const Level& up = levels.ground_levels[*levels.ground_index(levels.atom.upper_ground_F(), pair.m_upper)];
  return up.zeeman_hz - low.zeeman_hz -
         (field.component2.optical_detuning - field.component1.optical_detuning);
}

SchemeReport stationary_dark_states(const LevelSet& levels, const BichromaticField& field,
                                    std::optional<LambdaPair> pair) {
  BichromaticField tuned = field;
  if (pair) tuned.raman_detuning = pair_raman_detuning(levels, field, *pair);

  const CouplingOperator c = build_coupling(levels, tuned);
  const double scale = spectral_norm(c.matrix);

  SchemeReport report;
  std::optional<std::size_t> low, up;
  if (pair) {
    low = levels.ground_index(levels.atom.lower_ground_F(), pair->m_lower);
    up = levels.ground_index(levels.atom.upper_ground_F(), pair->m_upper);
    report.pairs.push_back({*pair, tuned.raman_detuning, 0});
  }

  for (const auto& block : degenerate_blocks(levels, tuned)) {
    auto states = block_null_space(c.matrix, block, scale, levels.ground_count(),
                                   tuned.raman_detuning);
    if (pair && contains(block, *low) && contains(block, *up)) {
      report.pairs.back().dark_count += states.size();
    }
    for (auto& s : states) report.dark_states.push_back(std::move(s));
  }
  report.trap_states = trap_states(levels, tuned);
  return report;
}

SchemeReport dark_state_census(const LevelSet& levels, const BichromaticField& field,
                               std::span<const LambdaPair> pairs) {
  SchemeReport census;
  census.trap_states = trap_states(levels, field);
  for (const LambdaPair& pair : pairs) {
    SchemeReport one = stationary_dark_states(levels, field, pair);
    const std::size_t low = *levels.ground_index(levels.atom.lower_ground_F(), pair.m_lower);
    const std::size_t up = *levels.ground_index(levels.atom.upper_ground_F(), pair.m_upper);
    for (auto& s : one.dark_states) {
      if (!contains(s.block, low) || !contains(s.block, up)) continue;
      const bool seen = std::any_of(census.dark_states.begin(), census.dark_states.end(),
                                    [&](const DarkState& d) {
                                      return d.block == s.block &&
                                             d.raman_detuning == s.raman_detuning &&
                                             std::abs(d.amplitudes.dot(s.amplitudes)) > 1.0 - 1e-9;
                                    });
      if (!seen) census.dark_states.push_back(std::move(s));
    }
    census.pairs.push_back(one.pairs.front());
  }
  return census;
}

std::vector<LambdaPair> clock_pairs(const AtomSpec& atom) {
  std::vector<LambdaPair> out;
  const HalfInt lower = atom.lower_ground_F();
  for (int tm = -lower.twice(); tm <= lower.twice(); tm += 2) {
    const HalfInt m = HalfInt::from_twice(tm);
    out.push_back({m, -m});
  }
  return out;
}

std::vector<LambdaPair> all_pairs(const AtomSpec& atom) {
  std::vector<LambdaPair> out;
  const HalfInt lower = atom.lower_ground_F(), upper = atom.upper_ground_F();
  for (int tl = -lower.twice(); tl <= lower.twice(); tl += 2) {
    for (int tu = -upper.twice(); tu <= upper.twice(); tu += 2) {
      if (std::abs(tu - tl) <= 4) out.push_back({HalfInt::from_twice(tl), HalfInt::from_twice(tu)});
    }
  }
  return out;
}

Eigen::VectorXcd construct_dark_pm(const LevelSet& levels, const BichromaticField& field,
                                   int sign) {
  const AtomSpec& atom = levels.atom;
  if (atom.nuclear_spin != half(3) || levels.excited_F != HalfInt(1)) {
    throw InvalidArgument("the closed-form dark states need I = 3/2 and F_e = 1");
  }
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");

  // |1, -sign> reaches |e, 0> with q = +sign, |2, +sign> with q = -sign.
  const FieldComponent& to_lower = field.for_ground_F(1);
  const FieldComponent& to_upper = field.for_ground_F(2);
  const HalfInt I = atom.nuclear_spin, J = atom.ground_J(), Je = atom.excited_J();
  const cplx lower_leg = to_lower.rabi_scale * to_lower.polarization.component(sign) *
                         dipole_weight(1, -sign, 1, 0, sign, I, J, Je);
  const cplx upper_leg = to_upper.rabi_scale * to_upper.polarization.component(-sign) *
                         dipole_weight(2, sign, 1, 0, -sign, I, J, Je);
  if (std::abs(upper_leg) == 0.0) {
    throw DegenerateInput("the F_g=2 leg of the Lambda system has zero amplitude");
  }

  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(levels.ground_count()));
  v(static_cast<Eigen::Index>(*levels.ground_index(1, -sign))) = 1.0;
  v(static_cast<Eigen::Index>(*levels.ground_index(2, sign))) = -lower_leg / upper_leg;
  return v / v.norm();
}

std::vector<Level> trap_states(const LevelSet& levels, const BichromaticField& field) {
  const CouplingOperator c = build_coupling(levels, field);
  std::vector<Level> out;
  for (Eigen::Index g = 0; g < c.matrix.cols(); ++g) {
    if ((c.matrix.col(g).array() == cplx(0.0, 0.0)).all()) {
      out.push_back(levels.ground_levels[static_cast<std::size_t>(g)]);
    }
  }
  return out;
}

cplx raman_amplitude(const LevelSet& levels, const BichromaticField& field, HalfInt m_lower,
                     HalfInt m_upper) {
  const LambdaPair pair{m_lower, m_upper};
  require_pair(levels, pair);
  const auto low = static_cast<Eigen::Index>(*levels.ground_index(levels.atom.lower_ground_F(), m_lower));
  const auto up = static_cast<Eigen::Index>(*levels.ground_index(levels.atom.upper_ground_F(), m_upper));
  const CouplingOperator c = build_coupling(levels, field);

  cplx sum{0.0, 0.0};
  for (Eigen::Index e = 0; e < c.matrix.rows(); ++e) {
    const cplx product = std::conj(c.matrix(e, up)) * c.matrix(e, low);
    if (product == cplx(0.0, 0.0)) continue;
    const double detuning =
        -kTwoPi * excited_frame_energy(field, levels.excited_levels[static_cast<std::size_t>(e)]);
    if (detuning == 0.0) {
      throw SingularityError("one-photon detuning of an intermediate level is zero");
    }
    sum += product / detuning;
  }
  return sum;
}

std::string format_report(const SchemeReport& report, const LevelSet& levels) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  auto label = [&](std::size_t gi) {
    const Level& l = levels.ground_levels[gi];
    return "|" + l.F.str() + "," + l.m.str() + ">";
  };

  out << "atom " << levels.atom.name << "\n";
  out << "excited_F " << levels.excited_F.str() << "\n";
  out << "B_gauss " << num(levels.B_gauss) << "\n";
  out << "dark_states " << report.dark_states.size() << "\n";
  out << "trap_states " << report.trap_states.size() << "\n";
  for (const PairFlag& p : report.pairs) {
    out << "pair " << p.pair.m_lower.str() << " " << p.pair.m_upper.str() << " delta_R_hz "
        << num(p.raman_detuning) << " dark " << p.dark_count << "\n";
  }
  for (std::size_t k = 0; k < report.dark_states.size(); ++k) {
    const DarkState& d = report.dark_states[k];
    out << "dark " << k << " delta_R_hz " << num(d.raman_detuning) << " residual "
        << num(d.residual) << "\n";
    for (std::size_t gi : d.block) {
      const cplx a = d.amplitudes(static_cast<Eigen::Index>(gi));
      if (std::abs(a) == 0.0) continue;
      out << "  " << label(gi) << " " << num(a.real()) << " " << num(a.imag()) << "\n";
    }
  }
  for (const Level& t : report.trap_states) {
    out << "trap |" << t.F.str() << "," << t.m.str() << ">\n";
  }
  return out.str();
}

}  // namespace cpt
