#include "cpt/structure.hpp"

#include <cmath>
#include <numbers>

#include "cpt/errors.hpp"

namespace cpt {

void AtomSpec::validate() const {
  if (!(hfs_ground_hz > 0.0)) throw InvalidArgument("ground hyperfine splitting must be > 0");
  if (!(hfs_excited_hz > 0.0)) throw InvalidArgument("excited hyperfine splitting must be > 0");
  if (!(gamma_natural > 0.0)) throw InvalidArgument("natural linewidth must be > 0");
  if (nuclear_spin.twice() < 1) throw InvalidArgument("nuclear spin must be >= 1/2");
}

AtomSpec rb87() {
  AtomSpec a;
  a.name = "rb87";
  a.nuclear_spin = half(3);
  a.gJ_ground = 2.00233113;
  a.gJ_excited = 0.666;
  a.gI = -0.0009951414;
  a.hfs_ground_hz = 6.834682610904e9;
  a.hfs_excited_hz = 812.0e6;
  a.gamma_natural = 2.0 * std::numbers::pi * 5.746e6;
  a.doppler_fwhm_hz = 400.0e6;
  return a;
}

AtomSpec cs133() {
  AtomSpec a;
  a.name = "cs133";
  a.nuclear_spin = half(7);
  a.gJ_ground = 2.00254032;
  a.gJ_excited = 0.665;
  a.gI = -0.00039885395;
  a.hfs_ground_hz = 9.192631770e9;
  a.hfs_excited_hz = 1167.68e6;
  a.gamma_natural = 2.0 * std::numbers::pi * 4.575e6;
  a.doppler_fwhm_hz = 370.0e6;
  return a;
}

AtomSpec atom_preset(std::string_view name) {
  if (name == "rb87") return rb87();
  if (name == "cs133") return cs133();
  throw InvalidArgument("unknown atom preset '" + std::string(name) + "'");
}

std::optional<std::size_t> LevelSet::ground_index(HalfInt F, HalfInt m) const {
  for (std::size_t i = 0; i < ground_levels.size(); ++i) {
    if (ground_levels[i].F == F && ground_levels[i].m == m) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> LevelSet::excited_index(HalfInt m) const {
  for (std::size_t i = 0; i < excited_levels.size(); ++i) {
    if (excited_levels[i].m == m) return i;
  }
  return std::nullopt;
}

double lande_g(HalfInt F, Manifold manifold, const AtomSpec& atom) {
  const HalfInt J = manifold == Manifold::ground ? atom.ground_J() : atom.excited_J();
  if (!triangle(J, atom.nuclear_spin, F)) {
    throw InvalidArgument("F = " + F.str() + " is not a hyperfine level of this manifold");
  }
  const double f = F.value(), i = atom.nuclear_spin.value(), j = J.value();
  if (F.twice() == 0) return 0.0;
  const double gJ = manifold == Manifold::ground ? atom.gJ_ground : atom.gJ_excited;
  const double ff = f * (f + 1.0), ii = i * (i + 1.0), jj = j * (j + 1.0);
  return gJ * (ff - ii + jj) / (2.0 * ff) + atom.gI * (ff + ii - jj) / (2.0 * ff);
}

double breit_rabi_shift(const AtomSpec& atom, HalfInt m, Branch branch, double B_gauss) {
  const HalfInt upper = atom.upper_ground_F();
  const bool stretched = std::abs(m.twice()) == upper.twice();
  if (!is_projection_of(m, upper) || (stretched && branch == Branch::lower)) {
    throw InvalidArgument("m = " + m.str() + " does not exist on the requested branch");
  }

  const double two_i_plus_one = atom.nuclear_spin.twice() + 1.0;
  const double hfs = atom.hfs_ground_hz;
  const double muB = atom.bohr_hz_per_gauss * B_gauss;
  const double x = (atom.gJ_ground - atom.gI) * muB / hfs;
  const double mv = m.value();
  const double nuclear = atom.gI * muB * mv;

  if (stretched) {
    // sqrt(1 +- 2x + x^2) taken as (1 +- x) keeps the analytic branch.
    const double s = m.twice() > 0 ? 1.0 : -1.0;
    return nuclear + 0.5 * hfs * s * x;
  }
  // sqrt(1 + u) - 1 written without cancellation.
  const double u = 4.0 * mv * x / two_i_plus_one + x * x;
  const double root_minus_one = u / (std::sqrt(1.0 + u) + 1.0);
  return branch == Branch::upper ? nuclear + 0.5 * hfs * root_minus_one
                                 : nuclear - 0.5 * hfs * root_minus_one;
}

double breit_rabi_energy(const AtomSpec& atom, HalfInt m, Branch branch, double B_gauss) {
  const double shift = breit_rabi_shift(atom, m, branch, B_gauss);
  const double two_i_plus_one = atom.nuclear_spin.twice() + 1.0;
  const double hfs = atom.hfs_ground_hz;
  const double zero_field = branch == Branch::upper
                                ? hfs * atom.nuclear_spin.value() / two_i_plus_one
                                : -hfs * (atom.nuclear_spin.value() + 1.0) / two_i_plus_one;
  return zero_field + shift;
}

double excited_hyperfine_offset(const AtomSpec& atom, HalfInt F) {
  const HalfInt I = atom.nuclear_spin;
  const double two_i_plus_one = I.twice() + 1.0;
  if (F == I + half(1)) return atom.hfs_excited_hz * I.value() / two_i_plus_one;
  if (F == I - half(1)) return -atom.hfs_excited_hz * (I.value() + 1.0) / two_i_plus_one;
  throw InvalidArgument("excited F = " + F.str() + " is not a D1 hyperfine level");
}

LevelSet build_level_set(const AtomSpec& atom, HalfInt excited_F, double B_gauss) {
  atom.validate();
  LevelSet set;
  set.atom = atom;
  set.B_gauss = B_gauss;
  set.excited_F = excited_F;

  const double excited_offset = excited_hyperfine_offset(atom, excited_F);
  for (HalfInt F : {atom.lower_ground_F(), atom.upper_ground_F()}) {
    const Branch branch = F == atom.upper_ground_F() ? Branch::upper : Branch::lower;
    for (int tm = -F.twice(); tm <= F.twice(); tm += 2) {
      const HalfInt m = HalfInt::from_twice(tm);
      set.ground_levels.push_back({Manifold::ground, F, m,
                                   breit_rabi_energy(atom, m, branch, B_gauss),
                                   breit_rabi_shift(atom, m, branch, B_gauss)});
    }
  }

  const double slope = lande_g(excited_F, Manifold::excited, atom) * atom.bohr_hz_per_gauss;
  for (int tm = -excited_F.twice(); tm <= excited_F.twice(); tm += 2) {
    const HalfInt m = HalfInt::from_twice(tm);
    const double shift = slope * m.value() * B_gauss;
    set.excited_levels.push_back({Manifold::excited, excited_F, m, excited_offset + shift, shift});
  }
  return set;
}

double pair_resonance_frequency(const AtomSpec& atom, HalfInt m_lower, HalfInt m_upper,
                                double B_gauss) {
  if (!is_projection_of(m_lower, atom.lower_ground_F())) {
    throw InvalidArgument("m = " + m_lower.str() + " is not a sublevel of the lower ground F");
  }
  return atom.hfs_ground_hz + breit_rabi_shift(atom, m_upper, Branch::upper, B_gauss) -
         breit_rabi_shift(atom, m_lower, Branch::lower, B_gauss);
}

}  // namespace cpt
