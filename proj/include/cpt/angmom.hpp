#pragma once

// Angular-momentum algebra for hyperfine/Zeeman dipole couplings.
//
// Wigner symbols are evaluated with the Racah factorial sums in exact
// rational arithmetic; a single square root is taken at the very end, so a
// symbol that vanishes by cancellation comes back as an exact 0.0.
// Phases follow Condon-Shortley.

#include <compare>
#include <string>

namespace cpt {

/// An angular-momentum quantum number (or projection) stored as twice its
/// value, so half-integers are exact.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int whole) : twice_(2 * whole) {}  // NOLINT(implicit)

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  /// Number of projections 2j+1.
  constexpr int multiplicity() const { return twice_ + 1; }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const;

 private:
  int twice_ = 0;
};

/// n/2 as a HalfInt, e.g. half(3) == 3/2.
constexpr HalfInt half(int n) { return HalfInt::from_twice(n); }

/// |2m| <= 2j and 2j, 2m of equal parity.
constexpr bool is_projection_of(HalfInt m, HalfInt j) {
  return j.twice() >= 0 && (j.twice() - m.twice()) % 2 == 0 &&
         m.twice() <= j.twice() && -m.twice() <= j.twice();
}

/// |a-b| <= c <= a+b with a+b+c integral.
bool triangle(HalfInt a, HalfInt b, HalfInt c);

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3).
///
/// Exactly 0 when a selection rule fails (triangle, m1+m2+m3 != 0,
/// |m| > j). Throws InvalidArgument for negative j or a j/m parity mismatch.
double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}; 0 when any triad fails the
/// triangle rule.
double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);

/// <j1 m1; j2 m2 | J M>.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

/// Matrix element <Fe me| d_q |Fg mg> for a J -> J' line with nuclear spin
/// I, in units of the fine-structure reduced element <Je||d||Jg> = 1:
///
///   <Fg mg; 1 q | Fe me> (-1)^(Je+I+Fg+1) sqrt(2Fg+1) {Je Fe I; Fg Jg 1}
///
/// Zero unless me = mg + q and |Fe - Fg| <= 1. With this normalization the
/// squared weights out of any excited sublevel sum to 1/(2Je+1).
double dipole_weight(HalfInt Fg, HalfInt mg, HalfInt Fe, HalfInt me, int q, HalfInt I,
                     HalfInt Jg, HalfInt Je);

}  // namespace cpt
