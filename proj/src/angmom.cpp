#include "cpt/angmom.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cpt/errors.hpp"

namespace cpt {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// A real number held as sign * sqrt(square) with an exact rational square.
// Products of Wigner symbols stay exact until to_double().
struct SignedRoot {
  int sign = 0;
  cpp_rational square = 0;

  SignedRoot operator*(const SignedRoot& o) const {
    SignedRoot r;
    r.sign = sign * o.sign;
    r.square = r.sign == 0 ? cpp_rational(0) : square * o.square;
    return r;
  }

  double to_double() const {
    if (sign == 0) return 0.0;
    return sign * std::sqrt(square.convert_to<double>());
  }
};

const cpp_int& factorial(int n) {
  static std::deque<cpp_int> table{1};
  static std::mutex guard;
  if (n < 0) throw InvalidArgument("factorial of a negative number");
  std::lock_guard lock(guard);
  while (static_cast<int>(table.size()) <= n) {
    table.push_back(table.back() * static_cast<long>(table.size()));
  }
  return table[static_cast<std::size_t>(n)];
}

void require_well_formed(HalfInt j, HalfInt m) {
  if (j.twice() < 0) throw InvalidArgument("negative angular momentum " + j.str());
  if ((j.twice() - m.twice()) % 2 != 0) {
    throw InvalidArgument("projection " + m.str() + " has the wrong parity for j = " + j.str());
  }
}

void require_well_formed(HalfInt j) {
  if (j.twice() < 0) throw InvalidArgument("negative angular momentum " + j.str());
}

// Integer value of a sum of HalfInts that is known to be integral.
int whole(HalfInt h) { return h.twice() / 2; }

int parity_sign(int exponent) { return (exponent % 2 == 0) ? 1 : -1; }

// Triangle coefficient (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!.
cpp_rational delta(HalfInt a, HalfInt b, HalfInt c) {
  return cpp_rational(factorial(whole(a + b - c)) * factorial(whole(a - b + c)) *
                          factorial(whole(-a + b + c)),
                      factorial(whole(a + b + c) + 1));
}

SignedRoot from_sum(const cpp_rational& sum, const cpp_rational& prefactor_square, int phase) {
  SignedRoot r;
  if (sum == 0) return r;
  r.sign = phase * (sum > 0 ? 1 : -1);
  r.square = sum * sum * prefactor_square;
  return r;
}

SignedRoot exact3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  require_well_formed(j1, m1);
  require_well_formed(j2, m2);
  require_well_formed(j3, m3);
  if ((m1 + m2 + m3).twice() != 0) return {};
  if (!triangle(j1, j2, j3)) return {};
  if (!is_projection_of(m1, j1) || !is_projection_of(m2, j2) || !is_projection_of(m3, j3)) {
    return {};
  }

  const int kmin = std::max({0, whole(j2 - j3 - m1), whole(j1 - j3 + m2)});
  const int kmax = std::min({whole(j1 + j2 - j3), whole(j1 - m1), whole(j2 + m2)});
  cpp_rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    cpp_int den = factorial(k) * factorial(whole(j3 - j2 + m1) + k) *
                  factorial(whole(j3 - j1 - m2) + k) * factorial(whole(j1 + j2 - j3) - k) *
                  factorial(whole(j1 - m1) - k) * factorial(whole(j2 + m2) - k);
    sum += cpp_rational(parity_sign(k), den);
  }

  cpp_rational pre = delta(j1, j2, j3);
  pre *= factorial(whole(j1 + m1)) * factorial(whole(j1 - m1)) * factorial(whole(j2 + m2)) *
         factorial(whole(j2 - m2)) * factorial(whole(j3 + m3)) * factorial(whole(j3 - m3));
  return from_sum(sum, pre, parity_sign(whole(j1 - j2 - m3)));
}

SignedRoot exact6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  for (HalfInt j : {j1, j2, j3, j4, j5, j6}) require_well_formed(j);
  if (!triangle(j1, j2, j3) || !triangle(j1, j5, j6) || !triangle(j4, j2, j6) ||
      !triangle(j4, j5, j3)) {
    return {};
  }

  const int a1 = whole(j1 + j2 + j3);
  const int a2 = whole(j1 + j5 + j6);
  const int a3 = whole(j4 + j2 + j6);
  const int a4 = whole(j4 + j5 + j3);
  const int b1 = whole(j1 + j2 + j4 + j5);
  const int b2 = whole(j2 + j3 + j5 + j6);
  const int b3 = whole(j3 + j1 + j6 + j4);

  const int kmin = std::max({a1, a2, a3, a4});
  const int kmax = std::min({b1, b2, b3});
  cpp_rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    cpp_int den = factorial(k - a1) * factorial(k - a2) * factorial(k - a3) * factorial(k - a4) *
                  factorial(b1 - k) * factorial(b2 - k) * factorial(b3 - k);
    sum += cpp_rational(factorial(k + 1) * parity_sign(k), den);
  }

  cpp_rational pre = delta(j1, j2, j3) * delta(j1, j5, j6) * delta(j4, j2, j6) * delta(j4, j5, j3);
  return from_sum(sum, pre, 1);
}

SignedRoot exact_cg(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  require_well_formed(J, M);
  if ((m1 + m2).twice() != M.twice()) {
    // Still validate the remaining arguments so malformed input is reported.
    require_well_formed(j1, m1);
    require_well_formed(j2, m2);
    return {};
  }
  SignedRoot r = exact3j(j1, j2, J, m1, m2, -M);
  if (r.sign == 0) return r;
  r.sign *= parity_sign(whole(j1 - j2 + M));
  r.square *= J.twice() + 1;
  return r;
}

}  // namespace

std::string HalfInt::str() const {
  if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

bool triangle(HalfInt a, HalfInt b, HalfInt c) {
  if ((a + b + c).twice() % 2 != 0) return false;
  return c.twice() >= std::abs(a.twice() - b.twice()) && c.twice() <= (a + b).twice();
}

double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  return exact3j(j1, j2, j3, m1, m2, m3).to_double();
}

double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  return exact6j(j1, j2, j3, j4, j5, j6).to_double();
}

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  return exact_cg(j1, m1, j2, m2, J, M).to_double();
}

double dipole_weight(HalfInt Fg, HalfInt mg, HalfInt Fe, HalfInt me, int q, HalfInt I,
                     HalfInt Jg, HalfInt Je) {
  if (q < -1 || q > 1) throw InvalidArgument("spherical component q must be -1, 0 or +1");
  if (!triangle(Jg, I, Fg) || !triangle(Je, I, Fe)) {
    throw InvalidArgument("hyperfine levels F_g=" + Fg.str() + ", F_e=" + Fe.str() +
                          " are inconsistent with I=" + I.str());
  }
  require_well_formed(Fg, mg);
  require_well_formed(Fe, me);
  if (!is_projection_of(mg, Fg) || !is_projection_of(me, Fe)) return 0.0;

  SignedRoot cg = exact_cg(Fg, mg, 1, q, Fe, me);
  if (cg.sign == 0) return 0.0;
  SignedRoot hyperfine = exact6j(Je, Fe, I, Fg, Jg, 1);
  hyperfine.sign *= parity_sign(whole(Je + I + Fg + 1));
  hyperfine.square *= Fg.twice() + 1;
  return (cg * hyperfine).to_double();
}

}  // namespace cpt
