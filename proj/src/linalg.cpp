#include "cpt/linalg.hpp"

#include <cmath>
#include <span>
#include <string>

#include "cpt/errors.hpp"
#include "cpt/kernels.hpp"

namespace cpt::linalg {

double max_abs(const RowMatrix& a) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i]));
  return m;
}

DenseLu::DenseLu(RowMatrix a, double singular_tolerance) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) throw InvalidArgument("LU needs a square matrix");
  const std::size_t n = size();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  const double scale = max_abs(lu_);
  if (n > 0 && scale == 0.0) throw SingularityError("matrix is identically zero");
  min_pivot_ratio_ = 1.0;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    min_pivot_ratio_ = std::min(min_pivot_ratio_, best / scale);
    if (best <= singular_tolerance * scale) {
      throw SingularityError("matrix is singular to working precision (column " +
                             std::to_string(k) + ")");
    }
    if (p != k) {
      lu_.row(k).swap(lu_.row(p));
      std::swap(perm_[k], perm_[p]);
    }

    const cplx pivot = lu_(k, k);
    const std::size_t tail = n - k - 1;
    std::span<const cplx> pivot_row(&lu_(k, 0) + k + 1, tail);
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx& lead = lu_(i, k);
      if (lead == cplx(0.0, 0.0)) continue;
      lead /= pivot;
      kernels::axpy(-lead, pivot_row, std::span<cplx>(&lu_(i, 0) + k + 1, tail));
    }
  }
}

Vector DenseLu::solve(const Vector& b) const {
  const std::size_t n = size();
  if (static_cast<std::size_t>(b.size()) != n) throw InvalidArgument("rhs has the wrong size");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    x[i] -= kernels::dotu({&lu_(i, 0), i}, {x.data(), i});
  }
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t tail = n - i - 1;
    x[i] -= kernels::dotu({&lu_(i, 0) + i + 1, tail}, {x.data() + i + 1, tail});
    x[i] /= lu_(i, i);
  }
  return x;
}

Vector multiply(const RowMatrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw InvalidArgument("matrix-vector size mismatch");
  Vector y(a.rows());
  kernels::gemv({a.data(), static_cast<std::size_t>(a.size())}, a.rows(), a.cols(),
                {x.data(), static_cast<std::size_t>(x.size())},
                {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

Vector solve(const RowMatrix& a, const Vector& b, double singular_tolerance) {
  const DenseLu lu(a, singular_tolerance);
  Vector x = lu.solve(b);
  const Vector residual = b - multiply(a, x);
  x += lu.solve(residual);
  return x;
}

}  // namespace cpt::linalg
