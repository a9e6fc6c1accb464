#pragma once

// Dense complex LU with partial pivoting on row-major storage. The row
// updates run through cpt::kernels, so this is where the SIMD variants pay.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace cpt::linalg {

using cplx = std::complex<double>;
using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;

class DenseLu {
 public:
  /// Factorizes a square matrix. A pivot smaller than
  /// singular_tolerance * max|A_ij| raises SingularityError.
  explicit DenseLu(RowMatrix a, double singular_tolerance = 1e-13);

  Vector solve(const Vector& b) const;
  std::size_t size() const { return static_cast<std::size_t>(lu_.rows()); }
  /// Smallest |pivot| / max|A_ij| seen during elimination.
  double min_pivot_ratio() const { return min_pivot_ratio_; }

 private:
  RowMatrix lu_;
  std::vector<std::size_t> perm_;
  double min_pivot_ratio_ = 0.0;
};

/// Solves A x = b with one step of iterative refinement.
Vector solve(const RowMatrix& a, const Vector& b, double singular_tolerance = 1e-13);

/// y = A x through the active kernel table.
Vector multiply(const RowMatrix& a, const Vector& x);

double max_abs(const RowMatrix& a);

}  // namespace cpt::linalg
