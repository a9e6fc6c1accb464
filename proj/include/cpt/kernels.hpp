#pragma once

// Complex inner-loop kernels used by the dense solver and the time
// integrator. A scalar reference implementation always exists; an AVX2+FMA
// variant is picked at runtime when the CPU supports it. The environment
// variable CPT_KERNELS=scalar forces the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace cpt::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;
  /// y[i] += a * x[i]
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  /// y = A x for a row-major rows x cols matrix.
  void (*gemv)(const cplx* A, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
  /// sum_i x[i] * y[i] (no conjugation)
  cplx (*dotu)(const cplx* x, const cplx* y, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the binary or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available();

/// Table used by the library; chosen once on first use.
const KernelTable& active();
/// Switch the active table by name ("scalar", "avx2"); false if unavailable.
bool select(std::string_view name);

inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void gemv(std::span<const cplx> A, std::size_t rows, std::size_t cols,
                 std::span<const cplx> x, std::span<cplx> y) {
  active().gemv(A.data(), rows, cols, x.data(), y.data());
}

inline cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dotu(x.data(), y.data(), x.size());
}

}  // namespace cpt::kernels
