#pragma once

#include "cpt/kernels.hpp"

namespace cpt::kernels::detail {

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n);
void gemv_scalar(const cplx* A, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
cplx dotu_scalar(const cplx* x, const cplx* y, std::size_t n);

#if defined(CPT_HAVE_AVX2_KERNELS)
void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n);
void gemv_avx2(const cplx* A, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
cplx dotu_avx2(const cplx* x, const cplx* y, std::size_t n);
#endif

}  // namespace cpt::kernels::detail
