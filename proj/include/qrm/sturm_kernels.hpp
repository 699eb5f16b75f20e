// sturm_kernels.hpp — Sturm-sequence negcount kernels, scalar reference plus
// SIMD variants batched over shifts and selected at runtime.
//
// For a symmetric tridiagonal matrix T (diagonal d, squared off-diagonal e2)
// the kernel evaluates, for each shift x, the number of eigenvalues of T
// strictly below x via the sign count of the recurrence
//     q_0 = d_0 - x,   q_i = d_i - x - e2_{i-1} / q_i-1.
// The recurrence is serial in i, so the data-parallel axis is the shift batch:
// one pass over the matrix resolves 4 (AVX2) or 8 (AVX512) shifts per vector,
// two vectors interleaved to hide division latency.
//
// All variants perform the identical floating-point operations in the same
// order, so their counts agree bit-for-bit; tests assert this equivalence.

#pragma once

#include <cstddef>
#include <cstdint>

namespace qrm::kernels {

using SturmBatchFn = void (*)(const double* diag, const double* off2, std::size_t n,
                              const double* shifts, std::int64_t* counts,
                              std::size_t nshift, double pivmin);

void sturm_count_scalar(const double* diag, const double* off2, std::size_t n,
                        const double* shifts, std::int64_t* counts,
                        std::size_t nshift, double pivmin);

#if defined(__x86_64__) || defined(_M_X64)
void sturm_count_avx2(const double* diag, const double* off2, std::size_t n,
                      const double* shifts, std::int64_t* counts,
                      std::size_t nshift, double pivmin);
void sturm_count_avx512(const double* diag, const double* off2, std::size_t n,
                        const double* shifts, std::int64_t* counts,
                        std::size_t nshift, double pivmin);
#endif

// Best kernel the running CPU supports.
SturmBatchFn select_kernel();
const char* selected_kernel_name();

// Pivot guard for the division; proportional to the largest e2 entry.
double pivmin_for(const double* off2, std::size_t n);

}  // namespace qrm::kernels
