// gfunction.hpp — Analytic spectral function G(x;0): three-term recurrence,
// series evaluation with pole bookkeeping, and root location between poles.
//
// x is the scaled displaced energy; G has poles at the nonnegative integers
// and its roots, mapped back through E = prefactor * (x - g_tilde^2), are the
// sector eigenvalues. The series normalization is immaterial for roots.

#pragma once

#include <cstddef>
#include <vector>

#include "qrm/model.hpp"

namespace qrm::gfunction {

// Grid points closer than this to an integer pole carry no usable sign.
inline constexpr double kPoleExclusion = 1e-6;

struct RecurrenceCoefficients {
    std::vector<double> K;      // K[j] * 2^exp2[j] is the true coefficient
    std::vector<int> exp2;      // per-term rescale exponent
    std::vector<double> f;      // f[j], length jmax
};

// K_0 = 1, K_1 = f_0(x), j K_j = K_{j-1} f_{j-1} - K_{j-2}, with
// f_j(x) = (j - x + 4 g~^2 - w0~^2/(j-x)) / (2 g~).
// Throws on g~ = 0 or x within 1e-12 of a nonnegative integer <= jmax.
RecurrenceCoefficients recurrence_coefficients(const model::ScaledParams& scaled, double x,
                                               std::size_t jmax);

struct GFunctionSeries {
    model::ScaledParams scaled;
    double x;
    std::size_t terms_used;
    double value;            // G(x;0)
    double trunc_estimate;   // magnitude of last retained term
};

// Partial sum of sum_j K_j (1 - w0~/(j-x)) g~^j until the tail drops
// below tol; throws on pole hits or non-convergence within the term cap.
GFunctionSeries g_at_zero(const model::ScaledParams& scaled, double x, double tol);

struct RootReport {
    int interval;                      // pole pair (k, k+1); -1 = below first pole
    double lo, hi;                     // scanned open interval
    std::vector<double> roots;         // certified, ascending
    std::vector<double> unresolved;    // grid minima suspiciously close to zero
};

// Scans every pole gap (k, k+1) for 0 <= k < k_max plus the region below the
// first pole, brackets sign changes on a refinement grid and bisects each
// bracket to |dx| < tol.
std::vector<RootReport> find_roots(const model::ScaledParams& scaled, std::size_t k_max,
                                   double tol);

inline double to_lab_energy(const model::ScaledParams& s, double x) {
    return s.prefactor * (x - s.g_tilde * s.g_tilde);
}
inline double to_scaled_x(const model::ScaledParams& s, double lab_energy) {
    return lab_energy / s.prefactor + s.g_tilde * s.g_tilde;
}

}  // namespace qrm::gfunction
