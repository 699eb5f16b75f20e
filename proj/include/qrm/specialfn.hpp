// specialfn.hpp — Self-contained special-function kernels: displaced-number
// overlaps, Hermite polynomials, restricted Gauss 2F1, log-factorials.

#pragma once

#include <cstddef>
#include <vector>

namespace qrm::specialfn {

// ln(n!), relative error <= 1e-12.
double log_factorial(std::size_t n);

// Sign plus log-magnitude, the internal currency for overlap sums whose
// factorials overflow near Fock index 1e4.
struct SignedLog {
    double log_abs;  // -inf encodes zero
    double sign;     // -1, 0, +1
    double value() const;
};

// Displacement amplitude kernel P(n,k,alpha): the overlap <k|D(alpha)|n>
// with the Gaussian prefactor exp(-alpha^2/2) stripped, for real alpha.
//   P(n,k,alpha) = eps * alpha^{|n-k|} * sqrt(min(n,k)!/max(n,k)!)
//                    * L_{min(n,k)}^{(|n-k|)}(alpha^2),
// eps = (-1)^{|n-k|} when n > k, else +1. The terminating confluent series
// of order min(n,k) is evaluated by its stable three-term recurrence.
double displaced_overlap(std::size_t n, std::size_t k, double alpha);
SignedLog displaced_overlap_log(std::size_t n, std::size_t k, double alpha);

// P(n, k, alpha) for k = 0..kmax-1 at fixed n.
struct OverlapTable {
    double alpha;
    std::size_t n;
    std::vector<double> amplitudes;
};
OverlapTable displaced_overlap_table(std::size_t n, std::size_t kmax, double alpha);

// Physicists' Hermite H_n(x) by the three-term recurrence.
double hermite_poly(unsigned n, double x);

// H_n(x) / sqrt(2^n n!), stable for large n.
double hermite_scaled(unsigned n, double x);

// Gauss 2F1 on the restricted domain this project needs: terminating series
// (a or b a nonpositive integer) for any z, otherwise |z| < 1 power series
// with relative tail < 1e-12. Everything else throws std::domain_error.
double gauss_2f1(double a, double b, double c, double z);

}  // namespace qrm::specialfn
