#include "qrm/specialfn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qrm::specialfn {

namespace {
constexpr std::size_t kFactTable = 4096;

const std::vector<double>& factorial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kFactTable);
        t[0] = 0.0;
        long double acc = 0.0L;
        for (std::size_t i = 1; i < kFactTable; ++i) {
            acc += std::log(static_cast<long double>(i));
            t[i] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}
}  // namespace

double log_factorial(std::size_t n) {
    if (n < kFactTable) return factorial_table()[n];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double SignedLog::value() const {
    return sign * std::exp(log_abs);
}

namespace {

// Associated Laguerre L_m^{(d)}(z) as sign + log magnitude, exponent-rescaled.
SignedLog laguerre_log(std::size_t m, double d, double z) {
    if (m == 0) return {0.0, 1.0};
    double prev = 1.0;                      // L_0
    double cur = 1.0 + d - z;               // L_1
    double log_scale = 0.0;
    {
        for (std::size_t i = 1; i < m; ++i) {
            const double fi = static_cast<double>(i);
            double next = ((2.0 * fi + d + 1.0 - z) * cur - (fi + d) * prev) / (fi + 1.0);
            prev = cur;
            cur = next;
            const double mag = std::max(std::fabs(cur), std::fabs(prev));
            if (mag > 1e280) {
                cur *= 1e-280;
                prev *= 1e-280;
                log_scale += std::log(1e280);
            }
        }
    }
    if (cur == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    return {std::log(std::fabs(cur)) + log_scale, cur > 0.0 ? 1.0 : -1.0};
}

}  // namespace

SignedLog displaced_overlap_log(std::size_t n, std::size_t k, double alpha) {
    const std::size_t lo = std::min(n, k), hi = std::max(n, k);
    const std::size_t d = hi - lo;
    if (d > 0 && alpha == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};

    double sign = 1.0;
    if (n > k && d % 2 == 1) sign = -sign;
    if (alpha < 0.0 && d % 2 == 1) sign = -sign;

    SignedLog lag = laguerre_log(lo, static_cast<double>(d), alpha * alpha);
    if (lag.sign == 0.0) return lag;

    double log_abs = lag.log_abs + 0.5 * (log_factorial(lo) - log_factorial(hi));
    if (d > 0) log_abs += static_cast<double>(d) * std::log(std::fabs(alpha));
    return {log_abs, sign * lag.sign};
}

double displaced_overlap(std::size_t n, std::size_t k, double alpha) {
    return displaced_overlap_log(n, k, alpha).value();
}

OverlapTable displaced_overlap_table(std::size_t n, std::size_t kmax, double alpha) {
    OverlapTable t{alpha, n, {}};
    t.amplitudes.resize(kmax);
    for (std::size_t k = 0; k < kmax; ++k) t.amplitudes[k] = displaced_overlap(n, k, alpha);
    return t;
}

double hermite_poly(unsigned n, double x) {
    double prev = 1.0;
    double cur = 2.0 * x;
    if (n == 0) return prev;
    for (unsigned i = 1; i < n; ++i) {
        const double next = 2.0 * x * cur - 2.0 * static_cast<double>(i) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_scaled(unsigned n, double x) {
    double prev = 1.0;                 // H_0 / sqrt(2^0 0!)
    double cur = x * std::sqrt(2.0);   // H_1 / sqrt(2^1 1!)
    if (n == 0) return prev;
    for (unsigned i = 1; i < n; ++i) {
        const double fi = static_cast<double>(i);
        const double next =
            x * std::sqrt(2.0 / (fi + 1.0)) * cur - std::sqrt(fi / (fi + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {
bool nonpositive_integer(double v, double* rounded) {
    const double r = std::nearbyint(v);
    if (r <= 0.0 && std::fabs(v - r) < 1e-9) {
        *rounded = r;
        return true;
    }
    return false;
}
}  // namespace

double gauss_2f1(double a, double b, double c, double z) {
    double ra = 0.0, rb = 0.0, rc = 0.0;
    const bool a_term = nonpositive_integer(a, &ra);
    const bool b_term = nonpositive_integer(b, &rb);
    const bool c_bad = nonpositive_integer(c, &rc);

    if (z == 0.0) {
        if (c_bad) throw std::domain_error("2F1: c is a nonpositive integer");
        return 1.0;
    }

    if (a_term || b_term) {
        const std::size_t nterms =
            static_cast<std::size_t>(a_term && b_term ? std::min(-ra, -rb) : (a_term ? -ra : -rb));
        if (c_bad && -rc < static_cast<double>(nterms))
            throw std::domain_error("2F1: c pole inside terminating series");
        double term = 1.0, sum = 1.0;
        for (std::size_t j = 0; j < nterms; ++j) {
            const double fj = static_cast<double>(j);
            term *= (a + fj) * (b + fj) * z / ((c + fj) * (fj + 1.0));
            sum += term;
        }
        return sum;
    }

    if (c_bad) throw std::domain_error("2F1: c is a nonpositive integer");
    if (std::fabs(z) >= 1.0)
        throw std::domain_error("2F1: non-terminating series requires |z| < 1");

    double term = 1.0, sum = 1.0;
    for (std::size_t j = 0; j < 200000; ++j) {
        const double fj = static_cast<double>(j);
        term *= (a + fj) * (b + fj) * z / ((c + fj) * (fj + 1.0));
        sum += term;
        if (std::fabs(term) < 1e-15 * std::fabs(sum) + 1e-300) return sum;
    }
    throw std::domain_error("2F1: series failed to converge");
}

}  // namespace qrm::specialfn
