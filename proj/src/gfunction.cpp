#include "qrm/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qrm::gfunction {

namespace {

bool near_nonnegative_integer(double x, double radius) {
    const double r = std::nearbyint(x);
    return r >= 0.0 && std::fabs(x - r) < radius;
}

double f_coefficient(const model::ScaledParams& s, double x, double j) {
    const double jm = j - x;
    return (jm + 4.0 * s.g_tilde * s.g_tilde - s.omega0_tilde * s.omega0_tilde / jm) /
           (2.0 * s.g_tilde);
}

}  // namespace

RecurrenceCoefficients recurrence_coefficients(const model::ScaledParams& s, double x,
                                               std::size_t jmax) {
    if (!(s.g_tilde > 0.0)) throw std::invalid_argument("recurrence undefined for g~ = 0");
    if (near_nonnegative_integer(x, 1e-12) && std::nearbyint(x) <= static_cast<double>(jmax))
        throw std::invalid_argument("x sits on an integer pole of the recurrence");

    RecurrenceCoefficients rc;
    rc.K.resize(jmax + 1);
    rc.exp2.resize(jmax + 1, 0);
    rc.f.resize(jmax + 1);
    for (std::size_t j = 0; j <= jmax; ++j)
        rc.f[j] = f_coefficient(s, x, static_cast<double>(j));

    rc.K[0] = 1.0;
    if (jmax >= 1) rc.K[1] = rc.f[0];
    int scale = 0;  // exponent carried by the trailing pair K[j-1], K[j]
    for (std::size_t j = 2; j <= jmax; ++j) {
        // recurrence runs on rescaled values; dividing both inputs by the same
        // power of two only shifts the common exponent
        const double prev = std::ldexp(rc.K[j - 2], rc.exp2[j - 2] - scale);
        const double kj = (rc.K[j - 1] * rc.f[j - 1] - prev) / static_cast<double>(j);
        rc.K[j] = kj;
        rc.exp2[j] = scale;
        if (std::fabs(kj) > 0x1p+512) {
            int e;
            std::frexp(kj, &e);
            const int shift = e - 1;
            rc.K[j] = std::ldexp(rc.K[j], -shift);
            scale += shift;
            rc.exp2[j] = scale;
        }
    }
    return rc;
}

GFunctionSeries g_at_zero(const model::ScaledParams& s, double x, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (!(s.g_tilde > 0.0)) throw std::invalid_argument("G undefined for g~ = 0");
    if (near_nonnegative_integer(x, 1e-12))
        throw std::invalid_argument("x sits on an integer pole of G");

    const double lg2g = std::log2(s.g_tilde);
    const std::size_t cap = std::max<std::size_t>(
        64, static_cast<std::size_t>(4.0 * (std::max(0.0, x) + 10.0 * s.g_tilde * s.g_tilde + 16.0)));

    double k_prev = 1.0, k_cur = 0.0;
    int scale = 0;
    double sum = 0.0, comp = 0.0;  // Kahan
    double last_term = 0.0;
    std::size_t small_streak = 0;
    std::size_t terms = 0;

    auto add_term = [&](std::size_t j, double kj, int e2) {
        const double jm = static_cast<double>(j) - x;
        const double pole_factor = 1.0 - s.omega0_tilde / jm;
        const double term =
            kj * pole_factor * std::exp2(static_cast<double>(e2) + static_cast<double>(j) * lg2g);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        last_term = term;
        ++terms;
        if (std::fabs(term) < 0.25 * tol && static_cast<double>(j) > x)
            ++small_streak;
        else
            small_streak = 0;
    };

    add_term(0, 1.0, 0);
    k_cur = f_coefficient(s, x, 0.0);
    if (cap >= 1) add_term(1, k_cur, 0);

    for (std::size_t j = 2; j <= cap; ++j) {
        double next = (k_cur * f_coefficient(s, x, static_cast<double>(j - 1)) - k_prev) /
                      static_cast<double>(j);
        k_prev = k_cur;
        k_cur = next;
        if (std::fabs(k_cur) > 0x1p+512) {
            int e;
            std::frexp(k_cur, &e);
            const int shift = e - 1;
            k_cur = std::ldexp(k_cur, -shift);
            k_prev = std::ldexp(k_prev, -shift);
            scale += shift;
        }
        add_term(j, k_cur, scale);
        if (small_streak >= 4) {
            return {s, x, terms, sum, std::fabs(last_term)};
        }
    }
    throw std::runtime_error("G series did not converge within " + std::to_string(cap) +
                             " terms (x=" + std::to_string(x) + ", |last term|=" +
                             std::to_string(std::fabs(last_term)) + ")");
}

namespace {

double bisect_root(const model::ScaledParams& s, double a, double b, double ga, double gb,
                   double tol) {
    // ga, gb have opposite signs
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        const double m = 0.5 * (a + b);
        const double gm = g_at_zero(s, m, 1e-12).value;
        if (gm == 0.0) return m;
        if ((ga < 0.0) != (gm < 0.0)) {
            b = m;
            gb = gm;
        } else {
            a = m;
            ga = gm;
        }
    }
    (void)gb;
    return 0.5 * (a + b);
}

RootReport scan_interval(const model::ScaledParams& s, int label, double lo, double hi,
                         double tol) {
    RootReport rep{label, lo, hi, {}, {}};
    constexpr int kGrid = 96;
    std::vector<double> xs(kGrid + 1), gs(kGrid + 1);
    for (int i = 0; i <= kGrid; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / kGrid;
        gs[i] = g_at_zero(s, xs[i], 1e-12).value;
    }
    double gmax = 0.0;
    for (double v : gs) gmax = std::max(gmax, std::fabs(v));
    for (int i = 0; i < kGrid; ++i) {
        if (gs[i] == 0.0) {
            rep.roots.push_back(xs[i]);
            continue;
        }
        if ((gs[i] < 0.0) != (gs[i + 1] < 0.0)) {
            rep.roots.push_back(bisect_root(s, xs[i], xs[i + 1], gs[i], gs[i + 1], tol));
        } else if (i > 0 && std::fabs(gs[i]) < std::fabs(gs[i - 1]) &&
                   std::fabs(gs[i]) < std::fabs(gs[i + 1]) && std::fabs(gs[i]) < 1e-9 * gmax) {
            rep.unresolved.push_back(xs[i]);
        }
    }
    std::sort(rep.roots.begin(), rep.roots.end());
    return rep;
}

}  // namespace

std::vector<RootReport> find_roots(const model::ScaledParams& s, std::size_t k_max, double tol) {
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

    std::vector<RootReport> reports;
    const double g2 = s.g_tilde * s.g_tilde;
    const double below_margin = std::max(1.0, g2);
    reports.push_back(scan_interval(s, -1, -g2 - below_margin, -kPoleExclusion, tol));
    for (std::size_t k = 0; k < k_max; ++k) {
        const double lo = static_cast<double>(k) + kPoleExclusion;
        const double hi = static_cast<double>(k + 1) - kPoleExclusion;
        reports.push_back(scan_interval(s, static_cast<int>(k), lo, hi, tol));
    }
    return reports;
}

}  // namespace qrm::gfunction
