#include "qrm/husimi.hpp"

#include <cmath>
#include <stdexcept>

#include "qrm/analytic.hpp"
#include "qrm/specialfn.hpp"

namespace qrm::husimi {

namespace {

// Kahan accumulator
struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

void check_grid(const PhaseSpaceGrid& g) {
    if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("grid needs nx, ny >= 2");
    if (!(g.x_max > g.x_min) || !(g.y_max > g.y_min) || !std::isfinite(g.x_min) ||
        !std::isfinite(g.x_max) || !std::isfinite(g.y_min) || !std::isfinite(g.y_max))
        throw std::invalid_argument("grid ranges must be finite and ordered");
}

void finalize(QField& f) {
    const double da = f.grid.dx() * f.grid.dy();
    Kahan k;
    for (double& v : f.values) {
        if (v < 0.0) v = 0.0;
        k.add(v);
    }
    f.norm_estimate = k.sum * da;
}

// coherent-projection sum <beta|psi> including the Gaussian prefactor
std::complex<double> coherent_overlap(const std::vector<double>& amps,
                                      std::complex<double> beta) {
    const std::complex<double> bc = std::conj(beta);
    const double r2 = std::norm(beta);
    std::complex<double> u = std::exp(-0.5 * r2);  // beta*^k/sqrt(k!) e^{-|b|^2/2}
    std::complex<double> sum = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const std::complex<double> v = amps[k] * u;
        const std::complex<double> y = v - comp;
        const std::complex<double> t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        u *= bc / std::sqrt(static_cast<double>(k + 1));
    }
    return sum;
}

}  // namespace

PhaseSpaceGrid auto_grid(double mean_x, double mean_y, double var_x, double var_y,
                         std::size_t nx, std::size_t ny) {
    const double hx = 5.0 * std::sqrt(var_x + 0.25) + 0.5;
    const double hy = 5.0 * std::sqrt(var_y + 0.25) + 0.5;
    return {mean_x - hx, mean_x + hx, mean_y - hy, mean_y + hy, nx, ny};
}

QField q_from_fock_state(const std::vector<WeightedFockState>& branches,
                         const PhaseSpaceGrid& grid) {
    check_grid(grid);
    if (branches.empty()) throw std::invalid_argument("no state branches");
    double wsum = 0.0;
    for (const auto& b : branches) {
        double n2 = 0.0;
        for (double a : b.amplitudes) n2 += a * a;
        if (std::fabs(n2 - 1.0) > 1e-6)
            throw std::invalid_argument("state branch is not normalized");
        wsum += b.weight;
    }
    if (std::fabs(wsum - 1.0) > 1e-9)
        throw std::invalid_argument("mixture weights must sum to 1");

    QField f{grid, std::vector<double>(grid.nx * grid.ny, 0.0), 0.0};
    for (std::size_t j = 0; j < grid.ny; ++j) {
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const std::complex<double> beta = grid.point(i, j);
            double q = 0.0;
            for (const auto& b : branches)
                q += b.weight * std::norm(coherent_overlap(b.amplitudes, beta));
            f.values[j * grid.nx + i] = q / M_PI;
        }
    }
    finalize(f);
    return f;
}

QField q_degenerate_closed_form(const model::ModelParams& p, std::size_t n,
                                const PhaseSpaceGrid& grid) {
    check_grid(grid);
    model::validate(p);
    if (p.delta != 0.0) throw std::invalid_argument("closed form defined at delta = 0");

    const double alpha = analytic::displacement_alpha(p);
    const double rmax = std::hypot(std::max(std::fabs(grid.x_min), std::fabs(grid.x_max)),
                                   std::max(std::fabs(grid.y_min), std::fabs(grid.y_max)));
    const std::size_t kmax = n + 32 +
                             static_cast<std::size_t>(10.0 * alpha * alpha) +
                             static_cast<std::size_t>(rmax * rmax + 10.0 * rmax);
    const auto table = specialfn::displaced_overlap_table(n, kmax, alpha);
    const double parity_n = (n % 2 == 0) ? 1.0 : -1.0;

    QField f{grid, std::vector<double>(grid.nx * grid.ny, 0.0), 0.0};
    const double pref = std::exp(-alpha * alpha) / (4.0 * M_PI);
    for (std::size_t j = 0; j < grid.ny; ++j) {
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const std::complex<double> beta = grid.point(i, j);
            const std::complex<double> bc = std::conj(beta);
            std::complex<double> u = std::exp(-0.5 * std::norm(beta));
            std::complex<double> even = 0.0, odd = 0.0;  // r = +1 / r = -1 brackets
            for (std::size_t k = 0; k < kmax; ++k) {
                const double pd = ((n > k ? n - k : k - n) % 2 == 0) ? 1.0 : -1.0;
                const std::complex<double> base = table.amplitudes[k] * u;
                even += base * (pd - parity_n);
                odd += base * (pd + parity_n);
                u *= bc / std::sqrt(static_cast<double>(k + 1));
            }
            f.values[j * grid.nx + i] = pref * (std::norm(even) + std::norm(odd));
        }
    }
    finalize(f);
    return f;
}

QField q_relativistic_closed_form(const model::ModelParams& p, double x, double mu,
                                  const PhaseSpaceGrid& grid) {
    check_grid(grid);
    model::validate(p);
    if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in [0,1)");
    if (x < 0.0) throw std::invalid_argument("position label must be nonnegative");

    // branch coefficients; x = 0 collapses both branches onto the squeezed vacuum
    double gp = 1.0, gm = 0.0;
    if (x > 0.0) {
        const auto g = analytic::relativistic_coefficients(p, x);
        gp = g.gamma_plus;
        gm = g.gamma_minus;
    }

    QField f{grid, std::vector<double>(grid.nx * grid.ny, 0.0), 0.0};

    if (mu < 1e-14) {
        // no squeezing: each branch is a coherent state |+-2x>, so the overlap
        // is elementary. Branch norms: ||phi_+-||^2 = (gp^2 + gm^2) e^{c^2}
        // +- 2 gp gm; cross terms cancel in the sum over both parities.
        const double c1 = 2.0 * x;
        const double norm_sum = 2.0 * (gp * gp + gm * gm) * std::exp(c1 * c1);
        for (std::size_t j = 0; j < grid.ny; ++j) {
            for (std::size_t i = 0; i < grid.nx; ++i) {
                const std::complex<double> bc = std::conj(grid.point(i, j));
                const double damp = std::exp(-std::norm(bc));
                const std::complex<double> ep = std::exp(c1 * bc);
                const std::complex<double> em = std::exp(-c1 * bc);
                const double q = damp * (std::norm(gp * ep + gm * em) + std::norm(gp * ep - gm * em));
                f.values[j * grid.nx + i] = q / (M_PI * norm_sum);
            }
        }
        finalize(f);
        return f;
    }

    // Generating-function expansion: with a = -mu/2, cross coefficient
    // c = sqrt(1-mu^2) and auxiliary displacement v = 2x/sqrt(1-mu^2), the
    // branch overlap e^{a b*^2 + 2x b*} equals e^{-a v^2} * sum over the
    // double series whose (2p+s, 2q+s) coefficient carries
    // 2F1(-p, -q; s+1/2; (1-mu^2)/mu^2).
    const double cc = std::sqrt(1.0 - mu * mu);
    const double v = 2.0 * x / cc;
    const double z = (1.0 - mu * mu) / (mu * mu);

    const double rmax = std::hypot(std::max(std::fabs(grid.x_min), std::fabs(grid.x_max)),
                                   std::max(std::fabs(grid.y_min), std::fabs(grid.y_max)));
    const std::size_t pmax =
        static_cast<std::size_t>(3.0 * 0.5 * mu * rmax * rmax) + 32;
    const std::size_t qmax = static_cast<std::size_t>(3.0 * 0.5 * mu * v * v) + 32;

    // column sums C_s[p] = sum_q T(2p+s, 2q+s) v^{2q+s}; beta-independent
    std::vector<double> col[2];
    for (int s = 0; s < 2; ++s) col[s].assign(pmax + 1, 0.0);
    for (std::size_t pidx = 0; pidx <= pmax; ++pidx) {
        const double lp = static_cast<double>(pidx) * std::log(0.5 * mu) -
                          specialfn::log_factorial(pidx);
        const double sp = (pidx % 2 == 0) ? 1.0 : -1.0;  // sign of a^p
        for (int s = 0; s < 2; ++s) {
            if (s == 1 && v == 0.0) continue;
            Kahan acc;
            for (std::size_t qidx = 0; qidx <= qmax; ++qidx) {
                if (v == 0.0 && qidx > 0) break;  // v^{2q+s} kills every q > 0 term
                const double lq = static_cast<double>(qidx) * std::log(0.5 * mu) -
                                  specialfn::log_factorial(qidx);
                const double sq = (qidx % 2 == 0) ? 1.0 : -1.0;
                const double f21 = specialfn::gauss_2f1(-static_cast<double>(pidx),
                                                        -static_cast<double>(qidx),
                                                        0.5 + s, z);
                double lv = lp + lq;
                if (v > 0.0)
                    lv += (2.0 * static_cast<double>(qidx) + s) * std::log(v);
                double term = sp * sq * f21 * std::exp(lv);
                if (s == 1) term *= cc;
                acc.add(term);
            }
            col[s][pidx] = acc.sum;
        }
    }

    // analytic branch norms via Gaussian overlaps
    auto pair_overlap = [&](double c1, double c2) {
        return std::exp((-0.5 * mu * (c1 * c1 + c2 * c2) + c1 * c2) / (1.0 - mu * mu)) / cc;
    };
    // cross terms +-2 gp gm <v_-|v_+> cancel in the sum over both parities
    const double c1 = 2.0 * x;
    const double norm_sum = 2.0 * (gp * gp + gm * gm) * pair_overlap(c1, c1);

    const double evpref = std::exp(0.5 * mu * v * v);  // e^{-a v^2}
    for (std::size_t j = 0; j < grid.ny; ++j) {
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const std::complex<double> bc = std::conj(grid.point(i, j));
            const std::complex<double> b2 = bc * bc;
            std::complex<double> even = 0.0, odd = 0.0;
            std::complex<double> pw = 1.0;  // (beta*^2)^p
            for (std::size_t pidx = 0; pidx <= pmax; ++pidx) {
                even += col[0][pidx] * pw;
                odd += col[1][pidx] * pw * bc;
                pw *= b2;
            }
            const double damp = std::exp(-0.5 * std::norm(bc));
            const std::complex<double> ap = damp * evpref * (gp * (even + odd) + gm * (even - odd));
            const std::complex<double> am = damp * evpref * (gp * (even + odd) - gm * (even - odd));
            f.values[j * grid.nx + i] = (std::norm(ap) + std::norm(am)) / (M_PI * norm_sum);
        }
    }
    finalize(f);
    return f;
}

Moments q_moments(const QField& f) {
    const PhaseSpaceGrid& g = f.grid;
    if (f.norm_estimate < 0.9)
        throw std::runtime_error("grid covers too little of the state (norm " +
                                 std::to_string(f.norm_estimate) + " < 0.9)");
    Kahan sx, sy, sxx, syy, s0;
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const auto b = g.point(i, j);
            const double q = f.values[j * g.nx + i];
            s0.add(q);
            sx.add(q * b.real());
            sy.add(q * b.imag());
            sxx.add(q * b.real() * b.real());
            syy.add(q * b.imag() * b.imag());
        }
    }
    const double mx = sx.sum / s0.sum;
    const double my = sy.sum / s0.sum;
    return {mx, my, sxx.sum / s0.sum - mx * mx - 0.25, syy.sum / s0.sum - my * my - 0.25};
}

}  // namespace qrm::husimi
