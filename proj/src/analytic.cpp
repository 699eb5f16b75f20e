#include "qrm/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qrm/specialfn.hpp"

namespace qrm::analytic {

namespace {
void require_degenerate(const model::ModelParams& p) {
    model::validate(p);
    if (p.delta != 0.0)
        throw std::invalid_argument("operation defined in the degenerate limit delta = 0");
}
}  // namespace

double displacement_alpha(const model::ModelParams& p) {
    return -p.g / (2.0 * p.omega);
}

std::vector<double> degenerate_spectrum(const model::ModelParams& p, std::size_t n_max) {
    require_degenerate(p);
    std::vector<double> e(n_max);
    const double e0 = -p.g * p.g / (2.0 * p.omega);
    for (std::size_t n = 0; n < n_max; ++n)
        e[n] = 2.0 * p.omega * static_cast<double>(n) + e0;
    return e;
}

ParityPair degenerate_eigenvector(const model::ModelParams& p, std::size_t n, std::size_t dim) {
    require_degenerate(p);
    const double alpha = displacement_alpha(p);
    const double gauss = std::exp(-0.5 * alpha * alpha);
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;

    ParityPair pair;
    pair.plus.resize(dim);
    pair.minus.resize(dim);
    double tail = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double forward = gauss * specialfn::displaced_overlap(n, k, alpha);   // <k|D(alpha)|n>
        const double backward = gauss * specialfn::displaced_overlap(n, k, -alpha); // <k|D^+(alpha)|n>
        pair.plus[k] = backward - parity * forward;
        pair.minus[k] = backward + parity * forward;
        if (k + 8 >= dim) tail += forward * forward + backward * backward;
    }
    if (tail > 1e-12) {
        const std::size_t suggest = 2 * dim + n + 32;
        throw std::invalid_argument("truncation too small for level " + std::to_string(n) +
                                    "; suggest dim >= " + std::to_string(suggest));
    }
    pair.norm2_plus = 0.0;
    pair.norm2_minus = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        pair.norm2_plus += pair.plus[k] * pair.plus[k];
        pair.norm2_minus += pair.minus[k] * pair.minus[k];
    }
    return pair;
}

Quadratures degenerate_quadratures(const model::ModelParams& p, std::size_t n) {
    require_degenerate(p);
    const double alpha = displacement_alpha(p);
    const double half_n = 0.5 * static_cast<double>(n);
    return {0.0, 0.0, alpha * alpha + half_n + 0.25, half_n + 0.25};
}

double relativistic_energy(const model::ModelParams& p, double x) {
    model::validate(p);
    if (x < 0.0) throw std::invalid_argument("position label must be nonnegative");
    return std::sqrt(4.0 * p.g * p.g * x * x + p.omega0 * p.omega0);
}

RelativisticCoefficients relativistic_coefficients(const model::ModelParams& p, double x) {
    if (!(x > 0.0))
        throw std::invalid_argument("gamma coefficients defined for x > 0; x = 0 is the vacuum branch");
    const double e = relativistic_energy(p, x);
    // e - 2gx = omega0^2/(e + 2gx), stable when 2gx >> omega0
    const double diff = p.omega0 * p.omega0 / (e + 2.0 * p.g * x);
    const double scale = std::exp(-x * x) / std::sqrt(2.0 * M_PI * e * diff);
    return {scale * p.omega0, -scale * diff};
}

SqueezeParameters squeeze_parameters(double x, double mu) {
    if (!(mu >= 0.0 && mu < 1.0))
        throw std::invalid_argument("mu must lie in [0,1); infinite squeezing is symbolic only");
    const double xi = std::log1p(-mu * mu);
    return {xi, 2.0 * x * std::exp(0.5 * xi), std::atanh(mu)};
}

std::vector<double> gaussian_exponential_state(double mu, double c, std::size_t dim) {
    if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in [0,1)");
    if (dim < 2) throw std::invalid_argument("dim must be at least 2");
    // a |psi> = (c - mu a^+)|psi> gives the amplitude recurrence.
    std::vector<double> amp(dim);
    amp[0] = 1.0;
    amp[1] = c;
    for (std::size_t n = 1; n + 1 < dim; ++n) {
        const double fn = static_cast<double>(n);
        amp[n + 1] = (c * amp[n] - mu * std::sqrt(fn) * amp[n - 1]) / std::sqrt(fn + 1.0);
        if (std::fabs(amp[n + 1]) > 1e280) {
            for (std::size_t j = 0; j <= n + 1; ++j) amp[j] *= 1e-280;
        }
    }
    double norm2 = 0.0;
    for (double a : amp) norm2 += a * a;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& a : amp) a *= inv;
    return amp;
}

FiniteMuState finite_mu_state(const model::ModelParams& p, double x, double mu,
                              std::size_t dim) {
    model::validate(p);
    if (x < 0.0) throw std::invalid_argument("position label must be nonnegative");
    if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in [0,1)");

    FiniteMuState st;
    if (x == 0.0) {
        // both branches collapse to the squeezed vacuum
        st.plus = gaussian_exponential_state(mu, 0.0, dim);
        st.minus = st.plus;
        st.weight_plus = 0.5;
        st.weight_minus = 0.5;
        return st;
    }

    const auto gamma = relativistic_coefficients(p, x);
    const auto base = gaussian_exponential_state(mu, 2.0 * x, dim);  // normalized; x -> -x flips odd signs
    double tail = 0.0;
    for (std::size_t k = dim >= 8 ? dim - 8 : 0; k < dim; ++k) tail += base[k] * base[k];
    if (tail > 1e-10)
        throw std::invalid_argument("truncation too small for finite-mu state; suggest dim >= " +
                                    std::to_string(2 * dim + 64));

    st.plus.resize(dim);
    st.minus.resize(dim);
    double np = 0.0, nm = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        st.plus[k] = gamma.gamma_plus * base[k] + gamma.gamma_minus * sgn * base[k];
        st.minus[k] = gamma.gamma_plus * base[k] - gamma.gamma_minus * sgn * base[k];
        np += st.plus[k] * st.plus[k];
        nm += st.minus[k] * st.minus[k];
    }
    const double tot = np + nm;
    st.weight_plus = np / tot;
    st.weight_minus = nm / tot;
    const double ip = 1.0 / std::sqrt(np), im = 1.0 / std::sqrt(nm);
    for (std::size_t k = 0; k < dim; ++k) {
        st.plus[k] *= ip;
        st.minus[k] *= im;
    }
    return st;
}

}  // namespace qrm::analytic
