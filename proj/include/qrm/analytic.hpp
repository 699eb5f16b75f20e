// analytic.hpp — Closed-form solutions in the two limit regimes.
//
// Degenerate qubit limit (delta = 0): displaced number states with an equally
// spaced spectrum. Relativistic limit (delta = 1): position-pair eigenstates,
// represented at finite squeezing mu < 1 because the mu -> 1 states are only
// delta normalizable. Conventions: hbar = 1, quadratures x = (a^+ + a)/2,
// y = i(a^+ - a)/2, and "variance" means squared standard deviation (vacuum
// value 1/4).

#pragma once

#include <cstddef>
#include <vector>

#include "qrm/model.hpp"

namespace qrm::analytic {

// alpha = -g/(2 omega), the displacement diagonalizing the delta = 0 model.
double displacement_alpha(const model::ModelParams& p);

// E_n = 2 omega n - g^2/(2 omega) for n in [0, n_max). Requires delta = 0.
std::vector<double> degenerate_spectrum(const model::ModelParams& p, std::size_t n_max);

// Unnormalized even/odd displaced-number pair
//   |phi_pm> = [D^+(alpha) -/+ (-1)^n D(alpha)] |n>
// as Fock amplitude arrays, plus squared norms (norm_plus + norm_minus = 4).
// The laboratory eigenstate is (|phi_+>|+> + |phi_->|->)/2.
struct ParityPair {
    std::vector<double> plus, minus;
    double norm2_plus, norm2_minus;
};
ParityPair degenerate_eigenvector(const model::ModelParams& p, std::size_t n, std::size_t dim);

struct Quadratures {
    double mean_x, mean_y, var_x, var_y;
};
// Reduced boson state of level n: zero means, var_x = alpha^2 + n/2 + 1/4,
// var_y = n/2 + 1/4.
Quadratures degenerate_quadratures(const model::ModelParams& p, std::size_t n);

// E(x) = +sqrt(4 g^2 x^2 + omega0^2), delta = 1 branch.
double relativistic_energy(const model::ModelParams& p, double x);

// {gamma_+, gamma_-} = e^{-x^2}/sqrt(2 pi E (E - 2 g x)) {omega0, -E + 2 g x},
// valid for x > 0 (x = 0 is the bare vacuum branch).
struct RelativisticCoefficients {
    double gamma_plus, gamma_minus;
};
RelativisticCoefficients relativistic_coefficients(const model::ModelParams& p, double x);

// xi = ln(1 - mu^2), zeta = 2 x e^{xi/2}, r = artanh(mu); requires mu in [0,1).
struct SqueezeParameters {
    double xi, zeta, r;
};
SqueezeParameters squeeze_parameters(double x, double mu);

// Finite-mu regularization of the position-pair eigenstate: normalized Fock
// amplitudes of gamma_+ e^{-(mu/2) a^+^2 + 2x a^+}|0> +/- gamma_- (x -> -x),
// plus the mixture weights the two branches carry in the reduced boson state.
struct FiniteMuState {
    std::vector<double> plus, minus;
    double weight_plus, weight_minus;  // sum to 1
};
FiniteMuState finite_mu_state(const model::ModelParams& p, double x, double mu,
                              std::size_t dim);

// Fock amplitudes of the normalized squeezed Gaussian e^{-(mu/2)a^+^2 + c a^+}|0>.
std::vector<double> gaussian_exponential_state(double mu, double c, std::size_t dim);

}  // namespace qrm::analytic
