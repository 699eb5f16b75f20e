// husimi.hpp — Husimi Q evaluation on phase-space grids.
//
// Q(beta) = <beta|rho|beta>/pi for the reduced boson state; beta = x + i y
// with the quadrature convention of analytic.hpp, so Q is nonnegative and
// bounded by 1/pi. Three evaluators: a generic one from Fock amplitudes, the
// closed-form degenerate-regime sum over displacement amplitudes, and the
// finite-mu relativistic form built from terminating 2F1 weight factors.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qrm/model.hpp"

namespace qrm::husimi {

struct PhaseSpaceGrid {
    double x_min, x_max, y_min, y_max;
    std::size_t nx, ny;

    double dx() const { return (x_max - x_min) / static_cast<double>(nx); }
    double dy() const { return (y_max - y_min) / static_cast<double>(ny); }
    // cell-center sample
    std::complex<double> point(std::size_t i, std::size_t j) const {
        return {x_min + (static_cast<double>(i) + 0.5) * dx(),
                y_min + (static_cast<double>(j) + 0.5) * dy()};
    }
};

// Rectangular window covering mean +/- 5 sigma in the Husimi widths.
PhaseSpaceGrid auto_grid(double mean_x, double mean_y, double var_x, double var_y,
                         std::size_t nx, std::size_t ny);

struct QField {
    PhaseSpaceGrid grid;
    std::vector<double> values;  // row-major, index j*nx + i
    double norm_estimate;        // midpoint quadrature of Q over the window
};

// One incoherent branch of the reduced state.
struct WeightedFockState {
    std::vector<double> amplitudes;  // unit norm
    double weight;
};

// Q for a mixture of pure Fock-amplitude states; weights must sum to 1 and
// each branch must be normalized within 1e-6.
QField q_from_fock_state(const std::vector<WeightedFockState>& branches,
                         const PhaseSpaceGrid& grid);

// Degenerate-regime closed form: parity-pair sum over displacement
// amplitudes P(n,k,alpha) for level n at delta = 0.
QField q_degenerate_closed_form(const model::ModelParams& p, std::size_t n,
                                const PhaseSpaceGrid& grid);

// Relativistic regime at finite mu: double series with terminating Gauss-2F1
// weight factors, normalized analytically through Gaussian overlaps.
QField q_relativistic_closed_form(const model::ModelParams& p, double x, double mu,
                                  const PhaseSpaceGrid& grid);

struct Moments {
    double mean_x, mean_y, var_x, var_y;
};

// Grid-quadrature moments with the anti-normal-ordering correction (the
// Husimi widths exceed the state variances by 1/4 per quadrature). Throws if
// the window coverage is poor (norm_estimate < 0.9).
Moments q_moments(const QField& field);

}  // namespace qrm::husimi
