// model.hpp — Interpolating Rabi model parameters and boson-sector Hamiltonians.

#pragma once

#include <cstddef>
#include <vector>

namespace qrm::model {

// Physical inputs. delta interpolates between the degenerate-qubit (0)
// and relativistic (1) limits; delta = 1/2 recovers the standard model.
struct ModelParams {
    double omega{1.0};
    double omega0{1.0};
    double g{0.99};
    double delta{0.0};
};

// Throws std::invalid_argument on violated bounds.
void validate(const ModelParams& p);

// Dimensionless coupling/frequency after dividing energies by 2(1-delta)omega.
// Undefined at delta = 1.
struct ScaledParams {
    double g_tilde;
    double omega0_tilde;
    double prefactor;  // 2(1-delta)omega, converts scaled energies back
};

ScaledParams scaled_params(const ModelParams& p);

enum class Sector { Plus, Minus };

// Sign convention: Sector::Plus is H_+, which carries -delta*omega0*(-1)^n
// on the diagonal (the sector tied to the excited qubit state). Fixed here;
// every other module consumes the enum.
inline double parity_sign(Sector s) { return s == Sector::Plus ? -1.0 : 1.0; }

// Symmetric tridiagonal matrix in the truncated Fock basis.
struct TridiagonalOperator {
    std::size_t dim{0};
    std::vector<double> diag;     // length dim
    std::vector<double> offdiag;  // length dim-1

    double max_abs_entry() const;
};

// H_pm(delta) = 2w(1-d) n + g sqrt(n+1) couplings -/+ d*w0*(-1)^n.
// Requires dim >= 2.
TridiagonalOperator build_sector_hamiltonian(const ModelParams& p, Sector sector,
                                             std::size_t dim);

}  // namespace qrm::model
