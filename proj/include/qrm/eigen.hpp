// eigen.hpp — Symmetric tridiagonal eigensolver.
//
// Eigenvalues come from Sturm-count bisection on a shared subdivision tree,
// batched through the kernels in sturm_kernels.hpp. Eigenvectors come from
// inverse iteration seeded by the bisection values. A QL-with-implicit-shifts
// oracle, deliberately capped at dim 512, provides an independent cross-check
// for tests.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qrm/model.hpp"

namespace qrm::eigen {

// Half-open index range [first, last) into the ascending eigenvalue sequence.
struct IndexRange {
    std::size_t first{0};
    std::size_t last{0};
    std::size_t count() const { return last - first; }
};

struct Spectrum {
    model::ModelParams params;
    model::Sector sector{model::Sector::Plus};
    std::size_t dim{0};
    std::vector<double> energies;               // ascending
    std::vector<std::vector<double>> vectors;   // optional, unit norm
    std::size_t converged_count{0};
};

// Ascending eigenvalues for the requested index range (default: all).
// Each value is certified by Sturm bracketing to absolute accuracy
// <= 1e-10 * max(|diag|,|offdiag|).
std::vector<double> eigenvalues(const model::TridiagonalOperator& op,
                                std::optional<IndexRange> range = std::nullopt);

// Eigenvalues plus inverse-iteration eigenvectors for the range. Residual
// ||T v - E v|| <= 1e-8 ||T|| per pair; throws naming the index on failure.
Spectrum eigenpairs(const model::TridiagonalOperator& op, IndexRange range);

// Independent method for tests; rejects dim > 512.
std::vector<double> dense_oracle_eigenvalues(const model::TridiagonalOperator& op);

// Largest k such that the lowest k eigenvalues of the sector Hamiltonian at
// dim and at probe_dim agree within 1e-8 * omega.
std::size_t converged_levels(const model::ModelParams& p, model::Sector sector,
                             std::size_t dim, std::size_t probe_dim);

// Fraction of computed levels the statistics pipeline trusts by default;
// the top of a truncated spectrum is contaminated.
inline constexpr double kDefaultConvergedFraction = 0.6;

// Full eigenvalue set of the sector Hamiltonian with the default
// converged-count policy applied.
Spectrum solve(const model::ModelParams& p, model::Sector sector, std::size_t dim);

}  // namespace qrm::eigen
