#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "qrm/eigen.hpp"
#include "qrm/model.hpp"

using namespace qrm;

namespace {

model::TridiagonalOperator random_op(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    model::TridiagonalOperator op;
    op.dim = n;
    op.diag.resize(n);
    op.offdiag.resize(n - 1);
    for (auto& d : op.diag) d = u(rng);
    for (auto& e : op.offdiag) e = u(rng);
    return op;
}

}  // namespace

TEST_CASE("2x2 closed form") {
    model::TridiagonalOperator op{2, {0.0, 2.0}, {0.99}};
    const auto e = eigen::eigenvalues(op);
    const double r = std::sqrt(1.0 + 0.99 * 0.99);
    REQUIRE(e.size() == 2);
    CHECK(e[0] == doctest::Approx(1.0 - r).epsilon(1e-12));
    CHECK(e[1] == doctest::Approx(1.0 + r).epsilon(1e-12));
}

TEST_CASE("diagonal matrix") {
    model::TridiagonalOperator op{4, {3.0, -1.0, 3.0, 7.0}, {0.0, 0.0, 0.0}};
    const auto e = eigen::eigenvalues(op);
    CHECK(e[0] == doctest::Approx(-1.0).epsilon(1e-11));
    CHECK(e[1] == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(e[2] == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(e[3] == doctest::Approx(7.0).epsilon(1e-11));
}

TEST_CASE("degenerate regime spectrum is equally spaced") {
    const auto op = model::build_sector_hamiltonian({1.0, 1.0, 0.99, 0.0},
                                                    model::Sector::Plus, 2000);
    const auto e = eigen::eigenvalues(op, eigen::IndexRange{0, 50});
    for (std::size_t n = 0; n < 50; ++n)
        CHECK(std::fabs(e[n] - (2.0 * static_cast<double>(n) - 0.49005)) < 1e-8);
}

TEST_CASE("bisection matches the dense oracle on random matrices") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 12; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 511);
        const auto op = random_op(rng, n);
        const auto fast = eigen::eigenvalues(op);
        const auto oracle = eigen::dense_oracle_eigenvalues(op);
        REQUIRE(fast.size() == oracle.size());
        const double scale = op.max_abs_entry();
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::fabs(fast[i] - oracle[i]) < 1e-9 * scale);
    }
}

TEST_CASE("properties: trace, Gershgorin, determinism, partition independence") {
    std::mt19937_64 rng(99);
    const auto op = random_op(rng, 257);
    const auto e = eigen::eigenvalues(op);

    const double trace = std::accumulate(op.diag.begin(), op.diag.end(), 0.0);
    const double esum = std::accumulate(e.begin(), e.end(), 0.0);
    CHECK(std::fabs(trace - esum) < 1e-8 * static_cast<double>(op.dim) * op.max_abs_entry());

    double gl = op.diag[0], gu = op.diag[0];
    for (std::size_t i = 0; i < op.dim; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(op.offdiag[i - 1]);
        if (i + 1 < op.dim) r += std::fabs(op.offdiag[i]);
        gl = std::min(gl, op.diag[i] - r);
        gu = std::max(gu, op.diag[i] + r);
    }
    for (double v : e) {
        CHECK(v >= gl - 1e-9);
        CHECK(v <= gu + 1e-9);
    }

    // bit-identical re-run and partitioned runs (shared subdivision tree)
    const auto again = eigen::eigenvalues(op);
    CHECK(e == again);
    const auto lowhalf = eigen::eigenvalues(op, eigen::IndexRange{0, 128});
    const auto highhalf = eigen::eigenvalues(op, eigen::IndexRange{128, 257});
    for (std::size_t i = 0; i < 128; ++i) CHECK(e[i] == lowhalf[i]);
    for (std::size_t i = 128; i < 257; ++i) CHECK(e[i] == highhalf[i - 128]);
}

TEST_CASE("eigenpairs: residuals, orthogonality, closed forms") {
    SUBCASE("diagonal matrix gives standard basis vectors") {
        model::TridiagonalOperator op{3, {1.0, 5.0, 9.0}, {0.0, 0.0}};
        const auto sp = eigen::eigenpairs(op, {0, 3});
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(std::fabs(sp.vectors[k][k]) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("2x2 analytic eigenvector") {
        model::TridiagonalOperator op{2, {0.0, 2.0}, {0.99}};
        const auto sp = eigen::eigenpairs(op, {0, 2});
        // (T - E) v = 0 -> v ~ (0.99, E0)
        const double e0 = sp.energies[0];
        const double nrm = std::hypot(0.99, e0);
        CHECK(std::fabs(std::fabs(sp.vectors[0][0]) - 0.99 / nrm) < 1e-12);
        CHECK(std::fabs(std::fabs(sp.vectors[0][1]) - std::fabs(e0) / nrm) < 1e-12);
    }
    SUBCASE("degenerate-regime ground state is the displaced vacuum") {
        const model::ModelParams p{1.0, 1.0, 0.99, 0.0};
        const auto op = model::build_sector_hamiltonian(p, model::Sector::Plus, 200);
        const auto sp = eigen::eigenpairs(op, {0, 1});
        const double alpha = -p.g / (2.0 * p.omega);
        // e^{-alpha^2/2} alpha^n / sqrt(n!) up to global sign
        const double flip = sp.vectors[0][0] > 0.0 ? 1.0 : -1.0;
        double amp = std::exp(-0.5 * alpha * alpha);
        for (std::size_t n = 0; n < 20; ++n) {
            CHECK(std::fabs(flip * sp.vectors[0][n] - amp) < 1e-7);
            amp *= alpha / std::sqrt(static_cast<double>(n + 1));
        }
    }
    SUBCASE("residual and orthonormality on a random matrix") {
        std::mt19937_64 rng(5);
        const auto op = random_op(rng, 120);
        const auto sp = eigen::eigenpairs(op, {10, 40});
        const double scale = op.max_abs_entry();
        for (std::size_t k = 0; k < sp.energies.size(); ++k) {
            double r2 = 0.0, n2 = 0.0;
            const auto& v = sp.vectors[k];
            for (std::size_t i = 0; i < op.dim; ++i) {
                double r = (op.diag[i] - sp.energies[k]) * v[i];
                if (i > 0) r += op.offdiag[i - 1] * v[i - 1];
                if (i + 1 < op.dim) r += op.offdiag[i] * v[i + 1];
                r2 += r * r;
                n2 += v[i] * v[i];
            }
            CHECK(std::sqrt(r2) < 1e-7 * scale);
            CHECK(std::fabs(n2 - 1.0) < 1e-12);
            for (std::size_t j = 0; j < k; ++j) {
                if (sp.energies[k] - sp.energies[j] > 1e-6 * scale) continue;
                double dot = 0.0;
                for (std::size_t i = 0; i < op.dim; ++i) dot += v[i] * sp.vectors[j][i];
                CHECK(std::fabs(dot) < 1e-8);
            }
        }
    }
}

TEST_CASE("oracle guard and range errors") {
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(eigen::dense_oracle_eigenvalues(random_op(rng, 513)),
                    std::invalid_argument);
    const auto op = random_op(rng, 8);
    CHECK_THROWS_AS(eigen::eigenvalues(op, eigen::IndexRange{3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(eigen::eigenvalues(op, eigen::IndexRange{0, 9}), std::invalid_argument);
}

TEST_CASE("converged_levels") {
    const model::ModelParams p{1.0, 1.0, 0.99, 0.0};
    // displaced states have tiny support; low levels converge far below dim
    const std::size_t k = eigen::converged_levels(p, model::Sector::Plus, 300, 400);
    CHECK(k >= 150);
    const model::ModelParams pd{1.0, 1.0, 0.99, 0.9};
    const std::size_t kd = eigen::converged_levels(pd, model::Sector::Plus, 300, 400);
    CHECK(kd <= k);  // densifying spectrum converges more slowly
    CHECK(kd >= 2);
}
