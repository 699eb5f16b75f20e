#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "qrm/analytic.hpp"
#include "qrm/husimi.hpp"
#include "qrm/model.hpp"

using namespace qrm;

namespace {

const model::ModelParams kDeg{1.0, 1.0, 0.99, 0.0};
const model::ModelParams kRel{1.0, 1.0, 0.99, 1.0};

std::vector<double> vacuum_state(std::size_t dim) {
    std::vector<double> v(dim, 0.0);
    v[0] = 1.0;
    return v;
}

std::vector<double> coherent_state(double a, std::size_t dim) {
    std::vector<double> v(dim);
    v[0] = std::exp(-0.5 * a * a);
    for (std::size_t k = 1; k < dim; ++k)
        v[k] = v[k - 1] * a / std::sqrt(static_cast<double>(k));
    return v;
}

double peak(const husimi::QField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, v);
    return m;
}

}  // namespace

TEST_CASE("generic evaluator on reference states") {
    SUBCASE("vacuum: Q = e^{-|b|^2}/pi") {
        const husimi::PhaseSpaceGrid g{-3.0, 3.0, -3.0, 3.0, 48, 48};
        const auto q = husimi::q_from_fock_state({{vacuum_state(16), 1.0}}, g);
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 0; i < g.nx; ++i) {
                const auto b = g.point(i, j);
                CHECK(q.values[j * g.nx + i] ==
                      doctest::Approx(std::exp(-std::norm(b)) / M_PI).epsilon(1e-10));
            }
        CHECK(q.norm_estimate == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("coherent state peaks at its displacement with Q = 1/pi") {
        const double a0 = 1.2;
        const husimi::PhaseSpaceGrid g{a0 - 3.0, a0 + 3.0, -3.0, 3.0, 49, 49};
        const auto q = husimi::q_from_fock_state({{coherent_state(a0, 48), 1.0}}, g);
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 0; i < g.nx; ++i) {
                const auto b = g.point(i, j);
                CHECK(q.values[j * g.nx + i] ==
                      doctest::Approx(std::exp(-std::norm(b - std::complex<double>(a0)))
                                      / M_PI).epsilon(1e-9));
            }
        CHECK(peak(q) <= 1.0 / M_PI + 1e-12);
    }
    SUBCASE("input guards") {
        const husimi::PhaseSpaceGrid g{-1, 1, -1, 1, 8, 8};
        auto bad = vacuum_state(4);
        bad[0] = 0.9;
        CHECK_THROWS_AS(husimi::q_from_fock_state({{bad, 1.0}}, g), std::invalid_argument);
        CHECK_THROWS_AS(husimi::q_from_fock_state({{vacuum_state(4), 0.7}}, g),
                        std::invalid_argument);
        CHECK_THROWS_AS(husimi::q_from_fock_state({}, g), std::invalid_argument);
    }
}

TEST_CASE("degenerate closed form vs independent construction") {
    for (std::size_t n : {std::size_t{0}, std::size_t{5}}) {
        const auto quad = analytic::degenerate_quadratures(kDeg, n);
        const auto grid = husimi::auto_grid(0.0, 0.0, quad.var_x, quad.var_y, 64, 64);
        const auto closed = husimi::q_degenerate_closed_form(kDeg, n, grid);

        const auto pair = analytic::degenerate_eigenvector(kDeg, n, 160);
        auto normalize = [](std::vector<double> v, double n2) {
            for (double& a : v) a /= std::sqrt(n2);
            return v;
        };
        const auto generic = husimi::q_from_fock_state(
            {{normalize(pair.plus, pair.norm2_plus), pair.norm2_plus / 4.0},
             {normalize(pair.minus, pair.norm2_minus), pair.norm2_minus / 4.0}},
            grid);
        for (std::size_t i = 0; i < closed.values.size(); ++i)
            CHECK(std::fabs(closed.values[i] - generic.values[i]) < 1e-8);
        CHECK(closed.norm_estimate == doctest::Approx(1.0).epsilon(1e-4));
        for (double v : closed.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 / M_PI + 1e-12);
        }
    }
}

TEST_CASE("degenerate n=0 ground-state structure") {
    SUBCASE("g = 0.99: displaced-lobe mixture is x-elongated and symmetric") {
        // the two Gaussians at +-alpha = -+0.495 merge (separation below the
        // Husimi resolvability 2 sigma ~ 1.41); structure shows as elongation
        const auto grid = husimi::auto_grid(0.0, 0.0, 0.495025, 0.25, 200, 200);
        const auto q = husimi::q_degenerate_closed_form(kDeg, 0, grid);
        const auto m = husimi::q_moments(q);
        CHECK(std::fabs(m.mean_x) < 1e-9);
        CHECK(m.var_x > m.var_y + 0.2);
        // mirror symmetry x -> -x along the central row
        const std::size_t j = grid.ny / 2;
        for (std::size_t i = 0; i < grid.nx; ++i)
            CHECK(std::fabs(q.values[j * grid.nx + i] -
                            q.values[j * grid.nx + (grid.nx - 1 - i)]) < 1e-10);
    }
    SUBCASE("well-separated displacement (g = 4) resolves two lobes") {
        const model::ModelParams strong{1.0, 1.0, 4.0, 0.0};
        const double alpha = 2.0;  // g/(2w)
        const auto grid = husimi::auto_grid(0.0, 0.0, alpha * alpha + 0.25, 0.25, 161, 9);
        const auto q = husimi::q_degenerate_closed_form(strong, 0, grid);
        const std::size_t j = grid.ny / 2;
        double best_pos = 0.0, best_v = -1.0;
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double v = q.values[j * grid.nx + i];
            if (v > best_v) {
                best_v = v;
                best_pos = grid.point(i, j).real();
            }
        }
        CHECK(std::fabs(std::fabs(best_pos) - alpha) < 0.1);
        // dip between the lobes
        double center = 0.0;
        for (std::size_t i = 0; i < grid.nx; ++i)
            if (std::fabs(grid.point(i, j).real()) < grid.dx())
                center = std::max(center, q.values[j * grid.nx + i]);
        CHECK(center < 0.2 * best_v);
    }
}

TEST_CASE("q_moments") {
    SUBCASE("vacuum variances are 1/4 after the anti-normal correction") {
        const husimi::PhaseSpaceGrid g{-4.5, 4.5, -4.5, 4.5, 160, 160};
        const auto q = husimi::q_from_fock_state({{vacuum_state(8), 1.0}}, g);
        const auto m = husimi::q_moments(q);
        CHECK(std::fabs(m.mean_x) < 1e-10);
        CHECK(std::fabs(m.mean_y) < 1e-10);
        CHECK(m.var_x == doctest::Approx(0.25).epsilon(1e-3));
        CHECK(m.var_y == doctest::Approx(0.25).epsilon(1e-3));
    }
    SUBCASE("degenerate levels reproduce the paper variances") {
        for (std::size_t n : {std::size_t{0}, std::size_t{5}}) {
            const auto quad = analytic::degenerate_quadratures(kDeg, n);
            const auto grid = husimi::auto_grid(0.0, 0.0, quad.var_x, quad.var_y, 220, 220);
            const auto q = husimi::q_degenerate_closed_form(kDeg, n, grid);
            const auto m = husimi::q_moments(q);
            CHECK(std::fabs(m.var_x - quad.var_x) < 1e-3);
            CHECK(std::fabs(m.var_y - quad.var_y) < 1e-3);
        }
    }
    SUBCASE("poor coverage is an error") {
        const husimi::PhaseSpaceGrid g{-0.5, 0.5, -0.5, 0.5, 12, 12};
        const auto q = husimi::q_from_fock_state({{vacuum_state(8), 1.0}}, g);
        CHECK_THROWS_AS(husimi::q_moments(q), std::runtime_error);
    }
}

TEST_CASE("relativistic closed form") {
    SUBCASE("mu=0, x=0 is the vacuum") {
        const husimi::PhaseSpaceGrid g{-3, 3, -3, 3, 24, 24};
        const auto q = husimi::q_relativistic_closed_form(kRel, 0.0, 0.0, g);
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 0; i < g.nx; ++i)
                CHECK(q.values[j * g.nx + i] ==
                      doctest::Approx(std::exp(-std::norm(g.point(i, j))) / M_PI)
                          .epsilon(1e-9));
    }
    SUBCASE("x=0 matches a squeezed-vacuum oracle") {
        const double mu = 0.6;
        const husimi::PhaseSpaceGrid g{-2.5, 2.5, -4.0, 4.0, 32, 32};
        const auto closed = husimi::q_relativistic_closed_form(kRel, 0.0, mu, g);
        const auto sq = analytic::gaussian_exponential_state(mu, 0.0, 128);
        const auto oracle = husimi::q_from_fock_state({{sq, 1.0}}, g);
        for (std::size_t i = 0; i < closed.values.size(); ++i)
            CHECK(std::fabs(closed.values[i] - oracle.values[i]) < 1e-6);
    }
    SUBCASE("mu=0.9, x=1 matches the finite-mu Fock construction") {
        const double mu = 0.9, x = 1.0;
        const auto st = analytic::finite_mu_state(kRel, x, mu, 640);
        const husimi::PhaseSpaceGrid g{-3.5, 3.5, -2.0, 2.0, 32, 32};
        const auto oracle = husimi::q_from_fock_state(
            {{st.plus, st.weight_plus}, {st.minus, st.weight_minus}}, g);
        const auto closed = husimi::q_relativistic_closed_form(kRel, x, mu, g);
        for (std::size_t i = 0; i < closed.values.size(); ++i)
            CHECK(std::fabs(closed.values[i] - oracle.values[i]) < 1e-6);
    }
    SUBCASE("mu=0 with displacement matches the coherent-pair construction") {
        const double x = 0.7;
        const auto st = analytic::finite_mu_state(kRel, x, 0.0, 64);
        const husimi::PhaseSpaceGrid g{-3.0, 3.0, -2.0, 2.0, 24, 24};
        const auto oracle = husimi::q_from_fock_state(
            {{st.plus, st.weight_plus}, {st.minus, st.weight_minus}}, g);
        const auto closed = husimi::q_relativistic_closed_form(kRel, x, 0.0, g);
        for (std::size_t i = 0; i < closed.values.size(); ++i)
            CHECK(std::fabs(closed.values[i] - oracle.values[i]) < 1e-9);
    }
}

TEST_CASE("grid plumbing") {
    const auto g = husimi::auto_grid(1.0, -0.5, 0.25, 0.25, 40, 20);
    CHECK(g.nx == 40);
    CHECK(0.5 * (g.x_min + g.x_max) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(0.5 * (g.y_min + g.y_max) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK_THROWS_AS(husimi::q_from_fock_state({{vacuum_state(4), 1.0}},
                                              husimi::PhaseSpaceGrid{1, -1, -1, 1, 8, 8}),
                    std::invalid_argument);
    // refinement stability of the norm estimate
    const husimi::PhaseSpaceGrid g1{-4, 4, -4, 4, 40, 40};
    const husimi::PhaseSpaceGrid g2{-4, 4, -4, 4, 80, 80};
    const auto q1 = husimi::q_from_fock_state({{vacuum_state(8), 1.0}}, g1);
    const auto q2 = husimi::q_from_fock_state({{vacuum_state(8), 1.0}}, g2);
    CHECK(std::fabs(q1.norm_estimate - q2.norm_estimate) < 1e-3);
}
