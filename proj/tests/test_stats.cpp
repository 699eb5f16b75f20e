#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "qrm/analytic.hpp"
#include "qrm/stats.hpp"

using namespace qrm;

namespace {

stats::SpacingSample sample_from(std::vector<double> values, std::size_t k) {
    return {k, std::move(values), 0};
}

}  // namespace

TEST_CASE("spacings") {
    SUBCASE("arithmetic spectrum E_n = 3n gives s1 = 3") {
        std::vector<double> e;
        for (int n = 0; n < 50; ++n) e.push_back(3.0 * n);
        const auto s = stats::spacings_from_energies(e, 1.0, 1);
        for (double v : s.values) CHECK(v == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(s.levels_used == 50);
        CHECK(s.values.size() == 49);
    }
    SUBCASE("degenerate analytic spectrum: s1 = 2, s2 = 4") {
        const auto e = analytic::degenerate_spectrum({1.0, 1.0, 0.99, 0.0}, 200);
        const auto s1 = stats::spacings_from_energies(e, 1.0, 1);
        const auto s2 = stats::spacings_from_energies(e, 1.0, 2);
        for (double v : s1.values) CHECK(std::fabs(v - 2.0) < 1e-12);
        for (double v : s2.values) CHECK(std::fabs(v - 4.0) < 1e-12);
    }
    SUBCASE("spectrum filter uses lowest 60% of computed levels") {
        eigen::Spectrum sp;
        sp.params = {1.0, 1.0, 0.99, 0.0};
        for (int n = 0; n < 100; ++n) sp.energies.push_back(2.0 * n);
        sp.converged_count = 0;  // analytic path: fall back to the fraction rule
        const auto s = stats::spacings(sp, 1);
        CHECK(s.levels_used == 60);
        sp.converged_count = 30;
        CHECK(stats::spacings(sp, 1).levels_used == 30);
    }
    SUBCASE("insufficient levels is an error") {
        CHECK_THROWS_AS(stats::spacings_from_energies({0.0, 1.0}, 1.0, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("histogram") {
    SUBCASE("all-equal sample puts unit mass in one bin") {
        const auto h = stats::histogram(sample_from({2.0, 2.0, 2.0, 2.0}, 1), 0.01);
        double mass = 0.0;
        std::size_t nonzero = 0;
        for (std::size_t b = 0; b < h.density.size(); ++b) {
            mass += h.density[b] * (h.bin_edges[b + 1] - h.bin_edges[b]);
            if (h.counts[b] > 0) ++nonzero;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(nonzero == 1);
        REQUIRE(h.peak_locations.size() == 1);
        CHECK(std::fabs(h.peak_locations[0] - 2.0) < 0.011);
    }
    SUBCASE("mass conservation on a spread sample") {
        std::vector<double> v;
        for (int i = 0; i < 500; ++i) v.push_back(0.001 * i * i * 0.01);
        const auto h = stats::histogram(sample_from(v, 1), 0.02);
        double mass = 0.0;
        for (std::size_t b = 0; b < h.density.size(); ++b)
            mass += h.density[b] * (h.bin_edges[b + 1] - h.bin_edges[b]);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b)
            CHECK(h.bin_edges[b] < h.bin_edges[b + 1]);
    }
    SUBCASE("plateau merges into one peak") {
        // two bins with equal top density, flanked by lower ones
        const auto h = stats::histogram(
            sample_from({0.105, 0.115, 0.115, 0.125, 0.125, 0.135}, 1), 0.01);
        REQUIRE(h.peak_locations.size() == 1);
        CHECK(std::fabs(h.peak_locations[0] - 0.12) < 1e-12);
    }
    SUBCASE("guards") {
        CHECK_THROWS_AS(stats::histogram(sample_from({}, 1), 0.01), std::invalid_argument);
        CHECK_THROWS_AS(stats::histogram(sample_from({1.0}, 1), 0.0), std::invalid_argument);
    }
}

TEST_CASE("pole spacing diagnostic") {
    CHECK(stats::pole_spacing_diagnostic({1.0, 1.0, 0.99, 0.0}) == 2.0);
    CHECK(stats::pole_spacing_diagnostic({1.0, 1.0, 0.99, 0.5}) == 1.0);
    CHECK(stats::pole_spacing_diagnostic({1.0, 1.0, 0.99, 0.9999}) ==
          doctest::Approx(2e-4).epsilon(1e-10));
    CHECK_THROWS_AS(stats::pole_spacing_diagnostic({1.0, 1.0, 0.99, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("interweave report") {
    SUBCASE("alternating gaps: constant s2, two s1 peaks, positive runs z") {
        // energies with gaps a, b, a, b, ...
        const double a = 0.9, b = 1.1;
        std::vector<double> e{0.0};
        for (int i = 0; i < 400; ++i) e.push_back(e.back() + (i % 2 == 0 ? a : b));
        const auto s1 = stats::spacings_from_energies(e, 1.0, 1);
        const auto s2 = stats::spacings_from_energies(e, 1.0, 2);
        const auto rep = stats::interweave_report(s1, s2);
        CHECK(rep.identity_ok);
        CHECK(rep.s2_iqr == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(rep.s2_median == doctest::Approx(a + b).epsilon(1e-12));
        CHECK(std::fabs(rep.peak_low - a) < 0.011);
        CHECK(std::fabs(rep.peak_high - b) < 0.011);
        CHECK(rep.runs_statistic > 3.0);  // perfect alternation
    }
    SUBCASE("telescoping identity holds on arbitrary data") {
        std::vector<double> e{0.0, 0.3, 1.1, 1.15, 2.9, 3.4, 5.0, 5.05, 6.0};
        const auto s1 = stats::spacings_from_energies(e, 1.0, 1);
        const auto s2 = stats::spacings_from_energies(e, 1.0, 2);
        CHECK(stats::interweave_report(s1, s2).identity_error <= 1e-10);
    }
    SUBCASE("mismatched samples rejected") {
        std::vector<double> e{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
        const auto s1 = stats::spacings_from_energies(e, 1.0, 1);
        auto s2 = stats::spacings_from_energies(e, 1.0, 2);
        s2.values.pop_back();
        CHECK_THROWS_AS(stats::interweave_report(s1, s2), std::invalid_argument);
    }
}
