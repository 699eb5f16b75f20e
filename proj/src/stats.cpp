#include "qrm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qrm::stats {

namespace {

SpacingSample spacings_impl(const std::vector<double>& energies, double omega,
                            std::size_t usable, std::size_t k) {
    if (k < 1) throw std::invalid_argument("neighbor order must be at least 1");
    usable = std::min(usable, energies.size());
    if (usable < k + 2)
        throw std::invalid_argument("need at least " + std::to_string(k + 2) +
                                    " usable levels, have " + std::to_string(usable));
    SpacingSample s{k, {}, usable};
    s.values.reserve(usable - k);
    for (std::size_t n = 0; n + k < usable; ++n)
        s.values.push_back((energies[n + k] - energies[n]) / omega);
    return s;
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

SpacingSample spacings(const eigen::Spectrum& spectrum, std::size_t k) {
    const std::size_t filtered = static_cast<std::size_t>(
        eigen::kDefaultConvergedFraction * static_cast<double>(spectrum.energies.size()));
    const std::size_t usable =
        spectrum.converged_count > 0 ? std::min(spectrum.converged_count, filtered) : filtered;
    return spacings_impl(spectrum.energies, spectrum.params.omega, usable, k);
}

SpacingSample spacings_from_energies(const std::vector<double>& energies, double omega,
                                     std::size_t k) {
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
    return spacings_impl(energies, omega, energies.size(), k);
}

SpacingHistogram histogram(const SpacingSample& sample, double bin_width) {
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be positive");
    if (sample.values.empty()) throw std::invalid_argument("empty spacing sample");

    const double vmax = *std::max_element(sample.values.begin(), sample.values.end());
    if (vmax < 0.0) throw std::invalid_argument("spacing sample has negative entries");
    const std::size_t nbins =
        static_cast<std::size_t>(std::floor(vmax / bin_width)) + 1;

    SpacingHistogram h;
    h.bin_edges.resize(nbins + 1);
    for (std::size_t i = 0; i <= nbins; ++i)
        h.bin_edges[i] = bin_width * static_cast<double>(i);
    h.counts.assign(nbins, 0);
    for (double v : sample.values) {
        std::size_t b = static_cast<std::size_t>(v / bin_width);
        if (b >= nbins) b = nbins - 1;
        ++h.counts[b];
    }
    const double mass = static_cast<double>(sample.values.size()) * bin_width;
    h.density.resize(nbins);
    for (std::size_t i = 0; i < nbins; ++i)
        h.density[i] = static_cast<double>(h.counts[i]) / mass;

    // strict local maxima; a flat plateau counts once, located at its center
    std::size_t i = 0;
    while (i < nbins) {
        if (h.density[i] == 0.0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < nbins && h.density[j + 1] == h.density[i]) ++j;
        const bool left_lower = (i == 0) || h.density[i - 1] < h.density[i];
        const bool right_lower = (j + 1 == nbins) || h.density[j + 1] < h.density[i];
        if (left_lower && right_lower)
            h.peak_locations.push_back(0.5 * (h.bin_edges[i] + h.bin_edges[j + 1]));
        i = j + 1;
    }
    return h;
}

double pole_spacing_diagnostic(const model::ModelParams& params) {
    model::validate(params);
    if (!(params.delta < 1.0))
        throw std::invalid_argument("pole spacing defined for delta < 1");
    return 2.0 * (1.0 - params.delta) * params.omega;
}

InterweaveReport interweave_report(const SpacingSample& s1, const SpacingSample& s2) {
    if (s1.k != 1 || s2.k != 2)
        throw std::invalid_argument("interweave report expects k = 1 and k = 2 samples");
    if (s2.values.size() + 1 != s1.values.size() || s1.levels_used != s2.levels_used)
        throw std::invalid_argument("samples do not come from the same spectrum");

    InterweaveReport rep{};

    // telescoping identity s2(n) = s1(n) + s1(n+1)
    double err = 0.0;
    for (std::size_t n = 0; n < s2.values.size(); ++n)
        err = std::max(err, std::fabs(s2.values[n] - s1.values[n] - s1.values[n + 1]));
    rep.identity_error = err;
    rep.identity_ok = err <= 1e-10;

    rep.s1_median = quantile(s1.values, 0.5);
    rep.s2_median = quantile(s2.values, 0.5);
    rep.s2_iqr = quantile(s2.values, 0.75) - quantile(s2.values, 0.25);

    // two dominant peaks of the s1 density
    const auto h = histogram({1, s1.values, s1.levels_used});
    double best1 = -1.0, best2 = -1.0, loc1 = 0.0, loc2 = 0.0;
    for (double loc : h.peak_locations) {
        const std::size_t b = std::min(
            static_cast<std::size_t>(loc / kDefaultBinWidth), h.density.size() - 1);
        const double d = h.density[b];
        if (d > best1) {
            best2 = best1;
            loc2 = loc1;
            best1 = d;
            loc1 = loc;
        } else if (d > best2) {
            best2 = d;
            loc2 = loc;
        }
    }
    if (best2 < 0.0) loc2 = loc1;  // single-peak sample
    rep.peak_low = std::min(loc1, loc2);
    rep.peak_high = std::max(loc1, loc2);

    // Wald–Wolfowitz runs z over short/long classification against the median:
    // alternation inflates the run count, giving z > 0.
    std::size_t n_short = 0, n_long = 0, runs = 0;
    bool prev = false;
    for (std::size_t n = 0; n < s1.values.size(); ++n) {
        const bool lng = s1.values[n] >= rep.s1_median;
        (lng ? n_long : n_short)++;
        if (n == 0 || lng != prev) ++runs;
        prev = lng;
    }
    const double n1 = static_cast<double>(n_short), n2 = static_cast<double>(n_long);
    const double nn = n1 + n2;
    if (n1 > 0 && n2 > 0 && nn > 2) {
        const double mean = 2.0 * n1 * n2 / nn + 1.0;
        const double var = 2.0 * n1 * n2 * (2.0 * n1 * n2 - nn) / (nn * nn * (nn - 1.0));
        rep.runs_statistic = var > 0.0 ? (static_cast<double>(runs) - mean) / std::sqrt(var) : 0.0;
    } else {
        rep.runs_statistic = 0.0;  // degenerate sample, no short/long split
    }
    return rep;
}

}  // namespace qrm::stats
