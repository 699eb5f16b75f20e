// stats.hpp — Normalized k-th neighbor spacing statistics.
//
// s_k(n) = (E_{n+k} - E_n)/omega over the converged, truncation-filtered part
// of a spectrum. Histograms use fixed-width bins of raw s_k (no unfolding);
// peaks are strict local maxima with plateau merging.

#pragma once

#include <cstddef>
#include <vector>

#include "qrm/eigen.hpp"
#include "qrm/model.hpp"

namespace qrm::stats {

struct SpacingSample {
    std::size_t k;               // neighbor order
    std::vector<double> values;  // s_k(n), nonnegative
    std::size_t levels_used;     // levels entering after filtering
};

// s_k over the lowest levels of the spectrum; only min(converged_count,
// fraction * size) levels enter so truncation artifacts at the top of the
// computed window never fake large gaps. Requires k + 2 usable levels.
SpacingSample spacings(const eigen::Spectrum& spectrum, std::size_t k);

// Same filter applied to a raw ascending energy list (analytic spectra).
SpacingSample spacings_from_energies(const std::vector<double>& energies, double omega,
                                     std::size_t k);

struct SpacingHistogram {
    std::vector<double> bin_edges;  // ascending, size counts.size() + 1
    std::vector<std::size_t> counts;
    std::vector<double> density;         // sum(density * width) = 1
    std::vector<double> peak_locations;  // bin/plateau centers of local maxima
};

inline constexpr double kDefaultBinWidth = 0.01;

// Fixed-width bins covering [0, max + bin_width). Throws on an empty sample.
SpacingHistogram histogram(const SpacingSample& sample,
                           double bin_width = kDefaultBinWidth);

// Laboratory-energy distance between consecutive Bargmann poles, 2(1-delta)omega;
// divide by omega for the s-units overlay. Requires delta < 1.
double pole_spacing_diagnostic(const model::ModelParams& params);

struct InterweaveReport {
    double peak_low, peak_high;  // two dominant s1 peak locations (low <= high)
    double s1_median, s2_median;
    double s2_iqr;           // interquartile range of s2
    double runs_statistic;   // z-score of short/long runs; > 0 means alternation
    double identity_error;   // max |s2(n) - s1(n) - s1(n+1)|
    bool identity_ok;        // identity_error <= 1e-10
};

// Summary of the interweaving structure: dominant s1 peaks, s2 spread, a
// runs-test z for short/long alternation, and the telescoping identity check.
// Both samples must come from the same spectrum (sizes must be consistent).
InterweaveReport interweave_report(const SpacingSample& s1, const SpacingSample& s2);

}  // namespace qrm::stats
