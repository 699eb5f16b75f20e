// qrm — command-line front end: spectrum sweeps, G-function roots, Husimi
// portraits, and spacing statistics, emitted as CSV/JSON/SVG.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrm/analytic.hpp"
#include "qrm/eigen.hpp"
#include "qrm/gfunction.hpp"
#include "qrm/husimi.hpp"
#include "qrm/io.hpp"
#include "qrm/model.hpp"
#include "qrm/stats.hpp"

namespace {

namespace fs = std::filesystem;
using qrm::io::RunConfig;

struct CommonOpts {
    double omega = 1.0, omega0 = 1.0, g = 0.99;
    std::string sector = "plus";
    std::string out = ".";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--omega", c.omega, "boson frequency");
    cmd->add_option("--omega0", c.omega0, "qubit frequency");
    cmd->add_option("--g", c.g, "coupling");
    cmd->add_option("--sector", c.sector, "parity sector: plus|minus")
        ->check(CLI::IsMember({"plus", "minus"}));
    cmd->add_option("--out", c.out, "output directory");
}

qrm::model::Sector parse_sector(const std::string& s) {
    return s == "minus" ? qrm::model::Sector::Minus : qrm::model::Sector::Plus;
}

qrm::model::ModelParams make_params(const CommonOpts& c, double delta) {
    return {c.omega, c.omega0, c.g, delta};
}

std::string out_path(const CommonOpts& c, const std::string& name) {
    fs::create_directories(c.out);
    return (fs::path(c.out) / name).string();
}

RunConfig base_config(const std::string& command, const CommonOpts& c) {
    RunConfig cfg;
    cfg.set("command", command);
    cfg.set("omega", c.omega);
    cfg.set("omega0", c.omega0);
    cfg.set("g", c.g);
    cfg.set("sector", c.sector);
    return cfg;
}

std::string delta_tag(double delta) {
    std::string t = qrm::io::format_double(delta);
    std::replace(t.begin(), t.end(), '.', 'p');
    return t;
}

// first/second moments of the position quadratures from Fock amplitudes,
// used to choose phase-space windows
qrm::husimi::Moments fock_moments(const std::vector<double>& v) {
    double a_mean = 0.0, aa = 0.0, ad_a = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
        a_mean += v[k] * v[k + 1] * std::sqrt(static_cast<double>(k + 1));
    for (std::size_t k = 0; k + 2 < v.size(); ++k)
        aa += v[k] * v[k + 2] *
              std::sqrt(static_cast<double>((k + 1) * (k + 2)));
    for (std::size_t k = 0; k < v.size(); ++k)
        ad_a += v[k] * v[k] * static_cast<double>(k);
    // x = (a^+ + a)/2, y = i(a^+ - a)/2; real amplitudes make <y> = 0
    const double mx = a_mean;
    const double x2 = 0.25 * (2.0 * aa + 2.0 * ad_a + 1.0);
    const double y2 = 0.25 * (-2.0 * aa + 2.0 * ad_a + 1.0);
    return {mx, 0.0, x2 - mx * mx, y2};
}

void write_q(const CommonOpts& c, const RunConfig& cfg, const qrm::husimi::QField& q,
             const std::string& tag, const std::string& title) {
    std::vector<std::vector<double>> rows;
    rows.reserve(q.values.size());
    for (std::size_t j = 0; j < q.grid.ny; ++j)
        for (std::size_t i = 0; i < q.grid.nx; ++i) {
            const auto b = q.grid.point(i, j);
            rows.push_back({b.real(), b.imag(), q.values[j * q.grid.nx + i]});
        }
    qrm::io::write_csv(out_path(c, "q_" + tag + ".csv"), cfg, {"x", "y", "Q"}, rows);
    qrm::io::write_svg_heatmap(out_path(c, "q_" + tag + ".svg"), q, title);
}

int cmd_spectrum(const CommonOpts& c, std::vector<double> deltas, std::size_t dim,
                 std::size_t levels) {
    if (deltas.empty()) {  // Fig. 1 default grid: 200 points across [0, 1)
        for (int i = 0; i < 200; ++i) deltas.push_back(static_cast<double>(i) / 200.0);
    }
    RunConfig cfg = base_config("spectrum", c);
    cfg.set("dim", static_cast<long long>(dim));
    cfg.set("levels", static_cast<long long>(levels));
    cfg.set("delta_count", static_cast<long long>(deltas.size()));

    std::vector<std::vector<double>> rows;
    for (double d : deltas) {
        const auto op = qrm::model::build_sector_hamiltonian(make_params(c, d),
                                                             parse_sector(c.sector), dim);
        const auto e = qrm::eigen::eigenvalues(op, qrm::eigen::IndexRange{0, levels});
        for (std::size_t n = 0; n < e.size(); ++n)
            rows.push_back({d, static_cast<double>(n), e[n]});
    }
    qrm::io::write_csv(out_path(c, "energies.csv"), cfg,
                       {"delta", "level_index", "energy"}, rows);
    std::printf("wrote %s (%zu rows)\n", out_path(c, "energies.csv").c_str(), rows.size());
    return 0;
}

int cmd_gfunction(const CommonOpts& c, double delta, std::size_t k_max, double tol) {
    if (delta >= 0.99)
        throw CLI::ValidationError(
            "--delta",
            "pole spacing 2(1-delta)w is too small for a meaningful scan near delta = 1; "
            "use delta < 0.99 or the spectrum subcommand");
    const auto p = make_params(c, delta);
    const auto s = qrm::model::scaled_params(p);

    RunConfig cfg = base_config("gfunction", c);
    cfg.set("delta", delta);
    cfg.set("k_max", static_cast<long long>(k_max));
    cfg.set("tol", tol);

    const auto reports = qrm::gfunction::find_roots(s, k_max, tol);

    std::vector<std::vector<double>> scan;
    for (const auto& rep : reports) {
        constexpr int kScan = 160;
        for (int i = 0; i <= kScan; ++i) {
            const double x = rep.lo + (rep.hi - rep.lo) * i / kScan;
            scan.push_back({x, qrm::gfunction::g_at_zero(s, x, 1e-12).value});
        }
    }
    qrm::io::write_csv(out_path(c, "gfunction.csv"), cfg, {"x", "G"}, scan);

    nlohmann::json jroots = nlohmann::json::array();
    std::size_t total = 0;
    for (const auto& rep : reports) {
        nlohmann::json jr;
        jr["interval"] = rep.interval;
        jr["lo"] = rep.lo;
        jr["hi"] = rep.hi;
        jr["root_count"] = rep.roots.size();
        jr["roots_x"] = rep.roots;
        std::vector<double> lab;
        for (double x : rep.roots) lab.push_back(qrm::gfunction::to_lab_energy(s, x));
        jr["roots_energy"] = lab;
        jr["unresolved"] = rep.unresolved;
        jroots.push_back(jr);
        total += rep.roots.size();
    }
    nlohmann::json doc;
    doc["config"] = cfg.to_json();
    doc["reports"] = jroots;
    doc["total_roots"] = total;
    qrm::io::write_json(out_path(c, "roots.json"), doc);
    std::printf("wrote %s and %s (%zu roots)\n", out_path(c, "gfunction.csv").c_str(),
                out_path(c, "roots.json").c_str(), total);
    return 0;
}

int cmd_husimi(const CommonOpts& c, std::vector<std::size_t> ns, std::vector<double> deltas,
               double x, double mu, bool relativistic, std::size_t grid_n,
               std::size_t dim) {
    RunConfig cfg = base_config("husimi", c);
    cfg.set("grid", static_cast<long long>(grid_n));
    cfg.set("dim", static_cast<long long>(dim));

    if (relativistic) {
        cfg.set("mode", "relativistic");
        cfg.set("x", x);
        cfg.set("mu", mu);
        const auto p = make_params(c, 1.0);
        // squeezed-branch window: means +-2x/(1+mu), squeezed/antisqueezed widths
        const double mean = 2.0 * x / (1.0 + mu);
        const double vx = 0.25 * (1.0 - mu) / (1.0 + mu);
        const double vy = 0.25 * (1.0 + mu) / (1.0 - mu);
        const auto grid = qrm::husimi::auto_grid(0.0, 0.0, mean * mean + vx, vy, grid_n, grid_n);
        const auto q = qrm::husimi::q_relativistic_closed_form(p, x, mu, grid);
        write_q(c, cfg, q, "x" + delta_tag(x) + "_mu" + delta_tag(mu),
                "Q, relativistic regime, x=" + qrm::io::format_double(x) +
                    ", mu=" + qrm::io::format_double(mu));
        return 0;
    }

    if (!deltas.empty()) {  // Fig. 5 mode: numerical ground state per delta
        cfg.set("mode", "ground_state");
        for (double d : deltas) {
            const auto op = qrm::model::build_sector_hamiltonian(make_params(c, d),
                                                                 parse_sector(c.sector), dim);
            const auto sp = qrm::eigen::eigenpairs(op, {0, 1});
            const auto m = fock_moments(sp.vectors[0]);
            const auto grid =
                qrm::husimi::auto_grid(m.mean_x, m.mean_y, m.var_x, m.var_y, grid_n, grid_n);
            const auto q = qrm::husimi::q_from_fock_state({{sp.vectors[0], 1.0}}, grid);
            RunConfig fcfg = cfg;
            fcfg.set("delta", d);
            write_q(c, fcfg, q, "delta" + delta_tag(d),
                    "Q, ground state, delta=" + qrm::io::format_double(d));
        }
        return 0;
    }

    // Fig. 2 mode: degenerate closed form for levels n (default 0, 5, 10)
    cfg.set("mode", "degenerate");
    if (ns.empty()) ns = {0, 5, 10};
    const auto p = make_params(c, 0.0);
    for (std::size_t n : ns) {
        const auto quad = qrm::analytic::degenerate_quadratures(p, n);
        const auto grid = qrm::husimi::auto_grid(quad.mean_x, quad.mean_y, quad.var_x,
                                                 quad.var_y, grid_n, grid_n);
        const auto q = qrm::husimi::q_degenerate_closed_form(p, n, grid);
        RunConfig fcfg = cfg;
        fcfg.set("n", static_cast<long long>(n));
        write_q(c, fcfg, q, "n" + std::to_string(n),
                "Q, degenerate regime, n=" + std::to_string(n));
    }
    return 0;
}

int cmd_stats(const CommonOpts& c, std::vector<double> deltas, std::size_t dim,
              double bin_width) {
    if (deltas.empty()) deltas = {0.0, 0.5, 0.95, 0.9999};
    RunConfig cfg = base_config("stats", c);
    cfg.set("dim", static_cast<long long>(dim));
    cfg.set("bin_width", bin_width);

    nlohmann::json jall;
    jall["config"] = cfg.to_json();
    jall["reports"] = nlohmann::json::array();
    for (double d : deltas) {
        const auto spec = qrm::eigen::solve(make_params(c, d), parse_sector(c.sector), dim);
        qrm::stats::SpacingSample s1, s2;
        try {
            s1 = qrm::stats::spacings(spec, 1);
            s2 = qrm::stats::spacings(spec, 2);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string(e.what()) + "; increase --dim (have " +
                                     std::to_string(dim) + ")");
        }
        RunConfig dcfg = cfg;
        dcfg.set("delta", d);
        dcfg.set("levels_used", static_cast<long long>(s1.levels_used));
        const std::string tag = delta_tag(d);

        for (const auto* s : {&s1, &s2}) {
            std::vector<std::vector<double>> rows;
            for (std::size_t n = 0; n < s->values.size(); ++n)
                rows.push_back({static_cast<double>(n), s->values[n]});
            qrm::io::write_csv(out_path(c, "spacing_k" + std::to_string(s->k) + "_" + tag + ".csv"),
                               dcfg, {"n", "s"}, rows);
            const auto h = qrm::stats::histogram(*s, bin_width);
            std::vector<std::vector<double>> hrows;
            for (std::size_t b = 0; b < h.density.size(); ++b)
                hrows.push_back({h.bin_edges[b], h.bin_edges[b + 1], h.density[b]});
            qrm::io::write_csv(
                out_path(c, "histogram_k" + std::to_string(s->k) + "_" + tag + ".csv"), dcfg,
                {"bin_left", "bin_right", "density"}, hrows);
        }

        const auto rep = qrm::stats::interweave_report(s1, s2);
        nlohmann::json jr;
        jr["delta"] = d;
        jr["levels_used"] = s1.levels_used;
        jr["s1_peaks"] = {rep.peak_low, rep.peak_high};
        jr["s1_median"] = rep.s1_median;
        jr["s2_median"] = rep.s2_median;
        jr["s2_iqr"] = rep.s2_iqr;
        jr["runs_statistic"] = rep.runs_statistic;
        jr["identity_error"] = rep.identity_error;
        jr["identity_ok"] = rep.identity_ok;
        jr["pole_spacing"] = qrm::stats::pole_spacing_diagnostic(make_params(c, d));
        jall["reports"].push_back(jr);
        std::printf("delta=%s: %zu levels, s1 median %.4f, identity err %.2e\n",
                    qrm::io::format_double(d).c_str(), s1.levels_used, rep.s1_median,
                    rep.identity_error);
    }
    qrm::io::write_json(out_path(c, "interweave_report.json"), jall);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpolating quantum Rabi model toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");

    CommonOpts c_spec, c_gfn, c_hus, c_stats;
    std::vector<double> deltas_spec, deltas_hus, deltas_stats;
    double delta_gfn = 0.5;
    std::size_t dim_spec = 1000, dim_hus = 600, dim_stats = 30000;
    std::size_t levels = 11, k_max = 12, grid_n = 64;
    std::vector<std::size_t> ns;
    double x_pos = 0.0, mu = 0.5, tol = 1e-10, bin_width = qrm::stats::kDefaultBinWidth;
    bool relativistic = false;

    auto* sp = app.add_subcommand("spectrum", "delta sweep of the lowest levels");
    add_common(sp, c_spec);
    sp->add_option("--delta,--delta-list", deltas_spec, "delta values (default: 200-point grid)");
    sp->add_option("--dim", dim_spec, "Fock truncation");
    sp->add_option("--levels", levels, "levels per delta");

    auto* gf = app.add_subcommand("gfunction", "G(x;0) scan and certified roots");
    add_common(gf, c_gfn);
    gf->add_option("--delta", delta_gfn, "interpolation parameter (< 0.99)");
    gf->add_option("--k-max", k_max, "scan pole gaps (k, k+1) for k < k_max");
    gf->add_option("--tol", tol, "root bisection tolerance");

    auto* hu = app.add_subcommand("husimi", "Husimi Q portraits");
    add_common(hu, c_hus);
    hu->add_option("--n", ns, "degenerate levels (default 0 5 10)");
    hu->add_option("--delta,--delta-list", deltas_hus, "ground-state mode deltas");
    hu->add_option("--x", x_pos, "relativistic position label");
    hu->add_option("--mu", mu, "squeezing regularization in [0,1)");
    hu->add_flag("--relativistic", relativistic, "finite-mu relativistic closed form");
    hu->add_option("--grid", grid_n, "grid points per axis");
    hu->add_option("--dim", dim_hus, "Fock truncation for numerical states");

    auto* st = app.add_subcommand("stats", "spacing statistics and histograms");
    add_common(st, c_stats);
    st->add_option("--delta,--delta-list", deltas_stats,
                   "delta values (default 0 0.5 0.95 0.9999)");
    st->add_option("--dim", dim_stats, "Fock truncation");
    st->add_option("--bins", bin_width, "histogram bin width in s-units");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sp->parsed()) return cmd_spectrum(c_spec, deltas_spec, dim_spec, levels);
        if (gf->parsed()) return cmd_gfunction(c_gfn, delta_gfn, k_max, tol);
        if (hu->parsed())
            return cmd_husimi(c_hus, ns, deltas_hus, x_pos, mu, relativistic, grid_n, dim_hus);
        if (st->parsed()) return cmd_stats(c_stats, deltas_stats, dim_stats, bin_width);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
