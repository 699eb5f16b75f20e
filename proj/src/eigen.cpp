#include "qrm/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "qrm/sturm_kernels.hpp"

namespace qrm::eigen {

namespace {

struct Interval {
    double lo, hi;
    std::int64_t clo, chi;  // eigenvalue counts strictly below lo / hi
};

struct Problem {
    const double* diag;
    std::vector<double> off2;
    std::size_t n;
    double pivmin;
    double tol;        // documented worst-case width, 1e-10 * ||T||
    double tol_floor;  // few-ulp absolute floor near zero
    double gl, gu;

    // Interval acceptance: tighter than the documented bound whenever the
    // eigenvalue magnitude allows, so low-lying levels come out with absolute
    // error far below 1e-10 * ||T||.
    double width_tol(double lo, double hi) const {
        const double mag = std::max(std::fabs(lo), std::fabs(hi));
        return std::min(tol, std::max({4.0 * pivmin, tol_floor, 1e-12 * mag}));
    }
};

Problem make_problem(const model::TridiagonalOperator& op) {
    if (op.dim < 2 || op.diag.size() != op.dim || op.offdiag.size() != op.dim - 1)
        throw std::invalid_argument("malformed tridiagonal operator");
    Problem pb;
    pb.n = op.dim;
    pb.diag = op.diag.data();
    pb.off2.resize(pb.n - 1);
    for (std::size_t i = 0; i + 1 < pb.n; ++i) pb.off2[i] = op.offdiag[i] * op.offdiag[i];
    pb.pivmin = kernels::pivmin_for(pb.off2.data(), pb.n);
    pb.tol = 1e-10 * std::max(1e-300, op.max_abs_entry());
    pb.tol_floor = 2.0 * std::numeric_limits<double>::epsilon() * op.max_abs_entry();

    double gl = op.diag[0], gu = op.diag[0];
    for (std::size_t i = 0; i < pb.n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(op.offdiag[i - 1]);
        if (i + 1 < pb.n) r += std::fabs(op.offdiag[i]);
        gl = std::min(gl, op.diag[i] - r);
        gu = std::max(gu, op.diag[i] + r);
    }
    const double pad = 2.0 * pb.tol +
                       std::numeric_limits<double>::epsilon() * std::max(std::fabs(gl), std::fabs(gu));
    pb.gl = gl - pad;
    pb.gu = gu + pad;
    return pb;
}

// Bisection on the shared subdivision tree of [gl, gu]. Every interval splits
// at its exact midpoint, so the refinement path of an eigenvalue does not
// depend on which other indices are being tracked; results are identical
// across serial and partitioned runs.
void bisect_range(const Problem& pb, kernels::SturmBatchFn kernel,
                  std::size_t first, std::size_t last, double* out) {
    std::vector<Interval> active{{pb.gl, pb.gu, 0, static_cast<std::int64_t>(pb.n)}};
    std::vector<Interval> next;
    std::vector<double> shifts;
    std::vector<std::int64_t> counts;

    auto emit = [&](const Interval& iv) {
        const double mid = 0.5 * (iv.lo + iv.hi);
        const auto a = std::max<std::int64_t>(iv.clo, static_cast<std::int64_t>(first));
        const auto b = std::min<std::int64_t>(iv.chi, static_cast<std::int64_t>(last));
        for (std::int64_t k = a; k < b; ++k) out[k - static_cast<std::int64_t>(first)] = mid;
    };

    while (!active.empty()) {
        shifts.resize(active.size());
        counts.resize(active.size());
        for (std::size_t i = 0; i < active.size(); ++i)
            shifts[i] = 0.5 * (active[i].lo + active[i].hi);
        kernel(pb.diag, pb.off2.data(), pb.n, shifts.data(), counts.data(), shifts.size(),
               pb.pivmin);

        next.clear();
        for (std::size_t i = 0; i < active.size(); ++i) {
            const Interval& iv = active[i];
            const double mid = shifts[i];
            const std::int64_t cm = std::clamp(counts[i], iv.clo, iv.chi);
            const Interval children[2] = {{iv.lo, mid, iv.clo, cm}, {mid, iv.hi, cm, iv.chi}};
            for (const Interval& ch : children) {
                if (ch.chi <= ch.clo) continue;
                if (ch.chi <= static_cast<std::int64_t>(first) ||
                    ch.clo >= static_cast<std::int64_t>(last))
                    continue;
                if (ch.hi - ch.lo <= pb.width_tol(ch.lo, ch.hi))
                    emit(ch);
                else
                    next.push_back(ch);
            }
        }
        active.swap(next);
    }
}

}  // namespace

std::vector<double> eigenvalues(const model::TridiagonalOperator& op,
                                std::optional<IndexRange> range) {
    const Problem pb = make_problem(op);
    const IndexRange r = range.value_or(IndexRange{0, op.dim});
    if (r.first >= r.last || r.last > op.dim)
        throw std::invalid_argument("empty or out-of-bounds eigenvalue index range");

    std::vector<double> out(r.count());
    kernels::SturmBatchFn kernel = kernels::select_kernel();

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t nthreads = std::min<std::size_t>(hw, std::max<std::size_t>(1, r.count() / 512));
    if (nthreads <= 1 || op.dim < 2048) {
        bisect_range(pb, kernel, r.first, r.last, out.data());
        return out;
    }

    std::vector<std::thread> pool;
    const std::size_t chunk = (r.count() + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t a = r.first + t * chunk;
        if (a >= r.last) break;
        const std::size_t b = std::min(r.last, a + chunk);
        pool.emplace_back([&, a, b] { bisect_range(pb, kernel, a, b, out.data() + (a - r.first)); });
    }
    for (auto& th : pool) th.join();
    return out;
}

namespace {

// One inverse-iteration step: solve (T - lambda I) v = b by Gaussian
// elimination with partial pivoting (two-band fill-in).
void tridiag_shifted_solve(const model::TridiagonalOperator& op, double lambda,
                           double pivmin, std::vector<double>& v) {
    const std::size_t n = op.dim;
    std::vector<double> dl(n), du1(n, 0.0), du2(n, 0.0);
    std::vector<double> sub(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) dl[i] = op.diag[i] - lambda;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        du1[i] = op.offdiag[i];
        sub[i] = op.offdiag[i];
    }
    // forward elimination
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::fabs(dl[i]) < std::fabs(sub[i])) {
            std::swap(dl[i], sub[i]);          // row swap, sub[i] holds a(i+1,i)
            std::swap(du1[i], dl[i + 1]);
            if (i + 2 < n) {
                du2[i] = du1[i + 1];
                du1[i + 1] = 0.0;
            }
            std::swap(v[i], v[i + 1]);
        }
        double piv = dl[i];
        if (std::fabs(piv) < pivmin) piv = std::copysign(pivmin, piv == 0.0 ? 1.0 : piv);
        const double m = sub[i] / piv;
        dl[i + 1] -= m * du1[i];
        if (i + 2 < n) du1[i + 1] -= m * du2[i];
        v[i + 1] -= m * v[i];
        dl[i] = piv;
    }
    if (std::fabs(dl[n - 1]) < pivmin) dl[n - 1] = std::copysign(pivmin, dl[n - 1] == 0.0 ? 1.0 : dl[n - 1]);
    // back substitution
    for (std::size_t ii = n; ii-- > 0;) {
        double s = v[ii];
        if (ii + 1 < n) s -= du1[ii] * v[ii + 1];
        if (ii + 2 < n) s -= du2[ii] * v[ii + 2];
        v[ii] = s / dl[ii];
    }
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

Spectrum eigenpairs(const model::TridiagonalOperator& op, IndexRange range) {
    if (range.first >= range.last || range.last > op.dim)
        throw std::invalid_argument("eigenpairs: range out of [0, dim)");
    Spectrum sp;
    sp.dim = op.dim;
    sp.energies = eigenvalues(op, range);
    sp.converged_count = sp.energies.size();
    sp.vectors.resize(sp.energies.size());

    std::vector<double> off2(op.dim > 1 ? op.dim - 1 : 0);
    for (std::size_t i = 0; i + 1 < op.dim; ++i) off2[i] = op.offdiag[i] * op.offdiag[i];
    const double pivmin = kernels::pivmin_for(off2.data(), op.dim);
    const double scale = op.max_abs_entry();
    const double cluster_tol = 1e-6 * std::max(1.0, scale);
    const double resid_tol = 1e-8 * std::max(1e-300, scale) * 3.0;

    for (std::size_t k = 0; k < sp.energies.size(); ++k) {
        const double lambda = sp.energies[k];
        std::vector<double>& v = sp.vectors[k];
        v.resize(op.dim);
        // deterministic pseudo-random start
        std::uint64_t s = 0x9e3779b97f4a7c15ULL ^ (k * 0xbf58476d1ce4e5b9ULL + op.dim);
        for (auto& x : v) {
            s ^= s << 13; s ^= s >> 7; s ^= s << 17;
            x = static_cast<double>(static_cast<std::int64_t>(s)) / 9.2e18;
        }

        bool ok = false;
        for (int it = 0; it < 12 && !ok; ++it) {
            tridiag_shifted_solve(op, lambda, pivmin, v);
            // orthogonalize within clusters of close eigenvalues
            for (std::size_t j = k; j-- > 0;) {
                if (lambda - sp.energies[j] > cluster_tol) break;
                double dot = 0.0;
                for (std::size_t i = 0; i < op.dim; ++i) dot += v[i] * sp.vectors[j][i];
                for (std::size_t i = 0; i < op.dim; ++i) v[i] -= dot * sp.vectors[j][i];
            }
            const double nv = norm2(v);
            if (nv == 0.0) continue;
            for (auto& x : v) x /= nv;
            // residual check
            double rmax = 0.0;
            for (std::size_t i = 0; i < op.dim; ++i) {
                double r = (op.diag[i] - lambda) * v[i];
                if (i > 0) r += op.offdiag[i - 1] * v[i - 1];
                if (i + 1 < op.dim) r += op.offdiag[i] * v[i + 1];
                rmax += r * r;
            }
            ok = std::sqrt(rmax) <= resid_tol;
        }
        if (!ok)
            throw std::runtime_error("inverse iteration failed to converge at index " +
                                     std::to_string(range.first + k));
    }
    return sp;
}

std::vector<double> dense_oracle_eigenvalues(const model::TridiagonalOperator& op) {
    if (op.dim > 512) throw std::invalid_argument("oracle is capped at dim 512");
    const std::size_t n = op.dim;
    std::vector<double> d(op.diag), e(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = op.offdiag[i];

    // QL with implicit shifts
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("QL oracle failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::size_t converged_levels(const model::ModelParams& p, model::Sector sector,
                             std::size_t dim, std::size_t probe_dim) {
    if (probe_dim <= dim) throw std::invalid_argument("probe_dim must exceed dim");
    const auto base = eigenvalues(model::build_sector_hamiltonian(p, sector, dim));
    const auto probe = eigenvalues(model::build_sector_hamiltonian(p, sector, probe_dim),
                                   IndexRange{0, dim});
    const double tol = 1e-8 * p.omega;
    std::size_t k = 0;
    while (k < dim && std::fabs(base[k] - probe[k]) <= tol) ++k;
    return k;
}

Spectrum solve(const model::ModelParams& p, model::Sector sector, std::size_t dim) {
    Spectrum sp;
    sp.params = p;
    sp.sector = sector;
    sp.dim = dim;
    sp.energies = eigenvalues(model::build_sector_hamiltonian(p, sector, dim));
    sp.converged_count = static_cast<std::size_t>(kDefaultConvergedFraction * static_cast<double>(dim));
    return sp;
}

}  // namespace qrm::eigen
