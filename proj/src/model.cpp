#include "qrm/model.hpp"

#include <cmath>
#include <stdexcept>

namespace qrm::model {

void validate(const ModelParams& p) {
    if (!(p.omega > 0.0)) throw std::invalid_argument("omega must be positive");
    if (!(p.omega0 >= 0.0)) throw std::invalid_argument("omega0 must be nonnegative");
    if (!(p.g >= 0.0)) throw std::invalid_argument("g must be nonnegative");
    if (!(p.delta >= 0.0 && p.delta <= 1.0))
        throw std::invalid_argument("delta must lie in [0,1]");
}

ScaledParams scaled_params(const ModelParams& p) {
    validate(p);
    if (p.delta == 1.0)
        throw std::invalid_argument("relativistic limit has no Bargmann scaling");
    const double pref = 2.0 * (1.0 - p.delta) * p.omega;
    return {p.g / pref, p.delta * p.omega0 / pref, pref};
}

double TridiagonalOperator::max_abs_entry() const {
    double m = 0.0;
    for (double v : diag) m = std::max(m, std::fabs(v));
    for (double v : offdiag) m = std::max(m, std::fabs(v));
    return m;
}

TridiagonalOperator build_sector_hamiltonian(const ModelParams& p, Sector sector,
                                             std::size_t dim) {
    validate(p);
    if (dim < 2) throw std::invalid_argument("dim must be at least 2");

    TridiagonalOperator op;
    op.dim = dim;
    op.diag.resize(dim);
    op.offdiag.resize(dim - 1);

    const double hop = 2.0 * p.omega * (1.0 - p.delta);
    const double par = parity_sign(sector) * p.delta * p.omega0;
    for (std::size_t n = 0; n < dim; ++n) {
        const double pi_n = (n % 2 == 0) ? 1.0 : -1.0;
        op.diag[n] = hop * static_cast<double>(n) + par * pi_n;
    }
    for (std::size_t n = 0; n + 1 < dim; ++n)
        op.offdiag[n] = p.g * std::sqrt(static_cast<double>(n + 1));
    return op;
}

}  // namespace qrm::model
