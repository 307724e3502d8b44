#include "core/fem_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace saddlelab {

SymTridiag fem_operator(const Grid& grid) {
    SymTridiag a = grid.stiffness();
    for (std::size_t node : grid.delta_node_indices()) a.diag[node - 1] -= grid.delta_strength();
    return a;
}

namespace {

double bisect_eigenvalue(const SymTridiag& a, const SymTridiag& b, int index, double lo,
                         double hi) {
    // Smallest sigma with inertia_below(sigma) >= index + 1.
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (inertia_below(a, b, mid) >= index + 1)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid)))
            break;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> inverse_iteration(const SymTridiag& a, const SymTridiag& b, double lambda,
                                      const Grid& grid) {
    const std::size_t n = a.size();
    std::vector<double> v(n);
    // Deterministic, sign-varying start vector; orthogonality against prior
    // vectors is not needed because the shift isolates one eigenvalue.
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + 2.7 * static_cast<double>(i));
    const double shift = lambda * (1.0 + 1e-11) + 1e-11;
    for (int it = 0; it < 3; ++it) {
        auto rhs = b.apply(v);
        v = shifted_solve(a, b, shift, rhs);
        const double nrm = grid.norm(v, Norm::L2);
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw std::runtime_error("fem_spectrum: inverse iteration broke down");
        for (auto& x : v) x /= nrm;
    }
    return v;
}

}  // namespace

std::vector<FemEigenpair> fem_spectrum(const Grid& grid, int how_many) {
    if (how_many < 1) throw std::invalid_argument("fem_spectrum: how_many must be >= 1");
    if (static_cast<std::size_t>(how_many) > grid.interior_count())
        throw std::invalid_argument("fem_spectrum: how_many exceeds interior node count");
    const SymTridiag a = fem_operator(grid);
    const SymTridiag& b = grid.mass();

    // Gershgorin-style bounds for the pencil: |lambda| <= max |row(A)| / min eig(M_h) rows.
    double amax = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = std::abs(a.diag[i]);
        if (i > 0) row += std::abs(a.off[i - 1]);
        if (i + 1 < a.size()) row += std::abs(a.off[i]);
        amax = std::max(amax, row);
    }
    const double h = grid.cell_width();
    const double bmin = h / 3.0;  // smallest Gershgorin bound for M_h rows
    double lo = -amax / bmin - 1.0;
    double hi = amax / bmin + 1.0;
    while (inertia_below(a, b, lo) > 0) lo *= 2.0;
    while (inertia_below(a, b, hi) < how_many) hi *= 2.0;

    std::vector<FemEigenpair> out;
    out.reserve(how_many);
    for (int j = 0; j < how_many; ++j) {
        const double lambda = bisect_eigenvalue(a, b, j, lo, hi);
        auto v = inverse_iteration(a, b, lambda, grid);
        // M_h-orthogonalize against earlier vectors of (numerically) equal
        // eigenvalue, then re-normalize.
        for (const auto& prev : out) {
            if (std::abs(prev.lambda - lambda) > 1e-6 * std::max(1.0, std::abs(lambda))) continue;
            const double c = grid.inner_l2(prev.vector, v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * prev.vector[i];
        }
        const double nrm = grid.norm(v, Norm::L2);
        if (nrm > 0.0)
            for (auto& x : v) x /= nrm;
        for (double x : v) {
            if (x != 0.0) {
                if (x < 0.0)
                    for (auto& y : v) y = -y;
                break;
            }
        }
        const auto au = a.apply(v);
        const auto bu = b.apply(v);
        double rnum = 0.0, rden = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double r = au[i] - lambda * bu[i];
            rnum += r * r;
            rden += bu[i] * bu[i];
        }
        out.push_back({lambda, std::move(v), std::sqrt(rnum / std::max(rden, 1e-300))});
    }
    return out;
}

}  // namespace saddlelab
