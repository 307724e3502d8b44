#include "core/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace saddlelab {

Grid::Grid(int n, int M) : n_(n), m_(M) {
    if (n < 1) throw std::invalid_argument("Grid: equilibrium index n must be >= 1");
    if (M < 2) throw std::invalid_argument("Grid: nodes per subinterval M must be >= 2");
    const std::size_t cells = static_cast<std::size_t>(n) * M;
    h_ = 1.0 / static_cast<double>(cells);
    for (int k = 1; k < n; ++k) delta_nodes_.push_back(static_cast<std::size_t>(k) * M);

    const std::size_t ni = cells - 1;
    stiffness_.diag.assign(ni, 2.0 / h_);
    stiffness_.off.assign(ni - 1, -1.0 / h_);
    mass_.diag.assign(ni, 4.0 * h_ / 6.0);
    mass_.off.assign(ni - 1, h_ / 6.0);
    stiffness_factor_ = std::make_shared<ThomasFactor>(stiffness_);
}

std::vector<double> Grid::solve_stiffness(std::span<const double> rhs) const {
    return stiffness_factor_->solve(rhs);
}

std::vector<double> Grid::solve_stiffness_ldl(std::span<const double> rhs) const {
    return LdlFactor(stiffness_).solve(rhs);
}

double Grid::norm(std::span<const double> u, Norm which, bool functional) const {
    if (u.size() != interior_count()) throw std::invalid_argument("Grid::norm: dimension mismatch");
    switch (which) {
        case Norm::L2: {
            const auto mu = mass_.apply(u);
            double s = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * mu[i];
            return std::sqrt(std::max(s, 0.0));
        }
        case Norm::H01: {
            const auto ku = stiffness_.apply(u);
            double s = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * ku[i];
            return std::sqrt(std::max(s, 0.0));
        }
        case Norm::Hminus1:
            return std::sqrt(std::max(inner_hminus1(u, u, functional), 0.0));
    }
    throw std::logic_error("Grid::norm: unknown norm");
}

double Grid::inner_l2(std::span<const double> u, std::span<const double> v) const {
    if (u.size() != interior_count() || v.size() != interior_count())
        throw std::invalid_argument("Grid::inner_l2: dimension mismatch");
    const auto mv = mass_.apply(v);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * mv[i];
    return s;
}

double Grid::inner_hminus1(std::span<const double> u, std::span<const double> v,
                           bool functional) const {
    if (u.size() != interior_count() || v.size() != interior_count())
        throw std::invalid_argument("Grid::inner_hminus1: dimension mismatch");
    std::vector<double> fu, fv;
    if (!functional) {
        fu = mass_.apply(u);
        fv = mass_.apply(v);
    } else {
        fu.assign(u.begin(), u.end());
        fv.assign(v.begin(), v.end());
    }
    const auto w = solve_stiffness(fv);
    double s = 0.0;
    for (std::size_t i = 0; i < fu.size(); ++i) s += fu[i] * w[i];
    return s;
}

}  // namespace saddlelab
