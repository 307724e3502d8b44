#include "core/inclusion.hpp"

#include <algorithm>
#include <cmath>

namespace saddlelab {

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(t_end >= dt)) throw std::invalid_argument("SolverConfig: t_end must be at least dt");
    if (!(selection_tolerance >= 0.0))
        throw std::invalid_argument("SolverConfig: selection_tolerance must be nonnegative");
    if (record_stride < 1) throw std::invalid_argument("SolverConfig: record_stride must be >= 1");
}

std::vector<double> selection_load(std::span<const double> u, const Grid& grid,
                                   double selection_tolerance) {
    const std::size_t ni = grid.interior_count();
    if (u.size() != ni) throw std::invalid_argument("selection_load: dimension mismatch");
    const double h = grid.cell_width();
    const std::size_t cells = grid.cell_count();
    std::vector<double> full(cells + 1, 0.0);
    std::copy(u.begin(), u.end(), full.begin() + 1);
    std::vector<double> load(cells + 1, 0.0);
    auto sgn = [&](double v) -> double {
        if (std::abs(v) <= selection_tolerance) return 0.0;
        return v > 0.0 ? 1.0 : -1.0;
    };
    for (std::size_t c = 0; c < cells; ++c) {
        const double a = full[c];
        const double b = full[c + 1];
        const double sa = sgn(a);
        const double sb = sgn(b);
        if (sa == 0.0 && sb == 0.0) continue;
        if (sa == 0.0 || sb == 0.0 || sa == sb) {
            const double s = sa != 0.0 ? sa : sb;
            load[c] += s * h / 2.0;
            load[c + 1] += s * h / 2.0;
        } else {
            const double th = a / (a - b);  // interpolant zero within the cell
            load[c] += h * (sa * (th - th * th / 2.0) + sb * (1.0 - th) * (1.0 - th) / 2.0);
            load[c + 1] += h * (sa * th * th / 2.0 + sb * (1.0 - th * th) / 2.0);
        }
    }
    return {load.begin() + 1, load.end() - 1};
}

Stepper::Stepper(const Grid& grid, const SolverConfig& cfg)
    : grid_(&grid), cfg_(cfg), factor_([&] {
          cfg.validate();
          SymTridiag a = grid.mass();
          a.axpy(cfg.dt, grid.stiffness());
          return ThomasFactor(a);
      }()) {}

std::vector<double> Stepper::advance(std::span<const double> u) const {
    auto rhs = grid_->mass().apply(u);
    const auto f = selection_load(u, *grid_, cfg_.selection_tolerance);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += cfg_.dt * f[i];
    return factor_.solve(rhs);
}

std::vector<double> step(std::span<const double> u, const SolverConfig& cfg, const Grid& grid) {
    return Stepper(grid, cfg).advance(u);
}

Trajectory simulate(std::span<const double> u0, const Equilibrium& reference,
                    const SolverConfig& cfg, const Grid& grid,
                    const std::function<bool(const Trajectory&)>& stop) {
    cfg.validate();
    const Stepper stepper(grid, cfg);
    const auto ref = reference.sample_values(grid);
    std::vector<double> u(u0.begin(), u0.end());
    std::vector<double> diff(u.size());
    Trajectory traj;
    const auto total = static_cast<long long>(std::llround(cfg.t_end / cfg.dt));
    auto record = [&](long long it) {
        const double t = static_cast<double>(it) * cfg.dt;
        for (std::size_t i = 0; i < u.size(); ++i) diff[i] = u[i] - ref[i];
        traj.times.push_back(t);
        traj.states.push_back(u);
        traj.dist_l2.push_back(grid.norm(diff, Norm::L2));
        traj.dist_h01.push_back(grid.norm(diff, Norm::H01));
        traj.dist_hm1.push_back(grid.norm(diff, Norm::Hminus1));
        traj.energies.push_back(energy(u, grid));
        return stop && stop(traj);
    };
    for (long long it = 0; it <= total; ++it) {
        if (it % cfg.record_stride == 0 || it == total) {
            if (record(it)) break;
        }
        if (it < total) u = stepper.advance(u);
    }
    return traj;
}

namespace {

double interpolant(std::span<const double> v_full, double h, double x) {
    const auto cells = v_full.size() - 1;
    auto c = static_cast<std::size_t>(std::floor(x / h));
    if (c >= cells) c = cells - 1;
    const double t = (x - static_cast<double>(c) * h) / h;
    return v_full[c] * (1.0 - t) + v_full[c + 1] * t;
}

/// Integral of the hat phi_i from 0 to x; piecewise quadratic.
double hat_antiderivative(std::size_t i, double x, double h) {
    const double xl = (static_cast<double>(i) - 1.0) * h;
    const double xc = static_cast<double>(i) * h;
    const double xr = (static_cast<double>(i) + 1.0) * h;
    if (x <= xl) return 0.0;
    if (x >= xr) return h;
    if (x <= xc) {
        const double t = (x - xl) / h;
        return h * t * t / 2.0;
    }
    const double t = (x - xc) / h;
    return h / 2.0 + h * (t - t * t / 2.0);
}

int count_sign_changes(std::span<const double> v_full, double tol) {
    int changes = 0;
    double prev = 0.0;
    for (double v : v_full) {
        if (std::abs(v) <= tol) continue;
        const double s = v > 0.0 ? 1.0 : -1.0;
        if (prev != 0.0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

}  // namespace

double locate_shifted_zero(std::span<const double> v_full, const Grid& grid, int j) {
    const int n = grid.mode_n();
    const double h = grid.cell_width();
    const double xj = static_cast<double>(j) / n;
    const double half = 1.0 / (2.0 * n);
    double lo = xj - half + h * 1e-9;
    double hi = xj + half - h * 1e-9;
    double flo = interpolant(v_full, h, lo);
    double fhi = interpolant(v_full, h, hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw ZeroCountMismatch("residual_g: no transversal zero near " + std::to_string(xj));
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = interpolant(v_full, h, mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> residual_g(std::span<const double> z, int n, int sign, const Grid& grid) {
    if (n < 2) throw std::invalid_argument("residual_g: n must be >= 2");
    if (grid.mode_n() != n) throw std::invalid_argument("residual_g: grid not aligned with n");
    const std::size_t ni = grid.interior_count();
    if (z.size() != ni) throw std::invalid_argument("residual_g: dimension mismatch");
    const Equilibrium eq(n, sign);
    const double h = grid.cell_width();
    const std::size_t cells = grid.cell_count();
    std::vector<double> v_full(cells + 1, 0.0);
    for (std::size_t i = 1; i < cells; ++i) v_full[i] = eq.value(grid.node_coordinate(i)) + z[i - 1];

    const int changes = count_sign_changes(v_full, 0.0);
    if (changes != n - 1)
        throw ZeroCountMismatch("residual_g: profile has " + std::to_string(changes) +
                                " interior sign changes, expected " + std::to_string(n - 1));

    std::vector<double> f(ni, 0.0);
    const int M = grid.nodes_per_subinterval();
    for (int j = 1; j < n; ++j) {
        const double xj = static_cast<double>(j) / n;
        const double xv = locate_shifted_zero(v_full, grid, j);
        // H0(v) - H0(v_n) = sign * 2 (-1)^{j+1} on the sliver between j/n and
        // the shifted zero (signed integral covers both orders).
        const double coef = static_cast<double>(sign) * 2.0 * ((j % 2 == 0) ? -1.0 : 1.0);
        const double a = std::min(xj, xv);
        const double b = std::max(xj, xv);
        const auto i_lo = static_cast<std::size_t>(std::max<long long>(1, llround(std::floor(a / h))));
        const auto i_hi = std::min<std::size_t>(ni, static_cast<std::size_t>(llround(std::ceil(b / h))) + 1);
        for (std::size_t i = i_lo; i <= i_hi && i <= ni; ++i)
            f[i - 1] += coef * (hat_antiderivative(i, xv, h) - hat_antiderivative(i, xj, h));
        const std::size_t node = static_cast<std::size_t>(j) * M;
        f[node - 1] -= 4.0 * n * z[node - 1];
    }
    return f;
}

double lipschitz_probe(std::span<const double> z1, std::span<const double> z2, int n, int sign,
                       const Grid& grid) {
    const auto g1 = residual_g(z1, n, sign, grid);
    const auto g2 = residual_g(z2, n, sign, grid);
    std::vector<double> gdiff(g1.size()), zdiff(z1.size());
    for (std::size_t i = 0; i < g1.size(); ++i) gdiff[i] = g1[i] - g2[i];
    for (std::size_t i = 0; i < z1.size(); ++i) zdiff[i] = z1[i] - z2[i];
    const double denom_diff = grid.norm(zdiff, Norm::H01);
    if (denom_diff == 0.0) return 0.0;
    const double denom = (std::sqrt(grid.norm(z1, Norm::H01)) + std::sqrt(grid.norm(z2, Norm::H01))) *
                         denom_diff;
    return grid.norm(gdiff, Norm::Hminus1, /*functional=*/true) / denom;
}

}  // namespace saddlelab
