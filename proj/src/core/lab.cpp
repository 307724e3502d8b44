#include "core/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "core/fem_spectrum.hpp"
#include "core/linefit.hpp"
#include "core/shooting.hpp"

namespace saddlelab {

Quantity& ExperimentReport::add_quantity(Quantity q) {
    if (q.has_tolerance) {
        q.passed = q.value >= q.tol_lo && q.value <= q.tol_hi;
        passed = passed && q.passed;
    }
    quantities.push_back(std::move(q));
    return quantities.back();
}

namespace {

/// Reference |lambda_1|: the closed-form root for n = 2, 3, the shooter scan
/// otherwise.
std::pair<double, std::string> reference_lambda1(int n) {
    if (n == 2 || n == 3) {
        const auto taus = closed_form_negative_roots(n);
        const double tau = taus.back();  // largest tau <-> most negative eigenvalue
        return {tau * tau, n == 2 ? "closed-form root of tau = 4 tanh(tau/2)"
                                  : "closed-form root of the n=3 hyperbolic equation (g)"};
    }
    auto scan = find_eigenvalues(n, 1, 1.0);
    if (scan.eigenvalues.empty() || scan.eigenvalues.front() >= 0.0)
        throw std::runtime_error("reference_lambda1: no negative eigenvalue found");
    return {-scan.eigenvalues.front(), "transfer-matrix shooting scan"};
}

std::vector<double> normalized_direction(const Grid& grid, const DirectionSpec& dir) {
    std::vector<double> d;
    if (dir.kind == DirectionSpec::Kind::Eigen) {
        auto pairs = fem_spectrum(grid, dir.index);
        d = std::move(pairs.back().vector);
    } else {
        const double k = static_cast<double>(dir.index);
        d = grid.sample([&](double x) { return std::sin(k * M_PI * x); });
        const double nrm = grid.norm(d, Norm::L2);
        for (auto& v : d) v /= nrm;
    }
    return d;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    const int t = std::max(1, threads);
    if (t == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < t; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

ExperimentReport growth_rate(const GrowthParams& p) {
    ExperimentReport rep;
    rep.experiment = "growth";
    rep.add_param("n", p.n);
    rep.add_param("sign", p.sign);
    rep.add_param("eps", p.eps);
    rep.add_param("M", p.cells_per_subinterval);
    rep.add_param("dt", p.dt);
    rep.add_param("t_end", p.t_end);
    rep.add_param("record_stride", p.record_stride);
    rep.add_param("delta0", p.delta0);
    rep.add_param("rel_tol", p.rel_tol);

    const auto grid = std::make_shared<Grid>(p.n, p.cells_per_subinterval);
    const auto [lam1, provenance] = reference_lambda1(p.n);
    rep.add_note("reference", provenance);

    auto e1 = fem_spectrum(*grid, 1).front().vector;
    const Equilibrium eq(p.n, p.sign);
    auto u0 = eq.sample_values(*grid);
    for (std::size_t i = 0; i < u0.size(); ++i) u0[i] += p.eps * e1[i];

    SolverConfig cfg{p.dt, p.t_end, 1e-14, p.record_stride};
    const double lo = 10.0 * p.eps;
    const double hi = p.delta0 / 10.0;
    Trajectory traj = simulate(u0, eq, cfg, *grid, [&](double, std::span<const double>) {
        return false;
    });
    // Trim the run once the ball is left; simulate's stop sees states, the
    // recorded distances are what we filter on.
    std::vector<double> ts, logs;
    Series curve{"log_dist_l2", {}};
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.dist_l2[i] > p.delta0) break;
        curve.points.emplace_back(traj.times[i], std::log(traj.dist_l2[i]));
        if (traj.dist_l2[i] >= lo && traj.dist_l2[i] <= hi) {
            ts.push_back(traj.times[i]);
            logs.push_back(std::log(traj.dist_l2[i]));
        }
    }
    rep.series.push_back(std::move(curve));
    if (ts.size() < 2) {
        rep.inconclusive = true;
        rep.passed = false;
        rep.add_note("error", "fit window is empty; eps too large or delta0 too small");
        return rep;
    }
    const LineFit fit = fit_line(ts, logs);
    rep.add_quantity({.name = "fitted_slope",
                      .value = fit.slope,
                      .window_lo = ts.front(),
                      .window_hi = ts.back(),
                      .fit_residual = fit.rms,
                      .has_tolerance = true,
                      .tol_lo = lam1 * (1.0 - p.rel_tol),
                      .tol_hi = lam1 * (1.0 + p.rel_tol)});
    rep.add_quantity({.name = "reference_rate", .value = lam1});
    return rep;
}

ExperimentReport decay_rate(const DecayParams& p) {
    ExperimentReport rep;
    rep.experiment = "decay";
    rep.add_param("eps", p.eps);
    rep.add_param("wave_index", p.wave_index);
    rep.add_param("M", p.cells);
    rep.add_param("dt", p.dt);
    rep.add_param("t_end", p.t_end);
    rep.add_param("record_stride", p.record_stride);
    rep.add_param("ball_radius", p.ball_radius);
    rep.add_param("rel_tol", p.rel_tol);
    rep.add_note("reference", "first Dirichlet heat rate pi^2 (frozen selection near v1+)");

    const auto grid = std::make_shared<Grid>(1, p.cells);
    const Equilibrium eq(1, +1);
    auto u0 = eq.sample_values(*grid);
    const double k = static_cast<double>(p.wave_index);
    bool positive = true;
    for (std::size_t i = 0; i < u0.size(); ++i) {
        u0[i] += p.eps * std::sin(k * M_PI * grid->node_coordinate(i + 1));
        positive = positive && u0[i] > 0.0;
    }
    if (!positive) {
        rep.inconclusive = true;
        rep.passed = false;
        rep.add_note("error", "perturbed profile loses positivity; the frozen-selection argument does not apply");
        return rep;
    }
    if (p.eps == 0.0) {
        rep.inconclusive = true;
        rep.add_note("error", "zero perturbation: steady state, decay slope undefined");
        return rep;
    }

    SolverConfig cfg{p.dt, p.t_end, 1e-14, p.record_stride};
    Trajectory traj = simulate(u0, eq, cfg, *grid);
    std::vector<double> ts, logs;
    Series curve{"log_dist_l2", {}};
    double max_dist = 0.0;
    const double window_hi = 0.9 * traj.dist_l2.front();
    const double window_lo = 1e-2 * traj.dist_l2.front();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        max_dist = std::max(max_dist, traj.dist_l2[i]);
        if (traj.dist_l2[i] <= 0.0) break;
        curve.points.emplace_back(traj.times[i], std::log(traj.dist_l2[i]));
        if (traj.dist_l2[i] <= window_hi && traj.dist_l2[i] >= window_lo) {
            ts.push_back(traj.times[i]);
            logs.push_back(std::log(traj.dist_l2[i]));
        }
    }
    rep.series.push_back(std::move(curve));
    if (ts.size() < 2) {
        rep.inconclusive = true;
        rep.passed = false;
        rep.add_note("error", "fit window is empty");
        return rep;
    }
    const LineFit fit = fit_line(ts, logs);
    const double ref = -M_PI * M_PI;
    Quantity q{.name = "fitted_slope",
               .value = fit.slope,
               .window_lo = ts.front(),
               .window_hi = ts.back(),
               .fit_residual = fit.rms};
    if (p.wave_index == 1) {
        q.has_tolerance = true;
        q.tol_lo = ref * (1.0 + p.rel_tol);
        q.tol_hi = ref * (1.0 - p.rel_tol);
    }
    rep.add_quantity(q);
    rep.add_quantity({.name = "max_dist_l2",
                      .value = max_dist,
                      .has_tolerance = true,
                      .tol_lo = 0.0,
                      .tol_hi = p.ball_radius});
    return rep;
}

ExperimentReport residual_scaling(const ResidualParams& p) {
    ExperimentReport rep;
    rep.experiment = "residual";
    rep.add_param("n", p.n);
    rep.add_param("sign", p.sign);
    rep.add_param("M", p.cells_per_subinterval);
    rep.add_param("direction_index", p.direction.index);
    rep.add_note("direction_kind", p.direction.kind == DirectionSpec::Kind::Eigen ? "eigen" : "wave");
    for (std::size_t i = 0; i < p.eps_list.size(); ++i)
        rep.add_param("eps_" + std::to_string(i), p.eps_list[i]);
    if (p.eps_list.size() < 2) throw std::invalid_argument("residual_scaling: need at least two amplitudes");

    const Grid grid(p.n, p.cells_per_subinterval);
    const auto dir = normalized_direction(grid, p.direction);

    std::vector<double> norms(p.eps_list.size());
    std::exception_ptr first_error;
    std::mutex err_mutex;
    parallel_for(p.eps_list.size(), p.threads, [&](std::size_t i) {
        try {
            std::vector<double> z(dir.size());
            for (std::size_t j = 0; j < z.size(); ++j) z[j] = p.eps_list[i] * dir[j];
            const auto g = residual_g(z, p.n, p.sign, grid);
            norms[i] = grid.norm(g, Norm::Hminus1, /*functional=*/true);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    });
    if (first_error) std::rethrow_exception(first_error);

    Series curve{"hm1_vs_eps", {}};
    std::vector<double> le, ln;
    for (std::size_t i = 0; i < p.eps_list.size(); ++i) {
        curve.points.emplace_back(p.eps_list[i], norms[i]);
        le.push_back(std::log(p.eps_list[i]));
        ln.push_back(std::log(std::max(norms[i], 1e-300)));
    }
    rep.series.push_back(std::move(curve));
    const LineFit fit = fit_line(le, ln);
    rep.add_quantity({.name = "loglog_slope",
                      .value = fit.slope,
                      .window_lo = p.eps_list.back(),
                      .window_hi = p.eps_list.front(),
                      .fit_residual = fit.rms,
                      .has_tolerance = true,
                      .tol_lo = p.slope_lo,
                      .tol_hi = p.slope_hi});
    return rep;
}

namespace {

struct SaddleFrame {
    std::shared_ptr<Grid> grid;
    SpectralDecomposition dec;
    Projections proj;
    double lambda1_abs;
};

SaddleFrame make_frame(int n, int M, int retained, ProjectionInner inner) {
    auto grid = std::make_shared<Grid>(n, M);
    auto dec = compute_spectrum(n, retained, SpectralMethod::Fem, grid);
    Projections proj(dec, inner);
    const double lam1 = -dec.eigenvalues.front();
    return {grid, std::move(dec), std::move(proj), lam1};
}

}  // namespace

ExperimentReport tangency_unstable(const TangencyUnstableParams& p) {
    ExperimentReport rep;
    rep.experiment = "tangency-u";
    rep.add_param("n", p.n);
    rep.add_param("sign", p.sign);
    rep.add_param("eps", p.eps);
    rep.add_param("M", p.cells_per_subinterval);
    rep.add_param("dt", p.dt);
    rep.add_param("t_end", p.t_end);
    rep.add_param("record_stride", p.record_stride);
    rep.add_param("delta0", p.delta0);
    rep.add_param("retained", p.retained);
    rep.add_note("projection_inner", p.inner == ProjectionInner::L2 ? "l2" : "hminus1");
    rep.add_note("ratio_norms", "headline H01; L2 also reported");

    auto frame = make_frame(p.n, p.cells_per_subinterval, p.retained, p.inner);
    const auto& grid = *frame.grid;
    const Equilibrium eq(p.n, p.sign);
    const auto veq = eq.sample_values(grid);
    auto u0 = veq;
    const auto& e1 = frame.dec.eigenfunctions.front();
    for (std::size_t i = 0; i < u0.size(); ++i) u0[i] += p.eps * e1[i];

    const double lo = 10.0 * p.eps;
    const double hi = p.delta0 / 10.0;
    Series table{"ratio_vs_dist", {}};
    Series table_l2{"ratio_l2_vs_dist", {}};
    double k_h01 = 0.0, k_l2 = 0.0, r0 = -1.0;
    std::vector<double> z(u0.size());
    SolverConfig cfg{p.dt, p.t_end, 1e-14, p.record_stride};
    simulate(u0, eq, cfg, grid, [&](double, std::span<const double> u) {
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = u[i] - veq[i];
        const double dist = grid.norm(z, Norm::L2);
        const auto parts = frame.proj.split(z);
        const double e1_h01 = grid.norm(parts.e1, Norm::H01);
        const double e2_h01 = grid.norm(parts.e2, Norm::H01);
        const double e1_l2 = grid.norm(parts.e1, Norm::L2);
        const double e2_l2 = grid.norm(parts.e2, Norm::L2);
        const double r_h01 = e1_h01 > 0.0 ? e2_h01 / e1_h01 : 0.0;
        const double r_l2 = e1_l2 > 0.0 ? e2_l2 / e1_l2 : 0.0;
        if (r0 < 0.0) r0 = r_h01;
        if (dist >= lo && dist <= hi) {
            table.points.emplace_back(dist, r_h01);
            table_l2.points.emplace_back(dist, r_l2);
            k_h01 = std::max(k_h01, r_h01 / std::sqrt(grid.norm(z, Norm::H01)));
            k_l2 = std::max(k_l2, r_l2 / std::sqrt(dist));
        }
        return dist > p.delta0;
    });
    rep.series.push_back(std::move(table));
    rep.series.push_back(std::move(table_l2));
    if (rep.series.front().points.empty()) {
        rep.inconclusive = true;
        rep.passed = false;
        rep.add_note("error", "no snapshots inside the ratio window");
        return rep;
    }
    rep.add_quantity({.name = "envelope_K_h01",
                      .value = k_h01,
                      .window_lo = lo,
                      .window_hi = hi,
                      .has_tolerance = true,
                      .tol_lo = 0.0,
                      .tol_hi = std::numeric_limits<double>::max()});  // finiteness is the claim
    rep.add_quantity({.name = "envelope_K_l2", .value = k_l2, .window_lo = lo, .window_hi = hi});
    rep.add_quantity({.name = "initial_ratio",
                      .value = r0,
                      .has_tolerance = true,
                      .tol_lo = 0.0,
                      .tol_hi = 1e-8});
    return rep;
}

double tangency_stable_ratio(int n, int sign, double eps, int cells_per_subinterval, double dt,
                             int record_stride, int retained, ProjectionInner inner,
                             int direction_index) {
    auto frame = make_frame(n, cells_per_subinterval, retained, inner);
    const auto& grid = *frame.grid;
    const int m = frame.proj.unstable_dim();
    const int dir = direction_index > 0 ? direction_index : m;  // 0-based: e_{m+1}
    const Equilibrium eq(n, sign);
    const auto veq = eq.sample_values(grid);
    const double t_window = std::log(1.0 / (10.0 * std::sqrt(eps))) / frame.lambda1_abs;
    if (!(t_window > 0.0))
        throw std::invalid_argument("tangency_stable: window empty for this amplitude");
    auto u0 = veq;
    const auto& edir = frame.dec.eigenfunctions[dir];
    for (std::size_t i = 0; i < u0.size(); ++i) u0[i] += eps * edir[i];
    double max_ratio = 0.0;
    std::vector<double> z(u0.size());
    SolverConfig cfg{dt, t_window, 1e-14, record_stride};
    simulate(u0, eq, cfg, grid, [&](double, std::span<const double> u) {
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = u[i] - veq[i];
        const auto parts = frame.proj.split(z);
        const double e1_h01 = grid.norm(parts.e1, Norm::H01);
        const double e2_h01 = grid.norm(parts.e2, Norm::H01);
        if (e2_h01 > 0.0) max_ratio = std::max(max_ratio, e1_h01 / e2_h01);
        return false;
    });
    return max_ratio;
}

ExperimentReport tangency_stable(const TangencyStableParams& p) {
    ExperimentReport rep;
    rep.experiment = "tangency-s";
    rep.add_param("n", p.n);
    rep.add_param("sign", p.sign);
    rep.add_param("M", p.cells_per_subinterval);
    rep.add_param("dt", p.dt);
    rep.add_param("record_stride", p.record_stride);
    rep.add_param("retained", p.retained);
    for (std::size_t i = 0; i < p.eps_list.size(); ++i)
        rep.add_param("eps_" + std::to_string(i), p.eps_list[i]);
    rep.add_note("projection_inner", p.inner == ProjectionInner::L2 ? "l2" : "hminus1");
    if (p.eps_list.size() < 2) throw std::invalid_argument("tangency_stable: need an eps sweep");

    std::vector<double> ratios(p.eps_list.size());
    std::exception_ptr first_error;
    std::mutex err_mutex;
    parallel_for(p.eps_list.size(), p.threads, [&](std::size_t i) {
        try {
            ratios[i] = tangency_stable_ratio(p.n, p.sign, p.eps_list[i], p.cells_per_subinterval,
                                              p.dt, p.record_stride, p.retained, p.inner);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    });
    if (first_error) std::rethrow_exception(first_error);

    Series sweep{"max_ratio_vs_eps", {}};
    std::vector<double> le, lr;
    double k_fit = 0.0;
    for (std::size_t i = 0; i < p.eps_list.size(); ++i) {
        sweep.points.emplace_back(p.eps_list[i], ratios[i]);
        le.push_back(std::log(p.eps_list[i]));
        lr.push_back(std::log(std::max(ratios[i], 1e-300)));
        k_fit = std::max(k_fit, ratios[i] / std::sqrt(p.eps_list[i]));
    }
    rep.series.push_back(std::move(sweep));
    const LineFit fit = fit_line(le, lr);
    rep.add_quantity({.name = "sweep_loglog_slope",
                      .value = fit.slope,
                      .window_lo = p.eps_list.back(),
                      .window_hi = p.eps_list.front(),
                      .fit_residual = fit.rms,
                      .has_tolerance = true,
                      .tol_lo = p.slope_lo,
                      .tol_hi = p.slope_hi});
    rep.add_quantity({.name = "envelope_K", .value = k_fit});
    return rep;
}

ExperimentReport connection_probe(const ConnectParams& p) {
    ExperimentReport rep;
    rep.experiment = "connect";
    rep.add_param("n_from", p.n_from);
    rep.add_param("sign", p.sign);
    rep.add_param("direction_sign", p.direction_sign);
    rep.add_param("eps", p.eps);
    rep.add_param("M", p.cells_per_subinterval);
    rep.add_param("dt", p.dt);
    rep.add_param("t_end", p.t_end);
    rep.add_param("n_max", p.n_max);
    rep.add_param("settle_check_stride", p.settle_check_stride);
    rep.add_param("settle_rel_tol", p.settle_rel_tol);
    rep.add_param("distance_tol", p.distance_tol);

    const int grid_n = std::max(1, p.n_from);
    const Grid grid(grid_n, p.cells_per_subinterval);
    const Equilibrium source = p.n_from == 0 ? Equilibrium::zero() : Equilibrium(p.n_from, p.sign);
    auto u = source.sample_values(grid);
    std::vector<double> dir;
    if (p.n_from == 0) {
        dir = grid.sample([](double x) { return std::sin(M_PI * x); });
        const double nrm = grid.norm(dir, Norm::L2);
        for (auto& v : dir) v /= nrm;
        rep.add_note("kick", "sin(pi x)");
    } else {
        dir = fem_spectrum(grid, 1).front().vector;
        rep.add_note("kick", "e1");
    }
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += p.direction_sign * p.eps * dir[i];

    SolverConfig cfg{p.dt, p.t_end, 1e-14, 1};
    cfg.validate();
    const Stepper stepper(grid, cfg);
    const double source_energy = energy(source.sample_values(grid), grid);
    const auto total = static_cast<long long>(std::llround(p.t_end / p.dt));
    bool settled = false;
    double settle_time = 0.0;
    double energy_prev = energy(u, grid);
    std::vector<double> u_prev;
    for (long long it = 1; it <= total; ++it) {
        u_prev = u;
        u = stepper.advance(u);
        if (it % p.settle_check_stride == 0) {
            const double e_now = energy(u, grid);
            const double rel = std::abs(energy_prev - e_now) / std::max(std::abs(e_now), 1e-300);
            if (rel < p.settle_rel_tol) {
                settled = true;
                settle_time = static_cast<double>(it) * p.dt;
                break;
            }
            energy_prev = e_now;
        }
    }
    double dudt = 0.0;
    if (!u_prev.empty()) {
        std::vector<double> d(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) d[i] = (u[i] - u_prev[i]) / p.dt;
        dudt = grid.norm(d, Norm::L2);
    }
    const auto nearest = nearest_equilibrium(u, grid, p.n_max);
    const double end_energy = energy(u, grid);

    rep.add_note("source", source.label());
    rep.add_note("endpoint", nearest.label);
    rep.add_quantity({.name = "endpoint_distance_l2",
                      .value = nearest.distance,
                      .has_tolerance = settled,
                      .tol_lo = 0.0,
                      .tol_hi = p.distance_tol});
    rep.add_quantity({.name = "settle_time", .value = settled ? settle_time : -1.0});
    rep.add_quantity({.name = "dudt_proxy_l2", .value = dudt});
    rep.add_quantity({.name = "source_energy", .value = source_energy});
    rep.add_quantity({.name = "endpoint_energy", .value = end_energy});
    if (!settled) {
        rep.inconclusive = true;
        rep.passed = false;
        rep.add_note("error", "energy still decreasing at t_end; endpoint not classified as settled");
        return rep;
    }
    const bool not_source = nearest.label != source.label();
    const bool downhill = end_energy < source_energy;
    const bool lower_index = p.n_from < 2 || nearest.n < p.n_from;
    rep.add_quantity({.name = "no_homoclinic",
                      .value = not_source ? 1.0 : 0.0,
                      .has_tolerance = true,
                      .tol_lo = 1.0,
                      .tol_hi = 1.0});
    rep.add_quantity({.name = "energy_decreased",
                      .value = downhill ? 1.0 : 0.0,
                      .has_tolerance = true,
                      .tol_lo = 1.0,
                      .tol_hi = 1.0});
    rep.add_quantity({.name = "lower_index",
                      .value = lower_index ? 1.0 : 0.0,
                      .has_tolerance = true,
                      .tol_lo = 1.0,
                      .tol_hi = 1.0});
    return rep;
}

}  // namespace saddlelab
