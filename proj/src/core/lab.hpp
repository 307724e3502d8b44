#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/inclusion.hpp"
#include "core/spectral.hpp"

namespace saddlelab {

/// One measured number with the window it was fitted on, the fit residual,
/// and the declared tolerance band it is judged against (when it has one).
struct Quantity {
    std::string name;
    double value = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double fit_residual = 0.0;
    bool has_tolerance = false;
    double tol_lo = 0.0;
    double tol_hi = 0.0;
    bool passed = true;
};

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<std::pair<std::string, double>> params;
    std::vector<std::pair<std::string, std::string>> notes;  // provenance, labels
    std::vector<Quantity> quantities;
    std::vector<Series> series;
    bool passed = true;
    bool inconclusive = false;

    Quantity& add_quantity(Quantity q);
    void add_param(const std::string& k, double v) { params.emplace_back(k, v); }
    void add_note(const std::string& k, const std::string& v) { notes.emplace_back(k, v); }
};

struct GrowthParams {
    int n = 2;
    int sign = +1;
    double eps = 1e-5;
    int cells_per_subinterval = 512;  // h = 1 / (n M)
    double dt = 1e-5;
    double t_end = 2.0;
    int record_stride = 100;
    double delta0 = 1e-2;
    double rel_tol = 0.10;
};

/// Escape-rate fit from v_n^sign + eps e1: least-squares slope of
/// log ||z||_L2 over the window 10 eps <= ||z|| <= delta0/10, judged against
/// the most negative eigenvalue.
ExperimentReport growth_rate(const GrowthParams& p);

struct DecayParams {
    double eps = 1e-3;
    int wave_index = 1;  // perturbation direction sin(wave_index pi x)
    int cells = 1024;
    double dt = 1e-5;
    double t_end = 0.75;
    int record_stride = 100;
    double ball_radius = 1e-2;
    double rel_tol = 0.05;
};

/// Decay-rate fit toward v_1^+; the frozen selection makes the flow linear
/// there, so the reference slope is -pi^2.
ExperimentReport decay_rate(const DecayParams& p);

struct DirectionSpec {
    enum class Kind { Eigen, Wave } kind = Kind::Eigen;
    int index = 1;  // eigenfunction number, or sin(index pi x)
};

struct ResidualParams {
    int n = 2;
    int sign = +1;
    std::vector<double> eps_list = {1e-2, 1e-3, 1e-4, 1e-5};
    DirectionSpec direction;
    int cells_per_subinterval = 512;
    double slope_lo = 1.3;
    double slope_hi = 1.7;
    int threads = 1;
};

/// Log-log fit of ||g(eps direction)||_{H^-1} against eps.
ExperimentReport residual_scaling(const ResidualParams& p);

struct TangencyUnstableParams {
    int n = 2;
    int sign = +1;
    double eps = 1e-6;
    int cells_per_subinterval = 512;
    double dt = 1e-5;
    double t_end = 3.0;
    int record_stride = 200;
    double delta0 = 1e-2;
    int retained = 12;
    ProjectionInner inner = ProjectionInner::L2;
};

/// Forward-grown unstable branch: ratio ||E2 z|| / ||E1 z|| against
/// ||z||^(1/2) over the window [10 eps, delta0/10]; reports the fitted
/// envelope constant K in the H01 headline proxy and in L2.
ExperimentReport tangency_unstable(const TangencyUnstableParams& p);

struct TangencyStableParams {
    int n = 2;
    int sign = +1;
    std::vector<double> eps_list = {1e-3, 1e-4, 1e-5};
    int cells_per_subinterval = 512;
    double dt = 1e-5;
    int record_stride = 20;
    int retained = 12;
    ProjectionInner inner = ProjectionInner::L2;
    double slope_lo = 0.35;
    double slope_hi = 0.65;
    int threads = 1;
};

/// Short-time consistency check from the first stable direction e_{m+1}:
/// per eps, the max of ||E1 z|| / ||E2 z|| over [0, T] with T chosen so the
/// unstable growth cannot dominate (e^{|lambda_1| T} eps^{3/2} <= eps/10),
/// then a log-log fit of the max-ratio sweep against eps.
ExperimentReport tangency_stable(const TangencyStableParams& p);

/// Single-run version; returns the max short-time ratio for one amplitude.
double tangency_stable_ratio(int n, int sign, double eps, int cells_per_subinterval, double dt,
                             int record_stride, int retained, ProjectionInner inner,
                             int direction_index = 0 /* 0 = first stable */);

struct ConnectParams {
    int n_from = 2;  // 0 probes from the zero solution with a sin(pi x) kick
    int sign = +1;
    int direction_sign = +1;
    double eps = 1e-5;
    int cells_per_subinterval = 512;
    double dt = 1e-4;
    double t_end = 10.0;
    int n_max = 6;
    int settle_check_stride = 100;
    double settle_rel_tol = 1e-10;
    double distance_tol = 1e-3;
};

/// Kick v_{n_from}^sign along +-eps e1, run until the energy plateaus, and
/// classify the endpoint against the equilibrium catalog. A run that is
/// still dissipating at t_end is reported inconclusive, never guessed.
ExperimentReport connection_probe(const ConnectParams& p);

}  // namespace saddlelab
