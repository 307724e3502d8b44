#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "core/equilibrium.hpp"
#include "core/grid.hpp"

namespace saddlelab {

/// Thrown when a perturbed profile does not have the n-1 transversal
/// interior sign changes the linearization neighborhood requires.
struct ZeroCountMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double dt = 1e-4;
    double t_end = 1.0;
    double selection_tolerance = 1e-14;
    int record_stride = 1;

    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<double> dist_l2;
    std::vector<double> dist_h01;
    std::vector<double> dist_hm1;
    std::vector<double> energies;

    std::size_t size() const { return times.size(); }
};

/// Load vector of the Heaviside selection: F_i = int phi_i sign(u_hat),
/// where u_hat is the piecewise-linear interpolant of the nodal values and
/// node values within selection_tolerance of zero select 0. Cells whose
/// endpoint values have opposite signs are split exactly at the interpolant
/// zero, so the interface position enters at sub-cell resolution.
std::vector<double> selection_load(std::span<const double> u, const Grid& grid,
                                   double selection_tolerance);

/// One semi-implicit step: (M_h + dt K) u+ = M_h u + dt F(u), implicit in
/// the diffusion and explicit in the bounded selection term.
class Stepper {
  public:
    Stepper(const Grid& grid, const SolverConfig& cfg);

    std::vector<double> advance(std::span<const double> u) const;

    const Grid& grid() const { return *grid_; }
    const SolverConfig& config() const { return cfg_; }

  private:
    const Grid* grid_;
    SolverConfig cfg_;
    ThomasFactor factor_;
};

std::vector<double> step(std::span<const double> u, const SolverConfig& cfg, const Grid& grid);

/// Flow from u0 with snapshots every record_stride steps (first and last
/// included). Norm columns are distances to the reference equilibrium.
/// The optional monitor sees the trajectory recorded so far after each
/// snapshot and may stop the run early.
Trajectory simulate(std::span<const double> u0, const Equilibrium& reference,
                    const SolverConfig& cfg, const Grid& grid,
                    const std::function<bool(const Trajectory&)>& stop = {});

/// Functional vector of the linearization remainder
/// g(z) = H0(v_n +- + z) - H0(v_n +-) - 4n sum_j delta_{j/n} z:
/// each shifted zero x_v^j is located by bisection on the nodal interpolant
/// near j/n, the +-2 sliver is integrated against the hat functions in
/// closed form, and 4n z(j/n) is subtracted at the aligned node.
std::vector<double> residual_g(std::span<const double> z, int n, int sign, const Grid& grid);

/// ||g(z1) - g(z2)||_{H^-1} / ((||z1||^(1/2) + ||z2||^(1/2)) ||z1 - z2||_{H01}),
/// with H01 as the computable stand-in for the fractional norm in the
/// square-root factors. The linearization lemma bounds this by a constant;
/// z1 = z2 returns 0.
double lipschitz_probe(std::span<const double> z1, std::span<const double> z2, int n, int sign,
                       const Grid& grid);

/// Zero of the piecewise-linear interpolant of v near j/n, bisected inside
/// the half-width window around the interface. Exposed for tests.
double locate_shifted_zero(std::span<const double> v_full, const Grid& grid, int j);

}  // namespace saddlelab
