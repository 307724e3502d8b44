#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/grid.hpp"

namespace saddlelab {

enum class Side { Left, Right };

/// One steady state of the flow: the zero solution (n = 0) or the
/// piecewise-quadratic profile with n-1 interior zeros at k/n, either sign.
class Equilibrium {
  public:
    Equilibrium(int n, int sign);

    static Equilibrium zero() { return Equilibrium(0, +1); }

    int index() const { return n_; }
    int sign() const { return sign_; }
    std::string label() const;

    /// Closed-form value; branch selected by k = floor(n x), right-closed at
    /// x = 1. The branches match in value and slope at the breakpoints, so
    /// the selection only fixes bit-level behavior.
    double value(double x) const;

    /// One-sided derivative of the active branch. Both sides agree for these
    /// C^1 profiles; the parameter exists for generic piecewise callers.
    double derivative(double x, Side side = Side::Right) const;

    /// {0, 1/n, ..., 1}. Throws for n = 0, where the zero set is the whole
    /// interval.
    std::vector<double> zeros() const;

    /// Pointwise sign selection: sign of value(x), 0 at exact zeros.
    double heaviside(double x) const;

    std::vector<double> sample_values(const Grid& grid) const;

  private:
    int branch(double x) const;

    int n_;
    int sign_;
};

/// Lyapunov energy E(u) = (1/2) u'Ku - trapezoid(|u|).
double energy(std::span<const double> u, const Grid& grid);

struct NearestResult {
    std::string label;
    double distance;
    int n;
    int sign;  // 0 for the zero solution
};

/// Closest member of {v0} union {v_k^+-, k <= n_max} in the discrete L2
/// metric.
NearestResult nearest_equilibrium(std::span<const double> u, const Grid& grid, int n_max);

}  // namespace saddlelab
