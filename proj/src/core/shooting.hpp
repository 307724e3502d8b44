#pragma once

#include <span>
#include <vector>

#include "core/grid.hpp"

namespace saddlelab {

/// Transfer-matrix shooter for the Dirichlet eigenproblem of
/// L = -d^2/dx^2 - 4n sum_k delta_{k/n}. The pair (U, U') is propagated
/// across each delta-free interval with the exact closed-form propagator
/// (trigonometric for lambda > 0, hyperbolic for lambda < 0, affine for
/// lambda = 0); at each interior node U is continuous and U' drops by
/// 4n U(k/n).
class CharacteristicEvaluator {
  public:
    explicit CharacteristicEvaluator(int n);

    int mode_n() const { return n_; }
    double interface_strength() const { return 4.0 * n_; }

    /// D(lambda) = U(1; lambda) with U(0) = 0, U'(0) = 1. Zeros of D are
    /// exactly the eigenvalues.
    double operator()(double lambda) const;

    /// Shooter solution evaluated at x, for any lambda (not necessarily an
    /// eigenvalue).
    double evaluate(double lambda, double x) const;

    /// (U, U') of the shooter at x, taken on the branch that owns x
    /// (post-jump at the interfaces).
    struct State {
        double u;
        double du;
    };
    State state(double lambda, double x) const;

  private:
    // Post-jump states at the left ends of the n subintervals.
    std::vector<State> interval_states(double lambda) const;

    int n_;
};

struct EigenvalueScan {
    std::vector<double> eigenvalues;   // sorted ascending
    int negative_count = 0;
    bool resolution_warning = false;   // scan halving hit its cap
    std::vector<double> suspect;       // locations flagged as possible multiple roots
};

/// All roots of D in [-(4n)^2, lambda_max], located by a sign-change scan in
/// tau (uniform oscillation spacing) and refined by bisection. The scan step
/// is halved until the root count stabilizes, up to a cap; an unstable count
/// is reported, never guessed away. The lower bound comes from the coercivity
/// shift of the quadratic form, and the scan verifies there is no sign change
/// below it.
EigenvalueScan find_eigenvalues(int n, int how_many, double lambda_max);

/// Positive roots of the closed-form negative-eigenvalue equations:
/// n = 2: tau = 4 tanh(tau/2) (one root);
/// n = 3: the unique positive roots tau_f < tau_g of
///   f(tau) = tau - (tau+12) tanh(tau/3) - e^{tau/3} (tau + (tau-12) tanh(tau/3)),
///   g(tau) = tau - (tau+12) tanh(tau/3) + e^{tau/3} (tau + (tau-12) tanh(tau/3)).
/// The eigenvalues are -tau^2 (for n = 3: -tau_g^2 < -tau_f^2).
std::vector<double> closed_form_negative_roots(int n);

double closed_form_equation_n2(double tau);
double closed_form_f_n3(double tau);
double closed_form_g_n3(double tau);

/// The displayed positive-eigenvalue equation for n = 3:
/// g(tau) = 108 sin(tau/3) - 36 sin(tau) + 12 tau cos(tau)
///          - 12 tau cos(tau/3) + tau^2 sin(tau).
double positive_equation_n3(double tau);

/// Nodal samples of the shooter eigenfunction for an eigenvalue lambda
/// (|D(lambda)| must be below root_tol), normalized to unit discrete L2 norm
/// with the derivative at 0 positive.
std::vector<double> eigenfunction(int n, double lambda, const Grid& grid,
                                  double root_tol = 1e-8);

/// Largest violation of the interface conditions over the interior nodes,
/// |U'_-(k/n) - U'_+(k/n) - 4n U(k/n)|, with one-sided derivatives obtained
/// by rebuilding each branch analytically from the sampled values alone
/// (value at the interface plus the best-conditioned sample inside the
/// interval), so the check does not reuse the shooter's own jump update.
double interface_residual(int n, double lambda, std::span<const double> samples,
                          const Grid& grid);

}  // namespace saddlelab
