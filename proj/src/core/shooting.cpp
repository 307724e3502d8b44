#include "core/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace saddlelab {

namespace {

struct Basis {
    // Solutions of -U'' = lambda U on a local coordinate s >= 0 with
    // (B1, B1')(0) = (1, 0) and (B2, B2')(0) = (0, 1).
    double b1, b2, db1, db2;
};

Basis basis_at(double lambda, double s) {
    if (lambda > 0.0) {
        const double t = std::sqrt(lambda);
        return {std::cos(t * s), std::sin(t * s) / t, -t * std::sin(t * s), std::cos(t * s)};
    }
    if (lambda < 0.0) {
        const double t = std::sqrt(-lambda);
        return {std::cosh(t * s), std::sinh(t * s) / t, t * std::sinh(t * s), std::cosh(t * s)};
    }
    return {1.0, s, 0.0, 1.0};
}

}  // namespace

CharacteristicEvaluator::CharacteristicEvaluator(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("CharacteristicEvaluator: n must be >= 2");
}

std::vector<CharacteristicEvaluator::State> CharacteristicEvaluator::interval_states(
    double lambda) const {
    std::vector<State> states;
    states.reserve(n_);
    const double w = 1.0 / n_;
    State s{0.0, 1.0};
    for (int k = 0; k < n_; ++k) {
        states.push_back(s);
        const Basis b = basis_at(lambda, w);
        const State next{s.u * b.b1 + s.du * b.b2, s.u * b.db1 + s.du * b.db2};
        s = next;
        if (k < n_ - 1) s.du -= interface_strength() * s.u;
    }
    states.push_back(s);  // terminal state at x = 1
    return states;
}

double CharacteristicEvaluator::operator()(double lambda) const {
    return interval_states(lambda).back().u;
}

CharacteristicEvaluator::State CharacteristicEvaluator::state(double lambda, double x) const {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("CharacteristicEvaluator: x outside [0,1]");
    const auto states = interval_states(lambda);
    int k = static_cast<int>(std::floor(n_ * x));
    if (k > n_ - 1) k = n_ - 1;
    const double s = x - static_cast<double>(k) / n_;
    const Basis b = basis_at(lambda, s);
    const State& a = states[k];
    return {a.u * b.b1 + a.du * b.b2, a.u * b.db1 + a.du * b.db2};
}

double CharacteristicEvaluator::evaluate(double lambda, double x) const {
    return state(lambda, x).u;
}

namespace {

double bisect_root(const CharacteristicEvaluator& d, double lo, double hi) {
    double flo = d(lo);
    double fhi = d(hi);
    const double scale = std::max({1.0, std::abs(flo), std::abs(fhi)});
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = d(mid);
        if (std::abs(fm) <= 1e-12 * scale &&
            hi - lo <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid)))
            return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid)))
            return 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

// Scan in the signed variable s with lambda = sign(s) s^2, so the positive
// branch is sampled uniformly in the oscillation variable tau.
std::vector<double> scan_roots(const CharacteristicEvaluator& d, double s_lo, double s_hi,
                               double ds) {
    auto lam = [](double s) { return s < 0.0 ? -s * s : s * s; };
    std::vector<double> roots;
    double s_prev = s_lo;
    double f_prev = d(lam(s_prev));
    const auto steps = static_cast<std::size_t>(std::ceil((s_hi - s_lo) / ds));
    for (std::size_t i = 1; i <= steps; ++i) {
        const double s = std::min(s_lo + ds * static_cast<double>(i), s_hi);
        const double f = d(lam(s));
        if (f == 0.0) {
            roots.push_back(lam(s));
        } else if ((f_prev < 0.0) != (f < 0.0)) {
            roots.push_back(bisect_root(d, lam(s_prev), lam(s)));
        }
        s_prev = s;
        f_prev = f;
    }
    return roots;
}

}  // namespace

EigenvalueScan find_eigenvalues(int n, int how_many, double lambda_max) {
    if (n < 2) throw std::invalid_argument("find_eigenvalues: n must be >= 2");
    if (how_many < 1) throw std::invalid_argument("find_eigenvalues: how_many must be >= 1");
    const CharacteristicEvaluator d(n);

    double floor_lambda = -16.0 * n * n;
    // The form bound keeps the spectrum above the floor; verify there is no
    // sign change below it and widen if one shows up.
    for (int attempt = 0; attempt < 4; ++attempt) {
        bool clean = true;
        double f_prev = d(1.5 * floor_lambda);
        for (int i = 1; i <= 64; ++i) {
            const double lam = 1.5 * floor_lambda + (0.5 * -floor_lambda) * i / 64.0;
            const double f = d(lam);
            if ((f_prev < 0.0) != (f < 0.0)) {
                clean = false;
                break;
            }
            f_prev = f;
        }
        if (clean) break;
        floor_lambda *= 2.0;
    }

    const double s_lo = -std::sqrt(-floor_lambda);
    const double s_hi = std::sqrt(std::max(lambda_max, 1.0));
    double ds = std::min(M_PI / (8.0 * n), 0.05 * (s_hi - s_lo));

    EigenvalueScan out;
    auto roots = scan_roots(d, s_lo, s_hi, ds);
    bool stable = false;
    for (int halving = 0; halving < 12; ++halving) {
        ds *= 0.5;
        auto finer = scan_roots(d, s_lo, s_hi, ds);
        if (finer.size() == roots.size()) {
            roots = std::move(finer);
            stable = true;
            break;
        }
        // Remember where the counts disagreed; these are candidate close or
        // multiple roots.
        for (double r : finer) {
            const bool matched = std::any_of(roots.begin(), roots.end(), [&](double q) {
                return std::abs(q - r) <= ds * (std::abs(r) + 1.0);
            });
            if (!matched) out.suspect.push_back(r);
        }
        roots = std::move(finer);
    }
    out.resolution_warning = !stable;
    if (stable) out.suspect.clear();

    std::sort(roots.begin(), roots.end());
    if (static_cast<int>(roots.size()) > how_many) roots.resize(how_many);
    out.negative_count = static_cast<int>(
        std::count_if(roots.begin(), roots.end(), [](double lam) { return lam < 0.0; }));
    out.eigenvalues = std::move(roots);
    return out;
}

double closed_form_equation_n2(double tau) { return tau - 4.0 * std::tanh(tau / 2.0); }

double closed_form_f_n3(double tau) {
    const double th = std::tanh(tau / 3.0);
    return tau - (tau + 12.0) * th - std::exp(tau / 3.0) * (tau + (tau - 12.0) * th);
}

double closed_form_g_n3(double tau) {
    const double th = std::tanh(tau / 3.0);
    return tau - (tau + 12.0) * th + std::exp(tau / 3.0) * (tau + (tau - 12.0) * th);
}

namespace {

double bisect_scalar(double (*f)(double), double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw std::runtime_error("closed_form_negative_roots: bracket without sign change");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) break;
    }
    return 0.5 * (lo + hi);
}

double bracketed_root(double (*f)(double), double lo, double hi) {
    // Scan for the sign change first; each map has exactly one positive root.
    const int steps = 2000;
    double a = lo;
    double fa = f(a);
    for (int i = 1; i <= steps; ++i) {
        const double b = lo + (hi - lo) * i / steps;
        const double fb = f(b);
        if (fa == 0.0) return a;
        if ((fa < 0.0) != (fb < 0.0)) return bisect_scalar(f, a, b);
        a = b;
        fa = fb;
    }
    throw std::runtime_error("closed_form_negative_roots: no sign change in scan range");
}

}  // namespace

std::vector<double> closed_form_negative_roots(int n) {
    if (n == 2) return {bracketed_root(&closed_form_equation_n2, 0.1, 20.0)};
    if (n == 3) {
        const double tau_f = bracketed_root(&closed_form_f_n3, 0.05, 50.0);
        const double tau_g = bracketed_root(&closed_form_g_n3, 0.05, 50.0);
        return {std::min(tau_f, tau_g), std::max(tau_f, tau_g)};
    }
    throw std::invalid_argument("closed_form_negative_roots: only n = 2 and n = 3 have closed forms");
}

double positive_equation_n3(double tau) {
    return 108.0 * std::sin(tau / 3.0) - 36.0 * std::sin(tau) + 12.0 * tau * std::cos(tau) -
           12.0 * tau * std::cos(tau / 3.0) + tau * tau * std::sin(tau);
}

std::vector<double> eigenfunction(int n, double lambda, const Grid& grid, double root_tol) {
    const CharacteristicEvaluator d(n);
    if (std::abs(d(lambda)) > root_tol)
        throw std::invalid_argument("eigenfunction: lambda is not a root of the characteristic");
    auto u = grid.sample([&](double x) { return d.evaluate(lambda, x); });
    const double nrm = grid.norm(u, Norm::L2);
    if (nrm == 0.0) throw std::runtime_error("eigenfunction: degenerate shooter solution");
    for (auto& v : u) v /= nrm;  // positive factor keeps U'(0) = 1/nrm > 0
    return u;
}

double interface_residual(int n, double lambda, std::span<const double> samples,
                          const Grid& grid) {
    if (grid.mode_n() != n) throw std::invalid_argument("interface_residual: grid/mode mismatch");
    if (samples.size() != grid.interior_count())
        throw std::invalid_argument("interface_residual: dimension mismatch");
    const int M = grid.nodes_per_subinterval();
    const double h = grid.cell_width();
    auto value_at = [&](std::size_t node) -> double {
        if (node == 0 || node == grid.cell_count()) return 0.0;
        return samples[node - 1];
    };
    // Rebuild the branch on one subinterval from its left-node value and the
    // best-conditioned interior sample, then differentiate the closed form.
    auto branch_coeffs = [&](int k) -> std::pair<double, double> {
        const std::size_t base = static_cast<std::size_t>(k) * M;
        const double c1 = value_at(base);
        double best = 0.0;
        int best_j = 1;
        for (int j = 1; j < M; ++j) {
            const double b2 = basis_at(lambda, j * h).b2;
            if (std::abs(b2) > best) {
                best = std::abs(b2);
                best_j = j;
            }
        }
        const Basis b = basis_at(lambda, best_j * h);
        const double c2 = (value_at(base + best_j) - c1 * b.b1) / b.b2;
        return {c1, c2};
    };
    double worst = 0.0;
    const double w = 1.0 / n;
    for (int k = 1; k < n; ++k) {
        const auto [a1, a2] = branch_coeffs(k - 1);
        const Basis end = basis_at(lambda, w);
        const double du_minus = a1 * end.db1 + a2 * end.db2;
        const auto [b1, b2] = branch_coeffs(k);
        (void)b1;
        const double du_plus = b2;  // B1'(0) = 0, B2'(0) = 1
        const double u_k = value_at(static_cast<std::size_t>(k) * M);
        worst = std::max(worst, std::abs(du_minus - du_plus - 4.0 * n * u_k));
    }
    return worst;
}

}  // namespace saddlelab
