#include "core/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

namespace saddlelab {

namespace {
void check_range(double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("Equilibrium: x outside [0,1]");
}
}  // namespace

Equilibrium::Equilibrium(int n, int sign) : n_(n), sign_(sign >= 0 ? +1 : -1) {
    if (n < 0) throw std::invalid_argument("Equilibrium: index must be >= 0");
}

std::string Equilibrium::label() const {
    if (n_ == 0) return "v0";
    return "v" + std::to_string(n_) + (sign_ > 0 ? "+" : "-");
}

int Equilibrium::branch(double x) const {
    int k = static_cast<int>(std::floor(n_ * x));
    if (k > n_ - 1) k = n_ - 1;  // right-closed last branch
    return k;
}

double Equilibrium::value(double x) const {
    check_range(x);
    if (n_ == 0) return 0.0;
    const int k = branch(x);
    const double s = x - static_cast<double>(k) / n_;
    const double v = s * s / 2.0 - s / (2.0 * n_);
    return (k % 2 == 0) ? -sign_ * v : sign_ * v;
}

double Equilibrium::derivative(double x, Side side) const {
    check_range(x);
    if (n_ == 0) return 0.0;
    int k = branch(x);
    if (side == Side::Left && k > 0 && x == static_cast<double>(k) / n_) k -= 1;
    const double s = x - static_cast<double>(k) / n_;
    const double d = s - 1.0 / (2.0 * n_);
    return (k % 2 == 0) ? -sign_ * d : sign_ * d;
}

std::vector<double> Equilibrium::zeros() const {
    if (n_ == 0) throw std::invalid_argument("Equilibrium::zeros: the zero solution vanishes everywhere");
    std::vector<double> z(n_ + 1);
    for (int k = 0; k <= n_; ++k) z[k] = static_cast<double>(k) / n_;
    return z;
}

double Equilibrium::heaviside(double x) const {
    const double v = value(x);
    if (v > 0.0) return 1.0;
    if (v < 0.0) return -1.0;
    return 0.0;
}

std::vector<double> Equilibrium::sample_values(const Grid& grid) const {
    return grid.sample([this](double x) { return value(x); });
}

double energy(std::span<const double> u, const Grid& grid) {
    if (u.size() != grid.interior_count()) throw std::invalid_argument("energy: dimension mismatch");
    const auto ku = grid.stiffness().apply(u);
    double quad = 0.0;
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        quad += u[i] * ku[i];
        abs_sum += std::abs(u[i]);  // trapezoid with zero boundary values
    }
    return 0.5 * quad - grid.cell_width() * abs_sum;
}

NearestResult nearest_equilibrium(std::span<const double> u, const Grid& grid, int n_max) {
    if (n_max < 1) throw std::invalid_argument("nearest_equilibrium: n_max must be >= 1");
    std::vector<double> diff(u.size());
    NearestResult best{"", -1.0, 0, 0};
    auto consider = [&](const Equilibrium& eq, int sign) {
        const auto v = eq.sample_values(grid);
        for (std::size_t i = 0; i < u.size(); ++i) diff[i] = u[i] - v[i];
        const double d = grid.norm(diff, Norm::L2);
        if (best.distance < 0.0 || d < best.distance)
            best = {eq.label(), d, eq.index(), eq.index() == 0 ? 0 : sign};
    };
    consider(Equilibrium::zero(), 0);
    for (int n = 1; n <= n_max; ++n) {
        consider(Equilibrium(n, +1), +1);
        consider(Equilibrium(n, -1), -1);
    }
    return best;
}

}  // namespace saddlelab
