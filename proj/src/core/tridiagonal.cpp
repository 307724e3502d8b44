#include "core/tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace saddlelab {

std::vector<double> SymTridiag::apply(std::span<const double> x) const {
    const std::size_t n = size();
    if (x.size() != n) throw std::invalid_argument("SymTridiag::apply: dimension mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += off[i - 1] * x[i - 1];
        if (i + 1 < n) v += off[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

SymTridiag& SymTridiag::axpy(double a, const SymTridiag& other) {
    if (other.size() != size()) throw std::invalid_argument("SymTridiag::axpy: dimension mismatch");
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] += a * other.diag[i];
    for (std::size_t i = 0; i < off.size(); ++i) off[i] += a * other.off[i];
    return *this;
}

ThomasFactor::ThomasFactor(const SymTridiag& m) {
    const std::size_t n = m.size();
    diag_inv_.resize(n);
    lower_.resize(n > 0 ? n - 1 : 0);
    upper_ = m.off;
    double pivot = m.diag[0];
    if (pivot == 0.0) throw std::runtime_error("ThomasFactor: zero pivot");
    diag_inv_[0] = 1.0 / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        const double l = m.off[i - 1] * diag_inv_[i - 1];
        lower_[i - 1] = l;
        pivot = m.diag[i] - l * m.off[i - 1];
        if (pivot == 0.0) throw std::runtime_error("ThomasFactor: zero pivot");
        diag_inv_[i] = 1.0 / pivot;
    }
}

std::vector<double> ThomasFactor::solve(std::span<const double> rhs) const {
    const std::size_t n = diag_inv_.size();
    if (rhs.size() != n) throw std::invalid_argument("ThomasFactor::solve: dimension mismatch");
    std::vector<double> x(rhs.begin(), rhs.end());
    for (std::size_t i = 1; i < n; ++i) x[i] -= lower_[i - 1] * x[i - 1];
    x[n - 1] *= diag_inv_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - upper_[i] * x[i + 1]) * diag_inv_[i];
    return x;
}

LdlFactor::LdlFactor(const SymTridiag& m) {
    const std::size_t n = m.size();
    d_.resize(n);
    l_.resize(n > 0 ? n - 1 : 0);
    d_[0] = m.diag[0];
    if (d_[0] <= 0.0) throw std::runtime_error("LdlFactor: matrix is not positive definite");
    for (std::size_t i = 1; i < n; ++i) {
        l_[i - 1] = m.off[i - 1] / d_[i - 1];
        d_[i] = m.diag[i] - l_[i - 1] * m.off[i - 1];
        if (d_[i] <= 0.0) throw std::runtime_error("LdlFactor: matrix is not positive definite");
    }
}

std::vector<double> LdlFactor::solve(std::span<const double> rhs) const {
    const std::size_t n = d_.size();
    if (rhs.size() != n) throw std::invalid_argument("LdlFactor::solve: dimension mismatch");
    std::vector<double> x(rhs.begin(), rhs.end());
    for (std::size_t i = 1; i < n; ++i) x[i] -= l_[i - 1] * x[i - 1];
    for (std::size_t i = 0; i < n; ++i) x[i] /= d_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= l_[i] * x[i + 1];
    return x;
}

int inertia_below(const SymTridiag& a, const SymTridiag& b, double sigma) {
    const std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("inertia_below: dimension mismatch");
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    int count = 0;
    double d = a.diag[0] - sigma * b.diag[0];
    if (d == 0.0) d = tiny;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        const double e = a.off[i - 1] - sigma * b.off[i - 1];
        d = (a.diag[i] - sigma * b.diag[i]) - e * e / d;
        if (d == 0.0) d = tiny;
        if (d < 0.0) ++count;
    }
    return count;
}

std::vector<double> shifted_solve(const SymTridiag& a, const SymTridiag& b,
                                  double sigma, std::span<const double> rhs) {
    const std::size_t n = a.size();
    if (b.size() != n || rhs.size() != n) throw std::invalid_argument("shifted_solve: dimension mismatch");
    // Banded LU with partial pivoting; fill-in adds one superdiagonal.
    std::vector<double> d(n), e(n > 0 ? n - 1 : 0), f(n > 1 ? n - 2 : 0, 0.0);
    std::vector<double> x(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) d[i] = a.diag[i] - sigma * b.diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = a.off[i] - sigma * b.off[i];
    std::vector<double> sub = e;  // subdiagonal copy, consumed during elimination
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double pivot = d[i];
        double below = sub[i];
        if (std::abs(below) > std::abs(pivot)) {
            std::swap(d[i], sub[i]);
            std::swap(e[i], d[i + 1]);
            if (i + 2 < n) std::swap(f[i], e[i + 1]);
            std::swap(x[i], x[i + 1]);
            pivot = d[i];
            below = sub[i];
        }
        if (pivot == 0.0) pivot = std::numeric_limits<double>::min();
        const double m = below / pivot;
        d[i + 1] -= m * e[i];
        if (i + 2 < n) e[i + 1] -= m * f[i];
        x[i + 1] -= m * x[i];
    }
    if (d[n - 1] == 0.0) d[n - 1] = std::numeric_limits<double>::min();
    for (std::size_t i = n; i-- > 0;) {
        double v = x[i];
        if (i + 1 < n) v -= e[i] * x[i + 1];
        if (i + 2 < n) v -= f[i] * x[i + 2];
        x[i] = v / d[i];
    }
    return x;
}

}  // namespace saddlelab
