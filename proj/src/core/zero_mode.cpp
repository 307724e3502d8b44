#include "core/zero_mode.hpp"

#include <cmath>
#include <stdexcept>

namespace saddlelab {

ZeroModeSystem::ZeroModeSystem(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("ZeroModeSystem: n must be >= 2");
    const std::size_t d = dim();
    m_.assign(d * d, 0.0);
    // Column layout: B_1 -> 0, A_j -> 2j-3, B_j -> 2j-2 for j = 2..n.
    auto col_b = [](int j) { return j == 1 ? std::size_t{0} : static_cast<std::size_t>(2 * j - 2); };
    auto col_a = [](int j) { return static_cast<std::size_t>(2 * j - 3); };
    auto set = [&](std::size_t r, std::size_t c, double v) { m_[r * d + c] = v; };
    std::size_t row = 0;
    for (int k = 1; k < n_; ++k) {
        // Continuity at k/n: A_k + (k/n) B_k = A_{k+1} + (k/n) B_{k+1}, A_1 = 0.
        if (k > 1) set(row, col_a(k), 1.0);
        set(row, col_b(k), static_cast<double>(k) / n_);
        set(row, col_a(k + 1), -1.0);
        set(row, col_b(k + 1), -static_cast<double>(k) / n_);
        ++row;
        // Derivative drop at k/n: B_k - B_{k+1} = 4n (A_{k+1} + (k/n) B_{k+1}).
        set(row, col_b(k), 1.0);
        set(row, col_a(k + 1), -4.0 * n_);
        set(row, col_b(k + 1), -1.0 - 4.0 * k);
        ++row;
    }
    set(row, col_a(n_), 1.0);
    set(row, col_b(n_), 1.0);
}

std::vector<double> ZeroModeSystem::triangular_diagonal() const {
    const std::size_t d = dim();
    std::vector<double> a = m_;
    for (std::size_t c = 0; c + 1 < d; ++c) {
        const double pivot = a[c * d + c];
        if (pivot == 0.0) throw std::runtime_error("ZeroModeSystem: pivot breakdown (corrupted assembly)");
        for (std::size_t r = c + 1; r < d; ++r) {
            const double factor = a[r * d + c] / pivot;
            if (factor == 0.0) continue;
            for (std::size_t j = c; j < d; ++j) a[r * d + j] -= factor * a[c * d + j];
        }
    }
    std::vector<double> diag(d);
    for (std::size_t i = 0; i < d; ++i) diag[i] = a[i * d + i];
    return diag;
}

std::vector<double> ZeroModeSystem::expected_diagonal() const {
    std::vector<double> diag;
    diag.reserve(dim());
    for (int j = 1; j < n_; ++j) {
        diag.push_back(static_cast<double>(j) / ((2.0 * j - 1.0) * n_));
        diag.push_back(-(1.0 + 2.0 * j) / j * n_);
    }
    diag.push_back(1.0 / (2.0 * n_ - 1.0));
    return diag;
}

double ZeroModeSystem::determinant() const {
    double det = 1.0;
    for (double v : triangular_diagonal()) det *= v;
    return det;
}

std::pair<double, bool> ZeroModeSystem::zero_not_eigenvalue() const {
    const double det = determinant();
    return {det, det != 0.0};
}

}  // namespace saddlelab
