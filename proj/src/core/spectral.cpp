#include "core/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/fem_spectrum.hpp"
#include "core/shooting.hpp"

namespace saddlelab {

std::string to_string(SpectralMethod m) {
    switch (m) {
        case SpectralMethod::Shooting: return "shooting";
        case SpectralMethod::Fem: return "fem";
        case SpectralMethod::ClosedForm: return "closed-form";
    }
    return "?";
}

namespace {

std::vector<double> shooting_eigenvalues(int n, int how_many, bool* warning) {
    // Grow the scan ceiling until enough roots are inside it.
    double lambda_max = std::max(4.0 * n * n * M_PI * M_PI, 64.0) * 2.0;
    for (int attempt = 0; attempt < 16; ++attempt) {
        auto scan = find_eigenvalues(n, how_many, lambda_max);
        if (warning) *warning = scan.resolution_warning;
        if (static_cast<int>(scan.eigenvalues.size()) >= how_many) {
            scan.eigenvalues.resize(how_many);
            return scan.eigenvalues;
        }
        lambda_max *= 2.0;
    }
    throw std::runtime_error("compute_spectrum: scan ceiling grew without finding enough roots");
}

}  // namespace

std::vector<double> SpectralDecomposition::gram(Norm inner) const {
    const std::size_t k = size();
    std::vector<double> g(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            const double v = inner == Norm::L2
                                 ? grid->inner_l2(eigenfunctions[i], eigenfunctions[j])
                                 : grid->inner_hminus1(eigenfunctions[i], eigenfunctions[j]);
            g[i * k + j] = v;
            g[j * k + i] = v;
        }
    return g;
}

double SpectralDecomposition::gram_offdiagonal_max(Norm inner) const {
    const std::size_t k = size();
    auto g = gram(inner);
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const double scale = std::sqrt(g[i * k + i] * g[j * k + j]);
            worst = std::max(worst, std::abs(g[i * k + j]) / scale);
        }
    return worst;
}

SpectralDecomposition compute_spectrum(int n, int how_many, SpectralMethod method,
                                       std::shared_ptr<const Grid> grid) {
    if (!grid) throw std::invalid_argument("compute_spectrum: null grid");
    if (grid->mode_n() != n) throw std::invalid_argument("compute_spectrum: grid not aligned with n");
    SpectralDecomposition dec;
    dec.n = n;
    dec.method = method;
    dec.grid = grid;
    switch (method) {
        case SpectralMethod::Shooting: {
            dec.eigenvalues = shooting_eigenvalues(n, how_many, &dec.resolution_warning);
            const CharacteristicEvaluator d(n);
            for (double lam : dec.eigenvalues) {
                dec.residuals.push_back(std::abs(d(lam)));
                dec.eigenfunctions.push_back(eigenfunction(n, lam, *grid, 1e-6));
            }
            break;
        }
        case SpectralMethod::Fem: {
            auto pairs = fem_spectrum(*grid, how_many);
            for (auto& p : pairs) {
                dec.eigenvalues.push_back(p.lambda);
                dec.residuals.push_back(p.residual);
                dec.eigenfunctions.push_back(std::move(p.vector));
            }
            break;
        }
        case SpectralMethod::ClosedForm: {
            const auto taus = closed_form_negative_roots(n);
            std::vector<double> lams;
            for (double t : taus) lams.push_back(-t * t);
            std::sort(lams.begin(), lams.end());
            const CharacteristicEvaluator d(n);
            for (double lam : lams) {
                if (static_cast<int>(dec.eigenvalues.size()) >= how_many) break;
                dec.eigenvalues.push_back(lam);
                const double tau = std::sqrt(-lam);
                const double res = (n == 2) ? std::abs(closed_form_equation_n2(tau))
                                            : std::min(std::abs(closed_form_f_n3(tau)),
                                                       std::abs(closed_form_g_n3(tau)));
                dec.residuals.push_back(res);
                dec.eigenfunctions.push_back(eigenfunction(n, lam, *grid, 1e-6));
            }
            break;
        }
    }
    dec.negative_count = static_cast<int>(std::count_if(
        dec.eigenvalues.begin(), dec.eigenvalues.end(), [](double l) { return l < 0.0; }));
    for (double lam : dec.eigenvalues)
        if (lam == 0.0) throw std::runtime_error("compute_spectrum: eigenvalue at 0 contradicts the zero-mode determinant");
    return dec;
}

namespace {

// Cholesky of a small dense SPD matrix, row-major lower factor in place.
std::vector<double> small_cholesky(std::vector<double> g, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = g[i * k + j];
            for (std::size_t p = 0; p < j; ++p) s -= g[i * k + p] * g[j * k + p];
            if (i == j) {
                if (s <= 0.0) throw std::runtime_error("Projections: Gram matrix is not positive definite");
                g[i * k + i] = std::sqrt(s);
            } else {
                g[i * k + j] = s / g[j * k + j];
            }
        }
        for (std::size_t j = i + 1; j < k; ++j) g[i * k + j] = 0.0;
    }
    return g;
}

std::vector<double> small_chol_solve(const std::vector<double>& l, std::size_t k,
                                     std::vector<double> b) {
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) b[i] -= l[i * k + j] * b[j];
        b[i] /= l[i * k + i];
    }
    for (std::size_t i = k; i-- > 0;) {
        for (std::size_t j = i + 1; j < k; ++j) b[i] -= l[j * k + i] * b[j];
        b[i] /= l[i * k + i];
    }
    return b;
}

// Symmetric eigenvalue range of a small dense matrix by cyclic Jacobi;
// enough accuracy for a condition-number gate.
std::pair<double, double> small_sym_extremes(std::vector<double> a, std::size_t k) {
    for (int sweep = 0; sweep < 30; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) off += a[i * k + j] * a[i * k + j];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = p + 1; q < k; ++q) {
                const double apq = a[p * k + q];
                if (apq == 0.0) continue;
                const double theta = 0.5 * (a[q * k + q] - a[p * k + p]) / apq;
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < k; ++i) {
                    const double aip = a[i * k + p];
                    const double aiq = a[i * k + q];
                    a[i * k + p] = c * aip - s * aiq;
                    a[i * k + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < k; ++i) {
                    const double api = a[p * k + i];
                    const double aqi = a[q * k + i];
                    a[p * k + i] = c * api - s * aqi;
                    a[q * k + i] = s * api + c * aqi;
                }
            }
    }
    double lo = a[0], hi = a[0];
    for (std::size_t i = 1; i < k; ++i) {
        lo = std::min(lo, a[i * k + i]);
        hi = std::max(hi, a[i * k + i]);
    }
    return {lo, hi};
}

}  // namespace

Projections::Projections(const SpectralDecomposition& dec, ProjectionInner inner)
    : basis_(&dec), m_(dec.negative_count) {
    if (dec.size() < static_cast<std::size_t>(m_) + 10)
        throw std::invalid_argument("Projections: retain at least negative_count + 10 eigenfunctions");
    const std::size_t k = dec.size();
    auto g = dec.gram(inner == ProjectionInner::L2 ? Norm::L2 : Norm::Hminus1);
    const auto [lo, hi] = small_sym_extremes(g, k);
    condition_ = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(condition_ < 1e8))
        throw std::runtime_error("Projections: Gram matrix condition number exceeds 1e8");
    inner_ = inner;
    chol_ = small_cholesky(std::move(g), k);
}

std::vector<double> Projections::coefficients(std::span<const double> u) const {
    const std::size_t k = basis_->size();
    std::vector<double> b(k);
    for (std::size_t i = 0; i < k; ++i)
        b[i] = inner_ == ProjectionInner::L2
                   ? basis_->grid->inner_l2(basis_->eigenfunctions[i], u)
                   : basis_->grid->inner_hminus1(basis_->eigenfunctions[i], u);
    return small_chol_solve(chol_, k, std::move(b));
}

Projections::Split Projections::split(std::span<const double> u) const {
    const auto c = coefficients(u);
    const std::size_t dim = basis_->grid->interior_count();
    Split out;
    out.e1.assign(dim, 0.0);
    out.e2.assign(dim, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        auto& target = (static_cast<int>(j) < m_) ? out.e1 : out.e2;
        const auto& e = basis_->eigenfunctions[j];
        for (std::size_t i = 0; i < dim; ++i) target[i] += c[j] * e[i];
    }
    return out;
}

}  // namespace saddlelab
