#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/grid.hpp"

namespace saddlelab {

enum class SpectralMethod { Shooting, Fem, ClosedForm };

std::string to_string(SpectralMethod m);

/// Sorted eigenpairs of L = -d^2/dx^2 - 4n sum delta_{k/n} on a grid,
/// produced by one of three routes that are tested against each other:
/// transfer-matrix shooting, the closed-form transcendental equations
/// (n = 2, 3; negative part of the spectrum only), and the aligned-grid
/// finite-element pencil.
struct SpectralDecomposition {
    int n = 0;
    SpectralMethod method = SpectralMethod::Shooting;
    std::shared_ptr<const Grid> grid;
    std::vector<double> eigenvalues;                 // ascending
    std::vector<double> residuals;                   // per eigenvalue, route-specific
    std::vector<std::vector<double>> eigenfunctions; // nodal, unit discrete L2
    int negative_count = 0;
    bool resolution_warning = false;

    std::size_t size() const { return eigenvalues.size(); }

    /// Dense row-major Gram matrices of the retained eigenfunctions.
    std::vector<double> gram(Norm inner) const;

    /// Largest off-diagonal entry of the Gram in the given inner product
    /// after unit-diagonal scaling.
    double gram_offdiagonal_max(Norm inner) const;
};

SpectralDecomposition compute_spectrum(int n, int how_many, SpectralMethod method,
                                       std::shared_ptr<const Grid> grid);

enum class ProjectionInner { L2, Hminus1 };

/// Spectral projections onto the span of the negative-eigenvalue
/// eigenfunctions (E1) and its complement within the retained span (E2).
/// Coefficients come from the Gram system in the chosen inner product, so
/// the pair is an oblique resolution of the identity on the retained span.
class Projections {
  public:
    Projections(const SpectralDecomposition& dec, ProjectionInner inner);

    int unstable_dim() const { return m_; }
    std::size_t retained() const { return basis_->size(); }
    double gram_condition() const { return condition_; }

    std::vector<double> coefficients(std::span<const double> u) const;

    struct Split {
        std::vector<double> e1;
        std::vector<double> e2;
    };
    Split split(std::span<const double> u) const;

  private:
    const SpectralDecomposition* basis_;
    int m_;
    double condition_;
    ProjectionInner inner_ = ProjectionInner::L2;
    std::vector<double> chol_;  // Cholesky factor of the Gram, row-major lower
};

}  // namespace saddlelab
