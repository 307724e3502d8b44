#pragma once

#include <vector>

#include "core/grid.hpp"

namespace saddlelab {

struct FemEigenpair {
    double lambda;
    std::vector<double> vector;  // interior nodal values, M_h-normalized
    double residual;             // |A u - lambda B u| / |B u| (2-norm)
};

/// Lowest eigenpairs of the aligned-grid generalized problem
/// (K - 4n sum_k e_k e_k^T) u = lambda M_h u.
///
/// Both matrices are symmetric tridiagonal, so each eigenvalue is isolated
/// by bisection on the Sturm (inertia) count of A - sigma M_h and the
/// eigenvector recovered by shift-inverted iteration. Results are sorted,
/// M_h-orthonormal within numerical multiplicity, and sign-fixed so the
/// first nonzero component is positive.
std::vector<FemEigenpair> fem_spectrum(const Grid& grid, int how_many);

/// A = K - 4n sum e_k e_k^T for the grid's delta nodes.
SymTridiag fem_operator(const Grid& grid);

}  // namespace saddlelab
