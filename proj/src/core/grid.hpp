#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "core/tridiagonal.hpp"

namespace saddlelab {

enum class Norm { L2, H01, Hminus1 };

/// Uniform Dirichlet mesh on (0,1) whose nodes contain every k/n exactly.
///
/// Nodal functions and functionals are stored on the N-1 interior nodes;
/// the boundary values are identically zero. A functional vector holds the
/// duality pairings <F, phi_i> against the nodal hat functions.
class Grid {
  public:
    /// n >= 1 is the equilibrium index the mesh is aligned with, M >= 2 the
    /// number of cells per subinterval [k/n, (k+1)/n].
    Grid(int n, int M);

    int mode_n() const { return n_; }
    int nodes_per_subinterval() const { return m_; }
    double cell_width() const { return h_; }
    std::size_t cell_count() const { return static_cast<std::size_t>(n_) * m_; }
    std::size_t interior_count() const { return cell_count() - 1; }
    double node_coordinate(std::size_t i) const { return static_cast<double>(i) * h_; }

    /// Node indices of the interior zeros k/n, k = 1..n-1 (full-mesh indexing,
    /// node i sits at i*h). Empty for n = 1.
    const std::vector<std::size_t>& delta_node_indices() const { return delta_nodes_; }

    double delta_strength() const { return 4.0 * n_; }

    const SymTridiag& stiffness() const { return stiffness_; }
    const SymTridiag& mass() const { return mass_; }

    /// w with K w = F (Thomas elimination), realizing the inverse Laplacian
    /// on load vectors.
    std::vector<double> solve_stiffness(std::span<const double> rhs) const;

    /// Same solve through the LDL^T route; kept as an independent path for
    /// cross-checking.
    std::vector<double> solve_stiffness_ldl(std::span<const double> rhs) const;

    /// Discrete norms. L2 and H01 take nodal values of a function; Hminus1
    /// takes either a functional vector directly (functional = true) or a
    /// nodal function, which is first turned into the load M_h u.
    double norm(std::span<const double> u, Norm which, bool functional = false) const;

    double inner_l2(std::span<const double> u, std::span<const double> v) const;
    double inner_hminus1(std::span<const double> u, std::span<const double> v,
                         bool functional = false) const;

    /// Nodal values u_i = f(x_i) on the interior nodes.
    template <class F>
    std::vector<double> sample(F&& f) const {
        std::vector<double> u(interior_count());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(node_coordinate(i + 1));
        return u;
    }

  private:
    int n_;
    int m_;
    double h_;
    std::vector<std::size_t> delta_nodes_;
    SymTridiag stiffness_;
    SymTridiag mass_;
    std::shared_ptr<const ThomasFactor> stiffness_factor_;
};

}  // namespace saddlelab
