#pragma once

#include <vector>

namespace saddlelab {

/// The lambda = 0 branch of the interface eigenproblem reduces to a linear
/// system M z = 0 over the piecewise-affine coefficients
/// z = (B_1, A_2, B_2, ..., A_n, B_n). A nonzero determinant rules out a
/// zero eigenvalue.
class ZeroModeSystem {
  public:
    explicit ZeroModeSystem(int n);

    int mode_n() const { return n_; }
    std::size_t dim() const { return 2 * static_cast<std::size_t>(n_) - 1; }

    /// Row-major dense matrix: continuity rows (1, k/n, -1, -k/n), jump rows
    /// (1, -4n, -1-4k), and the closure row A_n + B_n = 0.
    const std::vector<double>& matrix() const { return m_; }
    double at(std::size_t r, std::size_t c) const { return m_[r * dim() + c]; }

    /// Diagonal of the triangular factor produced by Gaussian elimination
    /// without row swaps. The elimination follows a fixed recursion:
    /// entry 2k is (k+1)/((2(k+1)-1) n), entry 2k+1 is -((3+2k)/(k+1)) n,
    /// and the last entry is 1/(2n-1); no pivot can vanish. A pivot
    /// breakdown therefore signals a corrupted assembly and throws.
    std::vector<double> triangular_diagonal() const;

    /// Expected diagonal from the recursion above (closed form).
    std::vector<double> expected_diagonal() const;

    double determinant() const;

    /// (determinant, determinant != 0): zero is an eigenvalue only if the
    /// determinant vanishes, which never happens.
    std::pair<double, bool> zero_not_eigenvalue() const;

  private:
    int n_;
    std::vector<double> m_;
};

}  // namespace saddlelab
