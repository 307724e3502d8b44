#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace saddlelab {

/// Symmetric tridiagonal matrix stored as diagonal + one off-diagonal band.
struct SymTridiag {
    std::vector<double> diag;  // size n
    std::vector<double> off;   // size n-1

    std::size_t size() const { return diag.size(); }

    std::vector<double> apply(std::span<const double> x) const;

    SymTridiag& axpy(double a, const SymTridiag& other);  // *this += a*other
};

/// LU factorization of a symmetric tridiagonal matrix without pivoting
/// (Thomas algorithm). Valid for diagonally dominant / definite systems.
class ThomasFactor {
  public:
    explicit ThomasFactor(const SymTridiag& m);

    std::vector<double> solve(std::span<const double> rhs) const;

  private:
    std::vector<double> diag_inv_;  // 1 / pivot
    std::vector<double> lower_;     // multipliers
    std::vector<double> upper_;     // original superdiagonal
};

/// LDL^T factorization of a symmetric tridiagonal matrix. Fails (throws)
/// when a pivot is not positive, which doubles as a positive-definiteness
/// test.
class LdlFactor {
  public:
    explicit LdlFactor(const SymTridiag& m);

    std::vector<double> solve(std::span<const double> rhs) const;

  private:
    std::vector<double> d_;
    std::vector<double> l_;
};

/// Number of negative pivots in the LDL^T recurrence of A - sigma*B.
/// Equals the number of generalized eigenvalues below sigma when B is
/// positive definite. Zero pivots are perturbed by a tiny amount, which is
/// the standard safeguard for inertia counts.
int inertia_below(const SymTridiag& a, const SymTridiag& b, double sigma);

/// Solve (A - sigma*B) x = rhs with partial pivoting; tolerates the nearly
/// singular shifts that inverse iteration produces.
std::vector<double> shifted_solve(const SymTridiag& a, const SymTridiag& b,
                                  double sigma, std::span<const double> rhs);

}  // namespace saddlelab
