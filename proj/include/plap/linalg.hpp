#ifndef PLAP_LINALG_HPP
#define PLAP_LINALG_HPP

#include <span>
#include <vector>

namespace plap {

/// Compressed sparse row matrix with a fixed symmetric pattern. Assembly
/// resets the values and accumulates entries through add(); the pattern is
/// built once from the mesh connectivity.
class CsrMatrix {
public:
    CsrMatrix() = default;

    /// Builds the pattern from an adjacency list (neighbors per row, self
    /// included or not; the diagonal is always added).
    static CsrMatrix from_adjacency(const std::vector<std::vector<int>>& neighbors);

    int size() const { return n_; }
    void zero_values();
    void add(int i, int j, double value); // entry must exist in the pattern
    double diagonal(int i) const;
    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    int n_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_;
    std::vector<double> val_;
    std::vector<int> diag_; // index of the diagonal entry per row
};

struct KrylovResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Conjugate gradients with Jacobi (diagonal) scaling, for SPD systems.
/// Stops at ||r|| <= rel_tol * ||b||.
KrylovResult cg_solve(const CsrMatrix& A, std::span<const double> b,
                      std::span<double> x, double rel_tol, int max_iter);

/// MINRES with Jacobi |diagonal| scaling, for symmetric (possibly indefinite)
/// systems. Stops at the same relative criterion measured in the
/// preconditioned norm, then reports the true relative residual.
KrylovResult minres_solve(const CsrMatrix& A, std::span<const double> b,
                          std::span<double> x, double rel_tol, int max_iter);

} // namespace plap

#endif
