#ifndef BTN_LINALG_HPP
#define BTN_LINALG_HPP

#include <span>
#include <vector>

namespace btn {

/// Compressed-sparse-row matrix. Rows are kept sorted by column index.
struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr;  // size n+1
    std::vector<int> col;
    std::vector<double> val;

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> diagonal() const;
    /// Entry lookup by binary search; 0 if not stored.
    double entry(int i, int j) const;
    /// max_ij |A_ij - A_ji| over stored entries.
    double symmetry_defect() const;
};

/// Builds a CsrMatrix by accumulating duplicate (i,j) contributions.
class CsrBuilder {
public:
    explicit CsrBuilder(int n) : n_(n) {}
    void add(int i, int j, double v) { trip_.push_back({i, j, v}); }
    CsrMatrix build();

private:
    struct Triplet { int i, j; double v; };
    int n_;
    std::vector<Triplet> trip_;
};

struct CgResult {
    bool converged = false;
    int iterations = 0;
    double rel_residual = 0.0;
    std::vector<double> history;  // relative residual per iteration
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. Iterates the
/// recurrence until ||b - A x|| <= tol * ||b|| (verified against the true
/// residual before declaring convergence). x holds the initial guess on entry.
CgResult pcg_jacobi(const CsrMatrix& A, std::span<const double> b,
                    std::span<double> x, double tol, int max_iter);

/// Dense Cholesky solve; the oracle path for small systems. Throws if the
/// matrix is not positive definite or n exceeds the guard.
std::vector<double> dense_cholesky_solve(const CsrMatrix& A,
                                         std::span<const double> b,
                                         int size_guard = 4096);

} // namespace btn

#endif
