#include "btn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace btn {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            s += val[k] * x[col[k]];
        y[i] = s;
    }
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            if (col[k] == i) d[i] = val[k];
    return d;
}

double CsrMatrix::entry(int i, int j) const {
    auto first = col.begin() + row_ptr[i];
    auto last = col.begin() + row_ptr[i + 1];
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return val[static_cast<std::size_t>(it - col.begin())];
}

double CsrMatrix::symmetry_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            worst = std::max(worst, std::abs(val[k] - entry(col[k], i)));
    return worst;
}

CsrMatrix CsrBuilder::build() {
    std::sort(trip_.begin(), trip_.end(), [](const Triplet& a, const Triplet& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    CsrMatrix A;
    A.n = n_;
    A.row_ptr.assign(n_ + 1, 0);
    for (std::size_t k = 0; k < trip_.size();) {
        std::size_t e = k;
        double s = 0.0;
        while (e < trip_.size() && trip_[e].i == trip_[k].i && trip_[e].j == trip_[k].j)
            s += trip_[e++].v;
        A.col.push_back(trip_[k].j);
        A.val.push_back(s);
        ++A.row_ptr[trip_[k].i + 1];
        k = e;
    }
    for (int i = 0; i < n_; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
    return A;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

} // namespace

CgResult pcg_jacobi(const CsrMatrix& A, std::span<const double> b,
                    std::span<double> x, double tol, int max_iter) {
    const int n = A.n;
    CgResult out;
    const double bnrm = norm2(b);
    if (bnrm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        out.converged = true;
        return out;
    }
    std::vector<double> d = A.diagonal();
    for (double& v : d) v = (v != 0.0) ? 1.0 / v : 1.0;

    std::vector<double> r(n), z(n), p(n), q(n);
    A.multiply(x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double relres = norm2(r) / bnrm;
    if (relres <= tol) {
        out.converged = true;
        out.rel_residual = relres;
        return out;
    }
    for (int i = 0; i < n; ++i) z[i] = d[i] * r[i];
    std::copy(z.begin(), z.end(), p.begin());
    double rho = dot(r, z);

    for (int it = 1; it <= max_iter; ++it) {
        A.multiply(p, q);
        const double alpha = rho / dot(p, q);
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        relres = norm2(r) / bnrm;
        out.history.push_back(relres);
        out.iterations = it;
        if (relres <= tol) {
            // guard against recurrence drift: confirm with the true residual
            A.multiply(x, q);
            for (int i = 0; i < n; ++i) q[i] = b[i] - q[i];
            relres = norm2(q) / bnrm;
            out.history.back() = relres;
            if (relres <= tol) {
                out.converged = true;
                out.rel_residual = relres;
                return out;
            }
            std::copy(q.begin(), q.end(), r.begin());
        }
        for (int i = 0; i < n; ++i) z[i] = d[i] * r[i];
        const double rho_next = dot(r, z);
        const double beta = rho_next / rho;
        rho = rho_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    out.rel_residual = relres;
    return out;
}

std::vector<double> dense_cholesky_solve(const CsrMatrix& A,
                                         std::span<const double> b,
                                         int size_guard) {
    const int n = A.n;
    if (n > size_guard)
        throw std::invalid_argument("dense_cholesky_solve: system exceeds the size guard");
    std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
            L[static_cast<std::size_t>(i) * n + A.col[k]] = A.val[k];
    // in-place LL^T on the lower triangle
    for (int j = 0; j < n; ++j) {
        double diag = L[static_cast<std::size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            const double v = L[static_cast<std::size_t>(j) * n + k];
            diag -= v * v;
        }
        if (diag <= 0.0)
            throw std::runtime_error("dense_cholesky_solve: matrix is not positive definite");
        diag = std::sqrt(diag);
        L[static_cast<std::size_t>(j) * n + j] = diag;
        for (int i = j + 1; i < n; ++i) {
            double s = L[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= L[static_cast<std::size_t>(i) * n + k] * L[static_cast<std::size_t>(j) * n + k];
            L[static_cast<std::size_t>(i) * n + j] = s / diag;
        }
    }
    std::vector<double> y(b.begin(), b.end());
    for (int i = 0; i < n; ++i) {
        double s = y[i];
        for (int k = 0; k < i; ++k) s -= L[static_cast<std::size_t>(i) * n + k] * y[k];
        y[i] = s / L[static_cast<std::size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < n; ++k) s -= L[static_cast<std::size_t>(k) * n + i] * y[k];
        y[i] = s / L[static_cast<std::size_t>(i) * n + i];
    }
    return y;
}

} // namespace btn
