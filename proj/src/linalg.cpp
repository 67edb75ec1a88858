#include "plap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plap {

namespace {

double dot_vec(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_vec(std::span<const double> a) { return std::sqrt(dot_vec(a, a)); }

} // namespace

CsrMatrix CsrMatrix::from_adjacency(const std::vector<std::vector<int>>& neighbors) {
    CsrMatrix m;
    m.n_ = static_cast<int>(neighbors.size());
    m.row_ptr_.assign(static_cast<std::size_t>(m.n_) + 1, 0);
    std::vector<std::vector<int>> cols(neighbors.size());
    for (int i = 0; i < m.n_; ++i) {
        auto& row = cols[static_cast<std::size_t>(i)];
        row = neighbors[static_cast<std::size_t>(i)];
        row.push_back(i);
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        m.row_ptr_[static_cast<std::size_t>(i) + 1] =
            m.row_ptr_[static_cast<std::size_t>(i)] + static_cast<int>(row.size());
    }
    m.col_.reserve(static_cast<std::size_t>(m.row_ptr_.back()));
    for (const auto& row : cols) m.col_.insert(m.col_.end(), row.begin(), row.end());
    m.val_.assign(m.col_.size(), 0.0);
    m.diag_.assign(static_cast<std::size_t>(m.n_), -1);
    for (int i = 0; i < m.n_; ++i) {
        for (int k = m.row_ptr_[static_cast<std::size_t>(i)];
             k < m.row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
            if (m.col_[static_cast<std::size_t>(k)] == i) {
                m.diag_[static_cast<std::size_t>(i)] = k;
                break;
            }
        }
    }
    return m;
}

void CsrMatrix::zero_values() { std::fill(val_.begin(), val_.end(), 0.0); }

void CsrMatrix::add(int i, int j, double value) {
    const int lo = row_ptr_[static_cast<std::size_t>(i)];
    const int hi = row_ptr_[static_cast<std::size_t>(i) + 1];
    const auto begin = col_.begin() + lo;
    const auto end = col_.begin() + hi;
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j)
        throw std::logic_error("CsrMatrix::add: entry outside the pattern");
    val_[static_cast<std::size_t>(it - col_.begin())] += value;
}

double CsrMatrix::diagonal(int i) const {
    return val_[static_cast<std::size_t>(diag_[static_cast<std::size_t>(i)])];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[static_cast<std::size_t>(i)];
             k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
            s += val_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
        y[static_cast<std::size_t>(i)] = s;
    }
}

KrylovResult cg_solve(const CsrMatrix& A, std::span<const double> b,
                      std::span<double> x, double rel_tol, int max_iter) {
    const std::size_t n = b.size();
    std::vector<double> inv_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = A.diagonal(static_cast<int>(i));
        inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
    }

    std::vector<double> r(n), z(n), p(n), Ap(n);
    A.multiply(x, Ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    const double b_norm = norm_vec(b);
    if (b_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return {0, 0.0, true};
    }

    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot_vec(r, z);

    KrylovResult res;
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it;
        const double r_norm = norm_vec(r);
        res.relative_residual = r_norm / b_norm;
        if (r_norm <= rel_tol * b_norm) {
            res.converged = true;
            return res;
        }
        A.multiply(p, Ap);
        const double pAp = dot_vec(p, Ap);
        if (!(pAp > 0.0)) break; // lost positive definiteness
        const double alpha = rz / pAp;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_next = dot_vec(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    res.iterations = max_iter;
    res.relative_residual = norm_vec(r) / b_norm;
    res.converged = res.relative_residual <= rel_tol;
    return res;
}

KrylovResult minres_solve(const CsrMatrix& A, std::span<const double> b,
                          std::span<double> x, double rel_tol, int max_iter) {
    const std::size_t n = b.size();
    std::vector<double> inv_prec(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(A.diagonal(static_cast<int>(i)));
        inv_prec[i] = d > 0.0 ? 1.0 / d : 1.0;
    }
    auto precondition = [&](std::span<const double> in, std::span<double> out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = inv_prec[i] * in[i];
    };

    // Standard preconditioned MINRES recurrence (Paige & Saunders).
    std::vector<double> r1(n), r2(n), y(n), v(n), w(n, 0.0), w1(n, 0.0), w2(n, 0.0), Av(n);
    A.multiply(x, Av);
    for (std::size_t i = 0; i < n; ++i) r1[i] = b[i] - Av[i];
    r2 = r1;
    precondition(r1, y);
    double beta1 = dot_vec(r1, y);
    if (beta1 < 0.0) throw std::logic_error("minres: preconditioner not positive");
    beta1 = std::sqrt(beta1);
    const double b_norm = norm_vec(b);
    if (beta1 == 0.0 || b_norm == 0.0) {
        if (b_norm == 0.0) std::fill(x.begin(), x.end(), 0.0);
        return {0, 0.0, true};
    }

    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
    double phibar = beta1, cs = -1.0, sn = 0.0, oldeps = 0.0;

    KrylovResult res;
    for (int it = 1; it <= max_iter; ++it) {
        res.iterations = it;
        const double s = 1.0 / beta;
        for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
        A.multiply(v, Av);
        if (it >= 2)
            for (std::size_t i = 0; i < n; ++i) Av[i] -= (beta / oldb) * r1[i];
        const double alfa = dot_vec(v, Av);
        for (std::size_t i = 0; i < n; ++i) Av[i] -= (alfa / beta) * r2[i];
        r1 = r2;
        r2 = Av;
        precondition(r2, y);
        oldb = beta;
        double beta_sq = dot_vec(r2, y);
        if (beta_sq < 0.0) beta_sq = 0.0;
        beta = std::sqrt(beta_sq);

        oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        double gamma = std::hypot(gbar, beta);
        gamma = std::max(gamma, 1e-300);
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        for (std::size_t i = 0; i < n; ++i) {
            const double w1_new = w2[i];
            const double w2_new = w[i];
            const double wi = (v[i] - oldeps * w1_new - delta * w2_new) / gamma;
            w1[i] = w1_new;
            w2[i] = w2_new;
            w[i] = wi;
            x[i] += phi * wi;
        }
        if (phibar <= rel_tol * beta1) break;
    }

    A.multiply(x, Av);
    double true_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = b[i] - Av[i];
        true_res += d * d;
    }
    res.relative_residual = std::sqrt(true_res) / b_norm;
    res.converged = res.relative_residual <= 10.0 * rel_tol;
    return res;
}

} // namespace plap
