#include "conekrylov/krylov.hpp"

#include <cmath>

#include <Eigen/LU>

#include "conekrylov/socone.hpp"

namespace conekrylov {

ArnoldiResult arnoldi(const LinearOp& apply_a, const Vector& v0, Index ell, double drop_tol) {
    const double v0norm = v0.norm();
    if (!(v0norm > 0.0)) throw InvalidParams("Arnoldi start vector is zero");
    if (ell < 1) throw InvalidParams("Arnoldi needs ell >= 1");
    const Index n = v0.size();

    Matrix y(n, std::min(ell, n));
    Matrix h = Matrix::Zero(std::min(ell, n), std::min(ell, n));
    y.col(0) = v0 / v0norm;

    Index m = 1;
    bool breakdown = false;
    while (m < std::min(ell, n)) {
        Vector w = apply_a(y.col(m - 1));
        const double wnorm0 = w.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (Index i = 0; i < m; ++i) {
                const double c = y.col(i).dot(w);
                w -= c * y.col(i);
                if (pass == 0) h(i, m - 1) = c;
                else h(i, m - 1) += c;
            }
        }
        const double res = w.norm();
        if (res <= drop_tol * std::max(wnorm0, 1e-300)) {
            breakdown = true;
            break;
        }
        h(m, m - 1) = res;
        y.col(m) = w / res;
        ++m;
    }
    // last column of H so that H = Y^T A Y exactly on the achieved space
    {
        Vector w = apply_a(y.col(m - 1));
        for (Index i = 0; i < m; ++i) h(i, m - 1) = y.col(i).dot(w);
    }
    if (m == std::min(ell, n) && ell > n) breakdown = true;

    ArnoldiResult out;
    out.basis = OrthoBasis(y.leftCols(m));
    out.hessenberg = h.topLeftCorner(m, m);
    out.breakdown = breakdown || m < ell;
    return out;
}

OrthoBasis extended_krylov(const SymmetricMatrix& m, const Vector& q, Index ell0, Index k0,
                           const CholeskyFactor& chol, double drop_tol) {
    if (q.size() != m.n()) throw DimensionMismatch("q dimension mismatch");
    if (ell0 < 1 || k0 < 1) throw InvalidParams("extended space needs ell0, k0 >= 1");

    const LinearOp forward = [&m](const Vector& v) { return apply_J(m.apply(v)); };
    const LinearOp inverse = [&chol](const Vector& v) { return chol.solve(apply_J(v)); };

    ArnoldiResult fwd = arnoldi(forward, apply_J(q), ell0, drop_tol);
    ArnoldiResult inv = arnoldi(inverse, chol.solve(q), k0, drop_tol);
    return orth_extend(fwd.basis, inv.basis.matrix(), drop_tol);
}

OrthoBasis shift_block(const ShiftedFactorization& fact, const Vector& q, Index ell,
                       double drop_tol) {
    if (q.size() != fact.n()) throw DimensionMismatch("q dimension mismatch");
    const LinearOp op = [&fact](const Vector& v) { return fact.solve(apply_J(v)); };
    return arnoldi(op, fact.solve(q), ell, drop_tol).basis;
}

OrthoBasis shift_block(const SymmetricMatrix& m, const Vector& q, double s, Index ell,
                       double drop_tol) {
    ShiftedFactorization fact(m, s);
    return shift_block(fact, q, ell, drop_tol);
}

KrylovReduction::KrylovReduction(const SymmetricMatrix& m, const Vector& q, double s0,
                                 Index ell)
    : s0_(s0) {
    ShiftedFactorization fact(m, s0);
    const Vector b = -fact.solve(q);
    const double b2 = b.squaredNorm();
    const double h0 = j_quadratic_form(b);
    if (std::abs(h0) <= 1e-14 * b2)
        throw DegenerateCenter("h(s0) vanishes at the requested center");
    bnorm2_ = b2;

    const LinearOp op = [&fact](const Vector& v) { return fact.solve(apply_J(v)); };
    ArnoldiResult ar = arnoldi(op, b, ell);
    basis_ = std::move(ar.basis);
    h_ = std::move(ar.hessenberg);

    const Matrix& y = basis_.matrix();
    Matrix jy = -y;
    jy.row(0) = y.row(0);
    j_hat_ = y.transpose() * jy;
    j_hat_ = 0.5 * (j_hat_ + j_hat_.transpose()).eval();
    m_hat_ = y.transpose() * m.apply(y);
    m_hat_ = 0.5 * (m_hat_ + m_hat_.transpose()).eval();
    q_hat_ = y.transpose() * q;
}

double KrylovReduction::eval(double s) const {
    Matrix shifted = m_hat_ - s * j_hat_;
    Eigen::PartialPivLU<Matrix> lu(shifted);
    Vector z = lu.solve(q_hat_);
    const double val = z.dot(j_hat_ * z);
    if (std::abs(val) > 1e100) return std::copysign(HUGE_VAL, val);
    return val;
}

KrylovReduction single_shift_reduction(const SymmetricMatrix& m, const Vector& q, double s0,
                                       Index ell) {
    return KrylovReduction(m, q, s0, ell);
}

}  // namespace conekrylov
