#ifndef CONEKRYLOV_KRYLOV_HPP
#define CONEKRYLOV_KRYLOV_HPP

#include <cmath>
#include <functional>

#include "conekrylov/linalg.hpp"

namespace conekrylov {

using LinearOp = std::function<Vector(const Vector&)>;

struct ArnoldiResult {
    OrthoBasis basis;
    Matrix hessenberg;  // Y^T A Y for the achieved dimension
    bool breakdown = false;
};

/// Arnoldi process with two-pass modified Gram-Schmidt. A lucky breakdown
/// (invariant subspace) returns the shorter basis with `breakdown` set.
ArnoldiResult arnoldi(const LinearOp& apply_a, const Vector& v0, Index ell,
                      double drop_tol = 1e-10);

/// Extended Krylov initial subspace
///   K_{ell0}(JM, Jq) + K_{k0}((JM)^{-1}, (JM)^{-1} Jq),
/// built as two one-sided Arnoldi sequences merged by reorthogonalization.
/// The Cholesky factor of M powers the inverse side.
OrthoBasis extended_krylov(const SymmetricMatrix& m, const Vector& q, Index ell0, Index k0,
                           const CholeskyFactor& chol, double drop_tol = 1e-10);

/// Rational block K_ell((M - sJ)^{-1} J, (M - sJ)^{-1} q). The shifted
/// factorization is computed once and reused across all ell steps.
OrthoBasis shift_block(const SymmetricMatrix& m, const Vector& q, double s, Index ell,
                       double drop_tol = 1e-10);
OrthoBasis shift_block(const ShiftedFactorization& fact, const Vector& q, Index ell,
                       double drop_tol = 1e-10);

/// Single-shift moment-matching reduction of h(s) around the center s0,
/// built on Y = orth(K_ell((M - s0 J)^{-1} J, (M - s0 J)^{-1} q)). The
/// evaluation projects the pencil symmetrically,
///   h_ell(s) = q_hat^T (M_hat - s J_hat)^{-T} J_hat (M_hat - s J_hat)^{-1} q_hat,
/// which is exact at s0 and matches 2*ell - 1 moments for symmetric M; a
/// one-sided resolvent substitution on the same space only matches ell.
class KrylovReduction {
public:
    KrylovReduction(const SymmetricMatrix& m, const Vector& q, double s0, Index ell);

    double eval(double s) const;
    double center() const { return s0_; }
    Index dim() const { return basis_.dim(); }
    const OrthoBasis& basis() const { return basis_; }
    const Matrix& hessenberg() const { return h_; }
    double scale() const { return std::sqrt(bnorm2_); }
    const Matrix& projected_j() const { return j_hat_; }

private:
    double s0_;
    double bnorm2_;
    OrthoBasis basis_;
    Matrix h_;      // Y^T A_{s0} Y
    Matrix m_hat_;  // Y^T M Y
    Matrix j_hat_;  // Y^T J Y
    Vector q_hat_;  // Y^T q
};

KrylovReduction single_shift_reduction(const SymmetricMatrix& m, const Vector& q, double s0,
                                       Index ell);

}  // namespace conekrylov

#endif
