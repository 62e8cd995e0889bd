#ifndef CONEKRYLOV_LINALG_HPP
#define CONEKRYLOV_LINALG_HPP

#include <array>
#include <memory>
#include <vector>

#include <Eigen/SparseCholesky>

#include "conekrylov/types.hpp"

namespace conekrylov {

struct Inertia {
    int n_pos = 0;
    int n_neg = 0;
    int n_zero = 0;
};

/// Cholesky factor of an SPD matrix, M = R^T R with R upper triangular.
/// Dense inputs use an in-house factorization so that the positive-pivot
/// tolerance is explicit; sparse inputs go through a simplicial LL^T with a
/// fill-reducing ordering.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const SymmetricMatrix& m);
    /// Dense factorization without the n >= 2 cone restriction; used for
    /// reduced m x m operands.
    explicit CholeskyFactor(const Matrix& a);

    Vector solve(const Vector& b) const;
    Index n() const { return n_; }

    /// Dense upper factor; throws if the factorization was sparse.
    const Matrix& upper() const;

private:
    Index n_;
    bool dense_;
    Matrix r_;  // upper triangular, dense path
    std::shared_ptr<Eigen::SimplicialLLT<SparseMatrix>> llt_;
};

CholeskyFactor cholesky(const SymmetricMatrix& m);

/// LDL^T factorization of the symmetric indefinite M - sJ.
///
/// Dense path: Bunch-Kaufman with 1x1/2x2 pivots (M - sJ is indefinite for
/// s past the positive pencil eigenvalue, so pivoting is required).
/// Sparse path: fill-reducing ordering with an unpivoted simplicial
/// elimination, computed once per shift and reused for every solve.
class ShiftedFactorization {
public:
    ShiftedFactorization(const SymmetricMatrix& m, double s);

    double shift() const { return shift_; }
    Index n() const { return n_; }
    const Inertia& inertia() const { return inertia_; }

    Vector solve(const Vector& b) const;

    /// Applies P^T L D L^T P, i.e. the factored form of M - sJ. Used by the
    /// reconstruction-residual probes.
    Vector apply_factored(const Vector& x) const;

private:
    void factor_dense(Matrix a, double scale);
    void factor_sparse(const SparseMatrix& a, double scale);
    void compute_inertia_dense();

    double shift_;
    Index n_;
    bool dense_;
    Inertia inertia_;

    // dense Bunch-Kaufman storage: lower factor + block diagonal in `bk_`,
    // LAPACK-style pivot indices in `ipiv_`
    Matrix bk_;
    std::vector<int> ipiv_;

    std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix>> ldlt_;
};

ShiftedFactorization ldlt_shifted(const SymmetricMatrix& m, double s);

/// Eigendecomposition of a dense symmetric matrix: values ascending,
/// eigenvectors orthonormal in the columns of the second member.
std::pair<Vector, Matrix> sym_eig(const Matrix& a);

/// Column-orthonormal basis with rank-revealing growth. Candidate columns
/// whose post-projection residual falls under the drop tolerance are
/// discarded and never counted in m.
class OrthoBasis {
public:
    OrthoBasis() = default;
    /// Takes columns as-is after normalizing; callers must pass vectors that
    /// are already mutually orthogonal (e.g. a single seed column).
    explicit OrthoBasis(Matrix columns);

    Index rows() const { return u_.rows(); }
    Index dim() const { return u_.cols(); }
    const Matrix& matrix() const { return u_; }

private:
    friend OrthoBasis orth_extend(const OrthoBasis&, const Matrix&, double);
    Matrix u_;
};

/// Extends `u` by the candidate block `v` using two-pass Gram-Schmidt with
/// reorthogonalization; columns with residual below drop_tol * original norm
/// are dropped. Degenerate blocks leave `u` unchanged.
OrthoBasis orth_extend(const OrthoBasis& u, const Matrix& v, double drop_tol = 1e-10);

/// Orthonormalizes a block from scratch (empty starting basis).
OrthoBasis orth(const Matrix& v, double drop_tol = 1e-10);

}  // namespace conekrylov

#endif
