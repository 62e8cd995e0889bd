#ifndef CONEKRYLOV_TYPES_HPP
#define CONEKRYLOV_TYPES_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "conekrylov/errors.hpp"

namespace conekrylov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

/// Symmetric n x n operand, stored dense or sparse (CSC with symmetric
/// completion already applied). Small or dense-ish matrices are densified at
/// construction: density > 0.25 or n <= 512.
class SymmetricMatrix {
public:
    /// Dense constructor; `a` is symmetrized as (A + A^T)/2.
    explicit SymmetricMatrix(Matrix a);
    /// Sparse constructor; `a` must already hold the full symmetric pattern.
    explicit SymmetricMatrix(SparseMatrix a);

    Index n() const { return n_; }
    bool is_dense() const { return dense_storage_; }
    double one_norm() const { return one_norm_; }
    double density() const;

    const Matrix& dense() const;
    const SparseMatrix& sparse() const;

    /// Materializes a dense copy regardless of storage.
    Matrix to_dense() const;

    Vector apply(const Vector& x) const;
    Matrix apply(const Matrix& x) const;

    /// M - s*J with J = diag(1, -1, ..., -1). Returns the same storage kind.
    Matrix shifted_dense(double s) const;
    SparseMatrix shifted_sparse(double s) const;

private:
    void check_and_cache();

    Index n_ = 0;
    bool dense_storage_ = true;
    Matrix dense_;
    SparseMatrix sparse_;
    double one_norm_ = 0.0;
};

}  // namespace conekrylov

#endif
