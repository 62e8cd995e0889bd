#include "conekrylov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace conekrylov {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double one_norm_dense(const Matrix& a) {
    double best = 0.0;
    for (Index j = 0; j < a.cols(); ++j) best = std::max(best, a.col(j).cwiseAbs().sum());
    return best;
}

double one_norm_sparse(const SparseMatrix& a) {
    double best = 0.0;
    for (int j = 0; j < a.outerSize(); ++j) {
        double s = 0.0;
        for (SparseMatrix::InnerIterator it(a, j); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// SymmetricMatrix

SymmetricMatrix::SymmetricMatrix(Matrix a) {
    if (a.rows() != a.cols()) throw NotSquare("dense operand is not square");
    n_ = a.rows();
    dense_ = 0.5 * (a + a.transpose());
    dense_storage_ = true;
    check_and_cache();
}

SymmetricMatrix::SymmetricMatrix(SparseMatrix a) {
    if (a.rows() != a.cols()) throw NotSquare("sparse operand is not square");
    n_ = a.rows();
    a.makeCompressed();
    double dens = n_ > 0 ? double(a.nonZeros()) / (double(n_) * double(n_)) : 1.0;
    if (n_ <= 512 || dens > 0.25) {
        dense_ = 0.5 * (Matrix(a) + Matrix(a).transpose());
        dense_storage_ = true;
    } else {
        SparseMatrix at = SparseMatrix(a.transpose());
        sparse_ = 0.5 * (a + at);
        sparse_.makeCompressed();
        dense_storage_ = false;
    }
    check_and_cache();
}

void SymmetricMatrix::check_and_cache() {
    if (n_ < 2) throw InvalidParams("cone problems need n >= 2");
    one_norm_ = dense_storage_ ? one_norm_dense(dense_) : one_norm_sparse(sparse_);
    if (!std::isfinite(one_norm_)) throw InvalidParams("matrix has non-finite entries");
}

double SymmetricMatrix::density() const {
    if (dense_storage_) return 1.0;
    return double(sparse_.nonZeros()) / (double(n_) * double(n_));
}

const Matrix& SymmetricMatrix::dense() const {
    if (!dense_storage_) throw DimensionMismatch("matrix is stored sparse");
    return dense_;
}

const SparseMatrix& SymmetricMatrix::sparse() const {
    if (dense_storage_) throw DimensionMismatch("matrix is stored dense");
    return sparse_;
}

Matrix SymmetricMatrix::to_dense() const {
    return dense_storage_ ? dense_ : Matrix(sparse_);
}

Vector SymmetricMatrix::apply(const Vector& x) const {
    if (x.size() != n_) throw DimensionMismatch("matvec dimension mismatch");
    return dense_storage_ ? Vector(dense_ * x) : Vector(sparse_ * x);
}

Matrix SymmetricMatrix::apply(const Matrix& x) const {
    if (x.rows() != n_) throw DimensionMismatch("matmat dimension mismatch");
    return dense_storage_ ? Matrix(dense_ * x) : Matrix(sparse_ * x);
}

Matrix SymmetricMatrix::shifted_dense(double s) const {
    Matrix a = to_dense();
    a(0, 0) -= s;
    for (Index i = 1; i < n_; ++i) a(i, i) += s;
    return a;
}

SparseMatrix SymmetricMatrix::shifted_sparse(double s) const {
    SparseMatrix a = dense_storage_ ? SparseMatrix(dense_.sparseView()) : sparse_;
    SparseMatrix jdiag(n_, n_);
    jdiag.reserve(Eigen::VectorXi::Constant(int(n_), 1));
    jdiag.insert(0, 0) = -s;
    for (Index i = 1; i < n_; ++i) jdiag.insert(i, i) = s;
    a = a + jdiag;
    a.makeCompressed();
    return a;
}

// ---------------------------------------------------------------------------
// Cholesky

namespace {

// Upper Cholesky factor R of a dense SPD matrix, M = R^T R. A pivot at or
// below 64*eps*||M||_1 rejects the matrix as outside the SPD class.
Matrix dense_cholesky_upper(const Matrix& a, double one_norm) {
    const Index n = a.rows();
    const double tol = 64.0 * kEps * std::max(one_norm, kEps);
    Matrix r = Matrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
        if (k > 0) {
            r.col(k).head(k) = r.topLeftCorner(k, k)
                                   .transpose()
                                   .triangularView<Eigen::Lower>()
                                   .solve(a.col(k).head(k));
        }
        const double d = a(k, k) - r.col(k).head(k).squaredNorm();
        if (!(d > tol))
            throw NotPositiveDefinite("pivot " + std::to_string(d) + " at column " +
                                      std::to_string(k));
        r(k, k) = std::sqrt(d);
    }
    return r;
}

}  // namespace

CholeskyFactor::CholeskyFactor(const SymmetricMatrix& m) : n_(m.n()), dense_(m.is_dense()) {
    if (dense_) {
        r_ = dense_cholesky_upper(m.dense(), m.one_norm());
    } else {
        llt_ = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>();
        llt_->compute(m.sparse());
        if (llt_->info() != Eigen::Success)
            throw NotPositiveDefinite("sparse LL^T factorization failed");
    }
}

CholeskyFactor::CholeskyFactor(const Matrix& a) : n_(a.rows()), dense_(true) {
    if (a.rows() != a.cols()) throw NotSquare("Cholesky operand is not square");
    if (n_ < 1) throw InvalidParams("Cholesky needs n >= 1");
    r_ = dense_cholesky_upper(0.5 * (a + a.transpose()), one_norm_dense(a));
}

Vector CholeskyFactor::solve(const Vector& b) const {
    if (b.size() != n_) throw DimensionMismatch("rhs dimension mismatch");
    if (dense_) {
        Vector y = r_.transpose().triangularView<Eigen::Lower>().solve(b);
        return r_.triangularView<Eigen::Upper>().solve(y);
    }
    return llt_->solve(b);
}

const Matrix& CholeskyFactor::upper() const {
    if (!dense_) throw DimensionMismatch("sparse factor has no dense R");
    return r_;
}

CholeskyFactor cholesky(const SymmetricMatrix& m) { return CholeskyFactor(m); }

// ---------------------------------------------------------------------------
// Shifted LDL^T

ShiftedFactorization::ShiftedFactorization(const SymmetricMatrix& m, double s)
    : shift_(s), n_(m.n()), dense_(m.is_dense()) {
    if (!std::isfinite(s)) throw InvalidParams("shift must be finite");
    const double scale = m.one_norm() + std::abs(s);
    if (dense_) {
        factor_dense(m.shifted_dense(s), scale);
    } else {
        factor_sparse(m.shifted_sparse(s), scale);
    }
}

namespace {

// Symmetric row/column interchange kk <-> kp (kk < kp) in the lower triangle,
// restricted to the trailing submatrix starting at column k.
void swap_sym_lower(Matrix& a, Index kk, Index kp, Index k, bool two_by_two) {
    const Index n = a.rows();
    if (kp + 1 < n) a.col(kk).tail(n - kp - 1).swap(a.col(kp).tail(n - kp - 1));
    for (Index j = kk + 1; j < kp; ++j) std::swap(a(j, kk), a(kp, j));
    std::swap(a(kk, kk), a(kp, kp));
    if (two_by_two) std::swap(a(kk, k), a(kp, k));
}

}  // namespace

void ShiftedFactorization::factor_dense(Matrix a, double scale) {
    const Index n = n_;
    const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
    const double ztol = double(n) * kEps * std::max(scale, kEps);
    bk_ = std::move(a);
    ipiv_.assign(size_t(n), 0);

    Index k = 0;
    while (k < n) {
        Index kstep = 1;
        Index kp = k;
        const double absakk = std::abs(bk_(k, k));

        Index imax = k;
        double colmax = 0.0;
        if (k + 1 < n) {
            for (Index i = k + 1; i < n; ++i) {
                if (std::abs(bk_(i, k)) > colmax) {
                    colmax = std::abs(bk_(i, k));
                    imax = i;
                }
            }
        }

        if (std::max(absakk, colmax) <= ztol) {
            throw SingularShift(shift_);
        }
        if (absakk < alpha * colmax) {
            double rowmax = 0.0;
            for (Index j = k; j < imax; ++j) rowmax = std::max(rowmax, std::abs(bk_(imax, j)));
            for (Index i = imax + 1; i < n; ++i) rowmax = std::max(rowmax, std::abs(bk_(i, imax)));
            if (absakk * rowmax >= alpha * colmax * colmax) {
                // 1x1, no interchange
            } else if (std::abs(bk_(imax, imax)) >= alpha * rowmax) {
                kp = imax;
            } else {
                kstep = 2;
                kp = imax;
            }
        }

        const Index kk = k + kstep - 1;
        if (kp != kk) swap_sym_lower(bk_, kk, kp, k, kstep == 2);

        if (kstep == 1) {
            const double d = bk_(k, k);
            if (std::abs(d) <= ztol || !std::isfinite(d)) throw SingularShift(shift_);
            const double r1 = 1.0 / d;
            for (Index j = k + 1; j < n; ++j) {
                const double t = -r1 * bk_(j, k);
                if (t != 0.0) bk_.col(j).tail(n - j) += t * bk_.col(k).tail(n - j);
            }
            if (k + 1 < n) bk_.col(k).tail(n - k - 1) *= r1;
            ipiv_[size_t(k)] = int(kp);
        } else {
            const double d21 = bk_(k + 1, k);
            const double d11 = bk_(k + 1, k + 1) / d21;
            const double d22 = bk_(k, k) / d21;
            const double denom = d11 * d22 - 1.0;
            if (std::abs(denom) <= kEps || !std::isfinite(denom)) throw SingularShift(shift_);
            const double t = 1.0 / denom;
            const double d21i = t / d21;
            for (Index j = k + 2; j < n; ++j) {
                const double wk = d21i * (d11 * bk_(j, k) - bk_(j, k + 1));
                const double wkp1 = d21i * (d22 * bk_(j, k + 1) - bk_(j, k));
                bk_.col(j).tail(n - j) -=
                    wk * bk_.col(k).tail(n - j) + wkp1 * bk_.col(k + 1).tail(n - j);
                bk_(j, k) = wk;
                bk_(j, k + 1) = wkp1;
            }
            ipiv_[size_t(k)] = -int(kp) - 1;
            ipiv_[size_t(k + 1)] = -int(kp) - 1;
        }
        k += kstep;
    }
    compute_inertia_dense();
}

void ShiftedFactorization::compute_inertia_dense() {
    inertia_ = Inertia{};
    Index k = 0;
    while (k < n_) {
        if (ipiv_[size_t(k)] >= 0) {
            (bk_(k, k) > 0 ? inertia_.n_pos : inertia_.n_neg) += 1;
            k += 1;
        } else {
            const double det = bk_(k, k) * bk_(k + 1, k + 1) - bk_(k + 1, k) * bk_(k + 1, k);
            if (det < 0) {
                inertia_.n_pos += 1;
                inertia_.n_neg += 1;
            } else {
                ((bk_(k, k) + bk_(k + 1, k + 1)) > 0 ? inertia_.n_pos : inertia_.n_neg) += 2;
            }
            k += 2;
        }
    }
}

void ShiftedFactorization::factor_sparse(const SparseMatrix& a, double scale) {
    const double ztol = double(n_) * kEps * std::max(scale, kEps);
    ldlt_ = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>();
    ldlt_->compute(a);
    if (ldlt_->info() != Eigen::Success) throw SingularShift(shift_);
    const Vector& d = ldlt_->vectorD();
    inertia_ = Inertia{};
    for (Index i = 0; i < d.size(); ++i) {
        if (!std::isfinite(d[i]) || std::abs(d[i]) <= ztol) throw SingularShift(shift_);
        (d[i] > 0 ? inertia_.n_pos : inertia_.n_neg) += 1;
    }
}

Vector ShiftedFactorization::solve(const Vector& b) const {
    if (b.size() != n_) throw DimensionMismatch("rhs dimension mismatch");
    if (!dense_) return ldlt_->solve(b);

    Vector x = b;
    const Index n = n_;
    // L*D*y = P*b, pivot interchanges interleaved per block
    Index k = 0;
    while (k < n) {
        if (ipiv_[size_t(k)] >= 0) {
            const Index kp = ipiv_[size_t(k)];
            if (kp != k) std::swap(x[k], x[kp]);
            if (k + 1 < n) x.tail(n - k - 1) -= bk_.col(k).tail(n - k - 1) * x[k];
            x[k] /= bk_(k, k);
            k += 1;
        } else {
            const Index kp = -ipiv_[size_t(k)] - 1;
            if (kp != k + 1) std::swap(x[k + 1], x[kp]);
            if (k + 2 < n)
                x.tail(n - k - 2) -=
                    bk_.col(k).tail(n - k - 2) * x[k] + bk_.col(k + 1).tail(n - k - 2) * x[k + 1];
            const double d21 = bk_(k + 1, k);
            const double d11 = bk_(k, k) / d21;
            const double d22 = bk_(k + 1, k + 1) / d21;
            const double denom = d11 * d22 - 1.0;
            const double b1 = x[k] / d21;
            const double b2 = x[k + 1] / d21;
            x[k] = (d22 * b1 - b2) / denom;
            x[k + 1] = (d11 * b2 - b1) / denom;
            k += 2;
        }
    }
    // L^T*x = y, walking blocks backwards
    k = n - 1;
    while (k >= 0) {
        if (ipiv_[size_t(k)] >= 0) {
            if (k + 1 < n) x[k] -= bk_.col(k).tail(n - k - 1).dot(x.tail(n - k - 1));
            const Index kp = ipiv_[size_t(k)];
            if (kp != k) std::swap(x[k], x[kp]);
            k -= 1;
        } else {
            // second column of the 2x2 block at (k-1, k)
            if (k + 1 < n) {
                x[k] -= bk_.col(k).tail(n - k - 1).dot(x.tail(n - k - 1));
                x[k - 1] -= bk_.col(k - 1).tail(n - k - 1).dot(x.tail(n - k - 1));
            }
            const Index kp = -ipiv_[size_t(k)] - 1;
            if (kp != k) std::swap(x[k], x[kp]);
            k -= 2;
        }
    }
    return x;
}

Vector ShiftedFactorization::apply_factored(const Vector& v) const {
    if (v.size() != n_) throw DimensionMismatch("dimension mismatch");
    if (!dense_) {
        const auto& P = ldlt_->permutationP();
        Vector t = P * v;
        t = ldlt_->matrixU() * t;
        t = ldlt_->vectorD().asDiagonal() * t;
        t = ldlt_->matrixL() * t;
        return P.inverse() * t;
    }

    Vector x = v;
    const Index n = n_;
    // inverse of the L^T back-substitution: ascending over blocks
    Index k = 0;
    while (k < n) {
        if (ipiv_[size_t(k)] >= 0) {
            const Index kp = ipiv_[size_t(k)];
            if (kp != k) std::swap(x[k], x[kp]);
            if (k + 1 < n) x[k] += bk_.col(k).tail(n - k - 1).dot(x.tail(n - k - 1));
            k += 1;
        } else {
            const Index kp = -ipiv_[size_t(k)] - 1;
            if (kp != k + 1) std::swap(x[k + 1], x[kp]);
            if (k + 2 < n) {
                x[k] += bk_.col(k).tail(n - k - 2).dot(x.tail(n - k - 2));
                x[k + 1] += bk_.col(k + 1).tail(n - k - 2).dot(x.tail(n - k - 2));
            }
            k += 2;
        }
    }
    // inverse of the L*D forward pass: descending over blocks
    std::vector<Index> starts;
    k = 0;
    while (k < n) {
        starts.push_back(k);
        k += ipiv_[size_t(k)] >= 0 ? 1 : 2;
    }
    for (auto it = starts.rbegin(); it != starts.rend(); ++it) {
        const Index kb = *it;
        if (ipiv_[size_t(kb)] >= 0) {
            x[kb] *= bk_(kb, kb);
            if (kb + 1 < n) x.tail(n - kb - 1) += bk_.col(kb).tail(n - kb - 1) * x[kb];
            const Index kp = ipiv_[size_t(kb)];
            if (kp != kb) std::swap(x[kb], x[kp]);
        } else {
            const double a11 = bk_(kb, kb), a21 = bk_(kb + 1, kb), a22 = bk_(kb + 1, kb + 1);
            const double t1 = a11 * x[kb] + a21 * x[kb + 1];
            const double t2 = a21 * x[kb] + a22 * x[kb + 1];
            x[kb] = t1;
            x[kb + 1] = t2;
            if (kb + 2 < n)
                x.tail(n - kb - 2) +=
                    bk_.col(kb).tail(n - kb - 2) * x[kb] + bk_.col(kb + 1).tail(n - kb - 2) * x[kb + 1];
            const Index kp = -ipiv_[size_t(kb)] - 1;
            if (kp != kb + 1) std::swap(x[kb + 1], x[kp]);
        }
    }
    return x;
}

ShiftedFactorization ldlt_shifted(const SymmetricMatrix& m, double s) {
    return ShiftedFactorization(m, s);
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver

std::pair<Vector, Matrix> sym_eig(const Matrix& a) {
    if (a.rows() != a.cols()) throw NotSquare("sym_eig needs a square matrix");
    if (a.rows() < 1) throw InvalidParams("sym_eig needs m >= 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
    if (es.info() != Eigen::Success) throw NoConvergence("symmetric QR iteration did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

// ---------------------------------------------------------------------------
// Orthonormal bases

OrthoBasis::OrthoBasis(Matrix columns) : u_(std::move(columns)) {
    for (Index j = 0; j < u_.cols(); ++j) {
        const double nrm = u_.col(j).norm();
        if (nrm <= 0.0 || !std::isfinite(nrm))
            throw InvalidParams("degenerate column in basis seed");
        u_.col(j) /= nrm;
    }
}

OrthoBasis orth_extend(const OrthoBasis& u, const Matrix& v, double drop_tol) {
    if (v.cols() == 0) return u;
    const Index n = u.dim() > 0 ? u.rows() : v.rows();
    if (u.dim() > 0 && v.rows() != n) throw DimensionMismatch("candidate block row mismatch");

    Matrix out(n, u.dim() + v.cols());
    Index m = u.dim();
    if (m > 0) out.leftCols(m) = u.matrix();

    for (Index j = 0; j < v.cols(); ++j) {
        Vector w = v.col(j);
        const double v0 = w.norm();
        if (!(v0 > 0.0) || !std::isfinite(v0)) continue;
        for (int pass = 0; pass < 2; ++pass) {
            if (m > 0) w -= out.leftCols(m) * (out.leftCols(m).transpose() * w);
        }
        const double res = w.norm();
        if (res < drop_tol * v0) continue;
        out.col(m) = w / res;
        ++m;
    }

    OrthoBasis result;
    result.u_ = out.leftCols(m);
    return result;
}

OrthoBasis orth(const Matrix& v, double drop_tol) {
    return orth_extend(OrthoBasis(), v, drop_tol);
}

}  // namespace conekrylov
