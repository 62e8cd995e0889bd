#include "conekrylov/generate.hpp"

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <Eigen/QR>

namespace conekrylov {

namespace {

// mt19937_64 has a standard-specified sequence; the transforms below are
// fixed here, so instances are bit-reproducible for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

Vector log_spaced(Index n, double rc) {
    Vector d(n);
    if (n == 1) {
        d[0] = 1.0;
        return d;
    }
    for (Index i = 0; i < n; ++i) d[i] = std::exp(std::log(rc) * double(i) / double(n - 1));
    return d;
}

// rows[i] maps column -> value, holding the full symmetric pattern
using SymRows = std::vector<std::map<Index, double>>;

void set_sym(SymRows& rows, Index i, Index j, double v, std::int64_t& nnz) {
    auto put = [&nnz](std::map<Index, double>& row, Index col, double val) {
        auto [it, inserted] = row.insert_or_assign(col, val);
        (void)it;
        if (inserted) ++nnz;
    };
    put(rows[size_t(i)], j, v);
    if (i != j) put(rows[size_t(j)], i, v);
}

double get_sym(const SymRows& rows, Index i, Index j) {
    const auto& row = rows[size_t(i)];
    auto it = row.find(j);
    return it == row.end() ? 0.0 : it->second;
}

// Two-sided Givens congruence on index pair (i, k): A <- G^T A G. Exact
// similarity, so the spectrum is untouched while the pattern spreads.
void rotate_pair(SymRows& rows, Index i, Index k, double c, double s, std::int64_t& nnz) {
    std::vector<Index> touched;
    for (const auto& [j, v] : rows[size_t(i)]) touched.push_back(j);
    for (const auto& [j, v] : rows[size_t(k)]) touched.push_back(j);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    const double aii = get_sym(rows, i, i);
    const double aik = get_sym(rows, i, k);
    const double akk = get_sym(rows, k, k);

    for (Index j : touched) {
        if (j == i || j == k) continue;
        const double vij = get_sym(rows, i, j);
        const double vkj = get_sym(rows, k, j);
        set_sym(rows, i, j, c * vij + s * vkj, nnz);
        set_sym(rows, k, j, -s * vij + c * vkj, nnz);
    }
    // 2x2 diagonal block under the congruence
    const double nii = c * c * aii + 2.0 * c * s * aik + s * s * akk;
    const double nkk = s * s * aii - 2.0 * c * s * aik + c * c * akk;
    const double nik = c * s * (akk - aii) + (c * c - s * s) * aik;
    set_sym(rows, i, i, nii, nnz);
    set_sym(rows, k, k, nkk, nnz);
    set_sym(rows, i, k, nik, nnz);
}

SparseMatrix rows_to_sparse(const SymRows& rows, Index n) {
    std::vector<Eigen::Triplet<double>> trip;
    for (Index i = 0; i < n; ++i)
        for (const auto& [j, v] : rows[size_t(i)])
            if (v != 0.0) trip.emplace_back(int(i), int(j), v);
    SparseMatrix a(static_cast<int>(n), static_cast<int>(n));
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
    return a;
}

SymmetricMatrix from_factor_dense(const Matrix& r) { return SymmetricMatrix(Matrix(r * r)); }

SymmetricMatrix from_factor_sparse(const SparseMatrix& r) {
    SparseMatrix m = (r * r).pruned();
    m.makeCompressed();
    return SymmetricMatrix(m);
}

SymmetricMatrix gen_dense(Index n, double rc, int kind, Rng& rng) {
    const Vector d = log_spaced(n, rc);
    if (kind == 2) {
        Matrix g(n, n);
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i) g(i, j) = rng.normal();
        Eigen::HouseholderQR<Matrix> qr(g);
        Matrix qmat = qr.householderQ() * Matrix::Identity(n, n);
        Matrix r = qmat * d.asDiagonal() * qmat.transpose();
        return from_factor_dense(0.5 * (r + r.transpose()));
    }
    Matrix e(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) e(i, j) = rng.uniform(-1.0, 1.0);
    e = 0.5 * (e + e.transpose()).eval();
    double gersh = 0.0;
    for (Index i = 0; i < n; ++i) gersh = std::max(gersh, e.row(i).cwiseAbs().sum());
    Matrix r = Matrix(d.asDiagonal()) + e * (0.5 * rc / std::max(gersh, 1e-300));
    return from_factor_dense(r);
}

SymmetricMatrix gen_sparse_kind2(Index n, double density, double rc, Rng& rng) {
    SymRows rows(static_cast<size_t>(n));
    std::int64_t nnz = 0;
    const Vector d = log_spaced(n, rc);
    for (Index i = 0; i < n; ++i) set_sym(rows, i, i, d[i], nnz);

    const auto target = std::int64_t(std::llround(density * double(n) * double(n)));
    const std::int64_t budget = 64 * std::max<std::int64_t>(target, n);
    std::int64_t spins = 0;
    while (nnz < target && spins++ < budget) {
        const Index i = Index(rng.below(std::uint64_t(n)));
        Index k = Index(rng.below(std::uint64_t(n)));
        if (i == k) continue;
        const double theta = rng.uniform(0.0, 2.0 * M_PI);
        rotate_pair(rows, std::min(i, k), std::max(i, k), std::cos(theta), std::sin(theta), nnz);
    }
    return from_factor_sparse(rows_to_sparse(rows, n));
}

SymmetricMatrix gen_sparse_kind1(Index n, double density, double rc, Rng& rng) {
    SymRows rows(static_cast<size_t>(n));
    std::int64_t nnz = 0;
    const Vector d = log_spaced(n, rc);
    const auto target = std::int64_t(std::llround(density * double(n) * double(n)));
    std::int64_t pairs = std::max<std::int64_t>((target - n) / 2, 0);
    std::int64_t spins = 0;
    while (pairs > 0 && spins++ < 64 * target) {
        const Index i = Index(rng.below(std::uint64_t(n)));
        const Index j = Index(rng.below(std::uint64_t(n)));
        if (i == j) continue;
        if (get_sym(rows, i, j) != 0.0) continue;
        set_sym(rows, i, j, rng.uniform(-1.0, 1.0), nnz);
        --pairs;
    }
    // scale the perturbation so Gershgorin keeps the spectrum near [rc/2, 1 + rc/2]
    double gersh = 0.0;
    for (Index i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& [j, v] : rows[size_t(i)]) s += std::abs(v);
        gersh = std::max(gersh, s);
    }
    const double scale = 0.5 * rc / std::max(gersh, 1e-300);
    for (Index i = 0; i < n; ++i)
        for (auto& [j, v] : rows[size_t(i)]) v *= scale;
    for (Index i = 0; i < n; ++i) {
        const double cur = get_sym(rows, i, i);
        set_sym(rows, i, i, cur + d[i], nnz);
    }
    return from_factor_sparse(rows_to_sparse(rows, n));
}

}  // namespace

SymmetricMatrix gen_random_spd(Index n, double density, double rc, int kind,
                               std::uint64_t seed) {
    if (n < 2) throw InvalidParams("generator needs n >= 2");
    if (!(density > 0.0) || density > 1.0) throw InvalidParams("density must be in (0, 1]");
    if (!(rc > 0.0) || rc > 1.0) throw InvalidParams("rc must be in (0, 1]");
    if (kind != 1 && kind != 2) throw InvalidParams("kind must be 1 or 2");

    Rng rng(seed);
    if (density >= 0.9 || n <= 64) return gen_dense(n, rc, kind, rng);
    return kind == 2 ? gen_sparse_kind2(n, density, rc, rng)
                     : gen_sparse_kind1(n, density, rc, rng);
}

}  // namespace conekrylov
