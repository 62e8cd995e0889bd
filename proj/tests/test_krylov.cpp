#include <doctest.h>

#include <cmath>

#include <Eigen/LU>

#include "conekrylov/krylov.hpp"
#include "conekrylov/reduced.hpp"
#include "conekrylov/socone.hpp"
#include "conekrylov/transfer.hpp"
#include "support.hpp"

using namespace conekrylov;
using testsupport::random_matrix;
using testsupport::random_spd;
using testsupport::random_vector;

namespace {

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

// rescale M so the positive pencil eigenvalue lands at 1; keeps transfer
// probes on (0, 1) safely regular
SymmetricMatrix tau_normalized(const Matrix& m_dense) {
    ReducedTriple full;
    full.m_hat = m_dense;
    full.j_hat = Matrix::Identity(m_dense.rows(), m_dense.cols());
    full.j_hat.diagonal().tail(m_dense.rows() - 1).setConstant(-1.0);
    full.q_hat = Vector::Ones(m_dense.rows());
    auto pencil = diagonalize_pencil(full);
    REQUIRE(pencil.has_value());
    return SymmetricMatrix(Matrix(m_dense / pencil->omega[0]));
}

// least-squares slope of log(err) against log(delta)
double loglog_slope(const std::vector<double>& deltas, const std::vector<double>& errs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < deltas.size(); ++i) {
        if (!(errs[i] > 0) || !std::isfinite(errs[i])) continue;
        const double x = std::log(deltas[i]);
        const double y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    REQUIRE(n >= 4);
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

}  // namespace

TEST_CASE("arnoldi: invariant start vector breaks down at one column") {
    Matrix a = Matrix::Zero(2, 2);
    a.diagonal() << 1, 2;
    auto res = arnoldi([&a](const Vector& v) { return Vector(a * v); }, Vector::Unit(2, 0), 2);
    CHECK(res.breakdown);
    CHECK(res.basis.dim() == 1);
    CHECK(res.hessenberg(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("arnoldi: exchange matrix fills the space") {
    Matrix a(2, 2);
    a << 0, 1, 1, 0;
    auto res = arnoldi([&a](const Vector& v) { return Vector(a * v); }, Vector::Unit(2, 0), 2);
    CHECK(res.basis.dim() == 2);
    CHECK((res.hessenberg - a).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("arnoldi: relation residual on a random 50x50") {
    Matrix a = random_matrix(50, 50, 17);
    auto res = arnoldi([&a](const Vector& v) { return Vector(a * v); }, random_vector(50, 18), 12);
    const Matrix& y = res.basis.matrix();
    const Matrix& h = res.hessenberg;
    Matrix residual = a * y - y * h;
    // all columns except the last vanish, and the residual is orthogonal to Y
    CHECK(residual.leftCols(res.basis.dim() - 1).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((y.transpose() * residual).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((y.transpose() * y - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("extended_krylov: generic instance reaches ell0 + k0") {
    const Index n = 100;
    SymmetricMatrix m{random_spd(n, 1e2, 51)};
    CholeskyFactor chol(m);
    OrthoBasis u = extended_krylov(m, Vector::Ones(n), 3, 3, chol);
    CHECK(u.dim() == 6);
}

TEST_CASE("extended_krylov: M = I collapses to two directions") {
    const Index n = 20;
    SymmetricMatrix m{Matrix(Matrix::Identity(n, n))};
    CholeskyFactor chol(m);
    Vector q = random_vector(n, 52);
    OrthoBasis u = extended_krylov(m, q, 3, 3, chol);
    CHECK(u.dim() <= 2);
}

TEST_CASE("extended_krylov: contains the forward Krylov generators") {
    const Index n = 40;
    SymmetricMatrix m{random_spd(n, 1e3, 53)};
    CholeskyFactor chol(m);
    Vector q = random_vector(n, 54);
    OrthoBasis u = extended_krylov(m, q, 4, 3, chol);

    Vector g = apply_J(q);
    for (int k = 0; k < 4; ++k) {
        Vector res = g - u.matrix() * (u.matrix().transpose() * g);
        CHECK(res.norm() <= 1e-10 * g.norm());
        g = apply_J(m.apply(g));
    }
}

TEST_CASE("shift_block: first column is the solve direction") {
    SymmetricMatrix m{random_spd(30, 1e2, 55)};
    Vector q = random_vector(30, 56);
    const double s = 0.1;
    ShiftedFactorization fact(m, s);
    OrthoBasis u = shift_block(fact, q, 1);
    REQUIRE(u.dim() == 1);
    Vector dir = fact.solve(q);
    const double cosine = std::abs(u.matrix().col(0).dot(dir)) / dir.norm();
    CHECK(cosine == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shift_block: diagonal iteration spans the plane") {
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 1, 4;
    SymmetricMatrix m{d};
    OrthoBasis u = shift_block(m, vec2(1, -2), 0.0, 2);
    CHECK(u.dim() == 2);
}

TEST_CASE("single_shift_reduction: zeroth moment matches exactly") {
    SymmetricMatrix m = tau_normalized(random_spd(30, 1e3, 57));
    Vector q = random_vector(30, 58);
    TransferEvaluator ev(m, q);
    for (double s0 : {0.05, 0.4}) {
        KrylovReduction red = single_shift_reduction(m, q, s0, 3);
        CHECK(red.eval(s0) == doctest::Approx(ev.eval_h(s0)).epsilon(1e-12));
    }
}

TEST_CASE("single_shift_reduction: exact for n = 2 at ell = 2") {
    SymmetricMatrix m{Matrix(Matrix::Identity(2, 2))};
    Vector q = vec2(-1, -2);
    TransferEvaluator ev(m, q);
    KrylovReduction red = single_shift_reduction(m, q, 0.05, 2);
    REQUIRE(red.dim() == 2);
    for (double s : {0.0, 0.1, 0.3, 0.6, 2.0, 5.0}) {
        CHECK(red.eval(s) == doctest::Approx(ev.eval_h(s)).epsilon(1e-11));
    }
}

TEST_CASE("single_shift_reduction: one active direction makes ell = 1 exact") {
    // q aligned with a single pencil direction: x(s) stays on a line
    SymmetricMatrix m{Matrix(Matrix::Identity(2, 2))};
    Vector q = vec2(1, 0);
    TransferEvaluator ev(m, q);
    KrylovReduction red = single_shift_reduction(m, q, 0.2, 1);
    for (double s : {0.0, 0.4, 0.8}) {
        CHECK(red.eval(s) == doctest::Approx(ev.eval_h(s)).epsilon(1e-12));
    }
}

TEST_CASE("single_shift_reduction: degenerate center is rejected") {
    SymmetricMatrix m{Matrix(Matrix::Identity(2, 2))};
    // h(1/3) = 0 for q = (-1, -2)
    CHECK_THROWS_AS(single_shift_reduction(m, vec2(-1, -2), 1.0 / 3.0, 2), DegenerateCenter);
}

TEST_CASE("single_shift_reduction: Arnoldi relation for its own basis") {
    SymmetricMatrix m = tau_normalized(random_spd(40, 1e2, 65));
    Vector q = random_vector(40, 66);
    const double s0 = 0.35;
    KrylovReduction red = single_shift_reduction(m, q, s0, 5);
    ShiftedFactorization fact(m, s0);
    const Matrix& y = red.basis().matrix();
    Matrix ay(y.rows(), y.cols());
    for (Index j = 0; j < y.cols(); ++j) ay.col(j) = fact.solve(apply_J(y.col(j)));
    Matrix residual = ay - y * red.hessenberg();
    CHECK(residual.leftCols(y.cols() - 1).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((y.transpose() * residual).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("moment doubling: error order 2*ell - 1 at the center") {
    const Index n = 30;
    SymmetricMatrix m = tau_normalized(random_spd(n, 1e2, 59));
    Vector q = random_vector(n, 60);
    TransferEvaluator ev(m, q);
    const double s0 = 0.45;  // pole sits at 1, the sample window ends at 0.55

    for (Index ell : {Index(1), Index(2), Index(3)}) {
        KrylovReduction red = single_shift_reduction(m, q, s0, ell);
        std::vector<double> deltas, errs;
        for (int k = 0; k < 13; ++k) {
            const double delta = 1e-3 * std::pow(10.0, double(k) / 6.0);  // up to 1e-1
            const double href = ev.eval_h(s0 + delta);
            const double err = std::abs(href - red.eval(s0 + delta));
            // points at the roundoff floor measure noise, not the order
            if (err <= 1e-13 * std::max(std::abs(href), 1.0)) continue;
            deltas.push_back(delta);
            errs.push_back(err);
        }
        const double slope = loglog_slope(deltas, errs);
        CHECK(slope >= 2.0 * double(ell) - 1.5);
    }
}

TEST_CASE("Lemma interlacing: builder bases leave at most one positive J-eigenvalue") {
    const Index n = 60;
    SymmetricMatrix m = tau_normalized(random_spd(n, 1e3, 61));
    Vector q = random_vector(n, 62);
    CholeskyFactor chol(m);

    std::vector<OrthoBasis> bases;
    bases.push_back(extended_krylov(m, q, 5, 4, chol));
    bases.push_back(shift_block(m, q, 0.03, 6));
    bases.push_back(orth_extend(bases[0], bases[1].matrix()));

    for (const OrthoBasis& u : bases) {
        Matrix ju = -u.matrix();
        ju.row(0) = u.matrix().row(0);
        Matrix uju = u.matrix().transpose() * ju;
        auto [vals, vecs] = sym_eig(0.5 * (uju + uju.transpose()));
        int positives = 0;
        for (Index i = 0; i < vals.size(); ++i)
            if (vals[i] > 1e-12) ++positives;
        CHECK(positives <= 1);
    }
}

TEST_CASE("interpolation at used shifts for the accumulated basis") {
    const Index n = 40;
    SymmetricMatrix m = tau_normalized(random_spd(n, 1e3, 63));
    Vector q = random_vector(n, 64);
    TransferEvaluator ev(m, q);

    const std::vector<double> shifts = {0.02, 0.11, 0.35};
    OrthoBasis u;
    for (double s : shifts) u = orth_extend(u, shift_block(m, q, s, 2).matrix());

    ReducedTriple t = project(m, q, u);
    // evaluate h_hat through the quadratic form, no inertia assumption needed
    for (double s : shifts) {
        Matrix shifted = t.m_hat - s * t.j_hat;
        Vector y = shifted.lu().solve(t.q_hat);
        const double h_hat = y.dot(t.j_hat * y);
        CHECK(h_hat == doctest::Approx(ev.eval_h(s)).epsilon(1e-9));
    }
}
