#include "conekrylov/socone.hpp"

#include <cmath>

namespace conekrylov {

namespace {

void check_dim(const Vector& x) {
    if (x.size() < 2) throw DimensionMismatch("cone vectors need n >= 2");
}

}  // namespace

bool in_cone(const Vector& x, double tol) {
    check_dim(x);
    return x.tail(x.size() - 1).norm() <= x[0] + tol * x.norm();
}

bool on_boundary(const Vector& x, double eps3) {
    check_dim(x);
    if (!(x[0] > 0.0)) return false;
    return std::abs(x[0] - x.tail(x.size() - 1).norm()) < eps3 * x.norm();
}

Vector apply_J(const Vector& x) {
    check_dim(x);
    Vector y = -x;
    y[0] = x[0];
    return y;
}

double j_quadratic_form(const Vector& x) {
    check_dim(x);
    return x[0] * x[0] - x.tail(x.size() - 1).squaredNorm();
}

ResidualBreakdown chi_rel(const Vector& x, const SymmetricMatrix& m, const Vector& q) {
    check_dim(x);
    if (x.size() != m.n() || q.size() != m.n())
        throw DimensionMismatch("chi_rel dimension mismatch");
    const double xnorm = x.norm();
    if (!(xnorm > 0.0)) throw ZeroVector("chi_rel is undefined at x = 0");

    const Vector g = m.apply(x) + q;
    const double data_scale = m.one_norm() * xnorm + q.norm();

    ResidualBreakdown r;
    r.chi1 = std::max(x.tail(x.size() - 1).norm() - x[0], 0.0) / xnorm;
    r.chi2 = std::max(g.tail(g.size() - 1).norm() - g[0], 0.0) / data_scale;
    r.chi3 = std::abs(x.dot(g)) / (xnorm * data_scale);
    r.total = r.chi1 + r.chi2 + r.chi3;
    return r;
}

}  // namespace conekrylov
