#include "conekrylov/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace conekrylov {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Matrix apply_j_rows(const Matrix& u) {
    Matrix ju = -u;
    ju.row(0) = u.row(0);
    return ju;
}

}  // namespace

ReducedTriple project(const SymmetricMatrix& m, const Vector& q, const OrthoBasis& u) {
    if (u.dim() < 1) throw InvalidParams("projection needs a nonempty basis");
    if (u.rows() != m.n() || q.size() != m.n())
        throw DimensionMismatch("projection dimension mismatch");
    const Matrix& cols = u.matrix();

    ReducedTriple t;
    t.m_hat = cols.transpose() * m.apply(cols);
    t.m_hat = 0.5 * (t.m_hat + t.m_hat.transpose()).eval();
    t.j_hat = cols.transpose() * apply_j_rows(cols);
    t.j_hat = 0.5 * (t.j_hat + t.j_hat.transpose()).eval();
    t.q_hat = cols.transpose() * q;
    return t;
}

std::optional<ReducedPencil> diagonalize_pencil(const ReducedTriple& t) {
    const Index m = t.m_hat.rows();
    if (m < 1 || t.j_hat.rows() != m || t.q_hat.size() != m)
        throw DimensionMismatch("inconsistent reduced triple");

    // M_hat = R^T R, then eigendecompose S = R^{-T} J_hat R^{-1}; the inertia
    // of S matches J_hat by congruence.
    CholeskyFactor chol(t.m_hat);
    const Matrix& r = chol.upper();
    Matrix s = r.transpose().triangularView<Eigen::Lower>().solve(t.j_hat);
    s = r.transpose()
            .triangularView<Eigen::Lower>()
            .solve(Matrix(s.transpose()))
            .transpose();
    auto [mu, w] = sym_eig(0.5 * (s + s.transpose()));

    const double mu_scale = mu.cwiseAbs().maxCoeff();
    const double mu_tol = 64.0 * double(m) * kEps * std::max(mu_scale, kEps);
    int positives = 0;
    for (Index i = 0; i < m; ++i) {
        if (std::abs(mu[i]) <= mu_tol) return std::nullopt;  // J_hat numerically singular
        if (mu[i] > 0) ++positives;
    }
    if (positives != 1) return std::nullopt;

    // order: the positive eigenvalue leads, negatives follow with
    // omega = 1/|mu| ascending (mu ascending does exactly that)
    std::vector<Index> perm;
    perm.reserve(size_t(m));
    perm.push_back(m - 1);  // ascending order puts the positive one last
    for (Index i = 0; i + 1 < m; ++i) perm.push_back(i);

    ReducedPencil p;
    p.omega.resize(m);
    Matrix w_scaled(m, m);
    for (Index i = 0; i < m; ++i) {
        p.omega[i] = 1.0 / std::abs(mu[perm[size_t(i)]]);
        w_scaled.col(i) = w.col(perm[size_t(i)]) * std::sqrt(p.omega[i]);
    }
    p.v = r.triangularView<Eigen::Upper>().solve(w_scaled);
    p.xi = p.v.transpose() * t.q_hat;

    // deflate negligible components so near-pole noise cannot fake a root
    const double xi2 = p.xi.squaredNorm();
    for (Index i = 0; i < m; ++i) {
        if (p.xi[i] * p.xi[i] <= kEps * xi2) p.xi[i] = 0.0;
    }
    p.pole_active = p.xi[0] != 0.0;
    return p;
}

double eval_h_hat(const ReducedPencil& p, double s) {
    double val = 0.0;
    if (p.xi[0] != 0.0) {
        const double d = s - p.omega[0];
        if (d == 0.0) return HUGE_VAL;
        val += (p.xi[0] / d) * (p.xi[0] / d);
    }
    for (Index i = 1; i < p.dim(); ++i) {
        if (p.xi[i] == 0.0) continue;
        const double d = s + p.omega[i];
        if (d == 0.0) return -HUGE_VAL;
        val -= (p.xi[i] / d) * (p.xi[i] / d);
    }
    if (std::abs(val) > 1e100) return std::copysign(HUGE_VAL, val);
    return val;
}

namespace {

double eval_h_hat_deriv(const ReducedPencil& p, double s) {
    double val = 0.0;
    if (p.xi[0] != 0.0) {
        const double d = s - p.omega[0];
        val += -2.0 * p.xi[0] * p.xi[0] / (d * d * d);
    }
    for (Index i = 1; i < p.dim(); ++i) {
        if (p.xi[i] == 0.0) continue;
        const double d = s + p.omega[i];
        val += 2.0 * p.xi[i] * p.xi[i] / (d * d * d);
    }
    return val;
}

// Safeguarded Newton on a bracket [lo, hi] with h(lo) < 0 < h(hi) or the
// reverse; converges to 1e-13 relative.
double polish_root(const ReducedPencil& p, double lo, double hi, double flo, double fhi) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = eval_h_hat(p, s);
        if (f == 0.0) return s;
        if ((f < 0) == (flo < 0)) {
            lo = s;
            flo = f;
        } else {
            hi = s;
            fhi = f;
        }
        const double df = eval_h_hat_deriv(p, s);
        double snew = s - f / df;
        if (!std::isfinite(snew) || snew <= std::min(lo, hi) || snew >= std::max(lo, hi))
            snew = 0.5 * (lo + hi);
        if (std::abs(snew - s) <= 1e-13 * std::max(std::abs(snew), 1e-300)) return snew;
        s = snew;
    }
    return s;
}

}  // namespace

std::optional<double> find_zero_left(const ReducedPencil& p) {
    if (!p.pole_active) return std::nullopt;
    const double f0 = eval_h_hat(p, 0.0);
    if (!(f0 < 0.0)) return std::nullopt;

    // h_hat is strictly increasing on (0, omega_1) and blows up at the pole:
    // a dyadic sweep toward the pole brackets the unique crossing.
    const double pole = p.omega[0];
    double lo = 0.0, flo = f0;
    for (int k = 1; k <= 60; ++k) {
        const double s = pole * (1.0 - std::ldexp(1.0, -k));
        const double f = eval_h_hat(p, s);
        if (f >= 0.0) return polish_root(p, lo, s, flo, f);
        lo = s;
        flo = f;
    }
    return std::nullopt;
}

std::optional<double> find_zero_right(const ReducedPencil& p, double scan_limit, RootPick pick) {
    if (!p.pole_active) return std::nullopt;
    const double pole = p.omega[0];
    double limit = std::max(scan_limit, 10.0 * pole);

    const double delta = 1e-8;
    std::vector<double> grid;
    grid.reserve(66);
    for (int k = 0; k < 64; ++k) {
        const double s = pole * (1.0 + delta * std::ldexp(1.0, k));
        if (s >= limit) break;
        grid.push_back(s);
    }
    grid.push_back(limit);

    std::vector<double> roots;
    double prev_s = grid[0];
    double prev_f = eval_h_hat(p, prev_s);
    for (size_t i = 1; i < grid.size(); ++i) {
        const double s = grid[i];
        const double f = eval_h_hat(p, s);
        if (prev_f == 0.0) {
            roots.push_back(prev_s);
        } else if (f != 0.0 && std::signbit(f) != std::signbit(prev_f)) {
            roots.push_back(polish_root(p, prev_s, s, prev_f, f));
        }
        prev_s = s;
        prev_f = f;
    }
    if (prev_f == 0.0) roots.push_back(prev_s);

    if (roots.empty()) return std::nullopt;
    return pick == RootPick::kSmallest ? roots.front() : roots.back();
}

}  // namespace conekrylov
