#include "conekrylov/rksm.hpp"

#include <cmath>

#include "conekrylov/krylov.hpp"
#include "conekrylov/transfer.hpp"

namespace conekrylov {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::kTrivialZero: return "trivial_zero";
        case Outcome::kLinearSolve: return "linear_solve";
        case Outcome::kBoundaryRoot: return "boundary_root";
        case Outcome::kSpecialCaseDetected: return "special_case_detected";
        case Outcome::kMaxIterations: return "max_iterations";
    }
    return "unknown";
}

std::string to_string(Case c) {
    switch (c) {
        case Case::kC1: return "C1";
        case Case::kC2: return "C2";
        case Case::kC3: return "C3";
    }
    return "unknown";
}

void SolverOptions::validate() const {
    if (ell0 < 1 || k0 < 1 || ell < 1) throw InvalidParams("subspace dimensions must be >= 1");
    if (j_max < 1) throw InvalidParams("j_max must be >= 1");
    if (!(eps1 > 0) || !(eps2 > 0) || !(eps3 > 0)) throw InvalidParams("tolerances must be positive");
    if (cone_tol < 0 || !(drop_tol > 0)) throw InvalidParams("invalid tolerance");
}

Case classify(const SymmetricMatrix& m, const Vector& q, double cone_tol) {
    if (q.size() != m.n()) throw DimensionMismatch("q dimension mismatch");
    if (in_cone(q, cone_tol)) return Case::kC1;
    CholeskyFactor chol(m);
    if (in_cone(-chol.solve(q), cone_tol)) return Case::kC2;
    return Case::kC3;
}

namespace {

ResidualBreakdown exact_zero_residual() { return ResidualBreakdown{}; }

double left_compulsory(double m_norm, int j) {
    // (||M||_1 + floor(j/16)) / 10^(j mod 16); fresh offsets after 16 shifts
    return (m_norm + double(j / 16)) / std::pow(10.0, double(j % 16));
}

double right_compulsory(double m_norm, int j) { return std::pow(1.1, double(j - 1)) * m_norm; }

enum class LoopExit { kStopA, kStopB, kExhausted };

struct LoopState {
    OrthoBasis u;
    std::vector<double> used_shifts;
    Vector x;
    bool have_x = false;
    double last_shift = 0.0;
    ResidualBreakdown last_chi;
    int degenerate_pencils = 0;   // valid inertia but no usable root (deflated pole)
    int saturated_expansions = 0; // expansions whose block fell inside span(U)
    double max_right_compulsory = 0.0;
};

double dedup_shift(double s, const std::vector<double>& used) {
    for (double u : used) {
        if (std::abs(s - u) <= 1e-14 * std::max({std::abs(s), std::abs(u), 1e-300}))
            return s * (1.0 + 1e-8);
    }
    return s;
}

Vector eval_x_robust(const TransferEvaluator& ev, double& s) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            return ev.eval_x(s);
        } catch (const SingularShift&) {
            s += std::ldexp(1.0 + std::abs(s), -20);
        }
    }
    return ev.eval_x(s);  // let the final failure propagate
}

// Newton correction of an accepted root on the full h(s), reusing the cached
// factorization for the derivative: h' = 2 x^T J x' with x' = (M-sJ)^{-1} Jx.
// Steps are accepted only while |h| shrinks.
void newton_polish(const TransferEvaluator& ev, double& s, Vector& x, double& h) {
    for (int it = 0; it < 2 && h != 0.0; ++it) {
        Vector jx = apply_J(x);
        Vector xprime;
        try {
            xprime = ev.factorization(s)->solve(jx);
        } catch (const SingularShift&) {
            return;
        }
        const double hp = 2.0 * jx.dot(xprime);
        if (hp == 0.0 || !std::isfinite(hp)) return;
        const double snew = s - h / hp;
        if (!(snew > 0.0) || !std::isfinite(snew)) return;
        Vector xnew;
        try {
            xnew = ev.eval_x(snew);
        } catch (const SingularShift&) {
            return;
        }
        const double hnew = j_quadratic_form(xnew);
        if (!std::isfinite(hnew) || std::abs(hnew) >= std::abs(h)) return;
        s = snew;
        x = std::move(xnew);
        h = hnew;
    }
}

LoopExit run_loop(bool left_side, const SymmetricMatrix& m, const Vector& q,
                  const TransferEvaluator& ev, const SolverOptions& opts, LoopState& st,
                  SolveReport& report) {
    const std::string side = left_side ? "left" : "right";
    for (int j = 1; j <= opts.j_max; ++j) {
        ReducedTriple triple = project(m, q, st.u);
        std::optional<ReducedPencil> pencil = diagonalize_pencil(triple);

        double sj = 0.0;
        if (pencil) {
            std::optional<double> root;
            if (left_side) {
                // the left interval carries at most one root, so the pick
                // policy only matters on the right
                root = find_zero_left(*pencil);
            } else {
                const double limit =
                    std::max(10.0 * m.one_norm(), 1.05 * st.max_right_compulsory);
                root = find_zero_right(*pencil, limit, opts.right_pick);
            }
            if (root) {
                sj = *root;
            } else {
                st.degenerate_pencils += 1;
                pencil.reset();  // fall through to the compulsory schedule
            }
        }
        if (!pencil) {
            sj = left_side ? left_compulsory(m.one_norm(), j) : right_compulsory(m.one_norm(), j);
            if (!left_side) st.max_right_compulsory = std::max(st.max_right_compulsory, sj);
        }

        sj = dedup_shift(sj, st.used_shifts);
        Vector x = eval_x_robust(ev, sj);
        st.used_shifts.push_back(sj);

        double h = j_quadratic_form(x);
        const ResidualBreakdown chi = chi_rel(x, m, q);
        st.x = std::move(x);
        st.have_x = true;
        st.last_shift = sj;
        st.last_chi = chi;

        TraceRow row{side, j, sj, h, st.u.dim(), chi.total};

        const bool stop_a = std::abs(h) < opts.eps1 * st.x.squaredNorm();
        // the chi_rel stop returns a solution outright, so it must also pass
        // the boundary test the report promises
        const bool stop_b = chi.total < opts.eps2 && on_boundary(st.x, opts.eps3);
        if (stop_a || stop_b) {
            newton_polish(ev, st.last_shift, st.x, h);
            st.last_chi = chi_rel(st.x, m, q);
            report.trace.push_back(row);
            return stop_b ? LoopExit::kStopB : LoopExit::kStopA;
        }

        OrthoBasis block = shift_block(*ev.factorization(sj), q, opts.ell, opts.drop_tol);
        const Index before = st.u.dim();
        st.u = orth_extend(st.u, block.matrix(), opts.drop_tol);
        if (st.u.dim() == before) st.saturated_expansions += 1;
        report.expansion_steps += 1;
        row.dim = st.u.dim();
        report.trace.push_back(row);
    }
    return LoopExit::kExhausted;
}

SolveReport finish_boundary(SolveReport&& report, const LoopState& st) {
    report.outcome = Outcome::kBoundaryRoot;
    report.s_star = st.last_shift;
    report.x = st.x;
    report.chi = st.last_chi;
    report.final_dim = st.u.dim();
    return std::move(report);
}

}  // namespace

SolveReport solve(const SymmetricMatrix& m, const Vector& q, const SolverOptions& opts) {
    opts.validate();
    if (q.size() != m.n()) throw DimensionMismatch("q dimension mismatch");

    SolveReport report;
    if (in_cone(q, opts.cone_tol)) {
        report.outcome = Outcome::kTrivialZero;
        report.x = Vector::Zero(m.n());
        report.chi = exact_zero_residual();
        return report;
    }

    CholeskyFactor chol(m);
    const Vector x0 = chol.solve(q);  // = -x(0)
    {
        Vector xc2 = -x0;
        if (in_cone(xc2, opts.cone_tol)) {
            report.outcome = Outcome::kLinearSolve;
            report.chi = chi_rel(xc2, m, q);
            report.x = std::move(xc2);
            return report;
        }
    }

    // h(0) at marginal cost from the retained Cholesky solve
    const double h0 = j_quadratic_form(x0);

    LoopState st;
    st.u = extended_krylov(m, q, opts.ell0, opts.k0, chol, opts.drop_tol);
    report.initial_dim = st.u.dim();

    TransferEvaluator ev(m, q);
    int rejected_roots = 0;

    if (h0 < 0) {
        const LoopExit exit = run_loop(true, m, q, ev, opts, st, report);
        if (exit == LoopExit::kStopB) return finish_boundary(std::move(report), st);
        if (st.have_x && on_boundary(st.x, opts.eps3))
            return finish_boundary(std::move(report), st);
        if (exit == LoopExit::kStopA) rejected_roots += 1;
    }

    const LoopExit exit = run_loop(false, m, q, ev, opts, st, report);
    if (exit == LoopExit::kStopB) return finish_boundary(std::move(report), st);
    if (st.have_x && on_boundary(st.x, opts.eps3)) return finish_boundary(std::move(report), st);
    if (exit == LoopExit::kStopA) rejected_roots += 1;

    report.final_dim = st.u.dim();
    if (st.have_x) {
        report.x = st.x;
        report.chi = st.last_chi;
    }
    // Distinguish the pole-coincident case from plain non-convergence: either
    // a computed root was rejected by the boundary test, the reduced pole
    // term deflated away (q orthogonal to the J-positive direction), or the
    // reachable subspace saturated without ever producing a usable root. In
    // each of those situations the remaining possibility under GUS is
    // s_star at the pencil eigenvalue itself.
    const bool special = rejected_roots > 0 || st.degenerate_pencils > 0 ||
                         st.saturated_expansions > 0;
    report.outcome = special ? Outcome::kSpecialCaseDetected : Outcome::kMaxIterations;
    return report;
}

SolveReport direct_oracle(const SymmetricMatrix& m, const Vector& q, Index dense_cap,
                          const SolverOptions& opts) {
    opts.validate();
    if (q.size() != m.n()) throw DimensionMismatch("q dimension mismatch");
    if (m.n() > dense_cap) throw TooLarge("oracle is restricted to n <= dense cap");

    SolveReport report;
    if (in_cone(q, opts.cone_tol)) {
        report.outcome = Outcome::kTrivialZero;
        report.x = Vector::Zero(m.n());
        report.chi = exact_zero_residual();
        return report;
    }
    const Matrix a = m.to_dense();
    CholeskyFactor chol(a);
    {
        Vector xc2 = -chol.solve(q);
        if (in_cone(xc2, opts.cone_tol)) {
            report.outcome = Outcome::kLinearSolve;
            report.chi = chi_rel(xc2, m, q);
            report.x = std::move(xc2);
            return report;
        }
    }

    // full-pencil diagonalization: the U = I instance of the projection
    ReducedTriple triple;
    triple.m_hat = a;
    triple.j_hat = Matrix::Identity(m.n(), m.n());
    triple.j_hat.diagonal().tail(m.n() - 1).setConstant(-1.0);
    triple.q_hat = q;
    std::optional<ReducedPencil> pencil = diagonalize_pencil(triple);
    if (!pencil) throw NoConvergence("full pencil of an SPD matrix lost its positive direction");

    report.initial_dim = m.n();
    report.final_dim = m.n();

    const auto x_at = [&](double s) -> Vector {
        Vector w = pencil->xi;
        w[0] /= (pencil->omega[0] - s);
        for (Index i = 1; i < w.size(); ++i) w[i] /= (pencil->omega[i] + s);
        return -(pencil->v * w);
    };
    const auto try_root = [&](double s, int j, const char* side_tag) -> bool {
        Vector x = x_at(s);
        const double h = j_quadratic_form(x);
        const ResidualBreakdown chi = chi_rel(x, m, q);
        report.trace.push_back({side_tag, j, s, h, m.n(), chi.total});
        if (on_boundary(x, opts.eps3)) {
            report.outcome = Outcome::kBoundaryRoot;
            report.s_star = s;
            report.x = std::move(x);
            report.chi = chi;
            return true;
        }
        return false;
    };

    int j = 1;
    if (eval_h_hat(*pencil, 0.0) < 0) {
        if (auto root = find_zero_left(*pencil)) {
            if (try_root(*root, j++, "oracle")) return report;
        }
    }
    const double limit = std::max(10.0 * pencil->omega[0], 10.0 * m.one_norm());
    if (auto root = find_zero_right(*pencil, limit, opts.right_pick)) {
        if (try_root(*root, j++, "oracle")) return report;
    }
    report.outcome = Outcome::kSpecialCaseDetected;
    return report;
}

SolveReport newton_baseline(const SymmetricMatrix& m, const Vector& q, double s0,
                            const SolverOptions& opts) {
    opts.validate();
    if (!(s0 > 0) || !std::isfinite(s0)) throw InvalidParams("starting shift must be positive");
    if (q.size() != m.n()) throw DimensionMismatch("q dimension mismatch");

    SolveReport report;
    TransferEvaluator ev(m, q);

    double s_prev = s0;
    Vector x = eval_x_robust(ev, s_prev);
    double h_prev = j_quadratic_form(x);

    double s_cur = s0 * (1.0 + 1e-4) + 1e-12;
    // bracket endpoints once a sign change has been seen
    double lo = s_prev, flo = h_prev, hi = 0.0, fhi = 0.0;
    bool have_bracket = false;

    for (int j = 1; j <= opts.j_max; ++j) {
        x = eval_x_robust(ev, s_cur);
        const double h = j_quadratic_form(x);
        const ResidualBreakdown chi = chi_rel(x, m, q);
        report.trace.push_back({"newton", j, s_cur, h, 0, chi.total});
        report.s_star = s_cur;
        report.x = x;
        report.chi = chi;

        if (std::abs(h) < opts.eps1 * x.squaredNorm()) break;
        if (chi.total < opts.eps2) break;

        if (std::isfinite(h)) {
            if (!have_bracket && std::signbit(h) != std::signbit(flo)) {
                have_bracket = true;
                hi = s_cur;
                fhi = h;
                if (lo > hi) {
                    std::swap(lo, hi);
                    std::swap(flo, fhi);
                }
            } else if (have_bracket) {
                if (std::signbit(h) == std::signbit(flo) && s_cur > lo && s_cur < hi) {
                    lo = s_cur;
                    flo = h;
                } else if (std::signbit(h) == std::signbit(fhi) && s_cur > lo && s_cur < hi) {
                    hi = s_cur;
                    fhi = h;
                }
            } else if (s_cur > lo || std::abs(h) < std::abs(flo)) {
                lo = s_cur;
                flo = h;
            }
        }

        double s_next;
        const double denom = h - h_prev;
        if (denom == 0.0 || !std::isfinite(denom)) {
            s_next = have_bracket ? 0.5 * (lo + hi) : s_cur * 1.5;
        } else {
            s_next = s_cur - h * (s_cur - s_prev) / denom;
        }
        if (have_bracket && (s_next <= lo || s_next >= hi)) s_next = 0.5 * (lo + hi);
        if (!std::isfinite(s_next) || s_next <= 0.0) s_next = 0.5 * s_cur;

        s_prev = s_cur;
        h_prev = h;
        if (std::abs(s_next - s_cur) <= 1e-15 * std::abs(s_cur)) break;
        s_cur = s_next;
    }

    if (report.x.size() > 0 && on_boundary(report.x, opts.eps3)) {
        report.outcome = Outcome::kBoundaryRoot;
    } else {
        report.outcome = Outcome::kMaxIterations;
    }
    return report;
}

}  // namespace conekrylov
