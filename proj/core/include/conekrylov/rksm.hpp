#ifndef CONEKRYLOV_RKSM_HPP
#define CONEKRYLOV_RKSM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "conekrylov/reduced.hpp"
#include "conekrylov/socone.hpp"

namespace conekrylov {

enum class Case { kC1, kC2, kC3 };

enum class Outcome {
    kTrivialZero,         // q in the cone, x = 0
    kLinearSolve,         // -M^{-1} q in the cone
    kBoundaryRoot,        // boundary solution at the root s_star
    kSpecialCaseDetected, // s_star coincides with the pencil eigenvalue; out of scope
    kMaxIterations
};

std::string to_string(Outcome o);
std::string to_string(Case c);

struct SolverOptions {
    Index ell0 = 10;   // forward dimension of the initial extended space
    Index k0 = 10;     // inverse dimension of the initial extended space
    Index ell = 1;     // block size per shift
    int j_max = 40;
    double eps1 = 1e-7;  // |x^T J x| < eps1 ||x||^2 stop
    double eps2 = 1e-8;  // chi_rel < eps2 stop
    double eps3 = 1e-6;  // boundary test tolerance
    double cone_tol = 0.0;  // membership tolerance for the C1/C2 checks
    double drop_tol = 1e-10;
    RootPick left_pick = RootPick::kSmallest;
    RootPick right_pick = RootPick::kLargest;
    std::uint64_t seed = 0;  // consumed by instance generators, not the solver

    void validate() const;  // throws InvalidParams
};

struct TraceRow {
    std::string side;  // "left", "right", "oracle", "newton"
    int j = 0;
    double shift = 0.0;
    double h = 0.0;
    Index dim = 0;   // subspace dimension after this iteration
    double chi = 0.0;
};

struct SolveReport {
    Outcome outcome = Outcome::kMaxIterations;
    double s_star = 0.0;  // meaningful for kBoundaryRoot
    Vector x;
    ResidualBreakdown chi;
    std::vector<TraceRow> trace;
    Index initial_dim = 0;
    Index final_dim = 0;
    int expansion_steps = 0;
};

/// C1 iff q lies in the cone; else C2 iff -M^{-1}q does; else C3.
Case classify(const SymmetricMatrix& m, const Vector& q, double cone_tol = 0.0);

/// Two-stage rational Krylov solve: extended Krylov start, then accumulated
/// multi-shift expansion driven by zeros of the reduced pencil.
SolveReport solve(const SymmetricMatrix& m, const Vector& q, const SolverOptions& opts = {});

/// Ground-truth dense path: full pencil diagonalization (the projection
/// machinery with U = I), then the same left/right root strategy.
SolveReport direct_oracle(const SymmetricMatrix& m, const Vector& q, Index dense_cap = 2000,
                          const SolverOptions& opts = {});

/// Safeguarded secant iteration on h(s) = 0 from the starting guess s0,
/// using transfer evaluations only. Benchmark comparator, not a production
/// path: without a sign-change bracket it may legitimately stall.
SolveReport newton_baseline(const SymmetricMatrix& m, const Vector& q, double s0,
                            const SolverOptions& opts = {});

}  // namespace conekrylov

#endif
