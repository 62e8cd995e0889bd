#ifndef CONEKRYLOV_CLI_IO_HPP
#define CONEKRYLOV_CLI_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "conekrylov/rksm.hpp"

namespace conekrylov {

/// One problem to solve: a matrix source (file path or an inline generator
/// spec "gen:n=..,density=..,rc=..,kind=..,seed=.."), a q source (file path
/// or "ones"), and solver options.
struct ProblemSpec {
    std::string matrix_source;
    std::string q_source = "ones";
    std::string method = "rksm";  // rksm | rksm1 | rksm10 | oracle | newton
    double newton_s0 = 0.0;       // 0 picks ||M||_1 / 2
    Index oracle_cap = 2000;
    SolverOptions options;
    std::string json_out;   // optional output paths; empty = skip
    std::string trace_out;
    std::string conv_table_out;
};

struct RunResult {
    int exit_code = 1;
    SolveReport report;
    std::string json;       // the serialized report that run_solve also writes
    double wall_s = 0.0;
};

SymmetricMatrix load_matrix(const std::string& source);
Vector load_q(const std::string& source, Index n);

/// Solves the problem, serializes the report (schema version 1) and writes
/// any requested output files. Exit code: 0 for trivial_zero, linear_solve
/// and boundary_root; 2 for special_case_detected; 3 for max_iterations.
/// Input errors surface as exceptions for the caller to map to exit code 1.
RunResult run_solve(const ProblemSpec& spec);

std::string report_to_json(const SolveReport& report, const std::string& method, Index n,
                           double wall_s);
/// Per-iteration rows, header `side,j,shift,h,dim,chi_rel`.
std::string trace_to_csv(const SolveReport& report);
/// Shift-convergence table: j, s_j, |s_j - s_star|, |s_j-s*| / |s_{j-1}-s*|^2.
std::string convergence_table_csv(const SolveReport& report);

struct BenchInstance {
    std::string id;
    std::string matrix;
    std::string q = "ones";
};

struct BenchSuite {
    std::vector<BenchInstance> instances;
    SolverOptions options;
    double newton_s0 = 0.0;
    Index oracle_cap = 2000;
};

/// One (instance, method) measurement. `outcome` is empty when the method
/// failed on the instance, matching the "--" convention in result tables.
/// Iteration counts are method-native and labeled: subspace dimension for
/// the Krylov solver, secant steps for the baseline, pencil size for the
/// oracle. Counts with different labels are never comparable.
struct BenchRecord {
    std::string instance;
    std::string method;
    std::optional<Outcome> outcome;
    long iterations = 0;
    std::string iter_kind;
    double wall_s = 0.0;
    double chi_rel = 0.0;
    std::optional<double> s_star;
};

BenchSuite read_bench_suite(const std::string& path);
BenchSuite bench_suite_from_json(const std::string& text);

/// Runs every (instance, method) pair; instances execute concurrently on a
/// small worker pool and results come back in suite order regardless of
/// completion order. threads = 0 picks the hardware count.
std::vector<BenchRecord> run_bench(const BenchSuite& suite,
                                   const std::vector<std::string>& methods, int threads = 0);

std::string bench_to_csv(const std::vector<BenchRecord>& records);
std::string bench_to_json(const std::vector<BenchRecord>& records);

}  // namespace conekrylov

#endif
