#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conekrylov/cli_io.hpp"
#include "conekrylov/generate.hpp"
#include "conekrylov/log.hpp"
#include "conekrylov/matrix_market.hpp"

namespace ck = conekrylov;

namespace {

void add_option_flags(CLI::App* cmd, ck::SolverOptions& opts) {
    cmd->add_option("--ell", opts.ell, "block size per shift");
    cmd->add_option("--ell0", opts.ell0, "forward dimension of the initial extended space");
    cmd->add_option("--k0", opts.k0, "inverse dimension of the initial extended space");
    cmd->add_option("--eps1", opts.eps1, "|x^T J x| < eps1 ||x||^2 stop");
    cmd->add_option("--eps2", opts.eps2, "chi_rel < eps2 stop");
    cmd->add_option("--eps3", opts.eps3, "boundary test tolerance");
    cmd->add_option("--jmax", opts.j_max, "iteration cap per loop");
    cmd->add_option("--cone-tol", opts.cone_tol, "membership tolerance for the C1/C2 checks");
}

int do_solve(const ck::ProblemSpec& spec) {
    ck::RunResult res = ck::run_solve(spec);
    const ck::SolveReport& rep = res.report;
    std::printf("outcome:   %s\n", ck::to_string(rep.outcome).c_str());
    if (rep.outcome == ck::Outcome::kBoundaryRoot) std::printf("s_star:    %.15g\n", rep.s_star);
    std::printf("chi_rel:   %.3e  (cone %.2e | dual %.2e | compl %.2e)\n", rep.chi.total,
                rep.chi.chi1, rep.chi.chi2, rep.chi.chi3);
    if (rep.final_dim > 0)
        std::printf("subspace:  %ld -> %ld over %d expansions\n", long(rep.initial_dim),
                    long(rep.final_dim), rep.expansion_steps);
    std::printf("wall:      %.3f s\n", res.wall_s);
    return res.exit_code;
}

int do_bench(const std::string& suite_path, const std::string& methods_csv,
             const std::string& out_path, bool as_json, int threads) {
    ck::BenchSuite suite = ck::read_bench_suite(suite_path);
    std::vector<std::string> methods;
    std::stringstream ss(methods_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) methods.push_back(item);
    }
    if (methods.empty()) throw ck::InvalidParams("no methods requested");

    auto records = ck::run_bench(suite, methods, threads);
    const std::string table = as_json ? ck::bench_to_json(records) : ck::bench_to_csv(records);
    if (out_path.empty() || out_path == "-") {
        std::cout << table;
    } else {
        std::ofstream out(out_path);
        if (!out) throw ck::Error("cannot open '" + out_path + "' for writing");
        out << table;
    }
    return 0;
}

int do_generate(long n, double density, double rc, int kind, std::uint64_t seed,
                const std::string& out_path) {
    ck::SymmetricMatrix m = ck::gen_random_spd(n, density, rc, kind, seed);
    ck::write_matrix_market(m, out_path);
    ck::log(ck::LogLevel::kInfo,
            "wrote " + out_path + " (n=" + std::to_string(m.n()) +
                ", density=" + std::to_string(m.density()) + ")");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Second-order cone LCP solver (rational Krylov subspace method)"};
    app.require_subcommand(1);

    ck::ProblemSpec spec;
    auto* solve_cmd = app.add_subcommand("solve", "solve one SOCLCP instance");
    solve_cmd->add_option("--matrix", spec.matrix_source,
                          "Matrix Market file or gen:n=..,density=..,rc=..,kind=..,seed=..")
        ->required();
    solve_cmd->add_option("--q", spec.q_source, "q vector: 'ones' or a file");
    solve_cmd->add_option("--method", spec.method, "rksm | rksm1 | rksm10 | oracle | newton");
    solve_cmd->add_option("--newton-s0", spec.newton_s0, "starting shift for the newton method");
    solve_cmd->add_option("--oracle-cap", spec.oracle_cap, "dense size cap for the oracle");
    solve_cmd->add_option("--trace", spec.trace_out, "write per-iteration CSV trace");
    solve_cmd->add_option("--json", spec.json_out, "write the JSON report");
    solve_cmd->add_option("--conv-table", spec.conv_table_out,
                          "write the shift-convergence table CSV");
    add_option_flags(solve_cmd, spec.options);

    std::string suite_path, methods_csv = "rksm1,rksm10,newton,oracle", bench_out;
    bool bench_json = false;
    int bench_threads = 0;
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
    bench_cmd->add_option("--suite", suite_path, "suite JSON file")->required();
    bench_cmd->add_option("--methods", methods_csv, "comma-separated method list");
    bench_cmd->add_option("--out", bench_out, "output file ('-' = stdout)");
    bench_cmd->add_flag("--json", bench_json, "emit JSON instead of CSV");
    bench_cmd->add_option("--threads", bench_threads, "worker threads (0 = hardware)");

    long gen_n = 0;
    double gen_density = 0.01, gen_rc = 0.1;
    int gen_kind = 2;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("generate", "write a random SPD instance");
    gen_cmd->add_option("--n", gen_n, "dimension")->required();
    gen_cmd->add_option("--density", gen_density, "fill target for the factor R");
    gen_cmd->add_option("--rc", gen_rc, "reciprocal condition number of R");
    gen_cmd->add_option("--kind", gen_kind, "1 = approximate spectrum, 2 = exact spectrum");
    gen_cmd->add_option("--seed", gen_seed, "RNG seed");
    gen_cmd->add_option("--out", gen_out, "output .mtx path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return do_solve(spec);
        if (bench_cmd->parsed())
            return do_bench(suite_path, methods_csv, bench_out, bench_json, bench_threads);
        if (gen_cmd->parsed())
            return do_generate(gen_n, gen_density, gen_rc, gen_kind, gen_seed, gen_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
