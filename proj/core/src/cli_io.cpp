#include "conekrylov/cli_io.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "conekrylov/generate.hpp"
#include "conekrylov/log.hpp"
#include "conekrylov/matrix_market.hpp"

namespace conekrylov {

namespace {

using nlohmann::json;

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// "gen:n=100,density=0.01,rc=0.1,kind=2,seed=7"
SymmetricMatrix parse_generator(const std::string& spec) {
    Index n = 0;
    double density = 0.01, rc = 0.1;
    int kind = 2;
    std::uint64_t seed = 1;

    std::stringstream ss(spec.substr(4));
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidParams("bad generator field '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            if (key == "n") n = std::stol(val);
            else if (key == "density") density = std::stod(val);
            else if (key == "rc") rc = std::stod(val);
            else if (key == "kind") kind = std::stoi(val);
            else if (key == "seed") seed = std::stoull(val);
            else throw InvalidParams("unknown generator key '" + key + "'");
        } catch (const InvalidParams&) {
            throw;
        } catch (const std::exception&) {
            throw InvalidParams("bad generator value '" + item + "'");
        }
    }
    return gen_random_spd(n, density, rc, kind, seed);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
}

int exit_code_for(Outcome o) {
    switch (o) {
        case Outcome::kTrivialZero:
        case Outcome::kLinearSolve:
        case Outcome::kBoundaryRoot: return 0;
        case Outcome::kSpecialCaseDetected: return 2;
        case Outcome::kMaxIterations: return 3;
    }
    return 1;
}

SolveReport dispatch(const std::string& method, const SymmetricMatrix& m, const Vector& q,
                     const SolverOptions& base_opts, double newton_s0, Index oracle_cap) {
    SolverOptions opts = base_opts;
    if (method == "rksm") return solve(m, q, opts);
    if (method == "rksm1") {
        opts.ell = 1;
        return solve(m, q, opts);
    }
    if (method == "rksm10") {
        opts.ell = 10;
        return solve(m, q, opts);
    }
    if (method == "oracle") return direct_oracle(m, q, oracle_cap, opts);
    if (method == "newton") {
        const double s0 = newton_s0 > 0 ? newton_s0 : 0.5 * m.one_norm();
        return newton_baseline(m, q, s0, opts);
    }
    throw InvalidParams("unknown method '" + method + "'");
}

json chi_to_json(const ResidualBreakdown& chi) {
    return json{{"chi1", chi.chi1}, {"chi2", chi.chi2}, {"chi3", chi.chi3}, {"total", chi.total}};
}

}  // namespace

SymmetricMatrix load_matrix(const std::string& source) {
    if (source.rfind("gen:", 0) == 0) return parse_generator(source);
    return read_matrix_market(source);
}

Vector load_q(const std::string& source, Index n) {
    if (source == "ones") return Vector::Ones(n);
    Vector q = read_vector(source);
    if (q.size() != n)
        throw DimensionMismatch("q has " + std::to_string(q.size()) + " entries, expected " +
                                std::to_string(n));
    return q;
}

std::string report_to_json(const SolveReport& report, const std::string& method, Index n,
                           double wall_s) {
    json j;
    j["schema"] = 1;
    j["method"] = method;
    j["n"] = n;
    j["outcome"] = to_string(report.outcome);
    if (report.outcome == Outcome::kBoundaryRoot) j["s_star"] = report.s_star;
    else j["s_star"] = nullptr;
    j["chi_rel"] = chi_to_json(report.chi);
    j["initial_dim"] = report.initial_dim;
    j["final_dim"] = report.final_dim;
    j["expansion_steps"] = report.expansion_steps;
    j["x"] = std::vector<double>(report.x.data(), report.x.data() + report.x.size());
    j["x_norm"] = report.x.size() ? report.x.norm() : 0.0;
    json rows = json::array();
    for (const auto& row : report.trace) {
        rows.push_back(json{{"side", row.side},
                            {"j", row.j},
                            {"shift", row.shift},
                            {"h", row.h},
                            {"dim", row.dim},
                            {"chi_rel", row.chi}});
    }
    j["trace"] = rows;
    j["wall_time_s"] = wall_s;
    return j.dump(2);
}

std::string trace_to_csv(const SolveReport& report) {
    std::string out = "side,j,shift,h,dim,chi_rel\n";
    for (const auto& row : report.trace) {
        out += csv_escape(row.side) + "," + std::to_string(row.j) + "," + fmt17(row.shift) +
               "," + fmt17(row.h) + "," + std::to_string(row.dim) + "," + fmt17(row.chi) + "\n";
    }
    return out;
}

std::string convergence_table_csv(const SolveReport& report) {
    std::string out = "j,shift,abs_err,ratio\n";
    if (report.trace.empty()) return out;
    // restrict to the loop side that produced the accepted root
    const std::string side = report.trace.back().side;
    const double s_star = report.s_star;
    double prev_err = -1.0;
    int j = 0;
    for (const auto& row : report.trace) {
        if (row.side != side) continue;
        const double err = std::abs(row.shift - s_star);
        std::string ratio = "";
        if (prev_err > 0.0) ratio = fmt17(err / (prev_err * prev_err));
        out += std::to_string(++j) + "," + fmt17(row.shift) + "," + fmt17(err) + "," + ratio +
               "\n";
        prev_err = err;
    }
    return out;
}

RunResult run_solve(const ProblemSpec& spec) {
    const SymmetricMatrix m = load_matrix(spec.matrix_source);
    const Vector q = load_q(spec.q_source, m.n());
    log(LogLevel::kInfo, "solving n=" + std::to_string(m.n()) + " with method " + spec.method);

    const double t0 = now_s();
    RunResult result;
    result.report = dispatch(spec.method, m, q, spec.options, spec.newton_s0, spec.oracle_cap);
    result.wall_s = now_s() - t0;
    result.exit_code = exit_code_for(result.report.outcome);
    result.json = report_to_json(result.report, spec.method, m.n(), result.wall_s);

    if (!spec.json_out.empty()) write_file(spec.json_out, result.json);
    if (!spec.trace_out.empty()) write_file(spec.trace_out, trace_to_csv(result.report));
    if (!spec.conv_table_out.empty())
        write_file(spec.conv_table_out, convergence_table_csv(result.report));
    log(LogLevel::kInfo, "outcome " + to_string(result.report.outcome) + " in " +
                             std::to_string(result.wall_s) + " s");
    return result;
}

BenchSuite bench_suite_from_json(const std::string& text) {
    json j = json::parse(text);
    BenchSuite suite;
    if (!j.contains("instances") || !j["instances"].is_array())
        throw InvalidParams("bench suite needs an 'instances' array");
    for (const auto& item : j["instances"]) {
        BenchInstance inst;
        inst.id = item.at("id").get<std::string>();
        inst.matrix = item.at("matrix").get<std::string>();
        if (item.contains("q")) inst.q = item["q"].get<std::string>();
        suite.instances.push_back(std::move(inst));
    }
    if (j.contains("options")) {
        const auto& o = j["options"];
        auto& opts = suite.options;
        if (o.contains("ell")) opts.ell = o["ell"].get<Index>();
        if (o.contains("ell0")) opts.ell0 = o["ell0"].get<Index>();
        if (o.contains("k0")) opts.k0 = o["k0"].get<Index>();
        if (o.contains("j_max")) opts.j_max = o["j_max"].get<int>();
        if (o.contains("eps1")) opts.eps1 = o["eps1"].get<double>();
        if (o.contains("eps2")) opts.eps2 = o["eps2"].get<double>();
        if (o.contains("eps3")) opts.eps3 = o["eps3"].get<double>();
    }
    if (j.contains("newton_s0")) suite.newton_s0 = j["newton_s0"].get<double>();
    if (j.contains("oracle_cap")) suite.oracle_cap = j["oracle_cap"].get<Index>();
    return suite;
}

BenchSuite read_bench_suite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return bench_suite_from_json(ss.str());
}

std::vector<BenchRecord> run_bench(const BenchSuite& suite,
                                   const std::vector<std::string>& methods, int threads) {
    for (const std::string& method : methods) {
        if (method != "rksm" && method != "rksm1" && method != "rksm10" &&
            method != "oracle" && method != "newton")
            throw InvalidParams("unknown method '" + method + "'");
    }
    const size_t n_inst = suite.instances.size();
    std::vector<std::vector<BenchRecord>> per_instance(n_inst);

    const auto worker_body = [&](size_t idx) {
        const BenchInstance& inst = suite.instances[idx];
        std::vector<BenchRecord>& records = per_instance[idx];
        try {
            const SymmetricMatrix m = load_matrix(inst.matrix);
            const Vector q = load_q(inst.q, m.n());
            for (const std::string& method : methods) {
                BenchRecord rec;
                rec.instance = inst.id;
                rec.method = method;
                const double t0 = now_s();
                try {
                    SolveReport rep = dispatch(method, m, q, suite.options, suite.newton_s0,
                                               suite.oracle_cap);
                    rec.wall_s = now_s() - t0;
                    if (rep.outcome == Outcome::kMaxIterations ||
                        rep.outcome == Outcome::kSpecialCaseDetected) {
                        rec.outcome = std::nullopt;  // "--": no solution delivered
                    } else {
                        rec.outcome = rep.outcome;
                        rec.chi_rel = rep.chi.total;
                        if (rep.outcome == Outcome::kBoundaryRoot) rec.s_star = rep.s_star;
                    }
                    if (method == "newton") {
                        rec.iterations = long(rep.trace.size());
                        rec.iter_kind = "secant_iters";
                    } else if (method == "oracle") {
                        rec.iterations = long(rep.final_dim);
                        rec.iter_kind = "pencil_size";
                    } else {
                        rec.iterations = long(rep.final_dim);
                        rec.iter_kind = "subspace_dim";
                    }
                } catch (const std::exception& e) {
                    rec.wall_s = now_s() - t0;
                    rec.outcome = std::nullopt;
                    log(LogLevel::kWarn, "bench " + inst.id + "/" + method + " failed: " + e.what());
                }
                records.push_back(std::move(rec));
            }
        } catch (const std::exception& e) {
            log(LogLevel::kWarn, "bench instance " + inst.id + " failed to load: " + e.what());
            for (const std::string& method : methods) {
                BenchRecord rec;
                rec.instance = inst.id;
                rec.method = method;
                rec.outcome = std::nullopt;
                records.push_back(std::move(rec));
            }
        }
    };

    unsigned n_workers = threads > 0 ? unsigned(threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, std::max<size_t>(n_inst, 1));
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (size_t idx = next.fetch_add(1); idx < n_inst; idx = next.fetch_add(1))
                worker_body(idx);
        });
    }
    for (auto& t : pool) t.join();

    std::vector<BenchRecord> out;
    for (auto& records : per_instance)
        for (auto& rec : records) out.push_back(std::move(rec));
    return out;
}

std::string bench_to_csv(const std::vector<BenchRecord>& records) {
    std::string out = "instance,method,outcome,iterations,iter_kind,wall_s,chi_rel,s_star\n";
    for (const auto& r : records) {
        out += csv_escape(r.instance) + "," + csv_escape(r.method) + ",";
        out += r.outcome ? to_string(*r.outcome) : "--";
        out += "," + std::to_string(r.iterations) + "," + r.iter_kind + ",";
        out += fmt17(r.wall_s) + ",";
        out += r.outcome ? fmt17(r.chi_rel) : "";
        out += ",";
        out += r.s_star ? fmt17(*r.s_star) : "";
        out += "\n";
    }
    return out;
}

std::string bench_to_json(const std::vector<BenchRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) {
        json j;
        j["instance"] = r.instance;
        j["method"] = r.method;
        j["outcome"] = r.outcome ? json(to_string(*r.outcome)) : json(nullptr);
        j["iterations"] = json{{"kind", r.iter_kind}, {"value", r.iterations}};
        j["wall_s"] = r.wall_s;
        j["chi_rel"] = r.outcome ? json(r.chi_rel) : json(nullptr);
        j["s_star"] = r.s_star ? json(*r.s_star) : json(nullptr);
        arr.push_back(std::move(j));
    }
    return json{{"schema", 1}, {"records", arr}}.dump(2);
}

}  // namespace conekrylov
