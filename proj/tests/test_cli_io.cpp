#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "conekrylov/cli_io.hpp"
#include "conekrylov/generate.hpp"
#include "conekrylov/matrix_market.hpp"
#include "support.hpp"

using namespace conekrylov;

namespace {

SymmetricMatrix from_string(const std::string& text) {
    std::istringstream in(text);
    return read_matrix_market(in);
}

std::string strip_wall_time(std::string json) {
    const auto pos = json.find("\"wall_time_s\"");
    if (pos == std::string::npos) return json;
    const auto end = json.find_first_of(",}", pos);
    return json.erase(pos, end - pos);
}

}  // namespace

TEST_CASE("matrix market: coordinate general") {
    SymmetricMatrix m = from_string(
        "%%MatrixMarket matrix coordinate real general\n"
        "2 2 2\n"
        "1 1 1.0\n"
        "2 2 1.0\n");
    CHECK(m.n() == 2);
    CHECK((m.to_dense() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix market: symmetric lower triangle is completed") {
    SymmetricMatrix m = from_string(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "% lower triangle of [[4,2],[2,3]]\n"
        "2 2 3\n"
        "1 1 4\n"
        "2 1 2\n"
        "2 2 3\n");
    Matrix expect(2, 2);
    expect << 4, 2, 2, 3;
    CHECK((m.to_dense() - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix market: asymmetric general content is rejected") {
    CHECK_THROWS_AS(from_string("%%MatrixMarket matrix coordinate real general\n"
                                "2 2 1\n"
                                "1 2 5\n"),
                    NotSymmetric);
}

TEST_CASE("matrix market: rectangular input is rejected") {
    CHECK_THROWS_AS(from_string("%%MatrixMarket matrix coordinate real general\n"
                                "2 3 1\n"
                                "1 2 5\n"),
                    NotSquare);
}

TEST_CASE("matrix market: parse errors carry position") {
    try {
        from_string("%%MatrixMarket matrix coordinate real general\n"
                    "2 2 1\n"
                    "1 x 5\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.col == 3);
    }
    CHECK_THROWS_AS(from_string("junk\n1 1\n"), ParseError);
    CHECK_THROWS_AS(read_matrix_market("/nonexistent/x.mtx"), ParseError);
}

TEST_CASE("matrix market: array format") {
    SymmetricMatrix m = from_string(
        "%%MatrixMarket matrix array real general\n"
        "2 2\n"
        "4\n2\n2\n3\n");
    Matrix expect(2, 2);
    expect << 4, 2, 2, 3;
    CHECK((m.to_dense() - expect).cwiseAbs().maxCoeff() == 0.0);

    SymmetricMatrix sym = from_string(
        "%%MatrixMarket matrix array real symmetric\n"
        "2 2\n"
        "4\n2\n3\n");
    CHECK((sym.to_dense() - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix market: write/read round-trip preserves entries") {
    for (int kind : {1, 2}) {
        SymmetricMatrix m = gen_random_spd(60, 0.2, 0.1, kind, 17);
        std::ostringstream out;
        write_matrix_market(m, out);
        std::istringstream in(out.str());
        SymmetricMatrix back = read_matrix_market(in);
        REQUIRE(back.n() == m.n());
        CHECK((back.to_dense() - m.to_dense()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("matrix market: large sparse input stays on sparse storage") {
    std::ostringstream src;
    const int n = 700;
    src << "%%MatrixMarket matrix coordinate real symmetric\n" << n << " " << n << " "
        << 2 * n - 1 << "\n";
    for (int i = 1; i <= n; ++i) src << i << " " << i << " 4.0\n";
    for (int i = 2; i <= n; ++i) src << i << " " << i - 1 << " -1.0\n";
    std::istringstream in(src.str());
    SymmetricMatrix m = read_matrix_market(in);
    CHECK_FALSE(m.is_dense());
    CHECK(m.n() == n);
    CHECK(m.one_norm() == doctest::Approx(6.0));
}

TEST_CASE("read_vector: matrix market and plain formats") {
    {
        std::istringstream in("%%MatrixMarket matrix array real general\n3 1\n1\n2\n3\n");
        Vector v = read_vector(in);
        REQUIRE(v.size() == 3);
        CHECK(v[2] == 3);
    }
    {
        std::istringstream in("0.5\n-1.25\n");
        Vector v = read_vector(in);
        REQUIRE(v.size() == 2);
        CHECK(v[1] == -1.25);
    }
}

TEST_CASE("gen_random_spd: contracts") {
    // tight case: equal spectrum, cond in [1, 10]
    SymmetricMatrix tiny = gen_random_spd(2, 1.0, 1.0, 2, 5);
    auto [tv, tw] = sym_eig(tiny.to_dense());
    CHECK(tv[1] / tv[0] >= 1.0);
    CHECK(tv[1] / tv[0] <= 10.0);

    // determinism: same seed, identical bits
    for (int kind : {1, 2}) {
        SymmetricMatrix a = gen_random_spd(100, 0.05, 0.1, kind, 42);
        SymmetricMatrix b = gen_random_spd(100, 0.05, 0.1, kind, 42);
        CHECK((a.to_dense() - b.to_dense()).cwiseAbs().maxCoeff() == 0.0);
        SymmetricMatrix c = gen_random_spd(100, 0.05, 0.1, kind, 43);
        CHECK((a.to_dense() - c.to_dense()).cwiseAbs().maxCoeff() != 0.0);
    }

    // condition targeting at rc = 0.01: cond(M) within [0.1, 10] x 1e4
    for (int kind : {1, 2}) {
        SymmetricMatrix m = gen_random_spd(200, 0.05, 0.01, kind, 7);
        auto [vals, vecs] = sym_eig(m.to_dense());
        const double cond = vals[vals.size() - 1] / vals[0];
        CHECK(cond >= 0.1 * 1e4);
        CHECK(cond <= 10.0 * 1e4);
    }

    CHECK_THROWS_AS(gen_random_spd(1, 0.5, 0.1, 1, 0), InvalidParams);
    CHECK_THROWS_AS(gen_random_spd(10, 0.0, 0.1, 1, 0), InvalidParams);
    CHECK_THROWS_AS(gen_random_spd(10, 0.5, 1.5, 1, 0), InvalidParams);
    CHECK_THROWS_AS(gen_random_spd(10, 0.5, 0.1, 3, 0), InvalidParams);
}

TEST_CASE("run_solve: D1 as an inline instance") {
    // write the 2x2 identity and q = (-1,-2) to temp files
    const std::string mpath = "run_solve_m.mtx";
    const std::string qpath = "run_solve_q.txt";
    {
        std::ofstream mf(mpath);
        mf << "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n2 2 1\n";
        std::ofstream qf(qpath);
        qf << "-1\n-2\n";
    }
    ProblemSpec spec;
    spec.matrix_source = mpath;
    spec.q_source = qpath;
    RunResult res = run_solve(spec);
    CHECK(res.exit_code == 0);
    CHECK(res.report.outcome == Outcome::kBoundaryRoot);
    CHECK(res.report.s_star == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    CHECK(res.json.find("\"schema\": 1") != std::string::npos);
    CHECK(res.json.find("boundary_root") != std::string::npos);
    std::remove(mpath.c_str());
    std::remove(qpath.c_str());
}

TEST_CASE("run_solve: q = ones on the identity is the closed-cone edge") {
    ProblemSpec spec;
    spec.matrix_source = "gen:n=2,density=1.0,rc=1.0,kind=2,seed=1";  // exactly I_2
    RunResult res = run_solve(spec);
    CHECK(res.exit_code == 0);
    CHECK(res.report.outcome == Outcome::kTrivialZero);
}

TEST_CASE("run_solve: determinism modulo wall time") {
    ProblemSpec spec;
    spec.matrix_source = "gen:n=60,density=1.0,rc=0.1,kind=2,seed=11";
    RunResult a = run_solve(spec);
    RunResult b = run_solve(spec);
    CHECK(strip_wall_time(a.json) == strip_wall_time(b.json));
}

TEST_CASE("run_solve: exit code mapping") {
    ProblemSpec spec;
    spec.matrix_source = "nonexistent.mtx";
    CHECK_THROWS_AS(run_solve(spec), ParseError);  // the CLI maps this to exit 1

    // special case: diag(1,4), q = (0,-5)
    const std::string mpath = "exit_code_m.mtx";
    const std::string qpath = "exit_code_q.txt";
    {
        std::ofstream mf(mpath);
        mf << "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n2 2 4\n";
        std::ofstream qf(qpath);
        qf << "0\n-5\n";
    }
    ProblemSpec special;
    special.matrix_source = mpath;
    special.q_source = qpath;
    CHECK(run_solve(special).exit_code == 2);
    std::remove(mpath.c_str());
    std::remove(qpath.c_str());
}

TEST_CASE("trace CSV carries the documented header") {
    ProblemSpec spec;
    spec.matrix_source = "gen:n=40,density=1.0,rc=0.1,kind=2,seed=13";
    RunResult res = run_solve(spec);
    const std::string csv = trace_to_csv(res.report);
    CHECK(csv.rfind("side,j,shift,h,dim,chi_rel\n", 0) == 0);
    // one row per trace entry
    size_t rows = 0;
    for (char c : csv) rows += c == '\n';
    CHECK(rows == res.report.trace.size() + 1);
}

TEST_CASE("run_bench: analytic suite across all methods") {
    const std::string mpath1 = "bench_d1.mtx";
    const std::string mpath2 = "bench_d2.mtx";
    const std::string qpath1 = "bench_q1.txt";
    const std::string qpath2 = "bench_q2.txt";
    {
        std::ofstream(mpath1) << "%%MatrixMarket matrix coordinate real symmetric\n"
                                 "2 2 2\n1 1 1\n2 2 1\n";
        std::ofstream(mpath2) << "%%MatrixMarket matrix coordinate real symmetric\n"
                                 "2 2 2\n1 1 1\n2 2 4\n";
        std::ofstream(qpath1) << "-1\n-2\n";
        std::ofstream(qpath2) << "1\n-2\n";
    }
    BenchSuite suite;
    suite.instances.push_back({"d1", mpath1, qpath1});
    suite.instances.push_back({"d2", mpath2, qpath2});
    suite.newton_s0 = 0.4;

    auto records = run_bench(suite, {"rksm1", "rksm10", "newton", "oracle"}, 2);
    REQUIRE(records.size() == 8);
    // order is stable by instance then method
    CHECK(records[0].instance == "d1");
    CHECK(records[4].instance == "d2");
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.method == "newton" && r.instance == "d2") continue;  // may stall from 0.4
        REQUIRE_MESSAGE(r.outcome.has_value(), (r.instance + "/" + r.method));
        CHECK(*r.outcome == Outcome::kBoundaryRoot);
        const double expect = r.instance == "d1" ? 1.0 / 3.0 : 6.0;
        CHECK(*r.s_star == doctest::Approx(expect).epsilon(1e-8));
    }
    // iteration ledgers are labeled per method and never mixed
    for (const auto& r : records) {
        if (r.method == "newton") CHECK(r.iter_kind == "secant_iters");
        else if (r.method == "oracle") CHECK(r.iter_kind == "pencil_size");
        else CHECK(r.iter_kind == "subspace_dim");
    }

    const std::string csv = bench_to_csv(records);
    CHECK(csv.rfind("instance,method,outcome,iterations,iter_kind,wall_s,chi_rel,s_star\n", 0) ==
          0);
    const std::string json = bench_to_json(records);
    CHECK(json.find("\"records\"") != std::string::npos);

    std::remove(mpath1.c_str());
    std::remove(mpath2.c_str());
    std::remove(qpath1.c_str());
    std::remove(qpath2.c_str());
}

TEST_CASE("run_bench: failures become null outcomes, not crashes") {
    BenchSuite suite;
    suite.instances.push_back({"missing", "no_such_file.mtx", "ones"});
    auto records = run_bench(suite, {"rksm1"}, 1);
    REQUIRE(records.size() == 1);
    CHECK_FALSE(records[0].outcome.has_value());
    CHECK(bench_to_csv(records).find("--") != std::string::npos);
}

TEST_CASE("bench suite JSON parsing") {
    BenchSuite suite = bench_suite_from_json(R"({
        "instances": [{"id": "a", "matrix": "gen:n=40,density=1.0,rc=0.5,kind=2,seed=3"}],
        "options": {"ell": 2, "eps2": 1e-9},
        "newton_s0": 0.25
    })");
    REQUIRE(suite.instances.size() == 1);
    CHECK(suite.options.ell == 2);
    CHECK(suite.options.eps2 == 1e-9);
    CHECK(suite.newton_s0 == 0.25);
    CHECK_THROWS_AS(bench_suite_from_json("{}"), InvalidParams);
}
