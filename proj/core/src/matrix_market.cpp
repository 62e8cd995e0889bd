#include "conekrylov/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace conekrylov {

namespace {

struct Tokenizer {
    explicit Tokenizer(std::istream& s) : in(s) {}
    std::istream& in;
    std::string current;
    int line_no = 0;

    // next non-comment, non-empty line
    bool next_line() {
        while (std::getline(in, current)) {
            ++line_no;
            const auto pos = current.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            if (current[pos] == '%' && line_no > 1) continue;
            return true;
        }
        return false;
    }
};

struct Token {
    std::string text;
    int col = 0;  // 1-based start column
};

std::vector<Token> split(const std::string& line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        const size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({line.substr(start, i - start), int(start) + 1});
    }
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

long parse_index(const Token& t, int line_no) {
    long v = 0;
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size())
        throw ParseError("expected an integer, got '" + t.text + "'", line_no, t.col);
    return v;
}

double parse_value(const Token& t, int line_no) {
    try {
        size_t used = 0;
        const double v = std::stod(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + t.text + "'", line_no, t.col);
    }
}

void check_symmetric_content(const SparseMatrix& a) {
    SparseMatrix diff = a - SparseMatrix(a.transpose());
    double max_diff = 0.0, max_abs = 0.0;
    for (int j = 0; j < diff.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(diff, j); it; ++it)
            max_diff = std::max(max_diff, std::abs(it.value()));
    for (int j = 0; j < a.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(a, j); it; ++it)
            max_abs = std::max(max_abs, std::abs(it.value()));
    if (max_diff > 1e-12 * std::max(max_abs, 1e-300))
        throw NotSymmetric("general-format content is not symmetric");
}

}  // namespace

SymmetricMatrix read_matrix_market(std::istream& in) {
    Tokenizer tz(in);
    if (!tz.next_line()) throw ParseError("empty input", 1, 1);

    auto header = split(tz.current);
    if (header.size() < 5 || lower(header[0].text) != "%%matrixmarket" ||
        lower(header[1].text) != "matrix")
        throw ParseError("missing %%MatrixMarket matrix header", tz.line_no, 1);
    const std::string format = lower(header[2].text);
    const std::string field = lower(header[3].text);
    const std::string symmetry = lower(header[4].text);
    if (format != "coordinate" && format != "array")
        throw ParseError("unsupported format '" + format + "'", tz.line_no, header[2].col);
    if (field != "real" && field != "integer")
        throw ParseError("unsupported field '" + field + "'", tz.line_no, header[3].col);
    if (symmetry != "general" && symmetry != "symmetric")
        throw ParseError("unsupported symmetry '" + symmetry + "'", tz.line_no, header[4].col);

    if (!tz.next_line()) throw ParseError("missing size line", tz.line_no + 1, 1);
    auto size_tokens = split(tz.current);
    const size_t want = format == "coordinate" ? 3 : 2;
    if (size_tokens.size() != want)
        throw ParseError("malformed size line", tz.line_no, 1);
    const long rows = parse_index(size_tokens[0], tz.line_no);
    const long cols = parse_index(size_tokens[1], tz.line_no);
    if (rows < 1 || cols < 1) throw ParseError("non-positive dimensions", tz.line_no, 1);
    if (rows != cols) throw NotSquare("matrix is " + std::to_string(rows) + " x " +
                                      std::to_string(cols));

    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> trip;

    if (format == "coordinate") {
        const long nnz = parse_index(size_tokens[2], tz.line_no);
        if (nnz < 0) throw ParseError("negative entry count", tz.line_no, size_tokens[2].col);
        trip.reserve(size_t(2 * nnz));
        for (long e = 0; e < nnz; ++e) {
            if (!tz.next_line())
                throw ParseError("unexpected end of file inside entries", tz.line_no + 1, 1);
            auto toks = split(tz.current);
            if (toks.size() != 3)
                throw ParseError("coordinate entries need 'i j value'", tz.line_no, 1);
            const long i = parse_index(toks[0], tz.line_no);
            const long j = parse_index(toks[1], tz.line_no);
            const double v = parse_value(toks[2], tz.line_no);
            if (i < 1 || i > rows) throw ParseError("row index out of range", tz.line_no, toks[0].col);
            if (j < 1 || j > cols) throw ParseError("column index out of range", tz.line_no, toks[1].col);
            trip.emplace_back(int(i - 1), int(j - 1), v);
            if (symmetry == "symmetric") {
                if (j > i)
                    throw ParseError("symmetric format stores the lower triangle only",
                                     tz.line_no, toks[1].col);
                if (i != j) trip.emplace_back(int(j - 1), int(i - 1), v);
            }
        }
    } else {
        // array: column-major; symmetric array stores columns of the lower triangle
        std::vector<Token> pending;
        int pending_line = 0;
        const auto next_value = [&]() -> double {
            while (pending.empty()) {
                if (!tz.next_line())
                    throw ParseError("unexpected end of file inside array data", tz.line_no + 1, 1);
                pending = split(tz.current);
                pending_line = tz.line_no;
                std::reverse(pending.begin(), pending.end());
            }
            Token t = pending.back();
            pending.pop_back();
            return parse_value(t, pending_line);
        };
        for (long j = 0; j < cols; ++j) {
            const long i0 = symmetry == "symmetric" ? j : 0;
            for (long i = i0; i < rows; ++i) {
                const double v = next_value();
                if (v != 0.0) {
                    trip.emplace_back(int(i), int(j), v);
                    if (symmetry == "symmetric" && i != j) trip.emplace_back(int(j), int(i), v);
                }
            }
        }
    }

    SparseMatrix a(static_cast<int>(rows), static_cast<int>(cols));
    a.setFromTriplets(trip.begin(), trip.end());  // duplicates are summed
    if (symmetry == "general") check_symmetric_content(a);
    return SymmetricMatrix(a);
}

SymmetricMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    return read_matrix_market(in);
}

void write_matrix_market(const SymmetricMatrix& m, std::ostream& out) {
    struct Entry {
        Index i, j;
        double v;
    };
    std::vector<Entry> entries;
    if (m.is_dense()) {
        const Matrix& a = m.dense();
        for (Index j = 0; j < m.n(); ++j)
            for (Index i = j; i < m.n(); ++i)
                if (a(i, j) != 0.0) entries.push_back({i, j, a(i, j)});
    } else {
        const SparseMatrix& a = m.sparse();
        for (int j = 0; j < a.outerSize(); ++j)
            for (SparseMatrix::InnerIterator it(a, j); it; ++it)
                if (it.row() >= it.col() && it.value() != 0.0)
                    entries.push_back({it.row(), it.col(), it.value()});
    }

    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << m.n() << " " << m.n() << " " << entries.size() << "\n";
    char buf[64];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", long(e.i + 1), long(e.j + 1), e.v);
        out << buf;
    }
}

void write_matrix_market(const SymmetricMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_matrix_market(m, out);
}

Vector read_vector(std::istream& in) {
    std::string first;
    std::streampos start = in.tellg();
    if (!std::getline(in, first)) throw ParseError("empty vector input", 1, 1);

    if (lower(first).rfind("%%matrixmarket", 0) == 0) {
        in.clear();
        in.seekg(start);
        Tokenizer tz(in);
        tz.next_line();  // header, already validated shape below
        auto header = split(tz.current);
        if (header.size() < 5) throw ParseError("malformed header", tz.line_no, 1);
        const std::string format = lower(header[2].text);
        if (!tz.next_line()) throw ParseError("missing size line", tz.line_no + 1, 1);
        auto size_tokens = split(tz.current);
        if (format == "array") {
            if (size_tokens.size() != 2) throw ParseError("malformed size line", tz.line_no, 1);
            const long rows = parse_index(size_tokens[0], tz.line_no);
            const long cols = parse_index(size_tokens[1], tz.line_no);
            if (cols != 1) throw ParseError("expected an n-by-1 vector", tz.line_no, 1);
            Vector v(rows);
            for (long i = 0; i < rows; ++i) {
                if (!tz.next_line()) throw ParseError("unexpected end of file", tz.line_no + 1, 1);
                auto toks = split(tz.current);
                if (toks.empty()) throw ParseError("missing value", tz.line_no, 1);
                v[i] = parse_value(toks[0], tz.line_no);
            }
            return v;
        }
        if (size_tokens.size() != 3) throw ParseError("malformed size line", tz.line_no, 1);
        const long rows = parse_index(size_tokens[0], tz.line_no);
        const long cols = parse_index(size_tokens[1], tz.line_no);
        const long nnz = parse_index(size_tokens[2], tz.line_no);
        if (cols != 1) throw ParseError("expected an n-by-1 vector", tz.line_no, 1);
        Vector v = Vector::Zero(rows);
        for (long e = 0; e < nnz; ++e) {
            if (!tz.next_line()) throw ParseError("unexpected end of file", tz.line_no + 1, 1);
            auto toks = split(tz.current);
            if (toks.size() != 3) throw ParseError("entries need 'i j value'", tz.line_no, 1);
            const long i = parse_index(toks[0], tz.line_no);
            if (i < 1 || i > rows) throw ParseError("index out of range", tz.line_no, toks[0].col);
            v[i - 1] += parse_value(toks[2], tz.line_no);
        }
        return v;
    }

    // plain text: whitespace-separated numbers
    std::vector<double> vals;
    int line_no = 1;
    std::string line = first;
    do {
        for (const auto& t : split(line)) {
            if (t.text[0] == '#' || t.text[0] == '%') break;
            vals.push_back(parse_value(t, line_no));
        }
        ++line_no;
    } while (std::getline(in, line));
    if (vals.empty()) throw ParseError("no numeric values found", 1, 1);
    return Eigen::Map<Vector>(vals.data(), Index(vals.size()));
}

Vector read_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    return read_vector(in);
}

}  // namespace conekrylov
