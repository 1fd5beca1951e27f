#include "gbp/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace gbp {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool next_data_line(std::istream& in, std::string& line, long& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        return true;
    }
    return false;
}

void parse_banner(std::istream& in, long& lineno, const std::string& want_format) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty file");
    ++lineno;
    std::istringstream ss(line);
    std::string banner, object, format, field, symmetry;
    ss >> banner >> object >> format >> field >> symmetry;
    if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix")
        throw ParseError(lineno, "not a Matrix Market matrix file");
    if (lower(format) != want_format)
        throw ParseError(lineno, "expected " + want_format + " format, got " + format);
    const std::string f = lower(field);
    if (f != "real" && f != "integer")
        throw ParseError(lineno, "unsupported field " + field);
    if (lower(symmetry) != "general")
        throw ParseError(lineno, "only general symmetry is supported");
}

Vector load_vector_array(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    long lineno = 0;
    parse_banner(in, lineno, "array");
    std::string line;
    if (!next_data_line(in, line, lineno)) throw ParseError(lineno, "missing size line");
    std::istringstream ss(line);
    long rows = -1, cols = -1;
    if (!(ss >> rows >> cols)) throw ParseError(lineno, "malformed size line");
    if (rows < 0 || cols != 1) throw ParseError(lineno, "expected an n x 1 array");
    Vector b(rows);
    for (long i = 0; i < rows; ++i) {
        if (!next_data_line(in, line, lineno)) throw ParseError(lineno, "missing vector entry");
        std::istringstream vs(line);
        if (!(vs >> b[i])) throw ParseError(lineno, "malformed vector entry");
    }
    return b;
}

Vector load_vector_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw ParseError(0, "JSON vector must be an array");
    Vector b(static_cast<Index>(j.size()));
    for (Index i = 0; i < b.size(); ++i) b[i] = j[static_cast<size_t>(i)].get<double>();
    return b;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Vector load_vector(const std::string& path, Index expected_size) {
    Vector v = ends_with(path, ".json") ? load_vector_json(path) : load_vector_array(path);
    if (expected_size >= 0 && v.size() != expected_size)
        throw Error(path + ": expected length " + std::to_string(expected_size) + ", got " +
                    std::to_string(v.size()));
    return v;
}

SparseSystem load_matrix_market(const std::string& matrix_path, const std::string& rhs_path) {
    std::ifstream in(matrix_path);
    if (!in) throw Error("cannot open " + matrix_path);
    long lineno = 0;
    parse_banner(in, lineno, "coordinate");

    std::string line;
    if (!next_data_line(in, line, lineno)) throw ParseError(lineno, "missing size line");
    std::istringstream ss(line);
    long rows = -1, cols = -1, nnz = -1;
    if (!(ss >> rows >> cols >> nnz) || rows < 0 || nnz < 0)
        throw ParseError(lineno, "malformed size line");
    if (rows != cols) throw NonSquare("matrix is " + std::to_string(rows) + " x " +
                                      std::to_string(cols));

    const Index n = static_cast<Index>(rows);
    SparseSystem sys(n);
    std::vector<char> diag_seen(static_cast<size_t>(n), 0);
    std::vector<std::set<Index>> seen(static_cast<size_t>(n));
    for (long t = 0; t < nnz; ++t) {
        if (!next_data_line(in, line, lineno))
            throw ParseError(lineno, "expected " + std::to_string(nnz) + " entries, got " +
                                         std::to_string(t));
        std::istringstream es(line);
        long i1 = 0, j1 = 0;
        double v = 0.0;
        if (!(es >> i1 >> j1 >> v)) throw ParseError(lineno, "malformed entry");
        if (i1 < 1 || i1 > rows || j1 < 1 || j1 > cols)
            throw ParseError(lineno, "index out of range");
        const Index i = static_cast<Index>(i1 - 1), j = static_cast<Index>(j1 - 1);
        if (!seen[static_cast<size_t>(i)].insert(j).second)
            throw ParseError(lineno, "duplicate entry (" + std::to_string(i1) + "," +
                                         std::to_string(j1) + ")");
        if (i == j) {
            sys.set_diag(i, v);
            diag_seen[static_cast<size_t>(i)] = 1;
        } else if (v != 0.0) {
            sys.set_entry(i, j, v);
        }
    }
    for (Index i = 0; i < n; ++i)
        if (!diag_seen[static_cast<size_t>(i)])
            throw MissingDiagonal("diagonal entry (" + std::to_string(i + 1) + "," +
                                  std::to_string(i + 1) + ") not in file");

    if (rhs_path.empty()) {
        Vector b(n);
        for (Index i = 0; i < n; ++i) b[i] = static_cast<double>(i + 1);
        sys.set_rhs(std::move(b));
    } else {
        sys.set_rhs(load_vector(rhs_path, n));
    }
    sys.validate();
    return sys;
}

void save_matrix_market(const SparseSystem& sys, const std::string& matrix_path,
                        const std::string& rhs_path) {
    const Index n = sys.size();
    std::ofstream out(matrix_path);
    if (!out) throw Error("cannot open " + matrix_path + " for writing");
    long nnz = n;
    for (Index i = 0; i < n; ++i) nnz += static_cast<long>(sys.row(i).size());
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << n << " " << n << " " << nnz << "\n";
    char buf[64];
    for (Index i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", sys.diag(i));
        out << (i + 1) << " " << (i + 1) << " " << buf << "\n";
        for (const auto& [j, v] : sys.row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << (i + 1) << " " << (j + 1) << " " << buf << "\n";
        }
    }
    if (!out) throw Error("write failed for " + matrix_path);

    if (!rhs_path.empty()) {
        std::ofstream rout(rhs_path);
        if (!rout) throw Error("cannot open " + rhs_path + " for writing");
        rout << "%%MatrixMarket matrix array real general\n";
        rout << n << " 1\n";
        for (Index i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", sys.rhs()[i]);
            rout << buf << "\n";
        }
        if (!rout) throw Error("write failed for " + rhs_path);
    }
}

}  // namespace gbp
