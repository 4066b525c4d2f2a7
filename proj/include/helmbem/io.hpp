#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "assembly.hpp"

namespace helmbem {

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string kind_label(HankelKind kind) { return kind == HankelKind::First ? "1" : "2"; }

inline HankelKind parse_kind(int k) {
    if (k == 1) return HankelKind::First;
    if (k == 2) return HankelKind::Second;
    throw ArgumentError("kind must be 1 or 2");
}

inline void write_matrix_csv(std::ostream& os, const OperatorMatrix& M) {
    const int n = M.size();
    os << "# helmbem-matrix op=" << to_string(M.op) << " method=" << to_string(M.method)
       << " k=" << format_double(M.k) << " kind=" << kind_label(M.kind) << " nq=" << M.nq << " n=" << n << '\n';
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            os << i << ',' << j << ',' << format_double(M.entries(i, j).real()) << ','
               << format_double(M.entries(i, j).imag()) << '\n';
}

inline std::string matrix_to_csv(const OperatorMatrix& M) {
    std::ostringstream os;
    write_matrix_csv(os, M);
    return os.str();
}

namespace detail {

inline double parse_double(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw FormatError("bad number for " + what + ": '" + s + "'");
    return v;
}

inline int parse_int(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (s.empty() || pos != s.size()) throw FormatError("bad integer for " + what + ": '" + s + "'");
    return v;
}

}  // namespace detail

inline OperatorMatrix read_matrix_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty matrix file");
    std::istringstream hs(line);
    std::string tok;
    hs >> tok;
    if (tok != "#") throw FormatError("missing header");
    hs >> tok;
    if (tok != "helmbem-matrix") throw FormatError("not a helmbem-matrix file");
    std::map<std::string, std::string> kv;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw FormatError("bad header field '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    for (const char* key : {"op", "method", "k", "kind", "nq", "n"})
        if (!kv.count(key)) throw FormatError(std::string("header lacks ") + key);

    OperatorMatrix M;
    M.op = parse_operator(kv["op"]);
    M.method = parse_method(kv["method"]);
    M.k = detail::parse_double(kv["k"], "k");
    M.kind = parse_kind(detail::parse_int(kv["kind"], "kind"));
    M.nq = detail::parse_int(kv["nq"], "nq");
    const int n = detail::parse_int(kv["n"], "n");
    if (n < 0) throw FormatError("negative matrix size");
    M.entries = Eigen::MatrixXcd::Zero(n, n);

    for (int row = 0; row < n * n; ++row) {
        if (!std::getline(in, line)) throw FormatError("truncated matrix file");
        std::string f[4];
        std::istringstream ls(line);
        for (int c = 0; c < 4; ++c)
            if (!std::getline(ls, f[c], ',')) throw FormatError("bad row: '" + line + "'");
        const int i = detail::parse_int(f[0], "i"), j = detail::parse_int(f[1], "j");
        if (i != row / n || j != row % n) throw FormatError("rows out of order at '" + line + "'");
        M.entries(i, j) = cplx(detail::parse_double(f[2], "re"), detail::parse_double(f[3], "im"));
    }
    return M;
}

inline OperatorMatrix matrix_from_csv(const std::string& text) {
    std::istringstream in(text);
    return read_matrix_csv(in);
}

inline nlohmann::json matrix_to_json(const OperatorMatrix& M) {
    nlohmann::json j;
    j["op"] = to_string(M.op);
    j["method"] = to_string(M.method);
    j["k"] = M.k;
    j["kind"] = M.kind == HankelKind::First ? 1 : 2;
    j["nq"] = M.nq;
    j["n"] = M.size();
    auto re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int i = 0; i < M.size(); ++i) {
        auto rr = nlohmann::json::array(), ri = nlohmann::json::array();
        for (int c = 0; c < M.size(); ++c) {
            rr.push_back(M.entries(i, c).real());
            ri.push_back(M.entries(i, c).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

inline void write_matrix_file(const std::string& path, const OperatorMatrix& M, const std::string& format) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    if (format == "csv")
        write_matrix_csv(os, M);
    else if (format == "json")
        os << matrix_to_json(M).dump(1) << '\n';
    else
        throw ArgumentError("unknown format '" + format + "'");
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace helmbem
