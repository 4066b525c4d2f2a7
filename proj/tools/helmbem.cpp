#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <helmbem/assembly.hpp>
#include <helmbem/io.hpp>
#include <helmbem/selftest.hpp>
#include <helmbem/specfun.hpp>

using namespace helmbem;

namespace {

constexpr int kUsageError = 2;
constexpr int kInvariantError = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssembleConfig {
    std::string mesh_path, op = "S", method, out_path, format = "csv";
    double k = 0.0;
    int kind = 1, nq = 20, levels = 8, threads = 0;
    bool deterministic = false;
};

struct CompareConfig {
    std::string mesh_path, out_path;
    std::vector<double> ks;
    int kind = 1, nq = 20, levels = 8;
};

struct SpecfunConfig {
    std::string fn, out_path;
    int kind = 1, samples = 201, nq = 20;
    double sigma_max = 20.0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Mesh read_mesh(const std::string& path) {
    Mesh mesh = load_mesh_file(path);
    if (mesh.orientation_corrected()) std::cerr << "note: mesh was clockwise; renumbered counterclockwise\n";
    return mesh;
}

int cmd_assemble(const AssembleConfig& c) {
    const Operator op = parse_operator(c.op);
    Method method = Method::NotApplicable;
    if (!c.method.empty()) {
        if (op != Operator::N) throw UsageError("--method is only valid with --operator N");
        method = parse_method(c.method);
    } else if (op == Operator::N) {
        method = Method::Direct;
    }
    const Mesh mesh = read_mesh(c.mesh_path);
    AssemblyOptions opt;
    opt.nq = c.nq;
    opt.levels = c.levels;
    opt.deterministic = c.deterministic;
    opt.threads = c.threads;

    const auto t0 = std::chrono::steady_clock::now();
    const OperatorMatrix M = assemble(mesh, op, method, KernelContext(c.k, parse_kind(c.kind)), opt);
    const double wall = seconds_since(t0);
    write_matrix_file(c.out_path, M, c.format);

    const double amax = M.entries.cwiseAbs().maxCoeff();
    std::printf("%s %dx%d max|entry| %.6e wall %.3f s -> %s\n", to_string(op).c_str(), M.size(), M.size(), amax, wall,
                c.out_path.c_str());

    if (op == Operator::S || op == Operator::N) {
        const double asym = (M.entries - M.entries.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * amax) {
            std::fprintf(stderr, "error: matrix asymmetry %.3e exceeds 1e-12 * max|entry|\n", asym);
            return kInvariantError;
        }
    }
    return 0;
}

std::string fmt_c(cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10f%+.10fi", z.real(), z.imag());
    return buf;
}

int cmd_compare(const CompareConfig& c) {
    if (c.ks.empty()) throw UsageError("--k needs at least one wavenumber");
    const Mesh mesh = read_mesh(c.mesh_path);
    std::ofstream csv;
    if (!c.out_path.empty()) {
        csv.open(c.out_path);
        if (!csv) throw std::runtime_error("cannot open '" + c.out_path + "' for writing");
        csv << "k,class,i,j,direct_re,direct_im,variational_re,variational_im,abs_diff,rel_diff\n";
    }
    std::printf("%-8s %-16s %-32s %-32s %s\n", "k", "pair", "N direct", "N variational", "|diff|");
    for (double k : c.ks) {
        const ComparisonReport r = compare_methods(mesh, KernelContext(k, parse_kind(c.kind)), c.nq, c.levels);
        for (const ComparisonRow& row : r.rows) {
            std::printf("%-8g %-16s %-32s %-32s %.2e\n", k, row.node_class.c_str(), fmt_c(row.direct).c_str(),
                        fmt_c(row.variational).c_str(), row.abs_diff);
            if (csv.is_open())
                csv << format_double(k) << ',' << row.node_class << ',' << row.i << ',' << row.j << ','
                    << format_double(row.direct.real()) << ',' << format_double(row.direct.imag()) << ','
                    << format_double(row.variational.real()) << ',' << format_double(row.variational.imag()) << ','
                    << format_double(row.abs_diff) << ',' << format_double(row.rel_diff) << '\n';
        }
        std::printf("k=%g max entry diff %.2e, max imaginary diff %.2e\n", k, r.max_abs_diff, r.max_imag_diff);
    }
    return 0;
}

int cmd_specfun(const SpecfunConfig& c) {
    if (c.samples < 2) throw UsageError("--samples must be >= 2");
    if (!(c.sigma_max > 0)) throw UsageError("--sigma-max must be > 0");
    const HankelKind kind = parse_kind(c.kind);
    std::function<cplx(double)> f;
    if (c.fn == "I0")
        f = [&](double s) { return calI0(kind, s); };
    else if (c.fn == "I1")
        f = [&](double s) { return calI1(kind, s); };
    else if (c.fn == "Gamma0")
        f = [&](double s) { return gamma0(kind, s, c.nq); };
    else if (c.fn == "Gamma2")
        f = [&](double s) { return gamma2(kind, s, c.nq); };
    else
        throw UsageError("--fn must be one of I0, I1, Gamma0, Gamma2");

    std::ofstream os(c.out_path);
    if (!os) throw std::runtime_error("cannot open '" + c.out_path + "' for writing");
    for (int i = 0; i < c.samples; ++i) {
        const double s = c.sigma_max * i / (c.samples - 1);
        const cplx v = f(s);
        os << format_double(s) << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
    std::printf("%s kind %d: %d samples on [0, %g] -> %s\n", c.fn.c_str(), c.kind, c.samples, c.sigma_max,
                c.out_path.c_str());
    return 0;
}

int cmd_selftest(bool full) {
    const auto t0 = std::chrono::steady_clock::now();
    const SelftestReport rep = run_selftest(full, [](const Check& c) {
        std::printf("%s  %-58s tol %.1e  measured %.3e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.tolerance,
                    c.measured);
        std::fflush(stdout);
    });
    int failed = 0;
    for (const Check& c : rep.checks) failed += !c.passed;
    std::printf("%zu checks, %d failed, %.1f s\n", rep.checks.size(), failed, seconds_since(t0));
    return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galerkin BEM operator assembly for the 2D Helmholtz equation"};
    app.require_subcommand(1);

    AssembleConfig ac;
    auto* asmb = app.add_subcommand("assemble", "assemble an operator matrix and write it to a file");
    asmb->add_option("--mesh", ac.mesh_path, "mesh file")->required()->check(CLI::ExistingFile);
    asmb->add_option("--operator", ac.op, "S, D, Dadj or N")->required()->check(CLI::IsMember({"S", "D", "Dadj", "N"}));
    asmb->add_option("--method", ac.method, "direct or variational (operator N only, default direct)")
        ->check(CLI::IsMember({"direct", "variational"}));
    asmb->add_option("--k", ac.k, "wavenumber")->required()->check(CLI::PositiveNumber);
    asmb->add_option("--kind", ac.kind, "Hankel kind")->check(CLI::IsMember({1, 2}));
    asmb->add_option("--nq", ac.nq, "Gauss-Legendre points")->check(CLI::Range(1, kMaxRuleOrder));
    asmb->add_option("--levels", ac.levels, "dyadic refinement levels near vertices")->check(CLI::NonNegativeNumber);
    asmb->add_option("--threads", ac.threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
    asmb->add_flag("--deterministic", ac.deterministic, "single-threaded, fixed evaluation order");
    asmb->add_option("--out", ac.out_path, "output file")->required();
    asmb->add_option("--format", ac.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    CompareConfig cc;
    auto* cmp = app.add_subcommand("compare", "compare direct and variational hypersingular matrices");
    cmp->add_option("--mesh", cc.mesh_path, "mesh file")->required()->check(CLI::ExistingFile);
    cmp->add_option("--k", cc.ks, "comma separated wavenumbers")->required()->delimiter(',')->check(CLI::PositiveNumber);
    cmp->add_option("--kind", cc.kind, "Hankel kind")->check(CLI::IsMember({1, 2}));
    cmp->add_option("--nq", cc.nq, "Gauss-Legendre points")->check(CLI::Range(1, kMaxRuleOrder));
    cmp->add_option("--levels", cc.levels, "dyadic refinement levels")->check(CLI::NonNegativeNumber);
    cmp->add_option("--out", cc.out_path, "optional CSV output");

    SpecfunConfig sc;
    auto* sf = app.add_subcommand("specfun", "tabulate calI0, calI1, Gamma0 or Gamma2");
    sf->add_option("--fn", sc.fn, "I0, I1, Gamma0 or Gamma2")->required();
    sf->add_option("--kind", sc.kind, "Hankel kind")->check(CLI::IsMember({1, 2}));
    sf->add_option("--sigma-max", sc.sigma_max, "upper end of the sigma grid");
    sf->add_option("--samples", sc.samples, "number of grid points (>= 2)");
    sf->add_option("--nq", sc.nq, "points per panel for Gamma0/Gamma2")->check(CLI::Range(2, kMaxRuleOrder));
    sf->add_option("--out", sc.out_path, "output CSV")->required();

    bool full = false;
    auto* st = app.add_subcommand("selftest", "run the built-in checks");
    st->add_flag("--full", full, "include the oracle comparisons (slow)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kUsageError;
    }

    try {
        if (*asmb) return cmd_assemble(ac);
        if (*cmp) return cmd_compare(cc);
        if (*sf) return cmd_specfun(sc);
        if (*st) return cmd_selftest(full);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
