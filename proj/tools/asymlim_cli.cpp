// asymlim: command-line front end.
//
// Exit codes: 0 success, 1 malformed input or violated precondition,
// 2 no convergence, 3 bound failure, 4 verify failure, 5 inadmissible,
// 6 undecidable.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asymlim/asymlim.hpp"

namespace fs = std::filesystem;
using namespace asymlim;

namespace {

enum Exit : int {
    kOk = 0,
    kMalformed = 1,
    kNoConvergence = 2,
    kBoundFailure = 3,
    kVerifyFailure = 4,
    kInadmissible = 5,
    kUndecidable = 6,
};

struct Config {
    std::string input;
    std::string out;
    std::string table;
    std::string spec;
    std::string method = "diagonal";
    std::string suite = "examples";
    double tol = kDefaultTol;
    std::int64_t truncate = 20;
    std::uint64_t seed = 0;
};

// "<dir>/<stem><suffix>" next to `path`.
fs::path sibling(const fs::path& path, const std::string& suffix) {
    fs::path out = path;
    out.replace_extension();
    out += suffix;
    return out;
}

void require_tol(double tol) {
    if (!(tol > 0.0)) throw Error(ErrorKind::SpecViolation, "--tol must be positive");
}

int cmd_compute(const Config& cfg) {
    require_tol(cfg.tol);
    if (cfg.input.empty() || cfg.out.empty())
        throw Error(ErrorKind::MalformedInput, "compute needs --input and --out");
    const DenseContraction t(read_matrix_file(cfg.input));
    const DenseLimit lim = asymptotic_limit_dense(t, cfg.tol);
    const fs::path report = cfg.table.empty() ? sibling(cfg.out, ".report.json") : fs::path(cfg.table);
    atomic_write(report, lim.report.to_json());
    if (!lim.report.converged) {
        std::cerr << "no convergence after n = " << lim.report.final_n << "\n";
        return kNoConvergence;
    }
    write_matrix_file(cfg.out, lim.limit);
    std::cout << "converged at n = " << lim.report.final_n << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// construct

EigenvalueSequence lambda_from_json(const nlohmann::json& doc) {
    if (!doc.contains("lambda")) throw Error(ErrorKind::MalformedInput, "spec needs \"lambda\"");
    const auto& l = doc["lambda"];
    if (l.is_string()) {
        std::int64_t start = 1;
        if (doc.contains("start")) {
            if (!doc["start"].is_number_integer())
                throw Error(ErrorKind::MalformedInput, "\"start\" must be an integer");
            start = doc["start"].get<std::int64_t>();
        }
        return EigenvalueSequence::from_expr(parse(l.get<std::string>()), start);
    }
    if (l.is_array()) {
        std::vector<double> values;
        for (const auto& v : l) {
            if (!v.is_number()) throw Error(ErrorKind::MalformedInput, "\"lambda\" entries must be numbers");
            values.push_back(v.get<double>());
        }
        return EigenvalueSequence::from_list(std::move(values));
    }
    throw Error(ErrorKind::MalformedInput, "\"lambda\" must be a formula string or a list");
}

std::string grid_limit_json(const Truncation& tr, const std::function<double(Index)>& exact) {
    std::string basis;
    std::string values;
    for (std::size_t i = 0; i < tr.basis.size(); ++i) {
        const Index e = tr.basis[i];
        basis += (i ? ", [" : "[") + std::to_string(e.row) + ", " + std::to_string(e.col) + "]";
        values += (i ? ", " : "") + format_double(exact(e));
    }
    return "{\"kind\": \"diagonal\", \"basis\": [" + basis + "], \"values\": [" + values + "]}\n";
}

struct Built {
    ComplexMatrix t;
    std::string limit_json;
    ConvergenceReport report;
};

Built build(const Config& cfg, const nlohmann::json& doc) {
    if (cfg.method == "block") {
        if (!doc.contains("blocks") || !doc["blocks"].is_array())
            throw Error(ErrorKind::MalformedInput, "block spec needs a \"blocks\" array");
        BlockSpec spec;
        for (const auto& b : doc["blocks"]) spec.blocks.push_back(matrix_from_json(b));
        const BlockConstruction c = lemma_block_construction(spec);
        const std::size_t n_max = std::min<std::size_t>(c.block_count - 1, 16);
        return {c.t.matrix(), matrix_to_json(c.exact_limit), block_convergence(c, n_max)};
    }

    if (cfg.truncate < 3) throw Error(ErrorKind::SpecViolation, "--truncate must be at least 3");
    const std::int64_t n = cfg.truncate;
    const std::int64_t n_max = n - 2;
    if (cfg.method == "diagonal") {
        const DiagonalConstruction c = lemma_diagonal_construction(lambda_from_json(doc));
        const Truncation tr = truncate(c.t, Window::box(c.t.universe(), 1, n, 1, n, n));
        return {tr.op.matrix(), grid_limit_json(tr, c.exact_limit),
                grid_convergence(c.t, tr, c.exact_limit, n_max, [&](std::int64_t k) { return c.bound(k); })};
    }
    if (cfg.method == "hybrid") {
        if (!doc.contains("below_b") || !doc["below_b"].is_array())
            throw Error(ErrorKind::MalformedInput, "hybrid spec needs a \"below_b\" array");
        std::vector<double> below;
        for (const auto& v : doc["below_b"]) {
            if (!v.is_number()) throw Error(ErrorKind::MalformedInput, "\"below_b\" entries must be numbers");
            below.push_back(v.get<double>());
        }
        const EigenvalueSequence lambda = lambda_from_json(doc);
        double b = 0.0;
        if (doc.contains("b")) {
            if (!doc["b"].is_number()) throw Error(ErrorKind::MalformedInput, "\"b\" must be a number");
            b = doc["b"].get<double>();
        } else {
            b = lambda(1);
        }
        const HybridConstruction c = hybrid_construction(std::move(below), b, lambda);
        const Truncation tr = truncate(c.t, Window::box(c.t.universe(), 1, n, 0, n, n));
        return {tr.op.matrix(), grid_limit_json(tr, c.exact_limit),
                grid_convergence(c.t, tr, c.exact_limit, n_max, [&](std::int64_t k) { return c.bound(k); })};
    }
    throw Error(ErrorKind::MalformedInput, "unknown method " + cfg.method);
}

int cmd_construct(const Config& cfg) {
    if (cfg.spec.empty() || cfg.out.empty())
        throw Error(ErrorKind::MalformedInput, "construct needs --spec and --out");
    const nlohmann::json doc = parse_json(read_text_file(cfg.spec), cfg.spec);
    if (!doc.is_object()) throw Error(ErrorKind::MalformedInput, "construction spec must be a JSON object");
    const Built built = build(cfg, doc);

    std::cout << built.report.to_csv();
    if (!built.report.within_bounds(1e-10)) {
        std::cerr << "bound violated: measured error exceeds 1/lambda_n - 1\n";
        return kBoundFailure;
    }
    const fs::path table = cfg.table.empty() ? sibling(cfg.out, ".csv") : fs::path(cfg.table);
    write_matrix_file(cfg.out, built.t);
    atomic_write(sibling(cfg.out, ".limit.json"), built.limit_json);
    atomic_write(table, built.report.to_csv());
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_verify(const Config& cfg) {
    std::vector<CheckResult> results;
    if (cfg.suite == "examples") results = verify_examples();
    else if (cfg.suite == "props") results = verify_props(cfg.seed);
    else throw Error(ErrorKind::MalformedInput, "unknown suite " + cfg.suite);
    std::cout << format_table(results);
    if (all_passed(results)) return kOk;
    std::cerr << "failed checks:";
    for (const auto& r : results)
        if (!r.passed) std::cerr << " [" << r.name << "]";
    std::cerr << "\n";
    return kVerifyFailure;
}

int cmd_classify(const Config& cfg) {
    require_tol(cfg.tol);
    if (cfg.input.empty()) throw Error(ErrorKind::MalformedInput, "classify needs --input");
    const DenseContraction t(read_matrix_file(cfg.input));
    const ContractionClass c = classify(t, cfg.tol);
    std::cout << "forward: " << to_string(c.forward) << "\n"
              << "backward: " << to_string(c.backward) << "\n"
              << "class: " << c.label() << "\n"
              << "dim H0: " << c.stable_dim << "\n"
              << "dim H1: " << c.isometric_dim << "\n";
    return kOk;
}

int cmd_admissible(const Config& cfg) {
    if (cfg.spec.empty()) throw Error(ErrorKind::MalformedInput, "admissible needs --spec");
    const SpectrumSpec spec = spectrum_from_json(parse_json(read_text_file(cfg.spec), cfg.spec));
    const AdmissibilityVerdict v = check_admissible(spec);
    std::cout << "case: " << to_string(v.verdict_case) << "\n"
              << "admissible: " << (v.admissible ? "yes" : "no") << "\n"
              << "witness: " << v.witness << "\n";
    if (v.witness_delta) std::cout << "delta: " << format_double(*v.witness_delta) << "\n";
    return v.admissible ? kOk : kInadmissible;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NoConvergence: return kNoConvergence;
    case ErrorKind::Undecidable: return kUndecidable;
    default: return kMalformed;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymptotic limits of Hilbert-space contractions"};
    app.require_subcommand(1);
    Config cfg;

    auto* compute = app.add_subcommand("compute", "A_T of a dense contraction");
    compute->add_option("--input", cfg.input, "matrix JSON")->required();
    compute->add_option("--out", cfg.out, "output matrix JSON")->required();
    compute->add_option("--table", cfg.table, "report JSON path (default <out>.report.json)");
    compute->add_option("--tol", cfg.tol, "stopping tolerance");

    auto* construct = app.add_subcommand("construct", "build a contraction with a prescribed limit");
    construct->add_option("--method", cfg.method, "block | diagonal | hybrid")
        ->check(CLI::IsMember({"block", "diagonal", "hybrid"}));
    construct->add_option("--spec", cfg.spec, "construction spec JSON")->required();
    construct->add_option("--out", cfg.out, "truncated T matrix JSON")->required();
    construct->add_option("--table", cfg.table, "CSV path (default <out>.csv)");
    construct->add_option("--truncate", cfg.truncate, "keep grid indices with l + m <= N");

    auto* verify = app.add_subcommand("verify", "run a built-in check suite");
    verify->add_option("--suite", cfg.suite, "examples | props")
        ->check(CLI::IsMember({"examples", "props"}));
    verify->add_option("--seed", cfg.seed, "seed for the props suite");

    auto* classify_cmd = app.add_subcommand("classify", "C_{ij} class of a dense contraction");
    classify_cmd->add_option("--input", cfg.input, "matrix JSON")->required();
    classify_cmd->add_option("--tol", cfg.tol, "stopping tolerance");

    auto* admissible = app.add_subcommand("admissible", "is a spectrum an asymptotic limit?");
    admissible->add_option("--spec", cfg.spec, "spectrum JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kMalformed;
    }

    try {
        if (*compute) return cmd_compute(cfg);
        if (*construct) return cmd_construct(cfg);
        if (*verify) return cmd_verify(cfg);
        if (*classify_cmd) return cmd_classify(cfg);
        if (*admissible) return cmd_admissible(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMalformed;
    }
    return kMalformed;
}
