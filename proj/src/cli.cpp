#include "qbd/cli.hpp"

#include "qbd/darboux.hpp"
#include "qbd/factorization.hpp"
#include "qbd/io.hpp"
#include "qbd/jacobi.hpp"
#include "qbd/region.hpp"
#include "qbd/spectral.hpp"
#include "qbd/urnsim.hpp"
#include "qbd/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>

namespace qbd {

namespace {

/// Raised when a computed artifact fails its own check (exit code 4). The
/// artifact has already been written when this is thrown.
class VerificationFailure : public Error {
public:
    using Error::Error;
};

std::string num(Real x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(x));
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

Real parse_real(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const long double v = std::stold(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("cannot parse " + what + " value '" + s + "'");
    }
}

struct ParamOptions {
    std::optional<double> alpha, beta, k;
    int d = 2;

    void add(CLI::App* app) {
        app->add_option("--alpha", alpha, "Jacobi alpha (> -1)");
        app->add_option("--beta", beta, "Jacobi beta (> -1)");
        app->add_option("--k", k, "Jacobi k, 0 < k < beta + 1");
        app->add_option("--d", d, "block size")->capture_default_str();
    }

    bool given() const { return alpha || beta || k; }

    JacobiParams get() const {
        if (!alpha || !beta || !k) throw ParameterError("--alpha, --beta and --k are required");
        JacobiParams p{*alpha, *beta, *k, d};
        validate(p);
        return p;
    }
};

struct Output {
    std::string path;

    void add(CLI::App* app) { app->add_option("--output", path, "write the artifact here instead of stdout"); }

    // Artifact to the file (summary to stdout) or artifact to stdout.
    void emit(std::ostream& out, const std::string& artifact, const Json& summary) const {
        if (path.empty()) {
            out << artifact;
            return;
        }
        write_text_file(path, artifact);
        out << summary.dump(2) << '\n';
    }
};

Json stochasticity_json(const StochasticityReport& r) {
    Json j;
    j["max_negative_entry"] = static_cast<double>(r.max_negative_entry);
    j["max_row_sum_deviation"] = static_cast<double>(r.max_row_sum_deviation);
    j["passed"] = r.passed;
    j["offending_level"] = r.offending_level ? Json(*r.offending_level) : Json(nullptr);
    return j;
}

Json blocks_json(const std::vector<Block>& blocks) {
    Json j = Json::array();
    for (const auto& b : blocks) j.push_back(block_to_json(b));
    return j;
}

Block alpha0_from_option(const std::string& spec, const std::optional<JacobiParams>& p, int d) {
    auto need_params = [&]() -> const JacobiParams& {
        if (!p) throw ParameterError("--alpha0 " + spec + " needs --alpha, --beta and --k");
        return *p;
    };
    if (spec == "paper") return alpha0_paper(need_params());
    if (spec.rfind("file:", 0) == 0) {
        const Json j = read_json_file(spec.substr(5));
        return block_from_json(j.is_object() ? j.at("alpha0") : j, d);
    }
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string kind = spec.substr(0, colon);
        const auto parts = split(spec.substr(colon + 1), ',');
        if (parts.size() != 2) throw ParameterError("--alpha0 " + kind + " takes two comma-separated values");
        const Real x = parse_real(parts[0], "--alpha0");
        const Real y = parse_real(parts[1], "--alpha0");
        if (kind == "case1") return alpha0_case1(need_params(), x, y);
        if (kind == "case2a") return alpha0_case2a(need_params(), x, y);
    }
    throw ParameterError("unknown --alpha0 '" + spec + "' (paper, case1:s21,s11, case2a:s11,s12, file:path)");
}

TauStrategy tau_from_option(const std::string& spec, const std::optional<JacobiParams>& p, int d) {
    if (spec == "paper") {
        if (!p) throw ParameterError("--tau paper needs --alpha, --beta and --k");
        return TauJacobiPaper{*p};
    }
    if (spec == "lower") return TauLowerTriangular{};
    if (spec.rfind("file:", 0) == 0) {
        const Json j = read_json_file(spec.substr(5));
        const Json& arr = j.is_object() ? j.at("tau") : j;
        if (!arr.is_array()) throw ParameterError("tau file must hold an array of blocks");
        TauExplicit t;
        for (const auto& b : arr) t.taus.push_back(block_from_json(b, d));
        return t;
    }
    throw ParameterError("unknown --tau '" + spec + "' (paper, lower, file:path)");
}

// Shared options of factorize and darboux.
struct FactorOptions {
    ParamOptions params;
    Output output;
    std::string mode = "ul";
    std::string alpha0 = "paper";
    std::string tau = "paper";
    std::string input;
    std::size_t n = 20;
    double tol = 1e-10;

    void add(CLI::App* app) {
        params.add(app);
        output.add(app);
        app->add_option("--mode", mode, "ul or lu")->check(CLI::IsMember({"ul", "lu"}))->capture_default_str();
        app->add_option("--alpha0", alpha0, "paper, case1:s21,s11, case2a:s11,s12 or file:path")
            ->capture_default_str();
        app->add_option("--tau", tau, "paper, lower or file:path")->capture_default_str();
        app->add_option("--input", input, "block sequence JSON used instead of the Jacobi example");
        app->add_option("--n", n, "number of levels")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--tol", tol, "verification tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    }

    std::optional<JacobiParams> jacobi() const {
        if (!input.empty() && !params.given()) return std::nullopt;
        return params.get();
    }

    BlockSequence matrix(const std::optional<JacobiParams>& p) const {
        if (!input.empty()) return block_sequence_from_json(read_json_file(input));
        return jacobi_block_sequence(*p);
    }
};

struct FactorRun {
    Json artifact;
    bool passed = true;
};

Json head_json(const std::optional<JacobiParams>& p, const std::string& mode, std::size_t n) {
    Json j;
    j["mode"] = mode;
    j["params"] = p ? params_to_json(*p) : Json(nullptr);
    j["levels"] = n;
    return j;
}

int cmd_factorize(const FactorOptions& o, std::ostream& out) {
    const auto p = o.jacobi();
    const BlockSequence P = o.matrix(p);
    const int d = P.dim();
    const TauStrategy tau = tau_from_option(o.tau, p, d);
    Json j = head_json(p, o.mode, o.n);
    Real residual = 0;
    StochasticityReport s1, s2;
    if (o.mode == "ul") {
        const Block a0 = alpha0_from_option(o.alpha0, p, d);
        const ULFactorization f = factorize_ul(P, a0, tau, o.n);
        residual = factorization_residual(P, f.factors.upper, f.factors.lower, o.n);
        s1 = validate_stochastic(f.factors.upper, o.n, o.tol);
        s2 = validate_stochastic(f.factors.lower, o.n + 1, o.tol);
        j["alpha0"] = block_to_json(a0);
        j["tau"] = blocks_json(f.taus);
        j["upper"] = block_sequence_to_json(f.factors.upper, o.n);
        j["lower"] = block_sequence_to_json(f.factors.lower, o.n + 1);
    } else {
        const LUFactorization f = factorize_lu(P, tau, o.n);
        residual = factorization_residual(P, f.factors.lower, f.factors.upper, o.n);
        s1 = validate_stochastic(f.factors.lower, o.n, o.tol);
        s2 = validate_stochastic(f.factors.upper, o.n, o.tol);
        j["tau"] = blocks_json(f.taus);
        j["lower"] = block_sequence_to_json(f.factors.lower, o.n);
        j["upper"] = block_sequence_to_json(f.factors.upper, o.n);
    }
    const bool passed = residual <= o.tol && s1.passed && s2.passed;
    Json report;
    report["residual"] = static_cast<double>(residual);
    report["tolerance"] = o.tol;
    report[o.mode == "ul" ? "upper_stochasticity" : "lower_stochasticity"] = stochasticity_json(s1);
    report[o.mode == "ul" ? "lower_stochasticity" : "upper_stochasticity"] = stochasticity_json(s2);
    report["passed"] = passed;
    j["report"] = report;
    o.output.emit(out, j.dump(2) + "\n", report);
    if (!passed) throw VerificationFailure("factorisation residual or stochasticity check failed");
    return kExitOk;
}

int cmd_darboux(const FactorOptions& o, std::ostream& out) {
    const auto p = o.jacobi();
    const BlockSequence P = o.matrix(p);
    const int d = P.dim();
    const TauStrategy tau = tau_from_option(o.tau, p, d);
    // One spare level: the transformed level n reads factor level n + 1.
    const std::size_t levels = o.n + 1;
    std::optional<DarbouxResult> r;
    if (o.mode == "ul") {
        const ULFactorization f = factorize_ul(P, alpha0_from_option(o.alpha0, p, d), tau, levels);
        r = darboux_from_ul(f.factors.upper, f.factors.lower, o.n);
    } else {
        const LUFactorization f = factorize_lu(P, tau, levels);
        r = darboux_from_lu(f.factors.upper, f.factors.lower, o.n);
    }
    const StochasticityReport s = validate_stochastic(r->transformed, o.n, o.tol);
    Json j = head_json(p, o.mode, o.n);
    j["source"] = std::string(to_string(r->source));
    j["transformed"] = block_sequence_to_json(r->transformed, o.n);
    j["stochasticity"] = stochasticity_json(s);
    o.output.emit(out, j.dump(2) + "\n", j["stochasticity"]);
    if (!s.passed) throw VerificationFailure("Darboux transform is not stochastic");
    return kExitOk;
}

int cmd_verify(const JacobiParams& p, const Output& output, std::ostream& out) {
    const VerifyReport r = verify_all(p);
    Json j;
    j["params"] = params_to_json(p);
    j["checks"] = Json::array();
    for (const auto& c : r.checks) {
        Json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["value"] = static_cast<double>(c.value);
        cj["tolerance"] = static_cast<double>(c.tolerance);
        if (!c.detail.empty()) cj["detail"] = c.detail;
        j["checks"].push_back(cj);
    }
    j["passed"] = r.all_passed();
    Json summary;
    summary["passed"] = r.all_passed();
    output.emit(out, j.dump(2) + "\n", summary);
    if (!r.all_passed()) throw VerificationFailure("one or more invariant checks failed");
    return kExitOk;
}

struct RegionOptions {
    ParamOptions params;
    Output output;
    std::string which = "1";
    std::size_t grid = 200;
    std::size_t n_check = 50;
    std::optional<double> a_min, a_max, b_min, b_max;
    unsigned threads = 0;
    double min_agreement = 0;
};

std::string tri(const std::optional<bool>& b) { return b ? (*b ? "1" : "0") : "n/a"; }

int cmd_region(const RegionOptions& o, std::ostream& out) {
    const JacobiParams p = o.params.get();
    const RegionCase which = region_case_from_string(o.which);
    auto [a, b] = default_region_axes(p, which, o.grid);
    if (o.a_min) a.lo = *o.a_min;
    if (o.a_max) a.hi = *o.a_max;
    if (o.b_min) b.lo = *o.b_min;
    if (o.b_max) b.hi = *o.b_max;
    if (!(a.lo < a.hi) || !(b.lo < b.hi)) throw ParameterError("empty region axis");
    const RegionScan scan = scan_region(p, which, a, b, o.n_check, o.threads);
    std::string csv = "s_a,s_b,analytic_inside,stochastic_ok,M_psd\n";
    for (std::size_t i = 0; i < a.count; ++i) {
        for (std::size_t jdx = 0; jdx < b.count; ++jdx) {
            const RegionResult& c = scan.cell(i, jdx);
            csv += num(a.at(i)) + "," + num(b.at(jdx)) + "," + tri(c.analytic_inside) + "," +
                   (c.stochastic_ok ? "1" : "0") + "," + tri(c.m_psd) + "\n";
        }
    }
    Json summary;
    summary["case"] = std::string(to_string(which));
    summary["params"] = params_to_json(p);
    summary["grid"] = o.grid;
    summary["n_check"] = o.n_check;
    summary["axis_a"] = {static_cast<double>(a.lo), static_cast<double>(a.hi)};
    summary["axis_b"] = {static_cast<double>(b.lo), static_cast<double>(b.hi)};
    summary["compared"] = scan.compared;
    summary["agreed"] = scan.agreed;
    summary["agreement"] = static_cast<double>(scan.agreement());
    if (which == RegionCase::case1) {
        const Real s21 = case1_s21_bound(p);
        summary["s21_bound"] = static_cast<double>(s21);
        summary["s11_bound_at_s21_bound"] = static_cast<double>(case1_s11_bound(p, s21));
    }
    o.output.emit(out, csv, summary);
    if (scan.agreement() < o.min_agreement)
        throw VerificationFailure("region agreement " + num(scan.agreement()) + " below " + num(o.min_agreement));
    return kExitOk;
}

int cmd_kmcg(const JacobiParams& p, std::size_t max_steps, std::size_t max_level, std::size_t truncation,
             double tol, const Output& output, std::ostream& out) {
    if (max_level + 1 >= truncation) throw ParameterError("--truncation must exceed --max-level + 1");
    const BlockSequence P = jacobi_block_sequence(p);
    const WeightSpec W = jacobi_weight(p);
    const Block T = truncate_dense(P, truncation);
    const auto d = static_cast<Eigen::Index>(p.d);
    Block power = Block::Identity(T.rows(), T.cols());
    std::string csv = "steps,i,j,row,col,quadrature,power,abs_error\n";
    Real worst = 0;
    for (std::size_t n = 0; n <= max_steps; ++n) {
        for (std::size_t i = 0; i <= max_level; ++i) {
            for (std::size_t j = 0; j <= max_level; ++j) {
                const Block q = kmcg_entry(P, W, n, i, j);
                const Block m = power.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d);
                for (Eigen::Index r = 0; r < d; ++r) {
                    for (Eigen::Index c = 0; c < d; ++c) {
                        const Real e = std::abs(q(r, c) - m(r, c));
                        worst = std::max(worst, e);
                        csv += std::to_string(n) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
                               std::to_string(r) + "," + std::to_string(c) + "," + num(q(r, c)) + "," +
                               num(m(r, c)) + "," + num(e) + "\n";
                    }
                }
            }
        }
        power = power * T;
    }
    Json summary;
    summary["max_abs_error"] = static_cast<double>(worst);
    summary["tolerance"] = tol;
    summary["passed"] = worst <= tol;
    output.emit(out, csv, summary);
    if (worst > tol) throw VerificationFailure("quadrature and matrix powers differ by " + num(worst));
    return kExitOk;
}

int cmd_invariant(const JacobiParams& p, std::size_t levels, std::size_t truncation, double tol,
                  const Output& output, std::ostream& out) {
    if (levels + 1 >= truncation) throw ParameterError("--truncation must exceed --levels + 1");
    const BlockSequence P = jacobi_block_sequence(p);
    const auto pi = invariant_measure(P, jacobi_weight(p), truncation);
    const auto d = static_cast<Eigen::Index>(p.d);
    Vector row(static_cast<Eigen::Index>(truncation) * d);
    for (std::size_t n = 0; n < truncation; ++n) row.segment(static_cast<Eigen::Index>(n) * d, d) = pi[n];
    const Vector residual = (row.transpose() * truncate_dense(P, truncation)).transpose() - row;
    std::string csv = "block,phase,pi,stationarity_residual\n";
    Real worst = 0;
    for (std::size_t n = 0; n < levels; ++n) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const Real r = residual(static_cast<Eigen::Index>(n) * d + i);
            worst = std::max(worst, std::abs(r));
            csv += std::to_string(n) + "," + std::to_string(i) + "," + num(pi[n](i)) + "," + num(r) + "\n";
        }
    }
    Json summary;
    summary["max_abs_residual"] = static_cast<double>(worst);
    summary["tolerance"] = tol;
    summary["passed"] = worst <= tol;
    output.emit(out, csv, summary);
    if (worst > tol) throw VerificationFailure("pi P - pi residual " + num(worst));
    return kExitOk;
}

struct UrnOptions {
    ParamOptions params;
    Output output;
    std::string experiment = "composed_P";
    std::size_t start = 0;
    std::optional<std::size_t> start_max;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 7;
    double z = 3;
    unsigned threads = 0;
};

BlockSequence urn_reference(const JacobiParams& p, Experiment e, std::size_t levels) {
    switch (e) {
        case Experiment::exp1: return paper_upper_factor(p);
        case Experiment::exp2: return paper_lower_factor(p);
        case Experiment::composed_P: return jacobi_block_sequence(p);
        case Experiment::composed_Ptilde:
            return darboux_from_ul(paper_upper_factor(p), paper_lower_factor(p), levels).transformed;
    }
    throw ParameterError("unknown experiment");
}

int cmd_urn(const UrnOptions& o, std::ostream& out) {
    const JacobiParams p = o.params.get();
    validate_urn(p);
    if (o.trials == 0) throw ParameterError("--trials must be positive");
    const std::size_t last = o.start_max.value_or(o.start);
    if (last < o.start) throw ParameterError("--start-max is below --start");
    const UrnChainSpec spec{p, experiment_from_string(o.experiment)};
    const BlockSequence ref = urn_reference(p, spec.experiment, last / 2 + 3);
    std::string csv = "start,target,count,trials,empirical_p,reference_p,z\n";
    bool passed = true;
    Real worst = 0;
    for (std::size_t s = o.start; s <= last; ++s) {
        const EmpiricalKernel k = empirical_kernel(spec, s, o.trials, o.seed, o.threads);
        const KernelTestReport r = kernel_vs_matrix(k, flattened_row(ref, s), o.z);
        passed = passed && r.passed;
        for (const auto& row : r.rows) {
            worst = std::max(worst, std::abs(row.z));
            csv += std::to_string(s) + "," + std::to_string(row.target) + "," + std::to_string(row.count) + "," +
                   std::to_string(row.trials) + "," + num(row.empirical) + "," + num(row.reference) + "," +
                   num(row.z) + "\n";
        }
    }
    Json summary;
    summary["experiment"] = o.experiment;
    summary["seed"] = o.seed;
    summary["trials"] = o.trials;
    summary["max_abs_z"] = static_cast<double>(worst);
    summary["z_max"] = o.z;
    summary["passed"] = passed;
    o.output.emit(out, csv, summary);
    if (!passed) throw VerificationFailure("empirical kernel outside " + num(o.z) + " standard errors");
    return kExitOk;
}

int cmd_weights(const JacobiParams& p, const std::string& transform, const std::string& alpha0,
                const Output& output, std::ostream& out) {
    const WeightSpec W = jacobi_weight(p);
    Json j;
    j["params"] = params_to_json(p);
    j["transform"] = transform;
    if (transform == "none") {
        j["weight"] = weight_to_json(W);
    } else if (transform == "geronimus") {
        const Block a0 = alpha0_from_option(alpha0, p, p.d);
        j["alpha0"] = block_to_json(a0);
        j["weight"] = weight_to_json(geronimus_transform(W, a0));
    } else {
        j["weight"] = weight_to_json(christoffel_transform(W));
    }
    output.emit(out, j.dump(2) + "\n", Json{{"transform", transform}});
    return kExitOk;
}

Json error_record(const std::string& kind, const std::string& message, const std::string& command) {
    Json j;
    j["error"] = kind;
    j["message"] = message;
    j["level"] = nullptr;
    j["which"] = nullptr;
    j["command"] = command.empty() ? Json(nullptr) : Json(command);
    return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic UL/LU factorisation of block tridiagonal transition matrices", "qbd_cli"};
    app.require_subcommand(1);
    app.allow_windows_style_options(false);

    FactorOptions fact, darb;
    auto* c_fact = app.add_subcommand("factorize", "UL or LU factorisation with factor JSON and residual report");
    fact.add(c_fact);
    auto* c_darb = app.add_subcommand("darboux", "Darboux transform of the factorisation");
    darb.add(c_darb);

    ParamOptions ver_params;
    Output ver_out;
    auto* c_ver = app.add_subcommand("verify", "cross-module invariant suite");
    ver_params.add(c_ver);
    ver_out.add(c_ver);

    RegionOptions reg;
    auto* c_reg = app.add_subcommand("region", "scan an alpha_0 family for stochastic factors");
    reg.params.add(c_reg);
    reg.output.add(c_reg);
    c_reg->add_option("--case", reg.which, "1, 2a, 2b, 2c or 2d")->capture_default_str();
    c_reg->add_option("--grid", reg.grid, "points per axis")->check(CLI::PositiveNumber)->capture_default_str();
    c_reg->add_option("--n-check", reg.n_check, "positivity horizon")->check(CLI::PositiveNumber)->capture_default_str();
    c_reg->add_option("--a-min", reg.a_min, "first axis lower bound");
    c_reg->add_option("--a-max", reg.a_max, "first axis upper bound");
    c_reg->add_option("--b-min", reg.b_min, "second axis lower bound");
    c_reg->add_option("--b-max", reg.b_max, "second axis upper bound");
    c_reg->add_option("--threads", reg.threads, "worker threads, 0 for all cores")->capture_default_str();
    c_reg->add_option("--min-agreement", reg.min_agreement, "exit 4 when the agreement is lower")
        ->check(CLI::Range(0.0, 1.0));

    ParamOptions km_params;
    Output km_out;
    std::size_t km_steps = 6, km_level = 3, km_trunc = 15;
    double km_tol = 1e-8;
    auto* c_km = app.add_subcommand("kmcg", "Karlin-McGregor blocks against truncated matrix powers");
    km_params.add(c_km);
    km_out.add(c_km);
    c_km->add_option("--max-steps", km_steps)->capture_default_str();
    c_km->add_option("--max-level", km_level)->capture_default_str();
    c_km->add_option("--truncation", km_trunc)->capture_default_str();
    c_km->add_option("--tol", km_tol)->check(CLI::PositiveNumber)->capture_default_str();

    ParamOptions inv_params;
    Output inv_out;
    std::size_t inv_levels = 9, inv_trunc = 15;
    double inv_tol = 1e-8;
    auto* c_inv = app.add_subcommand("invariant", "invariant measure from the spectral weight");
    inv_params.add(c_inv);
    inv_out.add(c_inv);
    c_inv->add_option("--levels", inv_levels, "blocks reported and checked")->check(CLI::PositiveNumber)->capture_default_str();
    c_inv->add_option("--truncation", inv_trunc)->capture_default_str();
    c_inv->add_option("--tol", inv_tol)->check(CLI::PositiveNumber)->capture_default_str();

    UrnOptions urn;
    auto* c_urn = app.add_subcommand("urn", "Monte Carlo urn experiments against matrix rows");
    urn.params.add(c_urn);
    urn.output.add(c_urn);
    c_urn->add_option("--experiment", urn.experiment, "exp1, exp2, composed_P or composed_Ptilde")
        ->check(CLI::IsMember({"exp1", "exp2", "composed_P", "composed_Ptilde"}))
        ->capture_default_str();
    c_urn->add_option("--start", urn.start)->capture_default_str();
    c_urn->add_option("--start-max", urn.start_max, "simulate every start state up to this one");
    c_urn->add_option("--trials", urn.trials)->capture_default_str();
    c_urn->add_option("--seed", urn.seed)->capture_default_str();
    c_urn->add_option("--z", urn.z, "standard-error multiplier")->check(CLI::PositiveNumber)->capture_default_str();
    c_urn->add_option("--threads", urn.threads, "worker threads, 0 for all cores")->capture_default_str();

    ParamOptions w_params;
    Output w_out;
    std::string w_transform = "none", w_alpha0 = "paper";
    auto* c_w = app.add_subcommand("weights", "spectral weight and its Geronimus/Christoffel transforms");
    w_params.add(c_w);
    w_out.add(c_w);
    c_w->add_option("--transform", w_transform)
        ->check(CLI::IsMember({"none", "geronimus", "christoffel"}))
        ->capture_default_str();
    c_w->add_option("--alpha0", w_alpha0, "seed for the Geronimus transform")->capture_default_str();

    std::string command;
    std::vector<const char*> argv{"qbd_cli"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        for (const auto* sub : app.get_subcommands()) command = sub->get_name();
        err << error_record("ParseError", e.what(), command).dump() << '\n';
        return kExitParameter;
    }
    command = app.get_subcommands().front()->get_name();

    try {
        if (command == "factorize") return cmd_factorize(fact, out);
        if (command == "darboux") return cmd_darboux(darb, out);
        if (command == "verify") return cmd_verify(ver_params.get(), ver_out, out);
        if (command == "region") return cmd_region(reg, out);
        if (command == "kmcg") return cmd_kmcg(km_params.get(), km_steps, km_level, km_trunc, km_tol, km_out, out);
        if (command == "invariant") return cmd_invariant(inv_params.get(), inv_levels, inv_trunc, inv_tol, inv_out, out);
        if (command == "urn") return cmd_urn(urn, out);
        return cmd_weights(w_params.get(), w_transform, w_alpha0, w_out, out);
    } catch (const VerificationFailure& e) {
        err << error_record("VerificationFailure", e.what(), command).dump() << '\n';
        return kExitVerification;
    } catch (const SingularMatrixError& e) {
        Json j = error_record("SingularMatrixError", e.what(), command);
        if (e.level()) j["level"] = *e.level();
        if (!e.which().empty()) j["which"] = e.which();
        err << j.dump() << '\n';
        return kExitNumerical;
    } catch (const GeneratorError& e) {
        Json j = error_record("GeneratorError", e.what(), command);
        j["level"] = e.level();
        err << j.dump() << '\n';
        return kExitNumerical;
    } catch (const ConvergenceError& e) {
        err << error_record("ConvergenceError", e.what(), command).dump() << '\n';
        return kExitNumerical;
    } catch (const ExactnessError& e) {
        err << error_record("ExactnessError", e.what(), command).dump() << '\n';
        return kExitNumerical;
    } catch (const DimensionError& e) {
        err << error_record("DimensionError", e.what(), command).dump() << '\n';
        return kExitParameter;
    } catch (const ParameterError& e) {
        err << error_record("ParameterError", e.what(), command).dump() << '\n';
        return kExitParameter;
    } catch (const nlohmann::json::exception& e) {
        err << error_record("ParameterError", e.what(), command).dump() << '\n';
        return kExitParameter;
    } catch (const std::exception& e) {
        err << error_record("Error", e.what(), command).dump() << '\n';
        return kExitNumerical;
    }
}

}  // namespace qbd
