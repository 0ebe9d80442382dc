#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "drobound/compact.hpp"
#include "drobound/genbound.hpp"
#include "drobound/harness.hpp"
#include "drobound/io.hpp"
#include "drobound/oracle.hpp"

// Exit codes: 0 success, 1 parse/validation error, 2 infeasible spec,
// 3 solver failure (including a failed --verify cross-check).

namespace {

using drobound::io::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitSolver = 3;

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << text;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct ComputeOpts {
    std::string problem_path;
    std::string method = "auto";
    std::string out_path;
    bool verify = false;
    bool extract = false;
};

int run_compute(const ComputeOpts& opt) {
    drobound::io::Problem prob = drobound::io::load_problem(opt.problem_path);

    std::string method = opt.method;
    if (method == "auto") method = "compact";

    drobound::BoundResult res;
    std::optional<drobound::compact::CompactResult> compact_res;
    auto t0 = std::chrono::steady_clock::now();
    if (method == "compact") {
        if (const auto* pod = std::get_if<drobound::PodBivariateSpec>(&prob.spec))
            compact_res = drobound::compact::solve_pod_bivariate(*pod, prob.objective);
        else if (const auto* bo = std::get_if<drobound::BooleanHigherOrderSpec>(&prob.spec))
            compact_res = drobound::compact::solve_boolean_higher_order(*bo, prob.objective);
        else
            compact_res = drobound::compact::solve_moment(
                std::get<drobound::MomentSpec>(prob.spec), prob.objective);
        res = compact_res->bound;
    } else if (method == "generic") {
        res = drobound::genbound::sharp_bound_generic(drobound::genbound::to_generic(prob.spec),
                                                      prob.objective);
    } else {
        res = drobound::oracle::exponential_lp_bound(prob.spec, prob.objective);
    }
    double runtime = ms_since(t0);

    json doc;
    doc["method"] = method;
    doc["feasible"] = res.feasible;
    doc["runtime_ms"] = runtime;
    if (!res.feasible) {
        emit(opt.out_path, doc.dump(2));
        return kExitInfeasible;
    }
    doc["value"] = res.value;

    if (opt.extract) {
        if (method == "compact" && compact_res)
            res.extremal = drobound::compact::extract_extremal(prob.spec, compact_res->sol);
        if (res.extremal)
            doc["extremal"] = drobound::io::distribution_to_json(*res.extremal);
    }

    if (opt.verify) {
        auto oracle = drobound::oracle::exponential_lp_bound(prob.spec, prob.objective);
        double diff = std::abs(res.value - oracle.value);
        doc["verify"] = json{{"oracle_value", oracle.value}, {"diff", diff}};
        if (!oracle.feasible || diff > 1e-6) {
            doc["verify"]["ok"] = false;
            emit(opt.out_path, doc.dump(2));
            return kExitSolver;
        }
        doc["verify"]["ok"] = true;
    }

    emit(opt.out_path, doc.dump(2));
    return kExitOk;
}

struct GenOpts {
    std::string family = "pod";
    std::uint64_t seed = 0;
    std::size_t n = 4;
    std::size_t m = 2;
    std::size_t l = 2;
    double a = 0.5;
    std::string out_path;
};

int run_gen(const GenOpts& opt) {
    drobound::io::Problem prob;
    if (opt.family == "pod") {
        auto inst = drobound::harness::gen_pod_instance(opt.seed, opt.n, opt.a);
        std::vector<drobound::DiscreteMarginal> marginals;
        for (double p : inst.p)
            marginals.emplace_back(std::vector<double>{0.0, 1.0},
                                   std::vector<double>{1.0 - p, p});
        prob.spec = drobound::make_pod_spec(std::move(marginals));
        prob.objective = inst.obj;
    } else if (opt.family == "boolean") {
        auto inst = drobound::harness::gen_pod_instance(opt.seed, opt.n, opt.a);
        drobound::BooleanHigherOrderSpec spec;
        spec.p = inst.p;
        spec.max_order = opt.m;
        spec.q_targets = drobound::harness::gen_concordance_targets(inst.p, opt.m);
        prob.spec = std::move(spec);
        prob.objective = inst.obj;
    } else if (opt.family == "moment") {
        auto inst = drobound::harness::gen_moment_instance(opt.seed, opt.n);
        // Power-basis moments so the instance serializes faithfully.
        auto spec = drobound::harness::moment_spec_from_instance(inst, opt.l);
        drobound::MomentSpec plain;
        plain.support = spec.support;
        plain.cross_lower = spec.cross_lower;
        const auto& vals = drobound::harness::moment_support_values();
        for (std::size_t i = 0; i < opt.n; ++i) {
            std::vector<double> mi;
            for (std::size_t l = 0; l < opt.l; ++l) {
                double m = 0.0;
                for (std::size_t t = 0; t < vals.size(); ++t)
                    m += std::pow(vals[t], static_cast<double>(l + 1)) *
                         inst.marginal_probs[i][t];
                mi.push_back(m);
            }
            plain.m.push_back(std::move(mi));
        }
        prob.spec = std::move(plain);
        prob.objective = inst.obj;
    } else {
        throw drobound::io::ParseError("unknown family: " + opt.family);
    }
    emit(opt.out_path, drobound::io::problem_to_json(prob).dump(2));
    return kExitOk;
}

struct SweepOpts {
    std::uint64_t seed = 0;
    std::size_t count = 10;
    std::size_t n = 4;
    std::size_t l = 5;
    double a = 0.5;
    std::string out_path;
};

int run_verify(const std::string& problem_path, const std::string& result_path) {
    drobound::io::Problem prob = drobound::io::load_problem(problem_path);
    std::ifstream f(result_path);
    if (!f) throw drobound::io::ParseError("cannot open " + result_path);
    json doc;
    try {
        f >> doc;
    } catch (const json::parse_error& e) {
        throw drobound::io::ParseError(std::string("json parse error: ") + e.what());
    }
    if (!doc.contains("extremal"))
        throw drobound::io::ParseError("result document has no extremal distribution");

    drobound::ProductSupport storage;
    const drobound::ProductSupport& sup = drobound::spec_support(prob.spec, storage);
    auto joint = drobound::io::distribution_from_json(doc["extremal"], sup);
    auto rep = drobound::oracle::check_membership(joint, prob.spec);
    for (const auto& v : rep.violations)
        std::cerr << "violation: " << v.constraint << " by " << v.magnitude << '\n';

    double value = 0.0;
    for (const auto& [p, mass] : joint.mass)
        value += drobound::evaluate_objective(prob.objective, p).value * mass;
    bool value_ok = true;
    if (doc.contains("value")) {
        double claimed = doc["value"].get<double>();
        value_ok = std::abs(value - claimed) <= 1e-6;
        if (!value_ok)
            std::cerr << "value mismatch: distribution gives " << value << ", document claims "
                      << claimed << '\n';
    }
    std::cout << (rep.ok() && value_ok ? "ok" : "failed") << " value " << value << '\n';
    return rep.ok() && value_ok ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp bounds on expected piecewise-affine maxima over ambiguity sets"};
    app.require_subcommand(1);

    ComputeOpts copt;
    auto* compute = app.add_subcommand("compute", "Solve a problem file");
    compute->add_option("problem", copt.problem_path, "problem JSON file")->required();
    compute->add_option("--method", copt.method, "auto|compact|generic|oracle")
        ->check(CLI::IsMember({"auto", "compact", "generic", "oracle"}));
    compute->add_flag("--verify", copt.verify, "cross-check against the exponential LP");
    compute->add_flag("--extract", copt.extract, "include the extremal distribution");
    compute->add_option("--out", copt.out_path, "output path (default stdout)");

    GenOpts gopt;
    auto* gen = app.add_subcommand("gen", "Generate a random problem instance");
    gen->add_option("--family", gopt.family, "pod|boolean|moment")
        ->check(CLI::IsMember({"pod", "boolean", "moment"}));
    gen->add_option("--seed", gopt.seed, "instance seed");
    gen->add_option("--n", gopt.n, "dimension");
    gen->add_option("--m", gopt.m, "max interaction order (boolean)");
    gen->add_option("--l", gopt.l, "moment count (moment)");
    gen->add_option("--a", gopt.a, "marginal range parameter");
    gen->add_option("--out", gopt.out_path, "output path (default stdout)");

    SweepOpts popt;
    auto* sweep_pod = app.add_subcommand("sweep-pod", "Boolean order sweep, CSV output");
    sweep_pod->add_option("--seed", popt.seed, "first instance seed");
    sweep_pod->add_option("--count", popt.count, "number of instances");
    sweep_pod->add_option("--n", popt.n, "dimension");
    sweep_pod->add_option("--a", popt.a, "marginal range parameter");
    sweep_pod->add_option("--out", popt.out_path, "output path (default stdout)");

    SweepOpts mopt;
    auto* sweep_moment = app.add_subcommand("sweep-moment", "Moment count sweep, CSV output");
    sweep_moment->add_option("--seed", mopt.seed, "first instance seed");
    sweep_moment->add_option("--count", mopt.count, "number of instances");
    sweep_moment->add_option("--n", mopt.n, "dimension");
    sweep_moment->add_option("--l", mopt.l, "largest moment count");
    sweep_moment->add_option("--out", mopt.out_path, "output path (default stdout)");

    std::string vproblem, vresult;
    auto* verify = app.add_subcommand("verify", "Check a result document against its problem");
    verify->add_option("problem", vproblem, "problem JSON file")->required();
    verify->add_option("result", vresult, "result JSON file with an extremal distribution")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) return run_compute(copt);
        if (gen->parsed()) return run_gen(gopt);
        if (sweep_pod->parsed()) {
            auto rows = drobound::harness::run_pod_sweep(popt.count, popt.seed, popt.n, popt.a);
            emit(popt.out_path, drobound::harness::to_csv(rows));
            return kExitOk;
        }
        if (sweep_moment->parsed()) {
            auto rows = drobound::harness::run_moment_sweep(mopt.count, mopt.seed, mopt.n, mopt.l);
            emit(mopt.out_path, drobound::harness::to_csv(rows));
            return kExitOk;
        }
        if (verify->parsed()) return run_verify(vproblem, vresult);
    } catch (const drobound::io::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitParse;
}
