#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drobound/core.hpp"
#include "json.hpp"

// JSON problem and result documents. Ambiguity kinds "pod", "boolean" and
// "moment" round-trip; generic submodular specs carry function objects and
// are constructed in code only. Moment specs always use the default power
// basis when loaded from a file.

namespace drobound::io {

using nlohmann::json;

struct Problem {
    AmbiguitySpec spec;
    PiecewiseAffineObjective objective;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(std::string("missing field: ") + name);
    return *it;
}

inline std::vector<double> doubles(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw ParseError(std::string(what) + ": expected numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace detail

inline json objective_to_json(const PiecewiseAffineObjective& obj) {
    return json{{"a", obj.a}, {"b", obj.b}};
}

inline PiecewiseAffineObjective objective_from_json(const json& j) {
    PiecewiseAffineObjective obj;
    for (const auto& row : detail::field(j, "a"))
        obj.a.push_back(detail::doubles(row, "objective.a"));
    obj.b = detail::doubles(detail::field(j, "b"), "objective.b");
    if (obj.a.size() != obj.b.size())
        throw ParseError("objective: a and b piece counts differ");
    if (obj.a.empty()) throw ParseError("objective: no pieces");
    for (const auto& row : obj.a)
        if (row.size() != obj.a.front().size())
            throw ParseError("objective: ragged coefficient rows");
    return obj;
}

inline json spec_to_json(const AmbiguitySpec& spec) {
    json j;
    if (const auto* pod = std::get_if<PodBivariateSpec>(&spec)) {
        j["kind"] = "pod";
        json ms = json::array();
        for (const auto& m : pod->marginals)
            ms.push_back(json{{"values", m.values}, {"probs", m.probs}});
        j["marginals"] = std::move(ms);
        json ts = json::array();
        for (const auto& [key, target] : pod->pair_targets)
            ts.push_back(json{{"i", key.i},
                              {"j", key.j},
                              {"vi", key.vi},
                              {"vj", key.vj},
                              {"target", target}});
        j["pair_targets"] = std::move(ts);
    } else if (const auto* bo = std::get_if<BooleanHigherOrderSpec>(&spec)) {
        j["kind"] = "boolean";
        j["p"] = bo->p;
        j["max_order"] = bo->max_order;
        json ts = json::array();
        for (const auto& [mask, q] : bo->q_targets) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < bo->p.size(); ++i)
                if (mask & (1u << i)) idx.push_back(i);
            ts.push_back(json{{"indices", idx}, {"q", q}});
        }
        j["q_targets"] = std::move(ts);
    } else if (const auto* mo = std::get_if<MomentSpec>(&spec)) {
        j["kind"] = "moment";
        json sup = json::array();
        for (std::size_t i = 0; i < mo->support.dim(); ++i) sup.push_back(mo->support.values(i));
        j["support"] = std::move(sup);
        j["m"] = mo->m;
        json cs = json::array();
        for (const auto& [ij, q] : mo->cross_lower)
            cs.push_back(json{{"i", ij.first}, {"j", ij.second}, {"q", q}});
        j["cross_lower"] = std::move(cs);
    } else {
        throw ParseError("generic submodular specs are not serializable");
    }
    return j;
}

inline AmbiguitySpec spec_from_json(const json& j) {
    const std::string kind = detail::field(j, "kind").get<std::string>();
    if (kind == "pod") {
        std::vector<DiscreteMarginal> marginals;
        for (const auto& m : detail::field(j, "marginals"))
            marginals.emplace_back(detail::doubles(detail::field(m, "values"), "marginal values"),
                                   detail::doubles(detail::field(m, "probs"), "marginal probs"));
        PodBivariateSpec spec;
        if (j.contains("pair_targets")) {
            spec.marginals = std::move(marginals);
            for (const auto& t : j["pair_targets"]) {
                PairKey key{detail::field(t, "i").get<std::size_t>(),
                            detail::field(t, "j").get<std::size_t>(),
                            detail::field(t, "vi").get<double>(),
                            detail::field(t, "vj").get<double>()};
                spec.pair_targets[key] = detail::field(t, "target").get<double>();
            }
        } else {
            spec = make_pod_spec(std::move(marginals));
        }
        return spec;
    }
    if (kind == "boolean") {
        std::vector<double> p = detail::doubles(detail::field(j, "p"), "p");
        std::size_t max_order = detail::field(j, "max_order").get<std::size_t>();
        if (!j.contains("q_targets")) return make_boolean_spec(std::move(p), max_order);
        BooleanHigherOrderSpec spec;
        spec.max_order = max_order;
        for (const auto& t : j["q_targets"]) {
            std::uint32_t mask = 0;
            for (const auto& idx : detail::field(t, "indices")) {
                std::size_t i = idx.get<std::size_t>();
                if (i >= p.size()) throw ParseError("q_targets: index out of range");
                mask |= 1u << i;
            }
            spec.q_targets[mask] = detail::field(t, "q").get<double>();
        }
        spec.p = std::move(p);
        return spec;
    }
    if (kind == "moment") {
        MomentSpec spec;
        std::vector<std::vector<double>> dims;
        for (const auto& vals : detail::field(j, "support"))
            dims.push_back(detail::doubles(vals, "support"));
        spec.support = ProductSupport(std::move(dims));
        for (const auto& row : detail::field(j, "m"))
            spec.m.push_back(detail::doubles(row, "m"));
        if (spec.m.size() != spec.support.dim())
            throw ParseError("m: one moment row per coordinate required");
        if (j.contains("cross_lower"))
            for (const auto& c : j["cross_lower"]) {
                std::size_t i = detail::field(c, "i").get<std::size_t>();
                std::size_t jj = detail::field(c, "j").get<std::size_t>();
                if (i >= jj || jj >= spec.support.dim())
                    throw ParseError("cross_lower: bad index pair");
                spec.cross_lower[{i, jj}] = detail::field(c, "q").get<double>();
            }
        return spec;
    }
    throw ParseError("unknown ambiguity kind: " + kind);
}

inline json problem_to_json(const Problem& p) {
    json j;
    j["objective"] = objective_to_json(p.objective);
    j["ambiguity"] = spec_to_json(p.spec);
    ProductSupport storage;
    const ProductSupport& sup = spec_support(p.spec, storage);
    json sv = json::array();
    for (std::size_t i = 0; i < sup.dim(); ++i) sv.push_back(sup.values(i));
    j["support"] = std::move(sv);
    return j;
}

inline Problem problem_from_json(const json& j) {
    try {
        Problem p;
        p.spec = spec_from_json(detail::field(j, "ambiguity"));
        p.objective = objective_from_json(detail::field(j, "objective"));
        ProductSupport storage;
        const ProductSupport& sup = spec_support(p.spec, storage);
        if (p.objective.dim() != sup.dim())
            throw ParseError("objective dimension does not match the support");
        ValidationReport rep = validate_spec(p.spec);
        if (!rep.ok()) throw ParseError("invalid spec: " + rep.violations.front());
        return p;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {  // construction and json type errors
        throw ParseError(e.what());
    }
}

inline Problem load_problem(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("json parse error: ") + e.what());
    }
    return problem_from_json(j);
}

inline json distribution_to_json(const JointDistribution& joint) {
    json pts = json::array();
    json probs = json::array();
    for (const auto& [p, mass] : joint.mass) {
        pts.push_back(p);
        probs.push_back(mass);
    }
    return json{{"points", std::move(pts)}, {"probs", std::move(probs)}};
}

inline JointDistribution distribution_from_json(const json& j, const ProductSupport& support) {
    JointDistribution joint;
    joint.support = support;
    const json& pts = detail::field(j, "points");
    const json& probs = detail::field(j, "probs");
    if (pts.size() != probs.size()) throw ParseError("distribution: points/probs size mismatch");
    for (std::size_t v = 0; v < pts.size(); ++v) {
        LatticePoint p = detail::doubles(pts[v], "distribution point");
        if (p.size() != support.dim()) throw ParseError("distribution: bad point dimension");
        joint.mass[p] += probs[v].get<double>();
    }
    return joint;
}

}  // namespace drobound::io
