#pragma once

#include "drobound/comonotone.hpp"
#include "drobound/core.hpp"
#include "drobound/lattice.hpp"
#include "drobound/lp.hpp"

// Ground-truth brute force: the exponential linear program over the full
// lattice, exact expectations and ambiguity-set membership checking. Every
// compact solver is validated against this module.

namespace drobound::oracle {

enum class OptSense { Max, Min };

inline lp::LPModel build_exponential_lp(const AmbiguitySpec& spec,
                                        const PiecewiseAffineObjective& obj, OptSense sense,
                                        std::vector<LatticePoint>& points,
                                        std::uint64_t cap = kLatticeCap) {
    ProductSupport storage;
    const ProductSupport& sup = spec_support(spec, storage);
    require(sup.dim() == obj.dim(), "exponential_lp: objective dimension mismatch");
    points.clear();
    sup.for_each([&](const LatticePoint& p) { points.push_back(p); }, cap);
    const std::size_t np = points.size();

    lp::LPModel model;
    model.sense = sense == OptSense::Max ? lp::Sense::Maximize : lp::Sense::Minimize;
    for (std::size_t v = 0; v < np; ++v)
        model.add_var(evaluate_objective(obj, points[v]).value);

    auto add_row = [&](const std::function<double(const LatticePoint&)>& coeff,
                       lp::RowSense rs, double rhs) {
        std::vector<double> row(np);
        for (std::size_t v = 0; v < np; ++v) row[v] = coeff(points[v]);
        model.add_row(std::move(row), rs, rhs);
    };

    if (const auto* g = std::get_if<GenericSubmodularSpec>(&spec)) {
        for (const auto& c : g->constraints) add_row(c.f, lp::RowSense::LE, c.gamma);
    } else if (const auto* pod = std::get_if<PodBivariateSpec>(&spec)) {
        for (std::size_t i = 0; i < pod->marginals.size(); ++i)
            for (std::size_t a = 0; a < pod->marginals[i].size(); ++a) {
                double v = pod->marginals[i].values[a];
                add_row([i, v](const LatticePoint& p) { return p[i] == v ? 1.0 : 0.0; },
                        lp::RowSense::EQ, pod->marginals[i].probs[a]);
            }
        for (const auto& [key, target] : pod->pair_targets)
            add_row(
                [key](const LatticePoint& p) {
                    return p[key.i] >= key.vi && p[key.j] >= key.vj ? 1.0 : 0.0;
                },
                lp::RowSense::GE, target);
    } else if (const auto* bo = std::get_if<BooleanHigherOrderSpec>(&spec)) {
        for (std::size_t i = 0; i < bo->p.size(); ++i)
            add_row([i](const LatticePoint& p) { return p[i]; }, lp::RowSense::EQ, bo->p[i]);
        for (const auto& [mask, q] : bo->q_targets)
            add_row(
                [mask](const LatticePoint& p) {
                    for (std::size_t i = 0; i < p.size(); ++i)
                        if ((mask & (1u << i)) && p[i] < 0.5) return 0.0;
                    return 1.0;
                },
                lp::RowSense::GE, q);
    } else {
        const auto& mo = std::get<MomentSpec>(spec);
        for (std::size_t i = 0; i < mo.support.dim(); ++i)
            for (std::size_t l = 0; l < mo.num_moments(); ++l)
                add_row([&mo, i, l](const LatticePoint& p) { return mo.basis(l, p[i]); },
                        lp::RowSense::EQ, mo.m[i][l]);
        for (const auto& [ij, q] : mo.cross_lower)
            add_row([ij](const LatticePoint& p) { return p[ij.first] * p[ij.second]; },
                    lp::RowSense::GE, q);
    }
    add_row([](const LatticePoint&) { return 1.0; }, lp::RowSense::EQ, 1.0);
    return model;
}

// Optimizes the exponential LP with one variable per lattice point and
// returns the optimal value and attaining distribution.
inline BoundResult exponential_lp_bound(const AmbiguitySpec& spec,
                                        const PiecewiseAffineObjective& obj,
                                        OptSense sense = OptSense::Max,
                                        std::uint64_t cap = kLatticeCap) {
    std::vector<LatticePoint> points;
    lp::LPModel model = build_exponential_lp(spec, obj, sense, points, cap);
    lp::LPSolution sol = lp::solve_lp(model);

    BoundResult res;
    if (sol.status == lp::Status::Infeasible) {
        res.feasible = false;
        return res;
    }
    require(sol.status == lp::Status::Optimal, "exponential_lp: unexpected unbounded status");
    res.value = sol.objective;

    JointDistribution joint;
    ProductSupport storage;
    joint.support = spec_support(spec, storage);
    for (std::size_t v = 0; v < points.size(); ++v)
        if (sol.primal[v] > 1e-12) joint.mass[points[v]] = sol.primal[v];
    res.extremal = std::move(joint);
    return res;
}

inline double expectation(const JointDistribution& joint, const LatticeFunction& f) {
    double e = 0.0;
    for (const auto& [p, mass] : joint.mass) e += f.eval(p) * mass;
    return e;
}

inline double expectation(const JointDistribution& joint,
                          const std::function<double(const LatticePoint&)>& f) {
    double e = 0.0;
    for (const auto& [p, mass] : joint.mass) e += f(p) * mass;
    return e;
}

struct MembershipViolation {
    std::string constraint;
    double magnitude;
};

struct MembershipReport {
    std::vector<MembershipViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Verifies every defining constraint of the spec against a concrete joint
// distribution: marginals within marginal_tol, inequality slacks >= -slack_tol.
inline MembershipReport check_membership(const JointDistribution& joint,
                                         const AmbiguitySpec& spec,
                                         double marginal_tol = 1e-8,
                                         double slack_tol = 1e-8) {
    MembershipReport rep;
    auto fail = [&rep](std::string name, double mag) {
        rep.violations.push_back({std::move(name), mag});
    };

    double total = 0.0;
    for (const auto& [p, mass] : joint.mass) {
        total += mass;
        if (mass < -slack_tol) fail("nonnegative mass", -mass);
    }
    if (std::abs(total - 1.0) > marginal_tol) fail("normalization", std::abs(total - 1.0));

    auto check_marginals = [&](const std::vector<DiscreteMarginal>& marginals) {
        for (std::size_t i = 0; i < marginals.size(); ++i) {
            for (std::size_t a = 0; a < marginals[i].size(); ++a) {
                double v = marginals[i].values[a];
                double got = 0.0;
                for (const auto& [p, mass] : joint.mass)
                    if (p[i] == v) got += mass;
                double err = std::abs(got - marginals[i].probs[a]);
                if (err > marginal_tol)
                    fail("marginal " + std::to_string(i) + " at " + std::to_string(v), err);
            }
        }
    };

    if (const auto* g = std::get_if<GenericSubmodularSpec>(&spec)) {
        for (std::size_t j = 0; j < g->constraints.size(); ++j) {
            double e = expectation(joint, g->constraints[j].f);
            if (e > g->constraints[j].gamma + slack_tol)
                fail("constraint " + std::to_string(j), e - g->constraints[j].gamma);
        }
    } else if (const auto* pod = std::get_if<PodBivariateSpec>(&spec)) {
        check_marginals(pod->marginals);
        for (const auto& [key, target] : pod->pair_targets) {
            double got = 0.0;
            for (const auto& [p, mass] : joint.mass)
                if (p[key.i] >= key.vi && p[key.j] >= key.vj) got += mass;
            if (got < target - slack_tol)
                fail("pair tail (" + std::to_string(key.i) + "," + std::to_string(key.j) + ")",
                     target - got);
        }
    } else if (const auto* bo = std::get_if<BooleanHigherOrderSpec>(&spec)) {
        for (std::size_t i = 0; i < bo->p.size(); ++i) {
            double got = 0.0;
            for (const auto& [p, mass] : joint.mass)
                if (p[i] > 0.5) got += mass;
            if (std::abs(got - bo->p[i]) > marginal_tol)
                fail("marginal " + std::to_string(i), std::abs(got - bo->p[i]));
        }
        for (const auto& [mask, q] : bo->q_targets) {
            double got = 0.0;
            for (const auto& [p, mass] : joint.mass) {
                bool all = true;
                for (std::size_t i = 0; i < p.size() && all; ++i)
                    if ((mask & (1u << i)) && p[i] < 0.5) all = false;
                if (all) got += mass;
            }
            if (got < q - slack_tol) fail("q target mask " + std::to_string(mask), q - got);
        }
    } else {
        const auto& mo = std::get<MomentSpec>(spec);
        for (std::size_t i = 0; i < mo.support.dim(); ++i)
            for (std::size_t l = 0; l < mo.num_moments(); ++l) {
                double got = 0.0;
                for (const auto& [p, mass] : joint.mass) got += mo.basis(l, p[i]) * mass;
                double err = std::abs(got - mo.m[i][l]);
                if (err > marginal_tol)
                    fail("moment (" + std::to_string(i) + "," + std::to_string(l + 1) + ")", err);
            }
        for (const auto& [ij, q] : mo.cross_lower) {
            double got = 0.0;
            for (const auto& [p, mass] : joint.mass) got += p[ij.first] * p[ij.second] * mass;
            if (got < q - slack_tol)
                fail("cross moment (" + std::to_string(ij.first) + "," +
                         std::to_string(ij.second) + ")",
                     q - got);
        }
    }
    return rep;
}

}  // namespace drobound::oracle
