#pragma once

// Cutting-plane solver for the generic submodular-constrained bound.
//
// The ambiguity set is {P on Xi : E_P[f_j(xi)] <= gamma_j, j in [J]} with each
// f_j submodular.  The sharp upper bound on E[max_k (a_k'xi + b_k)] is the
// optimum of the dual LP
//
//   min  y0 + sum_j gamma_j y_j
//   s.t. y0 + sum_j y_j f_j(xi) >= max_k (a_k'xi + b_k)   for all xi in Xi
//        y_j >= 0
//
// solved by row generation: the restricted dual keeps only a working set of
// lattice points, and separation minimizes y0 + sum_j y_j f_j(xi) - g_k(xi)
// per piece k.  That function is submodular whenever g_k is supermodular
// (affine in particular), so exhaustive lattice minimization doubles as a
// stand-in for a polynomial SFM routine at the scales handled here.

#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "drobound/comonotone.hpp"
#include "drobound/core.hpp"
#include "drobound/lattice.hpp"
#include "drobound/lp.hpp"

namespace drobound::genbound {

inline constexpr double kViolationTol = 1e-8;
inline constexpr int kMaxCutRounds = 10000;
// Fallback cap on the dual multipliers.  The restricted dual is solved without
// caps first; if it comes back unbounded (the restricted primal is infeasible)
// a capped re-solve still yields a point to separate from, and a value stuck
// at the cap scale after convergence certifies an empty ambiguity set.
inline constexpr double kDualCap = 1e6;
inline constexpr double kInfeasibleValue = -1e4;

// Encodes fixed univariate marginals as submodular constraints: for every
// support level v of coordinate i, a pair E[1_{xi_i >= v}] <= tail and
// E[-1_{xi_i >= v}] <= -tail.  Univariate indicators are modular, hence
// submodular in both signs, and together the pairs pin the marginal exactly.
inline void add_marginal_constraints(GenericSubmodularSpec& spec,
                                     const std::vector<DiscreteMarginal>& marginals) {
    require(marginals.size() == spec.support.dim(), "marginal count mismatch");
    for (std::size_t i = 0; i < marginals.size(); ++i) {
        const auto& dim = spec.support.values(i);
        for (double v : marginals[i].values)
            require(std::binary_search(dim.begin(), dim.end(), v), "marginal atom off support");
        const auto& vals = marginals[i].values;
        for (std::size_t t = 1; t < vals.size(); ++t) {  // t=0 tail is always 1
            double v = vals[t];
            double tail = marginals[i].tail_geq(v);
            auto ind = [i, v](const LatticePoint& xi) { return xi[i] >= v ? 1.0 : 0.0; };
            spec.constraints.push_back({[ind](const LatticePoint& xi) { return ind(xi); }, tail});
            spec.constraints.push_back({[ind](const LatticePoint& xi) { return -ind(xi); }, -tail});
        }
    }
    spec.fixed_marginals = marginals;
}

inline GenericSubmodularSpec encode_frechet(const std::vector<DiscreteMarginal>& marginals) {
    GenericSubmodularSpec spec;
    spec.support = support_of(marginals);
    add_marginal_constraints(spec, marginals);
    return spec;
}

// Re-expresses a structured ambiguity set through submodular expectation
// constraints so the cutting-plane solver applies. Upper-orthant indicators
// are supermodular and cross products xi_i xi_j are supermodular, so their
// negations qualify; univariate basis functions are modular either way.
inline GenericSubmodularSpec to_generic(const AmbiguitySpec& spec) {
    if (const auto* g = std::get_if<GenericSubmodularSpec>(&spec)) return *g;
    if (const auto* pod = std::get_if<PodBivariateSpec>(&spec)) {
        GenericSubmodularSpec out = encode_frechet(pod->marginals);
        for (const auto& [key, target] : pod->pair_targets)
            out.constraints.push_back(
                {[key](const LatticePoint& xi) {
                     return xi[key.i] >= key.vi && xi[key.j] >= key.vj ? -1.0 : 0.0;
                 },
                 -target});
        return out;
    }
    if (const auto* bo = std::get_if<BooleanHigherOrderSpec>(&spec)) {
        std::vector<DiscreteMarginal> marginals;
        for (double p : bo->p) marginals.emplace_back(std::vector<double>{0.0, 1.0},
                                                     std::vector<double>{1.0 - p, p});
        GenericSubmodularSpec out = encode_frechet(marginals);
        for (const auto& [mask, q] : bo->q_targets)
            out.constraints.push_back(
                {[mask](const LatticePoint& xi) {
                     double prod = 1.0;
                     for (std::size_t i = 0; i < xi.size(); ++i)
                         if (mask & (1u << i)) prod *= xi[i];
                     return -prod;
                 },
                 -q});
        return out;
    }
    const auto& mo = std::get<MomentSpec>(spec);
    GenericSubmodularSpec out;
    out.support = mo.support;
    for (std::size_t i = 0; i < mo.support.dim(); ++i)
        for (std::size_t l = 0; l < mo.num_moments(); ++l) {
            std::function<double(double)> hl;
            if (l < mo.h.size())
                hl = mo.h[l];
            else
                hl = [l](double x) { return std::pow(x, static_cast<double>(l + 1)); };
            auto h = [hl, i](const LatticePoint& xi) { return hl(xi[i]); };
            out.constraints.push_back({h, mo.m[i][l]});
            out.constraints.push_back(
                {[h](const LatticePoint& xi) { return -h(xi); }, -mo.m[i][l]});
        }
    for (const auto& [ij, q] : mo.cross_lower)
        out.constraints.push_back(
            {[ij](const LatticePoint& xi) { return -xi[ij.first] * xi[ij.second]; }, -q});
    return out;
}

namespace detail {

// Shared row-generation core.  Pieces are arbitrary function oracles; the
// caller guarantees each one is supermodular on the lattice.
inline BoundResult row_generation(const GenericSubmodularSpec& spec,
                                  const std::vector<std::function<double(const LatticePoint&)>>& pieces) {
    require(!pieces.empty(), "objective needs at least one piece");
    const auto& sup = spec.support;
    const std::size_t J = spec.constraints.size();

    auto piece_max = [&](const LatticePoint& xi) {
        double best = pieces[0](xi);
        for (std::size_t k = 1; k < pieces.size(); ++k) best = std::max(best, pieces[k](xi));
        return best;
    };

    std::set<LatticePoint> cut_set;
    std::vector<LatticePoint> cuts;
    auto add_cut = [&](const LatticePoint& xi) {
        if (cut_set.insert(xi).second) {
            cuts.push_back(xi);
            return true;
        }
        return false;
    };
    add_cut(sup.min_point());
    add_cut(sup.max_point());
    if (!spec.fixed_marginals.empty()) {
        auto como = comonotone_coupling(spec.fixed_marginals);
        for (const auto& [xi, w] : como.mass) add_cut(xi);
    }

    BoundResult result;
    lp::LPSolution sol;
    bool capped = false;
    for (int round = 0;; ++round) {
        if (round >= kMaxCutRounds) throw std::runtime_error("row generation: iteration cap exceeded");

        auto build = [&](double cap) {
            lp::LPModel model;
            model.sense = lp::Sense::Minimize;
            model.add_var(1.0, -lp::kInf, lp::kInf);        // y0
            for (std::size_t j = 0; j < J; ++j)
                model.add_var(spec.constraints[j].gamma, 0.0, cap);
            for (const auto& xi : cuts) {
                std::vector<double> row(1 + J);
                row[0] = 1.0;
                for (std::size_t j = 0; j < J; ++j) row[1 + j] = spec.constraints[j].f(xi);
                model.add_row(row, lp::RowSense::GE, piece_max(xi));
            }
            return model;
        };
        sol = lp::solve_lp(build(lp::kInf));
        capped = false;
        if (sol.status == lp::Status::Unbounded) {
            sol = lp::solve_lp(build(kDualCap));
            capped = true;
        }
        if (sol.status != lp::Status::Optimal)
            throw std::runtime_error("row generation: restricted dual solve failed");

        double y0 = sol.primal[0];
        bool found = false;
        for (const auto& piece : pieces) {
            LatticeFunction sep{sup, [&](const LatticePoint& xi) {
                                    double v = y0 - piece(xi);
                                    for (std::size_t j = 0; j < J; ++j)
                                        v += sol.primal[1 + j] * spec.constraints[j].f(xi);
                                    return v;
                                }};
            auto [xi_star, viol] = minimize_submodular(sep);
            if (viol < -kViolationTol && add_cut(xi_star)) found = true;
        }
        if (!found) break;
    }

    result.value = sol.objective;
    result.cuts = cuts;
    DualSolution dual;
    dual.y0 = sol.primal[0];
    dual.y.assign(sol.primal.begin() + 1, sol.primal.end());
    // Paired +-f constraints (Frechet encoding) leave an objective-neutral
    // ray in the dual, so large multipliers alone do not signal anything.
    // A truly empty ambiguity set drives the value itself to the cap scale.
    result.feasible = !(capped && sol.objective <= kInfeasibleValue);
    result.dual = dual;

    if (result.feasible) {
        JointDistribution extremal;
        extremal.support = sup;
        for (std::size_t r = 0; r < cuts.size(); ++r) {
            double w = sol.duals[r];
            if (w > 1e-12) extremal.mass[cuts[r]] += w;
        }
        extremal.validate();
        result.extremal = std::move(extremal);
    }
    return result;
}

}  // namespace detail

inline BoundResult sharp_bound_generic(const GenericSubmodularSpec& spec,
                                       const PiecewiseAffineObjective& obj) {
    require(obj.dim() == spec.support.dim(), "objective dimension mismatch");
    std::vector<std::function<double(const LatticePoint&)>> pieces;
    for (std::size_t k = 0; k < obj.pieces(); ++k)
        pieces.push_back([&obj, k](const LatticePoint& xi) { return obj.piece_value(k, xi); });
    return detail::row_generation(spec, pieces);
}

inline BoundResult sharp_bound_supermodular_pieces(const GenericSubmodularSpec& spec,
                                                   const std::vector<LatticeFunction>& pieces) {
    std::vector<std::function<double(const LatticePoint&)>> fs;
    for (const auto& g : pieces) fs.push_back(g.eval);
    return detail::row_generation(spec, fs);
}

// The ambiguity set is nonempty iff the dual with zero objective has optimum
// zero (otherwise it is unbounded below and the capped solve reports it).
// With embedded marginals the comonotone coupling is the common minimizer of
// every submodular expectation, giving an independent closed-form criterion.
inline bool feasibility_test(const GenericSubmodularSpec& spec) {
    std::vector<std::function<double(const LatticePoint&)>> zero = {
        [](const LatticePoint&) { return 0.0; }};
    auto res = detail::row_generation(spec, zero);
    bool lp_feasible = res.feasible && std::abs(res.value) <= 1e-6;

    if (!spec.fixed_marginals.empty()) {
        auto como = comonotone_coupling(spec.fixed_marginals);
        bool como_feasible = true;
        for (const auto& c : spec.constraints) {
            double e = 0.0;
            for (const auto& [xi, w] : como.mass) e += w * c.f(xi);
            if (e > c.gamma + 1e-7) como_feasible = false;
        }
        if (como_feasible != lp_feasible)
            throw std::runtime_error("feasibility test: comonotone cross-check disagrees");
    }
    return lp_feasible;
}

// Decision set X = {x : A x <= b, lo <= x <= up}.
struct Polyhedron {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    std::vector<double> lo, up;  // may be empty; entries may be +-inf

    std::size_t dim() const {
        if (!A.empty()) return A.front().size();
        return lo.size();
    }
};

// Objective pieces affine in both xi and x:
//   piece k at decision x has slope a_k(x)_i = a0[k][i] + ax[k][i] . x
//   and intercept b_k(x) = b0[k] + bx[k] . x.
struct DecisionAffinePieces {
    std::vector<std::vector<double>> a0;                // K x N
    std::vector<std::vector<std::vector<double>>> ax;   // K x N x n
    std::vector<double> b0;                             // K
    std::vector<std::vector<double>> bx;                // K x n
};

struct DroResult {
    std::vector<double> x;
    double value = 0.0;
    DualSolution dual;
    std::size_t cut_count = 0;
};

// min_x sup_P E[max_k (a_k(x)'xi + b_k(x))] via joint row generation over
// (x, y): each generated lattice point xi and piece k contributes the cut
//   y0 + sum_j y_j f_j(xi) - a_k(x)'xi - b_k(x) >= 0,
// linear in (x, y) because a_k, b_k are affine in x.
inline DroResult dro_solve(const GenericSubmodularSpec& spec, const Polyhedron& X,
                           const DecisionAffinePieces& pieces) {
    const std::size_t n = X.dim();
    const std::size_t N = spec.support.dim();
    const std::size_t J = spec.constraints.size();
    const std::size_t K = pieces.a0.size();
    require(K > 0 && pieces.ax.size() == K && pieces.b0.size() == K && pieces.bx.size() == K,
            "piece data size mismatch");
    for (std::size_t k = 0; k < K; ++k)
        require(pieces.a0[k].size() == N && pieces.ax[k].size() == N && pieces.bx[k].size() == n,
                "piece coefficient size mismatch");

    std::set<std::pair<std::size_t, LatticePoint>> cut_set;
    std::vector<std::pair<std::size_t, LatticePoint>> cuts;
    auto add_cut = [&](std::size_t k, const LatticePoint& xi) {
        if (cut_set.insert({k, xi}).second) {
            cuts.push_back({k, xi});
            return true;
        }
        return false;
    };
    std::vector<LatticePoint> seeds = {spec.support.min_point(), spec.support.max_point()};
    if (!spec.fixed_marginals.empty()) {
        auto como = comonotone_coupling(spec.fixed_marginals);
        for (const auto& [xi, w] : como.mass) seeds.push_back(xi);
    }
    for (std::size_t k = 0; k < K; ++k)
        for (const auto& xi : seeds) add_cut(k, xi);

    DroResult out;
    lp::LPSolution sol;
    bool capped = false;
    for (int round = 0;; ++round) {
        if (round >= kMaxCutRounds) throw std::runtime_error("dro solve: iteration cap exceeded");

        auto build = [&](double cap) {
            lp::LPModel model;
            model.sense = lp::Sense::Minimize;
            for (std::size_t t = 0; t < n; ++t) {
                double lo = X.lo.empty() ? -lp::kInf : X.lo[t];
                double up = X.up.empty() ? lp::kInf : X.up[t];
                model.add_var(0.0, lo, up);
            }
            model.add_var(1.0, -lp::kInf, lp::kInf);        // y0
            for (std::size_t j = 0; j < J; ++j)
                model.add_var(spec.constraints[j].gamma, 0.0, cap);
            for (std::size_t r = 0; r < X.A.size(); ++r) {
                std::vector<double> row(n + 1 + J, 0.0);
                for (std::size_t t = 0; t < n; ++t) row[t] = X.A[r][t];
                model.add_row(row, lp::RowSense::LE, X.b[r]);
            }
            for (const auto& [k, xi] : cuts) {
                std::vector<double> row(n + 1 + J, 0.0);
                double rhs = pieces.b0[k];
                for (std::size_t i = 0; i < N; ++i) {
                    rhs += pieces.a0[k][i] * xi[i];
                    for (std::size_t t = 0; t < n; ++t) row[t] -= pieces.ax[k][i][t] * xi[i];
                }
                for (std::size_t t = 0; t < n; ++t) row[t] -= pieces.bx[k][t];
                row[n] = 1.0;
                for (std::size_t j = 0; j < J; ++j) row[n + 1 + j] = spec.constraints[j].f(xi);
                // y0 + sum y_j f_j(xi) - ax-part >= a0-part + b_k(0)
                model.add_row(row, lp::RowSense::GE, rhs);
            }
            return model;
        };
        sol = lp::solve_lp(build(lp::kInf));
        capped = false;
        if (sol.status == lp::Status::Unbounded) {
            sol = lp::solve_lp(build(kDualCap));
            capped = true;
        }
        if (sol.status == lp::Status::Infeasible) throw std::runtime_error("dro solve: X is empty");
        if (sol.status != lp::Status::Optimal) throw std::runtime_error("dro solve: LP failed");

        std::vector<double> x(sol.primal.begin(), sol.primal.begin() + n);
        double y0 = sol.primal[n];
        bool found = false;
        for (std::size_t k = 0; k < K; ++k) {
            std::vector<double> slope(N);
            double icept = pieces.b0[k];
            for (std::size_t i = 0; i < N; ++i) {
                slope[i] = pieces.a0[k][i];
                for (std::size_t t = 0; t < n; ++t) slope[i] += pieces.ax[k][i][t] * x[t];
            }
            for (std::size_t t = 0; t < n; ++t) icept += pieces.bx[k][t] * x[t];
            LatticeFunction sep{spec.support, [&](const LatticePoint& xi) {
                                    double v = y0 - icept;
                                    for (std::size_t i = 0; i < N; ++i) v -= slope[i] * xi[i];
                                    for (std::size_t j = 0; j < J; ++j)
                                        v += sol.primal[n + 1 + j] * spec.constraints[j].f(xi);
                                    return v;
                                }};
            auto [xi_star, viol] = minimize_submodular(sep);
            if (viol < -kViolationTol && add_cut(k, xi_star)) found = true;
        }
        if (!found) {
            out.x = x;
            break;
        }
    }

    out.value = sol.objective;
    out.dual.y0 = sol.primal[n];
    out.dual.y.assign(sol.primal.begin() + n + 1, sol.primal.end());
    out.cut_count = cuts.size();
    if (capped && out.value <= kInfeasibleValue)
        throw std::runtime_error("dro solve: ambiguity set is empty");
    return out;
}

}  // namespace drobound::genbound
