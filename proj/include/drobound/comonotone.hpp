#pragma once

#include "drobound/core.hpp"
#include "drobound/lattice.hpp"

// Couplings of discrete marginals and the Choquet expectation. The
// comonotone coupling is built by inverse-CDF layering on a common uniform
// level; breakpoints with identical cumulative levels are merged so the
// support stays within sum_i |Xi_i| - N + 1 points.

namespace drobound {

inline JointDistribution comonotone_coupling(const std::vector<DiscreteMarginal>& marginals) {
    require(!marginals.empty(), "comonotone_coupling: no marginals");
    const std::size_t n = marginals.size();
    JointDistribution joint;
    joint.support = support_of(marginals);

    std::vector<std::size_t> idx(n, 0);   // current atom per marginal
    std::vector<double> cum(n);           // cumulative level at current atom
    for (std::size_t i = 0; i < n; ++i) cum[i] = marginals[i].probs[0];

    double level = 0.0;
    for (;;) {
        double next = 1.0;
        for (std::size_t i = 0; i < n; ++i) next = std::min(next, cum[i]);
        LatticePoint p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = marginals[i].values[idx[i]];
        double mass = next - level;
        if (mass > 0.0) joint.mass[p] += mass;
        if (next >= 1.0 - kProbTol) break;
        level = next;
        for (std::size_t i = 0; i < n; ++i) {
            while (cum[i] <= level + 1e-15 && idx[i] + 1 < marginals[i].size()) {
                ++idx[i];
                cum[i] += marginals[i].probs[idx[i]];
            }
        }
    }
    return joint;
}

inline JointDistribution independent_coupling(const std::vector<DiscreteMarginal>& marginals,
                                              std::uint64_t cap = kLatticeCap) {
    require(!marginals.empty(), "independent_coupling: no marginals");
    JointDistribution joint;
    joint.support = support_of(marginals);
    joint.support.size(cap);
    const std::size_t n = marginals.size();
    joint.support.for_each(
        [&](const LatticePoint& p) {
            double mass = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& vals = marginals[i].values;
                std::size_t k = static_cast<std::size_t>(
                    std::lower_bound(vals.begin(), vals.end(), p[i]) - vals.begin());
                mass *= marginals[i].probs[k];
            }
            joint.mass[p] = mass;
        },
        cap);
    return joint;
}

// E[f(xi^c)] over the comonotone coupling; at most sum_i |Xi_i| oracle calls.
inline double choquet_expectation(const LatticeFunction& f,
                                  const std::vector<DiscreteMarginal>& marginals) {
    JointDistribution joint = comonotone_coupling(marginals);
    double e = 0.0;
    for (const auto& [p, mass] : joint.mass) e += f.eval(p) * mass;
    return e;
}

enum class OrthantDirection { Upper, Lower };

// Upper: P(xi >= t) componentwise; Lower: P(xi <= t). Weak inequalities.
inline double orthant_prob(const JointDistribution& joint, const LatticePoint& t,
                           OrthantDirection dir) {
    require(t.size() == joint.support.dim(), "orthant_prob: dimension mismatch");
    double total = 0.0;
    for (const auto& [p, mass] : joint.mass) {
        bool in = true;
        for (std::size_t i = 0; i < t.size() && in; ++i)
            in = dir == OrthantDirection::Upper ? p[i] >= t[i] : p[i] <= t[i];
        if (in) total += mass;
    }
    return total;
}

}  // namespace drobound
