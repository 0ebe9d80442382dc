#pragma once

#include <functional>
#include <utility>

#include "drobound/core.hpp"

// Lattice algebra and brute-force submodular function minimization. The
// minimizer is exhaustive enumeration behind a narrow contract so a
// combinatorial SFM algorithm can replace it later.

namespace drobound {

struct LatticeFunction {
    ProductSupport support;
    std::function<double(const LatticePoint&)> eval;
};

inline std::pair<LatticePoint, LatticePoint> meet_join(const LatticePoint& xi,
                                                       const LatticePoint& chi) {
    require(xi.size() == chi.size(), "meet_join: dimension mismatch");
    LatticePoint meet(xi.size()), join(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        meet[i] = std::min(xi[i], chi[i]);
        join[i] = std::max(xi[i], chi[i]);
    }
    return {meet, join};
}

// Exhaustive pairwise check of f(xi)+f(chi) >= f(meet)+f(join) - tol.
// O(|lattice|^2) evaluations.
inline bool verify_submodular(const LatticeFunction& f, double tol = 1e-9,
                              std::uint64_t cap = kLatticeCap) {
    std::vector<LatticePoint> pts;
    pts.reserve(f.support.size(cap));
    f.support.for_each([&](const LatticePoint& p) { pts.push_back(p); }, cap);
    std::vector<double> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f.eval(pts[i]);

    // Cache point -> value for meet/join lookups.
    std::map<LatticePoint, double> table;
    for (std::size_t i = 0; i < pts.size(); ++i) table[pts[i]] = vals[i];

    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            auto [meet, join] = meet_join(pts[i], pts[j]);
            if (vals[i] + vals[j] < table[meet] + table[join] - tol) return false;
        }
    }
    return true;
}

inline bool verify_supermodular(const LatticeFunction& f, double tol = 1e-9,
                                std::uint64_t cap = kLatticeCap) {
    LatticeFunction neg{f.support, [&f](const LatticePoint& p) { return -f.eval(p); }};
    return verify_submodular(neg, tol, cap);
}

// Global minimum by exhaustive enumeration; ties broken by the
// lexicographically smallest point (enumeration order is lexicographic).
inline std::pair<LatticePoint, double> minimize_submodular(const LatticeFunction& f,
                                                           std::uint64_t cap = kLatticeCap) {
    LatticePoint best;
    double best_val = std::numeric_limits<double>::infinity();
    f.support.for_each(
        [&](const LatticePoint& p) {
            double v = f.eval(p);
            if (v < best_val) {
                best_val = v;
                best = p;
            }
        },
        cap);
    return {best, best_val};
}

}  // namespace drobound
