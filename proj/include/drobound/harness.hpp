#pragma once

// Experiment harness: seeded instance generators and the two information
// sweeps (subset order M for Boolean instances, moment order L for discrete
// moment instances), with flat CSV emission.
//
// All randomness flows through std::mt19937_64 with the explicit transforms
// below (never std::uniform_real_distribution, whose output is not pinned by
// the standard), so a (seed, parameters) pair reproduces bit-identical
// instances on any platform.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drobound/compact.hpp"
#include "drobound/core.hpp"

namespace drobound::harness {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller, one variate per call (the sine branch is discarded so the
// draw count per call is fixed at two).
inline double normal01(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Marsaglia-Tsang squeeze, valid for shape >= 1.
inline double gamma_draw(std::mt19937_64& rng, double shape) {
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal01(rng);
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = uniform01(rng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

// Dirichlet with all parameters equal to `shape`, via normalized gammas.
inline std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t n, double shape) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
        x = gamma_draw(rng, shape);
        total += x;
    }
    for (auto& x : w) x /= total;
    return w;
}

struct BooleanInstance {
    std::uint64_t seed = 0;
    std::vector<double> p;
    PiecewiseAffineObjective obj;
};

// Boolean instance: p componentwise uniform in [0, a], K = N affine pieces
// with slopes in [-1,1]^N and intercepts in [-1,1].
inline BooleanInstance gen_pod_instance(std::uint64_t seed, std::size_t N, double a) {
    std::mt19937_64 rng(seed);
    BooleanInstance inst;
    inst.seed = seed;
    for (std::size_t i = 0; i < N; ++i) inst.p.push_back(uniform(rng, 0.0, a));
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t k = 0; k < N; ++k) {
        std::vector<double> ak;
        for (std::size_t i = 0; i < N; ++i) ak.push_back(uniform(rng, -1.0, 1.0));
        A.push_back(ak);
        b.push_back(uniform(rng, -1.0, 1.0));
    }
    inst.obj = PiecewiseAffineObjective(A, b);
    return inst;
}

inline const std::vector<double>& default_alpha() {
    static const std::vector<double> a = {1.0, 0.165, 0.4, 1.2, 1.11, 1.13, 1.15, 1.16};
    return a;
}

// Product-moment lower bounds by capped recursion: q_{ij} = alpha_2
// min(p_i, p_j), then q_I = alpha_{|I|} max over one-smaller subsets,
// everything capped at min_{i in I} p_i (the comonotone maximum, so the
// resulting target set is always nonempty).
inline std::map<std::uint32_t, double> gen_concordance_targets(
    const std::vector<double>& p, std::size_t M,
    const std::vector<double>& alpha = default_alpha()) {
    require(alpha.size() >= M, "concordance targets: alpha too short");
    const std::size_t N = p.size();
    std::map<std::uint32_t, double> q;
    if (M < 2) return q;
    auto min_p = [&](std::uint32_t mask) {
        double m = 1.0;
        for (std::size_t i = 0; i < N; ++i)
            if (mask & (1u << i)) m = std::min(m, p[i]);
        return m;
    };
    for (std::uint32_t mask = 1; mask < (1u << N); ++mask) {
        std::size_t card = static_cast<std::size_t>(__builtin_popcount(mask));
        if (card < 2 || card > M) continue;
        double v;
        if (card == 2) {
            v = alpha[1] * min_p(mask);
        } else {
            v = 0.0;
            for (std::size_t i = 0; i < N; ++i)
                if (mask & (1u << i)) v = std::max(v, q.at(mask & ~(1u << i)));
            v *= alpha[card - 1];
        }
        q[mask] = std::min(v, min_p(mask));
    }
    // masks are visited in increasing order, which enumerates subsets before
    // their supersets, so the recursion above always finds its children
    return q;
}

struct SweepRow {
    std::uint64_t seed = 0;
    std::size_t N = 0;
    std::size_t ml = 0;  // M or L
    double value = 0.0;
    double pct_improvement = 0.0;
    double runtime_ms = 0.0;
};

inline std::string to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "seed,N,M_or_L,value,pct_improvement,runtime_ms\n";
    os.precision(17);
    for (const auto& r : rows)
        os << r.seed << ',' << r.N << ',' << r.ml << ',' << r.value << ','
           << r.pct_improvement << ',' << r.runtime_ms << '\n';
    return os.str();
}

namespace detail {
inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}
}  // namespace detail

// For each instance solve the Boolean LP at M = 1..N and report percentage
// improvement over the M = 1 (marginals-only) value.  Instances whose target
// set fails the feasibility solve are replaced by reseeded ones.
inline std::vector<SweepRow> run_pod_sweep(std::size_t num_seeds, std::uint64_t seed0,
                                           std::size_t N, double a) {
    std::vector<SweepRow> rows;
    std::uint64_t next_seed = seed0;
    for (std::size_t s = 0; s < num_seeds; ++s) {
        BooleanInstance inst;
        std::map<std::uint32_t, double> targets;
        for (;;) {
            inst = gen_pod_instance(next_seed++, N, a);
            bool degenerate = false;
            for (double pi : inst.p)
                if (pi <= 1e-9 || pi >= 1.0 - 1e-9) degenerate = true;
            if (degenerate) continue;
            targets = gen_concordance_targets(inst.p, N);
            BooleanHigherOrderSpec full;
            full.p = inst.p;
            full.max_order = N;
            full.q_targets = targets;
            PiecewiseAffineObjective zero(
                std::vector<std::vector<double>>{std::vector<double>(N, 0.0)}, {0.0});
            if (compact::solve_boolean_higher_order(full, zero).bound.feasible) break;
        }
        double base = 0.0, prev = 0.0;
        for (std::size_t M = 1; M <= N; ++M) {
            BooleanHigherOrderSpec spec;
            spec.p = inst.p;
            spec.max_order = M;
            for (const auto& [mask, q] : targets)
                if (static_cast<std::size_t>(__builtin_popcount(mask)) <= M)
                    spec.q_targets[mask] = q;
            auto t0 = std::chrono::steady_clock::now();
            auto res = compact::solve_boolean_higher_order(spec, inst.obj);
            double ms = detail::ms_since(t0);
            require(res.bound.feasible, "pod sweep: unexpectedly infeasible");
            if (M == 1) {
                base = res.bound.value;
            } else {
                require(res.bound.value <= prev + 1e-8, "pod sweep: value increased with M");
            }
            prev = res.bound.value;
            double pct = std::abs(base) < 1e-12
                             ? 0.0
                             : (base - res.bound.value) * 100.0 / std::abs(base);
            rows.push_back({inst.seed, N, M, res.bound.value, pct, ms});
        }
    }
    return rows;
}

inline const std::vector<double>& moment_support_values() {
    static const std::vector<double> v = {-5, -2, 0, 3, 6, 8, 11, 14, 17, 20};
    return v;
}

struct MomentInstance {
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> marginal_probs;  // N x 10, Dirichlet(2)
    PiecewiseAffineObjective obj;
};

// Moment instance: per-coordinate distribution on the fixed ten-point
// support drawn from Dirichlet(2), K = 3 pieces with slopes in [-5,5]^N and
// intercepts in [-2,2].
inline MomentInstance gen_moment_instance(std::uint64_t seed, std::size_t N, std::size_t K = 3) {
    std::mt19937_64 rng(seed);
    MomentInstance inst;
    inst.seed = seed;
    const std::size_t S = moment_support_values().size();
    for (std::size_t i = 0; i < N; ++i) inst.marginal_probs.push_back(dirichlet(rng, S, 2.0));
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<double> ak;
        for (std::size_t i = 0; i < N; ++i) ak.push_back(uniform(rng, -5.0, 5.0));
        A.push_back(ak);
        b.push_back(uniform(rng, -2.0, 2.0));
    }
    inst.obj = PiecewiseAffineObjective(A, b);
    return inst;
}

inline MomentSpec moment_spec_from_instance(const MomentInstance& inst, std::size_t L) {
    const auto& vals = moment_support_values();
    const std::size_t N = inst.marginal_probs.size();
    MomentSpec spec;
    spec.support = ProductSupport(std::vector<std::vector<double>>(N, vals));
    // Same ambiguity set as raw powers (degree-for-degree identical span),
    // but Chebyshev polynomials of the rescaled support: raw coefficients up
    // to 20^10 and near-collinear high powers wreck LP conditioning.
    double scale = 0.0;
    for (double v : vals) scale = std::max(scale, std::abs(v));
    auto cheb = [scale](std::size_t l, double x) {
        double t = x / scale, tm = 1.0, tc = t;
        for (std::size_t d = 1; d < l; ++d) {
            double tn = 2.0 * t * tc - tm;
            tm = tc;
            tc = tn;
        }
        return l == 0 ? 1.0 : tc;
    };
    for (std::size_t l = 1; l <= L; ++l)
        spec.h.push_back([l, cheb](double x) { return cheb(l, x); });
    std::vector<double> mean(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<double> mi;
        for (std::size_t l = 1; l <= L; ++l) {
            double m = 0.0;
            for (std::size_t t = 0; t < vals.size(); ++t)
                m += cheb(l, vals[t]) * inst.marginal_probs[i][t];
            mi.push_back(m);
        }
        spec.m.push_back(mi);
        for (std::size_t t = 0; t < vals.size(); ++t)
            mean[i] += vals[t] * inst.marginal_probs[i][t];
    }
    // cross moments from pairwise independence of the generating marginals
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) spec.cross_lower[{i, j}] = mean[i] * mean[j];
    return spec;
}

// Moment-order sweep L = 1..Lmax; percentage improvement is against L = 1.
inline std::vector<SweepRow> run_moment_sweep(std::size_t num_seeds, std::uint64_t seed0,
                                              std::size_t N, std::size_t Lmax) {
    std::vector<SweepRow> rows;
    for (std::size_t s = 0; s < num_seeds; ++s) {
        auto inst = gen_moment_instance(seed0 + s, N);
        double base = 0.0, prev = 0.0;
        for (std::size_t L = 1; L <= Lmax; ++L) {
            auto spec = moment_spec_from_instance(inst, L);
            auto t0 = std::chrono::steady_clock::now();
            auto res = compact::solve_moment(spec, inst.obj);
            double ms = detail::ms_since(t0);
            require(res.bound.feasible, "moment sweep: infeasible instance");
            if (L == 1) {
                base = res.bound.value;
            } else {
                require(res.bound.value <= prev + 1e-8, "moment sweep: value increased with L");
            }
            prev = res.bound.value;
            double pct = std::abs(base) < 1e-12
                             ? 0.0
                             : (base - res.bound.value) * 100.0 / std::abs(base);
            rows.push_back({inst.seed, N, L, res.bound.value, pct, ms});
        }
    }
    return rows;
}

}  // namespace drobound::harness
