#pragma once

// Polynomial-size LP formulations for the structured ambiguity sets, the
// mixture-of-comonotone extremal extraction, the Hunter-Worsley closed form,
// and the single-LP decision-problem reformulation for the pairwise-tail set.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "drobound/comonotone.hpp"
#include "drobound/core.hpp"
#include "drobound/genbound.hpp"
#include "drobound/lp.hpp"

namespace drobound::compact {

struct CompactSolution {
    std::vector<double> lambda;                               // K
    std::vector<std::vector<std::vector<double>>> gammaUni;   // [i][t][k]
    std::map<PairKey, std::vector<double>> gammaPair;         // per key, [k]
    std::map<std::uint32_t, std::vector<double>> gammaSet;    // Boolean masks, [k]
};

struct CompactResult {
    BoundResult bound;
    CompactSolution sol;
};

// Mixture weights must form a distribution and the univariate blocks must be
// conditional marginal masses.
inline void check_solution(const CompactSolution& sol) {
    double total = std::accumulate(sol.lambda.begin(), sol.lambda.end(), 0.0);
    require(std::abs(total - 1.0) <= 1e-8, "compact: lambda does not sum to 1");
    for (double l : sol.lambda) require(l >= -1e-9, "compact: negative lambda");
    for (const auto& gi : sol.gammaUni) {
        for (std::size_t k = 0; k < sol.lambda.size(); ++k) {
            double s = 0.0;
            for (const auto& gt : gi) {
                require(gt[k] >= -1e-9, "compact: negative gamma");
                s += gt[k];
            }
            require(std::abs(s - sol.lambda[k]) <= 1e-8, "compact: gamma block sum mismatch");
        }
    }
}

// Sharp bound under fixed marginals plus lower bounds on the pair tail
// probabilities P(xi_i >= v_i, xi_j >= v_j).  One variable per lambda_k,
// per gamma_{i,k}(xi_i), and per supplied pair target and piece.
inline CompactResult solve_pod_bivariate(const PodBivariateSpec& spec,
                                         const PiecewiseAffineObjective& obj) {
    const std::size_t N = spec.marginals.size();
    const std::size_t K = obj.pieces();
    require(obj.dim() == N, "objective dimension mismatch");

    lp::LPModel m;
    m.sense = lp::Sense::Maximize;
    // lambda_k
    for (std::size_t k = 0; k < K; ++k) m.add_var(obj.b[k]);
    // gamma_{i,k}(xi_i)
    std::vector<std::size_t> uni_off(N);
    std::size_t off = K;
    for (std::size_t i = 0; i < N; ++i) {
        uni_off[i] = off;
        const auto& vals = spec.marginals[i].values;
        for (std::size_t t = 0; t < vals.size(); ++t)
            for (std::size_t k = 0; k < K; ++k) m.add_var(obj.a[k][i] * vals[t]);
        off += vals.size() * K;
    }
    auto uni = [&](std::size_t i, std::size_t t, std::size_t k) {
        return uni_off[i] + t * K + k;
    };
    // gamma_{i,j,k} per supplied target
    std::map<PairKey, std::size_t> pair_off;
    for (const auto& [key, tgt] : spec.pair_targets) {
        pair_off[key] = off;
        for (std::size_t k = 0; k < K; ++k) m.add_var(0.0);
        off += K;
    }

    std::size_t nv = off;
    auto row = [&]() { return std::vector<double>(nv, 0.0); };

    {
        auto r = row();
        for (std::size_t k = 0; k < K; ++k) r[k] = 1.0;
        m.add_row(r, lp::RowSense::EQ, 1.0);
    }
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t t = 0; t < spec.marginals[i].size(); ++t) {
            auto r = row();
            for (std::size_t k = 0; k < K; ++k) r[uni(i, t, k)] = 1.0;
            m.add_row(r, lp::RowSense::EQ, spec.marginals[i].probs[t]);
        }
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < K; ++k) {
            auto r = row();
            for (std::size_t t = 0; t < spec.marginals[i].size(); ++t) r[uni(i, t, k)] = 1.0;
            r[k] = -1.0;
            m.add_row(r, lp::RowSense::EQ, 0.0);
        }
    for (const auto& [key, tgt] : spec.pair_targets) {
        for (std::size_t k = 0; k < K; ++k) {
            // gamma_pair <= P(xi_i >= v_i | piece k) and same for j
            for (int side = 0; side < 2; ++side) {
                std::size_t i = side == 0 ? key.i : key.j;
                double v = side == 0 ? key.vi : key.vj;
                auto r = row();
                r[pair_off.at(key) + k] = 1.0;
                const auto& vals = spec.marginals[i].values;
                for (std::size_t t = 0; t < vals.size(); ++t)
                    if (vals[t] >= v) r[uni(i, t, k)] = -1.0;
                m.add_row(r, lp::RowSense::LE, 0.0);
            }
        }
        auto r = row();
        for (std::size_t k = 0; k < K; ++k) r[pair_off.at(key) + k] = 1.0;
        m.add_row(r, lp::RowSense::GE, tgt);
    }

    auto lpsol = lp::solve_lp(m);
    CompactResult out;
    if (lpsol.status != lp::Status::Optimal) {
        out.bound.feasible = false;
        return out;
    }
    out.bound.feasible = true;
    out.bound.value = lpsol.objective;
    out.sol.lambda.assign(lpsol.primal.begin(), lpsol.primal.begin() + K);
    out.sol.gammaUni.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        out.sol.gammaUni[i].resize(spec.marginals[i].size(), std::vector<double>(K));
        for (std::size_t t = 0; t < spec.marginals[i].size(); ++t)
            for (std::size_t k = 0; k < K; ++k)
                out.sol.gammaUni[i][t][k] = lpsol.primal[uni(i, t, k)];
    }
    for (const auto& [key, o] : pair_off) {
        auto& g = out.sol.gammaPair[key];
        g.resize(K);
        for (std::size_t k = 0; k < K; ++k) g[k] = lpsol.primal[o + k];
    }
    return out;
}

// Boolean variables with marginal probabilities p_i and lower bounds q_I on
// E[prod_{i in I} xi_i] for subsets 1 < |I| <= M.
inline CompactResult solve_boolean_higher_order(const BooleanHigherOrderSpec& spec,
                                                const PiecewiseAffineObjective& obj) {
    const std::size_t N = spec.p.size();
    const std::size_t K = obj.pieces();
    require(obj.dim() == N, "objective dimension mismatch");

    lp::LPModel m;
    m.sense = lp::Sense::Maximize;
    for (std::size_t k = 0; k < K; ++k) m.add_var(obj.b[k]);
    auto uni = [&](std::size_t i, std::size_t k) { return K + i * K + k; };
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < K; ++k) m.add_var(obj.a[k][i]);
    std::map<std::uint32_t, std::size_t> set_off;
    std::size_t off = K + N * K;
    for (const auto& [mask, q] : spec.q_targets) {
        set_off[mask] = off;
        for (std::size_t k = 0; k < K; ++k) m.add_var(0.0);
        off += K;
    }
    std::size_t nv = off;
    auto row = [&]() { return std::vector<double>(nv, 0.0); };

    {
        auto r = row();
        for (std::size_t k = 0; k < K; ++k) r[k] = 1.0;
        m.add_row(r, lp::RowSense::EQ, 1.0);
    }
    for (std::size_t i = 0; i < N; ++i) {
        auto r = row();
        for (std::size_t k = 0; k < K; ++k) r[uni(i, k)] = 1.0;
        m.add_row(r, lp::RowSense::EQ, spec.p[i]);
    }
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < K; ++k) {
            auto r = row();
            r[uni(i, k)] = 1.0;
            r[k] = -1.0;
            m.add_row(r, lp::RowSense::LE, 0.0);
        }
    for (const auto& [mask, q] : spec.q_targets) {
        for (std::size_t k = 0; k < K; ++k) {
            auto r = row();
            r[set_off.at(mask) + k] = 1.0;
            r[k] = -1.0;
            m.add_row(r, lp::RowSense::LE, 0.0);
            for (std::size_t i = 0; i < N; ++i)
                if (mask & (1u << i)) {
                    auto r2 = row();
                    r2[set_off.at(mask) + k] = 1.0;
                    r2[uni(i, k)] = -1.0;
                    m.add_row(r2, lp::RowSense::LE, 0.0);
                }
        }
        auto r = row();
        for (std::size_t k = 0; k < K; ++k) r[set_off.at(mask) + k] = 1.0;
        m.add_row(r, lp::RowSense::GE, q);
    }

    auto lpsol = lp::solve_lp(m);
    CompactResult out;
    if (lpsol.status != lp::Status::Optimal) {
        out.bound.feasible = false;
        return out;
    }
    out.bound.feasible = true;
    out.bound.value = lpsol.objective;
    out.sol.lambda.assign(lpsol.primal.begin(), lpsol.primal.begin() + K);
    out.sol.gammaUni.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        // Boolean gammaUni holds the conditional mass at one, omitting the
        // implied mass at zero; extraction rebuilds the two-point marginal.
        out.sol.gammaUni[i].assign(1, std::vector<double>(K));
        for (std::size_t k = 0; k < K; ++k)
            out.sol.gammaUni[i][0][k] = lpsol.primal[uni(i, k)];
    }
    for (const auto& [mask, o] : set_off) {
        auto& g = out.sol.gammaSet[mask];
        g.resize(K);
        for (std::size_t k = 0; k < K; ++k) g[k] = lpsol.primal[o + k];
    }
    return out;
}

// Pieces {sum_{i in I} xi_i : |I| <= B}; on Boolean points the maximum piece
// value equals min(sum_i xi_i, B).
inline PiecewiseAffineObjective expand_rank_objective(std::size_t N, std::size_t B,
                                                      std::size_t piece_cap = 100000) {
    require(B >= 1 && B <= N, "rank objective: need 1 <= B <= N");
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<std::uint32_t> frontier = {0u};
    std::set<std::uint32_t> seen = {0u};
    a.push_back(std::vector<double>(N, 0.0));
    b.push_back(0.0);
    for (std::size_t size = 1; size <= B; ++size) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t mask : frontier)
            for (std::size_t i = 0; i < N; ++i) {
                std::uint32_t ext = mask | (1u << i);
                if (ext == mask || !seen.insert(ext).second) continue;
                next.push_back(ext);
                std::vector<double> coeff(N, 0.0);
                for (std::size_t t = 0; t < N; ++t)
                    if (ext & (1u << t)) coeff[t] = 1.0;
                a.push_back(std::move(coeff));
                b.push_back(0.0);
                require(a.size() <= piece_cap, "rank objective: piece cap exceeded");
            }
        frontier = std::move(next);
    }
    return PiecewiseAffineObjective(a, b);
}

// Fixed univariate moments E[h_l(xi_i)] = m_{i,l} plus cross-moment lower
// bounds E[xi_i xi_j] >= Q_ij.  The pair block holds joint masses, linked to
// the univariate block by two marginalization identities per piece.
inline CompactResult solve_moment(const MomentSpec& spec, const PiecewiseAffineObjective& obj) {
    const std::size_t N = spec.support.dim();
    const std::size_t K = obj.pieces();
    const std::size_t L = spec.num_moments();
    require(obj.dim() == N, "objective dimension mismatch");

    lp::LPModel m;
    m.sense = lp::Sense::Maximize;
    for (std::size_t k = 0; k < K; ++k) m.add_var(obj.b[k]);
    std::vector<std::size_t> uni_off(N);
    std::size_t off = K;
    for (std::size_t i = 0; i < N; ++i) {
        uni_off[i] = off;
        const auto& vals = spec.support.values(i);
        for (std::size_t t = 0; t < vals.size(); ++t)
            for (std::size_t k = 0; k < K; ++k) m.add_var(obj.a[k][i] * vals[t]);
        off += vals.size() * K;
    }
    auto uni = [&](std::size_t i, std::size_t t, std::size_t k) {
        return uni_off[i] + t * K + k;
    };
    // joint pair masses, full grid per constrained pair
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_off;
    for (const auto& [ij, Q] : spec.cross_lower) {
        pair_off[ij] = off;
        std::size_t cells = spec.support.values(ij.first).size() *
                            spec.support.values(ij.second).size();
        for (std::size_t c = 0; c < cells * K; ++c) m.add_var(0.0);
        off += cells * K;
    }
    auto pair_var = [&](const std::pair<std::size_t, std::size_t>& ij, std::size_t ti,
                        std::size_t tj, std::size_t k) {
        std::size_t sj = spec.support.values(ij.second).size();
        return pair_off.at(ij) + (ti * sj + tj) * K + k;
    };
    std::size_t nv = off;
    auto row = [&]() { return std::vector<double>(nv, 0.0); };

    {
        auto r = row();
        for (std::size_t k = 0; k < K; ++k) r[k] = 1.0;
        m.add_row(r, lp::RowSense::EQ, 1.0);
    }
    for (std::size_t i = 0; i < N; ++i) {
        const auto& vals = spec.support.values(i);
        // Keep only moment rows independent of normalization and of each
        // other: on an S-point support at most S-1 moments bind, and a
        // dependent (consistent) equality row only destabilizes the solve.
        std::vector<std::pair<std::vector<double>, double>> ortho;  // (vector, rhs)
        {
            std::vector<double> ones(vals.size(), 1.0);
            double nn = std::sqrt(static_cast<double>(vals.size()));
            for (auto& x : ones) x /= nn;
            ortho.push_back({ones, 1.0 / nn});  // normalization row, rhs 1
        }
        for (std::size_t l = 0; l < L; ++l) {
            std::vector<double> v(vals.size());
            double rhs = spec.m[i][l];
            double norm0 = 0.0;
            for (std::size_t t = 0; t < vals.size(); ++t) {
                v[t] = spec.basis(l, vals[t]);
                norm0 += v[t] * v[t];
            }
            norm0 = std::sqrt(norm0);
            for (const auto& [u2, beta] : ortho) {
                double dot = std::inner_product(v.begin(), v.end(), u2.begin(), 0.0);
                for (std::size_t t = 0; t < v.size(); ++t) v[t] -= dot * u2[t];
                rhs -= dot * beta;
            }
            double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
            if (norm <= 1e-9 * (1.0 + norm0)) {
                if (std::abs(rhs) > 1e-7) {  // dependent row, contradictory rhs
                    CompactResult bad;
                    bad.bound.feasible = false;
                    return bad;
                }
                continue;
            }
            for (auto& x : v) x /= norm;
            rhs /= norm;
            ortho.push_back({v, rhs});

            // Emit the orthonormalized row rather than the raw one: the
            // feasible set is identical and the conditioning far better.
            auto r = row();
            for (std::size_t t = 0; t < vals.size(); ++t)
                for (std::size_t k = 0; k < K; ++k) r[uni(i, t, k)] = v[t];
            m.add_row(r, lp::RowSense::EQ, rhs);
        }
        for (std::size_t k = 0; k < K; ++k) {
            auto r = row();
            for (std::size_t t = 0; t < vals.size(); ++t) r[uni(i, t, k)] = 1.0;
            r[k] = -1.0;
            m.add_row(r, lp::RowSense::EQ, 0.0);
        }
    }
    for (const auto& [ij, Q] : spec.cross_lower) {
        auto [i, j] = ij;
        const auto& vi = spec.support.values(i);
        const auto& vj = spec.support.values(j);
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t tj = 0; tj < vj.size(); ++tj) {
                auto r = row();
                for (std::size_t ti = 0; ti < vi.size(); ++ti) r[pair_var(ij, ti, tj, k)] = 1.0;
                r[uni(j, tj, k)] = -1.0;
                m.add_row(r, lp::RowSense::EQ, 0.0);
            }
            for (std::size_t ti = 0; ti < vi.size(); ++ti) {
                auto r = row();
                for (std::size_t tj = 0; tj < vj.size(); ++tj) r[pair_var(ij, ti, tj, k)] = 1.0;
                r[uni(i, ti, k)] = -1.0;
                m.add_row(r, lp::RowSense::EQ, 0.0);
            }
        }
        auto r = row();
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t ti = 0; ti < vi.size(); ++ti)
                for (std::size_t tj = 0; tj < vj.size(); ++tj)
                    r[pair_var(ij, ti, tj, k)] = vi[ti] * vj[tj];
        m.add_row(r, lp::RowSense::GE, Q);
    }

    auto lpsol = lp::solve_lp(m);
    CompactResult out;
    if (lpsol.status != lp::Status::Optimal) {
        out.bound.feasible = false;
        return out;
    }
    out.bound.feasible = true;
    out.bound.value = lpsol.objective;
    out.sol.lambda.assign(lpsol.primal.begin(), lpsol.primal.begin() + K);
    out.sol.gammaUni.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const auto& vals = spec.support.values(i);
        out.sol.gammaUni[i].resize(vals.size(), std::vector<double>(K));
        for (std::size_t t = 0; t < vals.size(); ++t)
            for (std::size_t k = 0; k < K; ++k)
                out.sol.gammaUni[i][t][k] = lpsol.primal[uni(i, t, k)];
    }
    for (const auto& [ij, Q] : spec.cross_lower) {
        const auto& vi = spec.support.values(ij.first);
        const auto& vj = spec.support.values(ij.second);
        for (std::size_t ti = 0; ti < vi.size(); ++ti)
            for (std::size_t tj = 0; tj < vj.size(); ++tj) {
                PairKey key{ij.first, ij.second, vi[ti], vj[tj]};
                auto& g = out.sol.gammaPair[key];
                g.resize(K);
                for (std::size_t k = 0; k < K; ++k) g[k] = lpsol.primal[pair_var(ij, ti, tj, k)];
            }
    }
    return out;
}

// Mixture over pieces of comonotone couplings of the conditional marginals
// gamma_{i,k}(.) / lambda_k.  Components with negligible weight are dropped.
inline JointDistribution extract_extremal(const AmbiguitySpec& spec, const CompactSolution& sol) {
    ProductSupport storage;
    const ProductSupport& sup = spec_support(spec, storage);
    const std::size_t N = sup.dim();
    const std::size_t K = sol.lambda.size();
    require(sol.gammaUni.size() == N, "extract: gamma block count mismatch");

    JointDistribution out;
    out.support = sup;
    for (std::size_t k = 0; k < K; ++k) {
        double lk = sol.lambda[k];
        if (lk <= 1e-10) continue;
        std::vector<DiscreteMarginal> cond;
        for (std::size_t i = 0; i < N; ++i) {
            const auto& vals = sup.values(i);
            std::vector<double> probs(vals.size(), 0.0);
            if (sol.gammaUni[i].size() == vals.size()) {
                for (std::size_t t = 0; t < vals.size(); ++t)
                    probs[t] = std::max(0.0, sol.gammaUni[i][t][k] / lk);
            } else {
                // Boolean layout: stored mass is the conditional P(xi_i = 1)
                require(vals.size() == 2 && sol.gammaUni[i].size() == 1,
                        "extract: unexpected gamma layout");
                probs[1] = std::min(1.0, std::max(0.0, sol.gammaUni[i][0][k] / lk));
                probs[0] = 1.0 - probs[1];
            }
            double total = std::accumulate(probs.begin(), probs.end(), 0.0);
            require(std::abs(total - 1.0) <= 1e-6, "extract: conditional marginal not normalized");
            for (auto& q : probs) q /= total;
            cond.emplace_back(vals, probs);
        }
        auto como = comonotone_coupling(cond);
        for (const auto& [xi, w] : como.mass) out.mass[xi] += lk * w;
    }
    out.validate();
    return out;
}

// min(1, sum_i p_i - max spanning tree weight) with edge weights pPair.
inline double hunter_worsley(const std::vector<double>& p,
                             const std::map<std::pair<std::size_t, std::size_t>, double>& pPair) {
    const std::size_t N = p.size();
    require(N >= 1, "hunter_worsley: empty p");
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (N == 1) return std::min(1.0, total);

    struct Edge {
        double w;
        std::size_t i, j;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) {
            auto it = pPair.find({i, j});
            edges.push_back({it == pPair.end() ? 0.0 : it->second, i, j});
        }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.w > b.w; });
    std::vector<std::size_t> parent(N);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    double tree = 0.0;
    std::size_t used = 0;
    for (const auto& e : edges) {
        auto a = find(e.i), b = find(e.j);
        if (a == b) continue;
        parent[a] = b;
        tree += e.w;
        if (++used == N - 1) break;
    }
    return std::min(1.0, total - tree);
}

struct DroLpResult {
    std::vector<double> x;
    double value = 0.0;
};

// Single-LP reformulation of min_x sup_P E[max_k(a_k(x)'xi + b_k(x))] over
// the pairwise-tail ambiguity set, obtained by dualizing the inner LP.
// Variables: x, t, y_i(xi_i), l_{ij}(xi_i,xi_j), h_{ijk}, q_{ijk}, g_{ik}.
inline DroLpResult solve_dual_dro(const PodBivariateSpec& spec, const genbound::Polyhedron& X,
                                  const genbound::DecisionAffinePieces& pieces) {
    const std::size_t N = spec.marginals.size();
    const std::size_t n = X.dim();
    const std::size_t K = pieces.a0.size();
    require(K > 0, "dual dro: no pieces");

    std::vector<PairKey> keys;
    for (const auto& [key, tgt] : spec.pair_targets) keys.push_back(key);

    lp::LPModel m;
    m.sense = lp::Sense::Minimize;
    for (std::size_t t = 0; t < n; ++t) {
        double lo = X.lo.empty() ? -lp::kInf : X.lo[t];
        double up = X.up.empty() ? lp::kInf : X.up[t];
        m.add_var(0.0, lo, up);
    }
    const std::size_t vt = n;
    m.add_var(1.0, -lp::kInf, lp::kInf);  // t
    std::vector<std::size_t> y_off(N);
    std::size_t off = n + 1;
    for (std::size_t i = 0; i < N; ++i) {
        y_off[i] = off;
        for (std::size_t t = 0; t < spec.marginals[i].size(); ++t)
            m.add_var(spec.marginals[i].probs[t], -lp::kInf, lp::kInf);
        off += spec.marginals[i].size();
    }
    std::map<PairKey, std::size_t> l_off, h_off, q_off;
    for (const auto& key : keys) {
        l_off[key] = off++;
        m.add_var(-spec.pair_targets.at(key));
    }
    for (const auto& key : keys) {
        h_off[key] = off;
        for (std::size_t k = 0; k < K; ++k) m.add_var(0.0);
        off += K;
    }
    for (const auto& key : keys) {
        q_off[key] = off;
        for (std::size_t k = 0; k < K; ++k) m.add_var(0.0);
        off += K;
    }
    const std::size_t g_off = off;
    for (std::size_t c = 0; c < N * K; ++c) m.add_var(0.0, -lp::kInf, lp::kInf);
    off += N * K;
    std::size_t nv = off;
    auto g_var = [&](std::size_t i, std::size_t k) { return g_off + i * K + k; };
    auto row = [&]() { return std::vector<double>(nv, 0.0); };

    for (std::size_t r = 0; r < X.A.size(); ++r) {
        auto rr = row();
        for (std::size_t t = 0; t < n; ++t) rr[t] = X.A[r][t];
        m.add_row(rr, lp::RowSense::LE, X.b[r]);
    }
    // t - sum_i g_ik - bx_k . x >= b0_k
    for (std::size_t k = 0; k < K; ++k) {
        auto r = row();
        r[vt] = 1.0;
        for (std::size_t i = 0; i < N; ++i) r[g_var(i, k)] = -1.0;
        for (std::size_t t = 0; t < n; ++t) r[t] = -pieces.bx[k][t];
        m.add_row(r, lp::RowSense::GE, pieces.b0[k]);
    }
    // h + q - l >= 0
    for (const auto& key : keys)
        for (std::size_t k = 0; k < K; ++k) {
            auto r = row();
            r[h_off.at(key) + k] = 1.0;
            r[q_off.at(key) + k] = 1.0;
            r[l_off.at(key)] = -1.0;
            m.add_row(r, lp::RowSense::GE, 0.0);
        }
    // y_i(xi_i) + g_ik - cumulative h/q sums - a_{i,k}(x) xi_i >= 0
    for (std::size_t i = 0; i < N; ++i) {
        const auto& vals = spec.marginals[i].values;
        for (std::size_t t = 0; t < vals.size(); ++t)
            for (std::size_t k = 0; k < K; ++k) {
                auto r = row();
                r[y_off[i] + t] = 1.0;
                r[g_var(i, k)] = 1.0;
                for (const auto& key : keys) {
                    if (key.i == i && key.vi <= vals[t]) r[h_off.at(key) + k] -= 1.0;
                    if (key.j == i && key.vj <= vals[t]) r[q_off.at(key) + k] -= 1.0;
                }
                for (std::size_t c = 0; c < n; ++c) r[c] = -pieces.ax[k][i][c] * vals[t];
                m.add_row(r, lp::RowSense::GE, pieces.a0[k][i] * vals[t]);
            }
    }

    auto lpsol = lp::solve_lp(m);
    if (lpsol.status == lp::Status::Infeasible) throw std::runtime_error("dual dro: X is empty");
    if (lpsol.status != lp::Status::Optimal) throw std::runtime_error("dual dro: LP failed");
    DroLpResult out;
    out.x.assign(lpsol.primal.begin(), lpsol.primal.begin() + n);
    out.value = lpsol.objective;
    return out;
}

}  // namespace drobound::compact
