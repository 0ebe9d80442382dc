#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// Core domain types shared by all bound solvers: product supports, discrete
// marginals, piecewise affine objectives, ambiguity set descriptions and
// joint distributions over a finite lattice.

namespace drobound {

constexpr double kProbTol = 1e-9;          // normalization tolerance
constexpr std::uint64_t kLatticeCap = 1000000;  // max lattice points enumerated

using LatticePoint = std::vector<double>;

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Cartesian product of per-dimension strictly increasing finite value sets.
class ProductSupport {
  public:
    ProductSupport() = default;
    explicit ProductSupport(std::vector<std::vector<double>> dims) : dims_(std::move(dims)) {
        require(!dims_.empty(), "support: needs at least one dimension");
        for (const auto& d : dims_) {
            require(!d.empty(), "support: empty dimension");
            for (std::size_t v = 0; v < d.size(); ++v) {
                require(std::isfinite(d[v]), "support: non-finite value");
                if (v > 0) require(d[v] > d[v - 1], "support: values not strictly increasing");
            }
        }
    }

    std::size_t dim() const { return dims_.size(); }
    const std::vector<double>& values(std::size_t i) const { return dims_[i]; }
    const std::vector<std::vector<double>>& dims() const { return dims_; }

    // Total number of lattice points; throws above the configured cap.
    std::uint64_t size(std::uint64_t cap = kLatticeCap) const {
        std::uint64_t n = 1;
        for (const auto& d : dims_) {
            n *= d.size();
            require(n <= cap, "support: lattice size exceeds cap");
        }
        return n;
    }

    bool contains(const LatticePoint& xi) const {
        if (xi.size() != dims_.size()) return false;
        for (std::size_t i = 0; i < dims_.size(); ++i)
            if (!std::binary_search(dims_[i].begin(), dims_[i].end(), xi[i])) return false;
        return true;
    }

    LatticePoint min_point() const {
        LatticePoint p(dims_.size());
        for (std::size_t i = 0; i < dims_.size(); ++i) p[i] = dims_[i].front();
        return p;
    }
    LatticePoint max_point() const {
        LatticePoint p(dims_.size());
        for (std::size_t i = 0; i < dims_.size(); ++i) p[i] = dims_[i].back();
        return p;
    }

    // Point from mixed-radix index vector.
    LatticePoint point(const std::vector<std::size_t>& idx) const {
        LatticePoint p(dims_.size());
        for (std::size_t i = 0; i < dims_.size(); ++i) p[i] = dims_[i][idx[i]];
        return p;
    }

    // Enumerate all lattice points in mixed-radix order, last dimension fastest.
    template <typename Fn>
    void for_each(Fn&& fn, std::uint64_t cap = kLatticeCap) const {
        size(cap);
        std::vector<std::size_t> idx(dims_.size(), 0);
        LatticePoint p = min_point();
        for (;;) {
            fn(static_cast<const LatticePoint&>(p));
            std::size_t i = dims_.size();
            for (;;) {
                if (i == 0) return;
                --i;
                if (++idx[i] < dims_[i].size()) {
                    p[i] = dims_[i][idx[i]];
                    break;
                }
                idx[i] = 0;
                p[i] = dims_[i][0];
            }
        }
    }

    bool operator==(const ProductSupport& o) const { return dims_ == o.dims_; }

  private:
    std::vector<std::vector<double>> dims_;
};

// A univariate marginal: strictly increasing values with strictly positive
// probabilities summing to one. Zero-probability atoms are pruned at ingestion.
struct DiscreteMarginal {
    std::vector<double> values;
    std::vector<double> probs;

    DiscreteMarginal() = default;
    DiscreteMarginal(std::vector<double> vals, std::vector<double> ps) {
        require(vals.size() == ps.size(), "marginal: values/probs size mismatch");
        require(!vals.empty(), "marginal: empty");
        double total = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            require(std::isfinite(vals[i]) && std::isfinite(ps[i]), "marginal: non-finite entry");
            require(ps[i] >= 0.0, "marginal: negative probability");
            if (i > 0) require(vals[i] > vals[i - 1], "marginal: values not strictly increasing");
            total += ps[i];
            if (ps[i] > 0.0) {
                values.push_back(vals[i]);
                probs.push_back(ps[i]);
            }
        }
        require(std::abs(total - 1.0) <= kProbTol, "marginal: probabilities do not sum to 1");
        require(!values.empty(), "marginal: all atoms have zero probability");
    }

    std::size_t size() const { return values.size(); }

    double mean() const {
        double m = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probs[i];
        return m;
    }

    // P(xi >= v), weak inequality.
    double tail_geq(double v) const {
        double t = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] >= v) t += probs[i];
        return t;
    }

    // P(xi <= v), weak inequality.
    double cdf_leq(double v) const {
        double t = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] <= v) t += probs[i];
        return t;
    }
};

inline ProductSupport support_of(const std::vector<DiscreteMarginal>& marginals) {
    std::vector<std::vector<double>> dims;
    dims.reserve(marginals.size());
    for (const auto& m : marginals) dims.push_back(m.values);
    return ProductSupport(std::move(dims));
}

// f(xi) = max_k (a_k' xi + b_k), with a stored as K rows of length N.
struct PiecewiseAffineObjective {
    std::vector<std::vector<double>> a;  // K x N
    std::vector<double> b;               // K

    PiecewiseAffineObjective() = default;
    PiecewiseAffineObjective(std::vector<std::vector<double>> aa, std::vector<double> bb)
        : a(std::move(aa)), b(std::move(bb)) {
        require(!a.empty() && a.size() == b.size(), "objective: inconsistent piece count");
        for (const auto& row : a) require(row.size() == a.front().size(), "objective: ragged rows");
    }

    std::size_t pieces() const { return a.size(); }
    std::size_t dim() const { return a.front().size(); }

    double piece_value(std::size_t k, const LatticePoint& xi) const {
        double v = b[k];
        for (std::size_t i = 0; i < xi.size(); ++i) v += a[k][i] * xi[i];
        return v;
    }
};

// value = max_k, argmax = smallest maximizing k (1-based).
struct ObjectiveEval {
    double value;
    std::size_t argmax_index;
};

inline ObjectiveEval evaluate_objective(const PiecewiseAffineObjective& obj, const LatticePoint& xi) {
    require(xi.size() == obj.dim(), "evaluate_objective: dimension mismatch");
    double best = obj.piece_value(0, xi);
    std::size_t best_k = 1;
    for (std::size_t k = 1; k < obj.pieces(); ++k) {
        double v = obj.piece_value(k, xi);
        if (v > best) {
            best = v;
            best_k = k + 1;
        }
    }
    return {best, best_k};
}

// Black-box expectation constraint E[f(xi)] <= gamma with f submodular.
struct SubmodularConstraint {
    std::function<double(const LatticePoint&)> f;
    double gamma;
};

struct GenericSubmodularSpec {
    ProductSupport support;
    std::vector<SubmodularConstraint> constraints;
    // Set when the spec was built from fixed marginals (Frechet encoding);
    // used for seed cuts and the comonotone feasibility criterion.
    std::vector<DiscreteMarginal> fixed_marginals;
};

struct PairKey {
    std::size_t i, j;     // i < j
    double vi, vj;        // thresholds
    bool operator<(const PairKey& o) const {
        return std::tie(i, j, vi, vj) < std::tie(o.i, o.j, o.vi, o.vj);
    }
};

struct PodBivariateSpec {
    std::vector<DiscreteMarginal> marginals;
    // Lower bounds on P(xi_i >= vi, xi_j >= vj). Empty map = pure Frechet set.
    std::map<PairKey, double> pair_targets;

    ProductSupport support() const { return support_of(marginals); }

    // Full grid of product-of-tails targets (the POD default).
    static std::map<PairKey, double> default_targets(const std::vector<DiscreteMarginal>& ms) {
        std::map<PairKey, double> t;
        for (std::size_t i = 0; i < ms.size(); ++i)
            for (std::size_t j = i + 1; j < ms.size(); ++j)
                for (double vi : ms[i].values)
                    for (double vj : ms[j].values)
                        t[{i, j, vi, vj}] = ms[i].tail_geq(vi) * ms[j].tail_geq(vj);
        return t;
    }
};

inline PodBivariateSpec make_pod_spec(std::vector<DiscreteMarginal> marginals) {
    PodBivariateSpec s;
    s.pair_targets = PodBivariateSpec::default_targets(marginals);
    s.marginals = std::move(marginals);
    return s;
}

// Subsets are bitmasks over [N]; q_targets maps subsets I with 1 < |I| <= M
// to lower bounds on E[prod_{i in I} xi_i].
struct BooleanHigherOrderSpec {
    std::vector<double> p;  // P(xi_i = 1), each in (0,1)
    std::size_t max_order = 1;
    std::map<std::uint32_t, double> q_targets;

    ProductSupport support() const {
        std::vector<std::vector<double>> dims(p.size(), {0.0, 1.0});
        return ProductSupport(std::move(dims));
    }

    static std::map<std::uint32_t, double> default_targets(const std::vector<double>& p,
                                                           std::size_t max_order) {
        std::map<std::uint32_t, double> t;
        const std::size_t n = p.size();
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            std::size_t card = static_cast<std::size_t>(__builtin_popcount(mask));
            if (card < 2 || card > max_order) continue;
            double q = 1.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) q *= p[i];
            t[mask] = q;
        }
        return t;
    }
};

inline BooleanHigherOrderSpec make_boolean_spec(std::vector<double> p, std::size_t max_order) {
    BooleanHigherOrderSpec s;
    s.q_targets = BooleanHigherOrderSpec::default_targets(p, max_order);
    s.p = std::move(p);
    s.max_order = max_order;
    return s;
}

// Marginal moment constraints E[h_l(xi_i)] = m_{i,l} plus cross moment lower
// bounds E[xi_i xi_j] >= Q_{ij}. By default h_l(x) = x^l.
struct MomentSpec {
    ProductSupport support;
    std::vector<std::vector<double>> m;  // N x L
    std::map<std::pair<std::size_t, std::size_t>, double> cross_lower;  // (i<j) -> Q_ij
    // Optional univariate basis functions; h[l](x). Empty = raw powers x^(l+1).
    std::vector<std::function<double(double)>> h;

    std::size_t num_moments() const { return m.empty() ? 0 : m.front().size(); }

    double basis(std::size_t l, double x) const {
        if (!h.empty()) return h[l](x);
        return std::pow(x, static_cast<double>(l + 1));
    }
};

using AmbiguitySpec = std::variant<GenericSubmodularSpec, PodBivariateSpec,
                                   BooleanHigherOrderSpec, MomentSpec>;

// Sparse probability mass function over lattice points of a product support.
struct JointDistribution {
    ProductSupport support;
    std::map<LatticePoint, double> mass;

    void validate() const {
        double total = 0.0;
        for (const auto& [xi, p] : mass) {
            require(p >= -kProbTol, "joint: negative mass");
            require(support.contains(xi), "joint: point off lattice");
            total += p;
        }
        require(std::abs(total - 1.0) <= kProbTol, "joint: mass does not sum to 1");
    }

    double prob(const LatticePoint& xi) const {
        auto it = mass.find(xi);
        return it == mass.end() ? 0.0 : it->second;
    }

    DiscreteMarginal marginal(std::size_t i) const {
        std::map<double, double> acc;
        for (const auto& [xi, p] : mass) acc[xi[i]] += p;
        std::vector<double> vals, ps;
        for (const auto& [v, p] : acc) {
            vals.push_back(v);
            ps.push_back(p);
        }
        return DiscreteMarginal(std::move(vals), std::move(ps));
    }
};

// Dual variables of the exponential LP: y0 free, y_j >= 0 per constraint.
struct DualSolution {
    double y0 = 0.0;
    std::vector<double> y;
};

struct BoundResult {
    double value = 0.0;
    bool feasible = true;
    std::optional<DualSolution> dual;
    std::vector<LatticePoint> cuts;            // generated separation points
    std::optional<JointDistribution> extremal;
};

// Structural validation of an ambiguity spec. Report-only: distributional
// feasibility is decided by the feasibility test / LP status, not here.
struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_spec(const AmbiguitySpec& spec) {
    ValidationReport rep;
    auto fail = [&rep](const std::string& s) { rep.violations.push_back(s); };

    if (const auto* g = std::get_if<GenericSubmodularSpec>(&spec)) {
        try {
            g->support.size();
        } catch (const std::exception& e) {
            fail(e.what());
        }
        for (std::size_t j = 0; j < g->constraints.size(); ++j) {
            if (!g->constraints[j].f) fail("constraint " + std::to_string(j) + ": missing oracle");
            if (!std::isfinite(g->constraints[j].gamma))
                fail("constraint " + std::to_string(j) + ": non-finite gamma");
        }
    } else if (const auto* pod = std::get_if<PodBivariateSpec>(&spec)) {
        if (pod->marginals.empty()) fail("pod: no marginals");
        for (std::size_t i = 0; i < pod->marginals.size(); ++i) {
            double total = 0.0;
            for (double p : pod->marginals[i].probs) total += p;
            if (std::abs(total - 1.0) > kProbTol)
                fail("pod: marginal " + std::to_string(i) + " not normalized");
        }
        for (const auto& [key, target] : pod->pair_targets) {
            if (key.i >= key.j || key.j >= pod->marginals.size()) {
                fail("pod: bad pair index");
                continue;
            }
            double cap = std::min(pod->marginals[key.i].tail_geq(key.vi),
                                  pod->marginals[key.j].tail_geq(key.vj));
            if (target > cap + kProbTol)
                fail("pod: pair target exceeds Frechet cap min of tails");
        }
    } else if (const auto* bo = std::get_if<BooleanHigherOrderSpec>(&spec)) {
        if (bo->p.empty()) fail("boolean: empty p");
        if (bo->p.size() > 31) fail("boolean: dimension too large for bitmask indexing");
        for (double pi : bo->p)
            if (!(pi > 0.0 && pi < 1.0)) fail("boolean: p_i outside (0,1)");
        for (const auto& [mask, q] : bo->q_targets) {
            std::size_t card = static_cast<std::size_t>(__builtin_popcount(mask));
            if (card < 2 || card > bo->max_order) fail("boolean: target order outside (1, M]");
            double cap = 1.0;
            for (std::size_t i = 0; i < bo->p.size(); ++i)
                if (mask & (1u << i)) cap = std::min(cap, bo->p[i]);
            if (q > cap + kProbTol) fail("boolean: q exceeds Frechet cap min_i p_i");
        }
    } else if (const auto* mo = std::get_if<MomentSpec>(&spec)) {
        const std::size_t n = mo->support.dim();
        if (mo->m.size() != n) fail("moment: m row count != N");
        for (std::size_t i = 0; i < mo->m.size() && i < n; ++i) {
            if (mo->m[i].size() != mo->num_moments()) fail("moment: ragged m");
            if (mo->h.empty() && !mo->m[i].empty()) {
                double lo = mo->support.values(i).front(), hi = mo->support.values(i).back();
                if (mo->m[i][0] < lo - kProbTol || mo->m[i][0] > hi + kProbTol)
                    fail("moment: mean m_{i,1} outside support range");
            }
        }
        if (!mo->h.empty() && mo->h.size() != mo->num_moments()) fail("moment: h size != L");
        for (const auto& [ij, q] : mo->cross_lower) {
            if (ij.first >= ij.second || ij.second >= n) fail("moment: bad cross pair index");
            (void)q;
        }
    }
    return rep;
}

inline const ProductSupport& spec_support(const AmbiguitySpec& spec, ProductSupport& storage) {
    if (const auto* g = std::get_if<GenericSubmodularSpec>(&spec)) return g->support;
    if (const auto* pod = std::get_if<PodBivariateSpec>(&spec)) {
        storage = pod->support();
        return storage;
    }
    if (const auto* bo = std::get_if<BooleanHigherOrderSpec>(&spec)) {
        storage = bo->support();
        return storage;
    }
    return std::get<MomentSpec>(spec).support;
}

}  // namespace drobound
