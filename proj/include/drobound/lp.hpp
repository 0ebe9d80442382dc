#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Self-contained dense linear programming kernel: two-phase primal simplex
// with Dantzig pricing, Bland fallback on degeneracy, and exact dual
// recovery from the final tableau. Adequate for desk-scale models; the
// solve_lp contract is the only surface callers see, so a faster solver can
// substitute without touching them.

namespace drobound::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;      // inside pivoting
constexpr double kFeasTol = 1e-7;       // reported residuals
constexpr double kGapTol = 1e-6;        // primal-dual gap, relative
constexpr std::size_t kMaxIter = 1000000;
constexpr int kBlandTrigger = 50;       // consecutive degenerate pivots

enum class Sense { Minimize, Maximize };
enum class RowSense { LE, EQ, GE };
enum class Status { Optimal, Infeasible, Unbounded };

struct Row {
    std::vector<double> coeffs;
    RowSense sense = RowSense::LE;
    double rhs = 0.0;
};

struct LPModel {
    Sense sense = Sense::Minimize;
    std::vector<double> objective;
    std::vector<double> lower;  // -inf allowed
    std::vector<double> upper;  // +inf allowed
    std::vector<Row> rows;

    std::size_t num_vars() const { return objective.size(); }

    // Variables default to [0, +inf).
    std::size_t add_var(double cost, double lo = 0.0, double up = kInf) {
        objective.push_back(cost);
        lower.push_back(lo);
        upper.push_back(up);
        return objective.size() - 1;
    }

    void add_row(std::vector<double> coeffs, RowSense s, double rhs) {
        if (coeffs.size() != num_vars())
            throw std::invalid_argument("lp: row coefficient dimension mismatch");
        rows.push_back({std::move(coeffs), s, rhs});
    }

    void validate() const {
        for (double c : objective)
            if (std::isnan(c)) throw std::invalid_argument("lp: NaN objective coefficient");
        for (const auto& r : rows) {
            if (r.coeffs.size() != num_vars())
                throw std::invalid_argument("lp: row coefficient dimension mismatch");
            for (double c : r.coeffs)
                if (std::isnan(c)) throw std::invalid_argument("lp: NaN row coefficient");
            if (std::isnan(r.rhs)) throw std::invalid_argument("lp: NaN rhs");
        }
    }
};

struct LPSolution {
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> primal;      // per variable
    std::vector<double> duals;       // per row; sign convention below

    bool optimal() const { return status == Status::Optimal; }
};

// Dual sign convention: duals y are reported such that for a minimization
// problem y_i >= 0 on >= rows and y_i <= 0 on <= rows; for a maximization
// problem y_i >= 0 on <= rows and y_i <= 0 on >= rows. Equality rows are free.

namespace detail {

// Canonical form: minimize c'x, A x = b with b >= 0, x >= 0.
// Columns: structural | slack | artificial (identity after row flips).
class SimplexTableau {
  private:
    std::size_t m_ = 0;       // rows
    std::size_t n_ = 0;       // structural + slack columns
    std::size_t width_ = 0;   // n_ + m_ artificials + 1 rhs
    std::vector<double> tab_;       // m_ x width_
    std::vector<double> cost_;      // width_ (reduced costs; last = -objective)
    std::vector<double> canon_c_;   // canonical costs, length n_ + m_
    std::vector<int> basis_;        // per row, column index
    double obj_shift_ = 0.0;        // constant from bound substitutions
    double sense_sign_ = 1.0;       // -1 when original problem maximizes

    // Mapping canonical structural columns back to user variables.
    struct VarMap {
        std::size_t col = 0;       // first canonical column
        double shift = 0.0;        // x = shift + sign * x'
        double sign = 1.0;
        bool split = false;        // free variable: x = x'[col] - x'[col+1]
    };
    std::vector<VarMap> vmap_;
    std::vector<double> row_sign_;  // +1, or -1 when row flipped for b >= 0

    double& at(std::size_t r, std::size_t c) { return tab_[r * width_ + c]; }

    void build(const LPModel& model) {
        model.validate();
        sense_sign_ = model.sense == Sense::Maximize ? -1.0 : 1.0;
        const std::size_t nv = model.num_vars();
        vmap_.resize(nv);
        obj_shift_ = 0.0;

        // Assign canonical structural columns and collect bound rows for
        // doubly bounded variables.
        std::size_t col = 0;
        std::vector<std::pair<std::size_t, double>> ub_rows;  // (canonical col, ub on x')
        for (std::size_t v = 0; v < nv; ++v) {
            double lo = model.lower[v], up = model.upper[v];
            if (lo > up) throw std::invalid_argument("lp: empty variable bound interval");
            VarMap& vm = vmap_[v];
            if (lo == -kInf && up == kInf) {
                vm = {col, 0.0, 1.0, true};
                col += 2;
            } else if (lo != -kInf) {
                vm = {col, lo, 1.0, false};
                if (up != kInf) ub_rows.push_back({col, up - lo});
                col += 1;
            } else {  // upper bound only: x = up - x'
                vm = {col, up, -1.0, false};
                col += 1;
            }
        }
        const std::size_t n_struct = col;
        m_ = model.rows.size() + ub_rows.size();
        const std::size_t n_slack = [&] {
            std::size_t s = 0;
            for (const auto& r : model.rows)
                if (r.sense != RowSense::EQ) ++s;
            return s + ub_rows.size();
        }();
        n_ = n_struct + n_slack;
        width_ = n_ + m_ + 1;
        tab_.assign(m_ * width_, 0.0);
        canon_c_.assign(n_ + m_, 0.0);
        row_sign_.assign(model.rows.size(), 1.0);

        // Canonical costs.
        for (std::size_t v = 0; v < nv; ++v) {
            double c = sense_sign_ * model.objective[v];
            const VarMap& vm = vmap_[v];
            if (vm.split) {
                canon_c_[vm.col] = c;
                canon_c_[vm.col + 1] = -c;
            } else {
                canon_c_[vm.col] = c * vm.sign;
                obj_shift_ += c * vm.shift;
            }
        }

        // Fill constraint rows.
        std::size_t slack = n_struct;
        for (std::size_t r = 0; r < model.rows.size(); ++r) {
            const Row& row = model.rows[r];
            double rhs = row.rhs;
            for (std::size_t v = 0; v < nv; ++v) {
                double a = row.coeffs[v];
                if (a == 0.0) continue;
                const VarMap& vm = vmap_[v];
                if (vm.split) {
                    at(r, vm.col) += a;
                    at(r, vm.col + 1) -= a;
                } else {
                    at(r, vm.col) += a * vm.sign;
                    rhs -= a * vm.shift;
                }
            }
            if (row.sense == RowSense::LE)
                at(r, slack++) = 1.0;
            else if (row.sense == RowSense::GE)
                at(r, slack++) = -1.0;
            if (rhs < 0.0) {
                row_sign_[r] = -1.0;
                for (std::size_t c = 0; c < n_; ++c) at(r, c) = -at(r, c);
                rhs = -rhs;
            }
            at(r, n_ + r) = 1.0;  // artificial
            at(r, width_ - 1) = rhs;
        }
        // Upper bound rows: x'_col + slack = ub.
        for (std::size_t k = 0; k < ub_rows.size(); ++k) {
            std::size_t r = model.rows.size() + k;
            at(r, ub_rows[k].first) = 1.0;
            at(r, slack++) = 1.0;
            at(r, n_ + r) = 1.0;
            at(r, width_ - 1) = ub_rows[k].second;
        }

        basis_.resize(m_);
        for (std::size_t r = 0; r < m_; ++r) basis_[r] = static_cast<int>(n_ + r);
    }

    void price(const std::vector<double>& c) {
        cost_.assign(width_, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) cost_[j] = c[j];
        for (std::size_t r = 0; r < m_; ++r) {
            double cb = c[static_cast<std::size_t>(basis_[r])];
            if (cb == 0.0) continue;
            const double* row = &tab_[r * width_];
            for (std::size_t j = 0; j < width_; ++j) cost_[j] -= cb * row[j];
        }
    }

    void pivot(std::size_t pr, std::size_t pc) {
        double* prow = &tab_[pr * width_];
        const double inv = 1.0 / prow[pc];
        for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
        prow[pc] = 1.0;
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == pr) continue;
            double* row = &tab_[r * width_];
            double f = row[pc];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
            row[pc] = 0.0;
        }
        double f = cost_[pc];
        if (f != 0.0) {
            for (std::size_t j = 0; j < width_; ++j) cost_[j] -= f * prow[j];
            cost_[pc] = 0.0;
        }
        basis_[pr] = static_cast<int>(pc);
    }

    // Runs simplex iterations on the current cost row. `allow` limits the
    // columns permitted to enter. Returns false on unboundedness.
    bool iterate(std::size_t allow_cols) {
        int degenerate_run = 0;
        bool bland = false;
        for (std::size_t iter = 0; iter < kMaxIter; ++iter) {
            // Entering column.
            std::size_t pc = width_;
            if (bland) {
                for (std::size_t j = 0; j < allow_cols; ++j)
                    if (cost_[j] < -kPivotTol) {
                        pc = j;
                        break;
                    }
            } else {
                double best = -kPivotTol;
                for (std::size_t j = 0; j < allow_cols; ++j)
                    if (cost_[j] < best) {
                        best = cost_[j];
                        pc = j;
                    }
            }
            if (pc == width_) return true;  // optimal

            // Ratio test. Among near-tied ratios prefer the largest pivot
            // element for stability; under the Bland rule break ties toward
            // the smallest basis index instead to guarantee termination.
            std::size_t pr = m_;
            double best_ratio = kInf;
            for (std::size_t r = 0; r < m_; ++r) {
                double a = tab_[r * width_ + pc];
                if (a <= kPivotTol) continue;
                double ratio = tab_[r * width_ + width_ - 1] / a;
                bool better = ratio < best_ratio - 1e-12;
                bool tie = !better && ratio < best_ratio + 1e-12 && pr < m_;
                bool tie_wins =
                    tie && (bland ? basis_[r] < basis_[pr]
                                  : a > std::abs(tab_[pr * width_ + pc]));
                if (better || tie_wins) {
                    best_ratio = std::min(ratio, best_ratio);
                    pr = r;
                }
            }
            if (pr == m_) return false;  // unbounded direction

            if (best_ratio < 1e-12) {
                if (++degenerate_run >= kBlandTrigger) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }
            pivot(pr, pc);
        }
        throw std::runtime_error("lp: simplex iteration cap exceeded");
    }

    bool phase_one() {
        std::vector<double> c(n_ + m_, 0.0);
        for (std::size_t j = n_; j < n_ + m_; ++j) c[j] = 1.0;
        price(c);
        if (!iterate(n_ + m_)) throw std::runtime_error("lp: phase one unbounded");
        double infeas = -cost_[width_ - 1];
        double scale = 1.0;
        for (std::size_t r = 0; r < m_; ++r) scale = std::max(scale, std::abs(canon_rhs_[r]));
        if (infeas > kFeasTol * scale) return false;
        // Drive artificials out of the basis where possible.
        for (std::size_t r = 0; r < m_; ++r) {
            if (static_cast<std::size_t>(basis_[r]) < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(tab_[r * width_ + j]) > 1e-7) {
                    pivot(r, j);
                    break;
                }
            }
        }
        return true;
    }

    Status phase_two() {
        price(canon_c_);
        // Artificial columns may not re-enter: overwrite their reduced costs
        // with +inf sentinels is unsafe for dual recovery, so restrict the
        // entering scan to the first n_ columns instead.
        if (!iterate(n_)) return Status::Unbounded;
        // Long degenerate runs let roundoff accumulate in the dense tableau.
        // Rebuild it from the original matrix and the final basis, then resume
        // if the refreshed reduced costs still show progress.
        for (int round = 0; round < 8; ++round) {
            if (!refactorize()) break;
            price(canon_c_);
            double worst = 0.0;
            for (std::size_t j = 0; j < n_; ++j) worst = std::min(worst, cost_[j]);
            if (worst >= -1e-7) break;
            if (!iterate(n_)) return Status::Unbounded;
        }
        return Status::Optimal;
    }

    // Recomputes tab_ = B^{-1} * orig_ by Gaussian elimination on the
    // augmented system [B | orig_], B being the current basis columns.
    // Returns false if the basis matrix is numerically singular.
    bool refactorize() {
        const std::size_t w = m_ + width_;
        std::vector<double> aug(m_ * w, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t c = 0; c < m_; ++c)
                aug[r * w + c] = orig_[r * width_ + static_cast<std::size_t>(basis_[c])];
            for (std::size_t j = 0; j < width_; ++j)
                aug[r * w + m_ + j] = orig_[r * width_ + j];
        }
        // Forward elimination with partial pivoting.
        for (std::size_t k = 0; k < m_; ++k) {
            std::size_t pr = k;
            for (std::size_t r = k + 1; r < m_; ++r)
                if (std::abs(aug[r * w + k]) > std::abs(aug[pr * w + k])) pr = r;
            if (std::abs(aug[pr * w + k]) < 1e-12) return false;
            if (pr != k)
                for (std::size_t j = k; j < w; ++j)
                    std::swap(aug[pr * w + j], aug[k * w + j]);
            const double inv = 1.0 / aug[k * w + k];
            for (std::size_t r = k + 1; r < m_; ++r) {
                double f = aug[r * w + k] * inv;
                if (f == 0.0) continue;
                for (std::size_t j = k; j < w; ++j) aug[r * w + j] -= f * aug[k * w + j];
            }
        }
        // Back substitution into tab_.
        for (std::size_t rr = m_; rr-- > 0;) {
            double* dst = &tab_[rr * width_];
            const double inv = 1.0 / aug[rr * w + rr];
            for (std::size_t j = 0; j < width_; ++j) {
                double s = aug[rr * w + m_ + j];
                for (std::size_t c = rr + 1; c < m_; ++c)
                    s -= aug[rr * w + c] * tab_[c * width_ + j];
                dst[j] = s * inv;
            }
        }
        return true;
    }

    void extract(const LPModel& model, LPSolution& out) {
        std::vector<double> x(n_ + m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r)
            x[static_cast<std::size_t>(basis_[r])] = tab_[r * width_ + width_ - 1];

        out.primal.assign(model.num_vars(), 0.0);
        for (std::size_t v = 0; v < model.num_vars(); ++v) {
            const VarMap& vm = vmap_[v];
            out.primal[v] = vm.split ? x[vm.col] - x[vm.col + 1]
                                     : vm.shift + vm.sign * x[vm.col];
        }

        double canon_obj = obj_shift_;
        for (std::size_t j = 0; j < n_; ++j) canon_obj += canon_c_[j] * x[j];
        out.objective = sense_sign_ * canon_obj;

        // Canonical duals from the artificial columns: reduced cost of the
        // artificial for row r is -y_r (its canonical cost is zero).
        out.duals.assign(model.rows.size(), 0.0);
        for (std::size_t r = 0; r < model.rows.size(); ++r)
            out.duals[r] = sense_sign_ * row_sign_[r] * (-cost_[n_ + r]);

        // Certificate checks in canonical space: dual feasibility and the
        // primal-dual gap. The rhs entries are nonnegative basic values, so
        // primal feasibility holds by construction up to pivot roundoff.
        double min_red = 0.0;
        for (std::size_t j = 0; j < n_; ++j) min_red = std::min(min_red, cost_[j]);
        double dual_obj = obj_shift_ + dual_rhs_dot();
        double gap = std::abs(dual_obj - canon_obj);
        if (min_red < -1e-5 || gap > kGapTol * (1.0 + std::abs(canon_obj)))
            throw std::runtime_error("lp: certificate check failed (gap " +
                                     std::to_string(gap) + ")");
        out.status = Status::Optimal;
    }

    // Saved canonical rhs for the dual objective y'b.
    std::vector<double> canon_rhs_;
    std::vector<double> orig_;  // pristine tableau for refactorization
    double dual_rhs_dot() {
        double s = 0.0;
        for (std::size_t r = 0; r < m_; ++r) s += (-cost_[n_ + r]) * canon_rhs_[r];
        return s;
    }

  public:
    void remember_rhs() {
        canon_rhs_.resize(m_);
        for (std::size_t r = 0; r < m_; ++r) canon_rhs_[r] = tab_[r * width_ + width_ - 1];
        orig_ = tab_;
    }

    friend LPSolution run(const LPModel&);
};

inline LPSolution run(const LPModel& model) {
    SimplexTableau t;
    LPSolution out;
    t.build(model);
    t.remember_rhs();
    if (!t.phase_one()) {
        out.status = Status::Infeasible;
        return out;
    }
    Status st = t.phase_two();
    if (st == Status::Unbounded) {
        out.status = Status::Unbounded;
        return out;
    }
    t.extract(model, out);
    return out;
}

}  // namespace detail

inline LPSolution solve_lp(const LPModel& model) { return detail::run(model); }

// Debug dump in LP text format for external cross-checking.
inline std::string to_lp_format(const LPModel& model, const std::string& name = "model") {
    std::ostringstream os;
    os << "\\ " << name << "\n";
    os << (model.sense == Sense::Maximize ? "Maximize\n" : "Minimize\n") << " obj:";
    for (std::size_t v = 0; v < model.num_vars(); ++v) {
        double c = model.objective[v];
        if (c == 0.0) continue;
        os << (c >= 0 ? " + " : " - ") << std::abs(c) << " x" << v;
    }
    os << "\nSubject To\n";
    for (std::size_t r = 0; r < model.rows.size(); ++r) {
        os << " c" << r << ":";
        for (std::size_t v = 0; v < model.num_vars(); ++v) {
            double a = model.rows[r].coeffs[v];
            if (a == 0.0) continue;
            os << (a >= 0 ? " + " : " - ") << std::abs(a) << " x" << v;
        }
        const char* rel = model.rows[r].sense == RowSense::LE   ? "<="
                          : model.rows[r].sense == RowSense::GE ? ">="
                                                                : "=";
        os << " " << rel << " " << model.rows[r].rhs << "\n";
    }
    os << "Bounds\n";
    for (std::size_t v = 0; v < model.num_vars(); ++v) {
        double lo = model.lower[v], up = model.upper[v];
        if (lo == -kInf && up == kInf)
            os << " x" << v << " free\n";
        else if (up == kInf)
            os << " " << lo << " <= x" << v << "\n";
        else
            os << " " << lo << " <= x" << v << " <= " << up << "\n";
    }
    os << "End\n";
    return os.str();
}

inline void dump_lp(const LPModel& model, const std::string& path) {
    std::ofstream f(path);
    f << to_lp_format(model, path);
}

}  // namespace drobound::lp
