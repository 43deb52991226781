#include "nnv/smc/linear_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnv/errors.hpp"

namespace nnv::smc {

int LinearConstraintSystem::add_variable(std::string name) {
    names_.push_back(std::move(name));
    return static_cast<int>(names_.size()) - 1;
}

void LinearConstraintSystem::add(Constraint c) {
    for (const Term& t : c.terms) {
        if (t.var < 0 || t.var >= variable_count()) {
            throw InternalError("constraint references undeclared variable");
        }
        if (!std::isfinite(t.coeff)) {
            throw InternalError("constraint has non-finite coefficient");
        }
    }
    if (!std::isfinite(c.rhs)) {
        throw InternalError("constraint has non-finite right-hand side");
    }
    constraints_.push_back(std::move(c));
}

double LinearConstraintSystem::max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (const Constraint& c : constraints_) {
        double lhs = 0.0;
        for (const Term& t : c.terms) lhs += t.coeff * x[t.var];
        double v = 0.0;
        switch (c.rel) {
            case Relation::le: v = lhs - c.rhs; break;
            case Relation::ge: v = c.rhs - lhs; break;
            case Relation::eq: v = std::abs(lhs - c.rhs); break;
        }
        worst = std::max(worst, v);
    }
    return worst;
}

namespace {

// Dense phase-one tableau. Free variables are split into positive parts;
// every row is sign-normalized to a nonnegative right-hand side and scaled by
// its largest coefficient magnitude.
class PhaseOne {
  public:
    PhaseOne(const LinearConstraintSystem& sys, double tol)
        : sys_(sys), tol_(tol), m_(static_cast<int>(sys.constraints().size())),
          nv_(sys.variable_count()) {
        build();
    }

    LpResult solve() {
        LpResult out;
        if (m_ == 0) {
            out.status = LpResult::Status::feasible;
            out.point.assign(nv_, 0.0);
            return out;
        }
        if (!iterate()) {
            out.status = LpResult::Status::numerical_failure;
            return out;
        }
        if (objective_ > tol_) {
            out.status = LpResult::Status::infeasible;
            out.infeasibility = objective_;
            return out;
        }
        out.point = extract_point();
        if (sys_.max_violation(out.point) > 10.0 * tol_) {
            out.status = LpResult::Status::numerical_failure;
            return out;
        }
        out.status = LpResult::Status::feasible;
        return out;
    }

  private:
    static constexpr double kPivotEps = 1e-11;

    void build() {
        // Column layout: 2*nv_ split variables, then one slack per inequality,
        // then one artificial per >=/== row.
        int slacks = 0;
        for (const auto& c : sys_.constraints()) {
            if (c.rel != Relation::eq) ++slacks;
        }
        slack_base_ = 2 * nv_;
        art_base_ = slack_base_ + slacks;

        // Normalize rows first to decide artificial count.
        struct Row {
            std::vector<double> dense;
            Relation rel;
            double rhs;
        };
        std::vector<Row> rows;
        rows.reserve(m_);
        for (const auto& c : sys_.constraints()) {
            Row r;
            r.dense.assign(nv_, 0.0);
            for (const Term& t : c.terms) r.dense[t.var] += t.coeff;
            r.rel = c.rel;
            r.rhs = c.rhs;
            double scale = std::abs(r.rhs);
            for (double v : r.dense) scale = std::max(scale, std::abs(v));
            if (scale > 0.0) {
                for (double& v : r.dense) v /= scale;
                r.rhs /= scale;
            }
            if (r.rhs < 0.0) {
                for (double& v : r.dense) v = -v;
                r.rhs = -r.rhs;
                if (r.rel == Relation::le) r.rel = Relation::ge;
                else if (r.rel == Relation::ge) r.rel = Relation::le;
            }
            rows.push_back(std::move(r));
        }

        int arts = 0;
        for (const auto& r : rows) {
            if (r.rel != Relation::le) ++arts;
        }
        cols_ = art_base_ + arts;

        a_.assign(static_cast<size_t>(m_) * (cols_ + 1), 0.0);
        basis_.assign(m_, -1);
        int slack_next = slack_base_;
        int art_next = art_base_;
        for (int i = 0; i < m_; ++i) {
            const Row& r = rows[i];
            for (int v = 0; v < nv_; ++v) {
                at(i, 2 * v) = r.dense[v];
                at(i, 2 * v + 1) = -r.dense[v];
            }
            rhs(i) = r.rhs;
            if (r.rel == Relation::le) {
                at(i, slack_next) = 1.0;
                basis_[i] = slack_next++;
            } else if (r.rel == Relation::ge) {
                at(i, slack_next++) = -1.0;
                at(i, art_next) = 1.0;
                basis_[i] = art_next++;
            } else {
                at(i, art_next) = 1.0;
                basis_[i] = art_next++;
            }
        }

        // Phase-one objective row: sum of artificial-basic rows.
        obj_.assign(cols_ + 1, 0.0);
        objective_ = 0.0;
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] >= art_base_) {
                for (int j = 0; j <= cols_; ++j) obj_[j] += at(i, j);
            }
        }
        objective_ = obj_[cols_];
    }

    bool iterate() {
        long long max_iters = 20000 + 200LL * m_;
        int stall = 0;
        bool bland = false;
        for (long long it = 0; it < max_iters; ++it) {
            int enter = pick_entering(bland);
            if (enter < 0) return true;  // optimal
            int leave = pick_leaving(enter);
            if (leave < 0) {
                // Unbounded phase-one objective cannot happen; treat as a
                // numerical breakdown.
                return false;
            }
            double before = objective_;
            pivot(leave, enter);
            if (before - objective_ < 1e-13) {
                if (++stall > 2 * m_ + 20) bland = true;
            } else {
                stall = 0;
                bland = false;
            }
        }
        return false;
    }

    int pick_entering(bool bland) const {
        int best = -1;
        double best_val = tol_ * 0.01;
        for (int j = 0; j < art_base_; ++j) {  // artificials never re-enter
            double c = obj_[j];
            if (c > best_val) {
                if (bland) return j;
                best_val = c;
                best = j;
            }
        }
        return best;
    }

    int pick_leaving(int enter) const {
        int best = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m_; ++i) {
            double aij = at(i, enter);
            if (aij > kPivotEps) {
                double ratio = rhs(i) / aij;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 &&
                     (best < 0 || basis_[i] < basis_[best]))) {
                    best_ratio = ratio;
                    best = i;
                }
            }
        }
        return best;
    }

    void pivot(int row, int col) {
        double piv = at(row, col);
        for (int j = 0; j <= cols_; ++j) at(row, j) /= piv;
        at(row, col) = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            double f = at(i, col);
            if (f == 0.0) continue;
            for (int j = 0; j <= cols_; ++j) at(i, j) -= f * at(row, j);
            at(i, col) = 0.0;
        }
        double f = obj_[col];
        if (f != 0.0) {
            for (int j = 0; j <= cols_; ++j) obj_[j] -= f * at(row, j);
            obj_[col] = 0.0;
        }
        basis_[row] = col;
        objective_ = obj_[cols_];
    }

    std::vector<double> extract_point() const {
        std::vector<double> split(2 * nv_, 0.0);
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < 2 * nv_) split[basis_[i]] = rhs(i);
        }
        std::vector<double> x(nv_);
        for (int v = 0; v < nv_; ++v) x[v] = split[2 * v] - split[2 * v + 1];
        return x;
    }

    double& at(int i, int j) { return a_[static_cast<size_t>(i) * (cols_ + 1) + j]; }
    double at(int i, int j) const {
        return a_[static_cast<size_t>(i) * (cols_ + 1) + j];
    }
    double& rhs(int i) { return a_[static_cast<size_t>(i) * (cols_ + 1) + cols_]; }
    double rhs(int i) const {
        return a_[static_cast<size_t>(i) * (cols_ + 1) + cols_];
    }

    const LinearConstraintSystem& sys_;
    double tol_;
    int m_;
    int nv_;
    int cols_ = 0;
    int slack_base_ = 0;
    int art_base_ = 0;
    std::vector<double> a_;
    std::vector<double> obj_;
    std::vector<int> basis_;
    double objective_ = 0.0;
};

}  // namespace

LpResult lp_feasible(const LinearConstraintSystem& sys, double tol) {
    return PhaseOne(sys, tol).solve();
}

}  // namespace nnv::smc
