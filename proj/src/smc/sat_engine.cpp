#include "nnv/smc/sat_engine.hpp"

#include <algorithm>

#include "nnv/errors.hpp"

namespace nnv::smc {

SatEngine::SatEngine(int num_vars) : num_vars_(num_vars) {
    assign_.assign(num_vars_ + 1, 0);
    occ_pos_.assign(num_vars_ + 1, {});
    occ_neg_.assign(num_vars_ + 1, {});
}

void SatEngine::add_clause(std::vector<int> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (int lit : lits) {
        int v = std::abs(lit);
        if (v < 1 || v > num_vars_) {
            throw InternalError("sat clause literal out of range");
        }
    }
    // Tautologies (v and -v together) constrain nothing.
    for (int lit : lits) {
        if (std::binary_search(lits.begin(), lits.end(), -lit)) return;
    }
    if (lits.empty()) {
        contradiction_ = true;
        return;
    }
    int id = static_cast<int>(clauses_.size());
    for (int lit : lits) {
        (lit > 0 ? occ_pos_[lit] : occ_neg_[-lit]).push_back(id);
    }
    clauses_.push_back(std::move(lits));
    pending_clauses_.push_back(id);
}

std::vector<bool> SatEngine::model() const {
    std::vector<bool> m(num_vars_);
    for (int v = 1; v <= num_vars_; ++v) m[v - 1] = assign_[v] > 0;
    return m;
}

bool SatEngine::enqueue(int lit) {
    int v = std::abs(lit);
    int8_t want = lit > 0 ? 1 : -1;
    if (assign_[v] == want) return true;
    if (assign_[v] == -want) return false;
    assign_[v] = want;
    trail_.push_back(lit);
    return true;
}

int SatEngine::propagate() {
    while (prop_head_ < trail_.size()) {
        int lit = trail_[prop_head_++];
        int v = std::abs(lit);
        // Clauses containing the falsified literal need a second look.
        const auto& watch = (lit > 0) ? occ_neg_[v] : occ_pos_[v];
        for (int cid : watch) {
            const auto& clause = clauses_[cid];
            int unassigned = 0;
            int unit = 0;
            bool satisfied = false;
            for (int l : clause) {
                int lv = std::abs(l);
                int8_t a = assign_[lv];
                if (a == 0) {
                    ++unassigned;
                    unit = l;
                    if (unassigned > 1) break;
                } else if ((l > 0) == (a > 0)) {
                    satisfied = true;
                    break;
                }
            }
            if (satisfied || unassigned > 1) continue;
            if (unassigned == 1) {
                if (!enqueue(unit)) return cid;
            } else {
                return cid;  // all literals false
            }
        }
    }
    return -1;
}

void SatEngine::undo_to(int trail_start) {
    while (static_cast<int>(trail_.size()) > trail_start) {
        assign_[std::abs(trail_.back())] = 0;
        trail_.pop_back();
    }
    prop_head_ = trail_.size();
}

bool SatEngine::backtrack() {
    while (!decisions_.empty()) {
        Decision d = decisions_.back();
        decisions_.pop_back();
        if (!d.flipped) {
            undo_to(d.trail_start);
            decisions_.push_back({d.var, d.trail_start, true});
            if (!enqueue(d.var)) return backtrack();  // opposite of false-first
            return true;
        }
        undo_to(d.trail_start);
    }
    return false;
}

bool SatEngine::handle_pending() {
    // Newly added clauses may already be violated or unit under the current
    // assignment; propagate() only reacts to fresh assignments.
    while (!pending_clauses_.empty()) {
        int cid = pending_clauses_.back();
        pending_clauses_.pop_back();
        const auto& clause = clauses_[cid];
        int unassigned = 0;
        int unit = 0;
        bool satisfied = false;
        for (int l : clause) {
            int8_t a = assign_[std::abs(l)];
            if (a == 0) {
                ++unassigned;
                unit = l;
            } else if ((l > 0) == (a > 0)) {
                satisfied = true;
                break;
            }
        }
        if (satisfied || unassigned > 1) continue;
        if (unassigned == 1) {
            if (!enqueue(unit)) {
                if (!backtrack()) return false;
                pending_clauses_.push_back(cid);
            }
        } else {
            if (!backtrack()) return false;
            pending_clauses_.push_back(cid);
        }
    }
    return true;
}

SatEngine::Result SatEngine::next_model() {
    if (contradiction_) return Result::exhausted;

    if (have_model_) {
        // Move past the previous model even if the caller added no clause.
        have_model_ = false;
        if (!backtrack()) return Result::exhausted;
    }

    while (true) {
        if (!handle_pending()) return Result::exhausted;
        int conflict = propagate();
        if (conflict >= 0) {
            if (!backtrack()) return Result::exhausted;
            continue;
        }
        if (static_cast<int>(trail_.size()) == num_vars_) {
            have_model_ = true;
            return Result::model;
        }
        int var = 1;
        while (assign_[var] != 0) ++var;
        decisions_.push_back({var, static_cast<int>(trail_.size()), false});
        enqueue(-var);  // false branch first
    }
}

}  // namespace nnv::smc
