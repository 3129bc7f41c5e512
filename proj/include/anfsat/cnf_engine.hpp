#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <sstream>
#include <string>
#include <vector>

#include "cnf_xor.hpp"
#include "types.hpp"

namespace anfsat {

/// Unit propagation over OR clauses with per-clause counters
/// (unassigned-literal count + satisfied-literal count); undo is counter
/// reversal driven by a per-level trail.
class CnfEngine {
public:
    CnfEngine() = default;

    CnfEngine(Var num_vars, const std::vector<OrClause>& clauses) {
        num_vars_ = num_vars;
        assigned_.assign(num_vars + 1, Tri::Unassigned);
        occ_.assign(2 * (num_vars + 1), {});
        clauses_.reserve(clauses.size());
        for (const OrClause& c : clauses) {
            // repeated literals would double-count in the clause counters
            std::vector<Literal> lits;
            for (const Literal& l : c.lits)
                if (std::find(lits.begin(), lits.end(), l) == lits.end()) lits.push_back(l);
            std::uint32_t idx = static_cast<std::uint32_t>(clauses_.size());
            for (const Literal& l : lits) occ_[lit_index(l)].push_back(idx);
            std::uint32_t width = static_cast<std::uint32_t>(lits.size());
            clauses_.push_back({std::move(lits), width, 0});
        }
        trail_levels_.push_back(0);
    }

    Var num_vars() const { return num_vars_; }
    Tri value(Var v) const { return assigned_[v]; }
    std::size_t level() const { return trail_levels_.size() - 1; }

    /// Clauses already false with no unassigned literal (possible right after
    /// construction if the formula contains an empty clause).
    bool has_empty_clause() const {
        for (const Clause& c : clauses_)
            if (c.n_unassigned == 0 && c.n_satisfied == 0) return true;
        return false;
    }

    /// Assign the given literals and propagate to fixpoint. Already-assigned
    /// literals of equal value are no-ops; of opposite value, a conflict.
    /// Returns false on conflict.
    bool set(const LitVec& lits) {
        last_assigned_.clear();
        queue_.assign(lits.begin(), lits.end());
        std::size_t qhead = 0;
        while (qhead < queue_.size()) {
            Literal l = queue_[qhead++];
            Tri cur = assigned_[l.var];
            if (cur != Tri::Unassigned) {
                if ((cur == Tri::True) != l.value) { queue_.clear(); return false; }
                continue;
            }
            assigned_[l.var] = l.value ? Tri::True : Tri::False;
            trail_.push_back(l.var);
            last_assigned_.push_back(l);
            // literal l is satisfied; its negation is falsified
            for (std::uint32_t ci : occ_[lit_index(l)]) {
                Clause& c = clauses_[ci];
                --c.n_unassigned;
                ++c.n_satisfied;
            }
            Literal nl{l.var, !l.value};
            // on conflict the counter updates must still run to completion:
            // backtracking reverses the whole occurrence list
            bool failed = false;
            for (std::uint32_t ci : occ_[lit_index(nl)]) {
                Clause& c = clauses_[ci];
                --c.n_unassigned;
                if (failed || c.n_satisfied != 0) continue;
                if (c.n_unassigned == 0) failed = true;
                else if (c.n_unassigned == 1) queue_.push_back(sole_unassigned(c));
            }
            if (failed) { queue_.clear(); return false; }
        }
        queue_.clear();
        return true;
    }

    /// Literals newly assigned during the last set() call, in assignment order.
    const LitVec& last_assigned() const { return last_assigned_; }

    void push_level() { trail_levels_.push_back(trail_.size()); }

    void backtrack_to(std::size_t target_level) {
        while (level() > target_level) {
            std::size_t mark = trail_levels_.back();
            trail_levels_.pop_back();
            while (trail_.size() > mark) {
                Var v = trail_.back();
                trail_.pop_back();
                Literal l{v, assigned_[v] == Tri::True};
                Literal nl{v, !l.value};
                for (std::uint32_t ci : occ_[lit_index(l)]) {
                    Clause& c = clauses_[ci];
                    ++c.n_unassigned;
                    --c.n_satisfied;
                }
                for (std::uint32_t ci : occ_[lit_index(nl)]) ++clauses_[ci].n_unassigned;
                assigned_[v] = Tri::Unassigned;
            }
        }
    }

    std::string dump_state() const {
        std::ostringstream out;
        out << "level=" << level() << ";assign=";
        for (Var v = 1; v <= num_vars_; ++v) out << static_cast<int>(assigned_[v]) << ',';
        out << ";counters=";
        for (const Clause& c : clauses_) out << c.n_unassigned << '/' << c.n_satisfied << ',';
        return out.str();
    }

private:
    struct Clause {
        std::vector<Literal> lits;
        std::uint32_t n_unassigned = 0;
        std::uint32_t n_satisfied = 0;
    };

    std::size_t lit_index(const Literal& l) const { return 2 * l.var + (l.value ? 1 : 0); }

    Literal sole_unassigned(const Clause& c) const {
        for (const Literal& l : c.lits)
            if (assigned_[l.var] == Tri::Unassigned) return l;
        throw std::logic_error("unit clause without unassigned literal");
    }

    Var num_vars_ = 0;
    std::vector<Clause> clauses_;
    std::vector<std::vector<std::uint32_t>> occ_; // literal -> clause indices
    std::vector<Tri> assigned_;
    std::vector<Var> trail_;
    std::vector<std::size_t> trail_levels_; // trail size at entry to each level
    LitVec queue_;
    LitVec last_assigned_;
};

} // namespace anfsat
