#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cnf_xor.hpp"
#include "types.hpp"

namespace anfsat {

/// Parity propagation over the XOR clause list: each clause keeps the count of
/// unassigned member variables and the accumulated parity of the assigned ones.
/// One unassigned member left forces its value; zero left checks the target.
class XorsetEngine {
public:
    XorsetEngine() = default;

    XorsetEngine(Var num_vars, const std::vector<XorClause>& clauses) {
        num_vars_ = num_vars;
        assigned_.assign(num_vars + 1, Tri::Unassigned);
        occ_.assign(num_vars + 1, {});
        clauses_.reserve(clauses.size());
        for (const XorClause& c : clauses) {
            std::uint32_t idx = static_cast<std::uint32_t>(clauses_.size());
            clauses_.push_back({c.vars, c.constant, static_cast<std::uint32_t>(c.vars.size()), false});
            for (Var v : c.vars) occ_[v].push_back(idx);
        }
        trail_levels_.push_back(0);
    }

    Var num_vars() const { return num_vars_; }
    Tri value(Var v) const { return assigned_[v]; }
    std::size_t level() const { return trail_levels_.size() - 1; }

    /// A clause violated with every member assigned (or empty with odd target).
    bool has_violated_clause() const {
        for (const Clause& c : clauses_)
            if (c.n_unassigned == 0 && c.parity != c.target) return true;
        return false;
    }

    /// Width-one clauses force their variable up front.
    LitVec initial_units() const {
        LitVec out;
        for (const Clause& c : clauses_)
            if (c.vars.size() == 1) out.push_back({c.vars[0], c.target});
        return out;
    }

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
            // on conflict the counter updates must still run to completion:
            // backtracking reverses the whole occurrence list
            bool failed = false;
            for (std::uint32_t ci : occ_[l.var]) {
                Clause& c = clauses_[ci];
                --c.n_unassigned;
                c.parity = c.parity != l.value;
                if (failed) continue;
                if (c.n_unassigned == 0) {
                    if (c.parity != c.target) failed = true;
                } else if (c.n_unassigned == 1) {
                    Var u = sole_unassigned(c);
                    queue_.push_back({u, c.parity != c.target});
                }
            }
            if (failed) { queue_.clear(); return false; }
        }
        queue_.clear();
        return true;
    }

    const LitVec& last_assigned() const { return last_assigned_; }

    void push_level() { trail_levels_.push_back(trail_.size()); }

    void backtrack_to(std::size_t target_level) {
        while (level() > target_level) {
            std::size_t mark = trail_levels_.back();
            trail_levels_.pop_back();
            while (trail_.size() > mark) {
                Var v = trail_.back();
                trail_.pop_back();
                bool val = assigned_[v] == Tri::True;
                for (std::uint32_t ci : occ_[v]) {
                    Clause& c = clauses_[ci];
                    ++c.n_unassigned;
                    c.parity = c.parity != val;
                }
                assigned_[v] = Tri::Unassigned;
            }
        }
    }

    std::string dump_state() const {
        std::ostringstream out;
        out << "level=" << level() << ";assign=";
        for (Var v = 1; v <= num_vars_; ++v) out << static_cast<int>(assigned_[v]) << ',';
        out << ";clauses=";
        for (const Clause& c : clauses_) out << c.n_unassigned << '/' << c.parity << ',';
        return out.str();
    }

private:
    struct Clause {
        std::vector<Var> vars;
        bool target = false;
        std::uint32_t n_unassigned = 0;
        bool parity = false; // XOR of values assigned so far
    };

    Var sole_unassigned(const Clause& c) const {
        for (Var v : c.vars)
            if (assigned_[v] == Tri::Unassigned) return v;
        throw std::logic_error("unit XOR clause without unassigned variable");
    }

    Var num_vars_ = 0;
    std::vector<Clause> clauses_;
    std::vector<std::vector<std::uint32_t>> occ_;
    std::vector<Tri> assigned_;
    std::vector<Var> trail_;
    std::vector<std::size_t> trail_levels_;
    LitVec queue_;
    LitVec last_assigned_;
};

} // namespace anfsat
