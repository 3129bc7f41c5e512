#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cnf_xor.hpp"
#include "types.hpp"

namespace anfsat {

/// Dynamic Gaussian elimination over equivalence classes.
///
/// The store keeps, for each representative variable r in R, a clause C_r
/// meaning r <=> (+)(vars of C_r) (+) constant. Rows are dense bit vectors:
/// bit 0 is the constant, bit v (v >= 1) the variable v. Invariant: no
/// representative occurs in any stored clause (its own included).
///
/// Assignments rewrite the store (constant folding / representative handoff),
/// clauses whose variable part empties force their representative, and the
/// extension substitutes x' <=> x_r pairs emitted by monomial watches.
/// Backtracking restores a full snapshot per decision level.
class XorgaussEngine {
public:
    XorgaussEngine() = default;

    XorgaussEngine(Var num_vars, const std::vector<XorClause>& clauses,
                   const std::vector<MonomialDef>& defs, bool ext_enabled)
        : k_(num_vars), words_((num_vars + 64) / 64), ext_(ext_enabled) {
        rows_.assign(std::size_t(k_ + 1) * words_, 0);
        in_r_.assign(k_ + 1, 0);
        assigned_.assign(k_ + 1, Tri::Unassigned);
        count_not_top_.assign(k_ + 1, 0);
        watch_occ_.assign(k_ + 1, {});
        for (const MonomialDef& d : defs) {
            constituents_.resize(std::max<std::size_t>(constituents_.size(), d.sub_var + 1));
            constituents_[d.sub_var] = d.constituents;
            count_not_top_[d.sub_var] = static_cast<std::uint32_t>(d.constituents.size());
            for (Var v : d.constituents) watch_occ_[v].push_back(d.sub_var);
        }
        for (const XorClause& c : clauses)
            if (!insert_clause(c)) { init_conflict_ = true; break; }
    }

    Var num_vars() const { return k_; }
    bool init_conflict() const { return init_conflict_; }
    Tri value(Var v) const { return assigned_[v]; }
    bool is_representative(Var v) const { return in_r_[v] != 0; }
    std::size_t level() const { return snapshots_.size(); }
    std::uint32_t watch_count(Var sub_var) const { return count_not_top_[sub_var]; }

    /// Representatives whose clause already collapsed to a constant; the solver
    /// feeds these through its level-0 assignment loop.
    LitVec initial_units() const {
        LitVec out;
        for (Var v = 1; v <= k_; ++v)
            if (in_r_[v] && var_part_empty(row(v))) out.push_back({v, const_bit(row(v))});
        return out;
    }

    bool set(const LitVec& lits) {
        last_assigned_.clear();
        queue_.assign(lits.begin(), lits.end());
        return process_queue();
    }

    const LitVec& last_assigned() const { return last_assigned_; }

    /// Apply a derived equivalence x1 <=> x2 (both unassigned, distinct).
    /// Exposed for direct exercise; the extension calls it from the watches.
    bool substitute_equiv(Var x1, Var x2) {
        last_assigned_.clear();
        queue_.clear();
        if (!apply_equiv(x1, x2)) return false;
        return process_queue();
    }

    void push_level() {
        snapshots_.push_back({rows_, in_r_, assigned_, count_not_top_});
    }

    void backtrack_to(std::size_t target_level) {
        while (level() > target_level) {
            Snapshot& s = snapshots_.back();
            rows_ = std::move(s.rows);
            in_r_ = std::move(s.in_r);
            assigned_ = std::move(s.assigned);
            count_not_top_ = std::move(s.count_not_top);
            snapshots_.pop_back();
        }
    }

    /// Row bits as a string, constant bit leftmost ("11010100" for k = 7).
    std::string row_string(Var rep) const {
        std::string s;
        for (Var b = 0; b <= k_; ++b) s += test(row(rep), b) ? '1' : '0';
        return s;
    }

    std::string dump_state() const {
        std::ostringstream out;
        out << "level=" << level() << ";assign=";
        for (Var v = 1; v <= k_; ++v) out << static_cast<int>(assigned_[v]) << ',';
        out << ";R=";
        for (Var v = 1; v <= k_; ++v)
            if (in_r_[v]) out << v << ':' << row_string(v) << ',';
        out << ";watch=";
        for (Var v = 1; v <= k_; ++v) out << count_not_top_[v] << ',';
        return out.str();
    }

    /// Unicity invariant: no representative occurs in any stored clause.
    bool check_unicity() const {
        for (Var r = 1; r <= k_; ++r) {
            if (!in_r_[r]) continue;
            for (Var v = 1; v <= k_; ++v)
                if (in_r_[v] && test(row(r), v)) return false;
        }
        return true;
    }

    /// Constraints currently encoded by the store, as XOR clauses
    /// r (+) vars(C_r) = const(C_r), for model-set comparison in tests.
    std::vector<XorClause> store_constraints() const {
        std::vector<XorClause> out;
        for (Var r = 1; r <= k_; ++r) {
            if (!in_r_[r]) continue;
            XorClause xc;
            xc.vars.push_back(r);
            for (Var v = 1; v <= k_; ++v)
                if (test(row(r), v)) xc.vars.push_back(v);
            std::sort(xc.vars.begin(), xc.vars.end());
            xc.constant = const_bit(row(r));
            out.push_back(std::move(xc));
        }
        return out;
    }

private:
    struct Snapshot {
        std::vector<std::uint64_t> rows;
        std::vector<std::uint8_t> in_r;
        std::vector<Tri> assigned;
        std::vector<std::uint32_t> count_not_top;
    };

    const std::uint64_t* row(Var r) const { return rows_.data() + std::size_t(r) * words_; }
    std::uint64_t* row(Var r) { return rows_.data() + std::size_t(r) * words_; }

    static bool test(const std::uint64_t* w, Var bit) {
        return (w[bit >> 6] >> (bit & 63)) & 1;
    }
    static void toggle(std::uint64_t* w, Var bit) { w[bit >> 6] ^= std::uint64_t(1) << (bit & 63); }
    bool const_bit(const std::uint64_t* w) const { return w[0] & 1; }

    bool var_part_empty(const std::uint64_t* w) const {
        if (w[0] & ~std::uint64_t(1)) return false;
        for (std::uint32_t i = 1; i < words_; ++i)
            if (w[i]) return false;
        return true;
    }

    Var first_var(const std::uint64_t* w) const {
        std::uint64_t w0 = w[0] & ~std::uint64_t(1);
        if (w0) return static_cast<Var>(__builtin_ctzll(w0));
        for (std::uint32_t i = 1; i < words_; ++i)
            if (w[i]) return static_cast<Var>(64 * i + __builtin_ctzll(w[i]));
        throw std::logic_error("first_var on empty row");
    }

    void xor_rows(std::uint64_t* dst, const std::uint64_t* src) {
        for (std::uint32_t i = 0; i < words_; ++i) dst[i] ^= src[i];
    }
    void clear_row(std::uint64_t* w) {
        for (std::uint32_t i = 0; i < words_; ++i) w[i] = 0;
    }

    /// dst ^= (row(rep) | bit rep): substitute a representative by its clause.
    void substitute_rep_into(std::uint64_t* dst, Var rep) {
        xor_rows(dst, row(rep));
        toggle(dst, rep);
    }

    /// After row(rep) changed, queue its propagation if the variable part died.
    void check_collapsed(Var rep) {
        if (var_part_empty(row(rep))) queue_.push_back({rep, const_bit(row(rep))});
    }

    bool insert_clause(const XorClause& c) {
        tmp_.assign(words_, 0);
        std::uint64_t* w = tmp_.data();
        for (Var v : c.vars) toggle(w, v);
        if (c.constant) toggle(w, 0);
        // reduce against current representatives (their clauses hold none, so
        // one ascending sweep suffices)
        for (Var v = 1; v <= k_; ++v)
            if (in_r_[v] && test(w, v)) substitute_rep_into(w, v);
        if (var_part_empty(w)) return !const_bit(w); // 0=0 drops, 0=1 is UNSAT
        Var r = first_var(w);
        toggle(w, r);
        std::copy(tmp_.begin(), tmp_.end(), row(r));
        in_r_[r] = 1;
        // unicity: eliminate the new representative from every other clause
        for (Var s = 1; s <= k_; ++s) {
            if (!in_r_[s] || s == r) continue;
            if (test(row(s), r)) substitute_rep_into(row(s), r);
        }
        return true;
    }

    bool process_queue() {
        std::size_t qhead = 0;
        while (qhead < queue_.size()) {
            Literal l = queue_[qhead++];
            Tri cur = assigned_[l.var];
            if (cur != Tri::Unassigned) {
                if ((cur == Tri::True) != l.value) { queue_.clear(); return false; }
                continue;
            }
            if (!apply_assign(l)) { queue_.clear(); return false; }
        }
        queue_.clear();
        return true;
    }

    bool apply_assign(Literal l) {
        const Var x1 = l.var;
        const bool b = l.value;
        assigned_[x1] = b ? Tri::True : Tri::False;
        last_assigned_.push_back(l);

        if (in_r_[x1]) {
            if (var_part_empty(row(x1))) {
                if (const_bit(row(x1)) != b) return false;
                in_r_[x1] = 0;
                clear_row(row(x1));
            } else {
                // representative handoff: x1 <=> x2 (+) D (+) c and x1 := b
                // give x2 <=> D (+) c (+) b
                Var x2 = first_var(row(x1));
                std::uint64_t* nw = row(x2);
                std::copy(row(x1), row(x1) + words_, nw);
                toggle(nw, x2);
                if (b) toggle(nw, 0);
                in_r_[x1] = 0;
                clear_row(row(x1));
                in_r_[x2] = 1;
                for (Var s = 1; s <= k_; ++s) {
                    if (!in_r_[s] || s == x2) continue;
                    if (test(row(s), x2)) {
                        substitute_rep_into(row(s), x2);
                        check_collapsed(s);
                    }
                }
                check_collapsed(x2);
            }
        } else {
            // constant folding: drop bit x1 everywhere, flip constants if b
            for (Var s = 1; s <= k_; ++s) {
                if (!in_r_[s]) continue;
                if (test(row(s), x1)) {
                    toggle(row(s), x1);
                    if (b) toggle(row(s), 0);
                    check_collapsed(s);
                }
            }
        }

        if (ext_ && b) {
            for (Var sub : watch_occ_[x1]) {
                std::uint32_t left = --count_not_top_[sub];
                if (left == 0) {
                    queue_.push_back({sub, true});
                } else if (left == 1) {
                    Var rem = 0;
                    for (Var v : constituents_[sub])
                        if (assigned_[v] != Tri::True) { rem = v; break; }
                    if (assigned_[sub] == Tri::Unassigned && rem != 0 &&
                        assigned_[rem] == Tri::Unassigned) {
                        if (!apply_equiv(sub, rem)) return false;
                    }
                }
            }
        }
        return true;
    }

    /// The six substitution rules for x1 <=> x2, dispatched on membership of
    /// x1/x2 in R and occurrence of one in the other's clause.
    bool apply_equiv(Var x1, Var x2) {
        const bool r1 = in_r_[x1] != 0, r2 = in_r_[x2] != 0;
        if (!r1 && !r2) {
            // rename x1 -> x2 in every clause
            for (Var s = 1; s <= k_; ++s) {
                if (!in_r_[s] || !test(row(s), x1)) continue;
                toggle(row(s), x1);
                toggle(row(s), x2);
                check_collapsed(s);
            }
            return true;
        }
        if (r1 && !r2) {
            if (!test(row(x1), x2)) {
                // handoff: C_{x2} <- C_{x1}, then eliminate x2 elsewhere
                std::copy(row(x1), row(x1) + words_, row(x2));
                in_r_[x1] = 0;
                clear_row(row(x1));
                in_r_[x2] = 1;
                for (Var s = 1; s <= k_; ++s) {
                    if (!in_r_[s] || s == x2 || !test(row(s), x2)) continue;
                    substitute_rep_into(row(s), x2);
                    check_collapsed(s);
                }
                check_collapsed(x2);
                return true;
            }
            // x2 in C_{x1}: C_{x1} (+) x2 must vanish; re-root at x3 if one exists
            tmp_.assign(row(x1), row(x1) + words_);
            std::uint64_t* d = tmp_.data();
            toggle(d, x2);
            in_r_[x1] = 0;
            clear_row(row(x1));
            return install_zero_constraint(d);
        }
        if (!r1 && r2) {
            if (!test(row(x2), x1)) {
                // substitute x1 by C_{x2} in every clause containing it
                for (Var s = 1; s <= k_; ++s) {
                    if (!in_r_[s] || !test(row(s), x1)) continue;
                    toggle(row(s), x1);
                    xor_rows(row(s), row(x2));
                    check_collapsed(s);
                }
                return true;
            }
            // x1 in C_{x2}: C_{x2} (+) x1 must vanish; also rename x1 -> x2
            tmp_.assign(row(x2), row(x2) + words_);
            std::uint64_t* d = tmp_.data();
            toggle(d, x1);
            in_r_[x2] = 0;
            clear_row(row(x2));
            for (Var s = 1; s <= k_; ++s) {
                if (!in_r_[s] || !test(row(s), x1)) continue;
                toggle(row(s), x1);
                toggle(row(s), x2);
                check_collapsed(s);
            }
            return install_zero_constraint(d);
        }
        // both representatives: C_{x1} (+) C_{x2} must vanish
        tmp_.assign(row(x1), row(x1) + words_);
        std::uint64_t* d = tmp_.data();
        xor_rows(d, row(x2));
        if (var_part_empty(d))
            return !const_bit(d); // consistent duplicate keeps both rows
        in_r_[x1] = 0;
        clear_row(row(x1));
        in_r_[x2] = 0;
        clear_row(row(x2));
        return install_zero_constraint(d);
    }

    /// Install the constraint D = 0 held in tmp_ (variable part possibly
    /// empty): conflict if it collapses to 1, else re-root at its first
    /// variable and restore unicity.
    bool install_zero_constraint(std::uint64_t* d) {
        if (var_part_empty(d)) return !const_bit(d);
        Var x3 = first_var(d);
        toggle(d, x3);
        std::copy(d, d + words_, row(x3));
        in_r_[x3] = 1;
        for (Var s = 1; s <= k_; ++s) {
            if (!in_r_[s] || s == x3 || !test(row(s), x3)) continue;
            substitute_rep_into(row(s), x3);
            check_collapsed(s);
        }
        check_collapsed(x3);
        return true;
    }

    Var k_ = 0;
    std::uint32_t words_ = 1;
    bool ext_ = false;
    bool init_conflict_ = false;
    std::vector<std::uint64_t> rows_;
    std::vector<std::uint8_t> in_r_;
    std::vector<Tri> assigned_;
    std::vector<std::uint32_t> count_not_top_;
    std::vector<std::vector<Var>> watch_occ_; // input var -> watching sub vars
    std::vector<std::vector<Var>> constituents_;
    std::vector<std::uint64_t> tmp_;
    std::vector<Snapshot> snapshots_;
    LitVec queue_;
    LitVec last_assigned_;
};

} // namespace anfsat
