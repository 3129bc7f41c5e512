#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "anf.hpp"
#include "cnf_engine.hpp"
#include "cnf_xor.hpp"
#include "types.hpp"
#include "xorgauss_engine.hpp"
#include "xorset_engine.hpp"

namespace anfsat {

enum class XgMode { Off, Xg, XgExt };

inline const char* to_string(XgMode m) {
    switch (m) {
        case XgMode::Off: return "off";
        case XgMode::Xg: return "xg";
        case XgMode::XgExt: return "xg_ext";
    }
    return "?";
}

struct SolverConfig {
    bool xorset_enabled = true;
    XgMode xg_mode = XgMode::Off;
    std::vector<Var> branching_order; // permutation of 1..num_original
    bool value_true_first = true;
    bool find_all = false;
    std::vector<Var> probe_cover; // nonempty: instrument the post-cover regime
};

enum class Status { Sat, Unsat };

struct SolveResult {
    Status status = Status::Unsat;
    std::vector<std::vector<bool>> models; // over original variables
    std::uint64_t conflicts = 0;           // failed assign calls, any depth
    std::uint64_t nodes = 0;               // branch-value attempts at decisions
    std::uint64_t propagations = 0;        // non-decision literals assigned
    double time_s = 0.0;
    // probe_cover instrumentation
    std::uint64_t probe_branches = 0;          // branches that completed the cover
    std::uint64_t decisions_below_cover = 0;   // decision points after cover completion
    std::uint64_t nonlinear_at_cover = 0;      // monomials still joining >= 2 open variables then
    std::uint64_t undetermined_at_cover = 0;   // monomials without a settled value then
};

/// Branching order used when none is supplied: variables in first-occurrence
/// order over the system's equations, unseen variables appended ascending.
inline std::vector<Var> default_order(const AnfSystem& sys) {
    std::vector<Var> order;
    std::vector<bool> seen(sys.num_vars + 1, false);
    for (const AnfEquation& eq : sys.equations)
        for (const Monomial& m : eq.monomials)
            for (Var v : m.vars)
                if (!seen[v]) { seen[v] = true; order.push_back(v); }
    for (Var v = 1; v <= sys.num_vars; ++v)
        if (!seen[v]) order.push_back(v);
    return order;
}

/// Complete search over a CNF-XOR formula with synchronized unit propagation,
/// parity propagation and dynamic Gaussian elimination. No learning, no
/// restarts; chronological backtracking only.
class Solver {
public:
    Solver(const CnfXorFormula& formula, const AnfSystem* system, SolverConfig config)
        : f_(formula), sys_(system), cfg_(std::move(config)) {
        if (cfg_.branching_order.empty())
            throw std::invalid_argument("branching order must be supplied");
        std::vector<bool> seen(f_.num_original + 1, false);
        for (Var v : cfg_.branching_order) {
            if (v == 0 || v > f_.num_original || seen[v])
                throw std::invalid_argument("branching order is not a permutation of the input variables");
            seen[v] = true;
        }
        if (cfg_.branching_order.size() != f_.num_original)
            throw std::invalid_argument("branching order is not a permutation of the input variables");
        use_xg_ = cfg_.xg_mode != XgMode::Off;
        cnf_ = CnfEngine(f_.num_vars, f_.or_clauses);
        if (cfg_.xorset_enabled) xorset_ = XorsetEngine(f_.num_vars, f_.xor_clauses);
        if (use_xg_)
            xg_ = XorgaussEngine(f_.num_vars, f_.xor_clauses, f_.monomial_defs,
                                 cfg_.xg_mode == XgMode::XgExt);
    }

    SolveResult solve() {
        auto t0 = std::chrono::steady_clock::now();
        res_ = SolveResult{};
        bool root_ok = init_root();
        if (root_ok) {
            bool parent_done = probe_active() && cover_done();
            if (parent_done) probe_check();
            search(parent_done);
        }
        res_.status = res_.models.empty() ? Status::Unsat : Status::Sat;
        res_.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res_;
    }

private:
    /// One synchronized assignment: CNF and XORSET run to a joint fixpoint
    /// while the batch headed for the Gaussian store accumulates; the store
    /// then consumes the batch and its own propagations re-enter the loop.
    bool assign(Literal l, bool is_decision) {
        LitVec pending{l};
        std::uint64_t newly = 0;
        while (true) {
            xg_batch_.clear();
            while (!pending.empty()) {
                if (!cnf_.set(pending)) return false;
                pending = cnf_.last_assigned();
                newly += pending.size();
                xg_batch_.insert(xg_batch_.end(), pending.begin(), pending.end());
                if (cfg_.xorset_enabled) {
                    if (!xorset_.set(pending)) return false;
                    pending = xorset_.last_assigned();
                    xg_batch_.insert(xg_batch_.end(), pending.begin(), pending.end());
                }
            }
            if (!use_xg_ || xg_batch_.empty()) break;
            if (!xg_.set(xg_batch_)) return false;
            pending = xg_.last_assigned();
            if (pending.empty()) break;
        }
        res_.propagations += newly - (is_decision && newly > 0 ? 1 : 0);
        return true;
    }

    bool init_root() {
        if (cnf_.has_empty_clause()) return false;
        if (cfg_.xorset_enabled && xorset_.has_violated_clause()) return false;
        if (use_xg_ && xg_.init_conflict()) return false;
        LitVec units;
        for (const OrClause& c : f_.or_clauses)
            if (c.lits.size() == 1) units.push_back(c.lits[0]);
        for (const XorClause& c : f_.xor_clauses)
            if (c.vars.size() == 1) units.push_back({c.vars[0], c.constant});
        if (use_xg_) {
            LitVec us = xg_.initial_units();
            units.insert(units.end(), us.begin(), us.end());
        }
        for (Literal u : units) {
            Tri cur = cnf_.value(u.var);
            if (cur != Tri::Unassigned && (cur == Tri::True) == u.value) continue;
            if (!assign(u, false)) { ++res_.conflicts; return false; }
        }
        if (!cfg_.xorset_enabled && !use_xg_) return true;
        return true;
    }

    enum class Walk { SatStop, Exhausted };

    Walk search(bool parent_cover_done) {
        Var v = 0;
        for (Var cand : cfg_.branching_order)
            if (cnf_.value(cand) == Tri::Unassigned) { v = cand; break; }
        if (v == 0) return on_leaf();

        bool below = probe_active() && parent_cover_done;
        if (below) ++res_.decisions_below_cover;

        const bool first = cfg_.value_true_first;
        for (bool val : {first, !first}) {
            ++res_.nodes;
            push_all();
            if (assign({v, val}, true)) {
                bool done = parent_cover_done;
                if (probe_active() && !done && cover_done()) {
                    done = true;
                    probe_check();
                }
                if (search(done) == Walk::SatStop) return Walk::SatStop;
            } else {
                ++res_.conflicts;
            }
            backtrack_all();
        }
        return Walk::Exhausted;
    }

    Walk on_leaf() {
        std::vector<bool> model(f_.num_original);
        for (Var v = 1; v <= f_.num_original; ++v) {
            if (cnf_.value(v) == Tri::Unassigned)
                throw std::logic_error("unassigned input variable at leaf");
            model[v - 1] = cnf_.value(v) == Tri::True;
        }
        if (!model_checks_out()) {
            if (cfg_.xorset_enabled || use_xg_)
                throw std::logic_error("leaf assignment fails verification: engine defect");
            return Walk::Exhausted; // parity engines disabled: reject and go on
        }
        res_.models.push_back(std::move(model));
        return cfg_.find_all ? Walk::Exhausted : Walk::SatStop;
    }

    /// Engine-independent check of the full assignment against the formula,
    /// plus the source system when linked.
    bool model_checks_out() const {
        std::vector<bool> full(f_.num_vars + 1);
        for (Var v = 1; v <= f_.num_vars; ++v) {
            if (cnf_.value(v) == Tri::Unassigned)
                throw std::logic_error("unassigned variable at leaf");
            full[v] = cnf_.value(v) == Tri::True;
        }
        for (const OrClause& c : f_.or_clauses) {
            bool sat = false;
            for (const Literal& l : c.lits)
                if (full[l.var] == l.value) { sat = true; break; }
            if (!sat) return false;
        }
        for (const XorClause& c : f_.xor_clauses) {
            bool parity = false;
            for (Var v : c.vars) parity = parity != full[v];
            if (parity != c.constant) return false;
        }
        if (sys_) {
            std::vector<bool> model(full.begin() + 1, full.begin() + 1 + f_.num_original);
            if (!satisfies(*sys_, model)) return false;
        }
        return true;
    }

    bool probe_active() const { return !cfg_.probe_cover.empty(); }

    bool cover_done() const {
        for (Var v : cfg_.probe_cover)
            if (cnf_.value(v) == Tri::Unassigned) return false;
        return true;
    }

    /// At cover completion, classify each monomial definition. With a false
    /// constituent or all constituents true its value is settled. One open
    /// constituent leaves it equivalent to that variable (linear); two or more
    /// leave it genuinely nonlinear.
    void probe_check() {
        ++res_.probe_branches;
        for (const MonomialDef& d : f_.monomial_defs) {
            bool any_false = false;
            std::uint32_t open = 0;
            for (Var v : d.constituents) {
                Tri t = cnf_.value(v);
                if (t == Tri::False) any_false = true;
                if (t == Tri::Unassigned) ++open;
            }
            if (any_false) continue;
            if (open >= 2) ++res_.nonlinear_at_cover;
            if (open >= 1) ++res_.undetermined_at_cover;
        }
    }

    void push_all() {
        ++level_;
        cnf_.push_level();
        if (cfg_.xorset_enabled) xorset_.push_level();
        if (use_xg_) xg_.push_level();
    }

    void backtrack_all() {
        --level_;
        cnf_.backtrack_to(level_);
        if (cfg_.xorset_enabled) xorset_.backtrack_to(level_);
        if (use_xg_) xg_.backtrack_to(level_);
    }

    const CnfXorFormula& f_;
    const AnfSystem* sys_;
    SolverConfig cfg_;
    CnfEngine cnf_;
    XorsetEngine xorset_;
    XorgaussEngine xg_;
    bool use_xg_ = false;
    std::size_t level_ = 0;
    LitVec xg_batch_;
    SolveResult res_;
};

/// Convenience wrapper: convert, pick the default order if none given, solve.
inline SolveResult solve_system(const AnfSystem& sys, SolverConfig cfg) {
    CnfXorFormula f = to_cnf_xor(sys);
    if (cfg.branching_order.empty()) cfg.branching_order = default_order(sys);
    Solver s(f, &sys, std::move(cfg));
    return s.solve();
}

} // namespace anfsat
