#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "anf.hpp"
#include "types.hpp"

namespace anfsat {

/// Disjunction of signed literals.
struct OrClause {
    std::vector<Literal> lits; // {var, value}: value=false means negated

    friend bool operator==(const OrClause&, const OrClause&) = default;
};

/// XOR of positive variables equated to a constant:  (+)vars = constant.
struct XorClause {
    std::vector<Var> vars; // sorted, distinct
    bool constant = false; // parity target

    friend bool operator==(const XorClause&, const XorClause&) = default;
};

/// One substitution variable standing for a product of input variables.
struct MonomialDef {
    Var sub_var = 0;
    std::vector<Var> constituents; // sorted, degree >= 2

    friend bool operator==(const MonomialDef&, const MonomialDef&) = default;
};

struct CnfXorFormula {
    Var num_original = 0; // input variables 1..num_original
    Var num_vars = 0;     // including substitution variables
    std::vector<OrClause> or_clauses;
    std::vector<XorClause> xor_clauses;
    std::vector<MonomialDef> monomial_defs; // sub_var ascending
};

/// Tseitin-style conversion: every nonlinear monomial gets a substitution
/// variable x' with clauses (x' | ~v1 | ... | ~vd), (~x' | v1), ..., (~x' | vd);
/// each equation becomes one XOR clause whose constant is the presence of the
/// constant-1 term. Substitution variables are numbered in first-appearance
/// order; a monomial shared between equations gets a single variable.
inline CnfXorFormula to_cnf_xor(const AnfSystem& sys) {
    CnfXorFormula f;
    f.num_original = sys.num_vars;
    f.num_vars = sys.num_vars;
    std::map<std::vector<Var>, Var> sub_of;

    auto sub_var_for = [&](const Monomial& m) -> Var {
        auto it = sub_of.find(m.vars);
        if (it != sub_of.end()) return it->second;
        Var s = ++f.num_vars;
        sub_of.emplace(m.vars, s);
        f.monomial_defs.push_back({s, m.vars});
        OrClause wide;
        wide.lits.push_back(pos(s));
        for (Var v : m.vars) wide.lits.push_back(neg(v));
        f.or_clauses.push_back(std::move(wide));
        for (Var v : m.vars) f.or_clauses.push_back({{neg(s), pos(v)}});
        return s;
    };

    for (const AnfEquation& eq : sys.equations) {
        XorClause xc;
        for (const Monomial& m : eq.monomials) {
            if (m.is_constant())
                xc.constant = true;
            else if (m.degree() == 1)
                xc.vars.push_back(m.vars[0]);
            else
                xc.vars.push_back(sub_var_for(m));
        }
        std::sort(xc.vars.begin(), xc.vars.end());
        f.xor_clauses.push_back(std::move(xc));
    }
    return f;
}

/// Expand one XOR clause into the 2^(w-1) OR clauses excluding every assignment
/// of the wrong parity. Width 0 with constant true has no CNF image.
inline std::vector<OrClause> xor_to_cnf(const XorClause& xc) {
    const std::size_t w = xc.vars.size();
    if (w == 0) {
        if (xc.constant)
            throw std::invalid_argument("empty XOR clause with parity 1 is unsatisfiable");
        return {};
    }
    std::vector<OrClause> out;
    out.reserve(std::size_t(1) << (w - 1));
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << w); ++bits) {
        bool parity = __builtin_parityll(bits);
        if (parity == xc.constant) continue; // satisfying assignment, keep it
        OrClause c;
        c.lits.reserve(w);
        for (std::size_t i = 0; i < w; ++i) {
            bool bit = (bits >> i) & 1;
            c.lits.push_back({xc.vars[i], !bit}); // literal falsified by this assignment
        }
        out.push_back(std::move(c));
    }
    return out;
}

enum class DimacsMode { Cnf, CnfXor };

/// DIMACS writer. In CnfXor mode XOR clauses become "x" lines listing the
/// variables ascending, the first literal negated iff the parity target is odd.
/// In Cnf mode each XOR clause is expanded via xor_to_cnf; widths above
/// max_xor_width are refused.
inline void write_dimacs(std::ostream& out, const CnfXorFormula& f, DimacsMode mode,
                         unsigned max_xor_width = 20) {
    std::vector<OrClause> expanded;
    std::size_t n_clauses = f.or_clauses.size();
    if (mode == DimacsMode::CnfXor) {
        for (const XorClause& xc : f.xor_clauses)
            if (!(xc.vars.empty() && !xc.constant)) ++n_clauses; // "0 = 0" emits nothing
    } else {
        for (const XorClause& xc : f.xor_clauses) {
            if (xc.vars.size() > max_xor_width)
                throw std::invalid_argument("XOR clause of width " + std::to_string(xc.vars.size()) +
                                            " exceeds CNF expansion cap " + std::to_string(max_xor_width));
            if (xc.vars.empty() && xc.constant) {
                expanded.push_back({}); // empty clause: unsatisfiable
                continue;
            }
            auto cs = xor_to_cnf(xc);
            expanded.insert(expanded.end(), cs.begin(), cs.end());
        }
        n_clauses += expanded.size();
    }

    out << "p cnf " << f.num_vars << ' ' << n_clauses << '\n';
    auto put_or = [&](const OrClause& c) {
        for (const Literal& l : c.lits) out << (l.value ? int(l.var) : -int(l.var)) << ' ';
        out << "0\n";
    };
    for (const OrClause& c : f.or_clauses) put_or(c);
    if (mode == DimacsMode::CnfXor) {
        for (const XorClause& xc : f.xor_clauses) {
            if (xc.vars.empty()) {
                if (xc.constant) out << "0\n"; // empty clause; parity-0 case is a tautology, dropped
                continue;
            }
            out << "x ";
            for (std::size_t i = 0; i < xc.vars.size(); ++i) {
                long long v = xc.vars[i];
                if (i == 0 && xc.constant) v = -v;
                out << v << ' ';
            }
            out << "0\n";
        }
    } else {
        for (const OrClause& c : expanded) put_or(c);
    }
}

inline std::string write_dimacs(const CnfXorFormula& f, DimacsMode mode,
                                unsigned max_xor_width = 20) {
    std::ostringstream out;
    write_dimacs(out, f, mode, max_xor_width);
    return out.str();
}

/// Parse DIMACS with optional "x" lines. Substitution-variable structure is not
/// part of the format, so monomial_defs is empty and num_original = num_vars.
inline CnfXorFormula parse_dimacs(std::istream& in) {
    CnfXorFormula f;
    bool have_header = false;
    std::size_t declared = 0;
    std::string line;
    std::size_t lineno = 0;

    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("dimacs parse error at line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "p") {
            std::string fmt;
            long long nv = -1, nc = -1;
            if (!(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0)
                fail("malformed header, expected 'p cnf <vars> <clauses>'");
            f.num_vars = f.num_original = static_cast<Var>(nv);
            declared = static_cast<std::size_t>(nc);
            have_header = true;
            continue;
        }
        if (!have_header) fail("clause before 'p cnf' header");

        bool is_xor = (tok == "x");
        if (is_xor && !(ls >> tok)) fail("empty x line");

        std::vector<long long> lits;
        bool terminated = false;
        do {
            long long v;
            try {
                std::size_t used = 0;
                v = std::stoll(tok, &used);
                if (used != tok.size()) fail("bad literal '" + tok + "'");
            } catch (const std::logic_error&) {
                fail("bad literal '" + tok + "'");
                v = 0;
            }
            if (v == 0) { terminated = true; break; }
            if (std::llabs(v) > f.num_vars)
                fail("variable " + std::to_string(std::llabs(v)) + " out of range");
            lits.push_back(v);
        } while (ls >> tok);
        if (!terminated) fail("clause not terminated by 0");
        if (ls >> tok) fail("trailing token after terminator");

        if (is_xor) {
            XorClause xc;
            for (std::size_t i = 0; i < lits.size(); ++i) {
                if (lits[i] < 0) {
                    if (i != 0) fail("negative literal past the first in an x line");
                    xc.constant = true;
                }
                xc.vars.push_back(static_cast<Var>(std::llabs(lits[i])));
            }
            std::sort(xc.vars.begin(), xc.vars.end());
            if (std::adjacent_find(xc.vars.begin(), xc.vars.end()) != xc.vars.end())
                fail("repeated variable in an x line");
            f.xor_clauses.push_back(std::move(xc));
        } else {
            OrClause c;
            for (long long v : lits)
                c.lits.push_back({static_cast<Var>(std::llabs(v)), v > 0});
            f.or_clauses.push_back(std::move(c));
        }
    }
    if (!have_header) {
        lineno = 0;
        fail("missing 'p cnf' header");
    }
    if (f.or_clauses.size() + f.xor_clauses.size() != declared) {
        lineno = 0;
        fail("header declares " + std::to_string(declared) + " clauses but file has " +
             std::to_string(f.or_clauses.size() + f.xor_clauses.size()));
    }
    return f;
}

inline CnfXorFormula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

} // namespace anfsat
