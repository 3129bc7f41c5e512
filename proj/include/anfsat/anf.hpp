#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "types.hpp"

namespace anfsat {

/// Product of distinct variables; the empty product is the constant 1.
struct Monomial {
    std::vector<Var> vars; // sorted, no duplicates

    bool is_constant() const { return vars.empty(); }
    std::size_t degree() const { return vars.size(); }

    static Monomial constant() { return {}; }
    static Monomial of(std::initializer_list<Var> vs) {
        Monomial m{std::vector<Var>(vs)};
        m.normalize();
        return m;
    }

    // x*x = x over GF(2): sort and drop duplicates.
    void normalize() {
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    }

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Canonical order used when printing an equation: variable products
/// lexicographically, the constant term last.
inline bool print_order(const Monomial& a, const Monomial& b) {
    if (a.is_constant() != b.is_constant()) return b.is_constant();
    return a.vars < b.vars;
}

/// XOR of monomials, equated to 0.
struct AnfEquation {
    std::vector<Monomial> monomials; // canonical: print_order-sorted, distinct

    bool has_constant() const {
        return !monomials.empty() && monomials.back().is_constant();
    }

    /// Toggle a monomial's presence (GF(2) addition).
    void add(Monomial m) {
        m.normalize();
        auto it = std::lower_bound(monomials.begin(), monomials.end(), m, print_order);
        if (it != monomials.end() && *it == m)
            monomials.erase(it);
        else
            monomials.insert(it, std::move(m));
    }

    friend bool operator==(const AnfEquation&, const AnfEquation&) = default;
};

/// A system of ANF equations over variables 1..num_vars.
struct AnfSystem {
    Var num_vars = 0;
    std::vector<AnfEquation> equations;

    friend bool operator==(const AnfSystem&, const AnfSystem&) = default;
};

/// Evaluate every equation under a full assignment (index 0 = variable 1).
/// Entry i is true iff equation i is satisfied (sums to 0).
inline std::vector<bool> evaluate(const AnfSystem& sys, const std::vector<bool>& assignment) {
    if (assignment.size() != sys.num_vars)
        throw std::invalid_argument("assignment size does not match variable count");
    std::vector<bool> out;
    out.reserve(sys.equations.size());
    for (const AnfEquation& eq : sys.equations) {
        bool sum = false;
        for (const Monomial& m : eq.monomials) {
            bool prod = true;
            for (Var v : m.vars)
                if (!assignment[v - 1]) { prod = false; break; }
            sum ^= prod;
        }
        out.push_back(!sum);
    }
    return out;
}

inline bool satisfies(const AnfSystem& sys, const std::vector<bool>& assignment) {
    auto per_eq = evaluate(sys, assignment);
    return std::all_of(per_eq.begin(), per_eq.end(), [](bool b) { return b; });
}

struct AnfFile {
    AnfSystem system;
    std::vector<std::string> comments; // "c ..." lines, header stripped
};

/// Parse the ANF format:
///   c <comment>
///   p anf <num_vars> <num_equations>
///   <monomial> <monomial> ... 0        (one equation per line)
/// where a monomial is "T" (constant 1) or "."-joined variable indices.
inline AnfFile parse_anf(std::istream& in) {
    AnfFile file;
    AnfSystem& sys = file.system;
    bool have_header = false;
    std::size_t declared_eqs = 0;
    std::string line;
    std::size_t lineno = 0;

    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("anf parse error at line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue; // blank
        if (tok == "c") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
            file.comments.push_back(rest);
            continue;
        }
        if (tok == "p") {
            if (have_header) fail("duplicate header");
            std::string fmt;
            long long nv = -1, ne = -1;
            if (!(ls >> fmt >> nv >> ne) || fmt != "anf" || nv < 0 || ne < 0)
                fail("malformed header, expected 'p anf <vars> <equations>'");
            sys.num_vars = static_cast<Var>(nv);
            declared_eqs = static_cast<std::size_t>(ne);
            have_header = true;
            continue;
        }
        if (!have_header) fail("equation before 'p anf' header");

        AnfEquation eq;
        bool terminated = false;
        do {
            if (tok == "0") { terminated = true; break; }
            Monomial m;
            if (tok == "T") {
                // constant 1
            } else {
                std::size_t pos = 0;
                while (pos < tok.size()) {
                    std::size_t dot = tok.find('.', pos);
                    std::string part = tok.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
                    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
                        fail("bad monomial token '" + tok + "'");
                    unsigned long long v = std::stoull(part);
                    if (v == 0 || v > sys.num_vars)
                        fail("variable index " + part + " out of range 1.." + std::to_string(sys.num_vars));
                    m.vars.push_back(static_cast<Var>(v));
                    if (dot == std::string::npos) break;
                    pos = dot + 1;
                    if (pos == tok.size()) fail("bad monomial token '" + tok + "'");
                }
                m.normalize();
            }
            eq.add(std::move(m));
        } while (ls >> tok);
        if (!terminated) fail("equation not terminated by 0");
        if (ls >> tok) fail("trailing token '" + tok + "' after terminator");
        sys.equations.push_back(std::move(eq));
    }
    if (!have_header) {
        lineno = 0;
        fail("missing 'p anf' header");
    }
    if (sys.equations.size() != declared_eqs) {
        lineno = 0;
        fail("header declares " + std::to_string(declared_eqs) + " equations but file has " +
             std::to_string(sys.equations.size()));
    }
    return file;
}

inline AnfFile parse_anf(const std::string& text) {
    std::istringstream in(text);
    return parse_anf(in);
}

inline void write_anf(std::ostream& out, const AnfSystem& sys,
                      const std::vector<std::string>& comments = {}) {
    for (const std::string& c : comments) out << "c " << c << '\n';
    out << "p anf " << sys.num_vars << ' ' << sys.equations.size() << '\n';
    for (const AnfEquation& eq : sys.equations) {
        for (const Monomial& m : eq.monomials) {
            if (m.is_constant()) {
                out << "T ";
            } else {
                for (std::size_t i = 0; i < m.vars.size(); ++i)
                    out << (i ? "." : "") << m.vars[i];
                out << ' ';
            }
        }
        out << "0\n";
    }
}

inline std::string write_anf(const AnfSystem& sys, const std::vector<std::string>& comments = {}) {
    std::ostringstream out;
    write_anf(out, sys, comments);
    return out.str();
}

/// Substitute a partial assignment into a system, dropping satisfied constant
/// terms and fixed variables; duplicate equations collapse, empty ones vanish.
/// Variables keep their indices. values[i] pairs with vars[i].
inline AnfSystem substitute(const AnfSystem& sys, const std::vector<Var>& vars,
                            const std::vector<bool>& values) {
    std::vector<Tri> fixed(sys.num_vars + 1, Tri::Unassigned);
    for (std::size_t i = 0; i < vars.size(); ++i)
        fixed[vars[i]] = values[i] ? Tri::True : Tri::False;
    AnfSystem out;
    out.num_vars = sys.num_vars;
    std::set<std::vector<Monomial>> seen;
    for (const AnfEquation& eq : sys.equations) {
        AnfEquation reduced;
        for (const Monomial& m : eq.monomials) {
            Monomial r;
            bool zero = false;
            for (Var v : m.vars) {
                if (fixed[v] == Tri::False) { zero = true; break; }
                if (fixed[v] == Tri::Unassigned) r.vars.push_back(v);
            }
            if (!zero) reduced.add(std::move(r));
        }
        if (reduced.monomials.empty()) continue; // 0 = 0
        if (seen.insert(reduced.monomials).second)
            out.equations.push_back(std::move(reduced));
    }
    return out;
}

} // namespace anfsat
