#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "anf.hpp"
#include "types.hpp"

namespace anfsat {

/// Variable interaction graph: an edge joins two variables whenever they
/// co-occur in some monomial of degree >= 2.
struct InteractionGraph {
    Var num_vars = 0;
    std::vector<std::pair<Var, Var>> edges; // first < second, sorted, unique
};

inline InteractionGraph interaction_graph(const AnfSystem& sys) {
    std::set<std::pair<Var, Var>> es;
    for (const AnfEquation& eq : sys.equations)
        for (const Monomial& m : eq.monomials)
            if (m.degree() >= 2)
                for (std::size_t i = 0; i + 1 < m.vars.size(); ++i)
                    for (std::size_t j = i + 1; j < m.vars.size(); ++j)
                        es.insert({m.vars[i], m.vars[j]});
    InteractionGraph g;
    g.num_vars = sys.num_vars;
    g.edges.assign(es.begin(), es.end());
    return g;
}

inline bool is_complete_graph(const InteractionGraph& g, const std::vector<Var>& verts) {
    std::set<std::pair<Var, Var>> es(g.edges.begin(), g.edges.end());
    for (std::size_t i = 0; i + 1 < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
            Var a = verts[i], b = verts[j];
            if (a > b) std::swap(a, b);
            if (!es.count({a, b})) return false;
        }
    return true;
}

struct BudgetExceeded : std::runtime_error {
    BudgetExceeded() : std::runtime_error("vertex cover search exceeded its node budget") {}
};

namespace detail {

struct MvcSearch {
    const std::vector<std::pair<Var, Var>>& edges;
    std::vector<char> in_cover;
    std::vector<Var> cur, best;
    bool have_best = false;
    std::uint64_t nodes = 0, budget;

    void run(std::size_t ei) {
        if (++nodes > budget) throw BudgetExceeded();
        while (ei < edges.size() &&
               (in_cover[edges[ei].first] || in_cover[edges[ei].second]))
            ++ei;
        if (ei == edges.size()) {
            if (!have_best || cur.size() < best.size()) {
                best = cur;
                have_best = true;
            }
            return;
        }
        if (have_best && cur.size() + 1 >= best.size()) return;
        const Var picks[2] = {edges[ei].first, edges[ei].second};
        for (Var w : picks) {
            in_cover[w] = 1;
            cur.push_back(w);
            run(ei);
            cur.pop_back();
            in_cover[w] = 0;
        }
    }
};

} // namespace detail

/// Exact minimum vertex cover by branch and bound on the lowest uncovered
/// edge. Deterministic: among equal-size optima it keeps the one found first
/// along the include-lower-endpoint-first search order. Returned ascending.
inline std::vector<Var> minimum_vertex_cover(const InteractionGraph& g,
                                             std::uint64_t node_budget = 100000000ULL) {
    detail::MvcSearch s{g.edges, std::vector<char>(g.num_vars + 1, 0), {}, {}, false, 0, node_budget};
    s.run(0);
    std::sort(s.best.begin(), s.best.end());
    return s.best;
}

/// Branching order induced by a cover: cover variables ascending, then every
/// remaining variable ascending.
inline std::vector<Var> order_from_cover(const std::vector<Var>& cover, Var num_vars) {
    std::vector<bool> in(num_vars + 1, false);
    std::vector<Var> order;
    for (Var v : cover) {
        if (v == 0 || v > num_vars || in[v])
            throw std::invalid_argument("cover is not a set of variables in range");
        in[v] = true;
    }
    order = cover;
    std::sort(order.begin(), order.end());
    for (Var v = 1; v <= num_vars; ++v)
        if (!in[v]) order.push_back(v);
    return order;
}

struct OrderFile {
    std::vector<Var> order;
    std::size_t k_prime = 0;
};

inline void write_order_file(std::ostream& out, const std::vector<Var>& cover, Var num_vars) {
    out << "c mvc k_prime=" << cover.size() << "\n";
    for (Var v : order_from_cover(cover, num_vars)) out << v << "\n";
}

inline OrderFile parse_order_file(std::istream& in) {
    OrderFile of;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "c") {
            std::string kind, kv;
            if (ls >> kind >> kv && kind == "mvc" && kv.rfind("k_prime=", 0) == 0) {
                of.k_prime = std::stoul(kv.substr(8));
                header = true;
            }
            continue;
        }
        try {
            unsigned long v = std::stoul(tok);
            if (v == 0) throw std::invalid_argument("zero");
            of.order.push_back(static_cast<Var>(v));
        } catch (const std::exception&) {
            throw ParseError("order file error at line " + std::to_string(lineno) +
                             ": expected a variable index, got '" + tok + "'");
        }
    }
    if (!header) throw ParseError("order file error: missing 'c mvc k_prime=' header");
    if (of.k_prime > of.order.size())
        throw ParseError("order file error: k_prime exceeds the number of variables");
    std::vector<bool> seen(of.order.size() + 1, false);
    for (Var v : of.order) {
        if (v > of.order.size() || seen[v])
            throw ParseError("order file error: not a permutation of 1..n");
        seen[v] = true;
    }
    return of;
}

} // namespace anfsat
