#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "anf.hpp"
#include "gf2n.hpp"
#include "sympoly.hpp"
#include "types.hpp"

namespace anfsat {

/// Polynomial in Boolean variables with binary-field coefficients. A monomial
/// is a bit mask over at most 64 Boolean variables; multiplication is
/// idempotent in the Boolean part (x^2 = x) and field multiplication in the
/// coefficient part.
struct BoolFieldPoly {
    std::map<std::uint64_t, std::uint64_t> terms; // monomial mask -> field coeff

    static BoolFieldPoly constant(std::uint64_t c) {
        BoolFieldPoly p;
        if (c) p.terms[0] = c;
        return p;
    }

    void add_term(std::uint64_t mask, std::uint64_t coeff) {
        if (!coeff) return;
        auto [it, fresh] = terms.emplace(mask, coeff);
        if (!fresh) {
            it->second ^= coeff;
            if (!it->second) terms.erase(it);
        }
    }

    BoolFieldPoly mul(const BoolFieldPoly& o, const BinaryFieldContext& ctx) const {
        BoolFieldPoly r;
        for (const auto& [ma, ca] : terms)
            for (const auto& [mb, cb] : o.terms)
                r.add_term(ma | mb, ctx.mul(ca, cb));
        return r;
    }

    BoolFieldPoly pow(unsigned e, const BinaryFieldContext& ctx) const {
        BoolFieldPoly r = constant(1);
        for (unsigned i = 0; i < e; ++i) r = r.mul(*this, ctx);
        return r;
    }
};

/// Expand a symbolic polynomial over GF(2^n) into n Boolean equations by
/// writing each free field variable as l Boolean unknowns over the polynomial
/// basis 1, t, ..., t^(l-1) and collecting the coefficient of each basis
/// element t^0..t^(n-1). Free variables are assigned bit-variable blocks in
/// ascending variable order: the i-th free variable (0-based) owns
/// x_{i*l+1} .. x_{i*l+l}.
inline AnfSystem weil_descent(const SymbolicPoly& poly, const BinaryFieldContext& ctx,
                              unsigned l, const std::map<std::size_t, std::uint64_t>& fixed_values) {
    const unsigned n = ctx.degree();
    if (l == 0 || l > n) throw std::invalid_argument("bits per variable must be in [1, n]");
    std::vector<std::size_t> free_vars;
    for (std::size_t v = 0; v < poly.arity; ++v)
        if (!fixed_values.count(v)) free_vars.push_back(v);
    for (const auto& [v, val] : fixed_values) {
        if (v >= poly.arity) throw std::invalid_argument("fixed variable out of range");
        if (val > ctx.mask()) throw std::invalid_argument("fixed value is not an n-bit element");
    }
    if (free_vars.size() * l > 64)
        throw std::invalid_argument("descent would need more than 64 Boolean variables");

    std::vector<BoolFieldPoly> var_poly(poly.arity);
    for (const auto& [v, val] : fixed_values) var_poly[v] = BoolFieldPoly::constant(val);
    for (std::size_t i = 0; i < free_vars.size(); ++i) {
        BoolFieldPoly p;
        for (unsigned j = 0; j < l; ++j)
            p.add_term(1ULL << (i * l + j), 1ULL << j);
        var_poly[free_vars[i]] = p;
    }

    BoolFieldPoly acc;
    for (const auto& e : poly.terms) {
        BoolFieldPoly prod = BoolFieldPoly::constant(1);
        for (std::size_t v = 0; v < poly.arity; ++v)
            if (e[v]) prod = prod.mul(var_poly[v].pow(e[v], ctx), ctx);
        for (const auto& [mask, coeff] : prod.terms) acc.add_term(mask, coeff);
    }

    AnfSystem sys;
    sys.num_vars = static_cast<Var>(free_vars.size() * l);
    sys.equations.resize(n);
    for (const auto& [mask, coeff] : acc.terms) {
        Monomial m;
        for (unsigned b = 0; b < 64; ++b)
            if (mask & (1ULL << b)) m.vars.push_back(static_cast<Var>(b + 1));
        for (unsigned b = 0; b < n; ++b)
            if (coeff & (1ULL << b)) sys.equations[b].add(m);
    }
    return sys;
}

enum class GenMode { Planted, Random };

struct InstanceSpec {
    unsigned n = 0;      // field extension degree
    unsigned m = 0;      // points to decompose (2 or 3)
    unsigned l = 0;      // Boolean unknowns per point
    std::uint64_t seed = 0;
    GenMode mode = GenMode::Random;
};

struct GeneratedInstance {
    AnfSystem system;
    std::vector<std::string> comments;
    std::optional<std::vector<bool>> planted; // model over x_1..x_{ml}
};

/// Deterministic instance generation. The target coordinate is a nonzero
/// seed-derived field element fixed into the last variable of the summation
/// polynomial. Planted mode then adjusts only each equation's constant term
/// so a seed-drawn assignment becomes a model.
inline GeneratedInstance generate_instance(const InstanceSpec& spec) {
    if (spec.m != 2 && spec.m != 3)
        throw std::invalid_argument("only 2- and 3-point decompositions are supported");
    BinaryFieldContext ctx(spec.n);
    SymbolicPoly s = summation_poly(spec.m + 1);
    std::mt19937_64 rng(spec.seed);
    std::uint64_t target = 0;
    while (target == 0) target = rng() & ctx.mask();

    GeneratedInstance out;
    out.system = weil_descent(s, ctx, spec.l, {{spec.m, target}});

    if (spec.mode == GenMode::Planted) {
        std::vector<bool> model(out.system.num_vars);
        for (std::size_t i = 0; i < model.size(); ++i) model[i] = rng() & 1;
        std::vector<bool> ok = evaluate(out.system, model);
        for (std::size_t e = 0; e < ok.size(); ++e)
            if (!ok[e]) out.system.equations[e].add(Monomial::constant());
        out.planted = std::move(model);
    }

    std::ostringstream meta;
    meta << "n=" << spec.n << " m=" << spec.m << " l=" << spec.l << " seed=" << spec.seed
         << " mode=" << (spec.mode == GenMode::Planted ? "planted" : "random");
    out.comments.push_back(meta.str());
    if (out.planted) {
        std::string bits;
        for (bool b : *out.planted) bits.push_back(b ? '1' : '0');
        out.comments.push_back("planted=" + bits);
    }
    return out;
}

} // namespace anfsat
