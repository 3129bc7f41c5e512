#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gf2n.hpp"

namespace anfsat {

/// Multivariate polynomial over GF(2) in a fixed number of field variables,
/// stored as the set of exponent vectors with nonzero (= 1) coefficient.
struct SymbolicPoly {
    std::size_t arity = 0;
    std::set<std::vector<unsigned>> terms;

    static SymbolicPoly zero(std::size_t arity) { return {arity, {}}; }

    static SymbolicPoly one(std::size_t arity) {
        SymbolicPoly p{arity, {}};
        p.terms.insert(std::vector<unsigned>(arity, 0));
        return p;
    }

    static SymbolicPoly term(std::size_t arity, std::vector<unsigned> exps) {
        if (exps.size() != arity) throw std::invalid_argument("exponent vector arity mismatch");
        SymbolicPoly p{arity, {}};
        p.terms.insert(std::move(exps));
        return p;
    }

    bool is_zero() const { return terms.empty(); }

    void toggle(const std::vector<unsigned>& e) {
        auto it = terms.find(e);
        if (it == terms.end()) terms.insert(e);
        else terms.erase(it);
    }

    friend SymbolicPoly operator+(const SymbolicPoly& a, const SymbolicPoly& b) {
        if (a.arity != b.arity) throw std::invalid_argument("arity mismatch");
        SymbolicPoly r = a;
        for (const auto& e : b.terms) r.toggle(e);
        return r;
    }

    friend SymbolicPoly operator*(const SymbolicPoly& a, const SymbolicPoly& b) {
        if (a.arity != b.arity) throw std::invalid_argument("arity mismatch");
        SymbolicPoly r{a.arity, {}};
        std::vector<unsigned> e(a.arity);
        for (const auto& ea : a.terms)
            for (const auto& eb : b.terms) {
                for (std::size_t i = 0; i < a.arity; ++i) e[i] = ea[i] + eb[i];
                r.toggle(e);
            }
        return r;
    }

    bool operator==(const SymbolicPoly& o) const { return arity == o.arity && terms == o.terms; }

    /// Evaluate over a binary field at one point per variable.
    std::uint64_t eval(const BinaryFieldContext& ctx, const std::vector<std::uint64_t>& vals) const {
        if (vals.size() != arity) throw std::invalid_argument("evaluation point arity mismatch");
        std::uint64_t acc = 0;
        for (const auto& e : terms) {
            std::uint64_t prod = 1;
            for (std::size_t i = 0; i < arity; ++i)
                if (e[i]) prod = ctx.mul(prod, ctx.pow(vals[i], e[i]));
            acc ^= prod;
        }
        return acc;
    }

    /// Apply a variable permutation: new variable i takes the role of old
    /// variable perm[i].
    SymbolicPoly permuted(const std::vector<std::size_t>& perm) const {
        if (perm.size() != arity) throw std::invalid_argument("permutation arity mismatch");
        SymbolicPoly r{arity, {}};
        std::vector<unsigned> e(arity);
        for (const auto& old : terms) {
            for (std::size_t i = 0; i < arity; ++i) e[i] = old[perm[i]];
            r.toggle(e);
        }
        return r;
    }

    unsigned degree_in(std::size_t var) const {
        unsigned d = 0;
        for (const auto& e : terms) d = std::max(d, e[var]);
        return d;
    }

    /// Coefficient of var^deg, returned with that variable's exponent zeroed.
    SymbolicPoly coeff_of(std::size_t var, unsigned deg) const {
        SymbolicPoly r{arity, {}};
        for (const auto& e : terms)
            if (e[var] == deg) {
                std::vector<unsigned> f = e;
                f[var] = 0;
                r.toggle(f);
            }
        return r;
    }

    /// Remove an unused variable position, shrinking the arity by one.
    SymbolicPoly dropped(std::size_t var) const {
        SymbolicPoly r{arity - 1, {}};
        for (const auto& e : terms) {
            if (e[var] != 0) throw std::logic_error("dropping a variable still in use");
            std::vector<unsigned> f;
            f.reserve(arity - 1);
            for (std::size_t i = 0; i < arity; ++i)
                if (i != var) f.push_back(e[i]);
            r.terms.insert(std::move(f));
        }
        return r;
    }
};

namespace detail {

/// X_i^2 X_j^2 + X_i^2 X_k^2 + X_i X_j X_k + X_j^2 X_k^2 + 1 embedded in a
/// polynomial ring of the given arity.
inline SymbolicPoly third_summation(std::size_t arity, std::size_t i, std::size_t j, std::size_t k) {
    SymbolicPoly p = SymbolicPoly::zero(arity);
    auto put = [&](std::initializer_list<std::pair<std::size_t, unsigned>> exps) {
        std::vector<unsigned> e(arity, 0);
        for (auto [v, d] : exps) e[v] = d;
        p.toggle(e);
    };
    put({{i, 2}, {j, 2}});
    put({{i, 2}, {k, 2}});
    put({{i, 1}, {j, 1}, {k, 1}});
    put({{j, 2}, {k, 2}});
    put({});
    return p;
}

/// Determinant of a square matrix of GF(2)-coefficient polynomials; in
/// characteristic 2 this is the permutation-sum with all signs equal.
inline SymbolicPoly gf2_determinant(const std::vector<std::vector<SymbolicPoly>>& m) {
    const std::size_t q = m.size();
    const std::size_t arity = m[0][0].arity;
    std::vector<std::size_t> perm(q);
    for (std::size_t i = 0; i < q; ++i) perm[i] = i;
    SymbolicPoly det = SymbolicPoly::zero(arity);
    std::sort(perm.begin(), perm.end());
    do {
        SymbolicPoly prod = SymbolicPoly::one(arity);
        bool dead = false;
        for (std::size_t i = 0; i < q && !dead; ++i) {
            prod = prod * m[i][perm[i]];
            dead = prod.is_zero();
        }
        if (!dead) det = det + prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

} // namespace detail

/// Summation polynomial of the given order:
///   order 2: X1 + X2
///   order 3: the five-term quartic above
///   order 4: Res_X(S3(X1, X2, X), S3(X3, X4, X)) via the 4x4 Sylvester
///            determinant of the two degree-2 polynomials in X.
inline SymbolicPoly summation_poly(unsigned order) {
    if (order == 2) {
        SymbolicPoly p = SymbolicPoly::zero(2);
        p.toggle({1, 0});
        p.toggle({0, 1});
        return p;
    }
    if (order == 3) return detail::third_summation(3, 0, 1, 2);
    if (order == 4) {
        const std::size_t X = 4; // eliminated variable, position 4 of 5
        SymbolicPoly A = detail::third_summation(5, 0, 1, X);
        SymbolicPoly B = detail::third_summation(5, 2, 3, X);
        if (A.degree_in(X) != 2 || B.degree_in(X) != 2)
            throw std::logic_error("expected degree 2 in the eliminated variable");
        SymbolicPoly a2 = A.coeff_of(X, 2), a1 = A.coeff_of(X, 1), a0 = A.coeff_of(X, 0);
        SymbolicPoly b2 = B.coeff_of(X, 2), b1 = B.coeff_of(X, 1), b0 = B.coeff_of(X, 0);
        SymbolicPoly z = SymbolicPoly::zero(5);
        std::vector<std::vector<SymbolicPoly>> sylvester = {
            {a2, a1, a0, z},
            {z, a2, a1, a0},
            {b2, b1, b0, z},
            {z, b2, b1, b0},
        };
        return detail::gf2_determinant(sylvester).dropped(X);
    }
    throw std::invalid_argument("summation polynomial order must be 2, 3 or 4");
}

} // namespace anfsat
