#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include <anfsat/cnf_xor.hpp>
#include <anfsat/xorgauss_engine.hpp>

#include "oracles.hpp"
#include "testgen.hpp"

using namespace anfsat;

namespace {

std::vector<XorClause> assigned_units(const XorgaussEngine& e) {
    std::vector<XorClause> out;
    for (Var v = 1; v <= e.num_vars(); ++v)
        if (e.value(v) != Tri::Unassigned) out.push_back({{v}, e.value(v) == Tri::True});
    return out;
}

std::vector<XorClause> concat(std::vector<XorClause> a, const std::vector<XorClause>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

TEST_CASE("inserted clauses are rooted at their lowest variable") {
    XorgaussEngine e(7, {{{2, 3, 5, 6}, true}}, {}, false);
    CHECK(e.is_representative(2));
    CHECK(e.row_string(2) == "10010110"); // x2 <=> x3+x5+x6+1, constant leftmost
    CHECK(e.check_unicity());
}

TEST_CASE("renaming a variable rewrites it inside every clause") {
    XorgaussEngine e(7, {{{2, 3, 5, 6}, true}}, {}, false);
    REQUIRE(e.substitute_equiv(6, 1)); // neither in R: rename x6 -> x1
    CHECK(e.row_string(2) == "11010100");

    REQUIRE(e.set({pos(1)})); // constant folding of a non-representative
    CHECK(e.row_string(2) == "00010100");
    CHECK(e.last_assigned() == LitVec{pos(1)});
    CHECK(e.check_unicity());
}

TEST_CASE("assigning a false non-representative drops it without a constant flip") {
    XorgaussEngine e(7, {{{2, 3, 5, 6}, true}}, {}, false);
    REQUIRE(e.set({neg(6)}));
    CHECK(e.row_string(2) == "10010100"); // x6 leaves, constant stays
}

TEST_CASE("assigning a representative hands its clause to the next variable") {
    XorgaussEngine e(3, {{{1, 2, 3}, false}}, {}, false);
    REQUIRE(e.is_representative(1));
    REQUIRE(e.set({pos(1)}));
    CHECK_FALSE(e.is_representative(1));
    CHECK(e.is_representative(2));
    CHECK(e.row_string(2) == "1001"); // x2 <=> x3+1
    CHECK(e.check_unicity());
}

TEST_CASE("a clause collapsing to a constant forces its representative") {
    XorgaussEngine e(2, {{{1, 2}, true}}, {}, false);
    REQUIRE(e.set({pos(2)}));
    CHECK(e.last_assigned() == LitVec{pos(2), neg(1)});
    CHECK(e.value(1) == Tri::False);
    CHECK(e.store_constraints().empty()); // satisfied row is discharged
}

TEST_CASE("a collapsed clause contradicting an incoming assignment conflicts") {
    XorgaussEngine e(2, {{{1, 2}, true}}, {}, false);
    CHECK_FALSE(e.set({pos(2), pos(1)}));
}

TEST_CASE("rows collapsed at insertion are reported as initial units") {
    XorgaussEngine e(2, {{{1, 2}, true}, {{2}, false}}, {}, false);
    CHECK_FALSE(e.init_conflict());
    CHECK(e.initial_units() == LitVec{{1, true}, {2, false}});
    CHECK(e.value(1) == Tri::Unassigned); // reported, not applied
}

TEST_CASE("insertion reduces against the store and detects contradictions") {
    SECTION("restating a clause is dropped") {
        XorgaussEngine e(2, {{{1, 2}, true}, {{1, 2}, true}}, {}, false);
        CHECK_FALSE(e.init_conflict());
        CHECK(e.store_constraints() == std::vector<XorClause>{{{1, 2}, true}});
    }
    SECTION("negating a clause is a root conflict") {
        XorgaussEngine e(2, {{{1, 2}, true}, {{1, 2}, false}}, {}, false);
        CHECK(e.init_conflict());
    }
}

TEST_CASE("the store reproduces the inserted constraints") {
    CnfXorFormula f = to_cnf_xor(testgen::worked_system());
    XorgaussEngine e(f.num_vars, f.xor_clauses, f.monomial_defs, false);
    CHECK(e.store_constraints() == f.xor_clauses);
    CHECK(e.row_string(1) == "10000111");
    CHECK(e.row_string(3) == "00000110");
}

TEST_CASE("state dumps expose rows and watch counts") {
    XorgaussEngine e(3, {{{1, 2}, true}}, {}, false);
    CHECK(e.dump_state() == "level=0;assign=-1,-1,-1,;R=1:1010,;watch=0,0,0,");
}

// the six substitution shapes, dispatched on membership in R

TEST_CASE("substitution hands a clause off when the target is absent from it") {
    XorgaussEngine e(3, {{{1, 2}, false}}, {}, false);
    REQUIRE(e.substitute_equiv(1, 3));
    CHECK_FALSE(e.is_representative(1));
    CHECK(e.row_string(3) == "0010"); // x3 <=> x2
    CHECK(e.check_unicity());
}

TEST_CASE("substitution handoff eliminates the new representative elsewhere") {
    XorgaussEngine e(4, {{{1, 2}, false}, {{3, 4}, false}}, {}, false);
    REQUIRE(e.substitute_equiv(1, 4));
    CHECK(e.row_string(4) == "00100"); // x4 <=> x2
    CHECK(e.row_string(3) == "00100"); // x3 <=> x2, x4 eliminated
    CHECK(e.check_unicity());
}

TEST_CASE("substituting a representative by a clause member re-roots the difference") {
    // x1 <=> x2+x3 and x1 <=> x2 leave x3 = 0
    XorgaussEngine e(3, {{{1, 2, 3}, false}}, {}, false);
    REQUIRE(e.substitute_equiv(1, 2));
    CHECK(e.last_assigned() == LitVec{neg(3)});
    CHECK(e.value(3) == Tri::False);
    CHECK(e.store_constraints().empty());
    CHECK(e.check_unicity());
}

TEST_CASE("substituting a non-representative expands it to the partner clause") {
    // store: x1 <=> x3+x4, x2 <=> x3; asserting x4 <=> x2 collapses x1 to 0
    XorgaussEngine e(4, {{{1, 2, 4}, false}, {{2, 3}, false}}, {}, false);
    REQUIRE(e.row_string(1) == "00011");
    REQUIRE(e.row_string(2) == "00010");
    REQUIRE(e.substitute_equiv(4, 2));
    CHECK(e.last_assigned() == LitVec{neg(1)});
    CHECK(e.store_constraints() == std::vector<XorClause>{{{2, 3}, false}});
}

TEST_CASE("substituting a member of the partner clause re-roots and renames") {
    // store: x1 <=> x3+x4, x2 <=> x4; asserting x4 <=> x1 forces x3 = 0
    // and renames x4 to x1 in the remaining clause
    XorgaussEngine e(4, {{{1, 2, 3}, false}, {{2, 4}, false}}, {}, false);
    REQUIRE(e.row_string(1) == "00011");
    REQUIRE(e.row_string(2) == "00001");
    REQUIRE(e.substitute_equiv(4, 1));
    CHECK(e.value(3) == Tri::False);
    CHECK(e.store_constraints() == std::vector<XorClause>{{{1, 2}, false}});
    CHECK(e.check_unicity());
}

TEST_CASE("merging two representatives keeps only their clause difference") {
    XorgaussEngine e(4, {{{1, 3}, false}, {{2, 4}, false}}, {}, false);
    REQUIRE(e.substitute_equiv(1, 2));
    CHECK_FALSE(e.is_representative(1));
    CHECK_FALSE(e.is_representative(2));
    CHECK(e.store_constraints() == std::vector<XorClause>{{{3, 4}, false}});
    CHECK(e.check_unicity());
}

TEST_CASE("merging representatives with equal clauses keeps both") {
    XorgaussEngine e(3, {{{1, 3}, false}, {{2, 3}, false}}, {}, false);
    REQUIRE(e.substitute_equiv(1, 2));
    CHECK(e.store_constraints() ==
          std::vector<XorClause>{{{1, 3}, false}, {{2, 3}, false}});
}

TEST_CASE("merging representatives with opposite clauses is a conflict") {
    XorgaussEngine e(3, {{{1, 3}, false}, {{2, 3}, true}}, {}, false);
    CHECK_FALSE(e.substitute_equiv(1, 2));
}

// monomial watches (the extension)

TEST_CASE("one missing constituent turns the watch into a substitution") {
    CnfXorFormula f = to_cnf_xor(testgen::worked_system());

    SECTION("with the extension the residual equality propagates") {
        XorgaussEngine e(f.num_vars, f.xor_clauses, f.monomial_defs, true);
        REQUIRE(e.watch_count(7) == 2);
        REQUIRE(e.set({pos(2)}));
        CHECK(e.watch_count(7) == 1);
        CHECK(e.last_assigned() == LitVec{pos(2), pos(1)});
        CHECK(e.value(1) == Tri::True);
    }
    SECTION("without it the equality is invisible") {
        XorgaussEngine e(f.num_vars, f.xor_clauses, f.monomial_defs, false);
        REQUIRE(e.set({pos(2)}));
        CHECK(e.last_assigned() == LitVec{pos(2)});
        CHECK(e.value(1) == Tri::Unassigned);
        CHECK(e.watch_count(7) == 2);
    }
}

TEST_CASE("a fully true monomial forces its substitution variable") {
    XorgaussEngine e(4, {}, {{4, {1, 2}}}, true);
    REQUIRE(e.set({pos(1)}));
    REQUIRE(e.set({pos(2)}));
    CHECK(e.value(4) == Tri::True);
}

TEST_CASE("a fully true monomial conflicts with its variable already false") {
    XorgaussEngine e(4, {}, {{4, {1, 2}}}, true);
    REQUIRE(e.set({neg(4)}));
    REQUIRE(e.set({pos(1)}));
    CHECK_FALSE(e.set({pos(2)}));
}

TEST_CASE("watches skip substitution when either side is already assigned") {
    XorgaussEngine e(4, {}, {{4, {1, 2}}}, true);
    REQUIRE(e.set({pos(4)}));
    REQUIRE(e.set({pos(1)})); // count drops to 1, x4 assigned: no substitution
    CHECK(e.watch_count(4) == 1);
    REQUIRE(e.set({pos(2)}));
    CHECK(e.value(2) == Tri::True);
}

TEST_CASE("false assignments never advance a watch") {
    XorgaussEngine e(4, {}, {{4, {1, 2}}}, true);
    REQUIRE(e.set({neg(1)}));
    CHECK(e.watch_count(4) == 2);
}

// snapshots, replay, and model preservation

TEST_CASE("backtracking restores rows, assignments, and watch counts bitwise") {
    CnfXorFormula f = to_cnf_xor(testgen::worked_system());
    XorgaussEngine e(f.num_vars, f.xor_clauses, f.monomial_defs, true);
    const std::string fresh = e.dump_state();

    e.push_level();
    REQUIRE(e.set({pos(5)}));
    const std::string at_one = e.dump_state();
    e.push_level();
    REQUIRE(e.set({pos(2)}));
    CHECK(e.watch_count(7) == 1);

    e.backtrack_to(1);
    CHECK(e.dump_state() == at_one);
    e.backtrack_to(0);
    CHECK(e.dump_state() == fresh);
    CHECK(e.watch_count(7) == 2);
}

TEST_CASE("xorgauss walks replay to identical states") {
    std::mt19937_64 rng(0x6A0551);
    for (int trial = 0; trial < 20; ++trial) {
        Var n = 5 + rng() % 6;
        auto clauses = testgen::random_xor_clauses(rng, n, 2 + rng() % 5);
        std::vector<MonomialDef> defs = {{static_cast<Var>(n + 1), {1, 2}},
                                         {static_cast<Var>(n + 2), {2, 3, 4}}};
        Var total = n + 2;
        bool ext = trial % 2 == 0;
        XorgaussEngine walked(total, clauses, defs, ext);
        if (walked.init_conflict()) continue;
        auto [trace, final_dump] = oracle::random_walk(walked, rng, total, 80, true);
        CHECK(oracle::replay(XorgaussEngine(total, clauses, defs, ext), trace) == final_dump);
    }
}

TEST_CASE("divergent traces are caught by the state dump") {
    XorgaussEngine fresh(2, {}, {}, false);
    oracle::NetTrace t;
    t.frames[0].push_back({0, {pos(1)}, 0, 0});
    oracle::NetTrace corrupted = t;
    corrupted.frames[0][0].lits[0] = neg(1);
    CHECK(oracle::replay(fresh, t) != oracle::replay(fresh, corrupted));
}

TEST_CASE("assignment-only walks preserve the model set exactly") {
    std::mt19937_64 rng(0x90DE15);
    int compared = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Var n = 5 + rng() % 5;
        auto clauses = testgen::random_xor_clauses(rng, n, 2 + rng() % 5);
        XorgaussEngine e(n, clauses, {}, false);
        if (e.init_conflict()) continue;
        bool root_ok = true;
        for (const Literal& u : e.initial_units())
            if (!e.set({u})) { root_ok = false; break; }
        if (!root_ok) continue;

        std::size_t level = 0;
        for (int op = 0; op < 40; ++op) {
            std::uint64_t roll = rng() % 10;
            if (roll < 6) {
                Literal l{static_cast<Var>(1 + rng() % n), (rng() & 1) != 0};
                if (e.set({l})) {
                    auto units = assigned_units(e);
                    CHECK(oracle::xor_clause_models(n, concat(units, clauses)) ==
                          oracle::xor_clause_models(n, concat(units, e.store_constraints())));
                    CHECK(e.check_unicity());
                    ++compared;
                } else if (level > 0) {
                    e.backtrack_to(--level);
                } else {
                    break;
                }
            } else if (roll < 8) {
                e.push_level();
                ++level;
            } else if (level > 0) {
                level = rng() % level;
                e.backtrack_to(level);
            }
        }
    }
    CHECK(compared > 60);
}

TEST_CASE("substitution walks never grow the model set") {
    // substitutions may forget (the merge keeps only the clause difference),
    // so the store is an over-approximation of clauses + equalities
    std::mt19937_64 rng(0x5B5E7);
    int compared = 0;
    for (int trial = 0; trial < 15; ++trial) {
        Var n = 5 + rng() % 4;
        auto clauses = testgen::random_xor_clauses(rng, n, 2 + rng() % 4);
        XorgaussEngine e(n, clauses, {}, false);
        if (e.init_conflict()) continue;
        bool root_ok = true;
        for (const Literal& u : e.initial_units())
            if (!e.set({u})) { root_ok = false; break; }
        if (!root_ok) continue;

        std::vector<std::vector<XorClause>> equiv_frames{1};
        std::size_t level = 0;
        for (int op = 0; op < 40; ++op) {
            std::uint64_t roll = rng() % 10;
            if (roll < 6) {
                bool ok;
                if (rng() % 3 == 0) {
                    Var a = static_cast<Var>(1 + rng() % n);
                    Var b = static_cast<Var>(1 + rng() % n);
                    if (a == b || e.value(a) != Tri::Unassigned ||
                        e.value(b) != Tri::Unassigned)
                        continue;
                    ok = e.substitute_equiv(a, b);
                    if (ok) equiv_frames.back().push_back({{a, b}, false});
                } else {
                    ok = e.set({{static_cast<Var>(1 + rng() % n), (rng() & 1) != 0}});
                }
                if (ok) {
                    auto units = assigned_units(e);
                    std::vector<XorClause> asserted = concat(units, clauses);
                    for (const auto& frame : equiv_frames)
                        asserted.insert(asserted.end(), frame.begin(), frame.end());
                    auto lhs = oracle::xor_clause_models(n, asserted);
                    auto rhs = oracle::xor_clause_models(n, concat(units, e.store_constraints()));
                    CHECK(std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end()));
                    CHECK(e.check_unicity());
                    ++compared;
                } else if (level > 0) {
                    e.backtrack_to(--level);
                    equiv_frames.resize(level + 1);
                } else {
                    break;
                }
            } else if (roll < 8) {
                e.push_level();
                ++level;
                equiv_frames.emplace_back();
            } else if (level > 0) {
                level = rng() % level;
                e.backtrack_to(level);
                equiv_frames.resize(level + 1);
            }
        }
    }
    CHECK(compared > 25);
}
