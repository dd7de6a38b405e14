#include "hopt/combs.hpp"

#include <doctest.h>

using namespace hopt;

namespace {

ObjectExpr n(std::uint64_t k) { return ObjectExpr::atom("n" + std::to_string(k), k); }

Morphism fn(const ObjectExpr& a, const ObjectExpr& b, FunctionTable t) { return Morphism(Backend::finset, a, b, t); }

// g_n (id*f_n) ... g_1 (id*f_1) g_0, composed directly in C.
Morphism plug(const CombShape& s, const std::vector<Morphism>& stages, const std::vector<Morphism>& fillers)
{
    Morphism acc = stages[0];
    for (std::size_t i = 0; i < fillers.size(); ++i) {
        acc = compose(tensor(identity(acc.backend(), s.ancilla), fillers[i]), acc);
        acc = compose(stages[i + 1], acc);
    }
    return acc;
}

} // namespace

TEST_CASE("closure generators")
{
    auto e = standard_enrichments().finset_self;
    ClosureOptions o;
    o.depth = 0;
    auto c = generate_structural_closure(e, {n(2)}, o);
    for (auto& f : Model::standard(Backend::finset)->homs(n(2), n(2), {}).items)
        CHECK(c.find(e->kappa(f)).has_value());
    CHECK(c.find(e->seq(n(2), n(2), n(2))).has_value());
    // 4 states, seq, identity and braid; par lands outside the admissible types
    CHECK(c.members().size() == 7);
    CHECK(c.depth() == 0);
}

TEST_CASE("one-tooth comb appears by depth two")
{
    auto e = standard_enrichments().finset_self;
    ClosureOptions o;
    o.depth = 2;
    auto c = generate_structural_closure(e, {n(2)}, o);
    auto f = fn(n(2), n(2), {1, 0});
    auto g = fn(n(2), n(2), {0, 0});
    // h -> g h f, tabulated independently on codes of [n2,n2]
    FunctionCodec codec(2, 2);
    FunctionTable t(4);
    for (std::uint64_t h = 0; h < 4; ++h) {
        auto ht = codec.decode(h);
        t[h] = codec.encode({g.table()[ht[f.table()[0]]], g.table()[ht[f.table()[1]]]});
    }
    auto h = e->hom(n(2), n(2));
    auto idx = c.find(fn(h, h, t));
    REQUIRE(idx.has_value());
    CHECK(c.members()[*idx].round <= 2);
    CHECK(c.replay(*idx) == fn(h, h, t));
}

TEST_CASE("build_comb plugs into the circuit")
{
    auto std_e = standard_enrichments();
    auto e = std_e.finset_self;
    const auto I = ObjectExpr::unit();

    SUBCASE("identity comb")
    {
        CombShape s{n(2), n(2), I, {{n(2), n(2)}}};
        auto id = identity(Backend::finset, n(2));
        auto comb = build_comb(*e, s, {id, id});
        CHECK(comb == identity(Backend::finset, e->hom(n(2), n(2))));
    }

    SUBCASE("two teeth with a memory wire")
    {
        const auto E = n(2);
        CombShape s{n(2), n(2), E, {{n(2), n(2)}, {n(2), n(2)}}};
        auto g0 = fn(n(2), E * n(2), {0, 3});       // copy
        auto g1 = fn(E * n(2), E * n(2), {0, 1, 3, 2}); // controlled not
        auto g2 = fn(E * n(2), n(2), {0, 1, 1, 0});  // xor
        auto comb = build_comb(*e, s, {g0, g1, g2});
        auto fs = Model::standard(Backend::finset)->homs(n(2), n(2), {}).items;
        for (auto& f1 : fs)
            for (auto& f2 : fs) {
                auto plugged = compose(comb, tensor(e->kappa(f1), e->kappa(f2)));
                CHECK(plugged == e->kappa(plug(s, {g0, g1, g2}, {f1, f2})));
            }
    }

    SUBCASE("relations")
    {
        auto r = std_e.finrel_self;
        const auto E = n(1);
        CombShape s{n(2), n(2), E, {{n(2), n(2)}}};
        Morphism g0(Backend::finrel, n(2), E * n(2), Relation{{{0, 0}, {0, 1}, {1, 1}}});
        Morphism g1(Backend::finrel, E * n(2), n(2), Relation{{{1, 0}}});
        auto comb = build_comb(*r, s, {g0, g1});
        for (auto& f : Model::standard(Backend::finrel)->homs(n(2), n(2), {}).items)
            CHECK(compose(comb, r->kappa(f)) == r->kappa(plug(s, {g0, g1}, {f})));
    }

    CHECK_THROWS_AS(build_comb(*e, CombShape{n(2), n(2), I, {{n(2), n(2)}}}, {identity(Backend::finset, n(2))}),
                    TypeMismatch);
}

TEST_CASE("built combs are closure members")
{
    auto e = standard_enrichments().finset_self;
    const auto I = ObjectExpr::unit();
    ClosureOptions o;
    auto c = generate_structural_closure(e, {n(2)}, o);
    CHECK(c.members().size() < o.member_cap);
    auto fs = Model::standard(Backend::finset)->homs(n(2), n(2), {}).items;
    CombShape one{n(2), n(2), I, {{n(2), n(2)}}};
    CombShape two{n(2), n(2), I, {{n(2), n(2)}, {n(2), n(2)}}};
    for (auto& g0 : fs)
        for (auto& g1 : fs) {
            auto i = c.find(build_comb(*e, one, {g0, g1}));
            REQUIRE(i.has_value());
            CHECK(c.members()[*i].round <= 2);
            for (auto& g2 : fs) {
                auto j = c.find(build_comb(*e, two, {g0, g1, g2}));
                REQUIRE(j.has_value());
                CHECK(c.members()[*j].round <= 3);
            }
        }
    // a trivial ancilla does not leave the closure either
    CombShape anc{n(2), n(2), n(1), {{n(2), n(2)}}};
    auto v = is_comb(e, {n(2)}, build_comb(*e, anc, {fn(n(2), n(1) * n(2), {1, 0}), fn(n(1) * n(2), n(2), {0, 0})}), o);
    CHECK(v.found);
    CHECK(v.depth <= 2);
    CHECK(!v.trace.empty());
}

TEST_CASE("squaring is not a comb")
{
    auto e = standard_enrichments().finset_self;
    ClosureOptions o;
    auto v = is_comb(e, {n(2)}, squaring_map(*e, n(2)), o);
    CHECK_FALSE(v.found);
    CHECK(v.members < o.member_cap);
    auto sq = squaring_map(*e, n(2));
    FunctionCodec codec(2, 2);
    CHECK(sq.table()[codec.encode({1, 0})] == codec.encode({0, 1}));
}

TEST_CASE("closure traces replay and the cap is enforced")
{
    auto e = standard_enrichments().finset_self;
    ClosureOptions o;
    o.depth = 2;
    auto c = generate_structural_closure(e, {n(1), n(2)}, o);
    for (std::size_t i = 0; i < c.members().size(); ++i)
        REQUIRE(c.replay(i) == c.members()[i].m);
    // monotone in depth
    o.depth = 1;
    auto c1 = generate_structural_closure(e, {n(1), n(2)}, o);
    CHECK(c1.members().size() <= c.members().size());
    for (auto& m : c1.members())
        CHECK(c.find(m.m).has_value());
    o.member_cap = 100;
    CHECK_THROWS_AS(generate_structural_closure(e, {n(1), n(2)}, o), BoundExceeded);
    CHECK_THROWS_AS(StructuralClosure(standard_enrichments().matq_choi, {n(2)}, o), Unsupported);
}

TEST_CASE("combs suite")
{
    auto e = standard_enrichments().finset_self;
    LawConfig cfg;
    cfg.max_size = 2;
    auto r = check_combs(e, cfg, {});
    CHECK(r.cases_failed == 0);
    CHECK(r.cases_skipped == 0);
    CHECK(r.cases_total > 1000);
    // finrel closes past the cap at once; reported as skipped
    auto f = check_combs(standard_enrichments().finrel_self, cfg, {});
    CHECK(f.cases_failed == 0);
    CHECK(f.cases_skipped == 1);
}
