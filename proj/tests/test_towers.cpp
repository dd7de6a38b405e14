#include "hopt/closure.hpp"
#include "hopt/towers.hpp"

#include <doctest.h>

using namespace hopt;

namespace {

ObjectExpr n(std::uint64_t k) { return ObjectExpr::atom("n" + std::to_string(k), k); }

Tower constant(EnrichedPtr e, std::size_t layers) { return build_tower(std::vector<EnrichedPtr>(layers, e)); }

LawConfig small()
{
    LawConfig c;
    c.max_size = 2;
    return c;
}

} // namespace

TEST_CASE("tower chain condition")
{
    auto s = standard_enrichments();
    CHECK(constant(s.finset_self, 3).top() == 4);
    CHECK(constant(s.finrel_self, 3).depth() == 3);
    CHECK_THROWS_AS(build_tower({s.finset_self, s.finrel_self}), ChainMismatch);
    CHECK_THROWS_AS(build_tower({}), ChainMismatch);
    CHECK_THROWS_AS(build_tower({s.finset_self, corrupt_seq(s.finset_self, identity(Backend::finset, n(2)), identity(Backend::finset, n(2)),
                                                                      Morphism(Backend::finset, n(2), n(2), FunctionTable{0, 0}))},
                                small()),
                    LawViolation);
}

TEST_CASE("raising functors")
{
    auto e = standard_enrichments().finset_self;
    auto t = constant(e, 2);
    const auto r12 = raising(t, 1, 2);
    for (std::uint64_t k = 1; k <= 3; ++k)
        CHECK(r12(n(k)).carrier() == k);
    // distinct functions stay distinct
    for (std::uint64_t a = 1; a <= 3; ++a)
        for (std::uint64_t b = 1; b <= 3; ++b) {
            std::set<std::string> images;
            const auto fs = t.category(1)->homs(n(a), n(b), {}).items;
            for (const auto& f : fs)
                images.insert(r12(f).canonical());
            CHECK(images.size() == fs.size());
        }
    const auto r13 = raising(t, 1, 3);
    const auto r23 = raising(t, 2, 3);
    for (const auto& x : t.category(1)->inventory(3))
        CHECK(r13(x) == r23(r12(x)));
    CHECK(raising(t, 2, 2)(n(2)) == n(2));
    CHECK_THROWS_AS(raising(t, 2, 1), std::out_of_range);
    CHECK_THROWS_AS(raising(t, 1, 4), std::out_of_range);
}

TEST_CASE("trivial merger")
{
    auto e = standard_enrichments().finset_self;
    auto t = constant(e, 2);
    auto m = trivial_merger(t);
    CHECK(m.apex->name() == t.category(3)->name());
    CHECK(m.F(1)(n(2)) == raising(t, 1, 3)(n(2)));
    CHECK(m.F(3)(n(2)) == n(2));
    const auto inv = m.inventory(2);
    // I, then n1 and n2 at each of the three levels
    CHECK(inv.size() == 7);
    for (const auto& a : inv) {
        const auto lv = m.level(a);
        CHECK(m.F(lv.index)(lv.rep) == a);
    }
    CHECK(m.level(m.F(2)(e->hom(ObjectExpr::unit(), n(2)))).index == 1);
    CHECK_THROWS_AS(m.level(n(2) * n(2)), TypeMismatch);
    auto r = check_merger(m, small());
    CHECK(r.cases_failed == 0);
    CHECK(r.cases_skipped == 0);
    CHECK(r.cases_total > 50);
}

TEST_CASE("mu condition")
{
    auto s = standard_enrichments();
    for (auto e : {s.finset_self, s.finrel_self}) {
        auto m = trivial_merger(constant(e, 3));
        auto r = check_mu_condition(m, 1, small());
        CHECK(r.cases_failed == 0);
        CHECK(r.cases_skipped == 0);
        CHECK(r.cases_total > 50);
        CHECK_THROWS_AS(check_mu_condition(m, 3, small()), BoundExceeded);
    }

    SUBCASE("corrupted eta")
    {
        auto m = trivial_merger(constant(s.finset_self, 3));
        auto eta = m.eta;
        auto apex = m.apex;
        m.eta = [eta, apex](std::size_t i, const ObjectExpr& x) {
            auto e = eta(i, x);
            if (i == 2 && e.cod().carrier() == 2)
                e = compose(Morphism(Backend::finset, e.cod(), e.cod(), FunctionTable{1, 0}), e);
            return e;
        };
        auto r = check_mu_condition(m, 1, small());
        CHECK(r.cases_failed > 0);
        REQUIRE(!r.violations.empty());
        bool mu_eval = false;
        for (const auto& v : r.violations) {
            CHECK(v.instance.rfind("i=", 0) == 0);
            CHECK(v.lhs != v.rhs);
            mu_eval = mu_eval || v.law == "MU-EVAL";
        }
        CHECK(mu_eval);
        CHECK(check_merger(m, small()).cases_failed > 0);
    }
}

TEST_CASE("apex currying agrees with the closure module")
{
    auto e = standard_enrichments().finset_self;
    auto m = trivial_merger(constant(e, 4));
    auto l = standard_linking(e);
    const auto I = ObjectExpr::unit();
    std::size_t compared = 0;
    for (const auto& a : {I, n(1), n(2)})
        for (const auto& b : {I, n(1), n(2)})
            for (const auto& c : {I, n(1), n(2)}) {
                const auto fa = m.F(1)(a);
                const auto fb = m.F(1)(b);
                const auto fc = m.F(1)(c);
                CHECK(apex_arrow(m, fa, fb).carrier() == e->hom(a, b).carrier());
                for (const auto& f : e->lower()->homs(a * c, b, {}).items) {
                    const auto lifted = retype(f, fa * fc, fb);
                    const auto fbar = apex_curry(m, fa, lifted);
                    CHECK(fbar.table() == curry(l, a, f).table());
                    ++compared;
                }
            }
    CHECK(compared > 50);

    // xor on bits
    const Morphism x(Backend::finset, n(2) * n(2), n(2), FunctionTable{0, 1, 1, 0});
    const auto fx = retype(x, m.F(1)(n(2)) * m.F(1)(n(2)), m.F(1)(n(2)));
    const auto fbar = apex_curry(m, m.F(1)(n(2)), fx);
    CHECK(fbar.table() == curry(l, n(2), x).table());
    CHECK(compose(apex_eval(m, m.F(1)(n(2)), m.F(1)(n(2))), tensor(m.apex->identity(m.F(1)(n(2))), fbar)) == fx);

    // currying the unitor gives the encoded identity
    const auto a = m.F(1)(n(2));
    CHECK(apex_curry(m, a, m.apex->identity(a)) == m.F(2)(e->kappa(identity(Backend::finset, n(2)))));
}

TEST_CASE("apex levels and headroom")
{
    auto e = standard_enrichments().finset_self;
    auto m = trivial_merger(constant(e, 4));
    const auto a = m.F(1)(n(2));
    const auto b = m.F(2)(n(2));
    CHECK(m.level(b).index == 2);
    // mixed levels pass through mu
    const auto arrow = apex_arrow(m, a, b);
    CHECK(arrow == m.F(3)(e->hom(e->hom(ObjectExpr::unit(), n(2)), n(2))));
    const Morphism f(Backend::finset, a * m.F(3)(n(2)), b, FunctionTable{0, 1, 1, 0});
    const auto fbar = apex_curry(m, a, f);
    CHECK(compose(apex_eval(m, a, b), tensor(m.apex->identity(a), fbar)) == f);

    auto shallow = trivial_merger(constant(e, 2));
    CHECK_NOTHROW(apex_arrow(shallow, shallow.F(1)(n(2)), shallow.F(1)(n(2))));
    CHECK_THROWS_AS(apex_arrow(shallow, shallow.F(2)(n(2)), shallow.F(2)(n(2))), BoundExceeded);
    CHECK_THROWS_AS(apex_eval(shallow, shallow.F(1)(n(2)), shallow.F(2)(n(2))), BoundExceeded);
}

TEST_CASE("apex is closed")
{
    auto s = standard_enrichments();
    auto m = trivial_merger(constant(s.finset_self, 4));
    auto r = check_apex_closed(m, small());
    CHECK(r.cases_failed == 0);
    CHECK(r.cases_skipped > 0); // triples at levels 4 and 5
    CHECK(r.cases_total > 1000);

    auto rel = trivial_merger(constant(s.finrel_self, 3));
    for (const auto& a : rel.inventory(2))
        CHECK(rel.level(a).index == 1);
    auto rr = check_apex_closed(rel, small());
    CHECK(rr.cases_failed == 0);
    CHECK(rr.cases_skipped == 0);

    auto shallow = trivial_merger(constant(s.finset_self, 1));
    auto sr = check_apex_closed(shallow, small());
    CHECK(sr.cases_failed == 0);
    CHECK(sr.cases_total == 0);
    CHECK(sr.cases_skipped == 125); // all triples over I, F_1(n1), F_1(n2), n1, n2
}
