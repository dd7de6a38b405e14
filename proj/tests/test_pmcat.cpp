#include "hopt/pmcat.hpp"

#include <doctest.h>

#include <algorithm>

using namespace hopt;

namespace {

ObjectExpr n(std::uint64_t k) { return ObjectExpr::atom("n" + std::to_string(k), k); }

LawConfig small(std::uint64_t size)
{
    LawConfig c;
    c.max_size = size;
    return c;
}

bool has_law(const LawReport& r, const std::string& law)
{
    return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.law == law; });
}

} // namespace

TEST_CASE("identity pm-functor")
{
    auto e = standard_enrichments().finset_self;
    auto id = identity_pm(e);
    auto r = check_pm(id, small(2));
    CHECK(r.cases_failed == 0);
    CHECK(r.cases_skipped == 0);
    CHECK(r.cases_total > 100);
    auto ff = is_fully_faithful(id, small(2));
    CHECK(ff.passed());
    CHECK(ff.cases_total > 0);
}

TEST_CASE("gamma layer on self-towers")
{
    auto std_e = standard_enrichments();
    for (auto e : {std_e.finset_self, std_e.finrel_self}) {
        INFO(e->name());
        auto g = gamma_layer(e, e);
        auto r = check_pm(g, small(2));
        CHECK(r.cases_failed == 0);
        CHECK(r.cases_skipped == 0);
        LawConfig p_only = small(2);
        p_only.only = {"P1", "P2", "P3"};
        auto p = check_pm(g, p_only);
        CHECK(p.cases_total >= 27 + 81);
        CHECK(p.cases_failed == 0);
    }
    CHECK_THROWS_AS(gamma_layer(std_e.finset_self, std_e.finrel_self), ChainMismatch);
}

TEST_CASE("gamma sends encoded states to the hom action")
{
    auto e = standard_enrichments().finset_self;
    auto fs = Model::standard(Backend::finset);
    const ObjectExpr I = ObjectExpr::unit();
    for (std::uint64_t a = 1; a <= 2; ++a)
        for (std::uint64_t b = 1; b <= 2; ++b) {
            auto gamma = gamma_component(*e, *e, n(a), n(b));
            for (auto& f : fs->homs(n(a), n(b), {}).items) {
                // [I,A] is indexed by the image of the single point, so the
                // action of f on states has the table of f itself.
                Morphism action(Backend::finset, e->hom(I, n(a)), e->hom(I, n(b)), f.table());
                auto raised = e->hom_map(fs->identity(I), e->kappa(f));
                CHECK(compose(gamma, raised) == e->kappa(action));
            }
        }
}

TEST_CASE("compose_pm is unital and associative on components")
{
    auto e = standard_enrichments().finset_self;
    auto k1 = karoubi(e, 2);
    auto k2 = karoubi(k1.envelope, 2);
    auto id0 = identity_pm(e);
    auto p = k1.embedding;
    auto left = compose_pm(identity_pm(k1.envelope), p);
    auto right = compose_pm(p, id0);
    auto fs = Model::standard(Backend::finset);
    for (auto& a : fs->inventory(2))
        for (auto& b : fs->inventory(2)) {
            CHECK(left.comp(a, b) == p.comp(a, b));
            CHECK(right.comp(a, b) == p.comp(a, b));
            CHECK(left.fc(a) == p.fc(a));
            for (auto& f : fs->homs(a, b, {}).items)
                CHECK(right.fc(f) == p.fc(f));
        }
    auto x = compose_pm(k2.embedding, compose_pm(p, id0));
    auto y = compose_pm(compose_pm(k2.embedding, p), id0);
    for (auto& a : fs->inventory(2))
        for (auto& b : fs->inventory(2)) {
            CHECK(x.comp(a, b) == y.comp(a, b));
            CHECK(x.fv.phi(a, b) == y.fv.phi(a, b));
        }
    CHECK_THROWS_AS(compose_pm(p, p), TypeMismatch);
}

TEST_CASE("karoubi hom-sets")
{
    auto fs = Model::standard(Backend::finset);
    KaroubiCategory k(fs, 4);
    Morphism e(Backend::finset, n(3), n(3), FunctionTable{0, 0, 2});
    auto x = split_object(Idempotent(n(3), e));
    CHECK(k.homs(x, x, {}).items.size() == 4);
    for (auto& f : k.homs(x, x, {}).items)
        CHECK(k.contains(f));
    CHECK(k.identity(x).table() == FunctionTable{0, 0, 2});
    // splitting the identity changes nothing
    for (std::uint64_t a = 1; a <= 2; ++a)
        for (std::uint64_t b = 1; b <= 3; ++b) {
            auto plain = fs->homs(n(a), n(b), {}).items;
            auto split = k.homs(k.embed(n(a)), k.embed(n(b)), {}).items;
            REQUIRE(plain.size() == split.size());
            for (std::size_t i = 0; i < plain.size(); ++i)
                CHECK(plain[i].payload() == split[i].payload());
        }
    CHECK_THROWS_AS(Idempotent(n(2), Morphism(Backend::finset, n(2), n(2), FunctionTable{1, 0})), TypeMismatch);
    auto inv = k.inventory(3);
    // I, n1 (one idempotent), n2 (three), n3 (capped at four)
    CHECK(inv.size() == 1 + 1 + 3 + 4);
    CHECK(inv[2] == k.embed(n(2)));
}

TEST_CASE("karoubi envelope of finset_self")
{
    auto k = karoubi(standard_enrichments().finset_self, 4);
    CHECK(check_enriched_laws(*k.envelope, small(2)).cases_failed == 0);
    auto f = check_faithful(*k.envelope, small(2));
    CHECK(f.cases_failed == 0);
    CHECK(f.cases_total > 0);
    auto pm = check_pm(k.embedding, small(2));
    CHECK(pm.cases_failed == 0);
    CHECK(pm.cases_skipped == 0);
    CHECK(is_fully_faithful(k.embedding, small(2)).passed());

    auto kk = karoubi(k.envelope, 2);
    auto nested = compose_pm(kk.embedding, k.embedding);
    CHECK(check_pm(nested, small(2)).cases_failed == 0);
    CHECK(check_pm(kk.embedding, small(2)).cases_failed == 0);
}

TEST_CASE("collapse is not faithful")
{
    auto c = collapse(standard_enrichments().finset_self);
    CHECK(check_pm(c, small(2)).cases_failed == 0);
    auto r = is_fully_faithful(c, small(2));
    CHECK_FALSE(r.passed());
    REQUIRE(has_law(r, "FC-FAITHFUL"));
    auto it = std::find_if(r.violations.begin(), r.violations.end(),
                           [](const Violation& v) { return v.law == "FC-FAITHFUL"; });
    CHECK(it->lhs != it->rhs);
    CHECK(it->instance.find("g=") != std::string::npos);
}

TEST_CASE("corrupted comparison morphism fails P2")
{
    auto e = standard_enrichments().finset_self;
    auto p = identity_pm(e);
    auto base = p.comp;
    p.comp = [base](const ObjectExpr& a, const ObjectExpr& b) {
        auto m = base(a, b);
        if (!(a == n(2)) || !(b == n(2)))
            return m;
        auto t = m.table();
        std::swap(t[1], t[2]);
        return Morphism(Backend::finset, m.dom(), m.cod(), t);
    };
    auto r = check_pm(p, small(2));
    CHECK(r.cases_failed > 0);
    CHECK(has_law(r, "P2"));
    for (auto& v : r.violations)
        if (v.law == "P2")
            CHECK(v.instance.find("A=") == 0);
}
