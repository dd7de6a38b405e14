#include "hopt/closure.hpp"
#include "hopt/linalg.hpp"

#include <doctest.h>

using namespace hopt;

namespace {

ObjectExpr n(std::uint64_t k) { return ObjectExpr::atom("n" + std::to_string(k), k); }

LawConfig small(std::uint64_t size)
{
    LawConfig c;
    c.max_size = size;
    c.homs.samples = 20;
    return c;
}

// Composite objects of carrier <= 2 over atoms u (1), p (2), q (2).
std::pair<ModelPtr, std::vector<ObjectExpr>> product_inventory()
{
    auto m = std::make_shared<Model>(Backend::finset, "finset",
                                     std::map<std::string, AtomSpec>{{"u", {1, {"0"}}}, {"p", {2, {"0", "1"}}}, {"q", {2, {"0", "1"}}}});
    std::vector<ObjectExpr> objs{ObjectExpr::unit(), m->object({"u"}), m->object({"p"}), m->object({"q"}),
                                 m->object({"u", "u"}), m->object({"u", "p"}), m->object({"p", "u"}),
                                 m->object({"u", "q"}), m->object({"q", "u"})};
    return {m, objs};
}

} // namespace

TEST_CASE("eval applies encoded functions")
{
    auto l = standard_linking(standard_enrichments().finset_self);
    auto m = Model::standard(Backend::finset);
    for (std::uint64_t a = 1; a <= 3; ++a)
        for (std::uint64_t b = 1; b <= 3; ++b) {
            auto ev = eval_morphism(l, n(a), n(b));
            for (auto& f : m->homs(n(a), n(b), {}).items)
                for (std::uint64_t x = 0; x < a; ++x) {
                    auto point = tensor(finset_point(n(a), x), l.base().kappa(f));
                    CHECK(compose(ev, point).table()[0] == f.table()[x]);
                }
        }
    auto id = identity(Backend::finset, n(2));
    CHECK(compose(eval_morphism(l, n(2), n(2)), tensor(id, l.base().kappa(id))) == id);
}

TEST_CASE("curry of xor selects identity and not")
{
    auto l = standard_linking(standard_enrichments().finset_self);
    Morphism x(Backend::finset, n(2) * n(2), n(2), FunctionTable{0, 1, 1, 0});
    auto g = curry(l, n(2), x);
    auto id = identity(Backend::finset, n(2));
    Morphism nt(Backend::finset, n(2), n(2), FunctionTable{1, 0});
    CHECK(compose(g, finset_point(n(2), 0)) == l.base().kappa(id));
    CHECK(compose(g, finset_point(n(2), 1)) == l.base().kappa(nt));
    // brute force over all 16 maps {0,1} -> [n2,n2]
    int solutions = 0;
    for (auto& h : Model::standard(Backend::finset)->homs(n(2), l.base().hom(n(2), n(2)), {}).items)
        solutions += uncurry(l, n(2), n(2), h) == x;
    CHECK(solutions == 1);
    // projection onto the first factor curries to the constant kappa(id)
    Morphism proj(Backend::finset, n(2) * n(2), n(2), FunctionTable{0, 0, 1, 1});
    auto k = curry(l, n(2), proj);
    for (std::uint64_t c = 0; c < 2; ++c)
        CHECK(compose(k, finset_point(n(2), c)) == l.base().kappa(id));
}

TEST_CASE("matq eval multiplies")
{
    auto l = standard_linking(standard_enrichments().matq_choi);
    auto f = from_dense(n(2), n(2), {{Rational(1, 2), Rational(3)}, {Rational(-1), Rational(2, 3)}});
    auto v = from_dense(ObjectExpr::unit(), n(2), {{Rational(5)}, {Rational(-1, 4)}});
    auto lhs = compose(eval_morphism(l, n(2), n(2)), tensor(v, l.base().kappa(f)));
    CHECK(dense(lhs) == linalg::multiply(dense(f), dense(v)));
}

TEST_CASE("couniversality on the standard enrichments")
{
    auto std_e = standard_enrichments();
    for (auto e : {std_e.finset_self, std_e.finrel_self, std_e.matq_choi}) {
        INFO(e->name());
        auto l = standard_linking(e);
        auto r = check_couniversal(l, small(2));
        CHECK(r.cases_failed == 0);
        CHECK(r.cases_total > 0);
        auto k = check_linked(l, small(2));
        CHECK(k.cases_failed == 0);
        CHECK(k.cases_total > 0);
    }
}

TEST_CASE("couniversality over composite objects")
{
    auto [m, objs] = product_inventory();
    auto l = standard_linking(finset_self(m));
    LawConfig cfg;
    cfg.objects = objs;
    cfg.only = {"EXIST", "UNIQUE"};
    auto r = check_couniversal(l, cfg);
    CHECK(r.cases_failed == 0);
    CHECK(r.cases_skipped == 0);
    CHECK(r.cases_total >= 2 * 1024);
}

TEST_CASE("corrupted eta is caught")
{
    auto e = standard_enrichments().finset_self;
    auto base = standard_linking(e);
    LinkedStructure bad(e, [base, e](const ObjectExpr& a) {
        auto eta = base.eta(a);
        if (a.carrier() != 2)
            return eta;
        return Morphism(Backend::finset, eta.dom(), eta.cod(), FunctionTable{eta.table()[1], eta.table()[0]});
    });
    auto r = check_couniversal(bad, small(2));
    CHECK(r.cases_failed > 0);
    REQUIRE(!r.violations.empty());
    CHECK(r.violations[0].instance.find("f=") != std::string::npos);
    CHECK(check_linked(bad, small(2)).cases_failed > 0);
}

TEST_CASE("enrichment from a closed model reproduces the standard tables")
{
    auto fs = Model::standard(Backend::finset);
    auto derived = enrichment_from_closed(finset_closed_oracle(fs));
    auto std_l = standard_linking(finset_self(fs));
    const auto& d = derived.base();
    const auto& s = std_l.base();
    for (auto& a : fs->inventory(2)) {
        CHECK(derived.eta(a) == std_l.eta(a));
        for (auto& b : fs->inventory(2)) {
            CHECK(d.hom(a, b) == s.hom(a, b));
            for (auto& c : fs->inventory(2))
                CHECK(d.seq(a, b, c) == s.seq(a, b, c));
            for (auto& a2 : fs->inventory(2))
                for (auto& b2 : fs->inventory(2))
                    CHECK(d.par(a, a2, b, b2) == s.par(a, a2, b, b2));
        }
    }
    CHECK(derived.eta(n(2)).table() == FunctionTable{0, 1});
}

TEST_CASE("enrichment from closed models passes every suite")
{
    for (auto oracle : {finset_closed_oracle(Model::standard(Backend::finset)),
                        finrel_closed_oracle(Model::standard(Backend::finrel))}) {
        INFO(oracle->name());
        auto l = enrichment_from_closed(oracle);
        CHECK(check_enriched_laws(l.base(), small(2)).cases_failed == 0);
        CHECK(check_faithful(l.base(), small(2)).cases_failed == 0);
        CHECK(check_linked(l, small(2)).cases_failed == 0);
        auto r = check_couniversal(l, small(2));
        CHECK(r.cases_failed == 0);
        CHECK(r.cases_total > 0);
    }
    CHECK_THROWS_AS(closed_oracle(Model::standard(Backend::matq)), OracleFailure);
}
