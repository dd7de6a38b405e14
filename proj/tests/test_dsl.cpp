#include "hopt/dsl.hpp"
#include "hopt/runner.hpp"

#include <doctest.h>

#include <json.hpp>

using namespace hopt;
using dsl::MorAst;
using dsl::Stmt;

namespace {

RunConfig quick()
{
    RunConfig c;
    c.max_size = 2;
    c.samples = 10;
    return c;
}

} // namespace

TEST_CASE("parse: statements")
{
    const auto p = dsl::parse("model finset; object A = {0,1}; morphism f: A -> A = {0->1,1->0}; check laws enriched;");
    REQUIRE(p.stmts.size() == 4);
    CHECK(p.stmts[0].kind == Stmt::Kind::model);
    CHECK(p.stmts[1].elements == std::vector<std::string>{"0", "1"});
    CHECK(p.stmts[2].body->kind == MorAst::Kind::literal);
    CHECK(p.stmts[2].body->literal.pairs.size() == 2);
    CHECK(p.stmts[3].kind == Stmt::Kind::check);
    CHECK(p.stmts[3].name == "enriched");

    CHECK(dsl::parse("").stmts.empty());
    CHECK(dsl::parse("  // only a comment\n# and another\n").stmts.empty());

    const auto q = dsl::parse("object Q = 3; tower T = [finset, finset]; check combs depth=2 objects=n1,n2 member=h;");
    CHECK(q.stmts[0].dim == 3u);
    CHECK(q.stmts[1].layers.size() == 2);
    CHECK(q.stmts[2].options == std::vector<std::pair<std::string, std::string>>{
                                    {"depth", "2"}, {"objects", "n1,n2"}, {"member", "h"}});
}

TEST_CASE("parse: precedence")
{
    // ';' binds looser than '*' and associates to the left
    const auto p = dsl::parse("morphism h : A -> A = f * g ; k ; l;");
    const MorAst& m = *p.stmts[0].body;
    REQUIRE(m.kind == MorAst::Kind::then);
    CHECK(m.parts[0].kind == MorAst::Kind::then);
    CHECK(m.parts[0].parts[0].kind == MorAst::Kind::tensor);
    CHECK(dsl::render(m) == "f * g ; k ; l");

    const auto q = dsl::parse("morphism h : A -> A = f * (g ; k); check enriched;");
    CHECK(q.stmts.size() == 2);
    CHECK(q.stmts[0].body->kind == MorAst::Kind::tensor);
    CHECK(dsl::render(*q.stmts[0].body) == "f * (g ; k)");

    const auto r = dsl::parse("morphism h : [A,B] * I -> A = curry(seq(A,B,A), A) ; kappa(id(A*B)); object X = 1;");
    CHECK(r.stmts.size() == 2);
    CHECK(dsl::render(*r.stmts[0].body) == "curry(seq(A,B,A), A) ; kappa(id(A * B))");
    CHECK(dsl::render(*r.stmts[0].dom) == "[A,B] * I");

    const auto lit = dsl::parse("morphism m : Q -> Q = [[1/2, -1], [1/2, 2]];");
    CHECK(lit.stmts[0].body->literal.rows == std::vector<std::vector<std::string>>{{"1/2", "-1"}, {"1/2", "2"}});
}

TEST_CASE("parse: errors carry position and expected tokens")
{
    try {
        dsl::parse("model finset;\nobject A = {0,1}\ncheck enriched;");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 1);
        CHECK(std::string(e.what()).find("expected one of {';'}") != std::string::npos);
    }
    try {
        dsl::parse("frobnicate;");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("'check'") != std::string::npos);
    }
    CHECK_THROWS_AS(dsl::parse("object A = {0,1};\nmorphism f : A -> = f;"), ParseError);
    CHECK_THROWS_AS(dsl::parse("object A = {0 @ 1};"), ParseError);
    CHECK_THROWS_AS(dsl::parse("check enriched max_size=;"), ParseError);
}

TEST_CASE("run: type errors name the composite")
{
    const auto r = run_source("model finset; object A = {0,1}; object B = {x,y,z};"
                              "morphism f : A -> B = {0->x, 1->y}; morphism g : A -> B = f ; f;",
                              quick());
    CHECK(r.exit_code == kExitParse);
    REQUIRE(r.fatal);
    CHECK(r.fatal->find("in composite f ; f") != std::string::npos);

    CHECK(run_source("model finset; object A = {0,1}; morphism f : A -> A = {0->1};", quick()).exit_code == kExitParse);
    CHECK(run_source("model finset; object A = {0,1}; morphism f : A -> A = {0->2, 1->0};", quick()).exit_code ==
          kExitParse);
    CHECK(run_source("model finset; morphism f : n2 -> n2 = g;", quick()).exit_code == kExitParse);
    CHECK(run_source("model finset; morphism f : n2 -> n1 = id(n2);", quick()).exit_code == kExitParse);
    CHECK(run_source("model quantum;", quick()).exit_code == kExitParse);
    CHECK(run_source("check nonsense;", quick()).exit_code == kExitParse);
    CHECK(run_source("check enriched colour=3;", quick()).exit_code == kExitParse);
    CHECK(run_source("tower T = [finset, finrel];", quick()).exit_code == kExitParse);
    CHECK(run_source("model matq; object Q = 2; morphism m : Q -> Q = {0->1, 1->0};", quick()).exit_code ==
          kExitParse);
}

TEST_CASE("run: declarations evaluate to the expected morphisms")
{
    // the swap of A = {a,b} composed with itself is the identity
    auto r = run_source("model finset; object A = {a,b}; morphism s : A -> A = {a->b, b->a};"
                        "morphism t : A -> A = s ; s; morphism u : A -> A = id(A);"
                        "morphism k : I -> [A,A] = kappa(s);"
                        "morphism e : A * [A,A] -> A = eval(A, A);"
                        "morphism c : [A,A] -> [A,A] = curry(e);",
                        quick());
    CHECK(r.exit_code == kExitPass);
    CHECK(r.suites.empty());

    r = run_source("model finrel; object A = {a,b}; morphism s : A -> A = {a->a, a->b};"
                   "morphism t : A * A -> A * A = braid(A, A) ; s * id(A);",
                   quick());
    CHECK(r.exit_code == kExitPass);

    r = run_source("model matq; object Q = 2; morphism m : Q -> Q = [[1/2, 1], [1/2, 0]];"
                   "morphism k : I -> [Q,Q] = kappa(m);",
                   quick());
    CHECK(r.exit_code == kExitPass);

    // a literal inside a composite has no type to check against
    CHECK(run_source("model finset; object A = {a,b}; morphism s : A -> A = id(A) ; {a->b, b->a};", quick())
              .exit_code == kExitParse);
}

TEST_CASE("run: exit codes and reports")
{
    auto r = run_source("model finset; check faithful max_size=2;", quick());
    CHECK(r.exit_code == kExitPass);
    REQUIRE(r.suites.size() == 1);
    CHECK(r.suites[0].report.cases_failed == 0);
    CHECK(r.suites[0].report.cases_total > 0);

    r = run_source("model finset_corrupt; check enriched max_size=2 only=L3;", quick());
    CHECK(r.exit_code == kExitFail);
    REQUIRE(r.suites[0].report.violations.size() == 1);
    CHECK(r.suites[0].report.violations[0].instance == "A=n2,B=n2,C=n2,f=1,g=1");

    const std::string headroom = "model finset; tower T = [finset]; check tower tower=T max_size=2;";
    CHECK(run_source(headroom, quick()).exit_code == kExitPass);
    RunConfig strict = quick();
    strict.strict_bounds = true;
    CHECK(run_source(headroom, strict).exit_code == kExitBounds);

    CHECK(run_source("tower T = [finset_corrupt, finset_corrupt]; check tower tower=T max_size=2;", quick())
              .exit_code == kExitFail);
}

TEST_CASE("run: json is deterministic and replayable")
{
    const std::string src = "model matq; check enriched max_size=2 samples=8; check faithful max_size=2;";
    RunConfig c = quick();
    c.seed = 5;
    const auto a = report_json(run_source(src, c), c, src);
    const auto b = report_json(run_source(src, c), c, src);
    CHECK(a == b);
    c.jobs = 2;
    CHECK(report_json(run_source(src, c), c, src) == a);

    const auto j = nlohmann::json::parse(a);
    CHECK(j["seed"] == 5);
    CHECK(j["suites"].size() == 2);
    CHECK(j["suites"][0]["elapsed_ms"].is_null());
    CHECK(j["config"]["program"] == src);

    const std::string bad = "model finset_corrupt; check enriched max_size=2;";
    RunConfig q = quick();
    const auto report = report_json(run_source(bad, q), q, bad);
    const auto req = load_replay(report, 2);
    CHECK(req.target.law == "L3");
    CHECK(req.source == bad);
    const auto again = run_source(req.source, req.config, req.target);
    REQUIRE(again.suites.size() == 1);
    REQUIRE(again.suites[0].report.violations.size() == 1);
    CHECK(again.suites[0].report.violations[0].lhs == req.lhs);
    CHECK(again.suites[0].report.violations[0].rhs == req.rhs);
    CHECK_THROWS_AS(load_replay(report, 1000), ResolutionError);
    CHECK_THROWS_AS(load_replay("{", 0), ParseError);
}

TEST_CASE("run: text format")
{
    RunConfig c = quick();
    c.format = "text";
    const auto r = run_source("model finset_corrupt; check enriched max_size=2 only=L3;", c);
    const auto t = report_text(r, c);
    CHECK(t.find("FAIL  enriched") != std::string::npos);
    CHECK(t.find("L3 at A=n2,B=n2,C=n2,f=1,g=1") != std::string::npos);
    CHECK(t.find("exit 1") != std::string::npos);
}
