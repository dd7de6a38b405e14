// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "hopt/causlite.hpp"
#include "hopt/closure.hpp"
#include "hopt/combs.hpp"
#include "hopt/runner.hpp"
#include "hopt/towers.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <string>
#include <type_traits>

using namespace hopt;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

ObjectExpr n(std::uint64_t k) { return ObjectExpr::atom("n" + std::to_string(k), k); }

LawConfig bounded(std::uint64_t max_size, std::set<std::string> only = {})
{
    LawConfig c;
    c.max_size = max_size;
    c.only = std::move(only);
    c.homs.samples = 200;
    c.homs.seed = 20240601;
    return c;
}

std::string counts(const LawReport& r)
{
    return r.model + " " + std::to_string(r.cases_total) + " cases, " + std::to_string(r.cases_failed) +
           " failed, " + std::to_string(r.cases_skipped) + " skipped";
}

bool clean(const LawReport& r) { return r.cases_failed == 0 && r.cases_skipped == 0 && r.cases_total > 0; }

const std::set<std::string> kLaws{"L1", "L2", "L3", "L4", "L5", "L6", "L7"};

Outcome kappa_bijection()
{
    auto s = standard_enrichments(3);
    Outcome o{true, ""};
    for (const auto& e : {s.finset_self, s.finrel_self}) {
        const auto r = check_enriched_laws(*e, bounded(3, {"KAPPA-BIJ", "KAPPA-INV"}));
        o.pass = o.pass && clean(r);
        o.detail += counts(r) + "; ";
    }
    return o;
}

Outcome enriched_laws()
{
    auto s = standard_enrichments(3);
    Outcome o{true, ""};
    for (const auto& e : {s.finset_self, s.finrel_self, s.matq_choi}) {
        const auto r = check_enriched_laws(*e, bounded(3, kLaws));
        // skipped cases are hom objects whose carrier has no 64-bit index
        o.pass = o.pass && r.cases_failed == 0 && r.cases_total > 0;
        o.detail += counts(r) + "; ";
    }
    o.detail += "matq samples 200";
    return o;
}

Outcome delta_specialization()
{
    const auto r = check_partial_insertion(*standard_enrichments(2).finset_self, bounded(2, {"DELTA-SPEC"}));
    return {clean(r), counts(r)};
}

Outcome faithfulness()
{
    auto s = standard_enrichments(3);
    Outcome o{true, ""};
    for (const auto& [e, size] : {std::pair{s.finset_self, 2}, {s.finrel_self, 2}, {s.matq_choi, 3}}) {
        const auto r = check_faithful(*e, bounded(size));
        o.pass = o.pass && clean(r);
        o.detail += counts(r) + "; ";
    }
    return o;
}

Outcome eval_curry()
{
    auto fs = Model::standard(Backend::finset, 2);
    const auto e = finset_self(fs);
    const auto l = standard_linking(e);
    // every object of carrier <= 2 built from at most two atoms
    LawConfig c = bounded(2, {"EXIST", "UNIQUE"});
    c.objects = {ObjectExpr::unit(), n(1), n(2), n(1) * n(1), n(1) * n(2), n(2) * n(1)};
    const auto r = check_couniversal(l, c);
    Outcome o{clean(r) && r.cases_total >= 1024, counts(r)};

    // the closed model's enrichment reproduces the standard tables
    const auto derived = enrichment_from_closed(finset_closed_oracle(fs));
    const auto& d = derived.base();
    std::size_t compared = 0, differ = 0;
    const auto objs = fs->inventory(2);
    for (const auto& a : objs) {
        differ += !(derived.eta(a) == l.eta(a));
        ++compared;
        for (const auto& b : objs) {
            for (const auto& x : objs) {
                differ += !(d.seq(a, b, x) == e->seq(a, b, x));
                ++compared;
            }
            for (const auto& a2 : objs)
                for (const auto& b2 : objs) {
                    differ += !(d.par(a, a2, b, b2) == e->par(a, a2, b, b2));
                    ++compared;
                }
        }
    }
    o.pass = o.pass && differ == 0;
    o.detail += "; closed tables " + std::to_string(compared - differ) + "/" + std::to_string(compared) + " equal";
    return o;
}

Outcome gamma_layers()
{
    auto s = standard_enrichments(2);
    Outcome o{true, ""};
    for (const auto& e : {s.finset_self, s.finrel_self}) {
        const auto r = check_pm(gamma_layer(e, e), bounded(2, {"P1", "P2", "P3"}));
        o.pass = o.pass && clean(r);
        o.detail += counts(r) + "; ";
    }
    return o;
}

Outcome karoubi_envelope()
{
    const auto k = karoubi(standard_enrichments(2).finset_self, 4);
    const auto c = bounded(2);
    LawReport laws = check_enriched_laws(*k.envelope, c);
    const LawReport faithful = check_faithful(*k.envelope, c);
    const LawReport full = is_fully_faithful(k.embedding, c);
    const bool ok = clean(laws) && clean(faithful) && clean(full);
    return {ok, "enriched " + counts(laws) + "; faithful " + counts(faithful) + "; embedding " + counts(full)};
}

Outcome combs()
{
    const auto e = standard_enrichments(2).finset_self;
    ClosureOptions options;
    options.depth = 4;
    const auto r = check_combs(e, bounded(2, {"COMB"}), options);
    const auto closure = generate_structural_closure(e, {n(1), n(2)}, options);
    const auto members = closure.members().size();
    return {clean(r) && members < 20000, counts(r) + "; closure " + std::to_string(members) + " members"};
}

Outcome towers()
{
    const auto e = standard_enrichments(2).finset_self;
    const auto m = trivial_merger(build_tower(std::vector<EnrichedPtr>(4, e)));
    const auto c = bounded(2);
    LawReport mu;
    for (std::size_t i = 1; i + 2 <= m.tower.top(); ++i)
        mu.merge(check_mu_condition(m, i, c));
    const auto closed = check_apex_closed(m, c);

    const auto l = standard_linking(e);
    std::size_t compared = 0, differ = 0;
    const std::vector<ObjectExpr> objs{ObjectExpr::unit(), n(1), n(2)};
    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& x : objs)
                for (const auto& f : e->lower()->homs(a * x, b, {}).items) {
                    const auto fa = m.F(1)(a);
                    const auto lifted = retype(f, fa * m.F(1)(x), m.F(1)(b));
                    differ += !(apex_curry(m, fa, lifted).table() == curry(l, a, f).table());
                    ++compared;
                }
    const bool ok = clean(mu) && closed.cases_failed == 0 && closed.cases_total > 0 && differ == 0;
    return {ok, "mu " + counts(mu) + "; apex closed " + counts(closed) + " (beyond headroom); curry " +
                    std::to_string(compared - differ) + "/" + std::to_string(compared) + " equal"};
}

// Every numeric type on the path from causal types to verdicts is Rational.
static_assert(std::is_same_v<linalg::Vector::value_type, Rational>);
static_assert(std::is_same_v<linalg::Matrix::value_type, linalg::Vector>);
static_assert(std::is_same_v<decltype(MatrixEntry::value), Rational>);
static_assert(std::is_same_v<std::remove_cvref_t<decltype(std::declval<CausType>().rhs())>, linalg::Vector>);
static_assert(std::is_same_v<decltype(std::declval<Rational>().num()), std::int64_t>);

std::size_t float_tokens(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        return 1; // an unreadable source cannot be cleared
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    static const std::regex floating(R"(\b(float|double|long double)\b)");
    return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), floating), {}));
}

Outcome causlite()
{
    std::size_t passed = 0, total = 0;
    for (std::uint64_t a = 1; a <= 3; ++a)
        for (std::uint64_t b = 1; b <= 3; ++b)
            for (std::uint64_t c = 1; c <= 3; ++c) {
                const auto v = check_supermap_preserves(seq_supermap(a, b, c),
                                                        ns_tensor(hom_type(a, b), hom_type(b, c)), hom_type(a, c));
                passed += v.result == SupermapVerdict::Result::pass;
                ++total;
            }
    // copy-across: a' = b and b' = b on bits
    const auto ns = ns_tensor(hom_type(2, 2), hom_type(2, 2));
    linalg::Vector copy;
    for (int x = 0; x < 2; ++x)
        for (int x2 = 0; x2 < 2; ++x2)
            for (int y = 0; y < 2; ++y)
                for (int y2 = 0; y2 < 2; ++y2)
                    copy.push_back(Rational(x2 == y && y2 == y ? 1 : 0));
    const bool copy_rejected = !ns.contains(copy);

    // no floating-point types in the result path
    const std::filesystem::path root = HOPT_SOURCE_DIR;
    std::size_t floats = 0;
    for (const char* f : {"src/causlite.cpp", "src/linalg.cpp", "src/rational.cpp", "include/hopt/causlite.hpp",
                          "include/hopt/linalg.hpp", "include/hopt/rational.hpp"})
        floats += float_tokens(root / f);

    const auto r = check_causlite(bounded(3));
    const bool ok = passed == total && copy_rejected && floats == 0 && r.cases_failed == 0;
    return {ok, "certificate PASS " + std::to_string(passed) + "/" + std::to_string(total) + "; copy-across " +
                    (copy_rejected ? "rejected" : "accepted") + "; floating-point tokens " + std::to_string(floats) +
                    "; suite " + counts(r)};
}

Outcome determinism()
{
    const std::string program = "model finset;\n"
                                "check enriched max_size=2;\n"
                                "check insertion max_size=2;\n"
                                "check faithful max_size=2;\n"
                                "check linked max_size=2;\n"
                                "check closed max_size=2;\n"
                                "check pm max_size=2;\n"
                                "check karoubi max_size=1 per_carrier=2;\n"
                                "check combs max_size=2 depth=2;\n"
                                "check tower max_size=2 depth=3;\n"
                                "check causlite max_size=2 samples=20;\n"
                                "model finrel;\n"
                                "check enriched max_size=2;\n"
                                "check faithful max_size=2;\n"
                                "model matq;\n"
                                "check enriched max_size=2 samples=20;\n"
                                "check faithful max_size=2 samples=20;\n"
                                "model finset_corrupt;\n"
                                "check enriched max_size=2;\n";
    RunConfig c;
    c.seed = 424242;
    const auto a = report_json(run_source(program, c), c, program);
    const auto b = report_json(run_source(program, c), c, program);
    RunConfig other = c;
    other.seed = 7;
    const auto d = report_json(run_source(program, other), other, program);
    return {a == b && a != d, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "DIFFERENT") +
                                  "; other seed " + (a != d ? "differs" : "same")};
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        double limit_s; // 0 = no time limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"1  kappa bijection, FINSET/FINREL sizes <= 3", 5, kappa_bijection},
        {"2  enriched laws L1-L7, FINSET/FINREL/MATQ <= 3", 60, enriched_laws},
        {"3  Delta specialization, FINSET <= 2", 0, delta_specialization},
        {"4  faithfulness, FINSET/FINREL <= 2, MATQ rank <= 3", 0, faithfulness},
        {"5  eval/curry EXIST+UNIQUE, closed tables", 30, eval_curry},
        {"6  gamma layer P1-P3, FINSET/FINREL <= 2", 0, gamma_layers},
        {"7  Karoubi envelope, 4 idempotents per carrier", 0, karoubi_envelope},
        {"8  combs found within depth 4, closure < 20000", 0, combs},
        {"9  depth-4 tower: mu condition, apex closed, curry", 120, towers},
        {"10 causlite certificate, copy-across, exact arithmetic", 0, causlite},
        {"11 byte-identical JSON for equal seeds", 0, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_s == 0 || s < c.limit_s;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("%s  %-56s %7.2fs%s  %s\n", pass ? "PASS" : "FAIL", c.name, s,
                    in_time ? "" : " (over limit)", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
