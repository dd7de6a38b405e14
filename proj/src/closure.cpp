#include "hopt/closure.hpp"

#include "suite.hpp"

#include "hopt/linalg.hpp"

#include <map>

namespace hopt {

LinkedStructure::LinkedStructure(EnrichedPtr base, EtaFn eta) : base_(std::move(base)), eta_(std::move(eta))
{
    if (base_->lower() != base_->upper() && base_->lower()->name() != base_->upper()->name())
        throw TypeMismatch("a linking needs a self-enrichment");
}

LinkedStructure standard_linking(EnrichedPtr e)
{
    auto* raw = e.get();
    if (raw->lower()->backend() == Backend::finset)
        return LinkedStructure(std::move(e), [raw](const ObjectExpr& a) {
            return retype(identity(Backend::finset, a), a, raw->hom(ObjectExpr::unit(), a));
        });
    return LinkedStructure(std::move(e), [raw](const ObjectExpr& a) {
        return retype(raw->upper()->identity(a), a, raw->hom(ObjectExpr::unit(), a));
    });
}

ObjectExpr strip_prefix(const ObjectExpr& dom, const ObjectExpr& a)
{
    const auto& d = dom.atoms();
    const auto& p = a.atoms();
    if (p.size() > d.size() || !std::equal(p.begin(), p.end(), d.begin()))
        throw TypeMismatch(a.render() + " is not a left factor of " + dom.render());
    return ObjectExpr(std::vector<Atom>(d.begin() + static_cast<std::ptrdiff_t>(p.size()), d.end()));
}

Morphism eval_morphism(const LinkedStructure& l, const ObjectExpr& a, const ObjectExpr& b)
{
    const auto& e = l.base();
    const auto seq_part = e.seq_after(ObjectExpr::unit(), a, b, tensor(l.eta(a), e.upper()->identity(e.hom(a, b))));
    return compose(l.eta_inv(b), seq_part);
}

Morphism curry(const LinkedStructure& l, const ObjectExpr& a, const Morphism& f)
{
    const auto& e = l.base();
    const ObjectExpr c = strip_prefix(f.dom(), a);
    const ObjectExpr& b = f.cod();
    const auto& v = *e.upper();
    const auto prepared = compose(tensor(l.eta(c), v.identity(e.hom(a * c, b))), tensor(v.identity(c), e.kappa(f)));
    return compose(partial_insertion(e, ObjectExpr::unit(), c, a, b), prepared);
}

Morphism uncurry(const LinkedStructure& l, const ObjectExpr& a, const ObjectExpr& b, const Morphism& g)
{
    if (!(g.cod() == l.base().hom(a, b)))
        throw TypeMismatch("uncurry: expected a morphism into " + l.base().hom(a, b).render());
    return compose(eval_morphism(l, a, b), tensor(l.base().upper()->identity(a), g));
}

namespace {

using namespace detail;

void begin(LawReport& r, const std::string& suite, const LinkedStructure& l, const LawConfig& c)
{
    begin_report(r, suite, l.base().name(), c);
}

linalg::Vector flatten(const Morphism& m)
{
    linalg::Vector out;
    for (const auto& row : dense(m))
        out.insert(out.end(), row.begin(), row.end());
    return out;
}

} // namespace

LawReport check_couniversal(const LinkedStructure& l, const LawConfig& config)
{
    LawReport report;
    begin(report, "closed", l, config);
    LawRecorder rec(report, config);
    const auto& e = l.base();
    const Category& c = *e.lower();
    const auto objs = suite_objects(c, config);

    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& x : objs) {
                const Instance base{{"A", a.render()}, {"B", b.render()}, {"C", x.render()}};
                at(rec, "EXIST", base, [&] {
                    const auto fs = c.homs(a * x, b, config.homs);
                    for (std::size_t i = 0; i < fs.items.size(); ++i) {
                        const auto inst = with(base, "f", i);
                        if (!rec.selected("EXIST", inst))
                            continue;
                        const auto& f = fs.items[i];
                        rec.check("EXIST", inst, uncurry(l, a, b, curry(l, a, f)), f);
                    }
                });
                at(rec, "ROUND-TRIP", base, [&] {
                    const auto gs = c.homs(x, e.hom(a, b), config.homs);
                    for (std::size_t i = 0; i < gs.items.size(); ++i) {
                        const auto inst = with(base, "g", i);
                        if (!rec.selected("ROUND-TRIP", inst))
                            continue;
                        const auto& g = gs.items[i];
                        rec.check("ROUND-TRIP", inst, curry(l, a, uncurry(l, a, b, g)), g);
                    }
                });
                if (e.sampled()) {
                    at(rec, "UNIQUE-RANK", base, [&] {
                        if (!rec.selected("UNIQUE-RANK", base))
                            return;
                        const auto hab = e.hom(a, b);
                        linalg::Matrix images;
                        for (std::uint64_t r = 0; r < hab.carrier(); ++r)
                            for (std::uint64_t col = 0; col < x.carrier(); ++col) {
                                const Morphism unit_g(Backend::matq, x, hab, QMatrix{{{r, col, Rational(1)}}});
                                images.push_back(flatten(uncurry(l, a, b, unit_g)));
                            }
                        const auto rk = linalg::rank(images);
                        rec.check_bool("UNIQUE-RANK", base, rk == images.size(), "rank = " + std::to_string(rk),
                                       "dim C(C,[A,B]) = " + std::to_string(images.size()));
                    });
                    continue;
                }
                at(rec, "UNIQUE", base, [&] {
                    // Brute force: every candidate g : C -> [A,B] is uncurried
                    // and the solutions of each equation are counted.
                    const auto gs = c.homs(x, e.hom(a, b), config.homs);
                    std::map<std::string, std::vector<std::size_t>> solutions;
                    for (std::size_t j = 0; j < gs.items.size(); ++j)
                        solutions[uncurry(l, a, b, gs.items[j]).canonical()].push_back(j);
                    const auto fs = c.homs(a * x, b, config.homs);
                    for (std::size_t i = 0; i < fs.items.size(); ++i) {
                        const auto inst = with(base, "f", i);
                        if (!rec.selected("UNIQUE", inst))
                            continue;
                        auto it = solutions.find(fs.items[i].canonical());
                        const std::size_t count = it == solutions.end() ? 0 : it->second.size();
                        std::string witnesses;
                        if (count > 1)
                            witnesses = "g=" + std::to_string(it->second[0]) + ",g'=" + std::to_string(it->second[1]);
                        rec.check_bool("UNIQUE", inst, count == 1, "solutions = " + std::to_string(count), "1",
                                       witnesses);
                    }
                });
            }
    return report;
}

LawReport check_linked(const LinkedStructure& l, const LawConfig& config)
{
    LawReport report;
    begin(report, "linked", l, config);
    LawRecorder rec(report, config);
    const auto& e = l.base();
    const Category& c = *e.lower();
    const auto objs = suite_objects(c, config);
    const ObjectExpr I = ObjectExpr::unit();

    for (const auto& a : objs) {
        const Instance inst{{"A", a.render()}};
        at(rec, "ETA-ISO", inst, [&] {
            if (!rec.selected("ETA-ISO", inst))
                return;
            const auto eta = l.eta(a);
            const bool typed = eta.dom() == a && eta.cod() == e.hom(I, a);
            rec.check_bool("ETA-ISO", inst, typed && is_iso(eta), eta.describe().substr(0, 256),
                           "an isomorphism " + a.render() + " -> " + e.hom(I, a).render());
        });
        for (const auto& b : objs) {
            const Instance ab{{"A", a.render()}, {"B", b.render()}};
            at(rec, "ETA-NAT", ab, [&] {
                const auto fs = c.homs(a, b, config.homs);
                const auto ea = l.eta(a);
                const auto eb = l.eta(b);
                const auto idI = c.identity(I);
                for (std::size_t i = 0; i < fs.items.size(); ++i) {
                    const auto inst2 = with(ab, "f", i);
                    if (!rec.selected("ETA-NAT", inst2))
                        continue;
                    const auto& f = fs.items[i];
                    rec.check("ETA-NAT", inst2, compose(eb, f), compose(e.hom_map(idI, f), ea));
                }
            });
            at(rec, "ETA-MON", ab, [&] {
                if (!rec.selected("ETA-MON", ab))
                    return;
                rec.check("ETA-MON", ab, l.eta(a * b), e.par_after(I, a, I, b, tensor(l.eta(a), l.eta(b))));
            });
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Closed oracles

namespace {

class FinsetClosed final : public ClosedOracle {
public:
    explicit FinsetClosed(ModelPtr model) : model_(std::move(model)) {}
    std::string name() const override { return "finset_closed"; }
    ModelPtr model() const override { return model_; }

    ObjectExpr internal_hom(const ObjectExpr& a, const ObjectExpr& b) const override
    {
        if (a.is_unit() && b.is_unit())
            return ObjectExpr::unit();
        return ObjectExpr::atom("[" + a.render() + "," + b.render() + "]", power(b.carrier(), a.carrier()));
    }

    // A function h : A -> B is the number whose base-|B| digits, most
    // significant first, are h(0), ..., h(|A|-1).
    Morphism eval(const ObjectExpr& a, const ObjectExpr& b) const override
    {
        const std::uint64_t na = a.carrier();
        const std::uint64_t nb = b.carrier();
        const std::uint64_t nh = power(nb, na);
        if (na * nh > kMaxTable)
            throw BoundExceeded("eval table too large");
        FunctionTable t(na * nh);
        for (std::uint64_t x = 0; x < na; ++x)
            for (std::uint64_t h = 0; h < nh; ++h)
                t[x * nh + h] = (h / power(nb, na - 1 - x)) % nb;
        return Morphism(Backend::finset, a * internal_hom(a, b), b, std::move(t));
    }

    Morphism curry(const ObjectExpr& a, const Morphism& f) const override
    {
        const ObjectExpr c = strip_prefix(f.dom(), a);
        const std::uint64_t na = a.carrier();
        const std::uint64_t nc = c.carrier();
        const std::uint64_t nb = f.cod().carrier();
        FunctionTable t(nc);
        for (std::uint64_t y = 0; y < nc; ++y) {
            std::uint64_t code = 0;
            for (std::uint64_t x = 0; x < na; ++x)
                code = code * nb + f.table()[x * nc + y];
            t[y] = code;
        }
        return Morphism(Backend::finset, c, internal_hom(a, f.cod()), std::move(t));
    }

private:
    static std::uint64_t power(std::uint64_t base, std::uint64_t exp)
    {
        std::uint64_t r = 1;
        for (std::uint64_t i = 0; i < exp; ++i)
            if (__builtin_mul_overflow(r, base, &r))
                throw BoundExceeded("internal hom exceeds 64 bits");
        return r;
    }

    ModelPtr model_;
};

class FinrelClosed final : public ClosedOracle {
public:
    explicit FinrelClosed(ModelPtr model) : model_(std::move(model)) {}
    std::string name() const override { return "finrel_closed"; }
    ModelPtr model() const override { return model_; }

    ObjectExpr internal_hom(const ObjectExpr& a, const ObjectExpr& b) const override { return a * b; }

    // eval relates (a, a, b) to b.
    Morphism eval(const ObjectExpr& a, const ObjectExpr& b) const override
    {
        const std::uint64_t na = a.carrier();
        const std::uint64_t nb = b.carrier();
        Relation r;
        for (std::uint64_t x = 0; x < na; ++x)
            for (std::uint64_t y = 0; y < nb; ++y)
                r.pairs.emplace_back((x * na + x) * nb + y, y);
        return Morphism(Backend::finrel, a * internal_hom(a, b), b, std::move(r));
    }

    // curry(f) relates c to (a, b) whenever f relates (a, c) to b.
    Morphism curry(const ObjectExpr& a, const Morphism& f) const override
    {
        const ObjectExpr c = strip_prefix(f.dom(), a);
        const std::uint64_t nc = c.carrier();
        const std::uint64_t nb = f.cod().carrier();
        Relation r;
        for (const auto& [ac, b] : f.relation().pairs)
            r.pairs.emplace_back(ac % nc, (ac / nc) * nb + b);
        return Morphism(Backend::finrel, c, internal_hom(a, f.cod()), std::move(r));
    }

private:
    ModelPtr model_;
};

// The enrichment carried by a closed model.
class FromClosed final : public EnrichedSmc {
public:
    explicit FromClosed(ClosedOraclePtr oracle) : oracle_(std::move(oracle)), model_(oracle_->model()) {}

    std::string name() const override { return oracle_->name() + "_enriched"; }
    CategoryPtr lower() const override { return model_; }
    CategoryPtr upper() const override { return model_; }
    ObjectExpr hom(const ObjectExpr& a, const ObjectExpr& b) const override { return oracle_->internal_hom(a, b); }

    Morphism kappa(const Morphism& f) const override { return oracle_->curry(f.dom(), f); }

    Morphism kappa_inv(const Morphism& state, const ObjectExpr& a, const ObjectExpr& b) const override
    {
        return compose(oracle_->eval(a, b), tensor(model_->identity(a), state));
    }

    Morphism hom_map(const Morphism& p, const Morphism& q) const override
    {
        const ObjectExpr& a = p.cod();
        const ObjectExpr& b = q.dom();
        const auto circuit = compose(q, compose(oracle_->eval(a, b), tensor(p, model_->identity(hom(a, b)))));
        return oracle_->curry(p.dom(), circuit);
    }

    Morphism seq(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c) const override
    {
        const auto circuit =
            compose(oracle_->eval(b, c), tensor(oracle_->eval(a, b), model_->identity(hom(b, c))));
        return oracle_->curry(a, circuit);
    }

    Morphism par(const ObjectExpr& a, const ObjectExpr& a2, const ObjectExpr& b,
                 const ObjectExpr& b2) const override
    {
        const auto shuffle = tensor(tensor(model_->identity(a), model_->braid(b, hom(a, a2))),
                                    model_->identity(hom(b, b2)));
        const auto circuit = compose(tensor(oracle_->eval(a, a2), oracle_->eval(b, b2)), shuffle);
        return oracle_->curry(a * b, circuit);
    }

private:
    ClosedOraclePtr oracle_;
    ModelPtr model_;
};

} // namespace

ClosedOraclePtr finset_closed_oracle(ModelPtr model)
{
    if (model->backend() != Backend::finset)
        throw OracleFailure("finset oracle over a non-FINSET model");
    return std::make_shared<FinsetClosed>(std::move(model));
}

ClosedOraclePtr finrel_closed_oracle(ModelPtr model)
{
    if (model->backend() != Backend::finrel)
        throw OracleFailure("finrel oracle over a non-FINREL model");
    return std::make_shared<FinrelClosed>(std::move(model));
}

ClosedOraclePtr closed_oracle(ModelPtr model)
{
    switch (model->backend()) {
    case Backend::finset:
        return finset_closed_oracle(std::move(model));
    case Backend::finrel:
        return finrel_closed_oracle(std::move(model));
    case Backend::matq:
        break;
    }
    throw OracleFailure("no native currying oracle for " + model->name());
}

LinkedStructure enrichment_from_closed(ClosedOraclePtr oracle)
{
    auto e = std::make_shared<FromClosed>(oracle);
    return LinkedStructure(e, [oracle](const ObjectExpr& a) {
        return inverse(oracle->eval(ObjectExpr::unit(), a));
    });
}

} // namespace hopt
