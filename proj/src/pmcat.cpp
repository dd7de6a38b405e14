#include "hopt/pmcat.hpp"

#include "suite.hpp"

#include <map>

namespace hopt {

Morphism FunctorData::phi_inv(const ObjectExpr& a, const ObjectExpr& b) const
{
    const auto m = phi(a, b);
    auto inv = target->inverse_of(m);
    if (!inv)
        throw TypeMismatch(name + ": comparison morphism is not invertible: " + m.describe());
    return *inv;
}

FunctorData identity_functor(CategoryPtr c)
{
    FunctorData f;
    f.name = "id";
    f.source = c;
    f.target = c;
    f.object = [](const ObjectExpr& a) { return a; };
    f.morphism = [](const Morphism& m) { return m; };
    f.phi = [c](const ObjectExpr& a, const ObjectExpr& b) { return c->identity(a * b); };
    return f;
}

FunctorData compose_functors(const FunctorData& g, const FunctorData& f)
{
    FunctorData h;
    h.name = g.name + "." + f.name;
    h.source = f.source;
    h.target = g.target;
    h.object = [g, f](const ObjectExpr& a) { return g(f(a)); };
    h.morphism = [g, f](const Morphism& m) { return g(f(m)); };
    h.phi = [g, f](const ObjectExpr& a, const ObjectExpr& b) {
        return compose(g(f.phi(a, b)), g.phi(f(a), f(b)));
    };
    return h;
}

PmFunctor identity_pm(EnrichedPtr e)
{
    PmFunctor p;
    p.name = "id(" + e->name() + ")";
    p.source = e;
    p.target = e;
    p.fv = identity_functor(e->upper());
    p.fc = identity_functor(e->lower());
    p.comp = [e](const ObjectExpr& a, const ObjectExpr& b) { return e->upper()->identity(e->hom(a, b)); };
    return p;
}

PmFunctor compose_pm(const PmFunctor& q, const PmFunctor& p)
{
    if (p.target->name() != q.source->name())
        throw TypeMismatch("compose_pm: " + p.name + " lands in " + p.target->name() + " but " + q.name + " starts at " +
                           q.source->name());
    PmFunctor r;
    r.name = q.name + "." + p.name;
    r.source = p.source;
    r.target = q.target;
    r.fv = compose_functors(q.fv, p.fv);
    r.fc = compose_functors(q.fc, p.fc);
    r.comp = [q, p](const ObjectExpr& a, const ObjectExpr& b) {
        return compose(q.comp(p.fc(a), p.fc(b)), q.fv(p.comp(a, b)));
    };
    return r;
}

namespace {

using namespace detail;

std::string mismatch_law(const std::string& prefix, const char* law) { return prefix + "-" + law; }

// ID, COMP and MON for one of the two functors.
void check_functor(LawRecorder& rec, const std::string& prefix, const FunctorData& f,
                   const std::vector<ObjectExpr>& objs)
{
    const auto& cfg = rec.config();
    const auto& src = *f.source;
    const auto& tgt = *f.target;
    const auto homs = [&](const ObjectExpr& a, const ObjectExpr& b) { return src.homs(a, b, cfg.homs); };

    const std::string id_law = mismatch_law(prefix, "ID");
    for (const auto& a : objs) {
        const Instance inst{{"A", a.render()}};
        at(rec, id_law, inst, [&] {
            if (rec.selected(id_law, inst))
                rec.check(id_law, inst, f(src.identity(a)), tgt.identity(f(a)));
        });
    }

    const std::string comp_law = mismatch_law(prefix, "COMP");
    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& c : objs) {
                const Instance base{{"A", a.render()}, {"B", b.render()}, {"C", c.render()}};
                at(rec, comp_law, base, [&] {
                    const auto fs = homs(a, b);
                    const auto gs = homs(b, c);
                    for (auto [i, j] : index_pairs(fs, gs)) {
                        const auto inst = with2(base, "f", i, "g", j);
                        if (!rec.selected(comp_law, inst))
                            continue;
                        rec.check(comp_law, inst, f(compose(gs.items[j], fs.items[i])),
                                  compose(f(gs.items[j]), f(fs.items[i])));
                    }
                });
            }

    const std::string mon_law = mismatch_law(prefix, "MON");
    for (const auto& a : objs)
        for (const auto& a2 : objs)
            for (const auto& b : objs)
                for (const auto& b2 : objs) {
                    const Instance base{{"A", a.render()}, {"A2", a2.render()}, {"B", b.render()}, {"B2", b2.render()}};
                    at(rec, mon_law, base, [&] {
                        const auto fs = homs(a, a2);
                        const auto gs = homs(b, b2);
                        const auto phi = f.phi(a, b);
                        const auto phi2 = f.phi(a2, b2);
                        for (auto [i, j] : index_pairs(fs, gs)) {
                            const auto inst = with2(base, "f", i, "g", j);
                            if (!rec.selected(mon_law, inst))
                                continue;
                            const auto& x = fs.items[i];
                            const auto& y = gs.items[j];
                            rec.check(mon_law, inst, compose(f(tensor(x, y)), phi), compose(phi2, tensor(f(x), f(y))));
                        }
                    });
                }
}

} // namespace

LawReport check_pm(const PmFunctor& p, const LawConfig& config)
{
    LawReport report;
    begin_report(report, "pm", p.name, config);
    LawRecorder rec(report, config);
    const EnrichedSmc& s = *p.source;
    const EnrichedSmc& t = *p.target;
    const Category& c = *s.lower();
    const ObjectExpr I = ObjectExpr::unit();
    const auto objs = suite_objects(c, config);

    {
        const Instance inst{{"A", "I"}};
        at(rec, "UNIT", inst, [&] {
            if (rec.selected("UNIT", inst))
                rec.check_bool("UNIT", inst, p.fc(I).is_unit() && p.fv(I).is_unit(),
                               "FC(I) = " + p.fc(I).render() + ", FV(I) = " + p.fv(I).render(), "I");
        });
    }

    for (const auto& a : objs)
        for (const auto& b : objs) {
            const Instance base{{"A", a.render()}, {"B", b.render()}};
            at(rec, "P1", base, [&] {
                const auto hs = c.homs(a, b, config.homs);
                const auto fab = p.comp(a, b);
                for (std::size_t i = 0; i < hs.items.size(); ++i) {
                    const auto inst = with(base, "f", i);
                    if (!rec.selected("P1", inst))
                        continue;
                    const auto& f = hs.items[i];
                    rec.check("P1", inst, compose(fab, p.fv(s.kappa(f))), t.kappa(p.fc(f)));
                }
            });
        }

    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& cc : objs) {
                const Instance inst{{"A", a.render()}, {"B", b.render()}, {"C", cc.render()}};
                at(rec, "P2", inst, [&] {
                    if (!rec.selected("P2", inst))
                        return;
                    const auto lhs = compose(p.comp(a, cc),
                                             compose(p.fv(s.seq(a, b, cc)), p.fv.phi(s.hom(a, b), s.hom(b, cc))));
                    const auto rhs = t.seq_after(p.fc(a), p.fc(b), p.fc(cc), tensor(p.comp(a, b), p.comp(b, cc)));
                    rec.check("P2", inst, lhs, rhs);
                });
            }

    for (const auto& a : objs)
        for (const auto& a2 : objs)
            for (const auto& b : objs)
                for (const auto& b2 : objs) {
                    const Instance inst{{"A", a.render()}, {"A2", a2.render()}, {"B", b.render()}, {"B2", b2.render()}};
                    at(rec, "P3", inst, [&] {
                        if (!rec.selected("P3", inst))
                            return;
                        const auto lhs = compose(p.comp(a * b, a2 * b2), compose(p.fv(s.par(a, a2, b, b2)),
                                                                                 p.fv.phi(s.hom(a, a2), s.hom(b, b2))));
                        const auto wired = t.par_after(p.fc(a), p.fc(a2), p.fc(b), p.fc(b2),
                                                       tensor(p.comp(a, a2), p.comp(b, b2)));
                        const auto rhs = compose(t.hom_map(p.fc.phi_inv(a, b), p.fc.phi(a2, b2)), wired);
                        rec.check("P3", inst, lhs, rhs);
                    });
                }

    check_functor(rec, "FC", p.fc, objs);
    check_functor(rec, "FV", p.fv, suite_objects(*s.upper(), config));
    return report;
}

namespace {

// Tabulates f on every hom-set between the given objects and scans the
// tables for collisions (faithfulness) and missed targets (fullness).
void check_full_faithful(LawRecorder& rec, const std::string& prefix, const FunctorData& f,
                         const std::vector<ObjectExpr>& objs)
{
    const auto& cfg = rec.config();
    const std::string faithful = prefix + "-FAITHFUL";
    const std::string full = prefix + "-FULL";
    for (const auto& a : objs)
        for (const auto& b : objs) {
            const Instance base{{"A", a.render()}, {"B", b.render()}};
            if (!rec.may_match(base) || (!cfg.wants(faithful) && !cfg.wants(full)))
                continue;
            try {
                const auto hs = f.source->homs(a, b, cfg.homs);
                const auto ts = f.target->homs(f(a), f(b), cfg.homs);
                if (hs.sampled || ts.sampled) {
                    if (cfg.wants(faithful))
                        rec.skip(faithful, base);
                    if (cfg.wants(full))
                        rec.skip(full, base);
                    continue;
                }
                std::map<std::string, std::size_t> table;
                std::optional<std::pair<std::size_t, std::size_t>> clash;
                for (std::size_t i = 0; i < hs.items.size(); ++i) {
                    auto [it, fresh] = table.emplace(f(hs.items[i]).canonical(), i);
                    if (!fresh && !clash)
                        clash = {it->second, i};
                }
                if (cfg.wants(faithful) && rec.selected(faithful, base)) {
                    if (clash)
                        rec.check_bool(faithful, with2(base, "f", clash->first, "g", clash->second), false,
                                       hs.items[clash->first].describe(), hs.items[clash->second].describe(),
                                       "both map to " + f(hs.items[clash->first]).describe());
                    else
                        rec.check_bool(faithful, base, true, "", "");
                }
                if (cfg.wants(full) && rec.selected(full, base)) {
                    std::optional<std::size_t> missed;
                    for (std::size_t j = 0; j < ts.items.size() && !missed; ++j)
                        if (!table.count(ts.items[j].canonical()))
                            missed = j;
                    if (missed)
                        rec.check_bool(full, with(base, "h", *missed), false, ts.items[*missed].describe(),
                                       "no preimage among " + std::to_string(hs.items.size()) + " morphisms");
                    else
                        rec.check_bool(full, base, true, "", "");
                }
            } catch (const BoundExceeded&) {
                rec.skip(faithful, base);
            }
        }
}

} // namespace

LawReport is_fully_faithful(const PmFunctor& p, const LawConfig& config)
{
    LawReport report;
    begin_report(report, "fully-faithful", p.name, config);
    LawRecorder rec(report, config);
    const auto objs = suite_objects(*p.source->lower(), config);
    check_full_faithful(rec, "FC", p.fc, objs);
    check_full_faithful(rec, "FV", p.fv, suite_objects(*p.source->upper(), config));
    for (const auto& a : objs)
        for (const auto& b : objs) {
            const Instance inst{{"A", a.render()}, {"B", b.render()}};
            at(rec, "F-ISO", inst, [&] {
                if (!rec.selected("F-ISO", inst))
                    return;
                const auto fab = p.comp(a, b);
                rec.check_bool("F-ISO", inst, p.target->upper()->inverse_of(fab).has_value(), render_payload(fab),
                               "an isomorphism");
            });
        }
    return report;
}

FunctorData raising_functor(EnrichedPtr e)
{
    FunctorData f;
    f.name = "R(" + e->name() + ")";
    f.source = e->lower();
    f.target = e->upper();
    const ObjectExpr I = ObjectExpr::unit();
    f.object = [e, I](const ObjectExpr& a) { return e->hom(I, a); };
    f.morphism = [e, I](const Morphism& m) { return e->hom_map(e->lower()->identity(I), m); };
    f.phi = [e, I](const ObjectExpr& a, const ObjectExpr& b) { return e->par(I, a, I, b); };
    return f;
}

Morphism gamma_component(const EnrichedSmc& e12, const EnrichedSmc& e23, const ObjectExpr& a, const ObjectExpr& b)
{
    const ObjectExpr I = ObjectExpr::unit();
    const ObjectExpr x = e12.hom(a, b);
    const ObjectExpr y = e12.hom(I, a);
    const ObjectExpr z = e12.hom(I, b);
    // Delta_{I,X,Y,Z} after (id_[I,X] * kappa(seq_{I,A,B})), with the second
    // factor folded into the sequential step.
    const auto& v = *e23.upper();
    const Morphism lift = e23.par_after(y, y, I, x, tensor(e23.kappa(e23.lower()->identity(y)), v.identity(e23.hom(I, x))));
    return e23.seq_after_with(y, y * x, z, lift, e12.seq(I, a, b));
}

PmFunctor gamma_layer(EnrichedPtr e12, EnrichedPtr e23)
{
    if (e12->upper()->name() != e23->lower()->name() || e12->upper()->backend() != e23->lower()->backend())
        throw ChainMismatch("gamma_layer: " + e12->name() + " is enriched in " + e12->upper()->name() + " but " +
                            e23->name() + " enriches " + e23->lower()->name());
    PmFunctor p;
    p.name = "Gamma(" + e12->name() + "," + e23->name() + ")";
    p.source = e12;
    p.target = e23;
    p.fv = raising_functor(e23);
    p.fc = raising_functor(e12);
    p.comp = [e12, e23](const ObjectExpr& a, const ObjectExpr& b) { return gamma_component(*e12, *e23, a, b); };
    return p;
}

} // namespace hopt
