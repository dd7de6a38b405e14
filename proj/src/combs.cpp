#include "hopt/combs.hpp"

#include "suite.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace hopt {

StructuralClosure::StructuralClosure(EnrichedPtr source, std::vector<ObjectExpr> objects, ClosureOptions options)
    : source_(std::move(source)), options_(options)
{
    if (source_->sampled())
        throw Unsupported("structural closure needs enumerable hom-sets, " + source_->name() + " is sampled");
    const ObjectExpr I = ObjectExpr::unit();
    for (auto& o : objects)
        if (std::find(objects_.begin(), objects_.end(), o) == objects_.end())
            objects_.push_back(o);

    std::vector<ObjectExpr> homs;
    for (const auto& p : objects_)
        for (const auto& q : objects_) {
            auto h = source_->hom(p, q);
            if (std::find(homs.begin(), homs.end(), h) == homs.end())
                homs.push_back(h);
        }
    // Admissible V-types: products of at most max_factors hom objects.
    std::vector<ObjectExpr> layer{I};
    std::vector<ObjectExpr> all{I};
    types_[I.render()] = 0;
    for (std::size_t k = 0; k < options_.max_factors; ++k) {
        std::vector<ObjectExpr> next;
        for (const auto& t : layer)
            for (const auto& h : homs)
                if (types_.emplace((t * h).render(), all.size()).second) {
                    next.push_back(t * h);
                    all.push_back(t * h);
                }
        layer = std::move(next);
    }
    product_.assign(all.size(), std::vector<int>(all.size(), -1));
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j) {
            auto it = types_.find((all[i] * all[j]).render());
            if (it != types_.end())
                product_[i][j] = static_cast<int>(it->second);
        }

    const auto& c = *source_->lower();
    const auto& v = *source_->upper();
    auto gen = [&](const std::string& label, const std::function<Morphism()>& build) {
        try {
            auto m = build();
            if (admissible(m.dom()) && admissible(m.cod()))
                add({std::move(m), ClosureMember::Op::generator, label, 0, 0, 0});
        } catch (const BoundExceeded&) {
        }
    };
    for (const auto& p : objects_)
        for (const auto& q : objects_) {
            const auto hs = c.homs(p, q, options_.homs);
            for (std::size_t i = 0; i < hs.items.size(); ++i)
                gen("kappa(" + p.render() + "->" + q.render() + "#" + std::to_string(i) + ")",
                    [&] { return source_->kappa(hs.items[i]); });
        }
    for (const auto& p : objects_)
        for (const auto& q : objects_)
            for (const auto& r : objects_)
                gen("seq(" + p.render() + "," + q.render() + "," + r.render() + ")",
                    [&] { return source_->seq(p, q, r); });
    for (const auto& p : objects_)
        for (const auto& p2 : objects_)
            for (const auto& q : objects_)
                for (const auto& q2 : objects_)
                    if (admissible(source_->hom(p * q, p2 * q2)))
                        gen("par(" + p.render() + "," + p2.render() + "," + q.render() + "," + q2.render() + ")",
                            [&] { return source_->par(p, p2, q, q2); });
    for (const auto& h : homs) {
        gen("id(" + h.render() + ")", [&] { return v.identity(h); });
        for (const auto& h2 : homs)
            gen("braid(" + h.render() + "," + h2.render() + ")", [&] { return v.braid(h, h2); });
    }
}

bool StructuralClosure::admissible(const ObjectExpr& t) const { return types_.count(t.render()) > 0; }

bool StructuralClosure::add(ClosureMember member)
{
    member.dom = types_.at(member.m.dom().render());
    member.cod = types_.at(member.m.cod().render());
    const auto h = member.m.hash();
    auto [lo, hi] = index_.equal_range(h);
    for (auto it = lo; it != hi; ++it)
        if (members_[it->second].m == member.m)
            return false;
    if (members_.size() >= options_.member_cap)
        throw BoundExceeded("structural closure exceeds " + std::to_string(options_.member_cap) + " members in round " +
                            std::to_string(rounds_ + 1));
    index_.emplace(h, members_.size());
    members_.push_back(std::move(member));
    return true;
}

void StructuralClosure::step()
{
    const std::size_t round = ++rounds_;
    const std::size_t before = members_.size();
    for (std::size_t i = 0; i < before; ++i)
        for (std::size_t j = 0; j < before; ++j) {
            if (members_[i].round + 1 < round && members_[j].round + 1 < round)
                continue; // tensored in an earlier round
            if (product_[members_[i].dom][members_[j].dom] < 0 || product_[members_[i].cod][members_[j].cod] < 0)
                continue;
            const auto& f = members_[i].m;
            const auto& g = members_[j].m;
            try {
                add({tensor(f, g), ClosureMember::Op::tensor, {}, i, j, round});
            } catch (const BoundExceeded&) {
                if (members_.size() >= options_.member_cap)
                    throw;
            }
        }

    std::vector<std::vector<std::size_t>> by_dom(product_.size());
    const std::size_t now = members_.size();
    for (std::size_t i = 0; i < now; ++i)
        by_dom[members_[i].dom].push_back(i);
    for (std::size_t i = 0; i < now; ++i) {
        for (std::size_t j : by_dom[members_[i].cod]) {
            if (members_[i].round + 1 < round && members_[j].round + 1 < round)
                continue; // composed in an earlier round
            add({compose(members_[j].m, members_[i].m), ClosureMember::Op::compose, {}, i, j, round});
        }
    }
}

std::optional<std::size_t> StructuralClosure::find(const Morphism& m) const
{
    auto [lo, hi] = index_.equal_range(m.hash());
    for (auto it = lo; it != hi; ++it)
        if (members_[it->second].m == m)
            return it->second;
    return std::nullopt;
}

Morphism StructuralClosure::replay(std::size_t i) const
{
    const auto& mem = members_.at(i);
    switch (mem.op) {
    case ClosureMember::Op::generator:
        return mem.m;
    case ClosureMember::Op::tensor:
        return tensor(replay(mem.lhs), replay(mem.rhs));
    case ClosureMember::Op::compose:
        return compose(replay(mem.rhs), replay(mem.lhs));
    }
    return mem.m;
}

std::string StructuralClosure::trace(std::size_t i) const
{
    const auto& mem = members_.at(i);
    switch (mem.op) {
    case ClosureMember::Op::generator:
        return mem.label;
    case ClosureMember::Op::tensor:
        return "(" + trace(mem.lhs) + " * " + trace(mem.rhs) + ")";
    case ClosureMember::Op::compose:
        return "(" + trace(mem.rhs) + " . " + trace(mem.lhs) + ")";
    }
    return mem.label;
}

StructuralClosure generate_structural_closure(EnrichedPtr e, const std::vector<ObjectExpr>& objects,
                                              const ClosureOptions& options)
{
    StructuralClosure c(std::move(e), objects, options);
    for (std::size_t r = 0; r < options.depth; ++r)
        c.step();
    return c;
}

CombVerdict is_comb(EnrichedPtr e, const std::vector<ObjectExpr>& objects, const Morphism& m,
                    const ClosureOptions& options)
{
    StructuralClosure c(std::move(e), objects, options);
    CombVerdict v;
    for (std::size_t r = 0;; ++r) {
        if (auto i = c.find(m)) {
            v.found = true;
            v.depth = r;
            v.trace = c.trace(*i);
            break;
        }
        if (r == options.depth)
            break;
        c.step();
    }
    v.members = c.members().size();
    return v;
}

Morphism build_comb(const EnrichedSmc& e, const CombShape& shape, const std::vector<Morphism>& stages)
{
    const auto& E = shape.ancilla;
    const std::size_t n = shape.teeth.size();
    if (stages.size() != n + 1)
        throw TypeMismatch("build_comb: " + std::to_string(n) + " teeth need " + std::to_string(n + 1) + " stages, got " +
                           std::to_string(stages.size()));
    auto expect = [](const Morphism& g, const ObjectExpr& dom, const ObjectExpr& cod, std::size_t i) {
        if (!(g.dom() == dom) || !(g.cod() == cod))
            throw TypeMismatch("build_comb: stage " + std::to_string(i) + " should be " + dom.render() + " -> " +
                               cod.render() + ", got " + g.dom().render() + " -> " + g.cod().render());
    };
    if (n == 0) {
        expect(stages[0], shape.input, shape.output, 0);
        return e.kappa(stages[0]);
    }
    for (std::size_t i = 0; i <= n; ++i) {
        const auto dom = i == 0 ? shape.input : E * shape.teeth[i - 1].second;
        const auto cod = i == n ? shape.output : E * shape.teeth[i].first;
        expect(stages[i], dom, cod, i);
    }

    const auto& c = *e.lower();
    const auto& v = *e.upper();
    std::optional<Morphism> acc;
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& [x, y] = shape.teeth[i - 1];
        // [X,Y] -> [E*X,E*Y], then post-composition with the next stage.
        const auto lift = e.par_after(E, E, x, y, tensor(e.kappa(c.identity(E)), v.identity(e.hom(x, y))));
        const auto& g = stages[i];
        const auto tooth = e.seq_after(E * x, E * y, g.cod(), tensor(lift, e.kappa(g)));
        const auto head = acc ? *acc : e.kappa(stages[0]);
        acc = e.seq_after(shape.input, E * x, g.cod(), tensor(head, tooth));
    }
    return *acc;
}

Morphism squaring_map(const EnrichedSmc& e, const ObjectExpr& a)
{
    if (e.lower()->backend() != Backend::finset)
        throw Unsupported("squaring_map: FINSET only");
    const auto h = e.hom(a, a);
    const FunctionCodec codec(a.carrier(), a.carrier());
    FunctionTable out(codec.count());
    for (std::uint64_t code = 0; code < codec.count(); ++code) {
        const auto f = codec.decode(code);
        FunctionTable ff(f.size());
        for (std::size_t x = 0; x < f.size(); ++x)
            ff[x] = f[f[x]];
        out[code] = codec.encode(ff);
    }
    return Morphism(Backend::finset, h, h, std::move(out));
}

namespace {

using namespace detail;

// Calls fn(shape, stages, instance) for every comb with unit ancilla and
// boundary types drawn from objs.
template <class F>
void each_comb(const Category& c, const std::vector<ObjectExpr>& objs, std::size_t teeth, const HomBounds& bounds,
               F&& fn)
{
    const std::size_t slots = 2 + 2 * teeth;
    std::vector<std::size_t> pick(slots, 0);
    while (true) {
        CombShape shape;
        shape.input = objs[pick[0]];
        shape.output = objs[pick[1]];
        Instance inst{{"t", std::to_string(teeth)}, {"A", shape.input.render()}, {"B", shape.output.render()}};
        for (std::size_t i = 0; i < teeth; ++i) {
            shape.teeth.emplace_back(objs[pick[2 + 2 * i]], objs[pick[3 + 2 * i]]);
            inst.emplace_back("X" + std::to_string(i + 1), shape.teeth.back().first.render());
            inst.emplace_back("Y" + std::to_string(i + 1), shape.teeth.back().second.render());
        }
        std::vector<HomSet> stage_homs;
        for (std::size_t i = 0; i <= teeth; ++i) {
            const auto dom = i == 0 ? shape.input : shape.teeth[i - 1].second;
            const auto cod = i == teeth ? shape.output : shape.teeth[i].first;
            stage_homs.push_back(c.homs(dom, cod, bounds));
        }
        std::vector<std::size_t> g(teeth + 1, 0);
        bool empty = std::any_of(stage_homs.begin(), stage_homs.end(), [](const HomSet& h) { return h.items.empty(); });
        while (!empty) {
            std::vector<Morphism> stages;
            Instance full = inst;
            for (std::size_t i = 0; i <= teeth; ++i) {
                stages.push_back(stage_homs[i].items[g[i]]);
                full.emplace_back("g" + std::to_string(i), std::to_string(g[i]));
            }
            fn(shape, stages, full);
            std::size_t k = 0;
            while (k <= teeth && ++g[k] == stage_homs[k].items.size())
                g[k++] = 0;
            if (k > teeth)
                break;
        }
        std::size_t k = 0;
        while (k < slots && ++pick[k] == objs.size())
            pick[k++] = 0;
        if (k == slots)
            return;
    }
}

} // namespace

LawReport check_combs(EnrichedPtr e, const LawConfig& config, const ClosureOptions& options)
{
    LawReport report;
    begin_report(report, "combs", e->name(), config);
    report.bounds.emplace_back("depth", std::to_string(options.depth));
    report.bounds.emplace_back("member_cap", std::to_string(options.member_cap));
    LawRecorder rec(report, config);
    std::vector<ObjectExpr> objs;
    for (const auto& o : suite_objects(*e->lower(), config))
        if (!o.is_unit())
            objs.push_back(o);
    Instance base;
    for (std::size_t i = 0; i < objs.size(); ++i)
        base.emplace_back("O" + std::to_string(i + 1), objs[i].render());

    std::optional<StructuralClosure> closure;
    try {
        closure = generate_structural_closure(e, objs, options);
    } catch (const BoundExceeded& ex) {
        rec.skip("CLOSURE", base);
        report.bounds.emplace_back("closure", ex.what());
        return report;
    } catch (const Unsupported& ex) {
        rec.skip("CLOSURE", base);
        report.bounds.emplace_back("closure", ex.what());
        return report;
    }
    const auto& c = *e->lower();
    const auto& cl = *closure;

    for (const auto& p : objs)
        for (const auto& q : objs) {
            const Instance pq{{"A", p.render()}, {"B", q.render()}};
            at(rec, "GEN-KAPPA", pq, [&] {
                const auto hs = c.homs(p, q, config.homs);
                for (std::size_t i = 0; i < hs.items.size(); ++i) {
                    const auto inst = with(pq, "f", i);
                    if (!rec.selected("GEN-KAPPA", inst))
                        continue;
                    const auto k = e->kappa(hs.items[i]);
                    const auto at_gen = cl.find(k);
                    rec.check_bool("GEN-KAPPA", inst, at_gen && cl.members()[*at_gen].round == 0, render_payload(k),
                                   "a generator");
                }
            });
        }

    if (config.wants("TRACE"))
        for (std::size_t i = 0; i < cl.members().size(); ++i) {
            const Instance inst{{"member", std::to_string(i)}};
            if (rec.selected("TRACE", inst))
                rec.check("TRACE", inst, cl.replay(i), cl.members()[i].m, cl.trace(i));
        }

    for (std::size_t teeth = 1; teeth <= 2 && config.wants("COMB"); ++teeth)
        each_comb(c, objs, teeth, config.homs, [&](const CombShape& shape, const std::vector<Morphism>& stages,
                                                   const Instance& inst) {
            if (!rec.may_match(inst) || !rec.selected("COMB", inst))
                return;
            const auto comb = build_comb(*e, shape, stages);
            const auto at_member = cl.find(comb);
            rec.check_bool("COMB", inst, at_member.has_value(), render_payload(comb),
                           "a member within depth " + std::to_string(options.depth),
                           at_member ? cl.trace(*at_member) : std::string{});
        });

    if (c.backend() == Backend::finset)
        for (const auto& p : objs) {
            const Instance inst{{"A", p.render()}};
            at(rec, "SQUARE", inst, [&] {
                if (!rec.selected("SQUARE", inst) || c.homs(p, p, config.homs).items.size() < 2)
                    return;
                const auto sq = squaring_map(*e, p);
                const auto hit = cl.find(sq);
                rec.check_bool("SQUARE", inst, !hit, hit ? cl.trace(*hit) : "not found",
                               "not found within depth " + std::to_string(options.depth));
            });
        }
    return report;
}

} // namespace hopt
