#include "hopt/towers.hpp"

#include "suite.hpp"

#include "hopt/closure.hpp"
#include "hopt/linalg.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace hopt {

using namespace detail;

Tower::Tower(std::vector<EnrichedPtr> layers) : layers_(std::move(layers)) {}

const EnrichedPtr& Tower::layer(std::size_t i) const
{
    if (i < 1 || i > layers_.size())
        throw std::out_of_range("tower has no layer " + std::to_string(i));
    return layers_[i - 1];
}

CategoryPtr Tower::category(std::size_t i) const
{
    if (i == top())
        return layer(depth())->upper();
    return layer(i)->lower();
}

Tower build_tower(std::vector<EnrichedPtr> layers, const LawConfig& construction)
{
    if (layers.empty())
        throw ChainMismatch("a tower needs at least one layer");
    for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
        const auto& below = *layers[i]->upper();
        const auto& above = *layers[i + 1]->lower();
        if (below.name() != above.name() || below.backend() != above.backend())
            throw ChainMismatch("layer " + std::to_string(i + 1) + " (" + layers[i]->name() + ") is enriched in " +
                                below.name() + " but layer " + std::to_string(i + 2) + " (" + layers[i + 1]->name() +
                                ") enriches " + above.name());
    }
    std::set<const EnrichedSmc*> checked;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (!checked.insert(layers[i].get()).second)
            continue;
        const auto r = check_enriched_laws(*layers[i], construction);
        if (!r.passed()) {
            const auto& v = r.violations.front();
            throw LawViolation("layer " + std::to_string(i + 1) + " (" + layers[i]->name() + ") fails " + v.law +
                               " at " + v.instance);
        }
    }
    return Tower(std::move(layers));
}

Tower build_tower(std::vector<EnrichedPtr> layers)
{
    LawConfig c;
    c.max_size = 1;
    return build_tower(std::move(layers), c);
}

FunctorData raising(const Tower& t, std::size_t i, std::size_t j)
{
    if (i < 1 || i > j || j > t.top())
        throw std::out_of_range("raising(" + std::to_string(i) + "," + std::to_string(j) + ") on a tower of " +
                                std::to_string(t.top()) + " categories");
    auto f = identity_functor(t.category(i));
    for (std::size_t k = i; k < j; ++k)
        f = compose_functors(raising_functor(t.layer(k)), f);
    return f;
}

const FunctorData& FiniteMerger::F(std::size_t i) const
{
    if (i < 1 || i > functors.size())
        throw std::out_of_range("merger has no functor F_" + std::to_string(i));
    return functors[i - 1];
}

FiniteMerger trivial_merger(const Tower& t)
{
    FiniteMerger m{t, t.category(t.top()), {}, {}, {}, {}};
    for (std::size_t i = 1; i <= t.top(); ++i)
        m.functors.push_back(raising(t, i, t.top()));

    auto functors = m.functors;
    auto apex = m.apex;
    m.eta = [t, functors, apex](std::size_t i, const ObjectExpr& x) {
        const auto from = functors.at(i - 1)(x);
        const auto to = functors.at(i)(raising_functor(t.layer(i))(x));
        if (!(from == to))
            throw TypeMismatch("eta: F_" + std::to_string(i) + " and F_" + std::to_string(i + 1) + " R differ on " +
                               x.render());
        return apex->identity(from);
    };
    m.level = [t, functors, apex](const ObjectExpr& a) {
        for (std::size_t i = 1; i <= t.top(); ++i)
            for (const auto& x : t.category(i)->inventory(a.carrier()))
                if (functors[i - 1](x) == a)
                    return Level{i, x, apex->identity(a)};
        throw TypeMismatch(a.render() + " is not a designated apex object");
    };
    m.inventory = [t, functors](std::uint64_t max_size) {
        std::vector<ObjectExpr> out;
        std::set<std::string> seen;
        for (std::size_t i = 1; i <= t.top(); ++i)
            for (const auto& x : t.category(i)->inventory(max_size)) {
                auto a = functors[i - 1](x);
                if (a.carrier() <= max_size && seen.insert(a.render()).second)
                    out.push_back(std::move(a));
            }
        return out;
    };
    return m;
}

namespace {

Morphism invert(const FiniteMerger& m, const Morphism& f)
{
    auto inv = m.apex->inverse_of(f);
    if (!inv)
        throw TypeMismatch("not invertible in the apex: " + f.describe());
    return *inv;
}

void headroom(const FiniteMerger& m, std::size_t k)
{
    const std::size_t n = m.tower.top();
    if (k + 1 > n - 1)
        throw BoundExceeded("level " + std::to_string(k) + " has no headroom in a tower of " + std::to_string(n) +
                            " categories (needs level + 1 <= " + std::to_string(n - 1) + ")");
}

// F_i(X) -> F_j(R_i^j X), the composite of the eta steps.
Morphism up(const FiniteMerger& m, std::size_t i, std::size_t j, const ObjectExpr& x)
{
    auto acc = m.apex->identity(m.F(i)(x));
    auto cur = x;
    for (std::size_t k = i; k < j; ++k) {
        acc = compose(m.eta(k, cur), acc);
        cur = raising_functor(m.tower.layer(k))(cur);
    }
    return acc;
}

struct Lifted {
    ObjectExpr rep;
    Morphism iso; // A -> F_k(rep)
};

Lifted lifted(const FiniteMerger& m, const Level& lv, std::size_t k)
{
    return {raising(m.tower, lv.index, k)(lv.rep), compose(up(m, lv.index, k, lv.rep), lv.iso)};
}

// Some g with F(g) = target, found by retyping first and by enumeration otherwise.
Morphism preimage(const FunctorData& f, const Morphism& target, const ObjectExpr& dom, const ObjectExpr& cod)
{
    if (dom.carrier() == target.dom().carrier() && cod.carrier() == target.cod().carrier()) {
        auto g = retype(target, dom, cod);
        if (f.source->contains(g) && f(g) == target)
            return g;
    }
    const auto gs = f.source->homs(dom, cod, {});
    if (gs.sampled)
        throw Unsupported(f.name + ": no preimage by enumeration in " + f.source->name());
    for (const auto& g : gs.items)
        if (f(g) == target)
            return g;
    throw LawViolation(f.name + " is not full: nothing maps to " + target.describe());
}

} // namespace

Morphism mu(const FiniteMerger& m, std::size_t i, const ObjectExpr& x, const ObjectExpr& y)
{
    if (i + 2 > m.tower.top())
        throw BoundExceeded("mu_" + std::to_string(i) + " needs two layers above level " + std::to_string(i));
    const auto& lo = m.tower.layer(i);
    const auto& hi = m.tower.layer(i + 1);
    const auto gamma = gamma_component(*lo, *hi, x, y);
    return compose(m.F(i + 2)(gamma), m.eta(i + 1, lo->hom(x, y)));
}

ObjectExpr apex_arrow(const FiniteMerger& m, const ObjectExpr& a, const ObjectExpr& b)
{
    const auto la = m.level(a);
    const auto lb = m.level(b);
    const std::size_t k = std::max(la.index, lb.index);
    headroom(m, k);
    return m.F(k + 1)(m.tower.layer(k)->hom(lifted(m, la, k).rep, lifted(m, lb, k).rep));
}

Morphism apex_eval(const FiniteMerger& m, const ObjectExpr& a, const ObjectExpr& b)
{
    const auto la = m.level(a);
    const auto lb = m.level(b);
    const std::size_t k = std::max(la.index, lb.index);
    headroom(m, k);
    const ObjectExpr I = ObjectExpr::unit();
    const auto xa = lifted(m, la, k);
    const auto xb = lifted(m, lb, k);
    const auto& e = *m.tower.layer(k);
    const auto& F = m.F(k + 1);
    const auto hxy = e.hom(xa.rep, xb.rep);
    const auto in = compose(m.eta(k, xa.rep), xa.iso);
    const auto out = compose(m.eta(k, xb.rep), xb.iso);
    const auto plugged = compose(F(e.seq(I, xa.rep, xb.rep)),
                                 compose(F.phi(e.hom(I, xa.rep), hxy), tensor(in, m.apex->identity(F(hxy)))));
    return compose(invert(m, out), plugged);
}

Morphism apex_curry(const FiniteMerger& m, const ObjectExpr& a, const Morphism& f)
{
    const ObjectExpr c = strip_prefix(f.dom(), a);
    const ObjectExpr& b = f.cod();
    const auto la = m.level(a);
    const auto lb = m.level(b);
    const auto lc = m.level(c);
    const std::size_t k = std::max(la.index, lb.index);
    const std::size_t top = std::max(k, lc.index);
    headroom(m, top);
    const ObjectExpr I = ObjectExpr::unit();

    // Transport f into F_top and pull it back to g in C^top.
    const auto xa = lifted(m, la, top);
    const auto xb = lifted(m, lb, top);
    const auto xc = lifted(m, lc, top);
    const auto& F = m.F(top);
    const auto into = compose(F.phi(xa.rep, xc.rep), tensor(xa.iso, xc.iso));
    const auto moved = compose(xb.iso, compose(f, invert(m, into)));
    const auto g = preimage(F, moved, xa.rep * xc.rep, xb.rep);

    // [I,X_C] -> [X_A,X_B], state c to g (id * c).
    const auto& e = *m.tower.layer(top);
    const auto lift = e.par_after(xa.rep, xa.rep, I, xc.rep,
                                  tensor(e.kappa(e.lower()->identity(xa.rep)), e.upper()->identity(e.hom(I, xc.rep))));
    const auto insert = e.seq_after_with(xa.rep, xa.rep * xc.rep, xb.rep, lift, g);
    auto fbar = compose(m.F(top + 1)(insert), compose(m.eta(top, xc.rep), xc.iso));

    // Back down to the arrow object at level k + 1 along mu.
    if (top > k) {
        auto ra = lifted(m, la, k).rep;
        auto rb = lifted(m, lb, k).rep;
        auto chain = m.apex->identity(m.F(k + 1)(m.tower.layer(k)->hom(ra, rb)));
        for (std::size_t j = k; j < top; ++j) {
            chain = compose(mu(m, j, ra, rb), chain);
            const auto r = raising_functor(m.tower.layer(j));
            ra = r(ra);
            rb = r(rb);
        }
        fbar = compose(invert(m, chain), fbar);
    }
    return fbar;
}

namespace {

Instance level_inst(std::size_t i) { return {{"i", std::to_string(i)}}; }

Instance obj(Instance base, const std::string& k, const ObjectExpr& v)
{
    base.emplace_back(k, v.render());
    return base;
}

void eta_naturality(LawRecorder& rec, const FiniteMerger& m, std::size_t i, const std::vector<ObjectExpr>& objs)
{
    const auto& c = *m.tower.category(i);
    const auto R = raising_functor(m.tower.layer(i));
    const auto& Fi = m.F(i);
    const auto& Fj = m.F(i + 1);
    for (const auto& x : objs)
        for (const auto& y : objs) {
            const auto base = obj(obj(level_inst(i), "A", x), "B", y);
            at(rec, "ETA-NAT", base, [&] {
                const auto fs = c.homs(x, y, rec.config().homs);
                const auto ex = m.eta(i, x);
                const auto ey = m.eta(i, y);
                for (std::size_t n = 0; n < fs.items.size(); ++n) {
                    const auto inst = with(base, "f", n);
                    if (!rec.selected("ETA-NAT", inst))
                        continue;
                    const auto& f = fs.items[n];
                    rec.check("ETA-NAT", inst, compose(Fj(R(f)), ex), compose(ey, Fi(f)));
                }
            });
        }
}

} // namespace

LawReport check_merger(const FiniteMerger& m, const LawConfig& config)
{
    LawReport report;
    begin_report(report, "merger", m.apex->name(), config);
    report.bounds.emplace_back("categories", std::to_string(m.tower.top()));
    LawRecorder rec(report, config);

    for (std::size_t i = 1; i < m.tower.top(); ++i) {
        const auto objs = suite_objects(*m.tower.category(i), config);
        const auto R = raising_functor(m.tower.layer(i));
        for (const auto& x : objs) {
            const auto inst = obj(level_inst(i), "A", x);
            at(rec, "ETA-ISO", inst, [&] {
                if (rec.selected("ETA-ISO", inst))
                    rec.check_bool("ETA-ISO", inst, m.apex->inverse_of(m.eta(i, x)).has_value(), "invertible",
                                   "invertible");
            });
        }
        eta_naturality(rec, m, i, objs);
        for (const auto& x : objs)
            for (const auto& y : objs) {
                const auto inst = obj(obj(level_inst(i), "A", x), "B", y);
                at(rec, "ETA-MON", inst, [&] {
                    if (!rec.selected("ETA-MON", inst))
                        return;
                    const auto& Fi = m.F(i);
                    const auto& Fj = m.F(i + 1);
                    const auto lhs = compose(m.eta(i, x * y), Fi.phi(x, y));
                    const auto rhs = compose(Fj(R.phi(x, y)), compose(Fj.phi(R(x), R(y)), tensor(m.eta(i, x), m.eta(i, y))));
                    rec.check("ETA-MON", inst, lhs, rhs);
                });
            }
    }
    const auto designated = config.objects.empty() ? m.inventory(config.max_size) : config.objects;
    for (const auto& a : designated) {
        const Instance inst{{"A", a.render()}};
        at(rec, "DESIGNATED", inst, [&] {
            if (!rec.selected("DESIGNATED", inst))
                return;
            const auto lv = m.level(a);
            const auto target = m.F(lv.index)(lv.rep);
            const bool typed = lv.iso.dom() == a && lv.iso.cod() == target;
            rec.check_bool("DESIGNATED", inst, typed && m.apex->inverse_of(lv.iso).has_value(),
                           "L_A : " + lv.iso.dom().render() + " -> " + lv.iso.cod().render(),
                           "iso " + a.render() + " -> " + target.render());
        });
    }
    return report;
}

LawReport check_mu_condition(const FiniteMerger& m, std::size_t i, const LawConfig& config)
{
    if (i < 1 || i + 2 > m.tower.top())
        throw BoundExceeded("the mu condition at level " + std::to_string(i) + " needs two layers above it");
    LawReport report;
    begin_report(report, "mu", m.apex->name(), config);
    report.bounds.emplace_back("level", std::to_string(i));
    LawRecorder rec(report, config);
    const ObjectExpr I = ObjectExpr::unit();
    const auto& lo = *m.tower.layer(i);
    const auto& hi = *m.tower.layer(i + 1);
    const auto objs = suite_objects(*m.tower.category(i), config);

    // Naturality at level i on the layer objects, and at level i+1 on the
    // hom objects that mu and the evaluation pass through.
    eta_naturality(rec, m, i, objs);
    std::vector<ObjectExpr> homs;
    std::set<std::string> seen;
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& h : {lo.hom(x, y), lo.hom(I, x)})
                if (seen.insert(h.render()).second)
                    homs.push_back(h);
    eta_naturality(rec, m, i + 1, homs);

    const auto& F1 = m.F(i + 1);
    const auto& F2 = m.F(i + 2);
    const auto R = raising_functor(m.tower.layer(i));
    for (const auto& x : objs)
        for (const auto& y : objs) {
            const auto inst = obj(obj(level_inst(i), "A", x), "B", y);
            at(rec, "MU-ISO", inst, [&] {
                if (rec.selected("MU-ISO", inst))
                    rec.check_bool("MU-ISO", inst, m.apex->inverse_of(mu(m, i, x, y)).has_value(), "invertible",
                                   "invertible");
            });
            at(rec, "MU-EVAL", inst, [&] {
                if (!rec.selected("MU-EVAL", inst))
                    return;
                const auto hx = lo.hom(I, x);
                const auto hxy = lo.hom(x, y);
                const auto rx = R(x);
                const auto ry = R(y);
                const auto lhs = compose(m.eta(i + 1, lo.hom(I, y)), compose(F1(lo.seq(I, x, y)), F1.phi(hx, hxy)));
                const auto rhs = compose(F2(hi.seq(I, rx, ry)),
                                         compose(F2.phi(hi.hom(I, rx), hi.hom(rx, ry)),
                                                 tensor(m.eta(i + 1, hx), mu(m, i, x, y))));
                rec.check("MU-EVAL", inst, lhs, rhs);
            });
        }
    return report;
}

namespace {

linalg::Vector flatten(const Morphism& m)
{
    linalg::Vector out;
    for (const auto& row : dense(m))
        out.insert(out.end(), row.begin(), row.end());
    return out;
}

} // namespace

LawReport check_apex_closed(const FiniteMerger& m, const LawConfig& config)
{
    LawReport report;
    begin_report(report, "apex", m.apex->name(), config);
    report.bounds.emplace_back("categories", std::to_string(m.tower.top()));
    LawRecorder rec(report, config);
    const auto& c = *m.apex;
    const auto objs = config.objects.empty() ? m.inventory(config.max_size) : config.objects;

    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& x : objs) {
                const auto base = obj(obj(obj({}, "A", a), "B", b), "C", x);
                if (!rec.may_match(base))
                    continue;
                const std::size_t l = std::max({m.level(a).index, m.level(b).index, m.level(x).index});
                if (l + 1 > m.tower.top() - 1) {
                    if (config.wants("EXIST") && rec.selected("EXIST", base))
                        rec.skip("EXIST", base);
                    continue;
                }
                const auto arrow = apex_arrow(m, a, b);
                const auto ev = apex_eval(m, a, b);
                const auto ida = c.identity(a);
                auto apply = [&](const Morphism& h) { return compose(ev, tensor(ida, h)); };

                at(rec, "EXIST", base, [&] {
                    const auto fs = c.homs(a * x, b, config.homs);
                    for (std::size_t n = 0; n < fs.items.size(); ++n) {
                        const auto inst = with(base, "f", n);
                        if (!rec.selected("EXIST", inst))
                            continue;
                        const auto& f = fs.items[n];
                        rec.check("EXIST", inst, apply(apex_curry(m, a, f)), f);
                    }
                });
                const auto hs = c.homs(x, arrow, config.homs);
                if (hs.sampled) {
                    at(rec, "UNIQUE-RANK", base, [&] {
                        if (!rec.selected("UNIQUE-RANK", base))
                            return;
                        linalg::Matrix images;
                        for (std::uint64_t r = 0; r < arrow.carrier(); ++r)
                            for (std::uint64_t col = 0; col < x.carrier(); ++col)
                                images.push_back(
                                    flatten(apply(Morphism(Backend::matq, x, arrow, QMatrix{{{r, col, Rational(1)}}}))));
                        const auto rk = linalg::rank(images);
                        rec.check_bool("UNIQUE-RANK", base, rk == images.size(), "rank = " + std::to_string(rk),
                                       "dim C(C,A=>B) = " + std::to_string(images.size()));
                    });
                    continue;
                }
                at(rec, "UNIQUE", base, [&] {
                    std::map<std::string, std::vector<std::size_t>> solutions;
                    for (std::size_t j = 0; j < hs.items.size(); ++j)
                        solutions[apply(hs.items[j]).canonical()].push_back(j);
                    const auto fs = c.homs(a * x, b, config.homs);
                    for (std::size_t n = 0; n < fs.items.size(); ++n) {
                        const auto inst = with(base, "f", n);
                        if (!rec.selected("UNIQUE", inst))
                            continue;
                        auto it = solutions.find(fs.items[n].canonical());
                        const std::size_t count = it == solutions.end() ? 0 : it->second.size();
                        std::string witnesses;
                        if (count > 1)
                            witnesses = "h=" + std::to_string(it->second[0]) + ",h'=" + std::to_string(it->second[1]);
                        rec.check_bool("UNIQUE", inst, count == 1, "solutions = " + std::to_string(count), "1",
                                       witnesses);
                    }
                });
            }
    return report;
}

} // namespace hopt
