#include "hopt/pmcat.hpp"

#include <algorithm>
#include <set>

namespace hopt {

Idempotent::Idempotent(ObjectExpr c, Morphism m) : carrier(std::move(c)), e(std::move(m))
{
    if (!(e.dom() == carrier) || !(e.cod() == carrier))
        throw TypeMismatch("idempotent on " + carrier.render() + " has type " + e.dom().render() + " -> " +
                           e.cod().render());
    if (!(compose(e, e) == e))
        throw TypeMismatch("not idempotent: " + e.describe());
}

Split::Split(ObjectExpr carrier, std::function<Morphism()> make) : carrier_(std::move(carrier)), make_(std::move(make))
{
}

const Morphism& Split::idempotent() const
{
    std::call_once(once_, [this] { e_ = Idempotent(carrier_, make_()).e; });
    return *e_;
}

ObjectExpr split_object(const Idempotent& x)
{
    const bool plain = x.e == identity(x.e.backend(), x.carrier);
    const std::string name = "(" + x.carrier.render() + (plain ? "" : ":" + x.e.canonical()) + ")";
    auto split = std::make_shared<const Split>(x.carrier, [e = x.e] { return e; });
    return ObjectExpr({Atom{name, x.carrier.carrier(), std::move(split)}});
}

ObjectExpr underlying_carrier(const ObjectExpr& k)
{
    ObjectExpr carrier;
    for (const auto& atom : k.atoms()) {
        if (!atom.split)
            throw TypeMismatch("not an envelope object: " + k.render());
        carrier = carrier * atom.split->carrier();
    }
    return carrier;
}

Idempotent underlying(const Category& base, const ObjectExpr& k)
{
    std::optional<Morphism> e;
    for (const auto& atom : k.atoms()) {
        if (!atom.split)
            throw TypeMismatch("not an envelope object: " + k.render());
        e = e ? tensor(*e, atom.split->idempotent()) : atom.split->idempotent();
    }
    if (!e)
        return Idempotent(ObjectExpr::unit(), base.identity(ObjectExpr::unit()));
    return Idempotent(underlying_carrier(k), *e);
}

Morphism underlying(const Morphism& m)
{
    return retype(m, underlying_carrier(m.dom()), underlying_carrier(m.cod()));
}

KaroubiCategory::KaroubiCategory(CategoryPtr base, std::size_t per_carrier)
    : base_(std::move(base)), per_carrier_(per_carrier)
{
}

Morphism KaroubiCategory::identity(const ObjectExpr& a) const
{
    return retype(underlying(*base_, a).e, a, a);
}

Morphism KaroubiCategory::braid(const ObjectExpr& a, const ObjectExpr& b) const
{
    const auto x = underlying(*base_, a);
    const auto y = underlying(*base_, b);
    return retype(compose(base_->braid(x.carrier, y.carrier), tensor(x.e, y.e)), a * b, b * a);
}

HomSet KaroubiCategory::homs(const ObjectExpr& a, const ObjectExpr& b, const HomBounds& bounds) const
{
    const auto x = underlying(*base_, a);
    const auto y = underlying(*base_, b);
    const auto all = base_->homs(x.carrier, y.carrier, bounds);
    HomSet out;
    out.sampled = all.sampled;
    if (!all.sampled) {
        for (const auto& f : all.items)
            if (compose(y.e, compose(f, x.e)) == f)
                out.items.push_back(retype(f, a, b));
        return out;
    }
    // Sampled base: project every sample into the envelope and deduplicate.
    std::set<std::string> seen;
    for (std::size_t i = 0; i < all.items.size(); ++i) {
        const auto f = compose(y.e, compose(all.items[i], x.e));
        if (!seen.insert(f.canonical()).second)
            continue;
        out.items.push_back(retype(f, a, b));
        if (i < all.generator_count)
            out.generator_count = out.items.size();
    }
    return out;
}

bool KaroubiCategory::contains(const Morphism& m) const
{
    try {
        const auto x = underlying(*base_, m.dom());
        const auto y = underlying(*base_, m.cod());
        const auto f = underlying(m);
        return base_->contains(f) && compose(y.e, compose(f, x.e)) == f;
    } catch (const TypeMismatch&) {
        return false;
    }
}

std::vector<ObjectExpr> KaroubiCategory::inventory(std::uint64_t max_size) const
{
    std::vector<ObjectExpr> out{ObjectExpr::unit()};
    for (const auto& a : base_->inventory(max_size)) {
        if (a.is_unit())
            continue;
        const auto id = base_->identity(a);
        std::vector<Morphism> found;
        for (const auto& f : base_->homs(a, a, {}).items)
            if (!(f == id) && compose(f, f) == f)
                found.push_back(f);
        std::sort(found.begin(), found.end(),
                  [](const Morphism& l, const Morphism& r) { return l.canonical() < r.canonical(); });
        found.insert(found.begin(), id);
        if (found.size() > per_carrier_)
            found.erase(found.begin() + static_cast<std::ptrdiff_t>(per_carrier_), found.end());
        for (const auto& e : found)
            out.push_back(split_object(Idempotent(a, e)));
    }
    return out;
}

std::optional<Morphism> KaroubiCategory::inverse_of(const Morphism& m) const
{
    const auto id_dom = identity(m.dom());
    const auto id_cod = identity(m.cod());
    for (const auto& g : homs(m.cod(), m.dom(), {}).items)
        if (compose(g, m) == id_dom && compose(m, g) == id_cod)
            return g;
    return std::nullopt;
}

Morphism KaroubiCategory::lift(const Morphism& m, const ObjectExpr& dom, const ObjectExpr& cod) const
{
    auto k = retype(m, dom, cod);
    if (!contains(k))
        throw TypeMismatch("not a morphism of the envelope: " + k.describe());
    return k;
}

ObjectExpr KaroubiCategory::embed(const ObjectExpr& a) const
{
    ObjectExpr out;
    for (const auto& atom : a.atoms()) {
        const ObjectExpr single({atom});
        out = out * split_object(Idempotent(single, base_->identity(single)));
    }
    return out;
}

namespace {

class KaroubiSelf final : public EnrichedSmc {
public:
    KaroubiSelf(EnrichedPtr base, std::shared_ptr<const KaroubiCategory> k) : base_(std::move(base)), k_(std::move(k)) {}

    std::string name() const override { return "karoubi(" + base_->name() + ")"; }
    CategoryPtr lower() const override { return k_; }
    CategoryPtr upper() const override { return k_; }

    ObjectExpr hom(const ObjectExpr& a, const ObjectExpr& b) const override
    {
        if (a.is_unit() && b.is_unit())
            return ObjectExpr::unit();
        const auto carrier = base_->hom(underlying_carrier(a), underlying_carrier(b));
        auto make = [base = base_, k = k_, a, b] {
            const auto x = underlying(*k->base(), a);
            const auto y = underlying(*k->base(), b);
            return base->hom_map(x.e, y.e);
        };
        const auto name = "[" + a.render() + "," + b.render() + "]";
        return ObjectExpr({Atom{name, carrier.carrier(), std::make_shared<const Split>(carrier, std::move(make))}});
    }

    Morphism hom_map(const Morphism& p, const Morphism& q) const override
    {
        const auto m = base_->hom_map(under(p), under(q));
        return retype(m, hom(p.cod(), q.dom()), hom(p.dom(), q.cod()));
    }

    Morphism kappa(const Morphism& f) const override
    {
        return retype(base_->kappa(under(f)), ObjectExpr::unit(), hom(f.dom(), f.cod()));
    }

    Morphism kappa_inv(const Morphism& state, const ObjectExpr& a, const ObjectExpr& b) const override
    {
        const auto x = under(a);
        const auto y = under(b);
        const auto s = retype(state, ObjectExpr::unit(), base_->hom(x.carrier, y.carrier));
        return retype(base_->kappa_inv(s, x.carrier, y.carrier), a, b);
    }

    Morphism seq(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c) const override
    {
        return seq_after(a, b, c, k_->identity(hom(a, b) * hom(b, c)));
    }

    Morphism par(const ObjectExpr& a, const ObjectExpr& a2, const ObjectExpr& b, const ObjectExpr& b2) const override
    {
        return par_after(a, a2, b, b2, k_->identity(hom(a, a2) * hom(b, b2)));
    }

    // [x,z] after seq after m. The sandwich ([x,y] * [y,z]) is absorbed by m,
    // so seq itself is [x,z] after seq after ([x,y] * [y,z]).
    Morphism seq_after(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c, const Morphism& m) const override
    {
        const auto x = under(a);
        const auto y = under(b);
        const auto z = under(c);
        const auto inner = base_->seq_after(x.carrier, y.carrier, z.carrier, under(m));
        return retype(base_->hom_map_after(x.e, z.e, inner), m.dom(), hom(a, c));
    }

    Morphism par_after(const ObjectExpr& a, const ObjectExpr& a2, const ObjectExpr& b, const ObjectExpr& b2,
                       const Morphism& m) const override
    {
        const auto x = under(a);
        const auto x2 = under(a2);
        const auto y = under(b);
        const auto y2 = under(b2);
        const auto inner = base_->par_after(x.carrier, x2.carrier, y.carrier, y2.carrier, under(m));
        return retype(base_->hom_map_after(tensor(x.e, y.e), tensor(x2.e, y2.e), inner), m.dom(), hom(a * b, a2 * b2));
    }

private:
    Idempotent under(const ObjectExpr& a) const { return underlying(*k_->base(), a); }
    static Morphism under(const Morphism& m) { return underlying(m); }

    EnrichedPtr base_;
    std::shared_ptr<const KaroubiCategory> k_;
};

} // namespace

KaroubiResult karoubi(EnrichedPtr e, std::size_t per_carrier)
{
    if (e->lower()->name() != e->upper()->name())
        throw Unsupported("karoubi: only self-enrichments are completed, got " + e->name());
    auto k = std::make_shared<const KaroubiCategory>(e->lower(), per_carrier);
    auto env = std::make_shared<const KaroubiSelf>(e, k);

    FunctorData f;
    f.name = "embed";
    f.source = e->lower();
    f.target = k;
    f.object = [k](const ObjectExpr& a) { return k->embed(a); };
    f.morphism = [k](const Morphism& m) { return retype(m, k->embed(m.dom()), k->embed(m.cod())); };
    f.phi = [k](const ObjectExpr& a, const ObjectExpr& b) { return k->identity(k->embed(a * b)); };

    PmFunctor p;
    p.name = "embed(" + e->name() + ")";
    p.source = e;
    p.target = env;
    p.fc = f;
    p.fv = f;
    p.comp = [e, k, env](const ObjectExpr& a, const ObjectExpr& b) {
        const auto h = e->hom(a, b);
        return retype(e->upper()->identity(h), k->embed(h), env->hom(k->embed(a), k->embed(b)));
    };
    return {env, p};
}

PmFunctor collapse(EnrichedPtr e)
{
    auto terminal = std::make_shared<const Model>(Backend::finset, "terminal", std::map<std::string, AtomSpec>{});
    auto target = finset_self(terminal);
    const ObjectExpr I = ObjectExpr::unit();

    auto to_unit = [terminal, I](CategoryPtr src) {
        FunctorData f;
        f.name = "collapse";
        f.source = std::move(src);
        f.target = terminal;
        f.object = [I](const ObjectExpr&) { return I; };
        f.morphism = [terminal, I](const Morphism&) { return terminal->identity(I); };
        f.phi = [terminal, I](const ObjectExpr&, const ObjectExpr&) { return terminal->identity(I); };
        return f;
    };

    PmFunctor p;
    p.name = "collapse(" + e->name() + ")";
    p.source = e;
    p.target = target;
    p.fc = to_unit(e->lower());
    p.fv = to_unit(e->upper());
    p.comp = [terminal, I](const ObjectExpr&, const ObjectExpr&) { return terminal->identity(I); };
    return p;
}

} // namespace hopt
