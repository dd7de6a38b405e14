#include "hopt/enrichment.hpp"

namespace hopt {

namespace {

void require_table(std::uint64_t n, const std::string& what)
{
    if (n > kMaxTable)
        throw BoundExceeded(what + " needs a table of " + std::to_string(n) + " entries");
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw BoundExceeded("carrier product exceeds 64 bits");
    return r;
}

// Function-set enrichment of FINSET.
class FinsetSelf final : public EnrichedSmc {
public:
    explicit FinsetSelf(ModelPtr model) : model_(std::move(model)) {}

    std::string name() const override { return "finset_self"; }
    CategoryPtr lower() const override { return model_; }
    CategoryPtr upper() const override { return model_; }

    ObjectExpr hom(const ObjectExpr& a, const ObjectExpr& b) const override
    {
        if (a.is_unit() && b.is_unit())
            return ObjectExpr::unit();
        const FunctionCodec codec(a.carrier(), b.carrier());
        return ObjectExpr::atom("[" + a.render() + "," + b.render() + "]", codec.count());
    }

    Morphism hom_map(const Morphism& p, const Morphism& q) const override
    {
        const FunctionCodec src(p.cod().carrier(), q.dom().carrier());
        const FunctionCodec dst(p.dom().carrier(), q.cod().carrier());
        require_table(src.count(), "hom_map");
        const auto& pt = p.table();
        const auto& qt = q.table();
        FunctionTable out(src.count());
        FunctionTable h2(pt.size());
        for (std::uint64_t code = 0; code < src.count(); ++code) {
            const FunctionTable h = src.decode(code);
            for (std::size_t x = 0; x < pt.size(); ++x)
                h2[x] = qt[h[pt[x]]];
            out[code] = dst.encode(h2);
        }
        return Morphism(Backend::finset, hom(p.cod(), q.dom()), hom(p.dom(), q.cod()), std::move(out));
    }

    Morphism hom_map_after(const Morphism& p, const Morphism& q, const Morphism& m) const override
    {
        if (!(m.cod() == hom(p.cod(), q.dom())))
            throw TypeMismatch("hom_map_after: " + m.cod().render() + " is not " + hom(p.cod(), q.dom()).render());
        const FunctionCodec src(p.cod().carrier(), q.dom().carrier());
        const FunctionCodec dst(p.dom().carrier(), q.cod().carrier());
        const auto& pt = p.table();
        const auto& qt = q.table();
        FunctionTable out(m.table().size());
        FunctionTable h2(pt.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            const FunctionTable h = src.decode(m.table()[i]);
            for (std::size_t x = 0; x < pt.size(); ++x)
                h2[x] = qt[h[pt[x]]];
            out[i] = dst.encode(h2);
        }
        return Morphism(Backend::finset, m.dom(), hom(p.dom(), q.cod()), std::move(out));
    }

    Morphism kappa(const Morphism& f) const override
    {
        const FunctionCodec codec(f.dom().carrier(), f.cod().carrier());
        return Morphism(Backend::finset, ObjectExpr::unit(), hom(f.dom(), f.cod()),
                        FunctionTable{codec.encode(f.table())});
    }

    Morphism kappa_inv(const Morphism& state, const ObjectExpr& a, const ObjectExpr& b) const override
    {
        if (!state.dom().is_unit() || !(state.cod() == hom(a, b)))
            throw TypeMismatch("kappa_inv expects a state of " + hom(a, b).render());
        const FunctionCodec codec(a.carrier(), b.carrier());
        return Morphism(Backend::finset, a, b, codec.decode(state.table()[0]));
    }

    Morphism seq(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c) const override
    {
        const FunctionCodec ab(a.carrier(), b.carrier());
        const FunctionCodec bc(b.carrier(), c.carrier());
        const FunctionCodec ac(a.carrier(), c.carrier());
        const std::uint64_t n = checked_mul(ab.count(), bc.count());
        require_table(n, "seq");
        std::vector<FunctionTable> fs(ab.count());
        for (std::uint64_t i = 0; i < ab.count(); ++i)
            fs[i] = ab.decode(i);
        FunctionTable out;
        out.reserve(n);
        FunctionTable gf(a.carrier());
        for (std::uint64_t i = 0; i < ab.count(); ++i)
            for (std::uint64_t j = 0; j < bc.count(); ++j) {
                const FunctionTable g = bc.decode(j);
                for (std::size_t x = 0; x < gf.size(); ++x)
                    gf[x] = g[fs[i][x]];
                out.push_back(ac.encode(gf));
            }
        return Morphism(Backend::finset, hom(a, b) * hom(b, c), hom(a, c), std::move(out));
    }

    Morphism par(const ObjectExpr& a, const ObjectExpr& a2, const ObjectExpr& b,
                 const ObjectExpr& b2) const override
    {
        const FunctionCodec fa(a.carrier(), a2.carrier());
        const FunctionCodec fb(b.carrier(), b2.carrier());
        const FunctionCodec out_codec(checked_mul(a.carrier(), b.carrier()), checked_mul(a2.carrier(), b2.carrier()));
        const std::uint64_t n = checked_mul(fa.count(), fb.count());
        require_table(n, "par");
        const std::uint64_t nb = b.carrier();
        const std::uint64_t nb2 = b2.carrier();
        std::vector<FunctionTable> gs(fb.count());
        for (std::uint64_t j = 0; j < fb.count(); ++j)
            gs[j] = fb.decode(j);
        FunctionTable out;
        out.reserve(n);
        FunctionTable fg(a.carrier() * nb);
        for (std::uint64_t i = 0; i < fa.count(); ++i) {
            const FunctionTable f = fa.decode(i);
            for (std::uint64_t j = 0; j < fb.count(); ++j) {
                for (std::size_t x1 = 0; x1 < f.size(); ++x1)
                    for (std::size_t x2 = 0; x2 < nb; ++x2)
                        fg[x1 * nb + x2] = f[x1] * nb2 + gs[j][x2];
                out.push_back(out_codec.encode(fg));
            }
        }
        return Morphism(Backend::finset, hom(a, a2) * hom(b, b2), hom(a * b, a2 * b2), std::move(out));
    }

    Morphism seq_after(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c, const Morphism& m) const override
    {
        const ObjectExpr src = hom(a, b) * hom(b, c);
        if (!(m.cod() == src))
            throw TypeMismatch("seq_after: " + m.cod().render() + " is not " + src.render());
        const FunctionCodec ab(a.carrier(), b.carrier());
        const FunctionCodec bc(b.carrier(), c.carrier());
        const FunctionCodec ac(a.carrier(), c.carrier());
        const std::uint64_t nbc = bc.count();
        FunctionTable out(m.table().size());
        FunctionTable gf(a.carrier());
        for (std::size_t x = 0; x < out.size(); ++x) {
            const std::uint64_t v = m.table()[x];
            const FunctionTable f = ab.decode(v / nbc);
            const FunctionTable g = bc.decode(v % nbc);
            for (std::size_t y = 0; y < gf.size(); ++y)
                gf[y] = g[f[y]];
            out[x] = ac.encode(gf);
        }
        return Morphism(Backend::finset, m.dom(), hom(a, c), std::move(out));
    }

    Morphism seq_after_with(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c, const Morphism& m,
                            const Morphism& g) const override
    {
        if (!(m.cod() == hom(a, b)) || !(g.dom() == b) || !(g.cod() == c))
            throw TypeMismatch("seq_after_with: expected D -> " + hom(a, b).render() + " and " + b.render() + " -> " +
                               c.render());
        const FunctionCodec ab(a.carrier(), b.carrier());
        const FunctionCodec ac(a.carrier(), c.carrier());
        FunctionTable out(m.table().size());
        FunctionTable gf(a.carrier());
        for (std::size_t x = 0; x < out.size(); ++x) {
            const FunctionTable f = ab.decode(m.table()[x]);
            for (std::size_t y = 0; y < gf.size(); ++y)
                gf[y] = g.table()[f[y]];
            out[x] = ac.encode(gf);
        }
        return Morphism(Backend::finset, m.dom(), hom(a, c), std::move(out));
    }

    Morphism par_after(const ObjectExpr& a, const ObjectExpr& a2, const ObjectExpr& b, const ObjectExpr& b2,
                       const Morphism& m) const override
    {
        const ObjectExpr src = hom(a, a2) * hom(b, b2);
        if (!(m.cod() == src))
            throw TypeMismatch("par_after: " + m.cod().render() + " is not " + src.render());
        const FunctionCodec fa(a.carrier(), a2.carrier());
        const FunctionCodec fb(b.carrier(), b2.carrier());
        const FunctionCodec out_codec(checked_mul(a.carrier(), b.carrier()), checked_mul(a2.carrier(), b2.carrier()));
        const std::uint64_t nb = b.carrier();
        const std::uint64_t nb2 = b2.carrier();
        FunctionTable out(m.table().size());
        FunctionTable fg(a.carrier() * nb);
        for (std::size_t x = 0; x < out.size(); ++x) {
            const std::uint64_t v = m.table()[x];
            const FunctionTable f = fa.decode(v / fb.count());
            const FunctionTable g = fb.decode(v % fb.count());
            for (std::size_t x1 = 0; x1 < f.size(); ++x1)
                for (std::size_t x2 = 0; x2 < nb; ++x2)
                    fg[x1 * nb + x2] = f[x1] * nb2 + g[x2];
            out[x] = out_codec.encode(fg);
        }
        return Morphism(Backend::finset, m.dom(), hom(a * b, a2 * b2), std::move(out));
    }

private:
    ModelPtr model_;
};

// Self-enrichment of a compact closed backend with [A,B] = A*B.
class CompactSelf final : public EnrichedSmc {
public:
    explicit CompactSelf(ModelPtr model) : model_(std::move(model))
    {
        if (!model_->has_compact_structure())
            throw Unsupported("compact self-enrichment needs a compact model");
    }

    std::string name() const override
    {
        return model_->backend() == Backend::matq ? "matq_choi" : model_->name() + "_self";
    }
    CategoryPtr lower() const override { return model_; }
    CategoryPtr upper() const override { return model_; }

    ObjectExpr hom(const ObjectExpr& a, const ObjectExpr& b) const override { return a * b; }

    Morphism hom_map(const Morphism& p, const Morphism& q) const override { return tensor(transpose(p), q); }

    Morphism kappa(const Morphism& f) const override
    {
        return compose(tensor(model_->identity(f.dom()), f), model_->cup(f.dom()));
    }

    Morphism kappa_inv(const Morphism& state, const ObjectExpr& a, const ObjectExpr& b) const override
    {
        if (!state.dom().is_unit() || !(state.cod() == a * b))
            throw TypeMismatch("kappa_inv expects a state of " + (a * b).render());
        return compose(tensor(model_->cap(a), model_->identity(b)), tensor(model_->identity(a), state));
    }

    Morphism seq(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c) const override
    {
        return tensor(tensor(model_->identity(a), model_->cap(b)), model_->identity(c));
    }

    Morphism par(const ObjectExpr& a, const ObjectExpr& a2, const ObjectExpr& b,
                 const ObjectExpr& b2) const override
    {
        return tensor(tensor(model_->identity(a), model_->braid(a2, b)), model_->identity(b2));
    }

private:
    ModelPtr model_;
};

class CorruptSeq final : public EnrichedSmc {
public:
    CorruptSeq(EnrichedPtr base, Morphism f, Morphism g, Morphism wrong)
        : base_(std::move(base)), f_(std::move(f)), g_(std::move(g)), wrong_(std::move(wrong))
    {
        if (base_->lower()->backend() != Backend::finset)
            throw Unsupported("seq corruption is defined for FINSET enrichments");
        if (!(f_.cod() == g_.dom()) || !(wrong_.dom() == f_.dom()) || !(wrong_.cod() == g_.cod()))
            throw TypeMismatch("corruption witnesses do not compose");
    }

    std::string name() const override { return base_->name() + "_corrupt"; }
    CategoryPtr lower() const override { return base_->lower(); }
    CategoryPtr upper() const override { return base_->upper(); }
    ObjectExpr hom(const ObjectExpr& a, const ObjectExpr& b) const override { return base_->hom(a, b); }
    Morphism hom_map(const Morphism& p, const Morphism& q) const override { return base_->hom_map(p, q); }
    Morphism kappa(const Morphism& f) const override { return base_->kappa(f); }
    Morphism kappa_inv(const Morphism& s, const ObjectExpr& a, const ObjectExpr& b) const override
    {
        return base_->kappa_inv(s, a, b);
    }
    Morphism par(const ObjectExpr& a, const ObjectExpr& a2, const ObjectExpr& b,
                 const ObjectExpr& b2) const override
    {
        return base_->par(a, a2, b, b2);
    }

    Morphism par_after(const ObjectExpr& a, const ObjectExpr& a2, const ObjectExpr& b, const ObjectExpr& b2,
                       const Morphism& m) const override
    {
        return base_->par_after(a, a2, b, b2, m);
    }

    Morphism seq(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c) const override
    {
        Morphism m = base_->seq(a, b, c);
        if (!(a == f_.dom() && b == f_.cod() && c == g_.cod()))
            return m;
        FunctionTable t = m.table();
        const std::uint64_t i = base_->kappa(f_).table()[0];
        const std::uint64_t j = base_->kappa(g_).table()[0];
        t[i * base_->hom(b, c).carrier() + j] = base_->kappa(wrong_).table()[0];
        return Morphism(Backend::finset, m.dom(), m.cod(), std::move(t));
    }

private:
    EnrichedPtr base_;
    Morphism f_;
    Morphism g_;
    Morphism wrong_;
};

} // namespace

EnrichedPtr finset_self(ModelPtr model)
{
    if (model->backend() != Backend::finset)
        throw Unsupported("finset_self needs a FINSET model");
    return std::make_shared<FinsetSelf>(std::move(model));
}

EnrichedPtr compact_self(ModelPtr model) { return std::make_shared<CompactSelf>(std::move(model)); }

StandardEnrichments standard_enrichments(std::uint64_t max_size)
{
    return {finset_self(Model::standard(Backend::finset, max_size)),
            compact_self(Model::standard(Backend::finrel, max_size)),
            compact_self(Model::standard(Backend::matq, max_size))};
}

EnrichedPtr corrupt_seq(EnrichedPtr base, const Morphism& f, const Morphism& g, const Morphism& wrong)
{
    return std::make_shared<CorruptSeq>(std::move(base), f, g, wrong);
}

} // namespace hopt
