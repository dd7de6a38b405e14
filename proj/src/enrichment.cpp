#include "hopt/enrichment.hpp"

#include "hopt/linalg.hpp"

#include "suite.hpp"

#include <map>
#include <set>
#include <unordered_map>

namespace hopt {

Morphism partial_insertion(const EnrichedSmc& e, const ObjectExpr& a, const ObjectExpr& x, const ObjectExpr& y,
                           const ObjectExpr& z)
{
    const auto& v = *e.upper();
    const Morphism lift = e.par_after(y, y, a, x, tensor(e.kappa(e.lower()->identity(y)), v.identity(e.hom(a, x))));
    return e.seq_after(y * a, y * x, z, tensor(lift, v.identity(e.hom(y * x, z))));
}

Morphism usage_theta(const EnrichedSmc& e, const Morphism& s, const ObjectExpr& a, const ObjectExpr& b)
{
    if (!(s.cod() == e.hom(a, b)))
        throw TypeMismatch("usage_theta: S must land in " + e.hom(a, b).render() + ", got " + s.cod().render());
    return e.seq_after(ObjectExpr::unit(), a, b, tensor(e.upper()->identity(e.hom(ObjectExpr::unit(), a)), s));
}

namespace {

using namespace detail;

void begin_report(LawReport& r, const std::string& suite, const EnrichedSmc& e, const LawConfig& c)
{
    detail::begin_report(r, suite, e.name(), c);
}

// A structural morphism when it fits in memory, otherwise nothing; the
// caller then falls back to pointwise evaluation.
template <class F>
std::optional<Morphism> materialize(F&& build)
{
    try {
        return build();
    } catch (const BoundExceeded&) {
        return std::nullopt;
    }
}

template <class F>
Morphism after(const std::optional<Morphism>& full, const Morphism& m, F&& pointwise)
{
    return full ? compose(*full, m) : pointwise(m);
}

template <class F>
std::vector<Morphism> each(const HomSet& hs, F&& fn)
{
    std::vector<Morphism> out;
    out.reserve(hs.items.size());
    for (const auto& m : hs.items)
        out.push_back(fn(m));
    return out;
}

} // namespace

LawReport check_enriched_laws(const EnrichedSmc& e, const LawConfig& config)
{
    LawReport report;
    begin_report(report, "enriched", e, config);
    LawRecorder rec(report, config);
    const Category& c = *e.lower();
    const Category& v = *e.upper();
    const auto objs = suite_objects(c, config);
    const ObjectExpr I = ObjectExpr::unit();
    auto homs = [&](const ObjectExpr& a, const ObjectExpr& b) { return c.homs(a, b, config.homs); };

    // Hom-object functor and kappa.
    for (const auto& a : objs)
        for (const auto& b : objs) {
            const Instance ab{{"A", a.render()}, {"B", b.render()}};
            at(rec, "KAPPA-BIJ", ab, [&] {
                if (!rec.selected("KAPPA-BIJ", ab))
                    return;
                if (e.sampled()) {
                    const auto dim = a.carrier() * b.carrier();
                    rec.check_bool("KAPPA-BIJ", ab, e.hom(a, b).carrier() == dim, "dim C(A,B) = " + std::to_string(dim),
                                   "dim [A,B] = " + std::to_string(e.hom(a, b).carrier()));
                    return;
                }
                const auto hs = homs(a, b);
                const auto states = v.homs(I, e.hom(a, b), config.homs);
                std::set<std::string> images;
                for (const auto& f : hs.items)
                    images.insert(e.kappa(f).canonical());
                const bool ok = hs.items.size() == states.items.size() && images.size() == hs.items.size();
                rec.check_bool("KAPPA-BIJ", ab, ok, "|C(A,B)| = " + std::to_string(hs.items.size()),
                               "|V(I,[A,B])| = " + std::to_string(states.items.size()) +
                                   ", distinct kappa images = " + std::to_string(images.size()));
            });
            at(rec, "KAPPA-INV", ab, [&] {
                const auto hs = homs(a, b);
                for (std::size_t i = 0; i < hs.items.size(); ++i) {
                    const auto inst = with(ab, "f", i);
                    if (rec.selected("KAPPA-INV", inst))
                        rec.check("KAPPA-INV", inst, e.kappa_inv(e.kappa(hs.items[i]), a, b), hs.items[i]);
                }
                if (e.sampled())
                    return;
                const auto states = v.homs(I, e.hom(a, b), config.homs);
                for (std::size_t i = 0; i < states.items.size(); ++i) {
                    const auto inst = with(ab, "s", i);
                    if (rec.selected("KAPPA-INV", inst))
                        rec.check("KAPPA-INV", inst, e.kappa(e.kappa_inv(states.items[i], a, b)), states.items[i]);
                }
            });
            at(rec, "HOM-ID", ab, [&] {
                if (rec.selected("HOM-ID", ab))
                    rec.check("HOM-ID", ab, e.hom_map(c.identity(a), c.identity(b)), v.identity(e.hom(a, b)));
            });
        }

    for (const auto& a2 : objs)
        for (const auto& a : objs)
            for (const auto& b : objs) {
                const Instance base{{"A2", a2.render()}, {"A", a.render()}, {"B", b.render()}};
                at(rec, "KAPPA-NAT-L", base, [&] {
                    const auto ps = homs(a2, a);
                    const auto fs = homs(a, b);
                    const auto idb = c.identity(b);
                    const auto pre = each(ps, [&](const Morphism& p) { return e.hom_map(p, idb); });
                    const auto kf = each(fs, [&](const Morphism& f) { return e.kappa(f); });
                    for (auto [i, j] : index_pairs(ps, fs)) {
                        const auto inst = with2(base, "p", i, "f", j);
                        if (!rec.selected("KAPPA-NAT-L", inst))
                            continue;
                        const auto& p = ps.items[i];
                        const auto& f = fs.items[j];
                        rec.check("KAPPA-NAT-L", inst, e.kappa(compose(f, p)), compose(pre[i], kf[j]));
                    }
                });
                // Here the roles are A -> B -> B2 with B2 bound to "A2".
                at(rec, "KAPPA-NAT-R", base, [&] {
                    const auto fs = homs(a, b);
                    const auto qs = homs(b, a2);
                    const auto ida = c.identity(a);
                    const auto post = each(qs, [&](const Morphism& q) { return e.hom_map(ida, q); });
                    const auto kf = each(fs, [&](const Morphism& f) { return e.kappa(f); });
                    for (auto [i, j] : index_pairs(fs, qs)) {
                        const auto inst = with2(base, "f", i, "q", j);
                        if (!rec.selected("KAPPA-NAT-R", inst))
                            continue;
                        const auto& f = fs.items[i];
                        const auto& q = qs.items[j];
                        rec.check("KAPPA-NAT-R", inst, e.kappa(compose(q, f)), compose(post[j], kf[i]));
                    }
                });
            }

    for (const auto& a2 : objs)
        for (const auto& a : objs)
            for (const auto& b : objs)
                for (const auto& b2 : objs) {
                    const Instance base{{"A2", a2.render()}, {"A", a.render()}, {"B", b.render()}, {"B2", b2.render()}};
                    at(rec, "HOM-BIFUNCT", base, [&] {
                        const auto ps = homs(a2, a);
                        const auto qs = homs(b, b2);
                        const auto ida = c.identity(a);
                        const auto ida2 = c.identity(a2);
                        const auto idb = c.identity(b);
                        const auto idb2 = c.identity(b2);
                        const auto p_b = each(ps, [&](const Morphism& p) { return e.hom_map(p, idb); });
                        const auto p_b2 = each(ps, [&](const Morphism& p) { return e.hom_map(p, idb2); });
                        const auto a_q = each(qs, [&](const Morphism& q) { return e.hom_map(ida, q); });
                        const auto a2_q = each(qs, [&](const Morphism& q) { return e.hom_map(ida2, q); });
                        for (auto [i, j] : index_pairs(ps, qs)) {
                            const auto inst = with2(base, "p", i, "q", j);
                            if (!rec.selected("HOM-BIFUNCT", inst))
                                continue;
                            const auto& p = ps.items[i];
                            const auto& q = qs.items[j];
                            const auto both = e.hom_map(p, q);
                            rec.check("HOM-BIFUNCT", inst, both, compose(p_b2[i], a_q[j]));
                            rec.check("HOM-BIFUNCT", inst, both, compose(a2_q[j], p_b[i]));
                        }
                    });
                    // Contravariant composition: p : A2 -> A, p2 : B2 -> A2, hom objects over B.
                    at(rec, "HOM-COMP-L", base, [&] {
                        const auto ps = homs(a2, a);
                        const auto p2s = homs(b2, a2);
                        const auto idb = c.identity(b);
                        const auto lp = each(ps, [&](const Morphism& p) { return e.hom_map(p, idb); });
                        const auto lp2 = each(p2s, [&](const Morphism& p) { return e.hom_map(p, idb); });
                        for (auto [i, j] : index_pairs(ps, p2s)) {
                            const auto inst = with2(base, "p", i, "p2", j);
                            if (!rec.selected("HOM-COMP-L", inst))
                                continue;
                            const auto& p = ps.items[i];
                            const auto& p2 = p2s.items[j];
                            rec.check("HOM-COMP-L", inst, e.hom_map(compose(p, p2), idb), compose(lp2[j], lp[i]));
                        }
                    });
                    // Covariant composition: q : A -> B, q2 : B -> B2, hom objects out of A2.
                    at(rec, "HOM-COMP-R", base, [&] {
                        const auto qs = homs(a, b);
                        const auto q2s = homs(b, b2);
                        const auto ida = c.identity(a2);
                        const auto rq = each(qs, [&](const Morphism& q) { return e.hom_map(ida, q); });
                        const auto rq2 = each(q2s, [&](const Morphism& q) { return e.hom_map(ida, q); });
                        for (auto [i, j] : index_pairs(qs, q2s)) {
                            const auto inst = with2(base, "q", i, "q2", j);
                            if (!rec.selected("HOM-COMP-R", inst))
                                continue;
                            const auto& q = qs.items[i];
                            const auto& q2 = q2s.items[j];
                            rec.check("HOM-COMP-R", inst, e.hom_map(ida, compose(q2, q)), compose(rq2[j], rq[i]));
                        }
                    });
                }

    // L2, L3: unitality and implementation of seq.
    for (const auto& a : objs)
        for (const auto& b : objs) {
            const Instance ab{{"A", a.render()}, {"B", b.render()}};
            at(rec, "L2", ab, [&] {
                const auto hab = e.hom(a, b);
                Instance left = ab;
                left.emplace_back("side", "left");
                Instance right = ab;
                right.emplace_back("side", "right");
                if (rec.selected("L2", left))
                    rec.check("L2", left, e.seq_after(a, a, b, tensor(e.kappa(c.identity(a)), v.identity(hab))),
                              v.identity(hab));
                if (rec.selected("L2", right))
                    rec.check("L2", right, e.seq_after(a, b, b, tensor(v.identity(hab), e.kappa(c.identity(b)))),
                              v.identity(hab));
            });
            for (const auto& cc : objs) {
                const Instance abc{{"A", a.render()}, {"B", b.render()}, {"C", cc.render()}};
                at(rec, "L3", abc, [&] {
                    const auto fs = homs(a, b);
                    const auto gs = homs(b, cc);
                    const auto s = materialize([&] { return e.seq(a, b, cc); });
                    for (auto [i, j] : index_pairs(fs, gs)) {
                        const auto inst = with2(abc, "f", i, "g", j);
                        if (!rec.selected("L3", inst))
                            continue;
                        const auto& f = fs.items[i];
                        const auto& g = gs.items[j];
                        rec.check("L3", inst, after(s, tensor(e.kappa(f), e.kappa(g)), [&](const Morphism& m) { return e.seq_after(a, b, cc, m); }), e.kappa(compose(g, f)));
                    }
                });
            }
        }

    // L1: associativity of seq.
    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& cc : objs)
                for (const auto& d : objs) {
                    const Instance inst{{"A", a.render()}, {"B", b.render()}, {"C", cc.render()}, {"D", d.render()}};
                    at(rec, "L1", inst, [&] {
                        if (!rec.selected("L1", inst))
                            return;
                        const auto hab = v.identity(e.hom(a, b));
                        const auto hbc = v.identity(e.hom(b, cc));
                        const auto hcd = v.identity(e.hom(cc, d));
                        const auto lhs = e.seq_after(a, cc, d, tensor(e.seq_after(a, b, cc, tensor(hab, hbc)), hcd));
                        const auto rhs = e.seq_after(a, b, d, tensor(hab, e.seq_after(b, cc, d, tensor(hbc, hcd))));
                        rec.check("L1", inst, lhs, rhs);
                    });
                }

    // L5 and L6.
    for (const auto& a : objs)
        for (const auto& a2 : objs) {
            const Instance aa{{"A", a.render()}, {"A2", a2.render()}};
            at(rec, "L5", aa, [&] {
                Instance right = aa;
                right.emplace_back("side", "right");
                Instance left = aa;
                left.emplace_back("side", "left");
                if (rec.selected("L5", right))
                    rec.check("L5", right, e.par(a, a2, I, I), v.identity(e.hom(a, a2)));
                if (rec.selected("L5", left))
                    rec.check("L5", left, e.par(I, I, a, a2), v.identity(e.hom(a, a2)));
            });
            for (const auto& b : objs)
                for (const auto& b2 : objs) {
                    const Instance base{{"A", a.render()}, {"A2", a2.render()}, {"B", b.render()}, {"B2", b2.render()}};
                    at(rec, "L6", base, [&] {
                        const auto fs = homs(a, a2);
                        const auto gs = homs(b, b2);
                        const auto p = materialize([&] { return e.par(a, a2, b, b2); });
                        for (auto [i, j] : index_pairs(fs, gs)) {
                            const auto inst = with2(base, "f", i, "g", j);
                            if (!rec.selected("L6", inst))
                                continue;
                            const auto& f = fs.items[i];
                            const auto& g = gs.items[j];
                            rec.check("L6", inst, after(p, tensor(e.kappa(f), e.kappa(g)), [&](const Morphism& m) { return e.par_after(a, a2, b, b2, m); }), e.kappa(tensor(f, g)));
                        }
                    });
                }
        }

    // L4 (par associativity) and L7 (interchange) range over six objects.
    for (const auto& a : objs)
        for (const auto& a2 : objs)
            for (const auto& b : objs)
                for (const auto& b2 : objs)
                    for (const auto& x : objs)
                        for (const auto& x2 : objs) {
                            const Instance l4{{"A", a.render()},   {"A2", a2.render()}, {"B", b.render()},
                                              {"B2", b2.render()}, {"C", x.render()},   {"C2", x2.render()}};
                            at(rec, "L4", l4, [&] {
                                if (!rec.selected("L4", l4))
                                    return;
                                const auto h1 = v.identity(e.hom(a, a2));
                                const auto h2 = v.identity(e.hom(b, b2));
                                const auto h3 = v.identity(e.hom(x, x2));
                                const auto lhs = e.par_after(a * b, a2 * b2, x, x2,
                                                             tensor(e.par_after(a, a2, b, b2, tensor(h1, h2)), h3));
                                const auto rhs = e.par_after(a, a2, b * x, b2 * x2,
                                                             tensor(h1, e.par_after(b, b2, x, x2, tensor(h2, h3))));
                                rec.check("L4", l4, lhs, rhs);
                            });
                            // Interchange: A -> A2 -> A3 beside B -> B2 -> B3 (A3 = C, B3 = C2).
                            const Instance l7{{"A", a.render()},   {"A2", a2.render()}, {"A3", x.render()},
                                              {"B", b.render()},   {"B2", b2.render()}, {"B3", x2.render()}};
                            at(rec, "L7", l7, [&] {
                                if (!rec.selected("L7", l7))
                                    return;
                                const auto& a3 = x;
                                const auto& b3 = x2;
                                const auto h1 = v.identity(e.hom(a, a2));
                                const auto h2 = v.identity(e.hom(b, b2));
                                const auto h3 = v.identity(e.hom(a2, a3));
                                const auto h4 = v.identity(e.hom(b2, b3));
                                const auto lhs = e.seq_after(a * b, a2 * b2, a3 * b3,
                                                             tensor(e.par_after(a, a2, b, b2, tensor(h1, h2)),
                                                                    e.par_after(a2, a3, b2, b3, tensor(h3, h4))));
                                const auto swap = tensor(tensor(v.identity(e.hom(a, a2)),
                                                                v.braid(e.hom(b, b2), e.hom(a2, a3))),
                                                         v.identity(e.hom(b2, b3)));
                                const auto rhs = e.par_after(
                                    a, a3, b, b3,
                                    compose(tensor(e.seq_after(a, a2, a3, tensor(h1, h3)), e.seq_after(b, b2, b3, tensor(h2, h4))),
                                            swap));
                                rec.check("L7", l7, lhs, rhs);
                            });
                        }
    return report;
}

LawReport check_partial_insertion(const EnrichedSmc& e, const LawConfig& config)
{
    LawReport report;
    begin_report(report, "partial_insertion", e, config);
    LawRecorder rec(report, config);
    const Category& c = *e.lower();
    const Category& v = *e.upper();
    const auto objs = suite_objects(c, config);
    const ObjectExpr I = ObjectExpr::unit();

    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& z : objs) {
                const Instance base{{"X", x.render()}, {"Y", y.render()}, {"Z", z.render()}};
                at(rec, "DELTA-SPEC", base, [&] {
                    const auto delta = partial_insertion(e, I, x, y, z);
                    const auto sigmas = c.homs(I, x, config.homs);
                    const auto idz = c.identity(z);
                    const auto rest = v.identity(e.hom(y * x, z));
                    for (std::size_t i = 0; i < sigmas.items.size(); ++i) {
                        const auto inst = with(base, "sigma", i);
                        if (!rec.selected("DELTA-SPEC", inst))
                            continue;
                        const auto& sigma = sigmas.items[i];
                        rec.check("DELTA-SPEC", inst, compose(delta, tensor(e.kappa(sigma), rest)),
                                  e.hom_map(tensor(c.identity(y), sigma), idz));
                    }
                });
                at(rec, "DELTA-UNIT", base, [&] {
                    if (!rec.selected("DELTA-UNIT", base))
                        return;
                    const auto delta = partial_insertion(e, x, x, y, z);
                    const auto rest = v.identity(e.hom(y * x, z));
                    rec.check("DELTA-UNIT", base, compose(delta, tensor(e.kappa(c.identity(x)), rest)), rest);
                });
                for (const auto& a : objs) {
                    const Instance ainst{{"A", a.render()}, {"X", x.render()}, {"Y", y.render()}, {"Z", z.render()}};
                    at(rec, "DELTA-IMPL", ainst, [&] {
                        const auto delta = partial_insertion(e, a, x, y, z);
                        const auto fs = c.homs(a, x, config.homs);
                        const auto gs = c.homs(y * x, z, config.homs);
                        const auto idy = c.identity(y);
                        for (auto [i, j] : index_pairs(fs, gs)) {
                            const auto inst = with2(ainst, "f", i, "g", j);
                            if (!rec.selected("DELTA-IMPL", inst))
                                continue;
                            const auto& f = fs.items[i];
                            const auto& g = gs.items[j];
                            rec.check("DELTA-IMPL", inst, compose(delta, tensor(e.kappa(f), e.kappa(g))),
                                      e.kappa(compose(g, tensor(idy, f))));
                        }
                    });
                }
            }
    return report;
}

LawReport check_faithful(const EnrichedSmc& e, const LawConfig& config)
{
    LawReport report;
    begin_report(report, "faithful", e, config);
    LawRecorder rec(report, config);
    const Category& c = *e.lower();
    const Category& v = *e.upper();
    const auto objs = suite_objects(c, config);
    const ObjectExpr I = ObjectExpr::unit();

    for (const auto& a : objs)
        for (const auto& b : objs) {
            // The usage transformation is only meaningful once kappa is a
            // bijection, so a cardinality mismatch is reported first.
            bool bijective = true;
            const Instance ab{{"A", a.render()}, {"B", b.render()}};
            if (!e.sampled()) {
                try {
                    const auto n = c.homs(a, b, config.homs).items.size();
                    const auto m = v.homs(I, e.hom(a, b), config.homs).items.size();
                    bijective = n == m;
                    if (config.wants("KAPPA-BIJ") && rec.may_match(ab))
                        rec.check_bool("KAPPA-BIJ", ab, bijective, "|C(A,B)| = " + std::to_string(n),
                                       "|V(I,[A,B])| = " + std::to_string(m));
                } catch (const BoundExceeded&) {
                    rec.skip("KAPPA-BIJ", ab);
                    continue;
                }
            }
            if (!bijective)
                continue;
            for (const auto& x : objs) {
                const Instance base{{"X", x.render()}, {"A", a.render()}, {"B", b.render()}};
                if (e.sampled()) {
                    at(rec, "FAITH-RANK", base, [&] {
                        if (!rec.selected("FAITH-RANK", base))
                            return;
                        const auto hab = e.hom(a, b);
                        const auto nx = x.carrier();
                        const auto nh = hab.carrier();
                        linalg::Matrix images;
                        for (std::uint64_t r = 0; r < nh; ++r)
                            for (std::uint64_t col = 0; col < nx; ++col) {
                                const Morphism unit_s(Backend::matq, x, hab, QMatrix{{{r, col, Rational(1)}}});
                                const auto d = dense(usage_theta(e, unit_s, a, b));
                                linalg::Vector flat;
                                for (const auto& row : d)
                                    flat.insert(flat.end(), row.begin(), row.end());
                                images.push_back(std::move(flat));
                            }
                        const auto rk = linalg::rank(images);
                        rec.check_bool("FAITH-RANK", base, rk == images.size(),
                                       "rank = " + std::to_string(rk), "dim V(X,[A,B]) = " + std::to_string(images.size()));
                    });
                    continue;
                }
                at(rec, "FAITH", base, [&] {
                    const auto ss = v.homs(x, e.hom(a, b), config.homs);
                    std::map<std::string, std::size_t> seen;
                    for (std::size_t i = 0; i < ss.items.size(); ++i) {
                        const auto theta = usage_theta(e, ss.items[i], a, b);
                        auto [it, fresh] = seen.emplace(theta.canonical(), i);
                        const auto inst = fresh ? with(base, "S", i) : with2(base, "S", it->second, "T", i);
                        if (rec.selected("FAITH", inst))
                            rec.check_bool("FAITH", inst, fresh, "theta(S) = " + it->first.substr(0, 256),
                                           "theta(T) equal for S != T");
                    }
                });
            }
        }
    return report;
}

} // namespace hopt
