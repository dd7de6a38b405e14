#include "hopt/causlite.hpp"

#include "suite.hpp"

#include <random>

namespace hopt {

using namespace detail;

namespace {

using linalg::Matrix;
using linalg::Vector;

Vector zeros(std::uint64_t n) { return Vector(n, Rational(0)); }

Rational dot(const Vector& x, const Vector& y)
{
    Rational s(0);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero() && !y[i].is_zero())
            s += x[i] * y[i];
    return s;
}

// Deterministic n -> m functions in lexicographic order, input 0 most significant.
std::vector<std::vector<std::uint64_t>> functions(std::uint64_t n, std::uint64_t m)
{
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<std::uint64_t> f(n, 0);
    while (true) {
        out.push_back(f);
        std::size_t k = n;
        while (k > 0 && ++f[k - 1] == m)
            f[--k] = 0;
        if (k == 0)
            return out;
    }
}

Vector choi_of(const std::vector<std::uint64_t>& f, std::uint64_t m)
{
    Vector v = zeros(f.size() * m);
    for (std::size_t j = 0; j < f.size(); ++j)
        v[j * m + f[j]] = Rational(1);
    return v;
}

Matrix as_matrix(const std::vector<std::uint64_t>& f, std::uint64_t m)
{
    Matrix p(m, zeros(f.size()));
    for (std::size_t j = 0; j < f.size(); ++j)
        p[f[j]][j] = Rational(1);
    return p;
}

ObjectExpr dim(const std::string& name, std::uint64_t n) { return ObjectExpr::atom(name, n); }

} // namespace

CausType::CausType(std::string name, std::uint64_t dim, Matrix constraints, Vector rhs, std::vector<Vector> generators,
                   bool nonneg)
    : name_(std::move(name)), dim_(dim), generators_(std::move(generators)), nonneg_(nonneg)
{
    if (constraints.size() != rhs.size())
        throw ShapeMismatch(name_ + ": " + std::to_string(constraints.size()) + " constraint rows but " +
                            std::to_string(rhs.size()) + " right-hand sides");
    Matrix augmented;
    for (std::size_t r = 0; r < constraints.size(); ++r) {
        if (constraints[r].size() != dim_)
            throw ShapeMismatch(name_ + ": constraint row of length " + std::to_string(constraints[r].size()) +
                                " on dimension " + std::to_string(dim_));
        auto row = constraints[r];
        row.push_back(rhs[r]);
        augmented.push_back(std::move(row));
    }
    for (auto& row : linalg::rref(std::move(augmented)).rows) {
        rhs_.push_back(row.back());
        row.pop_back();
        constraints_.push_back(std::move(row));
    }
    for (std::size_t g = 0; g < generators_.size(); ++g)
        if (!contains(generators_[g]))
            throw LawViolation(name_ + ": generator " + std::to_string(g) + " is not a member");
}

bool CausType::contains(const Vector& v) const
{
    if (v.size() != dim_)
        throw ShapeMismatch(name_ + ": state of length " + std::to_string(v.size()) + " on dimension " +
                            std::to_string(dim_));
    if (nonneg_)
        for (const auto& x : v)
            if (x.is_negative())
                return false;
    for (std::size_t r = 0; r < constraints_.size(); ++r)
        if (dot(constraints_[r], v) != rhs_[r])
            return false;
    return true;
}

CausType first_order_type(std::uint64_t n)
{
    if (n == 0)
        throw ShapeMismatch("first-order types need n >= 1");
    std::vector<Vector> gens;
    for (std::uint64_t i = 0; i < n; ++i) {
        gens.push_back(zeros(n));
        gens.back()[i] = Rational(1);
    }
    return CausType("P(" + std::to_string(n) + ")", n, {Vector(n, Rational(1))}, {Rational(1)}, std::move(gens));
}

CausType hom_type(std::uint64_t n, std::uint64_t m)
{
    if (n == 0 || m == 0)
        throw ShapeMismatch("hom types need dimensions >= 1");
    Matrix rows;
    for (std::uint64_t j = 0; j < n; ++j) {
        rows.push_back(zeros(n * m));
        for (std::uint64_t i = 0; i < m; ++i)
            rows.back()[j * m + i] = Rational(1);
    }
    std::vector<Vector> gens;
    for (const auto& f : functions(n, m))
        gens.push_back(choi_of(f, m));
    CausType t("[" + std::to_string(n) + "," + std::to_string(m) + "]", n * m, std::move(rows), Vector(n, Rational(1)),
               std::move(gens));
    t.hom_ = std::pair{n, m};
    return t;
}

Vector choi(const Matrix& p)
{
    const std::size_t m = p.size();
    const std::size_t n = m == 0 ? 0 : p[0].size();
    Vector v = zeros(n * m);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i)
            v[j * m + i] = p[i][j];
    return v;
}

Vector kron(const Vector& x, const Vector& y)
{
    Vector out;
    out.reserve(x.size() * y.size());
    for (const auto& a : x)
        for (const auto& b : y)
            out.push_back(a * b);
    return out;
}

CausType ns_tensor(const CausType& h1, const CausType& h2)
{
    if (!h1.hom_shape() || !h2.hom_shape())
        throw ShapeMismatch("ns_tensor needs two hom types, got " + h1.name() + " and " + h2.name());
    const auto [n1, m1] = *h1.hom_shape();
    const auto [n2, m2] = *h2.hom_shape();
    const std::uint64_t d = n1 * m1 * n2 * m2;
    auto at = [&](std::uint64_t a, std::uint64_t a2, std::uint64_t b, std::uint64_t b2) {
        return ((a * m1 + a2) * n2 + b) * m2 + b2;
    };
    Matrix rows;
    Vector rhs;
    // normalisation of every input pair
    for (std::uint64_t a = 0; a < n1; ++a)
        for (std::uint64_t b = 0; b < n2; ++b) {
            Vector r = zeros(d);
            for (std::uint64_t a2 = 0; a2 < m1; ++a2)
                for (std::uint64_t b2 = 0; b2 < m2; ++b2)
                    r[at(a, a2, b, b2)] = Rational(1);
            rows.push_back(std::move(r));
            rhs.emplace_back(1);
        }
    // P(a'|a,b) does not depend on b
    for (std::uint64_t a = 0; a < n1; ++a)
        for (std::uint64_t a2 = 0; a2 < m1; ++a2)
            for (std::uint64_t b = 1; b < n2; ++b) {
                Vector r = zeros(d);
                for (std::uint64_t b2 = 0; b2 < m2; ++b2) {
                    r[at(a, a2, b, b2)] += Rational(1);
                    r[at(a, a2, 0, b2)] -= Rational(1);
                }
                rows.push_back(std::move(r));
                rhs.emplace_back(0);
            }
    // P(b'|a,b) does not depend on a
    for (std::uint64_t b = 0; b < n2; ++b)
        for (std::uint64_t b2 = 0; b2 < m2; ++b2)
            for (std::uint64_t a = 1; a < n1; ++a) {
                Vector r = zeros(d);
                for (std::uint64_t a2 = 0; a2 < m1; ++a2) {
                    r[at(a, a2, b, b2)] += Rational(1);
                    r[at(0, a2, b, b2)] -= Rational(1);
                }
                rows.push_back(std::move(r));
                rhs.emplace_back(0);
            }
    std::vector<Vector> gens;
    for (const auto& x : h1.generators())
        for (const auto& y : h2.generators())
            gens.push_back(kron(x, y));
    CausType t("NS(" + h1.name() + "," + h2.name() + ")", d, std::move(rows), std::move(rhs), std::move(gens));
    t.hom_ = std::pair{n1 * n2, m1 * m2};
    return t;
}

Morphism seq_supermap(std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    const auto A = dim("A", a);
    const auto B = dim("B", b);
    const auto C = dim("C", c);
    return tensor(tensor(identity(Backend::matq, A), compact_cap(Backend::matq, B)), identity(Backend::matq, C));
}

std::string to_string(SupermapVerdict::Result r)
{
    switch (r) {
    case SupermapVerdict::Result::pass:
        return "PASS";
    case SupermapVerdict::Result::partial:
        return "PARTIAL";
    case SupermapVerdict::Result::fail:
        return "FAIL";
    }
    return "FAIL";
}

SupermapVerdict check_supermap_preserves(const Matrix& s, const CausType& src, const CausType& tgt)
{
    if (s.size() != tgt.dim() || (!s.empty() && s[0].size() != src.dim()))
        throw ShapeMismatch("supermap of shape " + std::to_string(s.size()) + "x" +
                            std::to_string(s.empty() ? 0 : s[0].size()) + " between " + src.name() + " (" +
                            std::to_string(src.dim()) + ") and " + tgt.name() + " (" + std::to_string(tgt.dim()) + ")");
    SupermapVerdict v;
    bool nonneg = true;
    for (const auto& row : s)
        for (const auto& x : row)
            nonneg = nonneg && !x.is_negative();
    const bool sign_ok = !tgt.nonneg() || (nonneg && src.nonneg());

    Matrix span;
    for (std::size_t r = 0; r < src.constraints().size(); ++r) {
        auto row = src.constraints()[r];
        row.push_back(src.rhs()[r]);
        span.push_back(std::move(row));
    }
    const std::size_t base = linalg::rank(span);
    std::optional<std::size_t> outside;
    for (std::size_t r = 0; r < tgt.constraints().size() && !outside; ++r) {
        // (t S) v = t_rhs must be a combination of the source equations
        Vector pulled = zeros(src.dim());
        for (std::size_t i = 0; i < tgt.dim(); ++i)
            if (!tgt.constraints()[r][i].is_zero())
                for (std::size_t j = 0; j < src.dim(); ++j)
                    if (!s[i][j].is_zero())
                        pulled[j] += tgt.constraints()[r][i] * s[i][j];
        pulled.push_back(tgt.rhs()[r]);
        auto extended = span;
        extended.push_back(std::move(pulled));
        if (linalg::rank(extended) != base)
            outside = r;
    }
    if (sign_ok && !outside) {
        v.result = SupermapVerdict::Result::pass;
        v.reason = "nonnegative and all " + std::to_string(tgt.constraints().size()) +
                   " target constraints implied by the source system";
        return v;
    }
    const std::string why = !sign_ok ? "sign condition fails"
                                     : "target constraint " + std::to_string(*outside) + " is not implied";
    for (std::size_t g = 0; g < src.generators().size(); ++g)
        if (!tgt.contains(linalg::multiply(s, src.generators()[g]))) {
            v.result = SupermapVerdict::Result::fail;
            v.witness = g;
            v.reason = why + "; generator " + std::to_string(g) + " leaves " + tgt.name();
            return v;
        }
    v.result = SupermapVerdict::Result::partial;
    v.reason = why + "; all " + std::to_string(src.generators().size()) + " generators land in " + tgt.name();
    return v;
}

SupermapVerdict check_supermap_preserves(const Morphism& s, const CausType& src, const CausType& tgt)
{
    if (s.backend() != Backend::matq)
        throw ShapeMismatch("supermaps are MATQ morphisms, got " + s.describe());
    return check_supermap_preserves(dense(s), src, tgt);
}

namespace {

Matrix random_stochastic(std::mt19937_64& rng, std::uint64_t n, std::uint64_t m)
{
    std::uniform_int_distribution<int> weight(0, 4);
    Matrix p(m, zeros(n));
    for (std::uint64_t j = 0; j < n; ++j) {
        std::vector<int> w(m);
        int total = 0;
        for (auto& x : w)
            total += (x = weight(rng));
        if (total == 0) {
            w[j % m] = 1;
            total = 1;
        }
        for (std::uint64_t i = 0; i < m; ++i)
            p[i][j] = Rational(w[i], total);
    }
    return p;
}

Instance dims(std::initializer_list<std::pair<const char*, std::uint64_t>> ds)
{
    Instance out;
    for (const auto& [k, v] : ds)
        out.emplace_back(k, std::to_string(v));
    return out;
}

} // namespace

LawReport check_causlite(const LawConfig& config)
{
    LawReport report;
    begin_report(report, "causlite", "classical", config);
    report.bounds.emplace_back("seed", std::to_string(config.homs.seed));
    LawRecorder rec(report, config);
    const std::uint64_t top = config.max_size;
    std::mt19937_64 rng(config.homs.seed);

    for (std::uint64_t a = 1; a <= top; ++a)
        for (std::uint64_t b = 1; b <= top; ++b)
            for (std::uint64_t c = 1; c <= top; ++c) {
                const auto base = dims({{"A", a}, {"B", b}, {"C", c}});
                const auto s = dense(seq_supermap(a, b, c));
                at(rec, "SEQ-CHOI", base, [&] {
                    const auto fs = functions(a, b);
                    const auto gs = functions(b, c);
                    for (std::size_t i = 0; i < fs.size(); ++i)
                        for (std::size_t j = 0; j < gs.size(); ++j) {
                            const auto inst = with2(base, "f", i, "g", j);
                            if (!rec.selected("SEQ-CHOI", inst))
                                continue;
                            const auto got = linalg::multiply(s, kron(choi_of(fs[i], b), choi_of(gs[j], c)));
                            const auto want = choi(linalg::multiply(as_matrix(gs[j], c), as_matrix(fs[i], b)));
                            rec.check_bool("SEQ-CHOI", inst, got == want, "S(f*g)", "Choi(g f)");
                        }
                    for (std::size_t k = 0; k < config.homs.samples; ++k) {
                        const auto f = random_stochastic(rng, a, b);
                        const auto g = random_stochastic(rng, b, c);
                        const auto inst = with(base, "sample", k);
                        if (!rec.selected("SEQ-CHOI", inst))
                            continue;
                        const auto got = linalg::multiply(s, kron(choi(f), choi(g)));
                        rec.check_bool("SEQ-CHOI", inst, got == choi(linalg::multiply(g, f)), "S(f*g)", "Choi(g f)");
                    }
                });
                at(rec, "SEQ-PRESERVES", base, [&] {
                    if (!rec.selected("SEQ-PRESERVES", base))
                        return;
                    const auto v = check_supermap_preserves(s, ns_tensor(hom_type(a, b), hom_type(b, c)), hom_type(a, c));
                    rec.check_bool("SEQ-PRESERVES", base, v.result == SupermapVerdict::Result::pass,
                                   to_string(v.result) + ": " + v.reason, "PASS");
                });
            }

    for (std::uint64_t n1 = 1; n1 <= top; ++n1)
        for (std::uint64_t m1 = 1; m1 <= top; ++m1)
            for (std::uint64_t n2 = 1; n2 <= top; ++n2)
                for (std::uint64_t m2 = 1; m2 <= top; ++m2) {
                    const auto base = dims({{"A", n1}, {"A'", m1}, {"B", n2}, {"B'", m2}});
                    if (!rec.may_match(base))
                        continue;
                    const auto h1 = hom_type(n1, m1);
                    const auto h2 = hom_type(n2, m2);
                    const auto ns = ns_tensor(h1, h2);
                    at(rec, "NS-PRODUCT", base, [&] {
                        for (std::size_t i = 0; i < h1.generators().size(); ++i)
                            for (std::size_t j = 0; j < h2.generators().size(); ++j) {
                                const auto inst = with2(base, "f", i, "g", j);
                                if (rec.selected("NS-PRODUCT", inst))
                                    rec.check_bool("NS-PRODUCT", inst,
                                                   ns.contains(kron(h1.generators()[i], h2.generators()[j])),
                                                   "rejected", "member");
                            }
                    });
                    // Deterministic bipartite channels: non-signalling exactly
                    // when each output reads only its own input.
                    if (n1 * n2 <= 4 && m1 * m2 <= 4)
                        at(rec, "NS-DETERMINISTIC", base, [&] {
                            const auto hs = functions(n1 * n2, m1 * m2);
                            for (std::size_t k = 0; k < hs.size(); ++k) {
                                const auto inst = with(base, "h", k);
                                if (!rec.selected("NS-DETERMINISTIC", inst))
                                    continue;
                                const auto& h = hs[k];
                                bool local = true;
                                for (std::uint64_t x = 0; x < n1 * n2; ++x)
                                    for (std::uint64_t y = 0; y < n1 * n2; ++y) {
                                        if (x / n2 == y / n2 && h[x] / m2 != h[y] / m2)
                                            local = false;
                                        if (x % n2 == y % n2 && h[x] % m2 != h[y] % m2)
                                            local = false;
                                    }
                                // channel (a,b) -> (a',b') as a Choi vector in NS order
                                Vector v = zeros(ns.dim());
                                for (std::uint64_t x = 0; x < n1 * n2; ++x) {
                                    const auto a0 = x / n2, b0 = x % n2, a2 = h[x] / m2, b2 = h[x] % m2;
                                    v[((a0 * m1 + a2) * n2 + b0) * m2 + b2] = Rational(1);
                                }
                                rec.check_bool("NS-DETERMINISTIC", inst, ns.contains(v) == local,
                                               ns.contains(v) ? "member" : "rejected", local ? "member" : "rejected");
                            }
                        });
                }

    for (std::uint64_t d = 2; d <= top; ++d) {
        const auto inst = dims({{"d", d}});
        const auto ns = ns_tensor(hom_type(d, d), hom_type(d, d));
        auto channel = [&](auto p) {
            Vector v = zeros(ns.dim());
            for (std::uint64_t a = 0; a < d; ++a)
                for (std::uint64_t a2 = 0; a2 < d; ++a2)
                    for (std::uint64_t b = 0; b < d; ++b)
                        for (std::uint64_t b2 = 0; b2 < d; ++b2)
                            v[((a * d + a2) * d + b) * d + b2] = p(a, a2, b, b2);
            return v;
        };
        at(rec, "NS-COPY", inst, [&] {
            if (!rec.selected("NS-COPY", inst))
                return;
            const auto copy = channel([](auto, auto a2, auto b, auto b2) { return Rational(a2 == b && b2 == b ? 1 : 0); });
            rec.check_bool("NS-COPY", inst, !ns.contains(copy), ns.contains(copy) ? "member" : "rejected", "rejected");
        });
        at(rec, "NS-CORRELATED", inst, [&] {
            if (!rec.selected("NS-CORRELATED", inst))
                return;
            const auto shared = channel([](auto, auto a2, auto, auto b2) {
                return a2 == b2 && a2 < 2 ? Rational(1, 2) : Rational(0);
            });
            rec.check_bool("NS-CORRELATED", inst, ns.contains(shared), ns.contains(shared) ? "member" : "rejected",
                           "member");
        });
    }
    return report;
}

} // namespace hopt
