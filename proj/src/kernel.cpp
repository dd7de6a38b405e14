#include "hopt/kernel.hpp"

#include "hopt/linalg.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace hopt {

std::string to_string(Backend b)
{
    switch (b) {
    case Backend::finset:
        return "finset";
    case Backend::finrel:
        return "finrel";
    case Backend::matq:
        return "matq";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// ObjectExpr

ObjectExpr ObjectExpr::atom(std::string name, std::uint64_t size)
{
    if (size == 0)
        throw std::invalid_argument("atom '" + name + "' with empty carrier");
    return ObjectExpr({Atom{std::move(name), size, nullptr}});
}

std::uint64_t ObjectExpr::carrier() const
{
    std::uint64_t n = 1;
    for (const auto& a : atoms_)
        if (__builtin_mul_overflow(n, a.size, &n))
            throw BoundExceeded("carrier of " + render() + " exceeds 64 bits");
    return n;
}

std::string ObjectExpr::render() const
{
    if (atoms_.empty())
        return "I";
    std::string out;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i > 0)
            out += '*';
        out += atoms_[i].name;
    }
    return out;
}

ObjectExpr operator*(const ObjectExpr& a, const ObjectExpr& b)
{
    std::vector<Atom> atoms = a.atoms_;
    atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
    return ObjectExpr(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Morphism

namespace {

std::string type_string(const ObjectExpr& dom, const ObjectExpr& cod)
{
    return dom.render() + " -> " + cod.render();
}

void require_table_size(std::uint64_t n, const ObjectExpr& dom)
{
    if (n > kMaxTable)
        throw BoundExceeded("table over " + dom.render() + " has " + std::to_string(n) + " entries");
}

} // namespace

Morphism::Morphism(Backend backend, ObjectExpr dom, ObjectExpr cod, Payload payload)
    : backend_(backend), dom_(std::move(dom)), cod_(std::move(cod)), payload_(std::move(payload))
{
    const std::uint64_t nd = dom_.carrier();
    const std::uint64_t nc = cod_.carrier();
    switch (backend_) {
    case Backend::finset: {
        auto* t = std::get_if<FunctionTable>(&payload_);
        if (t == nullptr || t->size() != nd)
            throw TypeMismatch("function table does not match domain of " + type_string(dom_, cod_));
        for (auto y : *t)
            if (y >= nc)
                throw TypeMismatch("function value out of codomain " + cod_.render());
        break;
    }
    case Backend::finrel: {
        auto* r = std::get_if<Relation>(&payload_);
        if (r == nullptr)
            throw TypeMismatch("relation payload expected for " + type_string(dom_, cod_));
        std::sort(r->pairs.begin(), r->pairs.end());
        r->pairs.erase(std::unique(r->pairs.begin(), r->pairs.end()), r->pairs.end());
        for (const auto& [x, y] : r->pairs)
            if (x >= nd || y >= nc)
                throw TypeMismatch("relation pair out of range for " + type_string(dom_, cod_));
        break;
    }
    case Backend::matq: {
        auto* m = std::get_if<QMatrix>(&payload_);
        if (m == nullptr)
            throw TypeMismatch("matrix payload expected for " + type_string(dom_, cod_));
        auto& e = m->entries;
        e.erase(std::remove_if(e.begin(), e.end(), [](const MatrixEntry& x) { return x.value.is_zero(); }),
                e.end());
        std::sort(e.begin(), e.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
            return std::pair(a.row, a.col) < std::pair(b.row, b.col);
        });
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i].row >= nc || e[i].col >= nd)
                throw TypeMismatch("matrix entry out of range for " + type_string(dom_, cod_));
            if (i > 0 && e[i].row == e[i - 1].row && e[i].col == e[i - 1].col)
                throw TypeMismatch("duplicate matrix entry");
        }
        break;
    }
    }
}

std::string Morphism::canonical() const
{
    std::ostringstream os;
    switch (backend_) {
    case Backend::finset: {
        os << '[';
        const auto& t = table();
        for (std::size_t i = 0; i < t.size(); ++i)
            os << (i ? "," : "") << t[i];
        os << ']';
        break;
    }
    case Backend::finrel: {
        os << '{';
        bool first = true;
        for (const auto& [x, y] : relation().pairs) {
            os << (first ? "" : ",") << '(' << x << ',' << y << ')';
            first = false;
        }
        os << '}';
        break;
    }
    case Backend::matq: {
        os << '{';
        bool first = true;
        for (const auto& e : matrix().entries) {
            os << (first ? "" : ",") << '(' << e.row << ',' << e.col << "):" << e.value;
            first = false;
        }
        os << '}';
        break;
    }
    }
    return os.str();
}

std::string Morphism::describe() const { return type_string(dom_, cod_) + " : " + canonical(); }

std::size_t Morphism::hash() const
{
    std::size_t h = std::hash<std::string>{}(dom_.render()) * 1000003u ^ std::hash<std::string>{}(cod_.render());
    auto mix = [&h](std::uint64_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    switch (backend_) {
    case Backend::finset:
        for (auto v : table())
            mix(v);
        break;
    case Backend::finrel:
        for (const auto& [x, y] : relation().pairs)
            mix(x * 1315423911u + y);
        break;
    case Backend::matq:
        for (const auto& e : matrix().entries)
            mix(e.row * 2654435761u + e.col + std::hash<Rational>{}(e.value));
        break;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Backend operations

namespace {

std::vector<MatrixEntry> as_entries(const Morphism& m)
{
    std::vector<MatrixEntry> out;
    switch (m.backend()) {
    case Backend::finset: {
        const auto& t = m.table();
        for (std::uint64_t x = 0; x < t.size(); ++x)
            out.push_back({t[x], x, Rational(1)});
        break;
    }
    case Backend::finrel:
        for (const auto& [x, y] : m.relation().pairs)
            out.push_back({y, x, Rational(1)});
        break;
    case Backend::matq:
        out = m.matrix().entries;
        break;
    }
    return out;
}

void require_same_backend(const Morphism& a, const Morphism& b, const char* op)
{
    if (a.backend() != b.backend())
        throw TypeMismatch(std::string(op) + " across models: " + to_string(a.backend()) + " vs " +
                           to_string(b.backend()));
}

} // namespace

Morphism compose(const Morphism& g, const Morphism& f)
{
    require_same_backend(g, f, "compose");
    if (!(f.cod() == g.dom()))
        throw TypeMismatch("cannot compose " + g.dom().render() + " -> " + g.cod().render() + " after " +
                           f.dom().render() + " -> " + f.cod().render());
    switch (f.backend()) {
    case Backend::finset: {
        const auto& ft = f.table();
        const auto& gt = g.table();
        FunctionTable out(ft.size());
        for (std::size_t x = 0; x < ft.size(); ++x)
            out[x] = gt[ft[x]];
        return Morphism(Backend::finset, f.dom(), g.cod(), std::move(out));
    }
    case Backend::finrel: {
        // g's pairs are sorted by domain, so each middle element owns a
        // contiguous run.
        const auto& gp = g.relation().pairs;
        Relation out;
        for (const auto& [d, m] : f.relation().pairs) {
            auto it = std::lower_bound(gp.begin(), gp.end(), std::pair<std::uint64_t, std::uint64_t>{m, 0});
            for (; it != gp.end() && it->first == m; ++it)
                out.pairs.emplace_back(d, it->second);
        }
        return Morphism(Backend::finrel, f.dom(), g.cod(), std::move(out));
    }
    case Backend::matq: {
        std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, Rational>>> by_col;
        for (const auto& e : g.matrix().entries)
            by_col[e.col].emplace_back(e.row, e.value);
        std::map<std::pair<std::uint64_t, std::uint64_t>, Rational> acc;
        for (const auto& e : f.matrix().entries) {
            auto it = by_col.find(e.row);
            if (it == by_col.end())
                continue;
            for (const auto& [r, w] : it->second)
                acc[{r, e.col}] += w * e.value;
        }
        QMatrix out;
        for (const auto& [rc, v] : acc)
            if (!v.is_zero())
                out.entries.push_back({rc.first, rc.second, v});
        return Morphism(Backend::matq, f.dom(), g.cod(), std::move(out));
    }
    }
    throw Unsupported("unknown backend");
}

Morphism tensor(const Morphism& f, const Morphism& g)
{
    require_same_backend(f, g, "tensor");
    const ObjectExpr dom = f.dom() * g.dom();
    const ObjectExpr cod = f.cod() * g.cod();
    const std::uint64_t gd = g.dom().carrier();
    const std::uint64_t gc = g.cod().carrier();
    switch (f.backend()) {
    case Backend::finset: {
        const std::uint64_t n = dom.carrier();
        require_table_size(n, dom);
        cod.carrier(); // overflow check
        const auto& ft = f.table();
        const auto& gt = g.table();
        FunctionTable out;
        out.reserve(n);
        for (auto fy : ft)
            for (auto gy : gt)
                out.push_back(fy * gc + gy);
        return Morphism(Backend::finset, dom, cod, std::move(out));
    }
    case Backend::finrel: {
        Relation out;
        out.pairs.reserve(f.relation().pairs.size() * g.relation().pairs.size());
        for (const auto& [x1, y1] : f.relation().pairs)
            for (const auto& [x2, y2] : g.relation().pairs)
                out.pairs.emplace_back(x1 * gd + x2, y1 * gc + y2);
        return Morphism(Backend::finrel, dom, cod, std::move(out));
    }
    case Backend::matq: {
        QMatrix out;
        out.entries.reserve(f.matrix().entries.size() * g.matrix().entries.size());
        for (const auto& a : f.matrix().entries)
            for (const auto& b : g.matrix().entries)
                out.entries.push_back({a.row * gc + b.row, a.col * gd + b.col, a.value * b.value});
        return Morphism(Backend::matq, dom, cod, std::move(out));
    }
    }
    throw Unsupported("unknown backend");
}

namespace {

// Builds the permutation morphism x -> perm(x) on the given backend.
template <class Perm>
Morphism permutation(Backend backend, const ObjectExpr& dom, const ObjectExpr& cod, std::uint64_t n, Perm perm)
{
    switch (backend) {
    case Backend::finset: {
        require_table_size(n, dom);
        FunctionTable t(n);
        for (std::uint64_t x = 0; x < n; ++x)
            t[x] = perm(x);
        return Morphism(backend, dom, cod, std::move(t));
    }
    case Backend::finrel: {
        Relation r;
        r.pairs.reserve(n);
        for (std::uint64_t x = 0; x < n; ++x)
            r.pairs.emplace_back(x, perm(x));
        return Morphism(backend, dom, cod, std::move(r));
    }
    case Backend::matq: {
        QMatrix m;
        m.entries.reserve(n);
        for (std::uint64_t x = 0; x < n; ++x)
            m.entries.push_back({perm(x), x, Rational(1)});
        return Morphism(backend, dom, cod, std::move(m));
    }
    }
    throw Unsupported("unknown backend");
}

} // namespace

Morphism identity(Backend backend, const ObjectExpr& a)
{
    return permutation(backend, a, a, a.carrier(), [](std::uint64_t x) { return x; });
}

Morphism braid(Backend backend, const ObjectExpr& a, const ObjectExpr& b)
{
    const std::uint64_t na = a.carrier();
    const std::uint64_t nb = b.carrier();
    return permutation(backend, a * b, b * a, (a * b).carrier(),
                       [na, nb](std::uint64_t x) { return (x % nb) * na + x / nb; });
}

Morphism retype(const Morphism& m, const ObjectExpr& dom, const ObjectExpr& cod)
{
    if (dom.carrier() != m.dom().carrier() || cod.carrier() != m.cod().carrier())
        throw TypeMismatch("retype " + m.dom().render() + " -> " + m.cod().render() + " as " + dom.render() +
                           " -> " + cod.render() + " changes carriers");
    return Morphism(m.backend(), dom, cod, m.payload());
}

namespace {

std::optional<FunctionTable> relation_as_bijection(const Morphism& m)
{
    const std::uint64_t n = m.dom().carrier();
    if (n != m.cod().carrier() || m.relation().pairs.size() != n)
        return std::nullopt;
    FunctionTable t(n);
    std::vector<bool> hit(n, false);
    std::uint64_t expected = 0;
    for (const auto& [x, y] : m.relation().pairs) {
        if (x != expected || hit[y])
            return std::nullopt;
        t[x] = y;
        hit[y] = true;
        ++expected;
    }
    return t;
}

std::optional<FunctionTable> table_inverse(const FunctionTable& t, std::uint64_t cod_size)
{
    if (t.size() != cod_size)
        return std::nullopt;
    FunctionTable inv(t.size(), 0);
    std::vector<bool> hit(t.size(), false);
    for (std::uint64_t x = 0; x < t.size(); ++x) {
        if (hit[t[x]])
            return std::nullopt;
        hit[t[x]] = true;
        inv[t[x]] = x;
    }
    return inv;
}

} // namespace

bool is_iso(const Morphism& m)
{
    switch (m.backend()) {
    case Backend::finset:
        return table_inverse(m.table(), m.cod().carrier()).has_value();
    case Backend::finrel:
        return relation_as_bijection(m).has_value();
    case Backend::matq:
        return m.dom().carrier() == m.cod().carrier() && linalg::inverse(dense(m)).has_value();
    }
    return false;
}

Morphism inverse(const Morphism& m)
{
    switch (m.backend()) {
    case Backend::finset: {
        auto inv = table_inverse(m.table(), m.cod().carrier());
        if (!inv)
            throw TypeMismatch("not invertible: " + m.describe());
        return Morphism(Backend::finset, m.cod(), m.dom(), std::move(*inv));
    }
    case Backend::finrel: {
        if (!relation_as_bijection(m))
            throw TypeMismatch("not invertible: " + m.describe());
        return transpose(m);
    }
    case Backend::matq: {
        if (m.dom().carrier() != m.cod().carrier())
            throw TypeMismatch("not invertible (non-square): " + m.describe());
        auto inv = linalg::inverse(dense(m));
        if (!inv)
            throw TypeMismatch("not invertible (singular): " + m.describe());
        return from_dense(m.cod(), m.dom(), *inv);
    }
    }
    throw Unsupported("unknown backend");
}

Morphism compact_cup(Backend backend, const ObjectExpr& a)
{
    if (backend == Backend::finset)
        throw Unsupported("FINSET has no compact structure");
    const std::uint64_t n = a.carrier();
    if (backend == Backend::finrel) {
        Relation r;
        for (std::uint64_t x = 0; x < n; ++x)
            r.pairs.emplace_back(0, x * n + x);
        return Morphism(backend, ObjectExpr::unit(), a * a, std::move(r));
    }
    QMatrix q;
    for (std::uint64_t x = 0; x < n; ++x)
        q.entries.push_back({x * n + x, 0, Rational(1)});
    return Morphism(backend, ObjectExpr::unit(), a * a, std::move(q));
}

Morphism compact_cap(Backend backend, const ObjectExpr& a) { return transpose(compact_cup(backend, a)); }

Morphism transpose(const Morphism& m)
{
    switch (m.backend()) {
    case Backend::finset:
        throw Unsupported("FINSET has no transpose");
    case Backend::finrel: {
        Relation r;
        for (const auto& [x, y] : m.relation().pairs)
            r.pairs.emplace_back(y, x);
        return Morphism(Backend::finrel, m.cod(), m.dom(), std::move(r));
    }
    case Backend::matq: {
        QMatrix q;
        for (const auto& e : m.matrix().entries)
            q.entries.push_back({e.col, e.row, e.value});
        return Morphism(Backend::matq, m.cod(), m.dom(), std::move(q));
    }
    }
    throw Unsupported("unknown backend");
}

std::vector<Rational> apply(const Morphism& m, const std::vector<Rational>& v)
{
    if (v.size() != m.dom().carrier())
        throw ShapeMismatch("vector length does not match domain " + m.dom().render());
    std::vector<Rational> out(m.cod().carrier());
    for (const auto& e : as_entries(m))
        if (!v[e.col].is_zero())
            out[e.row] += e.value * v[e.col];
    return out;
}

std::vector<std::vector<Rational>> dense(const Morphism& m)
{
    const std::uint64_t rows = m.cod().carrier();
    const std::uint64_t cols = m.dom().carrier();
    if (rows * cols > kMaxTable)
        throw BoundExceeded("dense view too large for " + m.dom().render() + " -> " + m.cod().render());
    std::vector<std::vector<Rational>> out(rows, std::vector<Rational>(cols));
    for (const auto& e : as_entries(m))
        out[e.row][e.col] += e.value;
    return out;
}

Morphism from_dense(const ObjectExpr& dom, const ObjectExpr& cod, const std::vector<std::vector<Rational>>& rows)
{
    if (rows.size() != cod.carrier())
        throw ShapeMismatch("row count does not match codomain " + cod.render());
    QMatrix q;
    for (std::uint64_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != dom.carrier())
            throw ShapeMismatch("column count does not match domain " + dom.render());
        for (std::uint64_t c = 0; c < rows[r].size(); ++c)
            if (!rows[r][c].is_zero())
                q.entries.push_back({r, c, rows[r][c]});
    }
    return Morphism(Backend::matq, dom, cod, std::move(q));
}

Morphism finset_point(const ObjectExpr& a, std::uint64_t x)
{
    return Morphism(Backend::finset, ObjectExpr::unit(), a, FunctionTable{x});
}

// ---------------------------------------------------------------------------
// Categories

bool Category::contains(const Morphism& m) const { return m.backend() == backend(); }

std::optional<Morphism> Category::inverse_of(const Morphism& m) const
{
    if (!hopt::is_iso(m))
        return std::nullopt;
    return hopt::inverse(m);
}

Model::Model(Backend backend, std::string name, std::map<std::string, AtomSpec> generators)
    : backend_(backend), name_(std::move(name)), generators_(std::move(generators))
{
    for (const auto& [n, spec] : generators_) {
        if (spec.size == 0)
            throw std::invalid_argument("generator '" + n + "' has empty carrier");
        if (!spec.labels.empty() && spec.labels.size() != spec.size)
            throw std::invalid_argument("generator '" + n + "' label count mismatch");
    }
}

std::shared_ptr<const Model> Model::standard(Backend backend, std::uint64_t max_size)
{
    std::map<std::string, AtomSpec> gens;
    for (std::uint64_t k = 1; k <= max_size; ++k) {
        AtomSpec spec{k, {}};
        for (std::uint64_t i = 0; i < k; ++i)
            spec.labels.push_back(std::to_string(i));
        gens.emplace("n" + std::to_string(k), std::move(spec));
    }
    return std::make_shared<Model>(backend, to_string(backend), std::move(gens));
}

Atom Model::resolve(const std::string& atom_name) const
{
    auto it = generators_.find(atom_name);
    if (it == generators_.end())
        throw ResolutionError("unknown atom '" + atom_name + "' in model " + name_);
    return Atom{atom_name, it->second.size, nullptr};
}

ObjectExpr Model::object(const std::vector<std::string>& atom_names) const
{
    std::vector<Atom> atoms;
    for (const auto& n : atom_names)
        atoms.push_back(resolve(n));
    return ObjectExpr(std::move(atoms));
}

FunctionCodec::FunctionCodec(std::uint64_t dom_size, std::uint64_t cod_size)
    : dom_size_(dom_size), cod_size_(cod_size), count_(1)
{
    for (std::uint64_t i = 0; i < dom_size; ++i)
        if (__builtin_mul_overflow(count_, cod_size, &count_))
            throw BoundExceeded("function set of size " + std::to_string(cod_size) + "^" +
                                std::to_string(dom_size) + " exceeds 64 bits");
}

std::uint64_t FunctionCodec::encode(const FunctionTable& table) const
{
    std::uint64_t code = 0;
    for (auto v : table)
        code = code * cod_size_ + v;
    return code;
}

FunctionTable FunctionCodec::decode(std::uint64_t code) const
{
    FunctionTable t(dom_size_);
    for (std::uint64_t i = dom_size_; i-- > 0;) {
        t[i] = code % cod_size_;
        code /= cod_size_;
    }
    return t;
}

namespace {

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

HomSet Model::homs(const ObjectExpr& a, const ObjectExpr& b, const HomBounds& bounds) const
{
    const std::uint64_t na = a.carrier();
    const std::uint64_t nb = b.carrier();
    HomSet out;
    switch (backend_) {
    case Backend::finset: {
        const FunctionCodec codec(na, nb);
        if (codec.count() > bounds.max_homs)
            throw BoundExceeded("|FINSET(" + a.render() + "," + b.render() + ")| = " +
                                std::to_string(codec.count()) + " exceeds bound");
        out.items.reserve(codec.count());
        for (std::uint64_t i = 0; i < codec.count(); ++i)
            out.items.emplace_back(Backend::finset, a, b, codec.decode(i));
        return out;
    }
    case Backend::finrel: {
        const std::uint64_t n = na * nb;
        if (n >= 63 || (std::uint64_t{1} << n) > bounds.max_homs)
            throw BoundExceeded("|FINREL(" + a.render() + "," + b.render() + ")| = 2^" + std::to_string(n) +
                                " exceeds bound");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            Relation r;
            for (std::uint64_t p = 0; p < n; ++p)
                if ((mask >> (n - 1 - p)) & 1u)
                    r.pairs.emplace_back(p / nb, p % nb);
            out.items.emplace_back(Backend::finrel, a, b, std::move(r));
        }
        return out;
    }
    case Backend::matq: {
        out.sampled = true;
        for (std::uint64_t r = 0; r < nb; ++r)
            for (std::uint64_t c = 0; c < na; ++c)
                out.items.emplace_back(Backend::matq, a, b, QMatrix{{{r, c, Rational(1)}}});
        out.generator_count = out.items.size();
        std::mt19937_64 rng(bounds.seed ^ fnv1a(a.render() + "->" + b.render()));
        for (std::size_t s = 0; s < bounds.samples; ++s) {
            QMatrix q;
            for (std::uint64_t r = 0; r < nb; ++r)
                for (std::uint64_t c = 0; c < na; ++c) {
                    const auto k = static_cast<std::int64_t>(rng() % 5) - 2;
                    const auto d = static_cast<std::int64_t>(rng() % 3) + 1;
                    if (k != 0)
                        q.entries.push_back({r, c, Rational(k, d)});
                }
            out.items.emplace_back(Backend::matq, a, b, std::move(q));
        }
        return out;
    }
    }
    throw Unsupported("unknown backend");
}

std::vector<ObjectExpr> Model::inventory(std::uint64_t max_size) const { return atom_inventory(*this, max_size); }

std::vector<ObjectExpr> atom_inventory(const Model& model, std::uint64_t max_size)
{
    std::vector<std::pair<std::uint64_t, std::string>> atoms;
    for (const auto& [n, spec] : model.generators())
        if (spec.size <= max_size)
            atoms.emplace_back(spec.size, n);
    std::sort(atoms.begin(), atoms.end());
    std::vector<ObjectExpr> out{ObjectExpr::unit()};
    for (const auto& [size, n] : atoms)
        out.push_back(ObjectExpr::atom(n, size));
    return out;
}

} // namespace hopt
