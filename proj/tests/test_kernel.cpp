#include "hopt/kernel.hpp"
#include "hopt/linalg.hpp"

#include <doctest.h>

#include <set>

using namespace hopt;

namespace {

ObjectExpr bit() { return ObjectExpr::atom("n2", 2); }
ObjectExpr trit() { return ObjectExpr::atom("n3", 3); }

Morphism mat(const ObjectExpr& dom, const ObjectExpr& cod, std::vector<std::vector<std::int64_t>> rows)
{
    linalg::Matrix m;
    for (auto& r : rows) {
        linalg::Vector v;
        for (auto x : r)
            v.emplace_back(x);
        m.push_back(v);
    }
    return from_dense(dom, cod, m);
}

// Naive dense product used as an oracle for sparse composition.
linalg::Matrix naive_product(const linalg::Matrix& a, const linalg::Matrix& b)
{
    linalg::Matrix out(a.size(), linalg::Vector(b.empty() ? 0 : b[0].size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < out[i].size(); ++j)
            for (std::size_t k = 0; k < b.size(); ++k)
                out[i][j] += a[i][k] * b[k][j];
    return out;
}

} // namespace

TEST_CASE("compose: finset involution")
{
    Morphism n(Backend::finset, bit(), bit(), FunctionTable{1, 0});
    CHECK(compose(n, n) == identity(Backend::finset, bit()));
}

TEST_CASE("compose: matq identity case")
{
    auto a = mat(bit(), bit(), {{1, 2}, {3, 4}});
    CHECK(compose(a, identity(Backend::matq, bit())) == a);
    CHECK(compose(identity(Backend::matq, bit()), a) == a);
}

TEST_CASE("compose: finrel join against enumeration")
{
    Morphism r(Backend::finrel, bit(), bit(), Relation{{{0, 1}}});
    Morphism s(Backend::finrel, bit(), bit(), Relation{{{1, 0}}});
    // R after S sends 1 to 1; "R then S" is the composite relating 0 to 0.
    auto rs = compose(r, s);
    CHECK(rs.relation().pairs == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{1, 1}});
    auto sr = compose(s, r);
    std::set<std::pair<std::uint64_t, std::uint64_t>> oracle;
    for (auto [x, y] : r.relation().pairs)
        for (auto [y2, z] : s.relation().pairs)
            if (y == y2)
                oracle.emplace(x, z);
    CHECK(std::set(sr.relation().pairs.begin(), sr.relation().pairs.end()) == oracle);
    CHECK(sr.relation().pairs == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{0, 0}});
}

TEST_CASE("compose: boundary mismatch")
{
    Morphism f(Backend::finset, bit(), trit(), FunctionTable{0, 2});
    CHECK_THROWS_AS(compose(f, f), TypeMismatch);
    Morphism g(Backend::finrel, bit(), bit(), Relation{});
    CHECK_THROWS_AS(tensor(f, g), TypeMismatch);
}

TEST_CASE("tensor: units and scalars")
{
    Morphism f(Backend::finset, bit(), trit(), FunctionTable{0, 2});
    CHECK(tensor(f, identity(Backend::finset, ObjectExpr::unit())) == f);
    CHECK(tensor(identity(Backend::finset, ObjectExpr::unit()), f) == f);
    auto two = mat(ObjectExpr::unit(), ObjectExpr::unit(), {{2}});
    auto three = mat(ObjectExpr::unit(), ObjectExpr::unit(), {{3}});
    CHECK(tensor(two, three) == mat(ObjectExpr::unit(), ObjectExpr::unit(), {{6}}));
}

TEST_CASE("tensor: finset not x not by brute force")
{
    Morphism n(Backend::finset, bit(), bit(), FunctionTable{1, 0});
    auto nn = tensor(n, n);
    for (std::uint64_t a = 0; a < 2; ++a)
        for (std::uint64_t b = 0; b < 2; ++b)
            CHECK(nn.table()[a * 2 + b] == (1 - a) * 2 + (1 - b));
}

TEST_CASE("tensor: matq kronecker left-major")
{
    auto a = mat(bit(), bit(), {{1, 2}, {3, 4}});
    auto b = mat(trit(), bit(), {{0, 1, 5}, {7, 0, -1}});
    auto k = dense(tensor(a, b));
    auto da = dense(a);
    auto db = dense(b);
    REQUIRE(k.size() == 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t p = 0; p < 2; ++p)
                for (std::size_t q = 0; q < 3; ++q)
                    CHECK(k[i * 2 + p][j * 3 + q] == da[i][j] * db[p][q]);
}

TEST_CASE("braid")
{
    for (auto be : {Backend::finset, Backend::finrel, Backend::matq}) {
        CHECK(braid(be, ObjectExpr::unit(), bit()) == identity(be, bit()));
        CHECK(compose(braid(be, trit(), bit()), braid(be, bit(), trit())) == identity(be, bit() * trit()));
    }
    auto s = braid(Backend::finset, bit(), trit());
    REQUIRE(s.table().size() == 6);
    for (std::uint64_t a = 0; a < 2; ++a)
        for (std::uint64_t b = 0; b < 3; ++b)
            CHECK(s.table()[a * 3 + b] == b * 2 + a);
    auto p = dense(braid(Backend::matq, bit(), trit()));
    for (std::uint64_t a = 0; a < 2; ++a)
        for (std::uint64_t b = 0; b < 3; ++b)
            for (std::uint64_t r = 0; r < 6; ++r)
                CHECK(p[r][a * 3 + b] == Rational(r == b * 2 + a ? 1 : 0));
}

TEST_CASE("enumerate homs")
{
    auto fs = Model::standard(Backend::finset);
    auto fr = Model::standard(Backend::finrel);
    CHECK(fs->homs(bit(), trit(), {}).items.size() == 9);
    CHECK(fs->homs(trit(), bit(), {}).items.size() == 8);
    auto one = ObjectExpr::atom("n1", 1);
    CHECK(fr->homs(one, one, {}).items.size() == 2);
    auto all = fs->homs(bit(), trit(), {}).items;
    std::set<std::string> seen;
    for (auto& m : all)
        seen.insert(m.canonical());
    CHECK(seen.size() == all.size());
    for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(all[i - 1].table() < all[i].table());
    CHECK_THROWS_AS(fs->homs(trit() * trit(), trit(), {.max_homs = 100}), BoundExceeded);
    auto mq = Model::standard(Backend::matq)->homs(bit(), bit(), {.samples = 5});
    CHECK(mq.sampled);
    CHECK(mq.generator_count == 4);
    CHECK(mq.items.size() == 9);
}

TEST_CASE("compact structure")
{
    auto cup = compact_cup(Backend::matq, bit());
    auto d = dense(cup);
    CHECK(d == linalg::Matrix{{1}, {0}, {0}, {1}});
    CHECK_THROWS_AS(compact_cup(Backend::finset, bit()), Unsupported);
    auto rc = compact_cup(Backend::finrel, bit());
    CHECK(rc.relation().pairs == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{0, 0}, {0, 3}});
    for (auto be : {Backend::finrel, Backend::matq})
        for (auto a : {bit(), trit()}) {
            auto snake = compose(tensor(compact_cap(be, a), identity(be, a)), tensor(identity(be, a), compact_cup(be, a)));
            CHECK(snake == identity(be, a));
            auto other = compose(tensor(identity(be, a), compact_cap(be, a)), tensor(compact_cup(be, a), identity(be, a)));
            CHECK(other == identity(be, a));
        }
}

TEST_CASE("smc axioms by enumeration")
{
    auto fs = Model::standard(Backend::finset);
    auto fr = Model::standard(Backend::finrel);
    for (const Model* m : {static_cast<const Model*>(fs.get()), static_cast<const Model*>(fr.get())}) {
        auto objs = atom_inventory(*m, 2);
        for (auto& a : objs)
            for (auto& b : objs) {
                auto ab = m->homs(a, b, {}).items;
                for (auto& f : ab) {
                    CHECK(compose(m->identity(b), f) == f);
                    CHECK(compose(f, m->identity(a)) == f);
                }
                for (auto& c : objs)
                    for (auto& d : objs) {
                        auto bc = m->homs(b, c, {}).items;
                        auto cd = m->homs(c, d, {}).items;
                        for (auto& f : ab)
                            for (auto& g : bc)
                                for (auto& h : cd)
                                    CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
                    }
            }
        // interchange and braid naturality over single-bit atoms
        auto hb = m->homs(bit(), bit(), {}).items;
        for (auto& f : hb)
            for (auto& g : hb) {
                CHECK(compose(m->braid(bit(), bit()), tensor(f, g)) == compose(tensor(g, f), m->braid(bit(), bit())));
                for (auto& h : hb)
                    for (auto& k : hb)
                        CHECK(tensor(compose(g, f), compose(k, h)) == compose(tensor(g, k), tensor(f, h)));
            }
    }
}

TEST_CASE("matq exactness")
{
    auto a = from_dense(bit(), bit(), {{Rational(1, 3), Rational(2)}, {Rational(-1, 2), Rational(0)}});
    auto b = from_dense(bit(), bit(), {{Rational(2, 3), Rational(1, 5)}, {Rational(1), Rational(-1, 7)}});
    CHECK(dense(compose(b, a)) == naive_product(dense(b), dense(a)));
    for (const auto& e : compose(b, a).matrix().entries)
        CHECK((3 * 2 * 3 * 5 * 7) % e.value.den() == 0);
    CHECK(is_iso(a));
    CHECK(compose(inverse(a), a) == identity(Backend::matq, bit()));
}

TEST_CASE("codec round trip")
{
    FunctionCodec c(3, 2);
    CHECK(c.count() == 8);
    for (std::uint64_t i = 0; i < 8; ++i)
        CHECK(c.encode(c.decode(i)) == i);
    CHECK(c.decode(1) == FunctionTable{0, 0, 1});
}
