#pragma once

// Concrete finite symmetric monoidal categories with exact payloads.
//
// Objects are strict: an ObjectExpr is a list of atoms, tensor is
// concatenation, the unit is the empty list. Elements of a composite carrier
// are indexed in mixed radix with the LEFT factor as the major index; the same
// convention is used for Kronecker products and for column-major
// vectorization (vec(f)[a * |B| + b] = f[b][a] for f : A -> B).

#include "hopt/errors.hpp"
#include "hopt/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hopt {

enum class Backend { finset, finrel, matq };

std::string to_string(Backend b);

class Split; // Karoubi data attached to atoms of an idempotent completion.

struct Atom {
    std::string name;
    std::uint64_t size = 1;
    std::shared_ptr<const Split> split; // null for ordinary atoms

    friend bool operator==(const Atom& a, const Atom& b) { return a.size == b.size && a.name == b.name; }
};

class ObjectExpr {
public:
    ObjectExpr() = default;
    explicit ObjectExpr(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
    static ObjectExpr unit() { return {}; }
    static ObjectExpr atom(std::string name, std::uint64_t size);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool is_unit() const { return atoms_.empty(); }
    std::size_t length() const { return atoms_.size(); }

    /// Product of atom sizes; throws BoundExceeded when it leaves 64 bits.
    std::uint64_t carrier() const;
    std::string render() const;

    friend ObjectExpr operator*(const ObjectExpr& a, const ObjectExpr& b);
    friend bool operator==(const ObjectExpr&, const ObjectExpr&) = default;

private:
    std::vector<Atom> atoms_;
};

// ---------------------------------------------------------------------------
// Payloads

/// FINSET: table[x] is the image index of domain element x.
using FunctionTable = std::vector<std::uint64_t>;

/// FINREL: sorted, duplicate-free (domain, codomain) pairs.
struct Relation {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    friend bool operator==(const Relation&, const Relation&) = default;
};

struct MatrixEntry {
    std::uint64_t row = 0; // codomain index
    std::uint64_t col = 0; // domain index
    Rational value;
    friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// MATQ: sparse exact matrix, rows = codomain, cols = domain. Entries are
/// sorted by (row, col) and never zero.
struct QMatrix {
    std::vector<MatrixEntry> entries;
    friend bool operator==(const QMatrix&, const QMatrix&) = default;
};

using Payload = std::variant<FunctionTable, Relation, QMatrix>;

class Morphism {
public:
    /// Validates payload shape against the carriers of dom and cod.
    Morphism(Backend backend, ObjectExpr dom, ObjectExpr cod, Payload payload);

    Backend backend() const { return backend_; }
    const ObjectExpr& dom() const { return dom_; }
    const ObjectExpr& cod() const { return cod_; }
    const Payload& payload() const { return payload_; }

    const FunctionTable& table() const { return std::get<FunctionTable>(payload_); }
    const Relation& relation() const { return std::get<Relation>(payload_); }
    const QMatrix& matrix() const { return std::get<QMatrix>(payload_); }

    /// Canonical rendering of the payload, used for reports and ordering.
    std::string canonical() const;
    /// "dom -> cod : payload"
    std::string describe() const;
    std::size_t hash() const;

    friend bool operator==(const Morphism&, const Morphism&) = default;

private:
    Backend backend_;
    ObjectExpr dom_;
    ObjectExpr cod_;
    Payload payload_;
};

// ---------------------------------------------------------------------------
// Backend operations (payload level; dispatch on Morphism::backend()).

Morphism compose(const Morphism& g, const Morphism& f); // g after f
Morphism tensor(const Morphism& f, const Morphism& g);
Morphism identity(Backend backend, const ObjectExpr& a);
Morphism braid(Backend backend, const ObjectExpr& a, const ObjectExpr& b);

/// Same payload, new boundaries with equal carriers.
Morphism retype(const Morphism& m, const ObjectExpr& dom, const ObjectExpr& cod);

bool is_iso(const Morphism& m);
/// Throws TypeMismatch when m is not invertible.
Morphism inverse(const Morphism& m);

/// Compact structure (FINREL, MATQ). A* = A.
Morphism compact_cup(Backend backend, const ObjectExpr& a); // I -> A*A
Morphism compact_cap(Backend backend, const ObjectExpr& a); // A*A -> I
Morphism transpose(const Morphism& m);

/// Evaluate a FINSET morphism on an element, or apply a MATQ matrix to a
/// dense vector. Convenience for tests and oracles.
std::vector<Rational> apply(const Morphism& m, const std::vector<Rational>& v);

/// Dense view of a MATQ morphism (rows = cod).
std::vector<std::vector<Rational>> dense(const Morphism& m);
Morphism from_dense(const ObjectExpr& dom, const ObjectExpr& cod, const std::vector<std::vector<Rational>>& rows);

/// Point I -> A of FINSET selecting element x.
Morphism finset_point(const ObjectExpr& a, std::uint64_t x);

// ---------------------------------------------------------------------------
// Categories

struct HomBounds {
    std::uint64_t max_homs = 1u << 20;
    std::size_t samples = 200;
    std::uint64_t seed = 0;
};

struct HomSet {
    std::vector<Morphism> items;
    bool sampled = false;
    /// For sampled hom-sets: how many leading items are declared generators.
    std::size_t generator_count = 0;
};

/// A finite symmetric monoidal category with decidable equality. Immutable
/// after construction and safe to share between threads.
class Category {
public:
    virtual ~Category() = default;

    virtual std::string name() const = 0;
    virtual Backend backend() const = 0;
    virtual Morphism identity(const ObjectExpr& a) const = 0;
    virtual Morphism braid(const ObjectExpr& a, const ObjectExpr& b) const = 0;
    /// Deterministically ordered hom-set. MATQ hom-sets are sampled.
    virtual HomSet homs(const ObjectExpr& a, const ObjectExpr& b, const HomBounds& bounds) const = 0;
    /// Whether m is a morphism of this category (Karoubi: y f x = f).
    virtual bool contains(const Morphism& m) const;
    /// Two-sided inverse inside this category, if any.
    virtual std::optional<Morphism> inverse_of(const Morphism& m) const;
    /// Objects used by law suites: the unit first, then atoms of size <= max_size.
    virtual std::vector<ObjectExpr> inventory(std::uint64_t max_size) const = 0;

    Morphism compose(const Morphism& g, const Morphism& f) const { return hopt::compose(g, f); }
    Morphism tensor(const Morphism& f, const Morphism& g) const { return hopt::tensor(f, g); }
};

using CategoryPtr = std::shared_ptr<const Category>;

struct AtomSpec {
    std::uint64_t size = 1;
    std::vector<std::string> labels; // element labels (FINSET/FINREL)
};

/// A kernel backend with a generator table.
class Model : public Category {
public:
    Model(Backend backend, std::string name, std::map<std::string, AtomSpec> generators);

    /// Standard models with atoms n1..n{max_size} of carrier size 1..max_size.
    static std::shared_ptr<const Model> standard(Backend backend, std::uint64_t max_size = 4);

    std::string name() const override { return name_; }
    Backend backend() const override { return backend_; }
    Morphism identity(const ObjectExpr& a) const override { return hopt::identity(backend_, a); }
    Morphism braid(const ObjectExpr& a, const ObjectExpr& b) const override
    {
        return hopt::braid(backend_, a, b);
    }
    HomSet homs(const ObjectExpr& a, const ObjectExpr& b, const HomBounds& bounds) const override;
    std::vector<ObjectExpr> inventory(std::uint64_t max_size) const override;

    bool has_compact_structure() const { return backend_ != Backend::finset; }
    Morphism cup(const ObjectExpr& a) const { return compact_cup(backend_, a); }
    Morphism cap(const ObjectExpr& a) const { return compact_cap(backend_, a); }

    const std::map<std::string, AtomSpec>& generators() const { return generators_; }
    Atom resolve(const std::string& atom_name) const;
    ObjectExpr object(const std::vector<std::string>& atom_names) const;

private:
    Backend backend_;
    std::string name_;
    std::map<std::string, AtomSpec> generators_;
};

using ModelPtr = std::shared_ptr<const Model>;

/// The unit plus every generator atom of size <= max_size, in generator order.
std::vector<ObjectExpr> atom_inventory(const Model& model, std::uint64_t max_size);

/// Mixed-radix codec for FINSET function sets: a function A -> B with table
/// (f(0), ..., f(|A|-1)) is encoded as sum f(a) * |B|^(|A|-1-a), so encodings
/// are ordered lexicographically by table.
class FunctionCodec {
public:
    FunctionCodec(std::uint64_t dom_size, std::uint64_t cod_size);
    std::uint64_t count() const { return count_; }
    std::uint64_t encode(const FunctionTable& table) const;
    FunctionTable decode(std::uint64_t code) const;

private:
    std::uint64_t dom_size_;
    std::uint64_t cod_size_;
    std::uint64_t count_;
};

/// Largest FINSET table (domain carrier) the kernel will materialize.
inline constexpr std::uint64_t kMaxTable = std::uint64_t{1} << 24;

} // namespace hopt
