#pragma once

// The sub-theory of V generated by the structural morphisms of an
// enrichment (encoded states, sequential and parallel composition morphisms,
// identities and braids), explored breadth first, and explicit comb builders.

#include "hopt/enrichment.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hopt {

struct ClosureOptions {
    std::size_t depth = 4;
    std::size_t member_cap = 20000;
    /// V-types are tensor products of at most this many hom objects.
    std::size_t max_factors = 2;
    HomBounds homs;
};

struct ClosureMember {
    enum class Op { generator, compose, tensor };
    Morphism m;
    Op op = Op::generator;
    std::string label; // generators only
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    std::size_t round = 0;
    std::size_t dom = 0; // admissible type ids
    std::size_t cod = 0;
};

class StructuralClosure {
public:
    StructuralClosure(EnrichedPtr source, std::vector<ObjectExpr> objects, ClosureOptions options);

    /// Runs one more round: all pairwise tensors whose type stays admissible,
    /// then all composable pairs. Throws BoundExceeded past the member cap.
    void step();
    std::size_t depth() const { return rounds_; }

    const std::vector<ClosureMember>& members() const { return members_; }
    std::optional<std::size_t> find(const Morphism& m) const;
    /// Rebuilds a member from its trace.
    Morphism replay(std::size_t i) const;
    /// Expression form of the trace, e.g. "(seq(n2,n2,n2) . (kappa(n2->n2#1) * id([n2,n2])))".
    std::string trace(std::size_t i) const;
    bool admissible(const ObjectExpr& v) const;
    const EnrichedPtr& source() const { return source_; }

private:
    bool add(ClosureMember member);

    EnrichedPtr source_;
    std::vector<ObjectExpr> objects_;
    ClosureOptions options_;
    std::vector<ClosureMember> members_;
    std::unordered_multimap<std::size_t, std::size_t> index_; // payload hash -> member
    std::unordered_map<std::string, std::size_t> types_;
    std::vector<std::vector<int>> product_;
    std::size_t rounds_ = 0;
};

/// Generators over the given C-objects plus `depth` rounds.
StructuralClosure generate_structural_closure(EnrichedPtr e, const std::vector<ObjectExpr>& objects,
                                              const ClosureOptions& options);

struct CombVerdict {
    bool found = false;
    std::size_t depth = 0; // round in which the morphism first appeared
    std::size_t members = 0;
    std::string trace;
};

/// Membership in the closure within options.depth rounds. A negative answer
/// only means "not found within depth".
CombVerdict is_comb(EnrichedPtr e, const std::vector<ObjectExpr>& objects, const Morphism& m,
                    const ClosureOptions& options);

/// Shape of a comb: outer boundary A -> B, an ancilla carried between the
/// teeth, and the hole types (X_i, Y_i).
struct CombShape {
    ObjectExpr input;
    ObjectExpr output;
    ObjectExpr ancilla;
    std::vector<std::pair<ObjectExpr, ObjectExpr>> teeth;
};

/// The comb [X_1,Y_1]*...*[X_n,Y_n] -> [A,B] with fixed stages
/// g_0 : A -> E*X_1, g_i : E*Y_i -> E*X_{i+1}, g_n : E*Y_n -> B. Filling the
/// holes with kappa(f_i) yields kappa(g_n (id*f_n) ... g_1 (id*f_1) g_0).
Morphism build_comb(const EnrichedSmc& e, const CombShape& shape, const std::vector<Morphism>& stages);

/// FINSET: the map [A,A] -> [A,A] sending kappa(f) to kappa(f f).
Morphism squaring_map(const EnrichedSmc& e, const ObjectExpr& a);

/// GEN-KAPPA (every encoded state is a generator), TRACE (every member
/// replays), COMB (1- and 2-tooth combs over the objects with unit ancilla
/// are members within depth) and SQUARE (the squaring map is not found,
/// FINSET only). Objects default to the inventory atoms.
LawReport check_combs(EnrichedPtr e, const LawConfig& config, const ClosureOptions& options);

} // namespace hopt
