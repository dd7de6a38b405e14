#pragma once

// Finite towers of enrichments, their trivial mergers, and the apex
// constructions (internal hom, evaluation, currying) on a finite truncation.

#include "hopt/pmcat.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace hopt {

/// Layers E_1..E_{N-1}; E_i enriches C^i in C^{i+1}. Levels are 1-based.
class Tower {
public:
    explicit Tower(std::vector<EnrichedPtr> layers);

    /// Number of layers; the tower has depth() + 1 categories.
    std::size_t depth() const { return layers_.size(); }
    std::size_t top() const { return layers_.size() + 1; }
    const EnrichedPtr& layer(std::size_t i) const;
    /// C^i for 1 <= i <= top().
    CategoryPtr category(std::size_t i) const;

private:
    std::vector<EnrichedPtr> layers_;
};

/// Checks the chain condition and runs the enriched-law suite on each
/// distinct layer (objects up to size 1 unless a config is given). Throws
/// ChainMismatch or LawViolation.
Tower build_tower(std::vector<EnrichedPtr> layers);
Tower build_tower(std::vector<EnrichedPtr> layers, const LawConfig& construction);

/// R_i^j : C^i -> C^j, the composite of the [I,-] steps; i == j gives the identity.
FunctorData raising(const Tower& t, std::size_t i, std::size_t j);

struct Level {
    std::size_t index;
    ObjectExpr rep; // X_A in C^index
    Morphism iso;   // L_A : A -> F_index(X_A)
};

struct FiniteMerger {
    Tower tower;
    CategoryPtr apex;
    /// F_i for i = 1..top(), stored at index i - 1.
    std::vector<FunctorData> functors;
    /// eta(i, X) : F_i(X) -> F_{i+1}(R_i^{i+1} X) for X in C^i.
    std::function<Morphism(std::size_t, const ObjectExpr&)> eta;
    /// The declared apex objects, each with its level data.
    std::function<Level(const ObjectExpr&)> level;
    std::function<std::vector<ObjectExpr>(std::uint64_t)> inventory;

    const FunctorData& F(std::size_t i) const;
};

/// Apex C^N, F_i = R_i^N and eta the identity. The designated objects are
/// the images F_i(X) of layer inventory atoms, each at its lowest level.
FiniteMerger trivial_merger(const Tower& t);

/// mu_i(X,Y) : F_{i+1}([X,Y]_i) -> F_{i+2}([R X, R Y]_{i+1}), i.e.
/// F_{i+2}(gamma) after eta_{i+1}. Needs i + 2 <= top().
Morphism mu(const FiniteMerger& m, std::size_t i, const ObjectExpr& x, const ObjectExpr& y);

/// ETA-ISO, ETA-NAT and ETA-MON for every level, and DESIGNATED (every
/// declared object has an invertible L_A into F_l(X_A)).
LawReport check_merger(const FiniteMerger& m, const LawConfig& config);

/// ETA-NAT at levels i and i+1, MU-ISO, and MU-EVAL: lifting an evaluation
/// at level i through eta agrees with evaluating at level i+1 after
/// (eta * mu).
LawReport check_mu_condition(const FiniteMerger& m, std::size_t i, const LawConfig& config);

/// A => B = F_{k+1}[R^k X_A, R^k X_B] with k = max(l_A, l_B). Needs
/// k + 1 <= top() - 1, otherwise BoundExceeded.
ObjectExpr apex_arrow(const FiniteMerger& m, const ObjectExpr& a, const ObjectExpr& b);
/// A * (A => B) -> B.
Morphism apex_eval(const FiniteMerger& m, const ObjectExpr& a, const ObjectExpr& b);
/// f : A * C -> B gives C -> (A => B). All three levels need headroom.
Morphism apex_curry(const FiniteMerger& m, const ObjectExpr& a, const Morphism& f);

/// EXIST (eval after id * curry f = f) and UNIQUE (brute force, or
/// UNIQUE-RANK for sampled hom-sets) over triples of designated objects;
/// triples outside the headroom are skipped.
LawReport check_apex_closed(const FiniteMerger& m, const LawConfig& config);

} // namespace hopt
