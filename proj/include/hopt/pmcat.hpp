#pragma once

// pm-functors between enriched monoidal categories, their composition, the
// canonical functor between adjacent layers of a tower, and the Karoubi
// envelope of an enrichment.

#include "hopt/enrichment.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace hopt {

/// A strong monoidal functor given by code. phi(A,B) : F(A)*F(B) -> F(A*B)
/// must be invertible; F(I) = I is required.
struct FunctorData {
    std::string name;
    CategoryPtr source;
    CategoryPtr target;
    std::function<ObjectExpr(const ObjectExpr&)> object;
    std::function<Morphism(const Morphism&)> morphism;
    std::function<Morphism(const ObjectExpr&, const ObjectExpr&)> phi;

    ObjectExpr operator()(const ObjectExpr& a) const { return object(a); }
    Morphism operator()(const Morphism& m) const { return morphism(m); }
    /// Inverse of phi in the target; TypeMismatch when there is none.
    Morphism phi_inv(const ObjectExpr& a, const ObjectExpr& b) const;
};

FunctorData identity_functor(CategoryPtr c);
FunctorData compose_functors(const FunctorData& g, const FunctorData& f); // g after f

struct PmFunctor {
    std::string name;
    EnrichedPtr source;
    EnrichedPtr target;
    FunctorData fv; // source V -> target V
    FunctorData fc; // source C -> target C
    /// F_AB : FV([A,B]) -> [FC A, FC B] in the target V.
    std::function<Morphism(const ObjectExpr&, const ObjectExpr&)> comp;
};

PmFunctor identity_pm(EnrichedPtr e);
/// FV = QV PV, FC = QC PC, F_AB = Q_{PA,PB} after QV(P_AB).
PmFunctor compose_pm(const PmFunctor& q, const PmFunctor& p);

/// P1 (states), P2 (sequential), P3 (parallel), plus the functor laws
/// FC-ID, FC-COMP, FC-MON, FV-ID, FV-COMP, FV-MON and UNIT.
LawReport check_pm(const PmFunctor& p, const LawConfig& config);

/// FC-FAITHFUL, FC-FULL, FV-FAITHFUL, FV-FULL, F-ISO.
LawReport is_fully_faithful(const PmFunctor& p, const LawConfig& config);

/// The raising functor [I,-] of an enrichment, as a functor C -> V.
FunctorData raising_functor(EnrichedPtr e);

/// Gamma = (R_2^3, R_1^2, gamma) from (C^2 over C^1) to (C^3 over C^2).
PmFunctor gamma_layer(EnrichedPtr e12, EnrichedPtr e23);
/// gamma_{A,B} : [I,[A,B]_2]_3 -> [[I,A]_2,[I,B]_2]_3.
Morphism gamma_component(const EnrichedSmc& e12, const EnrichedSmc& e23, const ObjectExpr& a, const ObjectExpr& b);

// ---------------------------------------------------------------------------
// Karoubi envelope

/// Idempotent (carrier, e) with e after e = e; checked on construction.
struct Idempotent {
    ObjectExpr carrier;
    Morphism e;
    Idempotent(ObjectExpr carrier, Morphism e);
};

/// Splitting data of an envelope atom. The idempotent of a hom object is
/// built on first use and checked then.
class Split {
public:
    Split(ObjectExpr carrier, std::function<Morphism()> make);
    const ObjectExpr& carrier() const { return carrier_; }
    const Morphism& idempotent() const;

private:
    ObjectExpr carrier_;
    std::function<Morphism()> make_;
    mutable std::once_flag once_;
    mutable std::optional<Morphism> e_;
};

/// The object of an envelope represented by a split atom.
ObjectExpr split_object(const Idempotent& x);
/// Underlying carrier and idempotent of an envelope object (unit -> id_I).
Idempotent underlying(const Category& base, const ObjectExpr& k);
ObjectExpr underlying_carrier(const ObjectExpr& k);
/// Underlying morphism between carriers.
Morphism underlying(const Morphism& m);

class KaroubiCategory final : public Category {
public:
    KaroubiCategory(CategoryPtr base, std::size_t per_carrier);

    std::string name() const override { return "karoubi(" + base_->name() + ")"; }
    Backend backend() const override { return base_->backend(); }
    Morphism identity(const ObjectExpr& a) const override;
    Morphism braid(const ObjectExpr& a, const ObjectExpr& b) const override;
    HomSet homs(const ObjectExpr& a, const ObjectExpr& b, const HomBounds& bounds) const override;
    bool contains(const Morphism& m) const override;
    /// The unit, then for each base atom up to per_carrier idempotents:
    /// the identity first, then the smallest in enumeration order.
    std::vector<ObjectExpr> inventory(std::uint64_t max_size) const override;
    /// Searches the envelope hom-set: the inverse of f : (X,x) -> (Y,y) is
    /// some g with g f = x and f g = y.
    std::optional<Morphism> inverse_of(const Morphism& m) const override;

    const CategoryPtr& base() const { return base_; }
    /// Retypes a base morphism between underlying carriers.
    Morphism lift(const Morphism& m, const ObjectExpr& dom, const ObjectExpr& cod) const;
    /// Embeds a base object as (A, id), atom by atom.
    ObjectExpr embed(const ObjectExpr& a) const;

private:
    CategoryPtr base_;
    std::size_t per_carrier_;
};

struct KaroubiResult {
    EnrichedPtr envelope;
    PmFunctor embedding; // E -> karoubi(E), identity components
};

/// Envelope of a self-enrichment (both layers completed).
KaroubiResult karoubi(EnrichedPtr e, std::size_t per_carrier = 4);

/// The pm-functor sending everything to the unit of a model with no atoms.
PmFunctor collapse(EnrichedPtr e);

} // namespace hopt
