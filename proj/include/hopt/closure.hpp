#pragma once

// Linked self-enrichments and closed monoidal structure. A linking is a
// family eta_A : A -> [I,A]; together with a faithful self-enrichment it
// yields evaluation and currying, and conversely a closed model yields the
// enrichment data.

#include "hopt/enrichment.hpp"

#include <functional>
#include <memory>

namespace hopt {

class LinkedStructure {
public:
    using EtaFn = std::function<Morphism(const ObjectExpr&)>;

    LinkedStructure(EnrichedPtr base, EtaFn eta);

    const EnrichedSmc& base() const { return *base_; }
    EnrichedPtr base_ptr() const { return base_; }
    Morphism eta(const ObjectExpr& a) const { return eta_(a); }
    Morphism eta_inv(const ObjectExpr& a) const { return inverse(eta_(a)); }

private:
    EnrichedPtr base_;
    EtaFn eta_;
};

/// The canonical linking of a standard self-enrichment: FINSET sends a to
/// the point selecting a, the compact enrichments use [I,A] = A and eta = id.
LinkedStructure standard_linking(EnrichedPtr e);

/// eval : A*[A,B] -> B.
Morphism eval_morphism(const LinkedStructure& l, const ObjectExpr& a, const ObjectExpr& b);
/// f : A*C -> B gives C -> [A,B]. The domain of f must start with A.
Morphism curry(const LinkedStructure& l, const ObjectExpr& a, const Morphism& f);
/// g : C -> [A,B] gives A*C -> B.
Morphism uncurry(const LinkedStructure& l, const ObjectExpr& a, const ObjectExpr& b, const Morphism& g);

/// Splits dom = a*rest and returns rest; TypeMismatch if a is not a prefix.
ObjectExpr strip_prefix(const ObjectExpr& dom, const ObjectExpr& a);

/// EXIST (eval after id*curry f = f), UNIQUE (exactly one g solves the
/// eval equation; MATQ: UNIQUE-RANK), ROUND-TRIP (curry after uncurry = id).
LawReport check_couniversal(const LinkedStructure& l, const LawConfig& config);

/// ETA-ISO, ETA-NAT and ETA-MON.
LawReport check_linked(const LinkedStructure& l, const LawConfig& config);

/// A closed monoidal model described directly by its internal hom,
/// evaluation and currying.
class ClosedOracle {
public:
    virtual ~ClosedOracle() = default;
    virtual std::string name() const = 0;
    virtual ModelPtr model() const = 0;
    virtual ObjectExpr internal_hom(const ObjectExpr& a, const ObjectExpr& b) const = 0;
    virtual Morphism eval(const ObjectExpr& a, const ObjectExpr& b) const = 0;
    /// f : A*C -> B gives C -> internal_hom(A,B).
    virtual Morphism curry(const ObjectExpr& a, const Morphism& f) const = 0;
};

using ClosedOraclePtr = std::shared_ptr<const ClosedOracle>;

ClosedOraclePtr finset_closed_oracle(ModelPtr model);
ClosedOraclePtr finrel_closed_oracle(ModelPtr model);
/// Throws OracleFailure: FINSET and FINREL are the only native oracles.
ClosedOraclePtr closed_oracle(ModelPtr model);

/// kappa = curry, seq and par as adjuncts of evaluation circuits, eta as the
/// inverse of eval_{I,A}.
LinkedStructure enrichment_from_closed(ClosedOraclePtr oracle);

} // namespace hopt
