#pragma once

// Enriched symmetric monoidal categories: hom objects [A,B] in V, the
// bijection kappa between C(A,B) and V(I,[A,B]), sequential morphisms
// seq_{A,B,C} : [A,B]*[B,C] -> [A,C] and parallel morphisms
// par_{A,A',B,B'} : [A,A']*[B,B'] -> [A*B,A'*B'].
//
// Every standard enrichment uses [I,I] = I, which keeps the unit laws strict.

#include "hopt/kernel.hpp"
#include "hopt/law.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hopt {

class EnrichedSmc {
public:
    virtual ~EnrichedSmc() = default;

    virtual std::string name() const = 0;
    virtual CategoryPtr lower() const = 0; // C
    virtual CategoryPtr upper() const = 0; // V

    virtual ObjectExpr hom(const ObjectExpr& a, const ObjectExpr& b) const = 0;
    /// p : A' -> A, q : B -> B' gives [A,B] -> [A',B'].
    virtual Morphism hom_map(const Morphism& p, const Morphism& q) const = 0;
    virtual Morphism kappa(const Morphism& f) const = 0;
    virtual Morphism kappa_inv(const Morphism& state, const ObjectExpr& a, const ObjectExpr& b) const = 0;
    virtual Morphism seq(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c) const = 0;
    virtual Morphism par(const ObjectExpr& a, const ObjectExpr& a2, const ObjectExpr& b,
                         const ObjectExpr& b2) const = 0;

    /// seq_{A,B,C} after m and par after m. Backends whose structural
    /// morphisms are huge tables evaluate these on the image of m only.
    virtual Morphism seq_after(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c, const Morphism& m) const
    {
        return compose(seq(a, b, c), m);
    }
    virtual Morphism par_after(const ObjectExpr& a, const ObjectExpr& a2, const ObjectExpr& b, const ObjectExpr& b2,
                               const Morphism& m) const
    {
        return compose(par(a, a2, b, b2), m);
    }

    /// hom_map(p,q) after m.
    virtual Morphism hom_map_after(const Morphism& p, const Morphism& q, const Morphism& m) const
    {
        return compose(hom_map(p, q), m);
    }

    /// seq_{A,B,C} after (m * kappa(g)) for m : D -> [A,B] and g : B -> C.
    /// Lets FINSET avoid encoding kappa(g) when [B,C] is too large to index.
    virtual Morphism seq_after_with(const ObjectExpr& a, const ObjectExpr& b, const ObjectExpr& c, const Morphism& m,
                                    const Morphism& g) const
    {
        return seq_after(a, b, c, tensor(m, kappa(g)));
    }

    /// Whether law suites must sample hom-sets (MATQ).
    bool sampled() const { return lower()->backend() == Backend::matq; }
};

using EnrichedPtr = std::shared_ptr<const EnrichedSmc>;

/// [A,B] = function set, a single atom of size |B|^|A|.
EnrichedPtr finset_self(ModelPtr model);
/// [A,B] = A*B through the compact structure (FINREL or MATQ Choi vectors).
EnrichedPtr compact_self(ModelPtr model);

struct StandardEnrichments {
    EnrichedPtr finset_self;
    EnrichedPtr finrel_self;
    EnrichedPtr matq_choi;
};
StandardEnrichments standard_enrichments(std::uint64_t max_size = 4);

/// Wraps an enrichment and overrides one output of seq_{A,B,C}: the state
/// kappa(f)*kappa(g) is sent to kappa(wrong) instead of kappa(g f). FINSET only.
EnrichedPtr corrupt_seq(EnrichedPtr base, const Morphism& f, const Morphism& g, const Morphism& wrong);

/// Delta : [A,X]*[Y*X,Z] -> [Y*A,Z].
Morphism partial_insertion(const EnrichedSmc& e, const ObjectExpr& a, const ObjectExpr& x, const ObjectExpr& y,
                           const ObjectExpr& z);

/// theta(S) : [I,A]*X -> [I,B] for S : X -> [A,B].
Morphism usage_theta(const EnrichedSmc& e, const Morphism& s, const ObjectExpr& a, const ObjectExpr& b);

/// Laws L1..L7 plus KAPPA-BIJ, KAPPA-INV, HOM-ID, HOM-BIFUNCT, HOM-COMP-L,
/// HOM-COMP-R, KAPPA-NAT-L, KAPPA-NAT-R.
LawReport check_enriched_laws(const EnrichedSmc& e, const LawConfig& config);

/// DELTA-SPEC: Delta_{I,X,Y,Z} after (kappa(sigma)*id) = hom_map(id_Y*sigma, id_Z),
/// and DELTA-UNIT: inserting kappa(id_X) leaves [Y*X,Z] unchanged.
LawReport check_partial_insertion(const EnrichedSmc& e, const LawConfig& config);

/// Componentwise injectivity of theta. Exhaustive for enumerable backends,
/// exact rank of S -> theta(S) for MATQ.
LawReport check_faithful(const EnrichedSmc& e, const LawConfig& config);

} // namespace hopt
