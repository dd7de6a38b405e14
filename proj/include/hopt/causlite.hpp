#pragma once

// Classical causal types: affine constraint systems on Choi vectors of
// column-stochastic maps, non-signalling bipartite types, and the sequential
// composition supermap as a compact wiring in MATQ.

#include "hopt/law.hpp"
#include "hopt/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hopt {

/// States v with constraints * v = rhs (and v >= 0 when nonneg). The system
/// is kept in reduced row-echelon form.
class CausType {
public:
    CausType(std::string name, std::uint64_t dim, linalg::Matrix constraints, linalg::Vector rhs,
             std::vector<linalg::Vector> generators, bool nonneg = true);

    const std::string& name() const { return name_; }
    std::uint64_t dim() const { return dim_; }
    const linalg::Matrix& constraints() const { return constraints_; }
    const linalg::Vector& rhs() const { return rhs_; }
    const std::vector<linalg::Vector>& generators() const { return generators_; }
    bool nonneg() const { return nonneg_; }
    /// Input and output dimensions of a hom type.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> hom_shape() const { return hom_; }

    bool contains(const linalg::Vector& v) const;

private:
    friend CausType hom_type(std::uint64_t, std::uint64_t);
    friend CausType ns_tensor(const CausType&, const CausType&);

    std::string name_;
    std::uint64_t dim_;
    linalg::Matrix constraints_;
    linalg::Vector rhs_;
    std::vector<linalg::Vector> generators_;
    bool nonneg_;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> hom_;
};

/// Probability n-vectors.
CausType first_order_type(std::uint64_t n);
/// Choi vectors of column-stochastic n -> m maps; P(i|j) sits at j*m + i.
/// Generators are the m^n deterministic functions.
CausType hom_type(std::uint64_t n, std::uint64_t m);
/// Choi vector of a column-stochastic matrix (rows = outputs).
linalg::Vector choi(const linalg::Matrix& stochastic);
/// Non-signalling channels AB -> A'B' for H1 over (A,A') and H2 over (B,B');
/// P(a'b'|ab) sits at ((a*|A'| + a')*|B| + b)*|B'| + b'.
CausType ns_tensor(const CausType& h1, const CausType& h2);
/// Kronecker product of vectors.
linalg::Vector kron(const linalg::Vector& x, const linalg::Vector& y);

/// [A,B]*[B,C] -> [A,C] as id_A * cap_B * id_C in MATQ.
Morphism seq_supermap(std::uint64_t a, std::uint64_t b, std::uint64_t c);

struct SupermapVerdict {
    enum class Result { pass, partial, fail };
    Result result = Result::fail;
    std::string reason;
    std::optional<std::size_t> witness; // index of a violating source generator
};

std::string to_string(SupermapVerdict::Result r);

/// PASS: S is entrywise nonnegative and every target constraint pulled back
/// through S lies in the row span of the source system. Otherwise the source
/// generators are mapped: FAIL with the first one that leaves tgt, PARTIAL
/// when all land inside. ShapeMismatch on incompatible dimensions.
SupermapVerdict check_supermap_preserves(const linalg::Matrix& s, const CausType& src, const CausType& tgt);
SupermapVerdict check_supermap_preserves(const Morphism& s, const CausType& src, const CausType& tgt);

/// SEQ-CHOI, SEQ-PRESERVES, NS-PRODUCT, NS-COPY and NS-DETERMINISTIC at
/// dimensions up to config.max_size; seeded stochastic samples use
/// config.homs.samples and config.homs.seed.
LawReport check_causlite(const LawConfig& config);

} // namespace hopt
