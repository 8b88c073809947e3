#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hjelmslev {

/// Index of a ring element inside its RingTable. Index 0 is zero, index 1 is one.
using Element = std::uint8_t;

/// A permutation of element indices (used for ring automorphisms).
using ElementMap = std::vector<Element>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RingKind {
    Field,              // F_q, q = p^r
    IntegersModSquare,  // Z_{p^2}
    GaloisRing,         // GR(q^2, p^2) = Z_{p^2}[Y]/(Y^2 + Y + 1)
    SkewDualNumbers,    // F_q[X; sigma]/(X^2), sigma = Frobenius^s
};

struct RingSpec {
    RingKind kind = RingKind::Field;
    int p = 2;
    int r = 1;
    int s = 0;  // Frobenius exponent of sigma, dual numbers only
    int q = 2;
    int m = 1;  // composition length
    std::string name;

    int order() const { return m == 1 ? q : q * q; }
    bool commutative() const { return kind != RingKind::SkewDualNumbers || s == 0; }
};

/// The 13 supported labels: F2 F3 F4 F5 Z4 S2 Z9 S3 G4 S4 T4 Z25 S5.
const std::vector<std::string>& supported_rings();

/// \brief A finite chain ring of composition length 1 or 2, realized as lookup tables.
///
/// Element indexing is fixed:
///  - F_p, Z_{p^2}: index = integer residue.
///  - F_4: c0 + c1*w  ->  c0 + 2*c1, with w^2 = w + 1.
///  - GR(16,4): a + b*y (a, b in Z_4)  ->  a + 4*b, with y^2 = -1 - y.
///  - dual numbers a + bX (a, b in F_q)  ->  a + q*b.
class RingTable {
public:
    const RingSpec& spec() const { return spec_; }
    const std::string& name() const { return spec_.name; }
    int order() const { return order_; }
    int q() const { return spec_.q; }
    int m() const { return spec_.m; }
    bool commutative() const { return spec_.commutative(); }

    Element add(Element a, Element b) const { return add_[a * order_ + b]; }
    Element mul(Element a, Element b) const { return mul_[a * order_ + b]; }
    Element neg(Element a) const { return neg_[a]; }
    Element sub(Element a, Element b) const { return add(a, neg(b)); }
    bool is_unit(Element a) const { return unit_[a] != 0; }
    /// Two-sided inverse; throws on non-units.
    Element inv(Element a) const;

    /// Projection onto the residue field. Identity when m = 1.
    Element phi(Element a) const { return phi_[a]; }
    /// Fixed section of phi (phi(lift(x)) = x).
    Element lift(Element residue) const { return lift_[residue]; }
    /// Residue field table, or nullptr when this ring is itself a field.
    const std::shared_ptr<const RingTable>& residue_field() const { return residue_; }

    /// Generator of the radical: p for Z_{p^2} and GR, X for dual numbers. Empty for fields.
    std::optional<Element> radical_generator() const { return radical_; }

    /// Multiplicative generator of the unit group of the residue field, lifted into this ring.
    Element primitive_unit() const { return primitive_; }

    /// Generators of Aut(R), each verified to preserve both tables.
    const std::vector<ElementMap>& automorphism_generators() const { return aut_gens_; }
    /// The full automorphism group (closure of the generators). Entry 0 is the identity.
    const std::vector<ElementMap>& automorphisms() const { return aut_group_; }

    std::string format(Element a) const;
    /// Parses a whitespace-free element token. Throws Error on malformed input.
    Element parse(std::string_view token) const;

    /// Builds a table from raw operation tables. Used by build_ring.
    static RingTable from_tables(RingSpec spec, std::vector<Element> add, std::vector<Element> mul);

private:
    friend std::shared_ptr<const RingTable> build_ring(std::string_view name);

    RingSpec spec_;
    int order_ = 0;
    std::vector<Element> add_, mul_, neg_, inv_, phi_, lift_;
    std::vector<std::uint8_t> unit_;
    std::shared_ptr<const RingTable> residue_;
    std::optional<Element> radical_;
    Element primitive_ = 1;
    std::vector<ElementMap> aut_gens_;
    std::vector<ElementMap> aut_group_;
};

using RingPtr = std::shared_ptr<const RingTable>;

/// Builds one of the supported rings. Throws Error on an unknown label.
RingPtr build_ring(std::string_view name);

/// True iff `map` is a bijection preserving the addition and multiplication tables.
bool preserves_ring_structure(const RingTable& ring, const ElementMap& map);

/// Closure of a set of element permutations under composition (identity first).
std::vector<ElementMap> close_element_maps(int order, const std::vector<ElementMap>& gens);

}  // namespace hjelmslev
