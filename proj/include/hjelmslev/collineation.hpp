#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hjelmslev/perm_group.hpp"
#include "hjelmslev/plane.hpp"

namespace hjelmslev {

/// Row-major 3x3 matrix over the ring.
using Matrix3 = std::array<Element, 9>;

/// Semilinear collineation <v> -> <M * sigma(v)>, sigma = ring.automorphisms()[aut].
struct Collineation {
    Matrix3 matrix{1, 0, 0, 0, 1, 0, 0, 0, 1};
    std::size_t aut = 0;

    bool linear() const { return aut == 0; }
};

Matrix3 identity_matrix();
/// Parses nine ring elements in row-major order.
Matrix3 parse_matrix(const RingTable& ring, const std::array<std::string, 9>& entries);

/// M * sigma(v) (not normalized).
Vec3 apply(const RingTable& ring, const Collineation& c, const Vec3& v);

/// True iff phi(M) is invertible over the residue field.
bool is_invertible(const RingTable& ring, const Matrix3& m);

/// The induced permutation of point ids. Throws Error for a non-invertible matrix.
Permutation as_permutation(const Plane& plane, const Collineation& c);

/// Cyclic rotation of the coordinate axes, (x:y:z) -> (y:z:x).
Collineation coordinate_rotation();

/// Generators of PGammaL(3,R): a 3-cycle permutation matrix, the transvections I + E12 and
/// I + t*E12 (t generating the radical), diag(u,1,1) with phi(u) primitive, diag(1+t,1,1), and one
/// pure ring automorphism per automorphism generator. With linear_only the automorphisms are left out.
std::vector<Collineation> collineation_generators(const Plane& plane, bool linear_only = false);

/// |PGammaL(3,R)| from the closed form; nullopt for the noncommutative ring T4.
std::optional<std::uint64_t> expected_collineation_order(const Plane& plane, bool linear_only = false);

/// The collineation group as a permutation group on points. Throws Error if a closed form is
/// known and the Schreier-Sims order disagrees with it.
PermGroup collineation_group(const Plane& plane, bool linear_only = false);

/// True iff g maps every line's point set onto some line's point set.
bool preserves_incidence(const Plane& plane, const Permutation& g);
/// True iff g maps neighbor classes onto neighbor classes.
bool preserves_neighbor_classes(const Plane& plane, const Permutation& g);

}  // namespace hjelmslev
