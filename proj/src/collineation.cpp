#include "hjelmslev/collineation.hpp"

#include <map>

namespace hjelmslev {

Matrix3 identity_matrix() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

Matrix3 parse_matrix(const RingTable& ring, const std::array<std::string, 9>& entries) {
    Matrix3 m{};
    for (std::size_t i = 0; i < 9; ++i) m[i] = ring.parse(entries[i]);
    return m;
}

Vec3 apply(const RingTable& ring, const Collineation& c, const Vec3& v) {
    const ElementMap& sigma = ring.automorphisms().at(c.aut);
    const Vec3 w{sigma[v[0]], sigma[v[1]], sigma[v[2]]};
    Vec3 out{};
    for (int i = 0; i < 3; ++i) {
        Element s = 0;
        for (int j = 0; j < 3; ++j) s = ring.add(s, ring.mul(c.matrix[3 * i + j], w[j]));
        out[i] = s;
    }
    return out;
}

bool is_invertible(const RingTable& ring, const Matrix3& m) {
    const RingTable& f = ring.residue_field() ? *ring.residue_field() : ring;
    Matrix3 r{};
    for (std::size_t i = 0; i < 9; ++i) r[i] = ring.phi(m[i]);
    auto mul = [&](Element a, Element b) { return f.mul(a, b); };
    auto sub = [&](Element a, Element b) { return f.sub(a, b); };
    const Element d0 = mul(r[0], sub(mul(r[4], r[8]), mul(r[5], r[7])));
    const Element d1 = mul(r[1], sub(mul(r[3], r[8]), mul(r[5], r[6])));
    const Element d2 = mul(r[2], sub(mul(r[3], r[7]), mul(r[4], r[6])));
    return f.add(sub(d0, d1), d2) != 0;
}

Permutation as_permutation(const Plane& plane, const Collineation& c) {
    if (!is_invertible(plane.ring(), c.matrix)) throw Error("collineation matrix is not invertible");
    std::vector<PointId> img(plane.point_count());
    for (PointId p = 0; p < plane.point_count(); ++p) img[p] = plane.point_id(apply(plane.ring(), c, plane.point(p)));
    return Permutation(std::move(img));
}

Collineation coordinate_rotation() {
    Collineation c;
    c.matrix = {0, 1, 0, 0, 0, 1, 1, 0, 0};
    return c;
}

std::vector<Collineation> collineation_generators(const Plane& plane, bool linear_only) {
    const RingTable& R = plane.ring();
    std::vector<Collineation> gens;
    gens.push_back(coordinate_rotation());

    Collineation t;
    t.matrix = identity_matrix();
    t.matrix[1] = 1;
    gens.push_back(t);

    Collineation d;
    d.matrix = identity_matrix();
    d.matrix[0] = R.primitive_unit();
    if (d.matrix[0] != 1) gens.push_back(d);

    if (const auto rad = R.radical_generator()) {
        Collineation tr;
        tr.matrix = identity_matrix();
        tr.matrix[1] = *rad;
        gens.push_back(tr);
        Collineation dr;
        dr.matrix = identity_matrix();
        dr.matrix[0] = R.add(1, *rad);
        gens.push_back(dr);
    }

    if (!linear_only) {
        const auto& auts = R.automorphisms();
        for (const ElementMap& g : R.automorphism_generators()) {
            for (std::size_t i = 0; i < auts.size(); ++i)
                if (auts[i] == g) {
                    Collineation a;
                    a.aut = i;
                    gens.push_back(a);
                }
        }
    }
    return gens;
}

std::optional<std::uint64_t> expected_collineation_order(const Plane& plane, bool linear_only) {
    const RingTable& R = plane.ring();
    if (!R.commutative()) return std::nullopt;
    const std::uint64_t q = static_cast<std::uint64_t>(R.q());
    const std::uint64_t q3 = q * q * q;
    std::uint64_t gl = checked_mul(checked_mul(q3 - 1, q3 - q), q3 - q * q);
    std::uint64_t units = q - 1;
    if (R.m() == 2) {
        gl = checked_mul(gl, q3 * q3 * q3);
        units = q * q - q;
    }
    std::uint64_t order = gl / units;
    if (!linear_only) order = checked_mul(order, R.automorphisms().size());
    return order;
}

PermGroup collineation_group(const Plane& plane, bool linear_only) {
    std::vector<Permutation> perms;
    for (const Collineation& c : collineation_generators(plane, linear_only)) perms.push_back(as_permutation(plane, c));
    PermGroup group(plane.point_count(), std::move(perms));
    if (const auto expected = expected_collineation_order(plane, linear_only); expected && *expected != group.order())
        throw Error("collineation generators produce order " + std::to_string(group.order()) + ", expected " +
                    std::to_string(*expected));
    return group;
}

bool preserves_incidence(const Plane& plane, const Permutation& g) {
    std::map<std::vector<Word>, LineId> by_points;
    for (LineId l = 0; l < plane.line_count(); ++l) {
        const auto w = plane.points_on(l).words();
        by_points.emplace(std::vector<Word>(w.begin(), w.end()), l);
    }
    for (LineId l = 0; l < plane.line_count(); ++l) {
        Bitset img(plane.point_count());
        plane.points_on(l).for_each([&](std::size_t p) { img.set(g[static_cast<PointId>(p)]); });
        const auto w = img.words();
        if (!by_points.count(std::vector<Word>(w.begin(), w.end()))) return false;
    }
    return true;
}

bool preserves_neighbor_classes(const Plane& plane, const Permutation& g) {
    for (std::size_t c = 0; c < plane.class_count(); ++c) {
        const auto& pts = plane.class_points(c);
        const std::size_t target = plane.class_of(g[pts.front()]);
        for (PointId p : pts)
            if (plane.class_of(g[p]) != target) return false;
    }
    return true;
}

}  // namespace hjelmslev
