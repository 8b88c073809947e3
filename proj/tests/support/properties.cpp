#include "properties.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "hjelmslev/arc.hpp"
#include "hjelmslev/registry.hpp"
#include "hjelmslev/search.hpp"
#include "oracles.hpp"

namespace props {

using namespace hjelmslev;

void Report::fail(std::string msg) {
    ++failures;
    if (messages.size() < 5) messages.push_back(std::move(msg));
}

Report& Report::operator+=(const Report& o) {
    trials += o.trials;
    failures += o.failures;
    skipped += o.skipped;
    positives += o.positives;
    for (const auto& m : o.messages)
        if (messages.size() < 5) messages.push_back(m);
    return *this;
}

Report ring_axioms(const std::string& label) {
    Report r;
    const RingPtr ring = build_ring(label);
    const RingTable& R = *ring;
    const int n = R.order();
    auto check = [&](bool cond, const std::string& what) {
        ++r.trials;
        if (!cond) r.fail(label + ": " + what);
    };
    auto E = [](int x) { return static_cast<Element>(x); };

    bool noncommuting_pair = false;
    for (int a = 0; a < n; ++a) {
        check(R.add(E(a), 0) == a && R.mul(E(a), 1) == a && R.mul(1, E(a)) == a, "identity elements");
        check(R.mul(E(a), 0) == 0 && R.mul(0, E(a)) == 0, "zero absorbs");
        check(R.add(E(a), R.neg(E(a))) == 0, "negative");
        check(R.parse(R.format(E(a))) == a, "format/parse round trip of " + R.format(E(a)));
        bool has_inverse = false;
        for (int b = 0; b < n; ++b) {
            const auto [s, p] = oracle::ring_ops(R.spec(), a, b);
            check(R.add(E(a), E(b)) == s, "addition formula");
            check(R.mul(E(a), E(b)) == p, "multiplication formula");
            check(R.add(E(a), E(b)) == R.add(E(b), E(a)), "additive commutativity");
            if (R.mul(E(a), E(b)) != R.mul(E(b), E(a))) noncommuting_pair = true;
            if (R.mul(E(a), E(b)) == 1 && R.mul(E(b), E(a)) == 1) has_inverse = true;
            for (int c = 0; c < n; ++c) {
                const Element x = E(a), y = E(b), z = E(c);
                if (R.add(R.add(x, y), z) != R.add(x, R.add(y, z))) r.fail(label + ": additive associativity");
                if (R.mul(R.mul(x, y), z) != R.mul(x, R.mul(y, z))) r.fail(label + ": multiplicative associativity");
                if (R.mul(x, R.add(y, z)) != R.add(R.mul(x, y), R.mul(x, z))) r.fail(label + ": left distributivity");
                if (R.mul(R.add(x, y), z) != R.add(R.mul(x, z), R.mul(y, z))) r.fail(label + ": right distributivity");
                r.trials += 4;
            }
        }
        check(R.is_unit(E(a)) == has_inverse, "unit flag of " + R.format(E(a)));
        if (has_inverse) check(R.mul(E(a), R.inv(E(a))) == 1 && R.mul(R.inv(E(a)), E(a)) == 1, "inverse");
    }
    check(noncommuting_pair == !R.commutative(), "commutativity matches the ring kind");

    if (R.m() == 2) {
        const RingTable& F = *R.residue_field();
        const Element t = *R.radical_generator();
        for (int a = 0; a < n; ++a) {
            // every element is a unit, a unit multiple of the radical generator, or zero
            bool classified = R.is_unit(E(a)) || a == 0;
            for (int u = 0; u < n && !classified; ++u)
                if (R.is_unit(E(u)) && R.mul(E(u), t) == a) classified = true;
            check(classified, "chain condition for " + R.format(E(a)));
            check((R.phi(E(a)) == 0) == !R.is_unit(E(a)), "kernel of phi is the radical");
            for (int b = 0; b < n; ++b) {
                check(R.phi(R.add(E(a), E(b))) == F.add(R.phi(E(a)), R.phi(E(b))), "phi additive");
                check(R.phi(R.mul(E(a), E(b))) == F.mul(R.phi(E(a)), R.phi(E(b))), "phi multiplicative");
                if (!R.is_unit(E(a)) && !R.is_unit(E(b))) check(R.mul(E(a), E(b)) == 0, "radical squares to zero");
            }
        }
        for (int x = 0; x < F.order(); ++x) {
            check(R.phi(R.lift(E(x))) == x, "phi after lift");
            for (int y = 0; y < F.order(); ++y)
                check(R.phi(R.mul(R.lift(E(x)), R.lift(E(y)))) == F.mul(E(x), E(y)), "lift products");
        }
    }

    for (const ElementMap& f : R.automorphisms()) {
        bool ok = f.size() == static_cast<std::size_t>(n) && f[0] == 0 && f[1] == 1;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b)
                ok = f[R.add(E(a), E(b))] == R.add(f[a], f[b]) && f[R.mul(E(a), E(b))] == R.mul(f[a], f[b]);
        std::set<Element> image(f.begin(), f.end());
        check(ok && image.size() == static_cast<std::size_t>(n), "automorphism preserves the tables");
    }
    return r;
}

namespace {

std::string describe(const Plane& pl, const std::vector<PointId>& pts) {
    std::ostringstream os;
    for (PointId p : pts) os << pl.format_point(p) << ' ';
    return os.str();
}

PointId pick(const Bitset& b, std::mt19937_64& rng) {
    const auto v = b.to_vector();
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

}  // namespace

Report candidate_walk(const std::string& label, std::uint64_t steps, std::uint64_t seed) {
    Report r;
    const PlanePtr plane = shared_plane(label);
    SearchState st(*plane);
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < steps; ++i) {
        const bool can_extend = st.candidates().any();
        const bool back = st.depth() > 0 && (!can_extend || rng() % 4 == 0);
        if (back)
            st.backtrack();
        else
            st.extend(pick(st.candidates(), rng));
        const Arc arc(plane, st.prefix());
        ++r.trials;
        if (!(st.candidates() == candidate_mask(arc))) r.fail(label + ": candidate mismatch at " + describe(*plane, arc.points()));
        if (!can_extend && !back) r.fail(label + ": walk stuck");
    }
    return r;
}

Report merged_feasibility_trials(const std::string& label, std::uint64_t trials, std::uint64_t seed) {
    Report r;
    const PlanePtr plane = shared_plane(label);
    const std::size_t n = plane->point_count();
    std::mt19937_64 rng(seed);
    SearchState st(*plane);
    while (r.trials < trials) {
        st.reset();
        const std::size_t depth = rng() % 9;
        while (st.depth() < depth && st.candidates().count() >= 4) st.extend(pick(st.candidates(), rng));
        const std::vector<PointId> prefix = st.prefix();
        if (st.candidates().count() < 4) continue;

        // Half of the extensions come from the candidates so both outcomes are frequent.
        std::array<PointId, 4> ext{};
        std::set<PointId> used(prefix.begin(), prefix.end());
        for (std::size_t k = 0; k < 4;) {
            const PointId p = rng() % 2 ? pick(st.candidates(), rng) : static_cast<PointId>(rng() % n);
            if (used.insert(p).second) ext[k++] = p;
        }
        std::vector<PointId> all = prefix;
        all.insert(all.end(), ext.begin(), ext.end());
        const bool direct = max_line_multiplicity(Arc(plane, all)) <= 2;
        const bool merged = merged_feasibility(*plane, prefix, ext);
        const MergeTables tables(*plane, prefix, ext);
        const bool table = tables.merged_feasibility(0, 1, 2, 3);
        ++r.trials;
        r.positives += direct;
        if (merged != direct || table != direct) r.fail(label + ": merged feasibility disagrees on " + describe(*plane, all));
    }
    return r;
}

Report minimal_image_invariance(const std::string& label, std::uint64_t trials, std::uint64_t seed) {
    Report r;
    const PlanePtr plane = shared_plane(label);
    const auto group = shared_collineation_group(label);
    MinimalImage images(*group);
    std::mt19937_64 rng(seed);
    while (r.trials < trials) {
        const std::size_t k = 1 + rng() % 5;
        std::set<PointId> s;
        while (s.size() < k) s.insert(static_cast<PointId>(rng() % plane->point_count()));
        const std::vector<PointId> set(s.begin(), s.end());
        const Permutation g = group->chain().random_element(rng);
        const std::vector<PointId> moved = apply_to_set(g, set);
        const auto a = images.image(set);
        const auto b = images.image(moved);
        if (!a || !b) {
            ++r.skipped;
            continue;
        }
        ++r.trials;
        if (*a != *b) r.fail(label + ": minimal images differ for " + describe(*plane, set));
        // the image lies in the orbit and is not larger than the set itself
        if (*a > set) r.fail(label + ": minimal image larger than the set");
    }
    return r;
}

Report unit_determinant_triples(const std::string& label, std::uint64_t trials, std::uint64_t seed) {
    Report r;
    const PlanePtr plane = shared_plane(label);
    const RingTable& R = plane->ring();
    const oracle::Incidence inc = oracle::incidence(*plane);
    std::mt19937_64 rng(seed);
    auto det = [&](const Vec3& u, const Vec3& v, const Vec3& w) {
        // columns u, v, w
        auto m3 = [&](Element a, Element b, Element c) { return R.mul(R.mul(a, b), c); };
        Element pos = R.add(R.add(m3(u[0], v[1], w[2]), m3(v[0], w[1], u[2])), m3(w[0], u[1], v[2]));
        Element neg = R.add(R.add(m3(w[0], v[1], u[2]), m3(u[0], w[1], v[2])), m3(v[0], u[1], w[2]));
        return R.sub(pos, neg);
    };
    while (r.trials < trials) {
        const auto n = static_cast<PointId>(plane->point_count());
        const PointId a = static_cast<PointId>(rng() % n), b = static_cast<PointId>(rng() % n), c = static_cast<PointId>(rng() % n);
        if (a == b || b == c || a == c) continue;
        if (!R.is_unit(det(plane->point(a), plane->point(b), plane->point(c)))) {
            ++r.skipped;
            continue;
        }
        ++r.trials;
        if (plane->collinear(a, b, c) || oracle::collinear(inc, a, b, c))
            r.fail(label + ": unit determinant but collinear " + describe(*plane, {a, b, c}));
    }
    return r;
}

}  // namespace props
