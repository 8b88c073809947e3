#include <doctest.h>

#include <random>
#include <set>

#include "hjelmslev/registry.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace hjelmslev;

namespace {

std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Canonical vectors counted directly: a point is a vector with some unit coordinate, up to unit
// scalars, so there are (#vectors with a unit coordinate) / #units of them.
std::size_t count_by_coordinates(const RingTable& R) {
    const std::size_t n = R.order();
    std::size_t free_vectors = 0, units = 0;
    for (std::size_t a = 0; a < n; ++a) units += R.is_unit(static_cast<Element>(a));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                free_vectors += R.is_unit(static_cast<Element>(a)) || R.is_unit(static_cast<Element>(b)) ||
                                R.is_unit(static_cast<Element>(c));
    return free_vectors / units;
}

}  // namespace

TEST_CASE("point, line and class counts for every ring") {
    for (const std::string& l : supported_rings()) {
        CAPTURE(l);
        const PlanePtr pl = shared_plane(l);
        const int q = pl->q(), m = pl->m();
        const std::size_t expected = (ipow(q, 3) - 1) / (q - 1) * ipow(q, 2 * (m - 1));
        CHECK(expected_point_count(q, m) == expected);
        CHECK(pl->point_count() == expected);
        CHECK(pl->line_count() == expected);
        CHECK(count_by_coordinates(pl->ring()) == expected);
        CHECK(pl->class_count() == static_cast<std::size_t>(q * q + q + 1));
        for (std::size_t c = 0; c < pl->class_count(); ++c) CHECK(pl->class_points(c).size() == ipow(q, 2 * (m - 1)));

        const std::size_t per_line = ipow(q, m - 1) * (q + 1);
        const oracle::Incidence inc = oracle::incidence(*pl);
        bool lines_ok = true, points_ok = true, matrix_ok = true, phi_ok = true;
        for (LineId ln = 0; ln < pl->line_count(); ++ln) {
            lines_ok = lines_ok && pl->points_on(ln).count() == per_line && inc.line_points[ln].size() == per_line;
            for (PointId p = 0; p < pl->point_count(); ++p) {
                const bool in = pl->incident(ln, p);
                matrix_ok = matrix_ok && in == (inc.member[ln][p] != 0) && in == pl->lines_through(p).test(ln);
                if (in && pl->base_plane())
                    phi_ok = phi_ok && pl->base_plane()->incident(pl->phi_line(ln), pl->phi_point(p));
            }
        }
        for (PointId p = 0; p < pl->point_count(); ++p) points_ok = points_ok && pl->lines_through(p).count() == per_line;
        CHECK(lines_ok);
        CHECK(points_ok);
        CHECK(matrix_ok);
        CHECK(phi_ok);
    }
}

TEST_CASE("canonical coordinates") {
    const PlanePtr pl = shared_plane("Z25");
    for (PointId p = 0; p < pl->point_count(); ++p) {
        CHECK(pl->canonical_point(pl->point(p)) == pl->point(p));
        CHECK(pl->parse_point(pl->format_point(p)) == p);
    }
    for (LineId l = 0; l < pl->line_count(); ++l) CHECK(pl->canonical_line(pl->line(l)) == pl->line(l));
    CHECK(pl->parse_point("(5:1:2)") == pl->parse_point("(10:2:4)"));
    CHECK_THROWS_AS(pl->parse_point("(5:10:15)"), Error);
    CHECK_THROWS_AS(pl->parse_point("(1:2)"), Error);
    CHECK_THROWS_AS(pl->parse_point("1:2:3"), Error);
    CHECK_THROWS_AS(pl->canonical_point({5, 0, 10}), Error);
}

TEST_CASE("common lines against an incidence scan") {
    for (const char* l : {"Z25", "S5", "G4", "T4", "Z4", "F5"}) {
        CAPTURE(l);
        const PlanePtr pl = shared_plane(l);
        const oracle::Incidence inc = oracle::incidence(*pl);
        std::mt19937_64 rng(11);
        for (int t = 0; t < 300; ++t) {
            const PointId a = static_cast<PointId>(rng() % pl->point_count());
            // every other trial takes a neighbor so both cases are covered
            const auto& cls = pl->class_points(pl->class_of(a));
            const PointId b = t % 2 ? cls[rng() % cls.size()] : static_cast<PointId>(rng() % pl->point_count());
            if (a == b) {
                CHECK_THROWS_AS(pl->common_lines(a, b), Error);
                continue;
            }
            const Bitset cl = pl->common_lines(a, b);
            CHECK(cl.count() == oracle::common_line_count(inc, a, b));
            CHECK(cl.any());
            CHECK((cl.count() == 1) == !pl->neighbors(a, b));
        }
    }
}

TEST_CASE("neighbor pairs share the same number of common lines in both uniform q = 5 planes") {
    const PlanePtr z = shared_plane("Z25");
    const PlanePtr s = shared_plane("S5");
    const oracle::Incidence iz = oracle::incidence(*z);
    const oracle::Incidence is = oracle::incidence(*s);
    const PointId a = z->parse_point("(1:0:0)"), b = z->parse_point("(1:5:0)"), c = z->parse_point("(0:1:0)");
    CHECK(z->neighbors(a, b));
    CHECK_FALSE(z->neighbors(a, c));
    CHECK(z->common_lines(a, c).count() == 1);
    const std::size_t count = oracle::common_line_count(iz, a, b);
    CHECK(count > 1);
    CHECK(z->common_lines(a, b).count() == count);
    for (PointId p = 0; p < s->point_count(); p += 37)
        for (PointId q : s->class_points(s->class_of(p)))
            if (q != p) CHECK(oracle::common_line_count(is, p, q) == count);

    const PointId u = s->parse_point("(1:X+1:4X)"), v = s->parse_point("(1:4X+1:4X)");
    // reducing the coordinates mod X gives (1:1:0) for both
    CHECK(s->phi_point(u) == s->base_plane()->parse_point("(1:1:0)"));
    CHECK(s->phi_point(v) == s->base_plane()->parse_point("(1:1:0)"));
    CHECK(s->neighbors(u, v));
}

TEST_CASE("collinearity examples") {
    const PlanePtr f5 = shared_plane("F5");
    CHECK(f5->collinear(f5->parse_point("(1:0:0)"), f5->parse_point("(0:1:0)"), f5->parse_point("(1:1:0)")));
    const PlanePtr z = shared_plane("Z25");
    CHECK_FALSE(z->collinear(z->parse_point("(1:1:4)"), z->parse_point("(1:19:19)"), z->parse_point("(1:4:1)")));
    const PointId p = z->parse_point("(1:0:0)");
    CHECK_THROWS_AS(z->collinear(p, p, z->parse_point("(0:1:0)")), Error);
}

TEST_CASE("unit determinant triples are never collinear") {
    props::Report r = props::unit_determinant_triples("Z25", 6000, 3);
    r += props::unit_determinant_triples("S5", 4000, 4);
    for (const auto& m : r.messages) MESSAGE(m);
    CHECK(r.failures == 0);
    CHECK(r.trials >= 10000);
}

TEST_CASE("restriction to a neighbor class is an affine plane") {
    for (const char* l : {"Z4", "S2", "Z9", "S3", "G4", "S4", "T4", "Z25", "S5"}) {
        CAPTURE(l);
        const PlanePtr pl = shared_plane(l);
        const std::size_t q = pl->q();
        for (std::size_t c = 0; c < pl->class_count(); ++c) {
            const ClassRestriction rc = pl->restrict_class(c);
            CHECK(rc.points.size() == q * q);
            CHECK(rc.trace_lines.size() == q * q + q);
            std::set<std::size_t> sizes;
            for (const auto& t : rc.trace_lines) sizes.insert(t.size());
            CHECK(sizes == std::set<std::size_t>{q});
            // two points of the class lie on exactly one trace
            bool unique = true;
            for (std::size_t i = 0; i < rc.points.size() && unique; ++i)
                for (std::size_t j = i + 1; j < rc.points.size(); ++j) {
                    int n = 0;
                    for (const auto& t : rc.trace_lines)
                        n += std::count(t.begin(), t.end(), rc.points[i]) && std::count(t.begin(), t.end(), rc.points[j]);
                    unique = unique && n == 1;
                }
            CHECK(unique);
        }
    }
    CHECK(shared_plane("Z9")->restrict_class(0).trace_lines.size() == 12);
    CHECK_THROWS_AS(shared_plane("F5")->restrict_class(0), Error);
}

TEST_CASE("field planes") {
    const PlanePtr f5 = shared_plane("F5");
    CHECK(f5->point_count() == 31);
    for (LineId l = 0; l < f5->line_count(); ++l) CHECK(f5->points_on(l).count() == 6);
    CHECK(f5->base_plane() == nullptr);
    CHECK(shared_plane("Z25")->base_plane()->point_count() == 31);
}

TEST_CASE("on-demand third points match the materialized closure") {
    const PlanePtr a = shared_plane("S5");
    const PlanePtr b = build_plane("S5", PlaneOptions{false});
    CHECK_FALSE(b->pair_closure_materialized());
    std::vector<Word> x(a->words()), y(a->words());
    std::mt19937_64 rng(5);
    for (int t = 0; t < 500; ++t) {
        const PointId p = static_cast<PointId>(rng() % a->point_count());
        const PointId q = static_cast<PointId>(rng() % a->point_count());
        if (p == q) continue;
        a->third_points_into(p, q, x);
        b->third_points_into(p, q, y);
        CHECK(x == y);
        const auto span = a->third_points(p, q);
        CHECK(std::equal(span.begin(), span.end(), x.begin()));
        Bitset on(a->point_count());
        a->common_lines(p, q).for_each([&](std::size_t l) { on |= a->points_on(static_cast<LineId>(l)); });
        on.reset(p);
        on.reset(q);
        CHECK(std::equal(on.words().begin(), on.words().end(), x.begin()));
    }
}
