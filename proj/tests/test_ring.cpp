#include <doctest.h>

#include <set>

#include "hjelmslev/ring.hpp"
#include "support/properties.hpp"

using namespace hjelmslev;

TEST_CASE("supported ring labels") {
    const auto& labels = supported_rings();
    CHECK(labels.size() == 13);
    for (const std::string& l : labels) CHECK(build_ring(l)->name() == l);
    CHECK_THROWS_AS(build_ring("Z26"), Error);
    CHECK_THROWS_AS(build_ring(""), Error);
}

TEST_CASE("ring axioms hold exhaustively") {
    for (const std::string& l : supported_rings()) {
        CAPTURE(l);
        const props::Report r = props::ring_axioms(l);
        for (const auto& m : r.messages) MESSAGE(m);
        CHECK(r.failures == 0);
        CHECK(r.trials > 0);
    }
}

TEST_CASE("orders and composition lengths") {
    struct Row {
        const char* label;
        int order, q, m;
    };
    const Row rows[] = {{"F2", 2, 2, 1}, {"F3", 3, 3, 1}, {"F4", 4, 4, 1}, {"F5", 5, 5, 1}, {"Z4", 4, 2, 2},
                        {"S2", 4, 2, 2}, {"Z9", 9, 3, 2}, {"S3", 9, 3, 2}, {"G4", 16, 4, 2}, {"S4", 16, 4, 2},
                        {"T4", 16, 4, 2}, {"Z25", 25, 5, 2}, {"S5", 25, 5, 2}};
    for (const Row& r : rows) {
        CAPTURE(r.label);
        const RingPtr R = build_ring(r.label);
        CHECK(R->order() == r.order);
        CHECK(R->q() == r.q);
        CHECK(R->m() == r.m);
        int units = 0;
        for (int a = 0; a < R->order(); ++a) units += R->is_unit(static_cast<Element>(a));
        CHECK(units == (r.m == 1 ? r.q - 1 : r.q * r.q - r.q));
        CHECK(R->commutative() == (std::string(r.label) != "T4"));
    }
}

TEST_CASE("worked products") {
    const RingPtr z25 = build_ring("Z25");
    CHECK(z25->mul(5, 5) == 0);
    CHECK(z25->phi(7) == 2);
    const RingPtr s5 = build_ring("S5");
    const Element x = s5->parse("X");
    CHECK(s5->mul(x, x) == 0);
    CHECK(s5->phi(s5->parse("3X+4")) == 4);
    CHECK(s5->format(s5->parse("2X+2")) == "2X+2");

    // X w = w^2 X in T4
    const RingPtr t4 = build_ring("T4");
    const Element w = t4->parse("w");
    const Element X = t4->parse("X");
    const Element w2 = t4->mul(w, w);
    CHECK(t4->mul(X, w) == t4->mul(w2, X));
    CHECK(t4->mul(X, w) != t4->mul(w, X));

    // phi(2 + y) squared agrees with phi of the square
    const RingPtr g4 = build_ring("G4");
    const Element e = g4->parse("2+y");
    const RingTable& f4 = *g4->residue_field();
    CHECK(f4.mul(g4->phi(e), g4->phi(e)) == g4->phi(g4->mul(e, e)));
    CHECK(g4->phi(e) == g4->phi(g4->parse("y")));
    CHECK(g4->phi(e) != 0);
    CHECK(g4->phi(e) != 1);
}

TEST_CASE("centre of the noncommutative ring") {
    const RingPtr t4 = build_ring("T4");
    std::set<int> centre;
    for (int a = 0; a < 16; ++a) {
        bool central = true;
        for (int b = 0; b < 16 && central; ++b)
            central = t4->mul(static_cast<Element>(a), static_cast<Element>(b)) ==
                      t4->mul(static_cast<Element>(b), static_cast<Element>(a));
        if (central) centre.insert(a);
    }
    // bX c = b c^2 X differs from c bX unless b = 0, and a X = X a forces a in F_2.
    const std::set<int> expected{0, 1};
    CHECK(centre == expected);
}

TEST_CASE("automorphism groups") {
    struct Row {
        const char* label;
        std::size_t generators, order;
    };
    const Row rows[] = {{"F2", 0, 1}, {"F3", 0, 1}, {"F4", 1, 2}, {"F5", 0, 1},  {"Z4", 0, 1},  {"Z9", 0, 1}, {"Z25", 0, 1},
                        {"S2", 0, 1}, {"S3", 1, 2}, {"S5", 1, 4}, {"S4", 2, 6}, {"G4", 1, 2}, {"T4", 1, 2}};
    for (const Row& r : rows) {
        CAPTURE(r.label);
        const RingPtr R = build_ring(r.label);
        CHECK(R->automorphism_generators().size() == r.generators);
        CHECK(R->automorphisms().size() == r.order);
        for (const ElementMap& f : R->automorphisms()) CHECK(preserves_ring_structure(*R, f));
    }
    // S5: the generator is X -> 2X
    const RingPtr s5 = build_ring("S5");
    const ElementMap& g = s5->automorphism_generators().front();
    CHECK(g[s5->parse("X")] == s5->parse("2X"));
    CHECK(g[s5->parse("3")] == s5->parse("3"));
}

TEST_CASE("non-homomorphisms are rejected") {
    const RingPtr g4 = build_ring("G4");
    // coefficientwise squaring is not additive on Z4
    ElementMap sq(16);
    for (int a = 0; a < 16; ++a) {
        const int lo = a % 4, hi = a / 4;
        sq[a] = static_cast<Element>((lo * lo) % 4 + 4 * ((hi * hi) % 4));
    }
    CHECK_FALSE(preserves_ring_structure(*g4, sq));
    ElementMap id(16);
    for (int a = 0; a < 16; ++a) id[a] = static_cast<Element>(a);
    CHECK(preserves_ring_structure(*g4, id));
}

TEST_CASE("element tokens") {
    const RingPtr z25 = build_ring("Z25");
    CHECK(z25->parse("-1") == 24);
    CHECK(z25->parse("19") == 19);
    CHECK_THROWS_AS(z25->parse("X"), Error);
    CHECK_THROWS_AS(z25->parse(""), Error);
    const RingPtr s5 = build_ring("S5");
    CHECK(s5->parse("4X+4") == s5->add(s5->parse("4X"), 4));
    CHECK_THROWS_AS(s5->parse("2Y"), Error);
    CHECK_THROWS_AS(z25->inv(5), Error);
}
