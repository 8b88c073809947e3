#include "oracles.hpp"

#include <algorithm>

namespace oracle {

namespace {

using hjelmslev::RingKind;

// F_q for prime q or q = 4 (index c0 + 2 c1, w^2 = w + 1).
struct Fq {
    int q;
    int add(int a, int b) const { return q == 4 ? (a ^ b) : (a + b) % q; }
    int mul(int a, int b) const {
        if (q != 4) return a * b % q;
        int a0 = a & 1, a1 = a >> 1, b0 = b & 1, b1 = b >> 1;
        int c0 = (a0 & b0) ^ (a1 & b1);
        int c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1);
        return c0 | (c1 << 1);
    }
    int frob(int a, int times) const {
        for (int i = 0; i < times; ++i) {
            int e = a;
            // x -> x^p
            int r = 1;
            int p = q == 4 ? 2 : q;
            for (int k = 0; k < p; ++k) r = mul(r, e);
            a = r;
        }
        return a;
    }
};

}  // namespace

std::pair<int, int> ring_ops(const hjelmslev::RingSpec& spec, int a, int b) {
    switch (spec.kind) {
        case RingKind::Field: {
            Fq f{spec.q};
            return {f.add(a, b), f.mul(a, b)};
        }
        case RingKind::IntegersModSquare: {
            const int n = spec.p * spec.p;
            return {(a + b) % n, a * b % n};
        }
        case RingKind::GaloisRing: {
            const int n = spec.p * spec.p;
            const int a0 = a % n, a1 = a / n, b0 = b % n, b1 = b / n;
            const int s0 = (a0 + b0) % n, s1 = (a1 + b1) % n;
            // y^2 = -1 - y
            const int c0 = ((a0 * b0 - a1 * b1) % n + n) % n;
            const int c1 = ((a0 * b1 + a1 * b0 - a1 * b1) % n + n) % n;
            return {s0 + n * s1, c0 + n * c1};
        }
        case RingKind::SkewDualNumbers: {
            Fq f{spec.q};
            const int q = spec.q;
            const int a0 = a % q, a1 = a / q, b0 = b % q, b1 = b / q;
            const int s0 = f.add(a0, b0), s1 = f.add(a1, b1);
            // (a0 + a1 X)(b0 + b1 X) = a0 b0 + (a0 b1 + a1 sigma(b0)) X
            const int c0 = f.mul(a0, b0);
            const int c1 = f.add(f.mul(a0, b1), f.mul(a1, f.frob(b0, spec.s)));
            return {s0 + q * s1, c0 + q * c1};
        }
    }
    return {-1, -1};
}

bool on_line(const hjelmslev::RingTable& ring, const hjelmslev::Vec3& line, const hjelmslev::Vec3& point) {
    Element acc = 0;
    for (int i = 0; i < 3; ++i) acc = ring.add(acc, ring.mul(line[i], point[i]));
    return acc == 0;
}

Incidence incidence(const hjelmslev::Plane& plane) {
    Incidence inc;
    inc.points = plane.point_count();
    inc.line_points.resize(plane.line_count());
    inc.member.assign(plane.line_count(), std::vector<std::uint8_t>(plane.point_count(), 0));
    for (hjelmslev::LineId l = 0; l < plane.line_count(); ++l)
        for (PointId p = 0; p < plane.point_count(); ++p)
            if (on_line(plane.ring(), plane.line(l), plane.point(p))) {
                inc.line_points[l].push_back(p);
                inc.member[l][p] = 1;
            }
    return inc;
}

bool collinear(const Incidence& inc, PointId a, PointId b, PointId c) {
    for (const auto& row : inc.member)
        if (row[a] && row[b] && row[c]) return true;
    return false;
}

bool is_2arc(const Incidence& inc, const std::vector<PointId>& pts) {
    for (const auto& row : inc.member) {
        int n = 0;
        for (PointId p : pts) n += row[p];
        if (n > 2) return false;
    }
    return true;
}

std::size_t common_line_count(const Incidence& inc, PointId a, PointId b) {
    std::size_t n = 0;
    for (const auto& row : inc.member) n += row[a] && row[b];
    return n;
}

namespace {

void grow(const Incidence& inc, const std::vector<PointId>& universe, std::size_t from, std::vector<PointId>& cur,
          std::vector<int>& load, const std::function<bool(const std::vector<PointId>&)>& f) {
    if (!f(cur)) return;
    for (std::size_t i = from; i < universe.size(); ++i) {
        const PointId p = universe[i];
        bool ok = true;
        for (std::size_t l = 0; l < inc.member.size() && ok; ++l)
            if (inc.member[l][p] && load[l] >= 2) ok = false;
        if (!ok) continue;
        for (std::size_t l = 0; l < inc.member.size(); ++l) load[l] += inc.member[l][p];
        cur.push_back(p);
        grow(inc, universe, i + 1, cur, load, f);
        cur.pop_back();
        for (std::size_t l = 0; l < inc.member.size(); ++l) load[l] -= inc.member[l][p];
    }
}

}  // namespace

void for_each_2arc(const Incidence& inc, const std::vector<PointId>& universe,
                   const std::function<bool(const std::vector<PointId>&)>& f) {
    std::vector<PointId> cur;
    std::vector<int> load(inc.member.size(), 0);
    grow(inc, universe, 0, cur, load, f);
}

std::vector<std::vector<PointId>> complete_2arcs(const Incidence& inc) {
    std::vector<PointId> all(inc.points);
    for (PointId p = 0; p < inc.points; ++p) all[p] = p;
    std::vector<std::vector<PointId>> out;
    for_each_2arc(inc, all, [&](const std::vector<PointId>& arc) {
        std::vector<PointId> ext = arc;
        for (PointId p = 0; p < inc.points; ++p) {
            if (std::find(arc.begin(), arc.end(), p) != arc.end()) continue;
            ext.push_back(p);
            const bool ok = is_2arc(inc, ext);
            ext.pop_back();
            if (ok) return true;
        }
        out.push_back(arc);
        return true;
    });
    return out;
}

std::size_t max_2arc_within(const Incidence& inc, const std::vector<PointId>& universe) {
    std::size_t best = 0;
    for_each_2arc(inc, universe, [&](const std::vector<PointId>& arc) {
        best = std::max(best, arc.size());
        return true;
    });
    return best;
}

}  // namespace oracle
