#include "hjelmslev/plane.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace hjelmslev {

std::size_t expected_point_count(int q, int m) {
    std::size_t n = static_cast<std::size_t>(q * q + q + 1);
    for (int i = 1; i < m; ++i) n *= static_cast<std::size_t>(q * q);
    return n;
}

Plane::Plane(RingPtr ring, PlaneOptions options) : ring_(std::move(ring)) {
    const RingTable& R = *ring_;
    const int n = R.order();
    point_lookup_.assign(static_cast<std::size_t>(n) * n * n, -1);
    line_lookup_.assign(static_cast<std::size_t>(n) * n * n, -1);

    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                const Vec3 v{static_cast<Element>(x), static_cast<Element>(y), static_cast<Element>(z)};
                if (!R.is_unit(v[0]) && !R.is_unit(v[1]) && !R.is_unit(v[2])) continue;
                if (canonical_point(v) == v) {
                    point_lookup_[coord_key(v)] = static_cast<std::int32_t>(points_.size());
                    points_.push_back(v);
                }
                if (canonical_line(v) == v) {
                    line_lookup_[coord_key(v)] = static_cast<std::int32_t>(lines_.size());
                    lines_.push_back(v);
                }
            }

    const std::size_t np = points_.size(), nl = lines_.size();
    words_ = words_for(np);
    line_points_.assign(nl, Bitset(np));
    point_lines_.assign(np, Bitset(nl));
    for (std::size_t l = 0; l < nl; ++l) {
        const Vec3& a = lines_[l];
        for (std::size_t p = 0; p < np; ++p) {
            const Vec3& v = points_[p];
            const Element s = R.add(R.add(R.mul(a[0], v[0]), R.mul(a[1], v[1])), R.mul(a[2], v[2]));
            if (s == 0) {
                line_points_[l].set(p);
                point_lines_[p].set(l);
            }
        }
    }

    phi_point_.resize(np);
    phi_line_.resize(nl);
    if (R.m() == 2) {
        base_ = build_plane(R.residue_field());
        for (std::size_t p = 0; p < np; ++p) {
            const Vec3& v = points_[p];
            phi_point_[p] = base_->point_id({R.phi(v[0]), R.phi(v[1]), R.phi(v[2])});
        }
        for (std::size_t l = 0; l < nl; ++l) {
            const Vec3& a = lines_[l];
            phi_line_[l] = base_->line_id({R.phi(a[0]), R.phi(a[1]), R.phi(a[2])});
        }
        point_class_.assign(phi_point_.begin(), phi_point_.end());
        class_points_.assign(base_->point_count(), {});
    } else {
        for (std::size_t p = 0; p < np; ++p) phi_point_[p] = static_cast<PointId>(p);
        for (std::size_t l = 0; l < nl; ++l) phi_line_[l] = static_cast<LineId>(l);
        point_class_.assign(phi_point_.begin(), phi_point_.end());
        class_points_.assign(np, {});
    }
    for (std::size_t p = 0; p < np; ++p) class_points_[point_class_[p]].push_back(static_cast<PointId>(p));

    if (options.materialize_pair_closure && np > 1) {
        pair_closure_.assign(np * (np - 1) / 2 * words_, 0);
        for (PointId p = 0; p < np; ++p)
            for (PointId q = p + 1; q < np; ++q) {
                Word* out = pair_closure_.data() + triangle_index(p, q) * words_;
                third_points_into(p, q, std::span<Word>(out, words_));
            }
    }
}

std::size_t Plane::coord_key(const Vec3& v) const {
    const std::size_t n = static_cast<std::size_t>(ring_->order());
    return (v[0] * n + v[1]) * n + v[2];
}

Vec3 Plane::canonical_point(const Vec3& v) const {
    const RingTable& R = *ring_;
    for (int i = 0; i < 3; ++i) {
        if (!R.is_unit(v[i])) continue;
        const Element u = R.inv(v[i]);
        return {R.mul(v[0], u), R.mul(v[1], u), R.mul(v[2], u)};
    }
    throw Error("coordinate triple has no unit coordinate");
}

Vec3 Plane::canonical_line(const Vec3& a) const {
    const RingTable& R = *ring_;
    for (int i = 0; i < 3; ++i) {
        if (!R.is_unit(a[i])) continue;
        const Element u = R.inv(a[i]);
        return {R.mul(u, a[0]), R.mul(u, a[1]), R.mul(u, a[2])};
    }
    throw Error("coordinate triple has no unit coordinate");
}

PointId Plane::point_id(const Vec3& v) const {
    for (Element e : v)
        if (e >= ring_->order()) throw Error("coordinate out of range");
    return static_cast<PointId>(point_lookup_[coord_key(canonical_point(v))]);
}

LineId Plane::line_id(const Vec3& a) const {
    for (Element e : a)
        if (e >= ring_->order()) throw Error("coordinate out of range");
    return static_cast<LineId>(line_lookup_[coord_key(canonical_line(a))]);
}

Bitset Plane::common_lines(PointId p, PointId q) const {
    if (p == q) throw Error("common_lines requires distinct points");
    return point_lines_[p] & point_lines_[q];
}

bool Plane::collinear(PointId a, PointId b, PointId c) const {
    if (a == b || a == c || b == c) throw Error("collinear requires pairwise distinct points");
    const auto wa = point_lines_[a].words(), wb = point_lines_[b].words(), wc = point_lines_[c].words();
    for (std::size_t i = 0; i < wa.size(); ++i)
        if (wa[i] & wb[i] & wc[i]) return true;
    return false;
}

std::size_t Plane::triangle_index(PointId p, PointId q) const {
    if (p > q) std::swap(p, q);
    const std::size_t n = points_.size();
    return static_cast<std::size_t>(p) * (2 * n - p - 1) / 2 + (q - p - 1);
}

std::span<const Word> Plane::third_points(PointId p, PointId q) const {
    return {pair_closure_.data() + triangle_index(p, q) * words_, words_};
}

void Plane::third_points_into(PointId p, PointId q, std::span<Word> out) const {
    std::fill(out.begin(), out.end(), Word{0});
    const Bitset common = common_lines(p, q);
    common.for_each([&](std::size_t l) {
        const auto w = line_points_[l].words();
        for (std::size_t i = 0; i < words_; ++i) out[i] |= w[i];
    });
    out[p >> 6] &= ~(Word{1} << (p & 63));
    out[q >> 6] &= ~(Word{1} << (q & 63));
}

ClassRestriction Plane::restrict_class(std::size_t class_id) const {
    if (m() != 2) throw Error("restrict_class requires a ring of composition length 2");
    if (class_id >= class_points_.size()) throw Error("class id out of range");
    ClassRestriction out;
    out.points = class_points_[class_id];
    Bitset members(points_.size());
    for (PointId p : out.points) members.set(p);
    std::set<std::vector<PointId>> traces;
    for (const Bitset& l : line_points_) {
        const Bitset t = l & members;
        if (t.count() >= 1) traces.insert(t.to_vector());
    }
    out.trace_lines.assign(traces.begin(), traces.end());
    return out;
}

std::string Plane::format_point(PointId p) const {
    const Vec3& v = points_[p];
    return "(" + ring_->format(v[0]) + ":" + ring_->format(v[1]) + ":" + ring_->format(v[2]) + ")";
}

std::string Plane::format_line(LineId l) const {
    const Vec3& a = lines_[l];
    return "[" + ring_->format(a[0]) + ":" + ring_->format(a[1]) + ":" + ring_->format(a[2]) + "]";
}

PointId Plane::parse_point(std::string_view text) const {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s.push_back(c);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw Error("malformed point '" + std::string(text) + "'");
    const std::string body = s.substr(1, s.size() - 2);
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t c = body.find(':', start);
        parts.push_back(body.substr(start, c == std::string::npos ? std::string::npos : c - start));
        if (c == std::string::npos) break;
        start = c + 1;
    }
    if (parts.size() != 3) throw Error("point '" + std::string(text) + "' does not have three coordinates");
    Vec3 v{};
    for (int i = 0; i < 3; ++i) v[i] = ring_->parse(parts[i]);
    return point_id(v);
}

PlanePtr build_plane(const RingPtr& ring, PlaneOptions options) {
    if (!ring || ring->m() < 1 || ring->m() > 2) throw Error("unsupported ring for plane construction");
    return std::make_shared<const Plane>(ring, options);
}

PlanePtr build_plane(std::string_view ring_name, PlaneOptions options) {
    return build_plane(build_ring(ring_name), options);
}

}  // namespace hjelmslev
