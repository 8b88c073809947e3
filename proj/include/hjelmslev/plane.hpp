#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hjelmslev/bitset.hpp"
#include "hjelmslev/ring.hpp"

namespace hjelmslev {

using PointId = std::uint32_t;
using LineId = std::uint32_t;

/// Coordinates of a point (column vector) or a line (row vector) over the ring.
using Vec3 = std::array<Element, 3>;

struct PlaneOptions {
    /// Precompute, for every point pair, the union of their common lines minus the pair.
    /// About 31 MB for the 775-point planes. When false the union is formed on demand.
    bool materialize_pair_closure = true;
};

/// Induced structure of PHG(2,R) on one point neighbor class.
struct ClassRestriction {
    std::vector<PointId> points;
    /// Distinct nonempty traces L ∩ class, each sorted.
    std::vector<std::vector<PointId>> trace_lines;
};

/// \brief The projective Hjelmslev plane PHG(2,R) (PG(2,F_q) when R is a field).
///
/// Points are free rank-1 right submodules of R^3, stored as column vectors whose first unit
/// coordinate is 1. Lines are row vectors normalized the same way from the left. A point v lies on
/// a line a iff a[0]v[0] + a[1]v[1] + a[2]v[2] = 0.
class Plane {
public:
    Plane(RingPtr ring, PlaneOptions options = {});

    const RingTable& ring() const { return *ring_; }
    const RingPtr& ring_ptr() const { return ring_; }
    int q() const { return ring_->q(); }
    int m() const { return ring_->m(); }

    std::size_t point_count() const { return points_.size(); }
    std::size_t line_count() const { return lines_.size(); }
    std::size_t words() const { return words_; }

    const Vec3& point(PointId p) const { return points_[p]; }
    const Vec3& line(LineId l) const { return lines_[l]; }

    /// Right-normalizes v. Throws Error when v has no unit coordinate.
    Vec3 canonical_point(const Vec3& v) const;
    Vec3 canonical_line(const Vec3& a) const;
    PointId point_id(const Vec3& v) const;
    LineId line_id(const Vec3& a) const;
    bool incident(LineId l, PointId p) const { return line_points_[l].test(p); }

    const Bitset& points_on(LineId l) const { return line_points_[l]; }
    const Bitset& lines_through(PointId p) const { return point_lines_[p]; }

    /// Lines through both points. Throws Error when p == q.
    Bitset common_lines(PointId p, PointId q) const;
    /// True iff some line passes through all three (pairwise distinct) points.
    bool collinear(PointId a, PointId b, PointId c) const;
    /// True iff the images under phi coincide.
    bool neighbors(PointId a, PointId b) const { return point_class_[a] == point_class_[b]; }

    /// Points on any common line of p and q, excluding p and q themselves.
    /// Requires a materialized pair closure.
    std::span<const Word> third_points(PointId p, PointId q) const;
    /// Same set written into `out` (words() entries); works with or without materialization.
    void third_points_into(PointId p, PointId q, std::span<Word> out) const;
    bool pair_closure_materialized() const { return !pair_closure_.empty(); }

    std::size_t class_count() const { return class_points_.size(); }
    std::size_t class_of(PointId p) const { return point_class_[p]; }
    const std::vector<PointId>& class_points(std::size_t c) const { return class_points_[c]; }

    /// PG(2,F_q) for m = 2; nullptr for fields.
    const std::shared_ptr<const Plane>& base_plane() const { return base_; }
    PointId phi_point(PointId p) const { return phi_point_[p]; }
    LineId phi_line(LineId l) const { return phi_line_[l]; }

    /// Induced incidence on one neighbor class. Throws Error for m = 1.
    ClassRestriction restrict_class(std::size_t class_id) const;

    std::string format_point(PointId p) const;
    std::string format_line(LineId l) const;
    /// Parses "(x:y:z)" and returns the canonical point. Throws Error on bad input.
    PointId parse_point(std::string_view text) const;

private:
    std::size_t triangle_index(PointId p, PointId q) const;
    std::size_t coord_key(const Vec3& v) const;

    RingPtr ring_;
    std::size_t words_ = 0;
    std::vector<Vec3> points_, lines_;
    std::vector<std::int32_t> point_lookup_, line_lookup_;
    std::vector<Bitset> line_points_, point_lines_;
    std::vector<Word> pair_closure_;
    std::vector<std::uint32_t> point_class_;
    std::vector<std::vector<PointId>> class_points_;
    std::shared_ptr<const Plane> base_;
    std::vector<PointId> phi_point_;
    std::vector<LineId> phi_line_;
};

using PlanePtr = std::shared_ptr<const Plane>;

PlanePtr build_plane(const RingPtr& ring, PlaneOptions options = {});
PlanePtr build_plane(std::string_view ring_name, PlaneOptions options = {});

/// Number of points (= lines) of PHG(2,R): (q^3-1)/(q-1) * q^(2(m-1)).
std::size_t expected_point_count(int q, int m);

}  // namespace hjelmslev
