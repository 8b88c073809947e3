#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hjelmslev/perm_group.hpp"
#include "hjelmslev/plane.hpp"

namespace hjelmslev {

/// A set of distinct points of a plane, kept in insertion order.
class Arc {
public:
    Arc(PlanePtr plane, std::vector<PointId> points, std::string source = {});

    const Plane& plane() const { return *plane_; }
    const PlanePtr& plane_ptr() const { return plane_; }
    const std::vector<PointId>& points() const { return points_; }
    std::vector<PointId> sorted() const;
    std::size_t size() const { return points_.size(); }
    bool contains(PointId p) const { return members_.test(p); }
    const Bitset& members() const { return members_; }
    const std::string& source() const { return source_; }

    friend bool operator==(const Arc& a, const Arc& b) {
        return a.plane_ == b.plane_ && a.points_ == b.points_;
    }

private:
    PlanePtr plane_;
    std::vector<PointId> points_;
    Bitset members_;
    std::string source_;
};

/// A line carrying more arc points than allowed.
struct LineViolation {
    LineId line;
    std::vector<PointId> points;
};

std::size_t max_line_multiplicity(const Arc& arc);
/// The first line (by id) meeting the arc in more than u points.
std::optional<LineViolation> find_violation(const Arc& arc, std::size_t u = 2);
bool is_2arc(const Arc& arc);

/// Points P outside the arc such that arc + P is still a 2-arc. Throws Error if arc is not a 2-arc.
Bitset candidate_mask(const Arc& arc);

/// True iff every line of `plane` meets `points`.
bool is_blocking_set(const Plane& plane, const Bitset& points);

struct ArcAnalysis {
    std::size_t size = 0;
    std::size_t max_line_multiplicity = 0;
    bool is_2arc = false;
    bool is_complete = false;
    /// points-per-class -> number of classes (includes the empty classes under key 0)
    std::map<std::size_t, std::size_t> class_histogram;
    /// Base-plane points whose neighbor class meets the arc, and the remaining ones.
    std::vector<PointId> phi_image;
    std::vector<PointId> phi_complement;
    bool phi_complement_is_blocking = false;
    std::optional<std::uint64_t> aut_order;
    std::vector<std::size_t> orbit_sizes;
    std::vector<std::vector<PointId>> orbits;
    /// True iff every automorphism is a linear collineation (needs the linear subgroup).
    std::optional<bool> aut_linear;
};

/// Structural analysis. Automorphism data is filled when `collineations` is given; linearity
/// additionally needs the linear subgroup. Throws Error when the arc is not a 2-arc.
ArcAnalysis analyze(const Arc& arc, const PermGroup* collineations = nullptr, const PermGroup* linear = nullptr);

/// Neighbor classes holding exactly k arc points, as base-plane points.
std::vector<PointId> classes_with(const Arc& arc, std::size_t k);

struct OvalClassification {
    std::vector<PointId> internal;
    std::vector<PointId> external;
};

/// Lines meeting `point_set` in exactly one point that lie through `p`.
std::vector<LineId> tangents_through(const Plane& plane, std::span<const PointId> point_set, PointId p);

/// Splits the points off an oval of PG(2,q), q odd, into internal (no tangent) and external
/// (two tangents) points. Throws Error if the set is not a (q+1)-arc or q is even.
OvalClassification oval_classification(const Plane& base, std::span<const PointId> oval);

/// For every neighbor class containing exactly two arc points P, Q: every common line of P and Q
/// must map under phi to the tangent of `oval` at the class point. Vacuously true without such classes.
bool tangent_alignment_check(const Arc& arc, std::span<const PointId> oval);

/// Arc file format: `ring: <label>`, optional `# comment` lines, then one `(x:y:z)` per line.
std::string write_arc(const Arc& arc, std::span<const std::string> comments = {});
Arc parse_arc(std::string_view text, std::string source = {});
Arc load_arc(const std::string& path);
void save_arc(const Arc& arc, const std::string& path, std::span<const std::string> comments = {});

/// Ring label declared in the first non-comment line of an arc file.
std::string arc_ring_label(std::string_view text);

}  // namespace hjelmslev
