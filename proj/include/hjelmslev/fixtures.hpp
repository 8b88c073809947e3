#pragma once

#include <string>
#include <vector>

#include "hjelmslev/arc.hpp"
#include "hjelmslev/collineation.hpp"

namespace hjelmslev {

/// Names of the embedded arcs: "kZ25" (21 points over Z25) and "kS5" (22 points over S5).
const std::vector<std::string>& fixture_names();

/// Arc file text of a fixture. When HJ_ARC_DATA is set, reads <HJ_ARC_DATA>/<name>.arc instead.
/// Throws Error for unknown names or unreadable files.
std::string fixture_text(const std::string& name);

/// Parsed fixture on the shared plane of its ring.
Arc load_fixture(const std::string& name);

/// In kS5 the first 12 points form the larger automorphism orbit, the last 10 the smaller one.
inline constexpr std::size_t kS5LargeOrbitSize = 12;

/// The involution of kS5 with rows (1, X, -X), (X, 1, -X), (2X+2, 2X+2, -X-1). Needs an S5 table.
Collineation ks5_involution(const RingTable& s5);

/// The oval {(0:1:1), (1:0:1), (1:1:0), (-1:1:1), (1:-1:1), (1:1:-1)} of PG(2,5).
std::vector<PointId> ks5_oval(const Plane& pg25);

/// The projective triangle of PG(2,q), q odd: union over a of {(0:1:-a^2), (1:-a^2:0), (-a^2:0:1)}.
std::vector<PointId> projective_triangle(const Plane& base);

}  // namespace hjelmslev
