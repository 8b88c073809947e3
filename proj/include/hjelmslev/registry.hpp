#pragma once

#include <string_view>

#include "hjelmslev/perm_group.hpp"
#include "hjelmslev/plane.hpp"

namespace hjelmslev {

/// Process-wide cache of planes by ring label (built on first use, thread-safe).
PlanePtr shared_plane(std::string_view ring_name);

/// Process-wide cache of collineation groups of shared planes.
std::shared_ptr<const PermGroup> shared_collineation_group(std::string_view ring_name, bool linear_only = false);

}  // namespace hjelmslev
