#include "hjelmslev/registry.hpp"

#include <map>
#include <mutex>
#include <string>

#include "hjelmslev/collineation.hpp"

namespace hjelmslev {

namespace {
std::mutex registry_mutex;
}

PlanePtr shared_plane(std::string_view ring_name) {
    static std::map<std::string, PlanePtr, std::less<>> planes;
    std::lock_guard lock(registry_mutex);
    if (auto it = planes.find(ring_name); it != planes.end()) return it->second;
    PlanePtr p = build_plane(ring_name);
    planes.emplace(std::string(ring_name), p);
    return p;
}

std::shared_ptr<const PermGroup> shared_collineation_group(std::string_view ring_name, bool linear_only) {
    static std::map<std::pair<std::string, bool>, std::shared_ptr<const PermGroup>> groups;
    const PlanePtr plane = shared_plane(ring_name);
    const auto key = std::make_pair(std::string(ring_name), linear_only);
    {
        std::lock_guard lock(registry_mutex);
        if (auto it = groups.find(key); it != groups.end()) return it->second;
    }
    auto g = std::make_shared<const PermGroup>(collineation_group(*plane, linear_only));
    std::lock_guard lock(registry_mutex);
    return groups.emplace(key, g).first->second;
}

}  // namespace hjelmslev
