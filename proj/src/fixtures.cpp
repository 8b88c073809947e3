#include "hjelmslev/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hjelmslev {

namespace {

// Rows are orbits of the coordinate rotation.
constexpr const char* kZ25Text =
    "ring: Z25\n"
    "# complete (21,2)-arc\n"
    "(1:1:4)\n(1:19:19)\n(1:4:1)\n"
    "(1:1:22)\n(1:8:8)\n(1:22:1)\n"
    "(1:3:12)\n(1:23:19)\n(1:4:17)\n"
    "(1:7:8)\n(1:22:4)\n(1:19:18)\n"
    "(1:7:22)\n(1:8:6)\n(1:21:18)\n"
    "(5:1:2)\n(1:15:13)\n(1:2:5)\n"
    "(5:1:23)\n(1:10:12)\n(1:23:5)\n";

constexpr const char* kS5Text =
    "ring: S5\n"
    "# complete (22,2)-arc\n"
    "(1:X+1:4X)\n(4X:1:X+1)\n(1:4X:4X+1)\n"
    "(1:4X+1:4X)\n(4X:1:4X+1)\n(1:4X:X+1)\n"
    "(1:X+1:3X+4)\n(1:2X+4:X+4)\n(1:4X+4:4X+1)\n"
    "(1:4X+1:4X+4)\n(1:X+4:2X+4)\n(1:3X+4:X+1)\n"
    "(1:3X+2:3X+2)\n(1:3X+3:1)\n(1:1:3X+3)\n"
    "(1:2X+3:4X+2)\n(1:4X+3:3X+4)\n(1:2X+4:2X+2)\n"
    "(1:4X+2:2X+3)\n(1:2X+2:2X+4)\n(1:3X+4:4X+3)\n"
    "(1:1:1)\n";

}  // namespace

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names{"kZ25", "kS5"};
    return names;
}

std::string fixture_text(const std::string& name) {
    if (const char* dir = std::getenv("HJ_ARC_DATA"); dir && *dir) {
        const std::filesystem::path path = std::filesystem::path(dir) / (name + ".arc");
        std::ifstream in(path);
        if (!in) throw Error("fixture '" + name + "' not found in " + std::string(dir));
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    if (name == "kZ25") return kZ25Text;
    if (name == "kS5") return kS5Text;
    throw Error("unknown fixture '" + name + "'");
}

Arc load_fixture(const std::string& name) { return parse_arc(fixture_text(name), name); }

Collineation ks5_involution(const RingTable& s5) {
    Collineation c;
    c.matrix = parse_matrix(s5, {"1", "X", "4X", "X", "1", "4X", "2X+2", "2X+2", "4X+4"});
    return c;
}

std::vector<PointId> ks5_oval(const Plane& pg25) {
    std::vector<PointId> out;
    for (const char* s : {"(0:1:1)", "(1:0:1)", "(1:1:0)", "(4:1:1)", "(1:4:1)", "(1:1:4)"})
        out.push_back(pg25.parse_point(s));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PointId> projective_triangle(const Plane& base) {
    const RingTable& f = base.ring();
    if (base.m() != 1 || base.q() % 2 == 0) throw Error("projective triangle needs PG(2,q) with q odd");
    std::vector<PointId> out;
    for (int a = 0; a < f.order(); ++a) {
        const Element t = f.neg(f.mul(static_cast<Element>(a), static_cast<Element>(a)));
        for (const Vec3& v : {Vec3{0, 1, t}, Vec3{1, t, 0}, Vec3{t, 0, 1}}) out.push_back(base.point_id(v));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace hjelmslev
