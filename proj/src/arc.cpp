#include "hjelmslev/arc.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hjelmslev/registry.hpp"

namespace hjelmslev {

Arc::Arc(PlanePtr plane, std::vector<PointId> points, std::string source)
    : plane_(std::move(plane)), points_(std::move(points)), members_(plane_->point_count()), source_(std::move(source)) {
    for (PointId p : points_) {
        if (p >= plane_->point_count()) throw Error("arc point id out of range");
        if (members_.test(p)) throw Error("arc contains point " + plane_->format_point(p) + " twice");
        members_.set(p);
    }
}

std::vector<PointId> Arc::sorted() const {
    std::vector<PointId> s = points_;
    std::sort(s.begin(), s.end());
    return s;
}

std::size_t max_line_multiplicity(const Arc& arc) {
    const Plane& pl = arc.plane();
    std::size_t best = 0;
    for (LineId l = 0; l < pl.line_count(); ++l) best = std::max(best, (pl.points_on(l) & arc.members()).count());
    return best;
}

std::optional<LineViolation> find_violation(const Arc& arc, std::size_t u) {
    const Plane& pl = arc.plane();
    for (LineId l = 0; l < pl.line_count(); ++l) {
        const Bitset meet = pl.points_on(l) & arc.members();
        if (meet.count() > u) return LineViolation{l, meet.to_vector()};
    }
    return std::nullopt;
}

bool is_2arc(const Arc& arc) { return !find_violation(arc, 2).has_value(); }

Bitset candidate_mask(const Arc& arc) {
    if (!is_2arc(arc)) throw Error("candidate_mask requires a 2-arc");
    const Plane& pl = arc.plane();
    const auto& pts = arc.points();
    Bitset mask(pl.point_count());
    for (PointId p = 0; p < pl.point_count(); ++p) {
        if (arc.contains(p)) continue;
        bool ok = true;
        for (std::size_t i = 0; i < pts.size() && ok; ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                if (pl.collinear(p, pts[i], pts[j])) {
                    ok = false;
                    break;
                }
        if (ok) mask.set(p);
    }
    return mask;
}

bool is_blocking_set(const Plane& plane, const Bitset& points) {
    for (LineId l = 0; l < plane.line_count(); ++l)
        if (!plane.points_on(l).intersects(points)) return false;
    return true;
}

std::vector<PointId> classes_with(const Arc& arc, std::size_t k) {
    const Plane& pl = arc.plane();
    std::vector<std::size_t> count(pl.class_count(), 0);
    for (PointId p : arc.points()) ++count[pl.class_of(p)];
    std::vector<PointId> out;
    for (std::size_t c = 0; c < count.size(); ++c)
        if (count[c] == k) out.push_back(static_cast<PointId>(c));
    return out;
}

ArcAnalysis analyze(const Arc& arc, const PermGroup* collineations, const PermGroup* linear) {
    const Plane& pl = arc.plane();
    ArcAnalysis a;
    a.size = arc.size();
    a.max_line_multiplicity = max_line_multiplicity(arc);
    a.is_2arc = a.max_line_multiplicity <= 2;
    if (!a.is_2arc) throw Error("analyze requires a 2-arc");
    a.is_complete = candidate_mask(arc).none();

    std::vector<std::size_t> count(pl.class_count(), 0);
    for (PointId p : arc.points()) ++count[pl.class_of(p)];
    for (std::size_t c : count) ++a.class_histogram[c];

    // Class ids are base-plane point ids (or the points themselves over a field).
    const Plane& base = pl.base_plane() ? *pl.base_plane() : pl;
    Bitset complement(base.point_count());
    for (std::size_t c = 0; c < count.size(); ++c) {
        if (count[c] > 0) {
            a.phi_image.push_back(static_cast<PointId>(c));
        } else {
            a.phi_complement.push_back(static_cast<PointId>(c));
            complement.set(c);
        }
    }
    a.phi_complement_is_blocking = is_blocking_set(base, complement);

    if (collineations) {
        const std::vector<PointId> pts = arc.sorted();
        const PermGroup aut = setwise_stabilizer(*collineations, pts);
        a.aut_order = aut.order();
        a.orbits = orbits_on(pl.point_count(), aut.generators(), pts);
        for (const auto& o : a.orbits) a.orbit_sizes.push_back(o.size());
        std::sort(a.orbit_sizes.rbegin(), a.orbit_sizes.rend());
        if (linear) {
            bool lin = true;
            for (const Permutation& g : aut.generators()) lin = lin && linear->contains(g);
            a.aut_linear = lin;
        }
    }
    return a;
}

std::vector<LineId> tangents_through(const Plane& plane, std::span<const PointId> point_set, PointId p) {
    Bitset set(plane.point_count());
    for (PointId x : point_set) set.set(x);
    std::vector<LineId> out;
    plane.lines_through(p).for_each([&](std::size_t l) {
        if ((plane.points_on(static_cast<LineId>(l)) & set).count() == 1) out.push_back(static_cast<LineId>(l));
    });
    return out;
}

OvalClassification oval_classification(const Plane& base, std::span<const PointId> oval) {
    if (base.m() != 1) throw Error("oval classification works in PG(2,q)");
    const int q = base.q();
    if (q % 2 == 0) throw Error("internal/external points are defined for odd q");
    std::set<PointId> members(oval.begin(), oval.end());
    if (members.size() != static_cast<std::size_t>(q + 1)) throw Error("oval must have q+1 points");
    Bitset set(base.point_count());
    for (PointId x : members) set.set(x);
    for (LineId l = 0; l < base.line_count(); ++l)
        if ((base.points_on(l) & set).count() > 2) throw Error("point set is not an arc");

    OvalClassification out;
    for (PointId p = 0; p < base.point_count(); ++p) {
        if (members.count(p)) continue;
        const std::size_t t = tangents_through(base, oval, p).size();
        if (t == 0)
            out.internal.push_back(p);
        else if (t == 2)
            out.external.push_back(p);
        else
            throw Error("point off the oval lies on an unexpected number of tangents");
    }
    return out;
}

bool tangent_alignment_check(const Arc& arc, std::span<const PointId> oval) {
    const Plane& pl = arc.plane();
    if (!pl.base_plane()) throw Error("tangent alignment needs a Hjelmslev plane over a chain ring");
    const Plane& base = *pl.base_plane();
    std::map<std::size_t, std::vector<PointId>> by_class;
    for (PointId p : arc.points()) by_class[pl.class_of(p)].push_back(p);
    for (const auto& [cls, pts] : by_class) {
        if (pts.size() != 2) continue;
        const auto x = static_cast<PointId>(cls);
        if (std::find(oval.begin(), oval.end(), x) == oval.end()) return false;
        const auto tangents = tangents_through(base, oval, x);
        if (tangents.size() != 1) return false;
        bool ok = true;
        pl.common_lines(pts[0], pts[1]).for_each([&](std::size_t l) {
            if (pl.phi_line(static_cast<LineId>(l)) != tangents.front()) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

std::string write_arc(const Arc& arc, std::span<const std::string> comments) {
    std::ostringstream os;
    os << "ring: " << arc.plane().ring().name() << "\n";
    for (const std::string& c : comments) os << "# " << c << "\n";
    for (PointId p : arc.points()) os << arc.plane().format_point(p) << "\n";
    return os.str();
}

namespace {

std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> content_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = strip(text.substr(pos, nl - pos));
        if (!line.empty() && line.front() != '#') out.push_back(line);
        pos = nl + 1;
    }
    return out;
}

}  // namespace

std::string arc_ring_label(std::string_view text) {
    const auto lines = content_lines(text);
    if (lines.empty() || lines.front().substr(0, 5) != "ring:") throw Error("arc file must start with 'ring: <label>'");
    return std::string(strip(lines.front().substr(5)));
}

Arc parse_arc(std::string_view text, std::string source) {
    const std::string label = arc_ring_label(text);
    const PlanePtr plane = shared_plane(label);
    const auto lines = content_lines(text);
    std::vector<PointId> pts;
    for (std::size_t i = 1; i < lines.size(); ++i) pts.push_back(plane->parse_point(lines[i]));
    return Arc(plane, std::move(pts), std::move(source));
}

Arc load_arc(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open arc file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_arc(ss.str(), path);
}

void save_arc(const Arc& arc, const std::string& path, std::span<const std::string> comments) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write arc file '" + path + "'");
    out << write_arc(arc, comments);
}

}  // namespace hjelmslev
