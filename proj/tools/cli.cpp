#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hjelmslev/arc.hpp"
#include "hjelmslev/collineation.hpp"
#include "hjelmslev/fixtures.hpp"
#include "hjelmslev/registry.hpp"
#include "hjelmslev/search.hpp"

namespace hjelmslev::cli {

namespace {

const char* yes_no(bool b) { return b ? "true" : "false"; }

std::string join_points(const Plane& plane, const std::vector<PointId>& pts) {
    std::string s;
    for (PointId p : pts) {
        if (!s.empty()) s += ' ';
        s += plane.format_point(p);
    }
    return s;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    return os.str();
}

/// An arc file path, or the name of an embedded fixture.
Arc load_input(const std::string& what) {
    if (std::filesystem::exists(what)) return load_arc(what);
    for (const auto& n : fixture_names())
        if (n == what) return load_fixture(n);
    throw Error("cannot open arc file '" + what + "'");
}

std::string elapsed(std::chrono::steady_clock::time_point t0) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3)
       << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return os.str();
}

int plane_info(const std::string& ring, bool stats, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const PlanePtr pl = shared_plane(ring);
    out << "ring: " << pl->ring().name() << "\n";
    out << "order: " << pl->ring().order() << "\n";
    out << "residue_field_order: " << pl->q() << "\n";
    out << "composition_length: " << pl->m() << "\n";
    out << "points: " << pl->point_count() << "\n";
    out << "lines: " << pl->line_count() << "\n";
    out << "neighbor_classes: " << pl->class_count() << "\n";
    out << "class_size: " << pl->class_points(0).size() << "\n";
    out << "points_per_line: " << pl->points_on(0).count() << "\n";
    out << "lines_per_point: " << pl->lines_through(0).count() << "\n";
    if (stats) out << "seconds: " << elapsed(t0) << "\n";
    return kOk;
}

int group_order(const std::string& ring, bool linear, bool stats, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = shared_collineation_group(ring, linear);
    out << "order: " << g->order() << "\n";
    if (stats) out << "seconds: " << elapsed(t0) << "\n";
    return kOk;
}

// Prints the violation and returns true if the arc is not a 2-arc.
bool report_violation(const Arc& arc, std::ostream& out) {
    const auto v = find_violation(arc, 2);
    if (!v) return false;
    out << "violating_line: " << arc.plane().format_line(v->line) << "\n";
    out << "violating_points: " << join_points(arc.plane(), v->points) << "\n";
    return true;
}

int arc_verify(const std::string& file, std::ostream& out) {
    const Arc arc = load_input(file);
    out << "ring: " << arc.plane().ring().name() << "\n";
    out << "size: " << arc.size() << "\n";
    out << "max_line_multiplicity: " << max_line_multiplicity(arc) << "\n";
    const bool ok = is_2arc(arc);
    out << "is_2arc: " << yes_no(ok) << "\n";
    if (!ok) {
        report_violation(arc, out);
        return kVerifyFailed;
    }
    out << "complete: " << yes_no(candidate_mask(arc).none()) << "\n";
    return kOk;
}

int arc_analyze(const std::string& file, bool with_aut, bool stats, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const Arc arc = load_input(file);
    const Plane& pl = arc.plane();
    out << "ring: " << pl.ring().name() << "\n";
    out << "size: " << arc.size() << "\n";
    out << "max_line_multiplicity: " << max_line_multiplicity(arc) << "\n";
    if (!is_2arc(arc)) {
        out << "is_2arc: false\n";
        report_violation(arc, out);
        return kVerifyFailed;
    }
    std::shared_ptr<const PermGroup> g, lin;
    if (with_aut) {
        g = shared_collineation_group(pl.ring().name());
        lin = shared_collineation_group(pl.ring().name(), true);
    }
    const ArcAnalysis a = analyze(arc, g.get(), lin.get());
    const Plane& base = pl.base_plane() ? *pl.base_plane() : pl;
    out << "is_2arc: true\n";
    out << "complete: " << yes_no(a.is_complete) << "\n";
    std::vector<std::string> hist;
    for (auto it = a.class_histogram.rbegin(); it != a.class_histogram.rend(); ++it)
        hist.push_back(std::to_string(it->first) + "x" + std::to_string(it->second));
    out << "class_histogram: " << join(hist) << "\n";
    out << "phi_image_size: " << a.phi_image.size() << "\n";
    out << "phi_complement_size: " << a.phi_complement.size() << "\n";
    out << "phi_complement: " << join_points(base, a.phi_complement) << "\n";
    out << "phi_complement_is_blocking: " << yes_no(a.phi_complement_is_blocking) << "\n";
    if (with_aut) {
        out << "aut_order: " << *a.aut_order << "\n";
        out << "orbit_sizes: " << join(a.orbit_sizes) << "\n";
        out << "aut_linear: " << yes_no(*a.aut_linear) << "\n";
    }
    if (stats) out << "seconds: " << elapsed(t0) << "\n";
    return kOk;
}

int arc_aut(const std::string& file, bool stats, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const Arc arc = load_input(file);
    const Plane& pl = arc.plane();
    const auto g = shared_collineation_group(pl.ring().name());
    const auto lin = shared_collineation_group(pl.ring().name(), true);
    const PermGroup aut = setwise_stabilizer(*g, arc.sorted());
    bool linear = true;
    for (const Permutation& x : aut.generators()) linear = linear && lin->contains(x);
    const auto orbits = orbits_on(pl.point_count(), aut.generators(), arc.sorted());
    std::vector<std::size_t> sizes;
    for (const auto& o : orbits) sizes.push_back(o.size());
    std::sort(sizes.rbegin(), sizes.rend());
    out << "ring: " << pl.ring().name() << "\n";
    out << "size: " << arc.size() << "\n";
    out << "aut_order: " << aut.order() << "\n";
    out << "orbit_sizes: " << join(sizes) << "\n";
    out << "aut_linear: " << yes_no(linear) << "\n";
    if (stats) out << "seconds: " << elapsed(t0) << "\n";
    return kOk;
}

int fixtures_list(std::ostream& out) {
    for (const auto& n : fixture_names()) {
        const Arc a = load_fixture(n);
        out << n << ": " << a.plane().ring().name() << " " << a.size() << "\n";
    }
    return kOk;
}

int fixtures_dump(const std::string& name, std::ostream& out) {
    out << fixture_text(name);
    return kOk;
}

struct SearchOptions {
    std::string ring;
    std::optional<std::size_t> target;
    std::size_t sym_depth = 7;
    double seconds = 0;
    unsigned workers = 1;
    bool prune_blocking = false;
    std::string order = "point-id";
    bool record_all = false;
    bool no_dedup = false;
    std::string out_dir;
    std::string resume;
    std::string seed;
    std::uint64_t node_limit = 0;
};

int search(const SearchOptions& o, bool stats, std::ostream& out) {
    SearchConfig cfg;
    cfg.ring = o.ring;
    cfg.target = o.target;
    cfg.sym_depth = o.sym_depth;
    cfg.seconds = o.seconds;
    cfg.workers = o.workers;
    cfg.prune_blocking = o.prune_blocking;
    cfg.order = o.order == "class-fill" ? OrderHeuristic::ClassFill : OrderHeuristic::PointId;
    cfg.record_all = o.record_all;
    cfg.dedup = !o.no_dedup;
    cfg.node_limit = o.node_limit;
    const PlanePtr plane = shared_plane(o.ring);
    if (!o.resume.empty()) {
        std::ifstream in(o.resume);
        if (!in) throw Error("cannot open checkpoint '" + o.resume + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        auto [label, prefixes] = read_checkpoint(ss.str());
        if (label != plane->ring().name()) throw Error("checkpoint is for ring " + label);
        cfg.resume = std::move(prefixes);
        if (cfg.resume.empty()) throw Error("checkpoint holds no prefixes");
    }
    if (!o.seed.empty()) {
        const Arc s = load_input(o.seed);
        if (&s.plane() != plane.get()) throw Error("seed arc is over a different ring");
        if (!is_2arc(s)) throw Error("seed is not a 2-arc");
        cfg.seed = s.points();
    }

    const SearchResult r = run_search(cfg);

    out << "ring: " << plane->ring().name() << "\n";
    if (cfg.target) out << "target: " << *cfg.target << "\n";
    out << "best_size: " << r.best_size << "\n";
    out << "target_reached: " << yes_no(r.target_reached) << "\n";
    out << "exhausted: " << yes_no(r.exhausted) << "\n";
    out << "arcs: " << r.arcs.size() << "\n";

    auto stat_lines = [&](std::ostream& os) {
        os << "nodes: " << r.stats.nodes << "\n";
        os << "canonical_rejections: " << r.stats.canonical_rejections << "\n";
        os << "canonical_fallbacks: " << r.stats.canonical_fallbacks << "\n";
        os << "bound_prunes: " << r.stats.bound_prunes << "\n";
        os << "blocking_prunes: " << r.stats.blocking_prunes << "\n";
        os << "table_nodes: " << r.stats.table_nodes << "\n";
        os << "complete_arcs: " << r.stats.complete_arcs << "\n";
        os << "best_size: " << r.best_size << "\n";
    };

    if (!o.out_dir.empty()) {
        const std::filesystem::path dir(o.out_dir);
        std::filesystem::create_directories(dir);
        for (std::size_t i = 0; i < r.arcs.size(); ++i) {
            std::ostringstream name;
            name << "arc_" << std::setw(3) << std::setfill('0') << (i + 1) << ".arc";
            const Arc a(plane, r.arcs[i], name.str());
            const std::vector<std::string> comments{"size " + std::to_string(a.size())};
            save_arc(a, (dir / name.str()).string(), comments);
        }
        std::ofstream st(dir / "stats.txt");
        stat_lines(st);
        st << "wall_seconds: " << std::fixed << std::setprecision(3) << r.stats.wall_seconds << "\n";
        if (!r.exhausted && !r.target_reached && cfg.seed.empty()) {
            std::ofstream ck(dir / "checkpoint.txt");
            ck << write_checkpoint(*plane, r.checkpoint);
            out << "checkpoint: " << (dir / "checkpoint.txt").string() << "\n";
        }
    }
    if (stats) {
        stat_lines(out);
        out << "wall_seconds: " << std::fixed << std::setprecision(3) << r.stats.wall_seconds << "\n";
    }
    return (r.target_reached || r.exhausted) ? kOk : kBudget;
}

}  // namespace

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    static const std::vector<std::string> groups{"plane", "group", "arc", "fixtures"};
    if (args.size() >= 2 && std::find(groups.begin(), groups.end(), args[0]) != groups.end() &&
        args[1].rfind("-", 0) != 0) {
        args[0] += "-" + args[1];
        args.erase(args.begin() + 1);
    }

    CLI::App app{"Projective Hjelmslev planes over chain rings: arcs, collineations and arc search", "hjelmslev"};
    app.require_subcommand(1);
    app.fallthrough();
    bool stats = false;
    app.add_flag("--stats", stats, "Append timing and search statistics to reports");

    std::string ring, file, name;
    bool linear = false, no_aut = false;

    auto* pi = app.add_subcommand("plane-info", "Point, line and neighbor class counts of PHG(2,R)");
    pi->add_option("ring", ring, "Ring label")->required();
    auto* go = app.add_subcommand("group-order", "Order of the collineation group");
    go->add_option("ring", ring, "Ring label")->required();
    go->add_flag("--linear", linear, "Only the linear part (no ring automorphisms)");
    auto* av = app.add_subcommand("arc-verify", "Check the 2-arc property and completeness");
    av->add_option("file", file, "Arc file or fixture name")->required();
    auto* aa = app.add_subcommand("arc-analyze", "Structural analysis of a 2-arc");
    aa->add_option("file", file, "Arc file or fixture name")->required();
    aa->add_flag("--no-aut", no_aut, "Skip the automorphism group");
    auto* at = app.add_subcommand("arc-aut", "Automorphism group of an arc");
    at->add_option("file", file, "Arc file or fixture name")->required();
    auto* fl = app.add_subcommand("fixtures-list", "List the embedded arcs");
    auto* fd = app.add_subcommand("fixtures-dump", "Print an embedded arc as an arc file");
    fd->add_option("name", name, "Fixture name")->required();

    SearchOptions so;
    auto* se = app.add_subcommand("search", "Backtracking search for large 2-arcs");
    se->add_option("ring", so.ring, "Ring label")->required();
    se->add_option("--target", so.target, "Stop at the first arc of this size");
    auto* sym_opt =
        se->add_option("--sym-depth", so.sym_depth, "Prefix size up to which only minimal images are expanded");
    se->add_option("--seconds", so.seconds, "Wall-clock budget (0 = unlimited)");
    se->add_option("--workers", so.workers, "Worker threads")->check(CLI::PositiveNumber);
    se->add_flag("--prune-blocking", so.prune_blocking, "Blocking-set pruning (odd q, needs --target)");
    se->add_option("--order", so.order, "Branching order beyond the symmetry depth")
        ->check(CLI::IsMember({"point-id", "class-fill"}));
    se->add_flag("--record-all", so.record_all, "Keep every complete arc, not only the largest");
    se->add_flag("--no-dedup", so.no_dedup, "Keep isomorphic results");
    se->add_option("--out", so.out_dir, "Directory for arc files, stats.txt and checkpoint.txt");
    se->add_option("--resume", so.resume, "Continue from a checkpoint file");
    se->add_option("--seed", so.seed, "Start from the points of an arc file (no symmetry filtering)");
    se->add_option("--node-limit", so.node_limit, "Stop after this many search nodes");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    if (pi->parsed() || go->parsed() || se->parsed()) {
        const auto& known = supported_rings();
        const std::string& r = se->parsed() ? so.ring : ring;
        if (std::find(known.begin(), known.end(), r) == known.end()) {
            err << "error: unknown ring '" << r << "' (supported: " << join(known) << ")\n";
            return kUsage;
        }
    }

    // The default symmetry depth never exceeds the target.
    if (se->parsed() && so.target && sym_opt->count() == 0) so.sym_depth = std::min(so.sym_depth, *so.target);

    try {
        if (pi->parsed()) return plane_info(ring, stats, out);
        if (go->parsed()) return group_order(ring, linear, stats, out);
        if (av->parsed()) return arc_verify(file, out);
        if (aa->parsed()) return arc_analyze(file, !no_aut, stats, out);
        if (at->parsed()) return arc_aut(file, stats, out);
        if (fl->parsed()) return fixtures_list(out);
        if (fd->parsed()) return fixtures_dump(name, out);
        if (se->parsed()) return search(so, stats, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace hjelmslev::cli
