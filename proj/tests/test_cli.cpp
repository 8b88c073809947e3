#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "hjelmslev/fixtures.hpp"

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = hjelmslev::cli::dispatch(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "hjelmslev_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("plane info") {
    const Run r = run({"plane-info", "Z25"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "ring: Z25\n"
          "order: 25\n"
          "residue_field_order: 5\n"
          "composition_length: 2\n"
          "points: 775\n"
          "lines: 775\n"
          "neighbor_classes: 31\n"
          "class_size: 25\n"
          "points_per_line: 30\n"
          "lines_per_point: 30\n");
    CHECK(run({"plane", "info", "Z25"}).out == r.out);
    const Run f = run({"plane-info", "F5"});
    CHECK(f.out.find("points: 31\n") != std::string::npos);
    CHECK(f.out.find("points_per_line: 6\n") != std::string::npos);
}

TEST_CASE("group order") {
    CHECK(run({"group-order", "Z25"}).out == "order: 145312500000\n");
    CHECK(run({"group-order", "S5"}).out == "order: 581250000000\n");
    CHECK(run({"group-order", "S5", "--linear"}).out == "order: 145312500000\n");
    CHECK(run({"group", "order", "F5"}).out == "order: 372000\n");
}

TEST_CASE("fixtures") {
    CHECK(run({"fixtures-list"}).out == "kZ25: Z25 21\nkS5: S5 22\n");
    for (const char* name : {"kZ25", "kS5"}) {
        const Run d = run({"fixtures-dump", name});
        CHECK(d.code == 0);
        CHECK(d.out == hjelmslev::fixture_text(name));
        const auto path = scratch(std::string(name) + ".arc");
        std::ofstream(path) << d.out;
        const Run v = run({"arc-verify", path.string()});
        CHECK(v.code == 0);
        CHECK(v.out.find("complete: true\n") != std::string::npos);
    }
    const Run d = run({"fixtures-dump", "kZ25"});
    CHECK(d.out.rfind("ring: Z25\n# complete (21,2)-arc\n(1:1:4)\n", 0) == 0);
    CHECK(run({"fixtures-dump", "nothing"}).code == 1);
}

TEST_CASE("arc verify") {
    CHECK(run({"arc-verify", "kZ25"}).out ==
          "ring: Z25\n"
          "size: 21\n"
          "max_line_multiplicity: 2\n"
          "is_2arc: true\n"
          "complete: true\n");
    const auto path = scratch("bad.arc");
    std::ofstream(path) << "ring: F5\n(1:0:0)\n(0:1:0)\n(1:1:0)\n(0:0:1)\n";
    const Run r = run({"arc-verify", path.string()});
    CHECK(r.code == 3);
    CHECK(r.out ==
          "ring: F5\n"
          "size: 4\n"
          "max_line_multiplicity: 3\n"
          "is_2arc: false\n"
          "violating_line: [0:0:1]\n"
          "violating_points: (0:1:0) (1:0:0) (1:1:0)\n");

    const auto partial = scratch("partial.arc");
    std::ofstream(partial) << "ring: F5\n(1:0:0)\n(0:1:0)\n";
    const Run p = run({"arc", "verify", partial.string()});
    CHECK(p.code == 0);
    CHECK(p.out.find("complete: false\n") != std::string::npos);

    const auto broken = scratch("broken.arc");
    std::ofstream(broken) << "ring: Z25\n(5:10:15)\n";
    const Run b = run({"arc-verify", broken.string()});
    CHECK(b.code == 1);
    CHECK(!b.err.empty());
    CHECK(run({"arc-verify", scratch("absent.arc").string()}).code == 1);
}

TEST_CASE("arc analyze") {
    const Run r = run({"arc-analyze", "kS5"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "ring: S5\n"
          "size: 22\n"
          "max_line_multiplicity: 2\n"
          "is_2arc: true\n"
          "complete: true\n"
          "class_histogram: 2x6 1x10 0x15\n"
          "phi_image_size: 16\n"
          "phi_complement_size: 15\n"
          "phi_complement: (0:0:1) (0:1:0) (0:1:2) (0:1:3) (0:1:4) (1:0:0) (1:0:2) (1:0:3) (1:0:4) (1:1:2) "
          "(1:2:0) (1:2:1) (1:3:0) (1:3:3) (1:4:0)\n"
          "phi_complement_is_blocking: true\n"
          "aut_order: 60\n"
          "orbit_sizes: 12 10\n"
          "aut_linear: true\n");
    const Run z = run({"arc-analyze", "kZ25", "--no-aut"});
    CHECK(z.code == 0);
    CHECK(z.out.find("class_histogram: 1x21 0x10\n") != std::string::npos);
    CHECK(z.out.find("aut_order") == std::string::npos);

    const auto path = scratch("line.arc");
    std::ofstream(path) << "ring: F5\n(1:0:0)\n(0:1:0)\n(1:1:0)\n";
    CHECK(run({"arc-analyze", path.string()}).code == 3);
}

TEST_CASE("arc aut") {
    CHECK(run({"arc-aut", "kZ25"}).out ==
          "ring: Z25\n"
          "size: 21\n"
          "aut_order: 3\n"
          "orbit_sizes: 3 3 3 3 3 3 3\n"
          "aut_linear: true\n");
}

TEST_CASE("search") {
    const Run r = run({"search", "Z4"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "ring: Z4\n"
          "best_size: 7\n"
          "target_reached: false\n"
          "exhausted: true\n"
          "arcs: 1\n");
    CHECK(run({"search", "Z4"}).out == r.out);

    const Run t = run({"search", "Z9", "--target", "5"});
    CHECK(t.code == 0);
    CHECK(t.out.find("target: 5\n") != std::string::npos);
    CHECK(t.out.find("target_reached: true\n") != std::string::npos);

    const Run s = run({"search", "Z4", "--stats"});
    CHECK(s.out.find("nodes: ") != std::string::npos);
    CHECK(s.out.find("wall_seconds: ") != std::string::npos);
    CHECK(r.out.find("wall_seconds") == std::string::npos);

    const auto dir = scratch("out_z9");
    std::filesystem::remove_all(dir);
    const Run o = run({"search", "Z9", "--out", dir.string()});
    CHECK(o.code == 0);
    CHECK(std::filesystem::exists(dir / "arc_001.arc"));
    CHECK(std::filesystem::exists(dir / "stats.txt"));
    CHECK(slurp(dir / "stats.txt").find("best_size: 9\n") != std::string::npos);
    CHECK(run({"arc-verify", (dir / "arc_001.arc").string()}).code == 0);

    // an interrupted run exits 2 and can be resumed from its checkpoint
    const auto cdir = scratch("out_z4_cut");
    std::filesystem::remove_all(cdir);
    const Run cut = run({"search", "Z4", "--sym-depth", "0", "--node-limit", "200", "--out", cdir.string()});
    CHECK(cut.code == 2);
    CHECK(cut.out.find("exhausted: false\n") != std::string::npos);
    REQUIRE(std::filesystem::exists(cdir / "checkpoint.txt"));
    CHECK(slurp(cdir / "checkpoint.txt").rfind("ring: Z4\nprefix ", 0) == 0);
    const Run resumed = run({"search", "Z4", "--sym-depth", "0", "--resume", (cdir / "checkpoint.txt").string()});
    CHECK(resumed.code == 0);
    CHECK(resumed.out.find("exhausted: true\n") != std::string::npos);

    CHECK(run({"search", "Q7"}).code == 1);
    CHECK(run({"search", "Z9", "--order", "sideways"}).code == 1);
    CHECK(run({"search", "Z9", "--target", "5", "--sym-depth", "6"}).code == 1);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 1);
    CHECK(run({"bogus"}).code == 1);
    CHECK(run({"plane-info"}).code == 1);
    CHECK(run({"plane-info", "Z26"}).code == 1);
    const Run r = run({"plane-info", "Z26"});
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
}
