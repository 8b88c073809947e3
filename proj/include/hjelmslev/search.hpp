#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hjelmslev/arc.hpp"
#include "hjelmslev/perm_group.hpp"
#include "hjelmslev/plane.hpp"

namespace hjelmslev {

enum class OrderHeuristic { PointId, ClassFill };

struct SearchConfig {
    std::string ring;
    /// Stop as soon as an arc of this size is found; also enables bound pruning against it.
    std::optional<std::size_t> target;
    /// Prefixes up to this size are expanded only when they are minimal images.
    std::size_t sym_depth = 7;
    /// Wall-clock budget, 0 = unlimited.
    double seconds = 0;
    unsigned workers = 1;
    /// Odd q only: the classes missed by an arc must block every line of the base plane.
    bool prune_blocking = false;
    OrderHeuristic order = OrderHeuristic::PointId;
    /// Keep every complete arc instead of only the largest ones; disables bound pruning.
    bool record_all = false;
    /// Merge isomorphic results (invariants first, then minimal images).
    bool dedup = true;
    /// Arbitrary starting prefix. Disables symmetry filtering.
    std::vector<PointId> seed;
    /// Prefixes read from a checkpoint.
    std::vector<std::vector<PointId>> resume;
    /// Below this many allowed points the search switches to pair tables with a coloring bound (≤ 256).
    std::size_t table_threshold = 192;
    /// Largest prefix size of the work items shared between workers (capped by sym_depth).
    std::size_t split_depth = 7;
    std::size_t minimal_image_budget = 200000;
    std::size_t max_records = 100000;
    /// Stop after this many nodes (0 = unlimited); counts as budget exhaustion.
    std::uint64_t node_limit = 0;
    /// Compare the incremental candidates with the reference implementation after every step.
    bool verify_candidates = false;
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t canonical_rejections = 0;
    std::uint64_t canonical_fallbacks = 0;
    std::uint64_t bound_prunes = 0;
    std::uint64_t blocking_prunes = 0;
    std::uint64_t table_nodes = 0;
    std::uint64_t complete_arcs = 0;
    std::size_t best_size = 0;
    double wall_seconds = 0;

    SearchStats& operator+=(const SearchStats& o);
};

struct SearchResult {
    /// Sorted point sets, largest first.
    std::vector<std::vector<PointId>> arcs;
    std::size_t best_size = 0;
    bool target_reached = false;
    /// True when the whole (pruned) search space was covered.
    bool exhausted = false;
    SearchStats stats;
    /// Unfinished prefixes when the budget ran out.
    std::vector<std::vector<PointId>> checkpoint;
};

/// \brief A 2-arc prefix with its candidate set and the subset the search may still branch on.
class SearchState {
public:
    explicit SearchState(const Plane& plane);

    const Plane& plane() const { return *plane_; }
    const std::vector<PointId>& prefix() const { return prefix_; }
    std::size_t depth() const { return prefix_.size(); }
    /// Points that keep the prefix a 2-arc when added.
    const Bitset& candidates() const { return cand_.back(); }
    /// Candidates the current branch may still use.
    const Bitset& allowed() const { return avail_.back(); }
    /// Points of the prefix in neighbor class c.
    std::size_t class_count(std::size_t c) const { return class_count_[c]; }

    /// Adds P and removes from the candidates every point on a common line of P and a prefix
    /// point. Throws Error if P is not a candidate.
    void extend(PointId p);
    /// Undoes the last extend.
    void backtrack();
    /// Back to the empty prefix with every point allowed.
    void reset();
    /// Drops P from the allowed set of the current node.
    void disallow(PointId p) { avail_.back().reset(p); }
    /// Restricts the allowed set to points with larger id than every prefix point.
    void restrict_to_larger();

private:
    const Plane* plane_;
    std::vector<PointId> prefix_;
    std::vector<Bitset> cand_, avail_;
    std::vector<std::size_t> class_count_;
    std::vector<Word> scratch_;
};

/// Largest 2-arc inside a single neighbor class (a class when m = 2, a point when m = 1).
std::size_t intra_class_cap(const Plane& plane);

/// \brief Pair tables over a fixed list of allowed points above a 2-arc S.
///
/// compatible(i,j) holds iff S + {v_i, v_j} is a 2-arc; blocked(i,j) lists the k with v_k on a
/// common line of v_i and v_j. S + {a,b,c,d} is a 2-arc iff each of the four triples
/// S + {a,b,c}, S + {a,b,d}, S + {a,c,d}, S + {b,c,d} is one, and each triple is decided from the
/// pair tables, so deeper levels never touch the plane again.
class MergeTables {
public:
    static constexpr std::size_t kMaxPoints = 256;
    using Row = std::array<Word, kMaxPoints / 64>;

    MergeTables() = default;
    MergeTables(const Plane& plane, std::span<const PointId> prefix, std::span<const PointId> points);
    void build(const Plane& plane, std::span<const PointId> prefix, std::span<const PointId> points);

    std::size_t size() const { return points_.size(); }
    PointId point(std::size_t i) const { return points_[i]; }
    const Row& compatible_row(std::size_t i) const { return compat_[i]; }
    const Row& blocked_row(std::size_t i, std::size_t j) const { return blocked_[i * points_.size() + j]; }
    bool compatible(std::size_t i, std::size_t j) const { return test(compat_[i], j); }
    bool blocked(std::size_t i, std::size_t j, std::size_t k) const { return test(blocked_row(i, j), k); }

    /// S + {v_i, v_j, v_k} is a 2-arc.
    bool triple_feasible(std::size_t i, std::size_t j, std::size_t k) const;
    /// S + {v_a, v_b, v_c, v_d} is a 2-arc, decided from its four triples.
    bool merged_feasibility(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const;

    static bool test(const Row& r, std::size_t i) { return (r[i >> 6] >> (i & 63)) & 1; }

private:
    std::vector<PointId> points_;
    std::vector<Row> compat_;
    std::vector<Row> blocked_;
};

/// True iff S + {P1..P4} is a 2-arc, decided from the four 3-point extensions of the 2-arc S.
bool merged_feasibility(const Plane& plane, std::span<const PointId> prefix, const std::array<PointId, 4>& extension);

/// Keep a prefix iff it is its own minimal image. Budget exhaustion keeps it.
bool canonical_prefix_filter(MinimalImage& images, std::span<const PointId> prefix, bool* fallback = nullptr);

/// Upper bound on the size of any 2-arc prefix + T with T inside the allowed set, from per-class caps,
/// optionally lowered by the blocking-set condition.
std::size_t size_bound(const SearchState& state, std::size_t class_cap, bool blocking);

/// True if no completion inside the allowed set can reach `target` while leaving an empty class on
/// every base line. Needs odd q and m = 2; returns false otherwise.
bool blocking_set_prune(const SearchState& state, std::size_t class_cap, std::size_t target);

SearchResult run_search(const SearchConfig& config);

/// Checkpoint text: `ring: <label>`, then blocks `prefix <k>` followed by k point lines.
std::string write_checkpoint(const Plane& plane, std::span<const std::vector<PointId>> prefixes);
/// Returns the ring label and the prefixes. Throws Error on malformed input.
std::pair<std::string, std::vector<std::vector<PointId>>> read_checkpoint(std::string_view text);

}  // namespace hjelmslev
