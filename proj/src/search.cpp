#include "hjelmslev/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "hjelmslev/collineation.hpp"
#include "hjelmslev/registry.hpp"

namespace hjelmslev {

SearchStats& SearchStats::operator+=(const SearchStats& o) {
    nodes += o.nodes;
    canonical_rejections += o.canonical_rejections;
    canonical_fallbacks += o.canonical_fallbacks;
    bound_prunes += o.bound_prunes;
    blocking_prunes += o.blocking_prunes;
    table_nodes += o.table_nodes;
    complete_arcs += o.complete_arcs;
    best_size = std::max(best_size, o.best_size);
    return *this;
}

// ---------------------------------------------------------------------------------------------
// SearchState

SearchState::SearchState(const Plane& plane)
    : plane_(&plane), class_count_(plane.class_count(), 0), scratch_(plane.words()) {
    Bitset all(plane.point_count());
    all.set_all();
    cand_.push_back(all);
    avail_.push_back(all);
}

void SearchState::extend(PointId p) {
    if (p >= plane_->point_count() || !cand_.back().test(p))
        throw Error("point " + std::to_string(p) + " is not a candidate");
    Bitset c = cand_.back();
    c.reset(p);
    const bool table = plane_->pair_closure_materialized();
    for (PointId q : prefix_) {
        if (table) {
            c.subtract(plane_->third_points(p, q));
        } else {
            plane_->third_points_into(p, q, scratch_);
            c.subtract(std::span<const Word>(scratch_));
        }
    }
    Bitset a = avail_.back();
    a &= c;
    prefix_.push_back(p);
    cand_.push_back(std::move(c));
    avail_.push_back(std::move(a));
    ++class_count_[plane_->class_of(p)];
}

void SearchState::backtrack() {
    if (prefix_.empty()) throw Error("backtrack on an empty prefix");
    --class_count_[plane_->class_of(prefix_.back())];
    prefix_.pop_back();
    cand_.pop_back();
    avail_.pop_back();
}

void SearchState::reset() {
    while (!prefix_.empty()) backtrack();
    avail_.back().set_all();
}

void SearchState::restrict_to_larger() {
    if (prefix_.empty()) return;
    const PointId top = *std::max_element(prefix_.begin(), prefix_.end());
    Bitset& a = avail_.back();
    for (PointId p = 0; p <= top; ++p) a.reset(p);
}

// ---------------------------------------------------------------------------------------------
// Class caps and bounds

std::size_t intra_class_cap(const Plane& plane) {
    if (plane.m() == 1) return 1;
    const ClassRestriction cls = plane.restrict_class(0);
    const std::size_t n = cls.points.size();
    std::map<PointId, std::size_t> local;
    for (std::size_t i = 0; i < n; ++i) local[cls.points[i]] = i;
    // pair_block[i][j]: points on the trace through i and j.
    std::vector<std::uint32_t> pair_block(n * n, 0);
    for (const auto& trace : cls.trace_lines) {
        std::uint32_t mask = 0;
        for (PointId p : trace) mask |= 1U << local[p];
        for (PointId a : trace)
            for (PointId b : trace)
                if (a != b) pair_block[local[a] * n + local[b]] |= mask & ~(1U << local[a]) & ~(1U << local[b]);
    }
    std::size_t best = 0;
    std::vector<std::size_t> chosen;
    auto rec = [&](auto&& self, std::uint32_t cand) -> void {
        best = std::max(best, chosen.size());
        if (chosen.size() + static_cast<std::size_t>(std::popcount(cand)) <= best) return;
        while (cand) {
            if (chosen.size() + static_cast<std::size_t>(std::popcount(cand)) <= best) return;
            const std::size_t x = static_cast<std::size_t>(std::countr_zero(cand));
            cand &= cand - 1;
            std::uint32_t next = cand;
            for (std::size_t y : chosen) next &= ~pair_block[x * n + y];
            chosen.push_back(x);
            self(self, next);
            chosen.pop_back();
        }
    };
    rec(rec, n == 32 ? ~0U : (1U << n) - 1);
    return best;
}

namespace {

struct ClassInfo {
    std::vector<Bitset> masks;
    std::vector<std::vector<std::size_t>> base_lines;  // classes on each base line (m = 2)
    bool blocking_applicable = false;
};

ClassInfo class_info(const Plane& plane) {
    ClassInfo info;
    for (std::size_t c = 0; c < plane.class_count(); ++c) {
        Bitset b(plane.point_count());
        for (PointId p : plane.class_points(c)) b.set(p);
        info.masks.push_back(std::move(b));
    }
    if (plane.base_plane()) {
        const Plane& base = *plane.base_plane();
        for (LineId l = 0; l < base.line_count(); ++l) {
            std::vector<std::size_t> cls;
            base.points_on(l).for_each([&](std::size_t p) { cls.push_back(p); });
            info.base_lines.push_back(std::move(cls));
        }
        info.blocking_applicable = plane.q() % 2 == 1;
    }
    return info;
}

// Sum over classes of what each may still receive, minus the blocking penalty.
// Returns nullopt when the touched classes already cover a base line.
std::optional<std::size_t> class_sum_bound(std::span<const std::size_t> count, std::span<const std::size_t> avail,
                                           std::size_t cap, const ClassInfo* blocking) {
    std::size_t sum = 0;
    for (std::size_t c = 0; c < count.size(); ++c) {
        const std::size_t room = count[c] >= cap ? 0 : cap - count[c];
        sum += std::min(room, avail[c]);
    }
    if (!blocking) return sum;
    std::size_t penalty = 0;
    for (const auto& line : blocking->base_lines) {
        bool covered = true;
        bool reachable = true;
        std::size_t least = SIZE_MAX;
        for (std::size_t c : line) {
            if (count[c] > 0) continue;
            covered = false;
            if (avail[c] == 0) {
                reachable = false;
                break;
            }
            least = std::min(least, std::min(cap, avail[c]));
        }
        if (covered) return std::nullopt;
        if (reachable) penalty = std::max(penalty, least);
    }
    return sum - penalty;
}

std::vector<std::size_t> allowed_per_class(const SearchState& st, const ClassInfo& info) {
    std::vector<std::size_t> out(info.masks.size());
    const auto a = st.allowed().words();
    for (std::size_t c = 0; c < info.masks.size(); ++c) {
        const auto m = info.masks[c].words();
        std::size_t n = 0;
        for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(std::popcount(a[i] & m[i]));
        out[c] = n;
    }
    return out;
}

std::vector<std::size_t> counts_of(const SearchState& st) {
    std::vector<std::size_t> out(st.plane().class_count());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = st.class_count(c);
    return out;
}

}  // namespace

std::size_t size_bound(const SearchState& state, std::size_t class_cap, bool blocking) {
    const ClassInfo info = class_info(state.plane());
    const auto avail = allowed_per_class(state, info);
    const auto count = counts_of(state);
    const bool use_blocking = blocking && info.blocking_applicable;
    const auto sum = class_sum_bound(count, avail, class_cap, use_blocking ? &info : nullptr);
    if (!sum) return state.depth();
    return state.depth() + std::min(*sum, state.allowed().count());
}

bool blocking_set_prune(const SearchState& state, std::size_t class_cap, std::size_t target) {
    const ClassInfo info = class_info(state.plane());
    if (!info.blocking_applicable) return false;
    const auto avail = allowed_per_class(state, info);
    const auto count = counts_of(state);
    const auto sum = class_sum_bound(count, avail, class_cap, &info);
    if (!sum) return true;
    return state.depth() + std::min(*sum, state.allowed().count()) < target;
}

// ---------------------------------------------------------------------------------------------
// Merge tables

MergeTables::MergeTables(const Plane& plane, std::span<const PointId> prefix, std::span<const PointId> points) {
    build(plane, prefix, points);
}

void MergeTables::build(const Plane& plane, std::span<const PointId> prefix, std::span<const PointId> points) {
    const std::size_t n = points.size();
    if (n > kMaxPoints) throw Error("merge tables hold at most 256 points");
    points_.assign(points.begin(), points.end());
    compat_.assign(n, Row{});
    blocked_.assign(n * n, Row{});

    const std::size_t W = plane.words();
    const bool table = plane.pair_closure_materialized();
    std::vector<Word> scratch(W), member(W, 0);
    std::vector<std::int16_t> local(plane.point_count(), -1);
    for (std::size_t i = 0; i < n; ++i) {
        local[points[i]] = static_cast<std::int16_t>(i);
        member[points[i] >> 6] |= Word{1} << (points[i] & 63);
    }
    auto third = [&](PointId a, PointId b) -> std::span<const Word> {
        if (table) return plane.third_points(a, b);
        plane.third_points_into(a, b, scratch);
        return scratch;
    };
    auto set_bit = [](Row& r, std::size_t i) { r[i >> 6] |= Word{1} << (i & 63); };

    // Points already on a line with two prefix points are compatible with nothing.
    std::vector<Word> dead(W, 0);
    for (std::size_t a = 0; a < prefix.size(); ++a)
        for (std::size_t b = a + 1; b < prefix.size(); ++b) {
            const auto t = third(prefix[a], prefix[b]);
            for (std::size_t w = 0; w < W; ++w) dead[w] |= t[w];
        }
    auto is_dead = [&](PointId p) { return (dead[p >> 6] >> (p & 63)) & 1; };

    std::vector<Word> hit(W);
    for (std::size_t i = 0; i < n; ++i) {
        if (is_dead(points[i])) continue;
        std::fill(hit.begin(), hit.end(), Word{0});
        for (PointId q : prefix) {
            const auto t = third(points[i], q);
            for (std::size_t w = 0; w < W; ++w) hit[w] |= t[w];
        }
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && !is_dead(points[j]) && !((hit[points[j] >> 6] >> (points[j] & 63)) & 1)) set_bit(compat_[i], j);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto t = third(points[i], points[j]);
            Row& r = blocked_[i * n + j];
            for (std::size_t w = 0; w < W; ++w) {
                Word x = t[w] & member[w];
                while (x) {
                    const std::size_t p = (w << 6) + static_cast<std::size_t>(std::countr_zero(x));
                    set_bit(r, static_cast<std::size_t>(local[p]));
                    x &= x - 1;
                }
            }
            blocked_[j * n + i] = r;
        }
}

bool MergeTables::triple_feasible(std::size_t i, std::size_t j, std::size_t k) const {
    return compatible(i, j) && compatible(i, k) && compatible(j, k) && !blocked(i, j, k);
}

bool MergeTables::merged_feasibility(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return triple_feasible(a, b, c) && triple_feasible(a, b, d) && triple_feasible(a, c, d) &&
           triple_feasible(b, c, d);
}

bool merged_feasibility(const Plane& plane, std::span<const PointId> prefix, const std::array<PointId, 4>& extension) {
    for (std::size_t i = 0; i < 4; ++i) {
        if (std::find(prefix.begin(), prefix.end(), extension[i]) != prefix.end())
            throw Error("extension point lies in the prefix");
        for (std::size_t j = i + 1; j < 4; ++j)
            if (extension[i] == extension[j]) throw Error("extension points must be distinct");
    }
    const MergeTables t(plane, prefix, extension);
    return t.merged_feasibility(0, 1, 2, 3);
}

bool canonical_prefix_filter(MinimalImage& images, std::span<const PointId> prefix, bool* fallback) {
    const auto r = images.is_minimal(prefix);
    if (fallback) *fallback = !r.has_value();
    return r.value_or(true);
}

// ---------------------------------------------------------------------------------------------
// Search engine

namespace {

using Clock = std::chrono::steady_clock;

enum class Mode { Target, Maximum, All };

struct Shared {
    const SearchConfig& cfg;
    const Plane& plane;
    const PermGroup* group = nullptr;
    std::size_t cap = 0;
    std::size_t sym_depth = 0;  // 0 when symmetry filtering is off
    bool blocking = false;
    Mode mode = Mode::Maximum;
    ClassInfo info;
    Clock::time_point start;
    std::atomic<bool> stop{false};
    std::atomic<bool> budget_hit{false};
    bool checkpointing = false;
    std::atomic<bool> target_hit{false};
    std::atomic<std::size_t> best{0};
    std::atomic<std::uint64_t> nodes{0};

    Shared(const SearchConfig& c, const Plane& p) : cfg(c), plane(p) {}

    void raise_best(std::size_t v) {
        std::size_t cur = best.load(std::memory_order_relaxed);
        while (v > cur && !best.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
        }
    }
};

struct Record {
    std::size_t item;
    std::vector<PointId> points;
};

class Worker {
public:
    explicit Worker(Shared& sh) : sh_(sh), plane_(sh.plane), st_(sh.plane) {
        if (sh.group && sh.sym_depth > 0) images_.emplace(*sh.group, sh.cfg.minimal_image_budget);
    }

    /// Expands the subtree of `prefix`. Returns false when the search was stopped.
    bool run_item(std::size_t item_index, const std::vector<PointId>& prefix, bool ordered) {
        item_ = item_index;
        st_.reset();
        for (PointId p : prefix) {
            if (!st_.candidates().test(p)) throw Error("prefix " + std::to_string(item_index) + " is not a 2-arc");
            st_.extend(p);
        }
        if (ordered) st_.restrict_to_larger();
        item_depth_ = prefix.size();
        self_pushed_ = false;
        if (ordered && images_ && !prefix.empty() && prefix.size() <= sh_.sym_depth) {
            std::vector<PointId> s(prefix);
            std::sort(s.begin(), s.end());
            bool fb = false;
            if (!canonical_prefix_filter(*images_, s, &fb)) {
                ++stats_.canonical_rejections;
                return true;
            }
            if (fb) ++stats_.canonical_fallbacks;
        }
        return dfs();
    }

    void set_frontier(std::size_t depth, std::vector<std::vector<PointId>>* out) {
        frontier_depth_ = depth;
        frontier_ = out;
    }

    // Prefix sizes below this branch in increasing point order, so a subtree is described by its
    // prefix alone (new points above the prefix maximum).
    std::size_t ordered_depth() const {
        std::size_t d = images_ ? sh_.sym_depth : 0;
        if (frontier_) d = std::max(d, frontier_depth_);
        // With a budget the item's own children are ordered too, so an interrupted item can be
        // checkpointed as smaller pieces.
        if (sh_.checkpointing) d = std::max(d, item_depth_ + 1);
        return d;
    }

    SearchStats stats_;
    std::vector<Record> records_;
    std::vector<std::vector<PointId>> pending_;

private:
    bool check_stop() {
        if (sh_.stop.load(std::memory_order_relaxed)) return true;
        if ((++tick_ & 63) == 0) {
            const std::uint64_t total = sh_.nodes.fetch_add(64, std::memory_order_relaxed) + 64;
            const bool out_of_nodes = sh_.cfg.node_limit && total >= sh_.cfg.node_limit;
            const bool out_of_time =
                sh_.cfg.seconds > 0 &&
                std::chrono::duration<double>(Clock::now() - sh_.start).count() >= sh_.cfg.seconds;
            if (out_of_nodes || out_of_time) {
                sh_.budget_hit = true;
                sh_.stop = true;
                return true;
            }
        }
        return false;
    }

    std::size_t need() const {
        switch (sh_.mode) {
            case Mode::Target:
                return *sh_.cfg.target;
            case Mode::Maximum:
                return sh_.best.load(std::memory_order_relaxed);
            case Mode::All:
                break;
        }
        return 0;
    }

    void record(std::vector<PointId> pts) {
        if (records_.size() >= sh_.cfg.max_records) return;
        std::sort(pts.begin(), pts.end());
        records_.push_back({item_, std::move(pts)});
    }

    bool complete_now() const { return st_.candidates().none(); }

    void verify() const {
        if (!sh_.cfg.verify_candidates) return;
        const Arc arc(std::shared_ptr<const Plane>(std::shared_ptr<const Plane>{}, &plane_), st_.prefix());
        if (!(candidate_mask(arc) == st_.candidates())) throw Error("incremental candidates diverged");
    }

    // Pushes checkpoint data while unwinding from a stopped search at the node of depth d.
    void unwind_pending(std::size_t d) {
        if (!sh_.budget_hit) return;
        const std::size_t keep_depth = std::max(item_depth_, ordered_depth());
        if (!self_pushed_ && d <= keep_depth) {
            pending_.push_back(st_.prefix());
            self_pushed_ = true;
        }
    }

    void push_siblings(PointId current) {
        if (!sh_.budget_hit) return;
        Bitset rest = st_.allowed();
        rest.reset(current);
        rest.for_each([&](std::size_t y) {
            std::vector<PointId> p = st_.prefix();
            p.push_back(static_cast<PointId>(y));
            pending_.push_back(std::move(p));
        });
    }

    // Bound on the final size reachable from the current global node, or nullopt if the node
    // contradicts the blocking condition.
    std::optional<std::size_t> node_bound(std::vector<std::size_t>* avail_out = nullptr) {
        auto avail = allowed_per_class(st_, sh_.info);
        counts_.assign(plane_.class_count(), 0);
        for (std::size_t c = 0; c < counts_.size(); ++c) counts_[c] = st_.class_count(c);
        const auto sum = class_sum_bound(counts_, avail, sh_.cap, sh_.blocking ? &sh_.info : nullptr);
        if (avail_out) *avail_out = std::move(avail);
        if (!sum) return std::nullopt;
        return st_.depth() + std::min(*sum, st_.allowed().count());
    }

    bool pruned() {
        const std::size_t n = need();
        if (n == 0) return false;
        const auto b = node_bound();
        if (!b) {
            ++stats_.blocking_prunes;
            return true;
        }
        if (*b < n) {
            ++stats_.bound_prunes;
            return true;
        }
        return false;
    }

    PointId choose() {
        if (sh_.cfg.order == OrderHeuristic::PointId) return static_cast<PointId>(st_.allowed().first());
        std::vector<std::size_t> avail = allowed_per_class(st_, sh_.info);
        std::size_t best_c = SIZE_MAX, best_n = SIZE_MAX;
        for (std::size_t c = 0; c < avail.size(); ++c)
            if (avail[c] > 0 && avail[c] < best_n) {
                best_n = avail[c];
                best_c = c;
            }
        return static_cast<PointId>((st_.allowed() & sh_.info.masks[best_c]).first());
    }

    bool dfs() {
        if (check_stop()) {
            unwind_pending(st_.depth());
            return false;
        }
        ++stats_.nodes;
        verify();
        const std::size_t d = st_.depth();
        stats_.best_size = std::max(stats_.best_size, d);
        sh_.raise_best(d);

        if (sh_.mode == Mode::Target && d >= *sh_.cfg.target) {
            record(st_.prefix());
            sh_.target_hit = true;
            sh_.stop = true;
            return false;
        }
        if (complete_now()) {
            ++stats_.complete_arcs;
            if (sh_.mode != Mode::Target && d >= need()) record(st_.prefix());
            return true;
        }
        if (frontier_ && d == frontier_depth_) {
            frontier_->push_back(st_.prefix());
            return true;
        }
        if (st_.allowed().none()) return true;
        if (pruned()) return true;

        if (d < ordered_depth()) {
            const bool filter = images_ && d < sh_.sym_depth;
            while (st_.allowed().any()) {
                const PointId x = static_cast<PointId>(st_.allowed().first());
                std::vector<PointId> child = st_.prefix();
                child.push_back(x);
                bool fb = false;
                if (!filter || canonical_prefix_filter(*images_, child, &fb)) {
                    if (fb) ++stats_.canonical_fallbacks;
                    st_.extend(x);
                    const bool ok = dfs();
                    st_.backtrack();
                    if (!ok) {
                        unwind_pending(d);
                        push_siblings(x);
                        return false;
                    }
                } else {
                    ++stats_.canonical_rejections;
                }
                st_.disallow(x);
                if (st_.allowed().any() && pruned()) break;
            }
            return true;
        }

        if (frontier_ == nullptr && st_.allowed().count() <= sh_.cfg.table_threshold) {
            const bool ok = table_search();
            if (!ok) unwind_pending(d);
            return ok;
        }

        while (st_.allowed().any()) {
            const PointId x = choose();
            st_.extend(x);
            const bool ok = dfs();
            st_.backtrack();
            if (!ok) {
                unwind_pending(d);
                return false;
            }
            st_.disallow(x);
            if (st_.allowed().any() && pruned()) break;
        }
        return true;
    }

    // --- pair-table phase ------------------------------------------------------------------

    using Row = MergeTables::Row;
    static constexpr std::size_t kRowWords = MergeTables::kMaxPoints / 64;

    static bool row_any(const Row& r) {
        for (Word w : r)
            if (w) return true;
        return false;
    }
    static std::size_t row_count(const Row& r) {
        std::size_t c = 0;
        for (Word w : r) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    static std::size_t row_first(const Row& r) {
        for (std::size_t i = 0; i < kRowWords; ++i)
            if (r[i]) return (i << 6) + static_cast<std::size_t>(std::countr_zero(r[i]));
        return MergeTables::kMaxPoints;
    }

    bool table_search() {
        std::vector<PointId> pts = st_.allowed().to_vector();
        tables_.build(plane_, st_.prefix(), pts);
        const std::size_t n = pts.size();
        local_class_.resize(n);
        for (std::size_t i = 0; i < n; ++i) local_class_[i] = plane_.class_of(pts[i]);
        counts_.assign(plane_.class_count(), 0);
        for (std::size_t c = 0; c < counts_.size(); ++c) counts_[c] = st_.class_count(c);
        chosen_.clear();

        // One row block per level; a chosen set has at most n points.
        if (rows_.size() < n + 2) rows_.resize(n + 2);
        for (std::size_t l = 0; l < n + 2; ++l)
            if (rows_[l].size() < n) rows_[l].resize(n);
        Row all{};
        for (std::size_t i = 0; i < n; ++i) all[i >> 6] |= Word{1} << (i & 63);
        for (std::size_t i = 0; i < n; ++i) {
            const Row& c = tables_.compatible_row(i);
            for (std::size_t w = 0; w < kRowWords; ++w) rows_[0][i][w] = c[w] & all[w];
        }
        return table_expand(0, all);
    }

    // True iff the prefix plus chosen_ admits no further point anywhere in the plane.
    bool table_complete() {
        for (std::size_t i : chosen_) st_.extend(tables_.point(i));
        const bool complete = st_.candidates().none();
        for (std::size_t k = 0; k < chosen_.size(); ++k) st_.backtrack();
        return complete;
    }

    std::optional<std::size_t> table_class_bound(const Row& R) {
        avail_.assign(counts_.size(), 0);
        for (std::size_t w = 0; w < kRowWords; ++w) {
            Word x = R[w];
            while (x) {
                ++avail_[local_class_[(w << 6) + static_cast<std::size_t>(std::countr_zero(x))]];
                x &= x - 1;
            }
        }
        return class_sum_bound(counts_, avail_, sh_.cap, sh_.blocking ? &sh_.info : nullptr);
    }

    bool table_expand(std::size_t level, Row R) {
        if (check_stop()) return false;
        ++stats_.nodes;
        ++stats_.table_nodes;
        const std::size_t size = st_.depth() + chosen_.size();
        stats_.best_size = std::max(stats_.best_size, size);
        sh_.raise_best(size);

        auto full_arc = [&] {
            std::vector<PointId> p = st_.prefix();
            for (std::size_t i : chosen_) p.push_back(tables_.point(i));
            return p;
        };
        if (sh_.mode == Mode::Target && size >= *sh_.cfg.target) {
            record(full_arc());
            sh_.target_hit = true;
            sh_.stop = true;
            return false;
        }
        if (!row_any(R)) {
            if (sh_.mode != Mode::Target && size >= need() && table_complete()) {
                ++stats_.complete_arcs;
                record(full_arc());
            }
            return true;
        }

        const std::size_t goal = need();
        if (goal > 0) {
            const auto cb = table_class_bound(R);
            if (!cb) {
                ++stats_.blocking_prunes;
                return true;
            }
            if (size + std::min(*cb, row_count(R)) < goal) {
                ++stats_.bound_prunes;
                return true;
            }
        }

        // Greedy coloring of the compatibility graph: a color class holds pairwise incompatible
        // points, so one can take at most one point per class.
        std::vector<Row>& rows = rows_[level];
        std::vector<std::uint16_t> order;
        std::vector<std::uint16_t> color;
        {
            Row U = R;
            std::uint16_t k = 0;
            while (row_any(U)) {
                ++k;
                Row Q = U;
                while (row_any(Q)) {
                    const std::size_t v = row_first(Q);
                    Q[v >> 6] &= ~(Word{1} << (v & 63));
                    U[v >> 6] &= ~(Word{1} << (v & 63));
                    for (std::size_t w = 0; w < kRowWords; ++w) Q[w] &= ~rows[v][w];
                    order.push_back(static_cast<std::uint16_t>(v));
                    color.push_back(k);
                }
            }
        }
        std::vector<Row>& next = rows_[level + 1];

        for (std::size_t i = order.size(); i-- > 0;) {
            if (goal > 0 && size + color[i] < goal) {
                ++stats_.bound_prunes;
                return true;
            }
            const std::size_t v = order[i];
            Row child{};
            for (std::size_t w = 0; w < kRowWords; ++w) child[w] = R[w] & rows[v][w];
            for (std::size_t w = 0; w < kRowWords; ++w) {
                Word x = child[w];
                while (x) {
                    const std::size_t b = (w << 6) + static_cast<std::size_t>(std::countr_zero(x));
                    const Row& blk = tables_.blocked_row(v, b);
                    for (std::size_t u = 0; u < kRowWords; ++u) next[b][u] = rows[b][u] & child[u] & ~blk[u];
                    x &= x - 1;
                }
            }
            chosen_.push_back(v);
            ++counts_[local_class_[v]];
            const bool ok = table_expand(level + 1, child);
            --counts_[local_class_[v]];
            chosen_.pop_back();
            if (!ok) return false;
            R[v >> 6] &= ~(Word{1} << (v & 63));
        }
        return true;
    }

    Shared& sh_;
    const Plane& plane_;
    SearchState st_;
    std::optional<MinimalImage> images_;
    std::uint64_t tick_ = 0;
    std::size_t item_ = 0;
    std::size_t item_depth_ = 0;
    bool self_pushed_ = false;
    std::size_t frontier_depth_ = 0;
    std::vector<std::vector<PointId>>* frontier_ = nullptr;

    MergeTables tables_;
    std::vector<std::vector<Row>> rows_;
    std::vector<std::size_t> local_class_, counts_, avail_, chosen_;
};

std::vector<std::size_t> histogram_key(const Plane& plane, const std::vector<PointId>& pts) {
    std::vector<std::size_t> count(plane.class_count(), 0);
    for (PointId p : pts) ++count[plane.class_of(p)];
    std::sort(count.begin(), count.end());
    count.push_back(pts.size());
    return count;
}

std::vector<std::vector<PointId>> dedup_records(const Plane& plane, const PermGroup* group,
                                                std::vector<std::vector<PointId>> arcs, std::size_t budget) {
    if (!group) return arcs;
    struct Member {
        std::vector<PointId> points;
        std::optional<std::vector<PointId>> image;
        bool image_done = false;
    };
    MinimalImage images(*group, budget);
    auto image_of = [&](Member& m) -> const std::vector<PointId>& {
        if (!m.image_done) {
            m.image = images.image(m.points);
            m.image_done = true;
        }
        return m.image ? *m.image : m.points;
    };
    std::map<std::vector<std::size_t>, std::vector<Member>> buckets;
    std::vector<std::vector<PointId>> out;
    for (auto& a : arcs) {
        auto& bucket = buckets[histogram_key(plane, a)];
        Member cur{a, std::nullopt, false};
        bool duplicate = false;
        // Only collisions pay for minimal images.
        for (Member& m : bucket) {
            if (m.points == cur.points || image_of(m) == image_of(cur)) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        bucket.push_back(std::move(cur));
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace

SearchResult run_search(const SearchConfig& cfg) {
    const auto start = Clock::now();
    const PlanePtr plane = shared_plane(cfg.ring);
    if (cfg.table_threshold > MergeTables::kMaxPoints) throw Error("table threshold must be at most 256");
    if (cfg.target && cfg.sym_depth > *cfg.target) throw Error("sym_depth must not exceed the target size");
    if (cfg.workers == 0) throw Error("worker count must be positive");

    Shared sh(cfg, *plane);
    sh.start = start;
    sh.cap = intra_class_cap(*plane);
    sh.info = class_info(*plane);
    sh.mode = cfg.target ? Mode::Target : (cfg.record_all ? Mode::All : Mode::Maximum);
    sh.blocking = cfg.prune_blocking && cfg.target && sh.info.blocking_applicable;
    const bool seeded = !cfg.seed.empty();
    sh.sym_depth = seeded ? 0 : cfg.sym_depth;
    sh.checkpointing = !seeded && (cfg.node_limit > 0 || cfg.seconds > 0);

    std::shared_ptr<const PermGroup> group;
    if (sh.sym_depth > 0 || cfg.dedup) group = shared_collineation_group(cfg.ring);
    sh.group = group.get();

    std::vector<std::vector<PointId>> items;
    if (seeded)
        items.push_back(cfg.seed);
    else if (!cfg.resume.empty())
        items = cfg.resume;
    else
        items.push_back({});

    SearchStats stats;
    std::vector<Record> records;
    std::vector<std::vector<PointId>> checkpoint;

    if (cfg.workers == 1) {
        Worker w(sh);
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (!w.run_item(i, items[i], !seeded)) {
                if (sh.budget_hit) {
                    checkpoint = std::move(w.pending_);
                    for (std::size_t j = i + 1; j < items.size(); ++j) checkpoint.push_back(items[j]);
                }
                break;
            }
        }
        stats += w.stats_;
        records = std::move(w.records_);
    } else {
        // Frontier of canonical prefixes, deepened one level at a time until there is enough work
        // to share. Produced single-threaded.
        std::vector<std::vector<PointId>> frontier = items;
        if (!seeded) {
            const std::size_t limit =
                std::max<std::size_t>(1, sh.sym_depth > 0 ? std::min(cfg.split_depth, sh.sym_depth) : cfg.split_depth);
            const std::size_t wanted = 16 * static_cast<std::size_t>(cfg.workers);
            Worker fw(sh);
            while (frontier.size() < wanted && !sh.stop) {
                std::vector<std::vector<PointId>> deeper;
                bool grew = false;
                for (std::size_t i = 0; i < frontier.size(); ++i) {
                    if (sh.stop || frontier[i].size() >= limit) {
                        deeper.push_back(frontier[i]);
                        continue;
                    }
                    grew = true;
                    std::vector<std::vector<PointId>> children;
                    fw.set_frontier(frontier[i].size() + 1, &children);
                    if (!fw.run_item(i, frontier[i], true) && sh.budget_hit) {
                        deeper.push_back(frontier[i]);
                        continue;
                    }
                    for (auto& c : children) deeper.push_back(std::move(c));
                }
                frontier = std::move(deeper);
                if (!grew) break;
            }
            stats += fw.stats_;
            for (auto& r : fw.records_) records.push_back(std::move(r));
        }
        if (sh.budget_hit) {
            checkpoint = std::move(frontier);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::unique_ptr<Worker>> workers;
            for (unsigned k = 0; k < cfg.workers; ++k) workers.push_back(std::make_unique<Worker>(sh));
            std::vector<std::vector<std::size_t>> unfinished(cfg.workers);
            std::vector<std::exception_ptr> errors(cfg.workers);
            std::vector<std::thread> threads;
            for (unsigned k = 0; k < cfg.workers; ++k)
                threads.emplace_back([&, k] {
                    try {
                        while (!sh.stop) {
                            const std::size_t i = next.fetch_add(1);
                            if (i >= frontier.size()) break;
                            if (!workers[k]->run_item(items.size() + i, frontier[i], !seeded)) {
                                if (sh.budget_hit) unfinished[k].push_back(i);
                                break;
                            }
                        }
                    } catch (...) {
                        errors[k] = std::current_exception();
                        sh.stop = true;
                    }
                });
            for (auto& t : threads) t.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
            for (auto& w : workers) {
                stats += w->stats_;
                for (auto& r : w->records_) records.push_back(std::move(r));
            }
            if (sh.budget_hit) {
                // The unfinished parts of interrupted items (in item order), then everything not yet claimed.
                std::vector<std::pair<std::size_t, unsigned>> cut;
                for (unsigned k = 0; k < cfg.workers; ++k)
                    for (std::size_t i : unfinished[k]) cut.emplace_back(i, k);
                std::sort(cut.begin(), cut.end());
                for (const auto& [i, k] : cut)
                    for (auto& p : workers[k]->pending_) checkpoint.push_back(std::move(p));
                for (std::size_t i = std::min(next.load(), frontier.size()); i < frontier.size(); ++i)
                    checkpoint.push_back(frontier[i]);
            }
        }
        std::stable_sort(records.begin(), records.end(),
                         [](const Record& a, const Record& b) { return a.item < b.item; });
    }

    SearchResult res;
    res.stats = stats;
    res.best_size = std::max(sh.best.load(), stats.best_size);
    res.stats.best_size = res.best_size;
    res.target_reached = sh.target_hit;
    res.exhausted = !sh.budget_hit && !sh.target_hit;
    res.checkpoint = std::move(checkpoint);

    std::vector<std::vector<PointId>> arcs;
    for (auto& r : records) {
        if (sh.mode == Mode::Maximum && r.points.size() < res.best_size) continue;
        arcs.push_back(std::move(r.points));
    }
    std::stable_sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return false;
    });
    if (cfg.dedup) arcs = dedup_records(*plane, sh.group, std::move(arcs), cfg.minimal_image_budget);
    res.arcs = std::move(arcs);
    res.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return res;
}

// ---------------------------------------------------------------------------------------------
// Checkpoints

std::string write_checkpoint(const Plane& plane, std::span<const std::vector<PointId>> prefixes) {
    std::ostringstream os;
    os << "ring: " << plane.ring().name() << "\n";
    for (const auto& p : prefixes) {
        os << "prefix " << p.size() << "\n";
        for (PointId x : p) os << plane.format_point(x) << "\n";
    }
    return os.str();
}

std::pair<std::string, std::vector<std::vector<PointId>>> read_checkpoint(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::string label;
    std::vector<std::vector<PointId>> out;
    PlanePtr plane;
    std::size_t expect = 0;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!plane) {
            if (line.rfind("ring:", 0) != 0) throw Error("checkpoint must start with 'ring: <label>'");
            label = line.substr(5);
            label.erase(0, label.find_first_not_of(' '));
            plane = shared_plane(label);
            continue;
        }
        if (expect == 0) {
            if (line.rfind("prefix ", 0) != 0) throw Error("expected 'prefix <k>' in checkpoint, got '" + line + "'");
            std::size_t k = 0;
            try {
                k = std::stoul(line.substr(7));
            } catch (const std::exception&) {
                throw Error("bad prefix size in checkpoint: '" + line + "'");
            }
            out.emplace_back();
            expect = k;
            continue;
        }
        out.back().push_back(plane->parse_point(line));
        --expect;
    }
    if (!plane) throw Error("empty checkpoint");
    if (expect != 0) throw Error("truncated checkpoint");
    return {label, out};
}

}  // namespace hjelmslev
