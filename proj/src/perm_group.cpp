#include "hjelmslev/perm_group.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace hjelmslev {

// --- Permutation ---------------------------------------------------------------------------------

Permutation::Permutation(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), PointId{0});
}

Permutation::Permutation(std::vector<PointId> images) : images_(std::move(images)) {
    std::vector<bool> hit(images_.size(), false);
    for (PointId x : images_) {
        if (x >= images_.size() || hit[x]) throw Error("image array is not a permutation");
        hit[x] = true;
    }
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (images_[i] != i) return false;
    return true;
}

Permutation Permutation::inverse() const {
    Permutation r;
    r.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) r.images_[images_[i]] = static_cast<PointId>(i);
    return r;
}

std::uint64_t Permutation::order() const {
    std::vector<bool> seen(images_.size(), false);
    std::uint64_t ord = 1;
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (seen[i]) continue;
        std::uint64_t len = 0;
        for (std::size_t j = i; !seen[j]; j = images_[j]) {
            seen[j] = true;
            ++len;
        }
        ord = std::lcm(ord, len);
    }
    return ord;
}

PointId Permutation::first_moved() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (images_[i] != i) return static_cast<PointId>(i);
    return static_cast<PointId>(images_.size());
}

Permutation operator*(const Permutation& a, const Permutation& b) {
    Permutation r;
    r.images_.resize(a.images_.size());
    for (std::size_t i = 0; i < a.images_.size(); ++i) r.images_[i] = b.images_[a.images_[i]];
    return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("group order overflows 64 bits");
    return r;
}

// --- ChainBuilder --------------------------------------------------------------------------------

class ChainBuilder {
public:
    struct MLevel {
        StabilizerChain::Level data;
        std::vector<std::size_t> checked;  // per orbit position: generators already used for Schreier gens
    };

    explicit ChainBuilder(std::size_t degree) : degree_(degree) {}

    std::size_t size() const { return levels_.size(); }

    void add_level(PointId base) {
        MLevel lv;
        lv.data.base = base;
        lv.data.position.assign(degree_, -1);
        lv.data.position[base] = 0;
        lv.data.orbit.push_back(base);
        lv.data.transversal.push_back(Permutation::identity(degree_));
        lv.data.inverse_transversal.push_back(Permutation::identity(degree_));
        lv.checked.push_back(0);
        levels_.push_back(std::move(lv));
    }

    void extend(std::size_t i) {
        StabilizerChain::Level& L = levels_[i].data;
        for (std::size_t k = 0; k < L.orbit.size(); ++k) {
            for (const Permutation& s : L.generators) {
                const PointId y = s[L.orbit[k]];
                if (L.position[y] >= 0) continue;
                L.position[y] = static_cast<std::int32_t>(L.orbit.size());
                L.orbit.push_back(y);
                Permutation u = L.transversal[k] * s;
                L.inverse_transversal.push_back(u.inverse());
                L.transversal.push_back(std::move(u));
                levels_[i].checked.push_back(0);
            }
        }
    }

    std::pair<Permutation, std::size_t> sift(Permutation g, std::size_t from) const {
        for (std::size_t i = from; i < levels_.size(); ++i) {
            const StabilizerChain::Level& L = levels_[i].data;
            const PointId b = g[L.base];
            if (L.position[b] < 0) return {std::move(g), i};
            g = g * L.inverse_transversal[static_cast<std::size_t>(L.position[b])];
        }
        return {std::move(g), levels_.size()};
    }

    /// Adds residue h (which fixes base points 0..j-1) to levels from..j.
    void insert(const Permutation& h, std::size_t from, std::size_t j) {
        if (j == levels_.size()) add_level(h.first_moved());
        for (std::size_t l = from; l <= j; ++l) {
            levels_[l].data.generators.push_back(h);
            extend(l);
        }
    }

    std::uint64_t order() const {
        std::uint64_t o = 1;
        for (const auto& lv : levels_) o = checked_mul(o, lv.data.orbit.size());
        return o;
    }

    /// Schreier generator closure: afterwards the chain is a complete BSGS.
    void close() {
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels_.size()) - 1;
        while (i >= 0) {
            const auto li = static_cast<std::size_t>(i);
            bool added = false;
            for (std::size_t k = 0; k < levels_[li].data.orbit.size() && !added; ++k) {
                while (levels_[li].checked[k] < levels_[li].data.generators.size()) {
                    const StabilizerChain::Level& L = levels_[li].data;
                    const std::size_t gi = levels_[li].checked[k]++;
                    Permutation h = L.transversal[k] * L.generators[gi];
                    const PointId img = h[L.base];
                    h = h * L.inverse_transversal[static_cast<std::size_t>(L.position[img])];
                    auto [res, j] = sift(std::move(h), li + 1);
                    if (!res.is_identity()) {
                        insert(res, li + 1, j);
                        i = static_cast<std::ptrdiff_t>(j);
                        added = true;
                        break;
                    }
                }
            }
            if (!added) --i;
        }
    }

    StabilizerChain finish() {
        StabilizerChain c(degree_);
        for (auto& lv : levels_) {
            // Levels with trivial basic orbit carry no information.
            if (lv.data.orbit.size() == 1) continue;
            c.levels_.push_back(std::make_shared<const StabilizerChain::Level>(std::move(lv.data)));
        }
        levels_.clear();
        return c;
    }

    std::vector<MLevel>& levels() { return levels_; }

private:
    std::size_t degree_;
    std::vector<MLevel> levels_;
};

// --- StabilizerChain -----------------------------------------------------------------------------

std::vector<PointId> StabilizerChain::base() const {
    std::vector<PointId> b;
    for (const auto& lv : levels_) b.push_back(lv->base);
    return b;
}

std::uint64_t StabilizerChain::order() const {
    std::uint64_t o = 1;
    for (const auto& lv : levels_) o = checked_mul(o, lv->orbit.size());
    return o;
}

const std::vector<Permutation>& StabilizerChain::generators() const {
    static const std::vector<Permutation> none;
    return levels_.empty() ? none : levels_.front()->generators;
}

std::pair<Permutation, std::size_t> StabilizerChain::sift(Permutation g, std::size_t from) const {
    for (std::size_t i = from; i < levels_.size(); ++i) {
        const Level& L = *levels_[i];
        const PointId b = g[L.base];
        if (L.position[b] < 0) return {std::move(g), i};
        g = g * L.inverse_transversal[static_cast<std::size_t>(L.position[b])];
    }
    return {std::move(g), levels_.size()};
}

bool StabilizerChain::contains(const Permutation& g) const {
    if (g.degree() != degree_) return false;
    auto [res, level] = sift(g);
    return level == levels_.size() && res.is_identity();
}

StabilizerChain StabilizerChain::tail() const {
    StabilizerChain c(degree_);
    if (levels_.size() > 1) c.levels_.assign(levels_.begin() + 1, levels_.end());
    return c;
}

StabilizerChain StabilizerChain::schreier_sims(std::size_t degree, const std::vector<Permutation>& gens,
                                               const std::vector<PointId>& initial_base) {
    ChainBuilder b(degree);
    for (PointId x : initial_base) b.add_level(x);
    std::vector<Permutation> nontrivial;
    for (const Permutation& g : gens) {
        if (g.degree() != degree) throw Error("generator degree mismatch");
        if (!g.is_identity()) nontrivial.push_back(g);
    }
    for (const Permutation& g : nontrivial) {
        bool moves = false;
        for (const auto& lv : b.levels())
            if (g[lv.data.base] != lv.data.base) {
                moves = true;
                break;
            }
        if (!moves) b.add_level(g.first_moved());
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (const Permutation& g : nontrivial) {
            bool fixes = true;
            for (std::size_t j = 0; j < i; ++j)
                if (g[b.levels()[j].data.base] != b.levels()[j].data.base) {
                    fixes = false;
                    break;
                }
            if (fixes) b.levels()[i].data.generators.push_back(g);
        }
        b.extend(i);
    }
    b.close();
    return b.finish();
}

StabilizerChain StabilizerChain::from_random_elements(std::size_t degree, std::uint64_t target_order,
                                                      const std::function<Permutation()>& sample,
                                                      const std::vector<Permutation>& seed_gens) {
    ChainBuilder b(degree);
    auto absorb = [&](Permutation g) {
        auto [res, j] = b.sift(std::move(g), 0);
        if (!res.is_identity()) b.insert(res, 0, j);
    };
    for (const Permutation& g : seed_gens) absorb(g);
    std::size_t misses = 0;
    while (b.order() < target_order) {
        const std::uint64_t before = b.order();
        absorb(sample());
        if (b.order() == before) {
            if (++misses > 10000) throw Error("random Schreier-Sims did not reach the target order");
        } else {
            misses = 0;
        }
    }
    if (b.order() != target_order) throw Error("random Schreier-Sims overshot the target order");
    return b.finish();
}

// --- Orbits --------------------------------------------------------------------------------------

Orbit::Orbit(std::size_t degree, std::span<const Permutation> gens, PointId root)
    : degree_(degree), root_(root), gens_(gens), parent_gen_(degree, kAbsent), parent_(degree, 0) {
    parent_gen_[root] = -1;
    points_.push_back(root);
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const PointId x = points_[k];
        for (std::size_t g = 0; g < gens_.size(); ++g) {
            const PointId y = gens_[g][x];
            if (parent_gen_[y] != kAbsent) continue;
            parent_gen_[y] = static_cast<std::int32_t>(g);
            parent_[y] = x;
            points_.push_back(y);
        }
    }
}

Permutation Orbit::transversal(PointId x) const {
    if (!contains(x)) throw Error("point not in orbit");
    std::vector<std::int32_t> word;
    for (PointId y = x; parent_gen_[y] >= 0; y = parent_[y]) word.push_back(parent_gen_[y]);
    Permutation u = Permutation::identity(degree_);
    for (auto it = word.rbegin(); it != word.rend(); ++it) u = u * gens_[static_cast<std::size_t>(*it)];
    return u;
}

std::vector<PointId> orbit_minima(std::size_t degree, std::span<const Permutation> gens) {
    std::vector<PointId> parent(degree);
    std::iota(parent.begin(), parent.end(), PointId{0});
    auto find = [&](PointId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const Permutation& g : gens)
        for (PointId x = 0; x < degree; ++x) {
            const PointId a = find(x), b = find(g[x]);
            if (a == b) continue;
            // Keep the smaller id as the root so that find() returns the orbit minimum.
            if (a < b)
                parent[b] = a;
            else
                parent[a] = b;
        }
    std::vector<PointId> out(degree);
    for (PointId x = 0; x < degree; ++x) out[x] = find(x);
    return out;
}

std::vector<std::vector<PointId>> orbits_on(std::size_t degree, std::span<const Permutation> gens,
                                            std::span<const PointId> points) {
    const std::vector<PointId> mins = orbit_minima(degree, gens);
    std::map<PointId, std::vector<PointId>> by_min;
    for (PointId p : points) by_min[mins[p]].push_back(p);
    std::vector<std::vector<PointId>> out;
    for (auto& [k, v] : by_min) {
        std::sort(v.begin(), v.end());
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

StabilizerChain point_stabilizer(const StabilizerChain& chain, PointId x, std::uint64_t seed) {
    if (chain.trivial()) return chain;
    if (chain.level(0).base == x) return chain.tail();
    const std::vector<Permutation>& gens = chain.generators();
    Orbit orb(chain.degree(), gens, x);
    if (orb.size() == 1) return chain;
    const std::uint64_t order = chain.order();
    if (order % orb.size() != 0) throw Error("orbit length does not divide group order");
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + x + 1);
    // Sift Schreier-tree corrections of uniform elements: g * (root -> g(x))^{-1} is uniform in G_x.
    auto sample = [&]() {
        Permutation g = chain.random_element(rng);
        return g * orb.transversal(g[x]).inverse();
    };
    return StabilizerChain::from_random_elements(chain.degree(), order / orb.size(), sample);
}

// --- PermGroup -----------------------------------------------------------------------------------

PermGroup::PermGroup(std::size_t degree, std::vector<Permutation> generators)
    : generators_(std::move(generators)), chain_(StabilizerChain::schreier_sims(degree, generators_)) {}

PermGroup::PermGroup(StabilizerChain chain) : generators_(chain.generators()), chain_(std::move(chain)) {}

std::vector<PointId> PermGroup::orbit(PointId x) const {
    Orbit o(degree(), generators_, x);
    std::vector<PointId> pts = o.points();
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::vector<std::vector<PointId>> PermGroup::set_orbit(std::vector<PointId> set, std::size_t limit) const {
    std::sort(set.begin(), set.end());
    std::set<std::vector<PointId>> seen{set};
    std::vector<std::vector<PointId>> out{set};
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const Permutation& g : generators_) {
            auto img = apply_to_set(g, out[i]);
            if (seen.insert(img).second) {
                out.push_back(std::move(img));
                if (out.size() > limit) throw Error("set orbit exceeds limit");
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PointId> apply_to_set(const Permutation& g, std::span<const PointId> set) {
    std::vector<PointId> out;
    out.reserve(set.size());
    for (PointId x : set) out.push_back(g[x]);
    std::sort(out.begin(), out.end());
    return out;
}

// --- Setwise stabilizer --------------------------------------------------------------------------

PermGroup setwise_stabilizer(const PermGroup& group, std::span<const PointId> set) {
    const std::size_t n = group.degree();
    std::vector<char> in(n, 0);
    for (PointId x : set) {
        if (x >= n) throw Error("point out of range");
        in[x] = 1;
    }
    std::vector<PointId> pts;
    for (PointId x = 0; x < n; ++x)
        if (in[x]) pts.push_back(x);
    // Stab(S) = Stab(complement); backtrack over the smaller side.
    if (pts.size() * 2 > n) {
        pts.clear();
        for (PointId x = 0; x < n; ++x) {
            in[x] = !in[x];
            if (in[x]) pts.push_back(x);
        }
    }

    bool invariant = true;
    for (const Permutation& g : group.generators())
        for (PointId x : pts)
            if (!in[g[x]]) {
                invariant = false;
                break;
            }
    if (invariant) return group;

    std::vector<StabilizerChain> chains{group.chain()};
    std::vector<PointId> base;
    for (PointId s : pts) {
        if (chains.back().trivial()) break;
        bool fixed = true;
        for (const Permutation& g : chains.back().generators())
            if (g[s] != s) {
                fixed = false;
                break;
            }
        if (fixed) continue;
        base.push_back(s);
        chains.push_back(point_stabilizer(chains.back(), s, base.size()));
    }
    const std::size_t k = base.size();
    std::vector<Orbit> orbits;
    orbits.reserve(k);
    for (std::size_t i = 0; i < k; ++i) orbits.emplace_back(n, chains[i].generators(), base[i]);

    auto maps_set = [&](const Permutation& u) {
        for (PointId x : pts)
            if (!in[u[x]]) return false;
        return true;
    };
    // First element of G^(j) * u (u acting last) mapping S onto S, if any.
    std::function<std::optional<Permutation>(std::size_t, const Permutation&)> find =
        [&](std::size_t j, const Permutation& u) -> std::optional<Permutation> {
        if (j == k) return maps_set(u) ? std::optional<Permutation>(u) : std::nullopt;
        for (PointId z : orbits[j].points()) {
            if (!in[u[z]]) continue;
            if (auto r = find(j + 1, orbits[j].transversal(z) * u)) return r;
        }
        return std::nullopt;
    };

    std::vector<Permutation> found = chains[k].generators();
    for (std::size_t i = k; i-- > 0;) {
        auto current = std::make_unique<Orbit>(n, found, base[i]);
        std::vector<PointId> targets = orbits[i].points();
        std::sort(targets.begin(), targets.end());
        for (PointId z : targets) {
            if (!in[z] || current->contains(z)) continue;
            if (auto r = find(i + 1, orbits[i].transversal(z))) {
                found.push_back(*r);
                current = std::make_unique<Orbit>(n, found, base[i]);
            }
        }
    }
    return PermGroup(n, found);
}

// --- Minimal images ------------------------------------------------------------------------------

MinimalImage::MinimalImage(const PermGroup& group, std::size_t candidate_budget)
    : group_(&group), budget_(candidate_budget) {}

MinimalImage::Node& MinimalImage::node(const std::vector<PointId>& prefix) {
    auto it = cache_.find(prefix);
    if (it != cache_.end()) return *it->second;
    auto nd = std::make_unique<Node>();
    if (prefix.empty()) {
        nd->chain = group_->chain();
    } else {
        std::vector<PointId> parent(prefix.begin(), prefix.end() - 1);
        const Node& up = node(parent);
        nd->chain = point_stabilizer(up.chain, prefix.back(), prefix.size());
    }
    nd->orbit_min = orbit_minima(group_->degree(), nd->chain.generators());
    Node& ref = *nd;
    cache_.emplace(prefix, std::move(nd));
    return ref;
}

Permutation MinimalImage::map_to_min(Node& n, PointId t) {
    const PointId m = n.orbit_min[t];
    if (m == t) return Permutation::identity(group_->degree());
    auto& tree = n.trees[m];
    if (!tree) tree = std::make_unique<Orbit>(group_->degree(), n.chain.generators(), m);
    return tree->transversal(t).inverse();
}

MinimalImage::Outcome MinimalImage::run(std::span<const PointId> set, bool stop_if_smaller,
                                        std::vector<PointId>& out) {
    std::vector<PointId> s(set.begin(), set.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    const std::size_t k = s.size();

    std::set<std::vector<PointId>> cands{s};
    std::vector<PointId> prefix;
    if (cache_.size() > 50000) cache_.clear();

    for (std::size_t i = 0; i < k; ++i) {
        Node& nd = node(prefix);
        if (nd.chain.trivial()) {
            out = *cands.begin();
            if (stop_if_smaller && out < s) return Outcome::Smaller;
            return Outcome::Done;
        }
        PointId m = static_cast<PointId>(group_->degree());
        for (const auto& T : cands)
            for (std::size_t idx = i; idx < k; ++idx) m = std::min(m, nd.orbit_min[T[idx]]);
        if (stop_if_smaller && m < s[i]) return Outcome::Smaller;

        std::set<std::vector<PointId>> next;
        for (const auto& T : cands)
            for (std::size_t idx = i; idx < k; ++idx) {
                if (nd.orbit_min[T[idx]] != m) continue;
                if (T[idx] == m) {
                    next.insert(T);
                } else {
                    next.insert(apply_to_set(map_to_min(nd, T[idx]), T));
                }
                if (next.size() > budget_) return Outcome::Budget;
            }
        prefix.push_back(m);
        cands = std::move(next);
    }
    out = prefix;
    return Outcome::Done;
}

std::optional<std::vector<PointId>> MinimalImage::image(std::span<const PointId> set) {
    std::vector<PointId> out;
    if (run(set, false, out) == Outcome::Budget) return std::nullopt;
    return out;
}

std::optional<bool> MinimalImage::is_minimal(std::span<const PointId> set) {
    std::vector<PointId> out;
    switch (run(set, true, out)) {
        case Outcome::Budget:
            return std::nullopt;
        case Outcome::Smaller:
            return false;
        case Outcome::Done:
            break;
    }
    std::vector<PointId> s(set.begin(), set.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return out == s;
}

}  // namespace hjelmslev
