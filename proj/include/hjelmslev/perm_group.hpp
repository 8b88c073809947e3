#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "hjelmslev/plane.hpp"

namespace hjelmslev {

/// A permutation of {0, ..., degree-1}, stored as its image array.
/// Products compose left to right: (a * b)(x) = b(a(x)).
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::size_t degree);
    explicit Permutation(std::vector<PointId> images);

    static Permutation identity(std::size_t degree) { return Permutation(degree); }

    std::size_t degree() const { return images_.size(); }
    PointId operator[](PointId x) const { return images_[x]; }
    PointId operator()(PointId x) const { return images_[x]; }
    const std::vector<PointId>& images() const { return images_; }

    bool is_identity() const;
    Permutation inverse() const;
    std::uint64_t order() const;
    /// Smallest moved point, or degree() for the identity.
    PointId first_moved() const;

    friend Permutation operator*(const Permutation& a, const Permutation& b);
    friend bool operator==(const Permutation& a, const Permutation& b) = default;
    friend auto operator<=>(const Permutation& a, const Permutation& b) = default;

private:
    std::vector<PointId> images_;
};

/// Multiplies group orders, throwing Error on 64-bit overflow.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

/// \brief Complete base and strong generating set.
///
/// Level i stores the base point b_i, generators of G^(i) = G_{b_1..b_{i-1}}, the basic orbit of
/// b_i with explicit transversal elements (transversal[k] maps b_i to orbit[k]).
class StabilizerChain {
public:
    struct Level {
        PointId base = 0;
        std::vector<Permutation> generators;
        std::vector<PointId> orbit;
        std::vector<std::int32_t> position;  // per point: index in orbit or -1
        std::vector<Permutation> transversal;
        std::vector<Permutation> inverse_transversal;

        bool contains(PointId x) const { return position[x] >= 0; }
        const Permutation& to(PointId x) const { return transversal[static_cast<std::size_t>(position[x])]; }
    };

    StabilizerChain() = default;
    explicit StabilizerChain(std::size_t degree) : degree_(degree) {}

    std::size_t degree() const { return degree_; }
    std::size_t depth() const { return levels_.size(); }
    const Level& level(std::size_t i) const { return *levels_[i]; }
    std::vector<PointId> base() const;
    std::uint64_t order() const;
    bool trivial() const { return levels_.empty(); }

    /// Generators of the whole group (those of the first level).
    const std::vector<Permutation>& generators() const;

    /// Sifts g from level `from`. Returns the residue and the level where sifting stopped
    /// (depth() if it passed all levels).
    std::pair<Permutation, std::size_t> sift(Permutation g, std::size_t from = 0) const;
    bool contains(const Permutation& g) const;

    /// The chain of G^(1) = G_{b_1}.
    StabilizerChain tail() const;

    /// A uniformly distributed group element.
    template <class Rng>
    Permutation random_element(Rng& rng) const {
        Permutation g = Permutation::identity(degree_);
        for (std::size_t i = levels_.size(); i-- > 0;) {
            const Level& lv = *levels_[i];
            std::uniform_int_distribution<std::size_t> pick(0, lv.orbit.size() - 1);
            g = g * lv.transversal[pick(rng)];
        }
        return g;
    }

    /// Calls f on every group element. Intended for small groups.
    template <class F>
    void for_each_element(F&& f) const {
        Permutation id = Permutation::identity(degree_);
        enumerate(0, id, f);
    }

    /// Deterministic Schreier-Sims. New base points are the least points moved by a residue.
    static StabilizerChain schreier_sims(std::size_t degree, const std::vector<Permutation>& gens,
                                         const std::vector<PointId>& initial_base = {});

    /// Randomized Schreier-Sims with a known target order (exact, Las Vegas).
    /// `sample` must return uniformly distributed elements of the target group.
    static StabilizerChain from_random_elements(std::size_t degree, std::uint64_t target_order,
                                                const std::function<Permutation()>& sample,
                                                const std::vector<Permutation>& seed_gens = {});

private:
    template <class F>
    void enumerate(std::size_t i, const Permutation& prefix, F& f) const {
        if (i == levels_.size()) {
            f(prefix);
            return;
        }
        for (const Permutation& u : levels_[i]->transversal) enumerate(i + 1, u * prefix, f);
    }

    friend class ChainBuilder;
    std::size_t degree_ = 0;
    std::vector<std::shared_ptr<const Level>> levels_;
};

/// Orbit of a point under generators, with a Schreier tree for transversal words.
/// The generators must outlive the Orbit.
class Orbit {
public:
    Orbit(std::size_t degree, std::span<const Permutation> gens, PointId root);

    PointId root() const { return root_; }
    const std::vector<PointId>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool contains(PointId x) const { return parent_gen_[x] != kAbsent; }
    /// An element of the generated group mapping root() to x.
    Permutation transversal(PointId x) const;

private:
    static constexpr std::int32_t kAbsent = -2;
    std::size_t degree_;
    PointId root_;
    std::span<const Permutation> gens_;
    std::vector<PointId> points_;
    std::vector<std::int32_t> parent_gen_;  // -1 at root
    std::vector<PointId> parent_;
};

/// Orbit partition of {0..degree-1}: entry x is the least point of the orbit of x.
std::vector<PointId> orbit_minima(std::size_t degree, std::span<const Permutation> gens);

/// Orbits of a point set under generators, each sorted, ordered by least element.
std::vector<std::vector<PointId>> orbits_on(std::size_t degree, std::span<const Permutation> gens,
                                            std::span<const PointId> points);

/// Stabilizer of x in the group described by `chain` (known-order randomized construction).
StabilizerChain point_stabilizer(const StabilizerChain& chain, PointId x, std::uint64_t seed = 0);

/// A permutation group with a complete stabilizer chain.
class PermGroup {
public:
    PermGroup() = default;
    PermGroup(std::size_t degree, std::vector<Permutation> generators);
    explicit PermGroup(StabilizerChain chain);

    std::size_t degree() const { return chain_.degree(); }
    const std::vector<Permutation>& generators() const { return generators_; }
    const StabilizerChain& chain() const { return chain_; }
    std::uint64_t order() const { return chain_.order(); }
    bool contains(const Permutation& g) const { return chain_.contains(g); }

    std::vector<PointId> orbit(PointId x) const;
    /// Orbit of a set under the induced action; sets are sorted vectors. Intended for small orbits.
    std::vector<std::vector<PointId>> set_orbit(std::vector<PointId> set, std::size_t limit = 100000) const;

private:
    std::vector<Permutation> generators_;
    StabilizerChain chain_;
};

/// Applies g to a set and returns the sorted image.
std::vector<PointId> apply_to_set(const Permutation& g, std::span<const PointId> set);

/// Setwise stabilizer {g in G : g(S) = S} by backtrack over a stabilizer chain along S.
PermGroup setwise_stabilizer(const PermGroup& group, std::span<const PointId> set);

/// \brief Lexicographically least images of point sets under a fixed group.
///
/// Holds memoized stabilizer chains of the prefix tuples visited so far, so one instance should be
/// reused for many calls. Not thread-safe; give each worker its own.
class MinimalImage {
public:
    explicit MinimalImage(const PermGroup& group, std::size_t candidate_budget = 200000);

    /// Least sorted image of `set`. Returns nullopt when the candidate budget is exceeded.
    std::optional<std::vector<PointId>> image(std::span<const PointId> set);
    /// True iff sorted(set) equals its least image. nullopt on budget exhaustion.
    std::optional<bool> is_minimal(std::span<const PointId> set);

    std::size_t cached_levels() const { return cache_.size(); }
    void clear_cache() { cache_.clear(); }

private:
    struct Node {
        StabilizerChain chain;
        std::vector<PointId> orbit_min;
        std::map<PointId, std::unique_ptr<Orbit>> trees;  // Schreier trees rooted at orbit minima
    };
    enum class Outcome { Done, Smaller, Budget };

    Node& node(const std::vector<PointId>& prefix);
    Permutation map_to_min(Node& n, PointId t);
    Outcome run(std::span<const PointId> set, bool stop_if_smaller, std::vector<PointId>& out);

    const PermGroup* group_;
    std::size_t budget_;
    std::map<std::vector<PointId>, std::unique_ptr<Node>> cache_;
};

}  // namespace hjelmslev
