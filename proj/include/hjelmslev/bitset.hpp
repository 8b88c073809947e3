#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hjelmslev {

using Word = std::uint64_t;

constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

/// Dynamically sized bitset over point or line ids.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t bits) : bits_(bits), words_(words_for(bits), 0) {}
    Bitset(std::size_t bits, std::span<const Word> words) : bits_(bits), words_(words.begin(), words.end()) {}

    std::size_t size() const { return bits_; }
    std::span<const Word> words() const { return words_; }
    std::span<Word> words() { return words_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i) { words_[i >> 6] |= Word{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(Word{1} << (i & 63)); }
    void set_all() {
        for (auto& w : words_) w = ~Word{0};
        trim();
    }
    void clear() {
        for (auto& w : words_) w = 0;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool any() const {
        for (Word w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    /// Index of the lowest set bit, or size() if none.
    std::size_t first() const { return next(0); }
    /// Index of the lowest set bit >= i, or size() if none.
    std::size_t next(std::size_t i) const {
        if (i >= bits_) return bits_;
        std::size_t wi = i >> 6;
        Word w = words_[wi] & (~Word{0} << (i & 63));
        while (true) {
            if (w) return (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
            if (++wi >= words_.size()) return bits_;
            w = words_[wi];
        }
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            Word w = words_[wi];
            while (w) {
                f((wi << 6) + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<std::uint32_t> to_vector() const {
        std::vector<std::uint32_t> out;
        for_each([&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
        return out;
    }

    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitset& subtract(std::span<const Word> o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o[i];
        return *this;
    }
    Bitset& subtract(const Bitset& o) { return subtract(o.words()); }

    bool intersects(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }
    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend bool operator==(const Bitset& a, const Bitset& b) = default;

private:
    void trim() {
        if (bits_ & 63) words_.back() &= (Word{1} << (bits_ & 63)) - 1;
    }

    std::size_t bits_ = 0;
    std::vector<Word> words_;
};

}  // namespace hjelmslev
