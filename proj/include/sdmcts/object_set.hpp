#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sdmcts {

/// Dense set of object indices in [0, universe). Extents, label masks and
/// value masks all use this representation so set algebra stays word-wise.
class ObjectSet {
  public:
    using word_type = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    ObjectSet() = default;
    explicit ObjectSet(std::size_t universe, bool filled = false)
        : universe_(universe), words_((universe + word_bits - 1) / word_bits, filled ? ~word_type{0} : 0) {
        trim();
    }

    static ObjectSet from_indices(std::size_t universe, std::span<const std::size_t> indices) {
        ObjectSet s(universe);
        for (auto i : indices) s.insert(i);
        return s;
    }

    std::size_t universe() const noexcept { return universe_; }

    void insert(std::size_t i) noexcept { words_[i / word_bits] |= word_type{1} << (i % word_bits); }
    void erase(std::size_t i) noexcept { words_[i / word_bits] &= ~(word_type{1} << (i % word_bits)); }
    bool contains(std::size_t i) const noexcept { return (words_[i / word_bits] >> (i % word_bits)) & 1U; }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool empty() const noexcept {
        return std::all_of(words_.begin(), words_.end(), [](word_type w) { return w == 0; });
    }

    ObjectSet& operator&=(const ObjectSet& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    ObjectSet& operator|=(const ObjectSet& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    /// Removes every member of `o`.
    ObjectSet& subtract(const ObjectSet& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend ObjectSet operator&(ObjectSet a, const ObjectSet& b) noexcept { return a &= b; }
    friend ObjectSet operator|(ObjectSet a, const ObjectSet& b) noexcept { return a |= b; }

    friend bool operator==(const ObjectSet& a, const ObjectSet& b) noexcept {
        return a.universe_ == b.universe_ && a.words_ == b.words_;
    }

    bool is_subset_of(const ObjectSet& o) const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for (std::size_t w = 0; w < words_.size(); ++w) {
            auto bits = words_[w];
            while (bits) {
                out.push_back(w * word_bits + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    std::span<const word_type> words() const noexcept { return words_; }

    std::size_t hash() const noexcept {
        std::size_t h = universe_;
        for (auto w : words_) h ^= std::hash<word_type>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

  private:
    void trim() noexcept {
        if (auto rem = universe_ % word_bits; rem != 0 && !words_.empty())
            words_.back() &= (word_type{1} << rem) - 1;
    }

    std::size_t universe_ = 0;
    std::vector<word_type> words_;
};

inline std::size_t intersection_count(const ObjectSet& a, const ObjectSet& b) noexcept {
    auto wa = a.words(), wb = b.words();
    std::size_t c = 0;
    for (std::size_t i = 0; i < wa.size(); ++i) c += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
    return c;
}

inline std::size_t intersection_count(const ObjectSet& a, const ObjectSet& b, const ObjectSet& c) noexcept {
    auto wa = a.words(), wb = b.words(), wc = c.words();
    std::size_t n = 0;
    for (std::size_t i = 0; i < wa.size(); ++i) n += static_cast<std::size_t>(std::popcount(wa[i] & wb[i] & wc[i]));
    return n;
}

inline std::size_t union_count(const ObjectSet& a, const ObjectSet& b) noexcept {
    auto wa = a.words(), wb = b.words();
    std::size_t c = 0;
    for (std::size_t i = 0; i < wa.size(); ++i) c += static_cast<std::size_t>(std::popcount(wa[i] | wb[i]));
    return c;
}

}  // namespace sdmcts

template <>
struct std::hash<sdmcts::ObjectSet> {
    std::size_t operator()(const sdmcts::ObjectSet& s) const noexcept { return s.hash(); }
};
