#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace median {

/// Fixed-length bit string.  Bit i lives in word i/64 at position 63 - i%64, so
/// comparing the word arrays lexicographically orders equal-length values exactly
/// like their '0'/'1' string renderings.  Unused tail bits are always zero.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    static BitVec from_string(std::string_view s)
    {
        BitVec v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                v.set(i);
            else if (s[i] != '0')
                throw std::invalid_argument("bit string contains a character other than 0/1");
        }
        return v;
    }

    static BitVec filled(std::size_t nbits)
    {
        BitVec v(nbits);
        for (auto & w : v.words_)
            w = ~std::uint64_t{0};
        v.trim();
        return v;
    }

    std::size_t size() const noexcept { return nbits_; }
    bool empty() const noexcept { return nbits_ == 0; }

    bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (63 - (i & 63))) & 1U; }
    bool operator[](std::size_t i) const noexcept { return test(i); }

    void set(std::size_t i, bool value = true) noexcept
    {
        const std::uint64_t mask = std::uint64_t{1} << (63 - (i & 63));
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void reset(std::size_t i) noexcept { set(i, false); }

    void push_back(bool value)
    {
        if ((nbits_ & 63) == 0)
            words_.push_back(0);
        ++nbits_;
        set(nbits_ - 1, value);
    }

    std::size_t count() const noexcept
    {
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool any() const noexcept
    {
        return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
    }
    bool none() const noexcept { return ! any(); }
    bool all() const noexcept { return count() == nbits_; }

    bool is_subset_of(const BitVec & other) const noexcept
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i])
                return false;
        return true;
    }
    bool intersects(const BitVec & other) const noexcept
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i])
                return true;
        return false;
    }

    /// Number of positions where the two vectors differ.
    std::size_t distance(const BitVec & other) const noexcept
    {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
        return c;
    }

    BitVec & operator&=(const BitVec & o) noexcept
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= o.words_[i];
        return *this;
    }
    BitVec & operator|=(const BitVec & o) noexcept
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] |= o.words_[i];
        return *this;
    }
    BitVec & operator^=(const BitVec & o) noexcept
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] ^= o.words_[i];
        return *this;
    }
    BitVec operator~() const
    {
        BitVec r = *this;
        for (auto & w : r.words_)
            w = ~w;
        r.trim();
        return r;
    }
    friend BitVec operator&(BitVec a, const BitVec & b) { return a &= b; }
    friend BitVec operator|(BitVec a, const BitVec & b) { return a |= b; }
    friend BitVec operator^(BitVec a, const BitVec & b) { return a ^= b; }

    /// Coordinatewise majority.
    static BitVec majority(const BitVec & a, const BitVec & b, const BitVec & c)
    {
        BitVec r(a.nbits_);
        for (std::size_t i = 0; i < r.words_.size(); ++i)
            r.words_[i] = (a.words_[i] & b.words_[i]) | (a.words_[i] & c.words_[i]) | (b.words_[i] & c.words_[i]);
        return r;
    }

    BitVec concat(const BitVec & tail) const
    {
        BitVec r = *this;
        for (std::size_t i = 0; i < tail.size(); ++i)
            r.push_back(tail.test(i));
        return r;
    }

    /// Index of the first set bit at or after `from`, or size() when there is none.
    std::size_t find_next(std::size_t from) const noexcept
    {
        if (from >= nbits_)
            return nbits_;
        std::size_t wi = from >> 6;
        std::uint64_t w = words_[wi] & (~std::uint64_t{0} >> (from & 63));
        while (true) {
            if (w)
                return std::min(nbits_, (wi << 6) + static_cast<std::size_t>(std::countl_zero(w)));
            if (++wi == words_.size())
                return nbits_;
            w = words_[wi];
        }
    }
    std::size_t find_first() const noexcept { return find_next(0); }

    template <typename F>
    void for_each_set(F && f) const
    {
        for (std::size_t i = find_first(); i < nbits_; i = find_next(i + 1))
            f(i);
    }

    std::vector<std::size_t> indices() const
    {
        std::vector<std::size_t> r;
        for_each_set([&](std::size_t i) { r.push_back(i); });
        return r;
    }

    std::string to_string() const
    {
        std::string s(nbits_, '0');
        for (std::size_t i = 0; i < nbits_; ++i)
            if (test(i))
                s[i] = '1';
        return s;
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    std::size_t hash() const noexcept
    {
        std::size_t h = std::hash<std::size_t>{}(nbits_);
        for (auto w : words_)
            h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

    friend bool operator==(const BitVec &, const BitVec &) = default;

    /// Length first, then string order.
    friend std::strong_ordering operator<=>(const BitVec & a, const BitVec & b) noexcept
    {
        if (auto c = a.nbits_ <=> b.nbits_; c != 0)
            return c;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            if (auto c = a.words_[i] <=> b.words_[i]; c != 0)
                return c;
        return std::strong_ordering::equal;
    }

private:
    void trim() noexcept
    {
        if (nbits_ & 63)
            words_.back() &= ~std::uint64_t{0} << (64 - (nbits_ & 63));
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitVecHash {
    std::size_t operator()(const BitVec & v) const noexcept { return v.hash(); }
};

/// A hypercube vertex.
using Point = BitVec;
/// A set of carrier positions of some algebra.
using Subset = BitVec;

} // namespace median
