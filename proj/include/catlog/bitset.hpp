#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace catlog {

// Fixed-width dynamic bitset. Used for subsets of models, subsets of atoms,
// and subsets of points; width is fixed at construction and all binary
// operations require equal widths.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t nbits);

    static Bitset zeros(std::size_t nbits) { return Bitset(nbits); }
    static Bitset ones(std::size_t nbits);
    static Bitset singleton(std::size_t nbits, std::size_t index);
    static Bitset from_indices(std::size_t nbits, const std::vector<std::size_t>& indices);

    std::size_t size() const { return nbits_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::size_t count() const;
    bool any() const;
    bool none() const { return !any(); }
    bool all() const;

    bool is_subset_of(const Bitset& other) const;

    Bitset operator&(const Bitset& o) const;
    Bitset operator|(const Bitset& o) const;
    Bitset operator^(const Bitset& o) const;
    Bitset operator~() const;
    // Set difference: bits in *this and not in o.
    Bitset minus(const Bitset& o) const;

    Bitset& operator&=(const Bitset& o);
    Bitset& operator|=(const Bitset& o);

    bool operator==(const Bitset& o) const { return nbits_ == o.nbits_ && words_ == o.words_; }
    bool operator!=(const Bitset& o) const { return !(*this == o); }
    // Total order: by width, then numerically (bit i has weight 2^i).
    bool operator<(const Bitset& o) const;

    // Indices of set bits, ascending.
    std::vector<std::size_t> bits() const;

    // Numeric value with bit i weighted 2^i. Width must be at most 64.
    std::uint64_t to_uint64() const;

    // Character at position i is bit i ('0'/'1'), so position order matches index order.
    std::string to_string() const;

    struct Hash {
        std::size_t operator()(const Bitset& b) const;
    };

private:
    void clear_tail();
    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace catlog
