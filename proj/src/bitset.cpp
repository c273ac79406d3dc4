#include "catlog/bitset.hpp"

#include <bit>
#include <cassert>
#include <stdexcept>

#include "catlog/errors.hpp"

namespace catlog {

namespace {
std::size_t word_count(std::size_t nbits) { return (nbits + 63) / 64; }
} // namespace

Bitset::Bitset(std::size_t nbits) : nbits_(nbits), words_(word_count(nbits), 0) {}

Bitset Bitset::ones(std::size_t nbits) {
    Bitset b(nbits);
    for (auto& w : b.words_) w = ~std::uint64_t{0};
    b.clear_tail();
    return b;
}

Bitset Bitset::singleton(std::size_t nbits, std::size_t index) {
    Bitset b(nbits);
    b.set(index);
    return b;
}

Bitset Bitset::from_indices(std::size_t nbits, const std::vector<std::size_t>& indices) {
    Bitset b(nbits);
    for (std::size_t i : indices) b.set(i);
    return b;
}

void Bitset::clear_tail() {
    if (nbits_ % 64 != 0 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << (nbits_ % 64)) - 1;
}

std::size_t Bitset::count() const {
    std::size_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
}

bool Bitset::any() const {
    for (auto w : words_)
        if (w) return true;
    return false;
}

bool Bitset::all() const { return count() == nbits_; }

bool Bitset::is_subset_of(const Bitset& other) const {
    if (nbits_ != other.nbits_)
        throw InternalInvariantViolation("bitset width mismatch in subset test");
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

#define CATLOG_BITSET_BINOP(op)                                              \
    Bitset Bitset::operator op(const Bitset& o) const {                     \
        if (nbits_ != o.nbits_)                                             \
            throw InternalInvariantViolation("bitset width mismatch");      \
        Bitset r(nbits_);                                                   \
        for (std::size_t i = 0; i < words_.size(); ++i)                     \
            r.words_[i] = words_[i] op o.words_[i];                         \
        return r;                                                           \
    }

CATLOG_BITSET_BINOP(&)
CATLOG_BITSET_BINOP(|)
CATLOG_BITSET_BINOP(^)
#undef CATLOG_BITSET_BINOP

Bitset Bitset::operator~() const {
    Bitset r(nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
    r.clear_tail();
    return r;
}

Bitset Bitset::minus(const Bitset& o) const {
    if (nbits_ != o.nbits_)
        throw InternalInvariantViolation("bitset width mismatch");
    Bitset r(nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & ~o.words_[i];
    return r;
}

Bitset& Bitset::operator&=(const Bitset& o) {
    if (nbits_ != o.nbits_)
        throw InternalInvariantViolation("bitset width mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

Bitset& Bitset::operator|=(const Bitset& o) {
    if (nbits_ != o.nbits_)
        throw InternalInvariantViolation("bitset width mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

bool Bitset::operator<(const Bitset& o) const {
    if (nbits_ != o.nbits_) return nbits_ < o.nbits_;
    for (std::size_t i = words_.size(); i-- > 0;)
        if (words_[i] != o.words_[i]) return words_[i] < o.words_[i];
    return false;
}

std::vector<std::size_t> Bitset::bits() const {
    std::vector<std::size_t> out;
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
        std::uint64_t w = words_[wi];
        while (w) {
            int tz = std::countr_zero(w);
            out.push_back(wi * 64 + static_cast<std::size_t>(tz));
            w &= w - 1;
        }
    }
    return out;
}

std::uint64_t Bitset::to_uint64() const {
    if (nbits_ > 64)
        throw InternalInvariantViolation("bitset too wide for numeric value");
    return words_.empty() ? 0 : words_[0];
}

std::string Bitset::to_string() const {
    std::string s(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i)
        if (test(i)) s[i] = '1';
    return s;
}

std::size_t Bitset::Hash::operator()(const Bitset& b) const {
    std::size_t h = b.nbits_ * 0x9e3779b97f4a7c15ull;
    for (auto w : b.words_) h = (h ^ w) * 0x100000001b3ull;
    return h;
}

} // namespace catlog
