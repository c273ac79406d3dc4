#include <vector>

#include "doctest.h"

#include "catlog/bitset.hpp"
#include "catlog/errors.hpp"

using namespace catlog;

TEST_CASE("construction and element access") {
    Bitset b(70);
    CHECK(b.size() == 70);
    CHECK(b.none());
    b.set(0);
    b.set(69);
    CHECK(b.test(0));
    CHECK(b.test(69));
    CHECK_FALSE(b.test(35));
    CHECK(b.count() == 2);
    b.reset(0);
    CHECK_FALSE(b.test(0));

    CHECK(Bitset::ones(70).count() == 70);
    CHECK(Bitset::ones(70).all());
    CHECK(Bitset::singleton(5, 3).bits() == std::vector<std::size_t>{3});
    CHECK(Bitset::from_indices(6, {4, 1}).bits() == std::vector<std::size_t>{1, 4});
    CHECK(Bitset(0).all()); // vacuously full
}

TEST_CASE("boolean operations respect the width") {
    Bitset a = Bitset::from_indices(8, {0, 1, 4});
    Bitset b = Bitset::from_indices(8, {1, 2, 4, 7});
    CHECK((a & b).bits() == std::vector<std::size_t>{1, 4});
    CHECK((a | b).bits() == std::vector<std::size_t>{0, 1, 2, 4, 7});
    CHECK((a ^ b).bits() == std::vector<std::size_t>{0, 2, 7});
    CHECK(a.minus(b).bits() == std::vector<std::size_t>{0});
    CHECK((~a).bits() == std::vector<std::size_t>{2, 3, 5, 6, 7});
    CHECK((~Bitset(70)).all()); // complement masks the unused tail bits
    CHECK(a.is_subset_of(a | b));
    CHECK_FALSE(a.is_subset_of(b));
    CHECK_THROWS_AS((void)(a & Bitset(9)), InternalInvariantViolation);
}

TEST_CASE("ordering is width-major, then numeric") {
    CHECK(Bitset(3) < Bitset(4));
    Bitset two = Bitset::from_indices(70, {1});
    Bitset five = Bitset::from_indices(70, {0, 2});
    Bitset high = Bitset::from_indices(70, {66});
    CHECK(two < five);
    CHECK(five < high);
    CHECK_FALSE(high < five);
}

TEST_CASE("string and numeric views use position = bit index") {
    Bitset b = Bitset::from_indices(4, {0, 2});
    CHECK(b.to_string() == "1010");
    CHECK(b.to_uint64() == 5);
    CHECK_THROWS_AS((void)Bitset(65).to_uint64(), InternalInvariantViolation);
}
