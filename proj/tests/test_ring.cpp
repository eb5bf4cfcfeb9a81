#include <doctest.h>

#include <cmath>
#include <vector>

#include "ppfl/ring.hpp"
#include "ppfl/rng.hpp"

using namespace ppfl;

TEST_SUITE("ring") {

TEST_CASE("encode known values") {
    FixedPointParams p;
    p.frac_bits = 16;
    p.int_bits = 20;
    CHECK(encode(1.5, p).v == 98304);
    CHECK(encode(0.0, p).v == 0);
    // -1.0 maps to the upper half of the ring
    CHECK(encode(-1.0, p).v == 0xffffffffffffffffULL - 65536 + 1);
}

TEST_CASE("encode rejects out-of-range and non-finite") {
    FixedPointParams p;  // defaults: f=24, k=20
    CHECK_THROWS_AS(encode(std::ldexp(1.0, p.int_bits), p), std::out_of_range);
    CHECK_THROWS_AS(encode(-std::ldexp(1.0, p.int_bits) - 1, p), std::out_of_range);
    CHECK_THROWS_AS(encode(std::nan(""), p), std::out_of_range);
    CHECK_NOTHROW(encode(std::ldexp(1.0, p.int_bits) - 1.0, p));
}

TEST_CASE("decode known values and range guard") {
    FixedPointParams p;
    p.frac_bits = 16;
    p.int_bits = 20;
    CHECK(decode(RingElem{98304}, p) == doctest::Approx(1.5).epsilon(0));
    CHECK(decode(RingElem{0xffffffffffffffffULL - 65535}, p) == doctest::Approx(-1.0).epsilon(0));
    FixedPointParams small;
    small.frac_bits = 4;
    small.int_bits = 4;
    CHECK_THROWS_AS(decode(RingElem{1u << 9}, small), std::out_of_range);
    CHECK_NOTHROW(decode(RingElem{(1u << 8) - 1}, small));
}

TEST_CASE("roundtrip bound at f=24") {
    FixedPointParams p;
    p.frac_bits = 24;
    const double x = 0.333;
    CHECK(std::abs(decode(encode(x, p), p) - x) <= std::ldexp(1.0, -24));
}

TEST_CASE("ring_sum basics") {
    FixedPointParams p;
    std::vector<RingElem> empty;
    CHECK(ring_sum(empty).v == 0);
    const RingElem x = encode(123.456, p);
    std::vector<RingElem> cancel{x, ring_neg(x)};
    CHECK(ring_sum(cancel).v == 0);
    std::vector<RingElem> h{encode(1.0, p), encode(2.0, p), encode(3.0, p)};
    CHECK(ring_sum(h) == encode(6.0, p));
}

TEST_CASE("exact negation for representable values") {
    FixedPointParams p;
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-1000.0, 1000.0);
        CHECK((encode(x, p) + encode(-x, p)).v == 0);
    }
}

TEST_CASE("roundtrip over 1e5 random values") {
    FixedPointParams p;
    Rng rng(7);
    const double bound = std::ldexp(1.0, -(p.frac_bits + 1)) * (1 + 1e-9);
    for (int i = 0; i < 100000; ++i) {
        const double x = rng.uniform(-std::ldexp(1.0, p.int_bits) + 1,
                                     std::ldexp(1.0, p.int_bits) - 1);
        CHECK(std::abs(decode(encode(x, p), p) - x) <= bound);
    }
}

TEST_CASE("addition homomorphism within half-ulp slack") {
    FixedPointParams p;
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.uniform(-100.0, 100.0);
        const double y = rng.uniform(-100.0, 100.0);
        const double got = decode(encode(x, p) + encode(y, p), p);
        CHECK(std::abs(got - (x + y)) <= std::ldexp(1.0, -(p.frac_bits - 1)));
    }
}

TEST_CASE("ring_sum is permutation invariant") {
    FixedPointParams p;
    Rng rng(13);
    std::vector<RingElem> xs;
    for (int i = 0; i < 200; ++i) xs.push_back(RingElem{rng.next_u64()});
    const RingElem a = ring_sum(xs);
    // deterministic shuffle
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[rng.below(i)]);
    CHECK(ring_sum(xs) == a);
}

TEST_CASE("fixed point parameter validation") {
    FixedPointParams bad;
    bad.frac_bits = 40;
    bad.int_bits = 30;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.frac_bits = 0;
    bad.int_bits = 10;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

}  // TEST_SUITE
