#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace ppfl {

// Fixed-point layout: values x with |x| < 2^int_bits are represented as
// round(x * 2^frac_bits) in Z_{2^64}. Negative values land in the upper half
// of the ring (two's-complement embedding), so addition of encodings is exact
// wrapping group arithmetic and masks cancel bit-for-bit.
struct FixedPointParams {
    int frac_bits = 24;
    int int_bits = 20;
    static constexpr int modulus_log2 = 64;

    void validate() const {
        if (frac_bits < 1 || int_bits < 1)
            throw std::invalid_argument("fixed-point: frac_bits and int_bits must be >= 1");
        if (frac_bits + int_bits > 62)
            throw std::invalid_argument("fixed-point: frac_bits + int_bits must be <= 62");
    }
};

struct RingElem {
    std::uint64_t v = 0;

    friend constexpr RingElem operator+(RingElem a, RingElem b) { return {a.v + b.v}; }
    friend constexpr RingElem operator-(RingElem a, RingElem b) { return {a.v - b.v}; }
    constexpr RingElem operator-() const { return {~v + 1}; }
    RingElem& operator+=(RingElem o) {
        v += o.v;
        return *this;
    }
    RingElem& operator-=(RingElem o) {
        v -= o.v;
        return *this;
    }
    friend constexpr bool operator==(RingElem a, RingElem b) { return a.v == b.v; }
};

inline RingElem ring_neg(RingElem e) { return -e; }

inline RingElem ring_sum(std::span<const RingElem> elems) {
    RingElem acc{};
    for (const RingElem e : elems) acc += e;
    return acc;
}

// round(x * 2^f) mod 2^64, rounding half away from zero.
inline RingElem encode(double x, const FixedPointParams& p) {
    if (!std::isfinite(x)) throw std::out_of_range("encode: non-finite value");
    if (std::abs(x) >= std::ldexp(1.0, p.int_bits))
        throw std::out_of_range("encode: |" + std::to_string(x) + "| >= 2^" +
                                std::to_string(p.int_bits));
    const long long scaled = std::llround(std::ldexp(x, p.frac_bits));
    return {static_cast<std::uint64_t>(scaled)};
}

// Centered lift: residues >= 2^63 are negative.
inline std::int64_t centered_lift(RingElem e) { return static_cast<std::int64_t>(e.v); }

// Inverse of encode. The lift must fit the fixed-point range.
inline double decode(RingElem e, const FixedPointParams& p) {
    const std::int64_t s = centered_lift(e);
    const std::int64_t limit = static_cast<std::int64_t>(1) << (p.frac_bits + p.int_bits);
    if (s >= limit || s <= -limit)
        throw std::out_of_range("decode: value outside fixed-point range");
    return std::ldexp(static_cast<double>(s), -p.frac_bits);
}

// Decode of an aggregate (a ring_sum of up to ~2^16 encodings). No fixed-point
// range check: the layout invariant frac+int <= 62 guarantees such sums never
// wrap past half the ring, so the centered lift is already correct.
inline double decode_sum(RingElem e, const FixedPointParams& p) {
    return std::ldexp(static_cast<double>(centered_lift(e)), -p.frac_bits);
}

}  // namespace ppfl
