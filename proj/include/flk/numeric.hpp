#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace flk {

// All public interfaces carry arbitrary-precision integers.  The linear
// algebra kernels first try a machine-word fast path (type `i64` below) and
// redo the computation with `Int` when an overflow check fires, so results
// are exact in every case.
using Int = boost::multiprecision::cpp_int;

// Thrown by i64 arithmetic on overflow; caught inside the escalation
// wrappers, never surfaced to callers.
struct overflow_signal {};

struct i64 {
    std::int64_t v = 0;

    i64() = default;
    i64(std::int64_t x) : v(x) {}

    friend i64 operator+(i64 a, i64 b) {
        i64 r;
        if (__builtin_add_overflow(a.v, b.v, &r.v)) throw overflow_signal{};
        return r;
    }
    friend i64 operator-(i64 a, i64 b) {
        i64 r;
        if (__builtin_sub_overflow(a.v, b.v, &r.v)) throw overflow_signal{};
        return r;
    }
    friend i64 operator*(i64 a, i64 b) {
        i64 r;
        if (__builtin_mul_overflow(a.v, b.v, &r.v)) throw overflow_signal{};
        return r;
    }
    friend i64 operator/(i64 a, i64 b) {
        if (b.v == 0 || (a.v == INT64_MIN && b.v == -1)) throw overflow_signal{};
        return i64(a.v / b.v);
    }
    friend i64 operator%(i64 a, i64 b) {
        if (b.v == 0 || (a.v == INT64_MIN && b.v == -1)) throw overflow_signal{};
        return i64(a.v % b.v);
    }
    i64 operator-() const {
        if (v == INT64_MIN) throw overflow_signal{};
        return i64(-v);
    }
    i64& operator+=(i64 b) { return *this = *this + b; }
    i64& operator-=(i64 b) { return *this = *this - b; }
    i64& operator*=(i64 b) { return *this = *this * b; }

    friend bool operator==(i64 a, i64 b) { return a.v == b.v; }
    friend bool operator!=(i64 a, i64 b) { return a.v != b.v; }
    friend bool operator<(i64 a, i64 b) { return a.v < b.v; }
    friend bool operator>(i64 a, i64 b) { return a.v > b.v; }
    friend bool operator<=(i64 a, i64 b) { return a.v <= b.v; }
    friend bool operator>=(i64 a, i64 b) { return a.v >= b.v; }
};

inline bool is_zero(const i64& x) { return x.v == 0; }
inline bool is_zero(const Int& x) { return x.is_zero(); }
inline bool is_neg(const i64& x) { return x.v < 0; }
inline bool is_neg(const Int& x) { return x.sign() < 0; }

// |a| < |b| without overflowing on INT64_MIN.
inline bool abs_less(const i64& a, const i64& b) {
    auto ua = a.v < 0 ? -static_cast<std::uint64_t>(a.v) : static_cast<std::uint64_t>(a.v);
    auto ub = b.v < 0 ? -static_cast<std::uint64_t>(b.v) : static_cast<std::uint64_t>(b.v);
    return ua < ub;
}
inline bool abs_less(const Int& a, const Int& b) { return abs(a) < abs(b); }

// Quotient with remainder in (-|b|/2, |b|/2]: keeps entries small during
// elimination.
inline i64 balanced_quotient(const i64& a, const i64& b) {
    i64 q = a / b;
    i64 r = a - q * b;
    if (!is_zero(r) && abs_less(b, r + r)) {
        q += (is_neg(r) == is_neg(b)) ? i64(1) : i64(-1);
    }
    return q;
}
inline Int balanced_quotient(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (!r.is_zero() && abs(b) < 2 * abs(r)) {
        q += (r.sign() == b.sign()) ? 1 : -1;
    }
    return q;
}

// Floor quotient, used when reducing entries into [0, pivot).
inline i64 floor_quotient(const i64& a, const i64& b) {
    i64 q = a / b;
    i64 r = a - q * b;
    if (!is_zero(r) && (is_neg(r) != is_neg(b))) q -= i64(1);
    return q;
}
inline Int floor_quotient(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (!r.is_zero() && (r.sign() != b.sign())) q -= 1;
    return q;
}

inline bool fits_i64(const Int& x) {
    static const Int lo = Int(INT64_MIN), hi = Int(INT64_MAX);
    return x >= lo && x <= hi;
}

inline std::string to_string(const Int& x) { return x.str(); }

}  // namespace flk
