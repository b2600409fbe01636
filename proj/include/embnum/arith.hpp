#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace embnum {

using Int = long long;
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline Int gcd_ll(Int a, Int b) { return std::gcd(a, b); }

/// Least nonnegative residue of a mod m (m > 0).
inline Int mod_floor(Int a, Int m) {
    Int r = a % m;
    return r < 0 ? r + m : r;
}

inline Int ceil_div(Int a, Int b) {
    if (b <= 0) throw std::invalid_argument("ceil_div: positive divisor required");
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

/// Exact integer square root test.
inline bool is_perfect_square(Int a) {
    if (a < 0) return false;
    Int r = static_cast<Int>(std::sqrt(static_cast<double>(a)));
    while (r > 0 && r * r > a) --r;
    while ((r + 1) * (r + 1) <= a) ++r;
    return r * r == a;
}

} // namespace embnum
