#pragma once

// Small exact integer linear algebra on Z^3: row vectors, 3x3 matrices,
// overflow-checked products. Everything the proof pipeline multiplies goes
// through the checked helpers here.

#include <array>
#include <compare>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "ternrep/error.hpp"

namespace ternrep {

using Int = std::int64_t;
using Wide = __int128;

inline Int narrow(Wide v) {
    if (v > Wide(INT64_MAX) || v < Wide(INT64_MIN)) {
        throw Error(ErrorKind::Overflow, "value does not fit in 64 bits");
    }
    return static_cast<Int>(v);
}

inline Int checked_add(Int x, Int y) {
    Int out;
    if (__builtin_add_overflow(x, y, &out)) throw Error(ErrorKind::Overflow, "addition");
    return out;
}

inline Int checked_mul(Int x, Int y) {
    Int out;
    if (__builtin_mul_overflow(x, y, &out)) throw Error(ErrorKind::Overflow, "multiplication");
    return out;
}

inline Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

inline Wide wide_gcd(Wide x, Wide y) {
    x = wide_abs(x);
    y = wide_abs(y);
    while (y != 0) {
        Wide r = x % y;
        x = y;
        y = r;
    }
    return x;
}

/// Nonnegative remainder.
inline Int mod(Int x, Int m) {
    Int r = x % m;
    return r < 0 ? r + m : r;
}

inline Wide wide_mod(Wide x, Wide m) {
    Wide r = x % m;
    return r < 0 ? r + m : r;
}

/// floor(sqrt(n)) for n >= 0, exact.
inline Wide isqrt(Wide n) {
    if (n < 0) throw Error(ErrorKind::InvalidInput, "isqrt of negative value");
    if (n < 2) return n;
    auto r = static_cast<Wide>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// Floor and ceiling division for a positive divisor.
inline Wide floor_div(Wide num, Wide den) {
    Wide q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

inline Wide ceil_div(Wide num, Wide den) { return -floor_div(-num, den); }

inline std::string wide_to_string(Wide v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    std::string digits;
    // Negate digit by digit so INT128_MIN does not overflow.
    while (v != 0) {
        int digit = static_cast<int>(v % 10);
        digits.push_back(static_cast<char>('0' + (digit < 0 ? -digit : digit)));
        v /= 10;
    }
    if (neg) digits.push_back('-');
    return {digits.rbegin(), digits.rend()};
}

struct Vector3 {
    Int x{}, y{}, z{};

    Int operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    Int& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    bool is_zero() const { return x == 0 && y == 0 && z == 0; }

    friend auto operator<=>(const Vector3&, const Vector3&) = default;
    friend bool operator==(const Vector3&, const Vector3&) = default;
};

inline Vector3 operator-(const Vector3& v) { return {-v.x, -v.y, -v.z}; }

inline Int content(const Vector3& v) {
    return std::gcd(std::gcd(v.x, v.y), v.z);
}

inline bool is_primitive(const Vector3& v) { return content(v) == 1; }

inline std::string to_string(const Vector3& v) {
    return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + "," + std::to_string(v.z) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const Vector3& v) { return os << to_string(v); }

/// Row-major 3x3 integer matrix.
struct Matrix3 {
    std::array<std::array<Int, 3>, 3> m{};

    Int operator()(int r, int c) const { return m[r][c]; }
    Int& operator()(int r, int c) { return m[r][c]; }

    Vector3 column(int c) const { return {m[0][c], m[1][c], m[2][c]}; }
    Vector3 row(int r) const { return {m[r][0], m[r][1], m[r][2]}; }

    void set_column(int c, const Vector3& v) {
        for (int r = 0; r < 3; ++r) m[r][c] = v[r];
    }

    static Matrix3 identity() { return scalar(1); }

    static Matrix3 scalar(Int k) {
        Matrix3 out;
        for (int i = 0; i < 3; ++i) out.m[i][i] = k;
        return out;
    }

    static Matrix3 from_columns(const Vector3& c0, const Vector3& c1, const Vector3& c2) {
        Matrix3 out;
        out.set_column(0, c0);
        out.set_column(1, c1);
        out.set_column(2, c2);
        return out;
    }

    friend auto operator<=>(const Matrix3&, const Matrix3&) = default;
    friend bool operator==(const Matrix3&, const Matrix3&) = default;
};

inline Matrix3 transpose(const Matrix3& a) {
    Matrix3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.m[i][j] = a.m[j][i];
    return out;
}

inline Matrix3 operator*(const Matrix3& a, const Matrix3& b) {
    Matrix3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Wide acc = 0;
            for (int k = 0; k < 3; ++k) acc += Wide(a.m[i][k]) * b.m[k][j];
            out.m[i][j] = narrow(acc);
        }
    return out;
}

inline Matrix3 operator*(Int k, const Matrix3& a) {
    Matrix3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.m[i][j] = checked_mul(k, a.m[i][j]);
    return out;
}

/// Row vector times matrix: v * A.
inline Vector3 operator*(const Vector3& v, const Matrix3& a) {
    Vector3 out;
    for (int j = 0; j < 3; ++j) {
        Wide acc = 0;
        for (int k = 0; k < 3; ++k) acc += Wide(v[k]) * a.m[k][j];
        out[j] = narrow(acc);
    }
    return out;
}

/// u * A * v^t, exact.
inline Wide bilinear(const Matrix3& a, const Vector3& u, const Vector3& v) {
    Wide acc = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) acc += Wide(u[i]) * a.m[i][j] * v[j];
    return acc;
}

inline Wide determinant(const Matrix3& a) {
    const auto& m = a.m;
    return Wide(m[0][0]) * (Wide(m[1][1]) * m[2][2] - Wide(m[1][2]) * m[2][1]) -
           Wide(m[0][1]) * (Wide(m[1][0]) * m[2][2] - Wide(m[1][2]) * m[2][0]) +
           Wide(m[0][2]) * (Wide(m[1][0]) * m[2][1] - Wide(m[1][1]) * m[2][0]);
}

inline Matrix3 power(const Matrix3& a, int k) {
    Matrix3 out = Matrix3::identity();
    for (int i = 0; i < k; ++i) out = out * a;
    return out;
}

/// True iff every entry of v*A is divisible by d.
inline bool divides_row_product(const Vector3& v, const Matrix3& a, Int d) {
    for (int j = 0; j < 3; ++j) {
        Wide acc = 0;
        for (int k = 0; k < 3; ++k) acc += Wide(v[k]) * a.m[k][j];
        if (acc % d != 0) return false;
    }
    return true;
}

inline std::string to_string(const Matrix3& a) {
    std::string out = "[";
    for (int i = 0; i < 3; ++i) {
        out += "[";
        for (int j = 0; j < 3; ++j) {
            out += std::to_string(a.m[i][j]);
            if (j < 2) out += ",";
        }
        out += "]";
        if (i < 2) out += ",";
    }
    return out + "]";
}

inline std::ostream& operator<<(std::ostream& os, const Matrix3& a) { return os << to_string(a); }

}  // namespace ternrep
