#pragma once

#include <array>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "ternrep/error.hpp"
#include "ternrep/linalg.hpp"

namespace ternrep {

/// f(x,y,z) = a x^2 + b y^2 + c z^2 + r yz + s xz + t xy.
///
/// Coefficient order follows the usual table listing: the three squares, then
/// the cross terms yz, xz, xy. Values are not validated on construction; the
/// operations that need positive definiteness check it themselves.
struct QuadForm {
    Int a{}, b{}, c{}, r{}, s{}, t{};

    std::array<Int, 6> coefficients() const { return {a, b, c, r, s, t}; }

    static QuadForm from_coefficients(const std::array<Int, 6>& k) {
        return {k[0], k[1], k[2], k[3], k[4], k[5]};
    }

    friend bool operator==(const QuadForm&, const QuadForm&) = default;
    friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

/// 2 M_f, the integral symmetric matrix with v (2M_f) v^t = 2 f(v).
inline Matrix3 doubled_gram(const QuadForm& f) {
    Matrix3 m;
    m.m = {{{checked_mul(2, f.a), f.t, f.s}, {f.t, checked_mul(2, f.b), f.r}, {f.s, f.r, checked_mul(2, f.c)}}};
    return m;
}

/// The form whose doubled Gram matrix is `m`. Diagonal entries must be even.
inline QuadForm form_from_doubled_gram(const Matrix3& m) {
    if (m(0, 0) % 2 || m(1, 1) % 2 || m(2, 2) % 2)
        throw Error(ErrorKind::InvalidInput, "doubled Gram matrix needs an even diagonal");
    if (m(0, 1) != m(1, 0) || m(0, 2) != m(2, 0) || m(1, 2) != m(2, 1))
        throw Error(ErrorKind::InvalidInput, "Gram matrix is not symmetric");
    return {m(0, 0) / 2, m(1, 1) / 2, m(2, 2) / 2, m(1, 2), m(0, 2), m(0, 1)};
}

inline Int evaluate(const QuadForm& f, const Vector3& v) {
    const Wide x = v.x, y = v.y, z = v.z;
    Wide value = f.a * x * x + f.b * y * y + f.c * z * z + f.r * y * z + f.s * x * z + f.t * x * y;
    return narrow(value);
}

inline bool is_positive_definite(const QuadForm& f) {
    const Matrix3 g = doubled_gram(f);
    const Wide m1 = g(0, 0);
    const Wide m2 = Wide(g(0, 0)) * g(1, 1) - Wide(g(0, 1)) * g(1, 0);
    return m1 > 0 && m2 > 0 && determinant(g) > 0;
}

inline void require_positive_definite(const QuadForm& f);

inline QuadForm scale(const QuadForm& f, Int m) {
    if (m < 1) throw Error(ErrorKind::InvalidInput, "scale factor must be positive");
    return {checked_mul(f.a, m), checked_mul(f.b, m), checked_mul(f.c, m),
            checked_mul(f.r, m), checked_mul(f.s, m), checked_mul(f.t, m)};
}

/// det(2 M_f); isometric forms share it.
inline Wide doubled_determinant(const QuadForm& f) { return determinant(doubled_gram(f)); }

/// True when every value of f is even (all coefficients even).
inline bool is_even_valued(const QuadForm& f) {
    for (Int k : f.coefficients())
        if (k % 2 != 0) return false;
    return true;
}

inline std::string to_string(const QuadForm& f) {
    std::string out;
    auto k = f.coefficients();
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(k[i]);
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const QuadForm& f) { return os << to_string(f); }

/// Parses "a,b,c,r,s,t". Whitespace around entries is ignored.
inline QuadForm parse_form(std::string_view text) {
    std::array<Int, 6> k{};
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(pos, end - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (count >= 6) throw Error(ErrorKind::InvalidInput, "form needs exactly six coefficients: " + std::string(text));
        Int value = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty())
            throw Error(ErrorKind::InvalidInput, "bad coefficient '" + std::string(item) + "'");
        k[count++] = value;
        pos = end + 1;
    }
    if (count != 6) throw Error(ErrorKind::InvalidInput, "form needs exactly six coefficients: " + std::string(text));
    return QuadForm::from_coefficients(k);
}

inline void require_positive_definite(const QuadForm& f) {
    if (!is_positive_definite(f)) throw Error(ErrorKind::NotPositiveDefinite, to_string(f));
}

}  // namespace ternrep
