#pragma once

// Integral transformations between ternary forms.
//
// find_transforms(f, g, d) returns every integral T with
//     T^t (2M_f) T = d^2 (2M_g).
// Column j of such a T is a vector of f-value d^2 g_jj, so the search draws
// candidate columns from R(d^2 g_jj, f) and backtracks on the pairwise
// inner products. Columns are assigned in order of increasing target value.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ternrep/enumerate.hpp"
#include "ternrep/forms.hpp"
#include "ternrep/linalg.hpp"

namespace ternrep {

struct SearchOptions {
    /// Stop after this many candidate columns have been examined (0: no limit).
    std::uint64_t max_nodes = 0;
    /// Stop after this many matrices have been found (0: no limit).
    std::size_t max_results = 0;
    /// Keep only matrices with determinant +-1.
    bool unimodular_only = false;
};

struct TransformSet {
    QuadForm f;
    QuadForm g;
    Int d{};
    std::vector<Matrix3> matrices;  // descending row-major lexicographic order, duplicate free
    bool complete = true;
    std::uint64_t nodes = 0;

    std::size_t size() const { return matrices.size(); }
    bool contains(const Matrix3& t) const {
        return std::binary_search(matrices.begin(), matrices.end(), t, std::greater<>{});
    }
};

/// Number of transform searches started in this process. Lets callers assert
/// that a code path never searches.
inline std::atomic<std::uint64_t>& search_counter() {
    static std::atomic<std::uint64_t> counter{0};
    return counter;
}

/// T^t (2M_f) T == scale * (2M_g).
inline bool satisfies_transform_identity(const QuadForm& f, const QuadForm& g, const Matrix3& t, Int scale) {
    const Matrix3 af = doubled_gram(f);
    const Matrix3 ag = doubled_gram(g);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (bilinear(af, t.column(i), t.column(j)) != Wide(scale) * ag(i, j)) return false;
    return true;
}

inline TransformSet find_transforms(const QuadForm& f, const QuadForm& g, Int d, const SearchOptions& options = {}) {
    require_positive_definite(f);
    require_positive_definite(g);
    if (d < 1) throw Error(ErrorKind::InvalidInput, "d must be positive");
    ++search_counter();

    TransformSet out{f, g, d, {}, true, 0};
    const Int d2 = checked_mul(d, d);
    const Matrix3 af = doubled_gram(f);
    const Matrix3 ag = doubled_gram(g);
    const std::array<Int, 3> diag{g.a, g.b, g.c};

    std::array<Int, 3> norm{};
    for (int j = 0; j < 3; ++j) norm[j] = checked_mul(d2, diag[j]);
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return norm[i] < norm[j]; });

    std::map<Int, std::vector<Vector3>> by_norm;
    for (int j = 0; j < 3; ++j)
        if (!by_norm.count(norm[j])) by_norm[norm[j]] = representations(f, norm[j]);

    auto target = [&](int i, int j) { return Wide(d2) * ag(i, j); };
    auto dot = [](const Vector3& u, const Vector3& v) { return Wide(u.x) * v.x + Wide(u.y) * v.y + Wide(u.z) * v.z; };

    const auto& first = by_norm[norm[order[0]]];
    const auto& second = by_norm[norm[order[1]]];
    const auto& third = by_norm[norm[order[2]]];
    std::vector<Vector3> second_ok, third_ok;

    auto budget_exhausted = [&] { return options.max_nodes != 0 && out.nodes >= options.max_nodes; };

    for (const Vector3& c0 : first) {
        if (budget_exhausted()) {
            out.complete = false;
            break;
        }
        ++out.nodes;
        const Vector3 w0 = c0 * af;
        second_ok.clear();
        third_ok.clear();
        for (const Vector3& c : second)
            if (dot(w0, c) == target(order[0], order[1])) second_ok.push_back(c);
        for (const Vector3& c : third)
            if (dot(w0, c) == target(order[0], order[2])) third_ok.push_back(c);
        out.nodes += second.size() + third.size();
        for (const Vector3& c1 : second_ok) {
            const Vector3 w1 = c1 * af;
            for (const Vector3& c2 : third_ok) {
                ++out.nodes;
                if (dot(w1, c2) != target(order[1], order[2])) continue;
                Matrix3 t;
                t.set_column(order[0], c0);
                t.set_column(order[1], c1);
                t.set_column(order[2], c2);
                if (options.unimodular_only && wide_abs(determinant(t)) != 1) continue;
                out.matrices.push_back(t);
                if (options.max_results != 0 && out.matrices.size() >= options.max_results) {
                    out.complete = false;
                    goto done;
                }
            }
        }
    }
done:
    std::sort(out.matrices.begin(), out.matrices.end(), std::greater<>{});
    out.matrices.erase(std::unique(out.matrices.begin(), out.matrices.end()), out.matrices.end());
    return out;
}

/// T with T^t (2M_g) T = 2M_f, i.e. f is a subform of g. Returns the first
/// witness in transform order (the identity when f == g).
inline std::optional<Matrix3> subform_witness(const QuadForm& f, const QuadForm& g) {
    if (f == g && is_positive_definite(f)) return Matrix3::identity();
    auto found = find_transforms(g, f, 1);
    if (found.matrices.empty()) return std::nullopt;
    return found.matrices.front();
}

/// Some unimodular T with T^t (2M_f) T = 2M_g. A none result is exhaustive.
inline std::optional<Matrix3> is_isometric(const QuadForm& f, const QuadForm& g) {
    require_positive_definite(f);
    require_positive_definite(g);
    if (f == g) return Matrix3::identity();
    if (doubled_determinant(f) != doubled_determinant(g)) return std::nullopt;
    SearchOptions options;
    options.max_results = 1;
    options.unimodular_only = true;
    auto found = find_transforms(f, g, 1, options);
    if (found.matrices.empty()) return std::nullopt;
    return found.matrices.front();
}

/// R(g, g, d): K with K^t M_g K = d^2 M_g. `limit` of 0 means all.
inline TransformSet scaled_automorphisms(const QuadForm& g, Int d, std::size_t limit = 0,
                                         std::uint64_t max_nodes = 0) {
    SearchOptions options;
    options.max_results = limit;
    options.max_nodes = max_nodes;
    return find_transforms(g, g, d, options);
}

struct EigenSpace {
    Wide eigenvalue{};
    int dimension{};
    std::vector<Vector3> basis;  // primitive, first nonzero entry positive
};

struct EigenData {
    std::vector<EigenSpace> spaces;  // ascending eigenvalue
    bool finite_order = false;       // (T/d)^k == I for some 1 <= k <= 12

    /// Eigenvectors spanning one-dimensional eigenspaces, up to sign.
    std::vector<Vector3> line_eigenvectors() const {
        std::vector<Vector3> out;
        for (const auto& s : spaces)
            if (s.dimension == 1) out.push_back(s.basis.front());
        return out;
    }
};

namespace detail {

struct WideVec {
    Wide v[3];
    bool is_zero() const { return v[0] == 0 && v[1] == 0 && v[2] == 0; }
};

inline WideVec cross(const WideVec& a, const WideVec& b) {
    return {{a.v[1] * b.v[2] - a.v[2] * b.v[1], a.v[2] * b.v[0] - a.v[0] * b.v[2], a.v[0] * b.v[1] - a.v[1] * b.v[0]}};
}

inline Vector3 canonical_primitive(const WideVec& w) {
    Wide g = wide_gcd(wide_gcd(w.v[0], w.v[1]), w.v[2]);
    Wide out[3] = {w.v[0] / g, w.v[1] / g, w.v[2] / g};
    for (Wide& x : out) {
        if (x != 0) {
            if (x < 0)
                for (Wide& y : out) y = -y;
            break;
        }
    }
    return {narrow(out[0]), narrow(out[1]), narrow(out[2])};
}

/// Primitive basis of the rational kernel of `a` (column convention a v = 0).
inline std::vector<Vector3> kernel_basis(const WideVec rows[3]) {
    std::vector<WideVec> nonzero;
    for (int i = 0; i < 3; ++i)
        if (!rows[i].is_zero()) nonzero.push_back(rows[i]);
    if (nonzero.empty()) return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (std::size_t i = 0; i < nonzero.size(); ++i)
        for (std::size_t j = i + 1; j < nonzero.size(); ++j) {
            WideVec c = cross(nonzero[i], nonzero[j]);
            if (!c.is_zero()) return {canonical_primitive(c)};  // rank 2 (rank 3 is excluded by caller)
        }
    // Rank 1: kernel is the plane orthogonal to nonzero[0].
    const WideVec& n = nonzero.front();
    std::vector<WideVec> candidates;
    for (int i = 0; i < 3; ++i) {
        WideVec e{{0, 0, 0}};
        e.v[i] = 1;
        WideVec c = cross(n, e);
        if (!c.is_zero()) candidates.push_back(c);
    }
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = i + 1; j < candidates.size(); ++j)
            if (!cross(candidates[i], candidates[j]).is_zero())
                return {canonical_primitive(candidates[i]), canonical_primitive(candidates[j])};
    throw Error(ErrorKind::InvalidInput, "degenerate kernel computation");
}

/// Integer roots of x^3 + c2 x^2 + c1 x + c0 with |x| <= radius.
inline std::vector<Wide> integer_roots(Wide c2, Wide c1, Wide c0, Wide radius) {
    auto p = [&](Wide x) { return ((x + c2) * x + c1) * x + c0; };
    auto sign = [](Wide v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    std::vector<Wide> roots;
    std::vector<Wide> breaks{-radius - 1, radius + 1};
    // Critical points of p split the range into monotone pieces.
    const long double A = 3.0L, B = 2.0L * static_cast<long double>(c2), C = static_cast<long double>(c1);
    const long double disc = B * B - 4 * A * C;
    if (disc >= 0) {
        for (long double sgn : {-1.0L, 1.0L}) {
            long double crit = (-B + sgn * std::sqrt(disc)) / (2 * A);
            if (std::fabs(crit) > static_cast<long double>(radius) + 8) continue;
            Wide base = static_cast<Wide>(std::floor(crit));
            breaks.push_back(base - 4);
            breaks.push_back(base + 5);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    for (auto& b : breaks) b = std::clamp(b, -radius - 1, radius + 1);
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    auto record = [&](Wide x) {
        if (p(x) == 0 && std::find(roots.begin(), roots.end(), x) == roots.end()) roots.push_back(x);
    };
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Wide lo = breaks[i], hi = breaks[i + 1];
        if (hi - lo <= 24) {
            for (Wide x = lo; x <= hi; ++x) record(x);
            continue;
        }
        record(lo);
        record(hi);
        int slo = sign(p(lo)), shi = sign(p(hi));
        if (slo == 0 || shi == 0 || slo == shi) continue;
        while (hi - lo > 1) {
            Wide mid = lo + (hi - lo) / 2;
            int sm = sign(p(mid));
            if (sm == 0) {
                lo = hi = mid;
                break;
            }
            if (sm == slo)
                lo = mid;
            else
                hi = mid;
        }
        record(lo);
        record(hi);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace detail

/// Integral eigen-structure of T (column convention T v^t = lambda v^t, i.e.
/// v T^t = lambda v for row vectors) and whether T/d has finite order.
inline EigenData eigen_data(const Matrix3& t, Int d = 1) {
    if (d < 1) throw Error(ErrorKind::InvalidInput, "d must be positive");
    Wide radius = 0;
    for (int i = 0; i < 3; ++i) {
        Wide row = 0;
        for (int j = 0; j < 3; ++j) row += wide_abs(t(i, j));
        radius = std::max(radius, row);
    }
    if (radius > (Wide(1) << 40)) throw Error(ErrorKind::Overflow, "matrix entries too large for eigen analysis");

    const auto& m = t.m;
    const Wide trace = Wide(m[0][0]) + m[1][1] + m[2][2];
    const Wide minors = (Wide(m[0][0]) * m[1][1] - Wide(m[0][1]) * m[1][0]) +
                        (Wide(m[0][0]) * m[2][2] - Wide(m[0][2]) * m[2][0]) +
                        (Wide(m[1][1]) * m[2][2] - Wide(m[1][2]) * m[2][1]);
    const Wide det = determinant(t);

    EigenData out;
    for (Wide lambda : detail::integer_roots(-trace, minors, -det, radius)) {
        detail::WideVec rows[3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) rows[i].v[j] = Wide(m[i][j]) - (i == j ? lambda : 0);
        EigenSpace space;
        space.eigenvalue = lambda;
        space.basis = detail::kernel_basis(rows);
        space.dimension = static_cast<int>(space.basis.size());
        out.spaces.push_back(std::move(space));
    }

    Matrix3 acc = Matrix3::identity();
    Wide scale = 1;
    for (int k = 1; k <= 12 && !out.finite_order; ++k) {
        try {
            acc = acc * t;
        } catch (const Error&) {
            break;  // entries outgrew d^k: cannot be a scaled identity any more
        }
        scale *= d;
        bool is_scalar = true;
        for (int i = 0; i < 3 && is_scalar; ++i)
            for (int j = 0; j < 3; ++j)
                if (Wide(acc(i, j)) != (i == j ? scale : 0)) {
                    is_scalar = false;
                    break;
                }
        out.finite_order = is_scalar;
    }
    return out;
}

}  // namespace ternrep
