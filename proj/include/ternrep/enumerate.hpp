#pragma once

// Exact lattice-point enumeration for positive definite ternary forms.
//
// With B = t*y + s*z the form satisfies
//     4a f(x,y,z) = (2a x + B)^2 + P(y,z),
//     P(y,z)      = alpha y^2 + gamma y z + beta z^2,
//     4 alpha P   = (2 alpha y + gamma z)^2 + delta z^2,
// where alpha = 4ab - t^2, beta = 4ac - s^2, gamma = 4ar - 2st and
// delta = 4 alpha beta - gamma^2 are all determined by the coefficients.
// All loop bounds are integer square roots of exact integers, so no point
// is ever dropped by rounding.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "ternrep/forms.hpp"
#include "ternrep/parallel.hpp"

namespace ternrep {

/// Q(f) truncated at `bound`: sorted, duplicate free.
struct RepSet {
    Int bound{};
    std::vector<Int> members;

    bool contains(Int n) const { return std::binary_search(members.begin(), members.end(), n); }

    friend bool operator==(const RepSet&, const RepSet&) = default;
};

/// coeffs[n] = r(n, f) for 0 <= n <= bound.
struct ThetaSeries {
    QuadForm form;
    Int bound{};
    std::vector<std::uint64_t> coeffs;
};

namespace detail {

inline constexpr Int kMaxEnumerationBound = Int(1) << 40;

struct Completion {
    Wide a, alpha, beta, gamma, delta;

    explicit Completion(const QuadForm& f)
        : a(f.a),
          alpha(Wide(4) * f.a * f.b - Wide(f.t) * f.t),
          beta(Wide(4) * f.a * f.c - Wide(f.s) * f.s),
          gamma(Wide(4) * f.a * f.r - Wide(2) * f.s * f.t),
          delta(4 * alpha * beta - gamma * gamma) {}

    /// Largest |z| with a point of value <= bound.
    Int z_extent(Int bound) const { return narrow(isqrt(Wide(16) * a * alpha * bound / delta)); }

    /// Inclusive y range for fixed z; empty when lo > hi.
    std::pair<Int, Int> y_range(Int bound, Int z) const {
        Wide rhs = Wide(16) * a * alpha * bound - delta * z * z;
        if (rhs < 0) return {1, 0};
        Wide root = isqrt(rhs);
        Wide centre = -gamma * z;
        return {narrow(ceil_div(centre - root, 2 * alpha)), narrow(floor_div(centre + root, 2 * alpha))};
    }
};

inline void check_bound(const QuadForm& f, Int bound) {
    require_positive_definite(f);
    if (bound < 0) throw Error(ErrorKind::InvalidInput, "negative bound");
    if (bound > kMaxEnumerationBound) throw Error(ErrorKind::InvalidInput, "bound too large for exact enumeration");
}

}  // namespace detail

/// Calls visit(v, value) for every v with f(v) <= bound and z in [z_lo, z_hi].
template <class Visit>
void for_each_vector_upto(const QuadForm& f, Int bound, Int z_lo, Int z_hi, Visit&& visit) {
    detail::check_bound(f, bound);
    const detail::Completion c(f);
    const Int zmax = c.z_extent(bound);
    z_lo = std::max(z_lo, -zmax);
    z_hi = std::min(z_hi, zmax);
    const Wide four_a_n = Wide(4) * f.a * bound;
    for (Int z = z_lo; z <= z_hi; ++z) {
        auto [y_lo, y_hi] = c.y_range(bound, z);
        for (Int y = y_lo; y <= y_hi; ++y) {
            const Wide lin = Wide(f.t) * y + Wide(f.s) * z;
            const Wide p = c.alpha * y * y + c.gamma * y * z + c.beta * z * z;
            const Wide rest = four_a_n - p;
            if (rest < 0) continue;
            const Wide root = isqrt(rest);
            const Int x_lo = narrow(ceil_div(-lin - root, 2 * c.a));
            const Int x_hi = narrow(floor_div(-lin + root, 2 * c.a));
            if (x_lo > x_hi) continue;
            // f along the x line, updated incrementally.
            const Int b_lin = narrow(lin);
            const Int constant = narrow(Wide(f.b) * y * y + Wide(f.c) * z * z + Wide(f.r) * y * z);
            Int value = narrow(Wide(f.a) * x_lo * x_lo + Wide(b_lin) * x_lo + constant);
            for (Int x = x_lo; x <= x_hi; ++x) {
                visit(Vector3{x, y, z}, value);
                value += f.a * (2 * x + 1) + b_lin;
            }
        }
    }
}

template <class Visit>
void for_each_vector_upto(const QuadForm& f, Int bound, Visit&& visit) {
    for_each_vector_upto(f, bound, INT64_MIN, INT64_MAX, std::forward<Visit>(visit));
}

/// Calls visit(v) for every v with f(v) == n.
template <class Visit>
void for_each_representation(const QuadForm& f, Int n, Visit&& visit) {
    detail::check_bound(f, n);
    const detail::Completion c(f);
    const Int zmax = c.z_extent(n);
    const Wide four_a_n = Wide(4) * f.a * n;
    for (Int z = -zmax; z <= zmax; ++z) {
        auto [y_lo, y_hi] = c.y_range(n, z);
        for (Int y = y_lo; y <= y_hi; ++y) {
            const Wide lin = Wide(f.t) * y + Wide(f.s) * z;
            const Wide rest = four_a_n - (c.alpha * y * y + c.gamma * y * z + c.beta * z * z);
            if (rest < 0) continue;
            const Wide root = isqrt(rest);
            if (root * root != rest) continue;
            // 2a x + lin = -root or +root.
            for (Wide signed_root : {-root, root}) {
                Wide num = signed_root - lin;
                if (num % (2 * c.a) == 0) visit(Vector3{narrow(num / (2 * c.a)), y, z});
                if (root == 0) break;
            }
        }
    }
}

/// R(n, f) in lexicographic order.
inline std::vector<Vector3> representations(const QuadForm& f, Int n) {
    std::vector<Vector3> out;
    for_each_representation(f, n, [&](const Vector3& v) { out.push_back(v); });
    std::sort(out.begin(), out.end());
    return out;
}

inline Int rep_count(const QuadForm& f, Int n) {
    Int count = 0;
    for_each_representation(f, n, [&](const Vector3&) { ++count; });
    return count;
}

inline std::vector<Vector3> primitive_representations(const QuadForm& f, Int n) {
    std::vector<Vector3> out;
    for_each_representation(f, n, [&](const Vector3& v) {
        if (is_primitive(v)) out.push_back(v);
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// Some v with f(v) == n, if any.
/// Largest solution in lexicographic order, so the first nonzero entry is positive.
inline std::optional<Vector3> find_representation(const QuadForm& f, Int n) {
    auto reps = representations(f, n);
    if (reps.empty()) return std::nullopt;
    return reps.back();
}

namespace detail {

template <class Accept>
RepSet represented_set_impl(const QuadForm& f, Int bound, unsigned jobs, Accept accept) {
    check_bound(f, bound);
    const Int zmax = Completion(f).z_extent(bound);
    const unsigned workers = std::max(1u, slice_count(jobs, -zmax, zmax + 1));
    std::vector<std::vector<std::uint8_t>> hits(workers);
    parallel_slices(jobs, -zmax, zmax + 1, [&](unsigned w, Int z_lo, Int z_end) {
        auto& mark = hits[w];
        mark.assign(static_cast<std::size_t>(bound) + 1, 0);
        for_each_vector_upto(f, bound, z_lo, z_end - 1, [&](const Vector3& v, Int value) {
            if (accept(v)) mark[static_cast<std::size_t>(value)] = 1;
        });
    });
    RepSet out{bound, {}};
    for (Int n = 0; n <= bound; ++n) {
        for (const auto& mark : hits) {
            if (!mark.empty() && mark[static_cast<std::size_t>(n)]) {
                out.members.push_back(n);
                break;
            }
        }
    }
    return out;
}

}  // namespace detail

/// Q(f) intersected with [0, bound]. `jobs` splits the outer coordinate range.
inline RepSet represented_set(const QuadForm& f, Int bound, unsigned jobs = 1) {
    return detail::represented_set_impl(f, bound, jobs, [](const Vector3&) { return true; });
}

/// Integers in [0, bound] with a primitive representation.
inline RepSet primitive_represented_set(const QuadForm& f, Int bound, unsigned jobs = 1) {
    return detail::represented_set_impl(f, bound, jobs, [](const Vector3& v) { return is_primitive(v); });
}

inline ThetaSeries theta(const QuadForm& f, Int bound, unsigned jobs = 1) {
    detail::check_bound(f, bound);
    const Int zmax = detail::Completion(f).z_extent(bound);
    const unsigned workers = std::max(1u, slice_count(jobs, -zmax, zmax + 1));
    std::vector<std::vector<std::uint64_t>> partial(workers);
    parallel_slices(jobs, -zmax, zmax + 1, [&](unsigned w, Int z_lo, Int z_end) {
        auto& counts = partial[w];
        counts.assign(static_cast<std::size_t>(bound) + 1, 0);
        for_each_vector_upto(f, bound, z_lo, z_end - 1,
                             [&](const Vector3&, Int value) { ++counts[static_cast<std::size_t>(value)]; });
    });
    ThetaSeries out{f, bound, std::vector<std::uint64_t>(static_cast<std::size_t>(bound) + 1, 0)};
    for (const auto& counts : partial)
        for (std::size_t n = 0; n < counts.size(); ++n) out.coeffs[n] += counts[n];
    return out;
}

/// First integer in [0, bound] on which the two sets disagree.
inline std::optional<Int> first_difference(const RepSet& lhs, const RepSet& rhs) {
    const Int bound = std::min(lhs.bound, rhs.bound);
    auto i = lhs.members.begin();
    auto j = rhs.members.begin();
    while (true) {
        const bool li = i != lhs.members.end() && *i <= bound;
        const bool rj = j != rhs.members.end() && *j <= bound;
        if (!li && !rj) return std::nullopt;
        if (!li) return *j;
        if (!rj) return *i;
        if (*i != *j) return std::min(*i, *j);
        ++i;
        ++j;
    }
}

}  // namespace ternrep
