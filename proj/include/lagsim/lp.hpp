#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "model.hpp"
#include "sampler.hpp"

namespace lagsim {

// Absolute inscribed-radius threshold separating "has interior" from
// "degenerate/empty" in the Chebyshev-center test.
constexpr double tau_geom = 1e-9;

namespace lpdetail {

// One inequality sum_k a[k] x[k] <= b in up to 5 variables.
struct Ineq {
    std::array<double, 5> a{};
    double b = 0;
};

struct LpResult {
    bool feasible = true;
    std::array<double, 5> x{};
};

// Recursive Seidel-style solver: maximize c.x over {A x <= b, |x_k| <= M}.
// Deterministic processing order (the caller pre-shuffles with a fixed seed).
inline LpResult solve_lp(std::vector<Ineq> cons, std::array<double, 5> c, int dim, double M) {
    if (dim == 1) {
        double lo = -M, hi = M;
        for (const auto& q : cons) {
            const double a = q.a[0];
            if (std::abs(a) < 1e-300) {
                if (q.b < -1e-12 * M) return {false, {}};
                continue;
            }
            if (a > 0) hi = std::min(hi, q.b / a);
            else lo = std::max(lo, q.b / a);
        }
        if (lo > hi) return {false, {}};
        return {true, {c[0] >= 0 ? hi : lo}};
    }

    LpResult cur;
    for (int k = 0; k < dim; ++k) cur.x[k] = c[k] >= 0 ? M : -M;

    for (std::size_t i = 0; i < cons.size(); ++i) {
        const Ineq& vi = cons[i];
        double lhs = 0;
        for (int k = 0; k < dim; ++k) lhs += vi.a[k] * cur.x[k];
        if (lhs <= vi.b) continue;

        // Optimum lies on vi's hyperplane; eliminate the largest coefficient.
        int p = 0;
        for (int k = 1; k < dim; ++k)
            if (std::abs(vi.a[k]) > std::abs(vi.a[p])) p = k;
        const double ap = vi.a[p];
        if (std::abs(ap) < 1e-300) return {false, {}};  // 0 <= b violated

        auto reduce = [&](const std::array<double, 5>& a, double b) {
            // substitute x_p = (vi.b - sum_{k!=p} vi.a[k] x_k) / ap
            Ineq r;
            int idx = 0;
            const double f = a[p] / ap;
            for (int k = 0; k < dim; ++k)
                if (k != p) r.a[idx++] = a[k] - f * vi.a[k];
            r.b = b - f * vi.b;
            return r;
        };

        std::vector<Ineq> sub;
        sub.reserve(i + 2);
        for (std::size_t j = 0; j < i; ++j) sub.push_back(reduce(cons[j].a, cons[j].b));
        {
            std::array<double, 5> box{};
            box[p] = 1;
            sub.push_back(reduce(box, M));  //  x_p <= M
            box[p] = -1;
            sub.push_back(reduce(box, M));  // -x_p <= M
        }
        std::array<double, 5> cr{};
        {
            int idx = 0;
            const double f = c[p] / ap;
            for (int k = 0; k < dim; ++k)
                if (k != p) cr[idx++] = c[k] - f * vi.a[k];
        }
        const LpResult r = solve_lp(std::move(sub), cr, dim - 1, M);
        if (!r.feasible) return r;
        int idx = 0;
        double xp = vi.b;
        for (int k = 0; k < dim; ++k)
            if (k != p) {
                cur.x[k] = r.x[idx];
                xp -= vi.a[k] * r.x[idx];
                ++idx;
            }
        cur.x[p] = xp / ap;
    }
    return cur;
}

}  // namespace lpdetail

// Chebyshev-center decision: does the polyhedron
//   { w : 2(v_j - v_i).w <= |v_j|^2 - |v_i|^2 + h_j - h_i  for all j != i }
// contain a ball of radius > tau_geom (or is it full-dimensional unbounded)?
inline bool is_extreme_lp(std::size_t i, const SeedSet& S) {
    const std::size_t n = S.seeds.size();
    if (n == 0) throw std::invalid_argument("is_extreme_lp: empty seed set");
    if (i >= n) throw std::invalid_argument("is_extreme_lp: index out of range");
    const int d = static_cast<int>(S.seeds[i].v.size());
    if (d + 1 > 5) throw std::invalid_argument("is_extreme_lp: dimension > 4 unsupported");
    const Seed& xi = S.seeds[i];

    double scale = 1;
    for (const auto& s : S.seeds) {
        for (double c : s.v) scale = std::max(scale, std::abs(c));
        scale = std::max(scale, std::sqrt(std::abs(s.h)));
    }
    const double M = 1e7 * scale;

    // Variables (w, r); ball constraint: a.w + |a| r <= b.
    std::vector<lpdetail::Ineq> cons;
    cons.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const Seed& xj = S.seeds[j];
        lpdetail::Ineq q;
        double na2 = 0;
        for (int k = 0; k < d; ++k) {
            q.a[k] = 2 * (xj.v[k] - xi.v[k]);
            na2 += q.a[k] * q.a[k];
        }
        q.b = norm2(xj.v) - norm2(xi.v) + xj.h - xi.h;
        if (na2 == 0) {
            if (q.b < 0) return false;  // same center, strictly earlier rival
            continue;                   // duplicate/dominated rival: no constraint
        }
        q.a[d] = std::sqrt(na2);
        cons.push_back(q);
    }
    if (cons.empty()) return true;

    // Deterministic shuffle (fixed LCG) for the expected-linear-time order.
    std::uint64_t st = 0x9e3779b97f4a7c15ULL ^ (n * 1315423911ULL) ^ (i * 2654435761ULL);
    for (std::size_t k = cons.size(); k > 1; --k) {
        st = st * 6364136223846793005ULL + 1442695040888963407ULL;
        std::swap(cons[k - 1], cons[(st >> 33) % k]);
    }

    std::array<double, 5> obj{};
    obj[d] = 1;  // maximize r
    const lpdetail::LpResult r = lpdetail::solve_lp(std::move(cons), obj, d + 1, M);
    if (!r.feasible) return false;
    return r.x[d] > tau_geom;
}

}  // namespace lagsim
