#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "model.hpp"
#include "sampler.hpp"
#include "tessellation.hpp"

namespace lagsim {

// Brute-force verification layer: naive power scans over grids and spheres,
// kept independent of the hull/LP code paths on purpose.

struct GridSpec {
    Box box;                          // must cover all centers with margin
    std::array<int, 2> resolution{};  // points per axis, >= 2

    static GridSpec cover(const SeedSet& S, int res_per_axis) {
        if (S.seeds.empty()) throw std::invalid_argument("GridSpec::cover: empty seed set");
        double xlo = inf, xhi = -inf, ylo = inf, yhi = -inf;
        for (const auto& s : S.seeds) {
            xlo = std::min(xlo, s.v[0]);
            xhi = std::max(xhi, s.v[0]);
            ylo = std::min(ylo, s.v[1]);
            yhi = std::max(yhi, s.v[1]);
        }
        const double dx = xhi - xlo, dy = yhi - ylo;
        const double diam = std::sqrt(dx * dx + dy * dy);
        const double m = std::max(diam, 1e-6);
        GridSpec g;
        g.box.lo = {xlo - m, ylo - m};
        g.box.hi = {xhi + m, yhi + m};
        g.resolution = {res_per_axis, res_per_axis};
        return g;
    }
};

// argmin_i pow(w, x_i); set-valued on ties with 1e-12 absolute tolerance.
inline std::vector<std::size_t> nearest_power_owner(const Vec& w, const SeedSet& S) {
    if (S.seeds.empty()) throw std::invalid_argument("nearest_power_owner: empty seed set");
    double best = inf;
    for (const auto& s : S.seeds) best = std::min(best, power(w, s));
    std::vector<std::size_t> owners;
    for (std::size_t i = 0; i < S.seeds.size(); ++i)
        if (power(w, S.seeds[i]) <= best + 1e-12) owners.push_back(i);
    return owners;
}

// One grid point strictly inside each seed's cell, when the grid sees one.
// A found witness certifies extremeness; absence proves nothing.
inline std::vector<std::optional<Vec>> grid_extreme_witness(const SeedSet& S, const GridSpec& g) {
    const std::size_t n = S.seeds.size();
    std::vector<std::optional<Vec>> out(n);
    if (n == 0) return out;
    const int rx = g.resolution[0], ry = g.resolution[1];
    if (rx < 2 || ry < 2) throw std::invalid_argument("grid_extreme_witness: resolution >= 2");
    std::size_t found = 0;
    for (int iy = 0; iy < ry && found < n; ++iy) {
        const double y = g.box.lo[1] + (g.box.hi[1] - g.box.lo[1]) * iy / (ry - 1);
        for (int ix = 0; ix < rx && found < n; ++ix) {
            const double x = g.box.lo[0] + (g.box.hi[0] - g.box.lo[0]) * ix / (rx - 1);
            const Vec w = {x, y};
            double best = inf, second = inf;
            std::size_t arg = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double p = power(w, S.seeds[i]);
                if (p < best) {
                    second = best;
                    best = p;
                    arg = i;
                } else {
                    second = std::min(second, p);
                }
            }
            if (best + 1e-12 < second && !out[arg]) {
                out[arg] = w;
                ++found;
            }
        }
    }
    return out;
}

// Bisection of sphere_coverage_check for the last-change time.  Scans down
// from the heuristic ceiling h + 16 diam^2; a sphere still uncovered at the
// ceiling reports +inf, a sphere covered at every scanned time means the
// seed never owned territory (precondition violation).
inline double naive_coverage_time(std::size_t i, const SeedSet& S, int angular_resolution,
                                  double bisection_tol) {
    if (i >= S.seeds.size()) throw std::invalid_argument("naive_coverage_time: bad index");
    if (!(bisection_tol > 0)) throw std::invalid_argument("naive_coverage_time: tol > 0");
    const double h = S.seeds[i].h;
    double diam2 = 0;
    for (const auto& a : S.seeds)
        for (const auto& b : S.seeds) diam2 = std::max(diam2, dist2(a.v, b.v));
    const double ceiling = h + 16 * std::max(diam2, 1e-12);
    auto covered = [&](double t) { return sphere_coverage_check(i, S, t, angular_resolution).covered; };
    if (!covered(ceiling)) return inf;

    // Geometric scan in t - h: step size tracks the current scale, so an
    // uncovered window of relative width >= 10% is always hit.
    const double rho = 0.9;
    double lo = -1, hi = ceiling;
    for (double gap = (ceiling - h) * rho; gap > 0.25 * bisection_tol; gap *= rho) {
        const double t = h + gap;
        if (!covered(t)) {
            lo = t;
            break;
        }
        hi = t;
    }
    if (lo < 0)
        throw std::invalid_argument("naive_coverage_time: sphere covered at all times (non-extreme?)");
    while (hi - lo > bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        if (covered(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace lagsim
