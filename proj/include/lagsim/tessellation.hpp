#pragma once

#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hull.hpp"
#include "lp.hpp"
#include "model.hpp"
#include "sampler.hpp"

namespace lagsim {

// (v, |v|^2 + h): hull-ready lifting of a seed.
inline std::array<double, 3> lift(const Seed& x) {
    if (x.v.size() != 2) throw std::invalid_argument("lift: d = 2 required");
    return {x.v[0], x.v[1], x.v[0] * x.v[0] + x.v[1] * x.v[1] + x.h};
}

struct CellPoly {
    enum class Kind { Empty, Bounded, Unbounded };
    Kind kind = Kind::Empty;
    std::vector<Vec> verts;        // CCW; for Unbounded, the finite part
    std::array<Vec, 2> rays{};     // outgoing directions when Unbounded
};

struct TessellationResult {
    std::vector<Vec> centers;      // seed nuclei (copied from the input set)
    std::vector<char> extreme;
    std::vector<char> unbounded;
    std::vector<double> coverage;  // -inf (empty), finite, or +inf (unbounded)
    std::vector<char> certified;   // filled by the doubling check; defaults to false
    std::vector<CellPoly> cells;   // populated only when requested
    bool has_cells = false;
};

inline double coverage_time(std::size_t i, const SeedSet& S);

// Full classification pass: extreme flags via the lifted lower hull (exact
// predicates), ties via the LP test, coverage times via the dual vertices of
// the lower facets, unbounded cells via the lower/upper silhouette.
inline TessellationResult classify(const SeedSet& S) {
    const std::size_t n = S.seeds.size();
    TessellationResult R;
    R.centers.resize(n);
    for (std::size_t i = 0; i < n; ++i) R.centers[i] = S.seeds[i].v;
    R.extreme.assign(n, 0);
    R.unbounded.assign(n, 0);
    R.coverage.assign(n, -inf);
    R.certified.assign(n, 0);
    if (n == 0) return R;

    const int d = static_cast<int>(S.seeds[0].v.size());
    if (d != 2) {  // LP-only path for general dimension
        for (std::size_t i = 0; i < n; ++i) {
            R.extreme[i] = is_extreme_lp(i, S);
            R.coverage[i] = R.extreme[i] ? inf : -inf;  // no cell geometry for d != 2
            R.unbounded[i] = R.extreme[i];
        }
        return R;
    }
    if (n == 1) {
        R.extreme[0] = 1;
        R.unbounded[0] = 1;
        R.coverage[0] = inf;
        return R;
    }

    // Exact-duplicate seeds share one classification.
    std::vector<int> rep_of(n);
    std::vector<int> distinct;
    {
        auto key = [&](const Seed& s) {
            std::uint64_t h = 1469598103934665603ULL;
            auto mix = [&](double x) {
                std::uint64_t b;
                std::memcpy(&b, &x, 8);
                h ^= b;
                h *= 1099511628211ULL;
            };
            mix(s.v[0]);
            mix(s.v[1]);
            mix(s.h);
            return h;
        };
        std::unordered_map<std::uint64_t, std::vector<int>> byhash;
        for (std::size_t i = 0; i < n; ++i) {
            auto& bucket = byhash[key(S.seeds[i])];
            int rep = -1;
            for (int j : bucket)
                if (S.seeds[j].v == S.seeds[i].v && S.seeds[j].h == S.seeds[i].h) {
                    rep = j;
                    break;
                }
            if (rep < 0) {
                bucket.push_back(static_cast<int>(i));
                rep_of[i] = static_cast<int>(i);
                distinct.push_back(static_cast<int>(i));
            } else {
                rep_of[i] = rep;
            }
        }
    }

    const std::vector<int>& pool = distinct;

    std::vector<std::array<double, 3>> lifted(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) lifted[k] = lift(S.seeds[pool[k]]);

    Hull3 hull(lifted);

    auto lp_all = [&]() {
        for (int i : distinct) R.extreme[i] = is_extreme_lp(i, S);
    };

    std::vector<char> lower_vertex(pool.size(), 0);
    if (hull.degenerate) {
        lp_all();
        // Degenerate global geometry (e.g. collinear centers): no polygonal
        // dual; coverage falls back to +inf/-inf by extremeness.
        for (int i : distinct) {
            R.unbounded[i] = R.extreme[i];
            R.coverage[i] = R.extreme[i] ? inf : -inf;
        }
    } else {
        // Lower facet <=> outward normal z < 0 <=> xy-projection CCW.
        std::vector<double> best(pool.size(), -inf);
        std::vector<char> sil(pool.size(), 0);
        for (const auto& f : hull.facets) {
            if (f.dead) continue;
            const auto &A = lifted[f.v[0]], &B = lifted[f.v[1]], &C = lifted[f.v[2]];
            const int proj = orient2d(A.data(), B.data(), C.data());
            if (proj <= 0) continue;  // upper or vertical facet
            // Dual vertex: common power point of the three seeds.
            const double a11 = 2 * (B[0] - A[0]), a12 = 2 * (B[1] - A[1]);
            const double a21 = 2 * (C[0] - A[0]), a22 = 2 * (C[1] - A[1]);
            const double b1 = B[2] - A[2], b2 = C[2] - A[2];
            const double det = a11 * a22 - a12 * a21;
            const double wx = (b1 * a22 - b2 * a12) / det;
            const double wy = (a11 * b2 - a21 * b1) / det;
            for (int k = 0; k < 3; ++k) {
                const int pk = f.v[k];
                lower_vertex[pk] = 1;
                const double dx = wx - lifted[pk][0], dy = wy - lifted[pk][1];
                best[pk] = std::max(best[pk], dx * dx + dy * dy);
            }
            // Silhouette edges: neighbor facet is upper or vertical.
            for (int k = 0; k < 3; ++k) {
                const auto& g = hull.facets[f.nbr[k]];
                const int gproj =
                    orient2d(lifted[g.v[0]].data(), lifted[g.v[1]].data(), lifted[g.v[2]].data());
                if (gproj <= 0) {
                    sil[f.v[k]] = 1;
                    sil[f.v[(k + 1) % 3]] = 1;
                }
            }
        }
        for (std::size_t k = 0; k < pool.size(); ++k) {
            const int i = pool[k];
            if (hull.uncertain[k]) {
                R.extreme[i] = is_extreme_lp(i, S);
                if (R.extreme[i] && !lower_vertex[k]) {
                    // tie-resolved extreme without hull geometry (rare):
                    // recover the coverage time from the polygon directly
                    R.coverage[i] = coverage_time(i, S);
                    R.unbounded[i] = (R.coverage[i] == inf);
                    continue;
                }
            } else {
                R.extreme[i] = lower_vertex[k];
            }
            if (!R.extreme[i]) continue;
            if (sil[k]) {
                R.unbounded[i] = 1;
                R.coverage[i] = inf;
            } else {
                R.coverage[i] = S.seeds[i].h + best[k];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (rep_of[i] != static_cast<int>(i)) {
            const int r0 = rep_of[i];
            R.extreme[i] = R.extreme[r0];
            R.unbounded[i] = R.unbounded[r0];
            R.coverage[i] = R.coverage[r0];
        }
    return R;
}

// Per-seed extreme flags (hull primary path, LP for ties / degeneracies).
inline std::vector<char> extreme_points(const SeedSet& S) {
    if (S.seeds.empty()) throw std::invalid_argument("extreme_points: empty seed set");
    return classify(S).extreme;
}

namespace tessdetail {

struct Line {
    double ax, ay, b;  // {w : ax*wx + ay*wy = b}
    bool box = false;  // synthetic bounding-box line
};

inline bool intersect(const Line& p, const Line& q, double& x, double& y) {
    const double det = p.ax * q.ay - p.ay * q.ax;
    if (det == 0) return false;
    x = (p.b * q.ay - q.b * p.ay) / det;
    y = (p.ax * q.b - q.ax * p.b) / det;
    return true;
}

}  // namespace tessdetail

// C(x_i, S) as an explicit polygon (d = 2): intersection of the halfplanes
// 2(v_j - v_i).w <= |v_j|^2 - |v_i|^2 + h_j - h_i over j != i.
inline CellPoly cell_polytope(std::size_t i, const SeedSet& S) {
    using tessdetail::Line;
    const std::size_t n = S.seeds.size();
    if (i >= n) throw std::invalid_argument("cell_polytope: index out of range");
    const Seed& xi = S.seeds[i];
    if (xi.v.size() != 2) throw std::invalid_argument("cell_polytope: d = 2 required");

    double scale = 1;
    for (const auto& s : S.seeds) {
        scale = std::max({scale, std::abs(s.v[0]), std::abs(s.v[1]), std::sqrt(std::abs(s.h))});
    }
    const double B = 1e8 * scale;

    // Start from the bounding square around v_i (CCW).
    std::vector<Vec> verts = {{xi.v[0] - B, xi.v[1] - B},
                              {xi.v[0] + B, xi.v[1] - B},
                              {xi.v[0] + B, xi.v[1] + B},
                              {xi.v[0] - B, xi.v[1] + B}};
    std::vector<Line> edges = {{0, -1, -(xi.v[1] - B), true},
                               {1, 0, xi.v[0] + B, true},
                               {0, 1, xi.v[1] + B, true},
                               {-1, 0, -(xi.v[0] - B), true}};

    CellPoly out;
    double cur_r = 2 * B;  // radius bound of the running polygon around v_i

    std::vector<std::pair<double, std::size_t>> order;  // near constraints first
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d2v = dist2(S.seeds[j].v, xi.v);
        if (d2v == 0) {
            if (S.seeds[j].h < xi.h) {
                out.kind = CellPoly::Kind::Empty;
                return out;  // dominated at every point
            }
            continue;
        }
        order.emplace_back(d2v, j);
    }
    std::sort(order.begin(), order.end());

    for (const auto& [d2v, j] : order) {
        const Seed& xj = S.seeds[j];
        Line L;
        L.ax = 2 * (xj.v[0] - xi.v[0]);
        L.ay = 2 * (xj.v[1] - xi.v[1]);
        L.b = norm2(xj.v) - norm2(xi.v) + xj.h - xi.h;
        const double na = std::sqrt(L.ax * L.ax + L.ay * L.ay);
        // Signed distance from v_i to the bisector; beyond current radius the
        // constraint cannot cut the polygon.
        const double sd = (L.b - (L.ax * xi.v[0] + L.ay * xi.v[1])) / na;
        if (sd > cur_r) continue;

        std::vector<Vec> nv;
        std::vector<Line> ne;
        const std::size_t m = verts.size();
        if (m == 0) break;
        std::vector<double> val(m);
        for (std::size_t k = 0; k < m; ++k)
            val[k] = L.ax * verts[k][0] + L.ay * verts[k][1] - L.b;
        bool any_out = false;
        for (double v : val) any_out |= (v > 0);
        if (!any_out) continue;
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t k2 = (k + 1) % m;
            const bool in1 = val[k] <= 0, in2 = val[k2] <= 0;
            if (in1) {
                nv.push_back(verts[k]);
                ne.push_back(edges[k]);
            }
            if (in1 != in2) {
                double x, y;
                if (tessdetail::intersect(edges[k], L, x, y)) {
                    nv.push_back({x, y});
                    ne.push_back(in1 ? L : edges[k]);
                }
            }
        }
        // Collapse duplicate consecutive vertices introduced by grazing cuts.
        verts.swap(nv);
        edges.swap(ne);
        if (verts.size() < 3) {
            out.kind = CellPoly::Kind::Empty;
            out.verts.clear();
            return out;
        }
        cur_r = 0;
        for (const auto& v : verts)
            cur_r = std::max(cur_r, std::sqrt(dist2(v, xi.v)));
    }

    if (verts.size() < 3) {
        out.kind = CellPoly::Kind::Empty;
        return out;
    }

    // Area test: degenerate slivers are treated as empty interiors.
    double area2 = 0;
    for (std::size_t k = 0; k < verts.size(); ++k) {
        const auto &p = verts[k], &q = verts[(k + 1) % verts.size()];
        area2 += p[0] * q[1] - q[0] * p[1];
    }
    if (std::abs(area2) < 1e-18 * scale * scale) {
        out.kind = CellPoly::Kind::Empty;
        return out;
    }

    // Classify vertices: a vertex is synthetic when one of its defining edges
    // is a bounding-box line.
    const std::size_t m = verts.size();
    std::vector<char> synth(m, 0);
    bool any_synth = false;
    for (std::size_t k = 0; k < m; ++k) {
        const Line& eprev = edges[(k + m - 1) % m];
        const Line& ecur = edges[k];
        synth[k] = eprev.box || ecur.box;
        any_synth |= synth[k];
    }
    if (!any_synth) {
        out.kind = CellPoly::Kind::Bounded;
        out.verts = verts;
        return out;
    }

    out.kind = CellPoly::Kind::Unbounded;
    // Rotate so that real vertices form one contiguous run.
    std::vector<int> real_idx;
    for (std::size_t k = 0; k < m; ++k)
        if (!synth[k]) real_idx.push_back(static_cast<int>(k));
    if (real_idx.empty()) {
        // Halfplane/strip: anchor at the foot of v_i on the nearest real line.
        for (std::size_t k = 0; k < m; ++k) {
            const Line& e = edges[k];
            if (e.box) continue;
            const double na2 = e.ax * e.ax + e.ay * e.ay;
            const double t = (e.b - (e.ax * xi.v[0] + e.ay * xi.v[1])) / na2;
            out.verts.push_back({xi.v[0] + t * e.ax, xi.v[1] + t * e.ay});
            const double na = std::sqrt(na2);
            out.rays[0] = {-e.ay / na, e.ax / na};
            out.rays[1] = {e.ay / na, -e.ax / na};
            break;
        }
        return out;
    }
    int start = real_idx[0];
    for (std::size_t t = 1; t < real_idx.size(); ++t)
        if (real_idx[t] != (real_idx[t - 1] + 1) % static_cast<int>(m)) {
            start = real_idx[t];  // wrap point: real run starts here
        }
    std::vector<Vec> run;
    for (std::size_t k = 0; k < m; ++k) {
        const int id = (start + static_cast<int>(k)) % static_cast<int>(m);
        if (synth[id]) break;
        run.push_back(verts[id]);
    }
    out.verts = run;
    // Rays: directions of the boundary edges leaving the run endpoints.
    const int first = start;
    const int prev = (first + static_cast<int>(m) - 1) % static_cast<int>(m);
    const int last = (first + static_cast<int>(run.size()) - 1) % static_cast<int>(m);
    auto ray_dir = [](const Line& e, int orientation) {
        // direction along line e, oriented CCW around the cell
        Vec d = {-e.ay, e.ax};
        if (orientation < 0) d = {e.ay, -e.ax};
        const double nn = std::sqrt(d[0] * d[0] + d[1] * d[1]);
        return Vec{d[0] / nn, d[1] / nn};
    };
    out.rays[0] = ray_dir(edges[prev], -1);  // incoming edge, reversed
    out.rays[1] = ray_dir(edges[last], +1);
    return out;
}

// Attach explicit cell geometry for every extreme seed (d = 2).
inline void fill_cells(TessellationResult& R, const SeedSet& S) {
    R.cells.assign(S.seeds.size(), CellPoly{});
    for (std::size_t i = 0; i < S.seeds.size(); ++i)
        if (R.extreme[i]) R.cells[i] = cell_polytope(i, S);
    R.has_cells = true;
}

// Last time the cell of seed i changes; -inf when the cell is empty, +inf
// when it is unbounded, otherwise h_i + max |w - v_i|^2 over cell vertices.
inline double coverage_time(std::size_t i, const SeedSet& S) {
    const CellPoly cell = cell_polytope(i, S);
    switch (cell.kind) {
        case CellPoly::Kind::Empty: return -inf;
        case CellPoly::Kind::Unbounded: return inf;
        case CellPoly::Kind::Bounded: {
            double best = 0;
            for (const auto& w : cell.verts) best = std::max(best, dist2(w, S.seeds[i].v));
            return S.seeds[i].h + best;
        }
    }
    return -inf;
}

struct SphereCheck {
    bool covered = true;
    std::optional<double> witness_angle;
};

// Does the union of the other cells (at time t) cover the sphere of radius
// sqrt(t - h_i) around v_i, at the sampled angular resolution?  A negative
// answer carries an explicit witness direction.
inline SphereCheck sphere_coverage_check(std::size_t i, const SeedSet& S, double t,
                                         int angular_resolution) {
    const Seed& xi = S.seeds[i];
    if (xi.v.size() != 2) throw std::invalid_argument("sphere_coverage_check: d = 2 required");
    if (t < xi.h) throw std::invalid_argument("sphere_coverage_check: t below activation time");
    const double rad = std::sqrt(t - xi.h);
    SphereCheck out;
    for (int k = 0; k < angular_resolution; ++k) {
        const double th = 2 * M_PI * k / angular_resolution;
        const Vec w = {xi.v[0] + rad * std::cos(th), xi.v[1] + rad * std::sin(th)};
        double mn = inf;
        for (std::size_t j = 0; j < S.seeds.size(); ++j) {
            if (j == i) continue;
            mn = std::min(mn, power(w, S.seeds[j]));
        }
        if (!(mn <= t)) {
            out.covered = false;
            out.witness_angle = th;
            return out;
        }
    }
    return out;
}

// Membership in the influence region of (center, T): queries (v', h') with
// h' <= T and sqrt(T - h) + sqrt(T - h') >= |v - v'|.
inline bool stabilization_region_contains(const Seed& center, double T, const Seed& query,
                                          const Window& window) {
    if (!(T > center.h)) return false;
    if (!window.contains(center.v)) return false;
    if (!(query.h <= T)) return false;
    const double lhs = std::sqrt(T - center.h) + std::sqrt(T - query.h);
    return lhs >= std::sqrt(dist2(center.v, query.v));
}

// True iff no seed lies on or below the downward paraboloid at (w, t):
// h' <= t - |w - v'|^2 for no seed.
inline bool paraboloid_empty(const Vec& w, double t, const SeedSet& S) {
    for (const auto& s : S.seeds)
        if (s.h <= t - dist2(w, s.v)) return false;
    return true;
}

}  // namespace lagsim
