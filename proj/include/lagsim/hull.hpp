#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "predicates.hpp"

namespace lagsim {

// Incremental 3D convex hull with conflict lists and sign-exact orientation
// tests.  Inputs that defeat the generic path (all points collinear/coplanar,
// or exact ties the strict-visibility walk cannot order) are reported back:
// globally via `degenerate`, per-point via `uncertain` — the caller resolves
// those with the LP test instead.
class Hull3 {
  public:
    struct Facet {
        std::array<int, 3> v{};    // vertex indices, outward-oriented
        std::array<int, 3> nbr{};  // neighbor across edge (v[k], v[(k+1)%3])
        bool dead = false;
        std::vector<int> pts;  // unresolved points seeing this facet
        int peak = -1;
        double peak_dist = 0;
    };

    bool degenerate = false;        // no initial tetrahedron: all coplanar
    std::vector<char> is_vertex;    // point appears as a vertex of the hull
    std::vector<char> uncertain;    // exact tie seen; classification deferred
    std::vector<Facet> facets;      // alive ones have dead == false

    explicit Hull3(const std::vector<std::array<double, 3>>& pts) : P(pts) {
        const int n = static_cast<int>(P.size());
        is_vertex.assign(n, 0);
        uncertain.assign(n, 0);
        if (n == 0) {
            degenerate = true;
            return;
        }
        if (!init_tetra()) {
            degenerate = true;
            return;
        }
        run();
        for (const auto& f : facets)
            if (!f.dead)
                for (int k : f.v) is_vertex[k] = 1;
    }

  private:
    const std::vector<std::array<double, 3>>& P;
    std::vector<int> pending;  // facets that may have points to process

    int orient(const Facet& f, int p) const {
        return orient3d(P[f.v[0]].data(), P[f.v[1]].data(), P[f.v[2]].data(), P[p].data());
    }

    static bool same_pt(const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return a[0] == b[0] && a[1] == b[1] && a[2] == b[2];
    }

    bool init_tetra() {
        const int n = static_cast<int>(P.size());
        int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
        for (int i = 1; i < n; ++i)
            if (!same_pt(P[i], P[i0])) {
                i1 = i;
                break;
            }
        if (i1 < 0) return false;
        for (int i = i1 + 1; i < n; ++i) {
            if (orient2d(P[i1][0], P[i1][1], P[i][0], P[i][1], P[i0][0], P[i0][1]) != 0 ||
                orient2d(P[i1][1], P[i1][2], P[i][1], P[i][2], P[i0][1], P[i0][2]) != 0 ||
                orient2d(P[i1][0], P[i1][2], P[i][0], P[i][2], P[i0][0], P[i0][2]) != 0) {
                i2 = i;
                break;
            }
        }
        if (i2 < 0) return false;
        for (int i = 0; i < n; ++i) {
            if (i == i0 || i == i1 || i == i2) continue;
            if (orient3d(P[i0].data(), P[i1].data(), P[i2].data(), P[i].data()) != 0) {
                i3 = i;
                break;
            }
        }
        if (i3 < 0) return false;
        if (orient3d(P[i0].data(), P[i1].data(), P[i2].data(), P[i3].data()) > 0) std::swap(i1, i2);

        // Outward facets of the tetrahedron (opposite vertex not visible).
        const std::array<std::array<int, 3>, 4> fv = {{{i0, i1, i2}, {i0, i3, i1}, {i1, i3, i2}, {i0, i2, i3}}};
        facets.resize(4);
        for (int k = 0; k < 4; ++k) facets[k].v = fv[k];
        stitch_all();

        std::vector<char> used(n, 0);
        used[i0] = used[i1] = used[i2] = used[i3] = 1;
        for (int q = 0; q < n; ++q) {
            if (used[q]) continue;
            assign_point(q, std::array<int, 4>{0, 1, 2, 3});
        }
        for (int k = 0; k < 4; ++k)
            if (!facets[k].pts.empty()) pending.push_back(k);
        return true;
    }

    // Brute-force adjacency wiring; used once on the 4-facet tetrahedron.
    void stitch_all() {
        for (std::size_t f = 0; f < facets.size(); ++f)
            for (int k = 0; k < 3; ++k) {
                const int a = facets[f].v[k], b = facets[f].v[(k + 1) % 3];
                for (std::size_t g = 0; g < facets.size(); ++g) {
                    if (g == f) continue;
                    for (int m = 0; m < 3; ++m)
                        if (facets[g].v[m] == b && facets[g].v[(m + 1) % 3] == a)
                            facets[f].nbr[k] = static_cast<int>(g);
                }
            }
    }

    // Attach q to the first facet (among `cand`) it strictly sees; record
    // exact-zero sightings so on-hull points are never silently dropped.
    template <typename C>
    void assign_point(int q, const C& cand) {
        bool zero = false;
        for (int fi : cand) {
            Facet& f = facets[fi];
            if (f.dead) continue;
            const int s = orient(f, q);
            if (s > 0) {
                f.pts.push_back(q);
                const double d = approx_dist(f, q);
                if (d > f.peak_dist || f.peak < 0) {
                    f.peak_dist = d;
                    f.peak = q;
                }
                return;
            }
            if (s == 0) zero = true;
        }
        if (zero) uncertain[q] = 1;  // on the hull surface; resolve via LP
    }

    double approx_dist(const Facet& f, int q) const {
        const auto &a = P[f.v[0]], &b = P[f.v[1]], &c = P[f.v[2]], &p = P[q];
        const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
        const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
        const double nx = uy * vz - uz * vy, ny = uz * vx - ux * vz, nz = ux * vy - uy * vx;
        return std::abs(nx * (p[0] - a[0]) + ny * (p[1] - a[1]) + nz * (p[2] - a[2]));
    }

    void run() {
        std::vector<int> visible, stack;
        int stamp = 0;
        while (!pending.empty()) {
            const int f0 = pending.back();
            pending.pop_back();
            Facet& f = facets[f0];
            if (f.dead || f.pts.empty()) continue;
            const int p = f.peak >= 0 ? f.peak : f.pts.front();

            // BFS over strictly visible facets.
            visible.clear();
            stack.assign(1, f0);
            std::vector<int>& mark = visit_mark;
            if (mark.size() < facets.size() + 8) mark.resize(2 * facets.size() + 64, 0);
            ++stamp;
            mark[f0] = stamp;
            struct HEdge { int u, v, outer; };
            std::vector<HEdge> horizon;
            bool tie = false;
            while (!stack.empty()) {
                const int fi = stack.back();
                stack.pop_back();
                visible.push_back(fi);
                for (int k = 0; k < 3; ++k) {
                    const int g = facets[fi].nbr[k];
                    if (mark[g] == stamp) continue;
                    const int s = facets[g].dead ? -2 : orient(facets[g], p);
                    if (s > 0) {
                        mark[g] = stamp;
                        stack.push_back(g);
                    } else {
                        if (s == 0) tie = true;
                        horizon.push_back({facets[fi].v[k], facets[fi].v[(k + 1) % 3], g});
                    }
                }
            }
            // Deduplicate horizon entries pointing at the same edge (an outer
            // facet can be reached from two visible facets across distinct
            // edges; entries are already per-edge and unique by construction).

            // Build the cone.
            std::unordered_map<int, int> start_at, end_at;
            std::vector<int> cone;
            cone.reserve(horizon.size());
            bool stitched = true;
            for (const auto& e : horizon) {
                Facet nf;
                nf.v = {e.u, e.v, p};
                nf.nbr = {e.outer, -1, -1};
                const int id = static_cast<int>(facets.size());
                // rewire outer facet's adjacency from the dying facet to nf
                Facet& g = facets[e.outer];
                for (int m = 0; m < 3; ++m)
                    if (g.v[m] == e.v && g.v[(m + 1) % 3] == e.u) g.nbr[m] = id;
                if (!start_at.emplace(e.u, id).second) stitched = false;
                if (!end_at.emplace(e.v, id).second) stitched = false;
                facets.push_back(std::move(nf));
                cone.push_back(id);
            }
            for (const int id : cone) {
                Facet& nf = facets[id];
                auto itn = start_at.find(nf.v[1]);
                auto itp = end_at.find(nf.v[0]);
                if (itn == start_at.end() || itp == end_at.end()) stitched = false;
                else {
                    nf.nbr[1] = itn->second;  // edge (v, p)
                    nf.nbr[2] = itp->second;  // edge (p, u)
                }
            }
            if (!stitched) {  // non-cycle horizon: exact-tie pathology
                degenerate = true;
                return;
            }
            if (tie) {
                uncertain[p] = 1;
                for (const auto& e : horizon) uncertain[e.u] = uncertain[e.v] = 1;
            }

            // Retire visible facets, reassign their conflict points.
            std::vector<int> orphans;
            for (const int fi : visible) {
                Facet& vf = facets[fi];
                vf.dead = true;
                for (const int q : vf.pts)
                    if (q != p) orphans.push_back(q);
                vf.pts.clear();
                vf.peak = -1;
            }
            std::sort(orphans.begin(), orphans.end());
            orphans.erase(std::unique(orphans.begin(), orphans.end()), orphans.end());
            for (const int q : orphans) assign_point(q, cone);
            for (const int id : cone)
                if (!facets[id].pts.empty()) pending.push_back(id);
        }
    }

    std::vector<int> visit_mark;
};

}  // namespace lagsim
