#pragma once

// SVG rendering of planar tessellations: extreme cells as filled polygons
// (unbounded cells clipped to the canvas), nuclei as dots.  Fill color encodes
// activation time h linearly over the realized h-range: piecewise-linear RGB
// blend blue (#2166ac, earliest) -> beige (#f7f0d8, middle) -> red (#b2182b,
// latest).

#include <charconv>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <lagsim/tessellation.hpp>

namespace lagsim {

struct RenderOptions {
    double width = 800;           // canvas width in px; height follows the view aspect
    double margin = 0.08;         // auto-view expansion as a fraction of the seed bbox
    bool gray_nonextreme = true;  // false omits non-extreme nuclei entirely
    bool color_by_time = true;    // false fills all cells with a neutral color
    std::optional<Box> view;      // world rectangle; default: expanded seed bbox
};

namespace svgdetail {

inline std::string px(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, r.ptr);
}

// Clip a convex polygon to the halfplane ax*x + ay*y <= b.
inline std::vector<Vec> clip_halfplane(const std::vector<Vec>& poly, double ax, double ay,
                                       double b) {
    std::vector<Vec> out;
    const std::size_t m = poly.size();
    for (std::size_t k = 0; k < m; ++k) {
        const Vec& p = poly[k];
        const Vec& q = poly[(k + 1) % m];
        const double sp = ax * p[0] + ay * p[1] - b;
        const double sq = ax * q[0] + ay * q[1] - b;
        if (sp <= 0) out.push_back(p);
        if ((sp <= 0) != (sq <= 0)) {
            const double t = sp / (sp - sq);
            out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
        }
    }
    return out;
}

inline double poly_area(const std::vector<Vec>& poly) {
    double a = 0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        const Vec& p = poly[k];
        const Vec& q = poly[(k + 1) % poly.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

// Laguerre cell of seed i intersected with the view rectangle.
inline std::vector<Vec> cell_in_view(std::size_t i, const SeedSet& S, const Box& view) {
    std::vector<Vec> poly = {{view.lo[0], view.lo[1]},
                             {view.hi[0], view.lo[1]},
                             {view.hi[0], view.hi[1]},
                             {view.lo[0], view.hi[1]}};
    const Seed& si = S.seeds[i];
    for (std::size_t j = 0; j < S.seeds.size() && !poly.empty(); ++j) {
        if (j == i) continue;
        const Seed& sj = S.seeds[j];
        const double ax = 2 * (sj.v[0] - si.v[0]);
        const double ay = 2 * (sj.v[1] - si.v[1]);
        if (ax == 0 && ay == 0) continue;  // duplicate center: height handled by flags
        const double b = sj.v[0] * sj.v[0] + sj.v[1] * sj.v[1] - si.v[0] * si.v[0] -
                         si.v[1] * si.v[1] + sj.h - si.h;
        poly = clip_halfplane(poly, ax, ay, b);
    }
    return poly;
}

inline std::string color_at(double t) {
    // anchors: t=0 blue, t=0.5 beige, t=1 red
    static const int lo[3] = {0x21, 0x66, 0xac};
    static const int mid[3] = {0xf7, 0xf0, 0xd8};
    static const int hi[3] = {0xb2, 0x18, 0x2b};
    int rgb[3];
    for (int c = 0; c < 3; ++c) {
        const double v = t <= 0.5 ? lo[c] + 2 * t * (mid[c] - lo[c])
                                  : mid[c] + 2 * (t - 0.5) * (hi[c] - mid[c]);
        rgb[c] = static_cast<int>(v + 0.5);
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

}  // namespace svgdetail

inline std::string render_svg(const SeedSet& S, const TessellationResult& R,
                              const RenderOptions& opt = {}) {
    using namespace svgdetail;
    const std::size_t n = S.seeds.size();
    if (n == 0) throw std::invalid_argument("render_svg: no seeds");
    for (const Seed& s : S.seeds)
        if (s.v.size() != 2) throw std::invalid_argument("render_svg: d = 2 required");

    Box view;
    if (opt.view) {
        view = *opt.view;
    } else {
        double x0 = S.seeds[0].v[0], x1 = x0, y0 = S.seeds[0].v[1], y1 = y0;
        for (const Seed& s : S.seeds) {
            x0 = std::min(x0, s.v[0]);
            x1 = std::max(x1, s.v[0]);
            y0 = std::min(y0, s.v[1]);
            y1 = std::max(y1, s.v[1]);
        }
        const double pad = std::max({opt.margin * (x1 - x0), opt.margin * (y1 - y0), 0.5});
        view.lo = {x0 - pad, y0 - pad};
        view.hi = {x1 + pad, y1 + pad};
    }
    const double sx = view.hi[0] - view.lo[0], sy = view.hi[1] - view.lo[1];
    if (!(sx > 0) || !(sy > 0)) throw std::invalid_argument("render_svg: empty view");
    const double W = opt.width, H = opt.width * sy / sx;
    auto X = [&](double x) { return (x - view.lo[0]) / sx * W; };
    auto Y = [&](double y) { return H - (y - view.lo[1]) / sy * H; };  // y up in world

    double hmin = S.seeds[0].h, hmax = hmin;
    for (const Seed& s : S.seeds) {
        hmin = std::min(hmin, s.h);
        hmax = std::max(hmax, s.h);
    }
    auto fill = [&](double h) {
        if (!opt.color_by_time) return std::string("#d9e4ee");
        const double t = hmax > hmin ? (h - hmin) / (hmax - hmin) : 0.5;
        return color_at(t);
    };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(W) + "\" height=\"" +
           px(H) + "\" viewBox=\"0 0 " + px(W) + " " + px(H) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + px(W) + "\" height=\"" + px(H) +
           "\" fill=\"#ffffff\"/>\n";

    const double min_area = 1e-12 * sx * sy;
    std::vector<char> drawn(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!R.extreme[i]) continue;
        const auto poly = cell_in_view(i, S, view);
        if (poly.size() < 3 || poly_area(poly) <= min_area) continue;
        drawn[i] = 1;
        out += "<polygon points=\"";
        for (std::size_t k = 0; k < poly.size(); ++k) {
            if (k) out += " ";
            out += px(X(poly[k][0])) + "," + px(Y(poly[k][1]));
        }
        out += "\" fill=\"" + fill(S.seeds[i].h) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double x = S.seeds[i].v[0], y = S.seeds[i].v[1];
        const bool inside = x >= view.lo[0] && x <= view.hi[0] && y >= view.lo[1] &&
                            y <= view.hi[1];
        if (!inside) continue;
        if (R.extreme[i]) {
            out += "<circle class=\"nucleus\" cx=\"" + px(X(x)) + "\" cy=\"" + px(Y(y)) +
                   "\" r=\"3\" fill=\"#000000\"/>\n";
        } else if (opt.gray_nonextreme) {
            out += "<circle class=\"nucleus-gray\" cx=\"" + px(X(x)) + "\" cy=\"" + px(Y(y)) +
                   "\" r=\"2\" fill=\"#999999\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace lagsim
