#pragma once

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace lagsim {

// Sign-exact orientation predicates: fast double evaluation with a static
// error filter, falling back to exact rational arithmetic when the filter
// cannot certify the sign.

namespace detail {

using bigrat = boost::multiprecision::cpp_rational;

constexpr double eps_half = 1.1102230246251565e-16;  // 2^-53
constexpr double orient2d_bound = (3.0 + 16.0 * eps_half) * eps_half;
constexpr double orient3d_bound = (7.0 + 56.0 * eps_half) * eps_half;

inline int sign_of(const bigrat& v) {
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

}  // namespace detail

// Sign of det [[ax-cx, ay-cy], [bx-cx, by-cy]]: +1 when a,b,c make a left
// turn (counterclockwise), -1 clockwise, 0 collinear.
inline int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
    const double acx = ax - cx, acy = ay - cy;
    const double bcx = bx - cx, bcy = by - cy;
    const double l = acx * bcy, r = acy * bcx;
    const double det = l - r;
    const double detsum = std::abs(l) + std::abs(r);
    if (std::abs(det) > detail::orient2d_bound * detsum) return det > 0 ? 1 : -1;
    using detail::bigrat;
    const bigrat d = (bigrat(ax) - bigrat(cx)) * (bigrat(by) - bigrat(cy)) -
                     (bigrat(ay) - bigrat(cy)) * (bigrat(bx) - bigrat(cx));
    return detail::sign_of(d);
}

// Sign of det of rows (a-d, b-d, c-d): +1 when d lies on the negative side of
// the plane through a,b,c oriented so that a,b,c appear counterclockwise from
// the positive side.
inline int orient3d(const double* a, const double* b, const double* c, const double* d) {
    const double adx = a[0] - d[0], ady = a[1] - d[1], adz = a[2] - d[2];
    const double bdx = b[0] - d[0], bdy = b[1] - d[1], bdz = b[2] - d[2];
    const double cdx = c[0] - d[0], cdy = c[1] - d[1], cdz = c[2] - d[2];

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;

    const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                             (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                             (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
    if (std::abs(det) > detail::orient3d_bound * permanent) return det > 0 ? 1 : -1;

    using detail::bigrat;
    const bigrat Adx = bigrat(a[0]) - bigrat(d[0]), Ady = bigrat(a[1]) - bigrat(d[1]),
                 Adz = bigrat(a[2]) - bigrat(d[2]);
    const bigrat Bdx = bigrat(b[0]) - bigrat(d[0]), Bdy = bigrat(b[1]) - bigrat(d[1]),
                 Bdz = bigrat(b[2]) - bigrat(d[2]);
    const bigrat Cdx = bigrat(c[0]) - bigrat(d[0]), Cdy = bigrat(c[1]) - bigrat(d[1]),
                 Cdz = bigrat(c[2]) - bigrat(d[2]);
    const bigrat D = Adz * (Bdx * Cdy - Cdx * Bdy) + Bdz * (Cdx * Ady - Adx * Cdy) +
                     Cdz * (Adx * Bdy - Bdx * Ady);
    return detail::sign_of(D);
}

inline int orient2d(const double* a, const double* b, const double* c) {
    return orient2d(a[0], a[1], b[0], b[1], c[0], c[1]);
}

}  // namespace lagsim
