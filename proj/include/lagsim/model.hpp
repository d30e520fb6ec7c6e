#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace lagsim {

constexpr double inf = std::numeric_limits<double>::infinity();

using Vec = boost::container::small_vector<double, 4>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dist2(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }

// A seed (v, h): nucleus position v and activation time h.
struct Seed {
    Vec v;
    double h = 0;
};

enum class Family { Beta, BetaPrime, Gaussian };

inline std::string family_name(Family f) {
    switch (f) {
        case Family::Beta: return "beta";
        case Family::BetaPrime: return "beta-prime";
        case Family::Gaussian: return "gaussian";
    }
    return "?";
}

inline Family parse_family(const std::string& name) {
    if (name == "beta") return Family::Beta;
    if (name == "beta-prime") return Family::BetaPrime;
    if (name == "gaussian") return Family::Gaussian;
    throw std::invalid_argument("unknown model family: " + name);
}

// Time-intensity family on R^d x support:
//   beta:       gamma * c * h^beta        on [0, inf)
//   beta-prime: gamma * c * (-h)^(-beta)  on (-inf, 0)
//   gaussian:   e^h                       on (-inf, inf)
struct ModelParams {
    Family family = Family::Gaussian;
    double beta = 0;    // ignored for gaussian
    double gamma = 1;   // ignored for gaussian
    int d = 2;

    void validate() const {
        if (d < 1) throw std::invalid_argument("dimension must be >= 1");
        if (family == Family::Gaussian) return;
        if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
        if (family == Family::Beta && !(beta > -1))
            throw std::invalid_argument("beta model requires beta > -1");
        if (family == Family::BetaPrime && !(beta > d / 2.0 + 1))
            throw std::invalid_argument("beta-prime model requires beta > d/2 + 1");
    }

    double support_lo() const { return family == Family::Beta ? 0.0 : -inf; }
    double support_hi() const { return family == Family::BetaPrime ? 0.0 : inf; }
};

// Observation window W = center + [-n, n]^d.
struct Window {
    double n = 1;
    Vec center;  // empty means origin

    bool contains(const Vec& v) const {
        for (std::size_t i = 0; i < v.size(); ++i) {
            double c = i < center.size() ? center[i] : 0.0;
            if (std::abs(v[i] - c) > n) return false;
        }
        return true;
    }
    double volume(int d) const { return std::pow(2.0 * n, d); }
};

// Half-open bookkeeping interval of activation times, endpoints may be +-inf.
struct TimeRange {
    double lo = -inf;
    double hi = inf;

    void validate(const ModelParams& m) const {
        if (!(lo < hi)) throw std::invalid_argument("time range requires lo < hi");
        if (lo < m.support_lo() || hi > m.support_hi())
            throw std::invalid_argument("time range outside model support");
    }
};

// Axis-aligned box in R^d.
struct Box {
    Vec lo, hi;

    int d() const { return static_cast<int>(lo.size()); }
    double volume() const {
        double v = 1;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
        return v;
    }
    static Box cube(int d, double half, const Vec& center = {}) {
        Box b;
        for (int i = 0; i < d; ++i) {
            double c = static_cast<std::size_t>(i) < center.size() ? center[i] : 0.0;
            b.lo.push_back(c - half);
            b.hi.push_back(c + half);
        }
        return b;
    }
};

// pow(w, (v,h)) = |w - v|^2 + h.
inline double power(const Vec& w, const Seed& x) {
    if (w.size() != x.v.size()) throw std::invalid_argument("power: dimension mismatch");
    return dist2(w, x.v) + x.h;
}

namespace detail {
inline double log_gamma(double x) {
    int sign = 0;
    return lgamma_r(x, &sign);
}
}  // namespace detail

// Normalizing constant of the time density:
//   beta:       Gamma(d/2 + beta + 3/2) / (pi^((d+1)/2) Gamma(beta + 1))
//   beta-prime: Gamma(beta) / (pi^((d+1)/2) Gamma(beta - (d+1)/2))
//   gaussian:   1
inline double intensity_constant(const ModelParams& m) {
    m.validate();
    const double log_pi_pow = 0.5 * (m.d + 1) * std::log(M_PI);
    double c = 1;
    switch (m.family) {
        case Family::Beta:
            c = std::exp(detail::log_gamma(m.d / 2.0 + m.beta + 1.5) -
                         detail::log_gamma(m.beta + 1) - log_pi_pow);
            break;
        case Family::BetaPrime:
            c = std::exp(detail::log_gamma(m.beta) -
                         detail::log_gamma(m.beta - (m.d + 1) / 2.0) - log_pi_pow);
            break;
        case Family::Gaussian:
            c = 1;
            break;
    }
    if (!std::isfinite(c) || !(c > 0))
        throw std::invalid_argument("intensity constant not finite/positive");
    return c;
}

// Density of activation times (per unit volume in space), zero off the support.
inline double time_density(const ModelParams& m, double h) {
    switch (m.family) {
        case Family::Beta:
            if (h < 0) return 0;
            return m.gamma * intensity_constant(m) * std::pow(h, m.beta);
        case Family::BetaPrime:
            if (h >= 0) return 0;
            return m.gamma * intensity_constant(m) * std::pow(-h, -m.beta);
        case Family::Gaussian:
            return std::exp(h);
    }
    return 0;
}

// box_volume * integral of time_density over [range.lo, range.hi].
// Divergent integrals are reported as errors, never as +inf.
inline double total_mass(const ModelParams& m, double box_volume, const TimeRange& range) {
    m.validate();
    range.validate(m);
    if (!(box_volume > 0)) throw std::invalid_argument("total_mass: box_volume must be > 0");
    double integral = 0;
    switch (m.family) {
        case Family::Beta: {
            if (std::isinf(range.hi)) throw std::domain_error("total_mass diverges as hi -> inf");
            const double p = m.beta + 1;
            integral = m.gamma * intensity_constant(m) *
                       (std::pow(range.hi, p) - std::pow(range.lo, p)) / p;
            break;
        }
        case Family::BetaPrime: {
            if (!(range.hi < 0))
                throw std::domain_error("total_mass diverges as hi -> 0-");
            const double p = 1 - m.beta;  // negative
            const double upper = std::pow(-range.hi, p);
            const double lower = std::isinf(range.lo) ? 0.0 : std::pow(-range.lo, p);
            integral = m.gamma * intensity_constant(m) * (upper - lower) / (m.beta - 1);
            break;
        }
        case Family::Gaussian: {
            if (std::isinf(range.hi)) throw std::domain_error("total_mass diverges as hi -> inf");
            const double lower = std::isinf(range.lo) ? 0.0 : std::exp(range.lo);
            integral = std::exp(range.hi) - lower;
            break;
        }
    }
    return box_volume * integral;
}

}  // namespace lagsim
