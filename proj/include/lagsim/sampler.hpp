#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace lagsim {

// One realization of the process restricted to box x range.
struct SeedSet {
    std::vector<Seed> seeds;
    ModelParams model;
    Box box;
    TimeRange range;
    std::uint64_t rng_label = 0;

    int d() const { return box.d() > 0 ? box.d() : model.d; }
};

// Finite-region approximation plan: spatial padding around the window plus a
// time cutoff, with a heuristic estimate of how many in-window classifications
// the truncation could disturb.
struct TruncationPlan {
    double padding = 0;
    TimeRange time_cutoff;
    double est_error = 0;
};

// u-quantile of the time density restricted to range (mass must be finite).
inline double inverse_time_cdf(const ModelParams& m, const TimeRange& range, double u) {
    m.validate();
    range.validate(m);
    if (!(u >= 0 && u <= 1)) throw std::invalid_argument("inverse_time_cdf: u outside [0,1]");
    switch (m.family) {
        case Family::Beta: {
            if (std::isinf(range.hi)) throw std::domain_error("divergent mass: hi = inf");
            const double p = m.beta + 1;
            const double a = std::pow(range.lo, p), b = std::pow(range.hi, p);
            return std::pow(a + u * (b - a), 1.0 / p);
        }
        case Family::BetaPrime: {
            if (!(range.hi < 0)) throw std::domain_error("divergent mass: hi = 0");
            const double p = 1 - m.beta;  // negative
            const double b = std::pow(-range.hi, p);
            const double a = std::isinf(range.lo) ? 0.0 : std::pow(-range.lo, p);
            return -std::pow(a + u * (b - a), 1.0 / p);
        }
        case Family::Gaussian: {
            if (std::isinf(range.hi)) throw std::domain_error("divergent mass: hi = inf");
            const double b = std::exp(range.hi);
            const double a = std::isinf(range.lo) ? 0.0 : std::exp(range.lo);
            return std::log(a + u * (b - a));
        }
    }
    throw std::logic_error("unreachable");
}

// Poisson sample on box x range: count ~ Poisson(total_mass), positions
// uniform in the box, times via inverse_time_cdf, all independent.
inline SeedSet sample_process(const ModelParams& m, const Box& box, const TimeRange& range,
                              std::mt19937_64& rng, std::uint64_t rng_label = 0) {
    const double mass = total_mass(m, box.volume(), range);
    std::poisson_distribution<long> pois(mass);
    const long count = mass > 0 ? pois(rng) : 0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SeedSet out;
    out.model = m;
    out.box = box;
    out.range = range;
    out.rng_label = rng_label;
    out.seeds.reserve(static_cast<std::size_t>(count));
    const int d = box.d();
    for (long k = 0; k < count; ++k) {
        Seed s;
        s.v.resize(d);
        for (int i = 0; i < d; ++i) s.v[i] = box.lo[i] + unit(rng) * (box.hi[i] - box.lo[i]);
        s.h = inverse_time_cdf(m, range, 1.0 - unit(rng));  // u in (0,1]
        out.seeds.push_back(std::move(s));
    }
    return out;
}

namespace detail {

// Flip-probability heuristic for excluding times beyond the cutoff: functional
// forms of the coverage-time decay with unit constants.
inline double tail_bound(const ModelParams& m, const TimeRange& cutoff) {
    switch (m.family) {
        case Family::Beta: {
            const double e = m.d / 2.0 + m.beta + 1;
            return std::exp(-m.gamma * std::pow(std::max(cutoff.hi - 1.0, 0.0), e));
        }
        case Family::BetaPrime: {
            const double e = m.beta - m.d / 2.0 - 1;
            return std::exp(-m.gamma * std::pow(-cutoff.hi, -e));
        }
        case Family::Gaussian:
            return std::exp(-std::exp(cutoff.hi / 2.0));
    }
    return 1;
}

inline TimeRange minimal_cutoff(const ModelParams& m) {
    switch (m.family) {
        case Family::Beta: return {0.0, 1.0};
        case Family::BetaPrime: return {-inf, -1.0};
        case Family::Gaussian: return {-inf, 0.0};
    }
    return {};
}

}  // namespace detail

// Picks a time cutoff making the heuristic misclassification estimate
// (window-count proxy x flip probability) <= tol, plus spatial padding scaled
// to the influence radius sqrt(time span).  Monotone: smaller tol => weakly
// larger padding and weakly wider time range.
inline TruncationPlan truncation_plan(const ModelParams& m, const Window& window, double tol) {
    m.validate();
    if (!(tol > 0)) throw std::invalid_argument("truncation_plan: tol must be > 0");

    const double count_proxy = std::max(1.0, std::pow(2.0 * window.n, m.d));
    TruncationPlan plan;
    if (std::isinf(tol)) {
        plan.time_cutoff = detail::minimal_cutoff(m);
        plan.padding = 0;
        plan.est_error = count_proxy * detail::tail_bound(m, plan.time_cutoff);
        return plan;
    }

    const double p = std::min(tol / count_proxy, 0.5);
    const double L = std::log(1.0 / p);  // >= log 2
    switch (m.family) {
        case Family::Beta:
            plan.time_cutoff = {0.0, 1.0 + std::pow(L / m.gamma, 1.0 / (m.d / 2.0 + m.beta + 1))};
            break;
        case Family::BetaPrime:
            plan.time_cutoff = {-inf, -std::pow(L / m.gamma, -1.0 / (m.beta - m.d / 2.0 - 1))};
            break;
        case Family::Gaussian:
            plan.time_cutoff = {-inf, 2.0 * std::log(std::max(L, 1.0))};
            break;
    }
    plan.est_error = count_proxy * detail::tail_bound(m, plan.time_cutoff);

    // Influence reach ~ 2 sqrt(span) (two growing crystals meeting), plus a
    // couple of reference cell diameters at the minimal cutoff.
    const TimeRange ref = detail::minimal_cutoff(m);
    double lo_ref;
    switch (m.family) {
        case Family::Beta: lo_ref = 0.0; break;
        case Family::BetaPrime: lo_ref = inverse_time_cdf(m, ref, std::exp(-8.0)); break;
        case Family::Gaussian: lo_ref = ref.hi - 8.0; break;
        default: lo_ref = 0.0;
    }
    const double span = std::max(plan.time_cutoff.hi - lo_ref, 0.0);
    const double ref_mass = total_mass(m, 1.0, ref);
    const double diam_ref = std::pow(std::max(ref_mass, 1e-6), -1.0 / m.d);
    plan.padding = 2.0 * std::sqrt(span) + 2.0 * std::min(diam_ref, std::max(1.0, window.n));
    return plan;
}

}  // namespace lagsim
