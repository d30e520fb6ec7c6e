#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "oracle.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "tessellation.hpp"

namespace lagsim {

// Monte-Carlo harness: replicated window counts F_n, variance scaling,
// normality distances, and coverage-time tail curves.

struct ExperimentConfig {
    ModelParams model;
    std::vector<double> sizes;  // window half-widths n (W_n = [-n, n]^d)
    int replications = 2;
    double tol = 1e-3;          // truncation plan tolerance
    std::uint64_t master_seed = 1;
    bool certify = true;        // doubling check on a per-size subset
    int cert_reps = 48;         // subset size (capped at replications)

    void validate() const {
        model.validate();
        if (replications < 2) throw std::invalid_argument("ExperimentConfig: R >= 2 required");
        if (sizes.empty()) throw std::invalid_argument("ExperimentConfig: no window sizes");
        for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
            if (!(sizes[i] < sizes[i + 1]))
                throw std::invalid_argument("ExperimentConfig: sizes must be strictly increasing");
        if (!(sizes.front() > 0)) throw std::invalid_argument("ExperimentConfig: sizes must be > 0");
        if (!(tol > 0)) throw std::invalid_argument("ExperimentConfig: tol must be > 0");
        if (certify && cert_reps < 1)
            throw std::invalid_argument("ExperimentConfig: cert_reps >= 1 required");
    }
};

struct FnCount {
    std::int64_t count = 0;
    std::int64_t uncertified = 0;  // counted seeds without a certification mark
};

// Extreme seeds whose nucleus lies in the window.
inline FnCount f_n_count(const TessellationResult& T, const Window& window) {
    FnCount out;
    for (std::size_t i = 0; i < T.extreme.size(); ++i) {
        if (!T.extreme[i] || !window.contains(T.centers[i])) continue;
        ++out.count;
        if (!T.certified[i]) ++out.uncertified;
    }
    return out;
}

namespace statsdetail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Acklam's rational approximation with one Halley refinement.
inline double normal_quantile(double p) {
    if (!(p > 0 && p < 1)) throw std::invalid_argument("normal_quantile: p in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1);
    } else if (p > phigh) {
        const double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1);
    } else {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    }
    // Halley step against the exact CDF.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
    x = x - u / (1 + x * u / 2);
    return x;
}

inline int thread_budget() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("LAGUERRE_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return std::min(n, 64);
}

// Mass-doubling of the time cutoff (closed forms per family).
inline TimeRange doubled_cutoff(const ModelParams& m, const TimeRange& cut) {
    TimeRange out = cut;
    switch (m.family) {
        case Family::Beta: out.hi = cut.hi * std::pow(2.0, 1.0 / (m.beta + 1)); break;
        case Family::BetaPrime: out.hi = cut.hi * std::pow(2.0, -1.0 / (m.beta - 1)); break;
        case Family::Gaussian: out.hi = cut.hi + std::log(2.0); break;
    }
    return out;
}

struct RepOutcome {
    double fn = 0;
    double fn_doubled = std::numeric_limits<double>::quiet_NaN();
    bool doubled = false;
    std::int64_t uncertified = 0;       // uncertified extreme seeds in window
    std::int64_t certified = 0;         // certified extreme seeds in window
    std::int64_t anomalies = 0;         // certified yet unbounded in window
    std::vector<double> tail_samples;   // T of certified bounded window seeds
};

// One replicate: sample on the padded region, classify, optionally rerun on
// the coupled doubled region (superset sample via independent increments) and
// mark base seeds whose classification and coverage agree.
inline RepOutcome run_one(const ModelParams& model, double n, const TruncationPlan& plan,
                          std::uint64_t master, std::uint64_t ni, std::uint64_t rep,
                          bool doubling, bool collect_tails) {
    const Window win{n, {}};
    const double a = n + plan.padding;
    const Box box1 = Box::cube(model.d, a);
    const TimeRange range1 = plan.time_cutoff;

    auto eng0 = make_engine(derive_stream(master, ni, rep, 0));
    SeedSet S = sample_process(model, box1, range1, eng0, 0);
    TessellationResult R1 = classify(S);

    RepOutcome out;
    out.fn = static_cast<double>(f_n_count(R1, win).count);
    if (!doubling) return out;

    // Doubled plan: twice the padding, mass-doubled time cutoff.  The
    // doubled sample extends the base sample by independent Poisson
    // increments on disjoint regions (superposition), so the base seeds are
    // shared and the comparison is coupled.
    const TimeRange range2 = doubled_cutoff(model, range1);
    const double b = n + 2 * plan.padding;
    SeedSet S2 = S;
    S2.box = Box::cube(model.d, b);
    S2.range = range2;

    auto extend = [&](const Box& region, const TimeRange& tr, std::uint64_t stream_id) {
        auto eng = make_engine(derive_stream(master, ni, rep, stream_id));
        SeedSet part = sample_process(model, region, tr, eng, 0);
        S2.seeds.insert(S2.seeds.end(), part.seeds.begin(), part.seeds.end());
    };
    // region 1: base box, times between the two cutoffs
    extend(box1, TimeRange{range1.hi, range2.hi}, 1);
    // regions 2-5: ring box2 \ box1 as four rectangles, full doubled range
    extend(Box{{-b, -b}, {-a, b}}, range2, 2);
    extend(Box{{a, -b}, {b, b}}, range2, 3);
    extend(Box{{-a, -b}, {a, -a}}, range2, 4);
    extend(Box{{-a, a}, {a, b}}, range2, 5);

    TessellationResult R2 = classify(S2);
    out.fn_doubled = static_cast<double>(f_n_count(R2, win).count);
    out.doubled = true;

    for (std::size_t i = 0; i < S.seeds.size(); ++i) {
        const bool flags_match = R1.extreme[i] == R2.extreme[i] &&
                                 R1.unbounded[i] == R2.unbounded[i];
        bool times_match = true;
        if (flags_match && R1.extreme[i] && !R1.unbounded[i]) {
            const double t1 = R1.coverage[i], t2 = R2.coverage[i];
            times_match = std::abs(t1 - t2) <= 1e-7 * (1.0 + std::abs(t1));
        }
        R1.certified[i] = flags_match && times_match;
        if (!R1.extreme[i] || !win.contains(S.seeds[i].v)) continue;
        if (!R1.certified[i]) {
            ++out.uncertified;
            continue;
        }
        ++out.certified;
        if (R1.unbounded[i]) {
            ++out.anomalies;  // certified yet unbounded: contradicts local finiteness
            continue;
        }
        if (collect_tails) out.tail_samples.push_back(R1.coverage[i]);
    }
    return out;
}

template <typename Task>
inline void parallel_for(std::size_t count, Task&& task) {
    const int threads = std::min<std::size_t>(thread_budget(), count);
    if (threads <= 1) {
        for (std::size_t k = 0; k < count; ++k) task(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) task(k);
        });
    for (auto& th : pool) th.join();
}

}  // namespace statsdetail

struct PerSizeStats {
    double n = 0;
    TruncationPlan plan;
    std::vector<double> samples;  // F_n per replicate, replicate order
    double mean = 0;
    double variance = 0;  // unbiased
    int doubled_reps = 0;
    double mean_base_subset = std::numeric_limits<double>::quiet_NaN();
    double mean_doubled = std::numeric_limits<double>::quiet_NaN();
    double doubling_rel_change = std::numeric_limits<double>::quiet_NaN();
    std::int64_t uncertified_in_window = 0;
    std::int64_t certified_in_window = 0;
    std::int64_t anomalies = 0;
};

struct ScalingResult {
    bool defined = false;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double stderr_ = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> ratio;  // Var(F_n) / n^d per size
};

struct Normality {
    double d_K = 0;
    double d_W = 0;
};

struct TailCurve {
    std::vector<double> H;
    std::vector<double> P;
    std::vector<double> wilson_lo;
    std::vector<double> wilson_hi;
    std::int64_t samples = 0;
};

struct RunStats {
    ExperimentConfig cfg;
    std::vector<PerSizeStats> per_n;
    ScalingResult scaling;
    std::vector<Normality> normality;  // aligned with per_n
    std::vector<std::string> flags;
};

// Least-squares slope of log Var against log n, with Var/n^d ratio table.
inline ScalingResult variance_scaling(const std::vector<double>& sizes,
                                      const std::vector<double>& variances, int d) {
    if (sizes.size() < 3 || sizes.size() != variances.size())
        throw std::invalid_argument("variance_scaling: >= 3 window sizes required");
    ScalingResult out;
    out.ratio.reserve(sizes.size());
    bool positive = true;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        out.ratio.push_back(variances[i] / std::pow(sizes[i], d));
        if (!(variances[i] > 0)) positive = false;
    }
    if (!positive) return out;  // slope undefined (flagged by caller)
    const std::size_t m = sizes.size();
    double sx = 0, sy = 0;
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = std::log(sizes[i]);
        ys[i] = std::log(variances[i]);
        sx += xs[i];
        sy += ys[i];
    }
    const double xbar = sx / m, ybar = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    out.slope = sxy / sxx;
    double sse = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = ys[i] - ybar - out.slope * (xs[i] - xbar);
        sse += e * e;
    }
    out.stderr_ = std::sqrt(sse / (m - 2) / sxx);
    out.defined = true;
    return out;
}

// Kolmogorov and Wasserstein distances of the standardized sample against
// the standard normal (sample-moment standardization).
inline Normality normality_diagnostics(std::vector<double> samples) {
    const std::size_t R = samples.size();
    if (R < 30) throw std::invalid_argument("normality_diagnostics: >= 30 samples required");
    double mean = 0;
    for (double x : samples) mean += x;
    mean /= R;
    double var = 0;
    for (double x : samples) var += (x - mean) * (x - mean);
    var /= (R - 1);
    if (!(var > 0)) throw std::invalid_argument("normality_diagnostics: zero sample variance");
    const double sd = std::sqrt(var);
    for (double& x : samples) x = (x - mean) / sd;
    std::sort(samples.begin(), samples.end());
    Normality out;
    for (std::size_t i = 0; i < R; ++i) {
        const double phi = statsdetail::normal_cdf(samples[i]);
        out.d_K = std::max(out.d_K, std::max((i + 1.0) / R - phi, phi - static_cast<double>(i) / R));
        out.d_W += std::abs(samples[i] - statsdetail::normal_quantile((i + 0.5) / R));
    }
    out.d_W /= R;
    return out;
}

// Empirical survival P(T > H) with Wilson 95% intervals; -inf samples count
// below every H, +inf above every H.
inline TailCurve tail_survival(const std::vector<double>& T, const std::vector<double>& Hgrid) {
    TailCurve out;
    out.H = Hgrid;
    out.samples = static_cast<std::int64_t>(T.size());
    const double z = 1.959963984540054, z2 = z * z;
    const double m = static_cast<double>(T.size());
    for (double H : Hgrid) {
        std::size_t above = 0;
        for (double t : T)
            if (t > H) ++above;
        const double p = m > 0 ? above / m : 0.0;
        out.P.push_back(p);
        if (m > 0) {
            const double denom = 1 + z2 / m;
            const double center = (p + z2 / (2 * m)) / denom;
            const double half = z * std::sqrt(p * (1 - p) / m + z2 / (4 * m * m)) / denom;
            // clamp to [0,1] and guard the 1-ulp case where rounding would
            // leave the point estimate outside its own interval
            out.wilson_lo.push_back(std::min(p, std::max(0.0, center - half)));
            out.wilson_hi.push_back(std::max(p, std::min(1.0, center + half)));
        } else {
            out.wilson_lo.push_back(0.0);
            out.wilson_hi.push_back(1.0);
        }
    }
    return out;
}

// Full experiment: replicated counts per window size, scaling and normality
// diagnostics, doubling certification on the leading replicate subset.
inline RunStats run_replications(const ExperimentConfig& cfg) {
    cfg.validate();
    RunStats rs;
    rs.cfg = cfg;
    const std::size_t S = cfg.sizes.size();
    const int R = cfg.replications;
    const int creps = cfg.certify ? std::min(cfg.cert_reps, R) : 0;

    rs.per_n.resize(S);
    std::vector<std::vector<statsdetail::RepOutcome>> slots(S);
    for (std::size_t si = 0; si < S; ++si) {
        rs.per_n[si].n = cfg.sizes[si];
        rs.per_n[si].plan = truncation_plan(cfg.model, Window{cfg.sizes[si], {}}, cfg.tol);
        slots[si].resize(R);
    }

    statsdetail::parallel_for(S * static_cast<std::size_t>(R), [&](std::size_t k) {
        const std::size_t si = k / R;
        const int rep = static_cast<int>(k % R);
        slots[si][rep] = statsdetail::run_one(cfg.model, cfg.sizes[si], rs.per_n[si].plan,
                                              cfg.master_seed, si, rep, rep < creps, false);
    });

    for (std::size_t si = 0; si < S; ++si) {
        PerSizeStats& ps = rs.per_n[si];
        ps.samples.reserve(R);
        double mean = 0;
        for (int rep = 0; rep < R; ++rep) {
            ps.samples.push_back(slots[si][rep].fn);
            mean += slots[si][rep].fn;
        }
        mean /= R;
        double var = 0;
        for (double x : ps.samples) var += (x - mean) * (x - mean);
        ps.mean = mean;
        ps.variance = var / (R - 1);
        if (creps > 0) {
            double mb = 0, md = 0;
            for (int rep = 0; rep < creps; ++rep) {
                mb += slots[si][rep].fn;
                md += slots[si][rep].fn_doubled;
                ps.uncertified_in_window += slots[si][rep].uncertified;
                ps.certified_in_window += slots[si][rep].certified;
                ps.anomalies += slots[si][rep].anomalies;
            }
            ps.doubled_reps = creps;
            ps.mean_base_subset = mb / creps;
            ps.mean_doubled = md / creps;
            ps.doubling_rel_change =
                std::abs(ps.mean_doubled - ps.mean_base_subset) /
                std::max(1.0, std::abs(ps.mean_base_subset));
            if (ps.anomalies > 0)
                rs.flags.push_back("CERTIFIED_UNBOUNDED_ANOMALY:n=" + std::to_string(ps.n));
            if (ps.uncertified_in_window > 0)
                rs.flags.push_back("UNCERTIFIED:n=" + std::to_string(ps.n));
        }
    }

    std::vector<double> vars;
    for (const auto& ps : rs.per_n) vars.push_back(ps.variance);
    if (S >= 3) {
        rs.scaling = variance_scaling(cfg.sizes, vars, cfg.model.d);
        if (!rs.scaling.defined) rs.flags.push_back("VARIANCE_SCALING_UNDEFINED");
    }
    for (const auto& ps : rs.per_n) {
        if (ps.samples.size() >= 30 && ps.variance > 0) {
            rs.normality.push_back(normality_diagnostics(ps.samples));
        } else {
            rs.normality.push_back({std::numeric_limits<double>::quiet_NaN(),
                                    std::numeric_limits<double>::quiet_NaN()});
            rs.flags.push_back("NORMALITY_SKIPPED:n=" + std::to_string(ps.n));
        }
    }
    return rs;
}

struct TailRunConfig {
    ModelParams model;
    double n = 6;            // window half-width
    int replications = 100;
    double tol = 1e-3;
    std::uint64_t master_seed = 1;
    int grid_points = 40;
};

struct TailRun {
    TailCurve curve;
    std::vector<double> samples;  // certified bounded coverage times
    std::int64_t anomalies = 0;
    TruncationPlan plan;
};

// Coverage-time tail experiment: every replicate is doubled so that all
// collected T values come from certified seeds.
inline TailRun run_tails(const TailRunConfig& cfg) {
    cfg.model.validate();
    if (cfg.replications < 1) throw std::invalid_argument("run_tails: replications >= 1");
    TailRun out;
    out.plan = truncation_plan(cfg.model, Window{cfg.n, {}}, cfg.tol);
    std::vector<statsdetail::RepOutcome> slots(cfg.replications);
    statsdetail::parallel_for(slots.size(), [&](std::size_t rep) {
        slots[rep] = statsdetail::run_one(cfg.model, cfg.n, out.plan, cfg.master_seed, 0, rep,
                                          true, true);
    });
    for (auto& s : slots) {
        out.anomalies += s.anomalies;
        out.samples.insert(out.samples.end(), s.tail_samples.begin(), s.tail_samples.end());
    }
    if (out.samples.empty()) {
        out.curve = tail_survival(out.samples, {});
        return out;
    }
    std::vector<double> sorted = out.samples;
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted[static_cast<std::size_t>(0.02 * (sorted.size() - 1))];
    const double hi = sorted.back();
    std::vector<double> grid;
    for (int k = 0; k < cfg.grid_points; ++k)
        grid.push_back(lo + (hi - lo) * k / (cfg.grid_points - 1));
    out.curve = tail_survival(out.samples, grid);
    return out;
}

}  // namespace lagsim
