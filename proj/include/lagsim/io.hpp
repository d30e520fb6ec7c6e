#pragma once

// Serialization: shortest round-trip decimals, CSV seed files with a JSON
// sidecar, tessellation / experiment / tail-curve JSON documents, and atomic
// file writes.  Infinities appear as the strings "inf" / "-inf".

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include <lagsim/sampler.hpp>
#include <lagsim/stats.hpp>
#include <lagsim/tessellation.hpp>

namespace lagsim {

using ordered_json = nlohmann::ordered_json;

// Shortest decimal that parses back to exactly x.
inline std::string fmt_num(double x) {
    if (std::isnan(x)) return "nan";
    if (x == inf) return "inf";
    if (x == -inf) return "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

inline double parse_num(std::string_view s) {
    double x = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw std::invalid_argument("bad number: '" + std::string(s) + "'");
    return x;
}

// Round to 12 significant digits (used for cell geometry output).
inline double sig12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    double y = 0;
    std::from_chars(buf, r.ptr, y);
    return y;
}

// JSON value for a double: plain number when finite, string otherwise.
inline ordered_json jnum(double x) {
    if (std::isnan(x)) return "nan";
    if (x == inf) return "inf";
    if (x == -inf) return "-inf";
    return x;
}

inline double jget_num(const ordered_json& j) {
    if (j.is_string()) return parse_num(j.get<std::string>());
    return j.get<double>();
}

inline ordered_json jvec(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(jnum(x));
    return a;
}

inline Vec jget_vec(const ordered_json& j) {
    Vec v;
    for (const auto& x : j) v.push_back(jget_num(x));
    return v;
}

// Write content to path via a temporary file and rename, so readers never see
// a partially written file.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".meta.json");
    return p;
}

// ---- SeedSet: CSV (x0,...,x{d-1},h) plus JSON sidecar ----------------------

inline std::string seedset_csv(const SeedSet& S) {
    const int d = S.seeds.empty() ? S.model.d : static_cast<int>(S.seeds.front().v.size());
    std::string out;
    for (int k = 0; k < d; ++k) out += "x" + std::to_string(k) + ",";
    out += "h\n";
    for (const Seed& s : S.seeds) {
        for (double c : s.v) out += fmt_num(c) + ",";
        out += fmt_num(s.h) + "\n";
    }
    return out;
}

inline ordered_json model_json(const ModelParams& m) {
    ordered_json j;
    j["family"] = family_name(m.family);
    if (m.family != Family::Gaussian) {
        j["beta"] = jnum(m.beta);
        j["gamma"] = jnum(m.gamma);
    }
    j["d"] = m.d;
    return j;
}

inline ModelParams model_from_json(const ordered_json& j) {
    ModelParams m;
    m.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("beta")) m.beta = jget_num(j.at("beta"));
    if (j.contains("gamma")) m.gamma = jget_num(j.at("gamma"));
    m.d = j.at("d").get<int>();
    return m;
}

inline ordered_json seedset_meta(const SeedSet& S) {
    ordered_json j;
    j["model"] = model_json(S.model);
    j["box"] = {{"lo", jvec(S.box.lo)}, {"hi", jvec(S.box.hi)}};
    j["range"] = {{"lo", jnum(S.range.lo)}, {"hi", jnum(S.range.hi)}};
    j["rng_label"] = S.rng_label;
    return j;
}

inline void write_seedset(const std::filesystem::path& csv_path, const SeedSet& S) {
    atomic_write(csv_path, seedset_csv(S));
    atomic_write(sidecar_path(csv_path), seedset_meta(S).dump(2) + "\n");
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t c = line.find(',', pos);
        if (c == std::string::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, c - pos));
        pos = c + 1;
    }
}

inline SeedSet read_seedset(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path.string());
    SeedSet S;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty seed file: " + csv_path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "h")
        throw std::runtime_error("seed CSV header must be x0,...,h");
    const std::size_t d = header.size() - 1;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != d + 1)
            throw std::runtime_error("seed CSV row has " + std::to_string(cells.size()) +
                                     " fields, expected " + std::to_string(d + 1));
        Seed s;
        for (std::size_t k = 0; k < d; ++k) s.v.push_back(parse_num(cells[k]));
        s.h = parse_num(cells[d]);
        S.seeds.push_back(std::move(s));
    }
    S.model.d = static_cast<int>(d);
    const auto meta = sidecar_path(csv_path);
    if (std::filesystem::exists(meta)) {
        std::ifstream min(meta);
        ordered_json j = ordered_json::parse(min);
        S.model = model_from_json(j.at("model"));
        S.box.lo = jget_vec(j.at("box").at("lo"));
        S.box.hi = jget_vec(j.at("box").at("hi"));
        S.range.lo = jget_num(j.at("range").at("lo"));
        S.range.hi = jget_num(j.at("range").at("hi"));
        S.rng_label = j.at("rng_label").get<std::uint64_t>();
    }
    return S;
}

// ---- TessellationResult ----------------------------------------------------

inline ordered_json tessellation_json(const SeedSet& S, const TessellationResult& R) {
    const std::size_t n = S.seeds.size();
    ordered_json j;
    j["d"] = S.seeds.empty() ? S.model.d : static_cast<int>(S.seeds.front().v.size());
    j["count"] = n;
    ordered_json cells = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
        ordered_json c;
        c["index"] = i;
        c["center"] = jvec(S.seeds[i].v);
        c["h"] = jnum(S.seeds[i].h);
        c["extreme"] = static_cast<bool>(R.extreme[i]);
        c["certified"] = static_cast<bool>(R.certified[i]);
        c["coverage_time"] = jnum(R.coverage[i]);
        if (R.has_cells && R.cells[i].kind != CellPoly::Kind::Empty) {
            ordered_json poly = ordered_json::array();
            for (const Vec& w : R.cells[i].verts)
                poly.push_back(ordered_json::array({jnum(sig12(w[0])), jnum(sig12(w[1]))}));
            c["polygon"] = std::move(poly);
            if (R.cells[i].kind == CellPoly::Kind::Unbounded) {
                ordered_json rays = ordered_json::array();
                for (const Vec& r : R.cells[i].rays)
                    rays.push_back(ordered_json::array({jnum(sig12(r[0])), jnum(sig12(r[1]))}));
                c["rays"] = std::move(rays);
            }
        }
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    return j;
}

inline void write_tessellation(const std::filesystem::path& path, const SeedSet& S,
                               const TessellationResult& R) {
    atomic_write(path, tessellation_json(S, R).dump(2) + "\n");
}

// ---- RunStats --------------------------------------------------------------

inline ordered_json runstats_json(const RunStats& rs) {
    ordered_json j;
    ordered_json cfg;
    cfg["model"] = model_json(rs.cfg.model);
    ordered_json sizes = ordered_json::array();
    for (double n : rs.cfg.sizes) sizes.push_back(jnum(n));
    cfg["sizes"] = std::move(sizes);
    cfg["replications"] = rs.cfg.replications;
    cfg["tol"] = jnum(rs.cfg.tol);
    cfg["master_seed"] = rs.cfg.master_seed;
    cfg["certify"] = rs.cfg.certify;
    cfg["cert_reps"] = rs.cfg.cert_reps;
    // deliberately no thread count here: results are thread-count independent
    j["config"] = std::move(cfg);

    ordered_json per = ordered_json::array();
    for (std::size_t si = 0; si < rs.per_n.size(); ++si) {
        const PerSizeStats& ps = rs.per_n[si];
        ordered_json p;
        p["n"] = jnum(ps.n);
        p["plan"] = {{"padding", jnum(ps.plan.padding)},
                     {"time_lo", jnum(ps.plan.time_cutoff.lo)},
                     {"time_hi", jnum(ps.plan.time_cutoff.hi)},
                     {"est_error", jnum(ps.plan.est_error)}};
        p["mean"] = jnum(ps.mean);
        p["variance"] = jnum(ps.variance);
        p["doubled_reps"] = ps.doubled_reps;
        p["mean_base_subset"] = jnum(ps.mean_base_subset);
        p["mean_doubled"] = jnum(ps.mean_doubled);
        p["doubling_rel_change"] = jnum(ps.doubling_rel_change);
        p["certified_in_window"] = ps.certified_in_window;
        p["uncertified_in_window"] = ps.uncertified_in_window;
        p["anomalies"] = ps.anomalies;
        if (si < rs.normality.size()) {
            p["d_K"] = jnum(rs.normality[si].d_K);
            p["d_W"] = jnum(rs.normality[si].d_W);
        }
        ordered_json samples = ordered_json::array();
        for (double x : ps.samples) samples.push_back(jnum(x));
        p["samples"] = std::move(samples);
        per.push_back(std::move(p));
    }
    j["per_n"] = std::move(per);

    ordered_json sc;
    sc["defined"] = rs.scaling.defined;
    sc["slope"] = jnum(rs.scaling.slope);
    sc["stderr"] = jnum(rs.scaling.stderr_);
    ordered_json ratio = ordered_json::array();
    for (double q : rs.scaling.ratio) ratio.push_back(jnum(q));
    sc["var_over_nd"] = std::move(ratio);
    j["scaling"] = std::move(sc);

    ordered_json flags = ordered_json::array();
    for (const std::string& f : rs.flags) flags.push_back(f);
    j["flags"] = std::move(flags);
    return j;
}

inline void write_runstats(const std::filesystem::path& path, const RunStats& rs) {
    atomic_write(path, runstats_json(rs).dump(2) + "\n");
}

// Raw per-replicate counts, one row per (window size, replicate).
inline std::string fn_samples_csv(const RunStats& rs) {
    std::string out = "n,replicate,f_n\n";
    for (const PerSizeStats& ps : rs.per_n)
        for (std::size_t r = 0; r < ps.samples.size(); ++r)
            out += fmt_num(ps.n) + "," + std::to_string(r) + "," + fmt_num(ps.samples[r]) + "\n";
    return out;
}

// ---- Tail runs -------------------------------------------------------------

inline ordered_json tailrun_json(const TailRunConfig& cfg, const TailRun& tr) {
    ordered_json j;
    ordered_json c;
    c["model"] = model_json(cfg.model);
    c["n"] = jnum(cfg.n);
    c["replications"] = cfg.replications;
    c["tol"] = jnum(cfg.tol);
    c["master_seed"] = cfg.master_seed;
    c["grid_points"] = cfg.grid_points;
    j["config"] = std::move(c);
    j["plan"] = {{"padding", jnum(tr.plan.padding)},
                 {"time_lo", jnum(tr.plan.time_cutoff.lo)},
                 {"time_hi", jnum(tr.plan.time_cutoff.hi)},
                 {"est_error", jnum(tr.plan.est_error)}};
    j["samples"] = tr.curve.samples;
    j["anomalies"] = tr.anomalies;
    ordered_json curve;
    curve["H"] = ordered_json::array();
    curve["P"] = ordered_json::array();
    curve["wilson_lo"] = ordered_json::array();
    curve["wilson_hi"] = ordered_json::array();
    for (std::size_t k = 0; k < tr.curve.H.size(); ++k) {
        curve["H"].push_back(jnum(tr.curve.H[k]));
        curve["P"].push_back(jnum(tr.curve.P[k]));
        curve["wilson_lo"].push_back(jnum(tr.curve.wilson_lo[k]));
        curve["wilson_hi"].push_back(jnum(tr.curve.wilson_hi[k]));
    }
    j["curve"] = std::move(curve);
    return j;
}

inline void write_tailrun(const std::filesystem::path& path, const TailRunConfig& cfg,
                          const TailRun& tr) {
    atomic_write(path, tailrun_json(cfg, tr).dump(2) + "\n");
}

}  // namespace lagsim
