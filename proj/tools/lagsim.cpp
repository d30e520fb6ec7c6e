// Command-line front end: sampling, tessellation, Monte-Carlo experiments,
// tail curves, acceptance checks, and SVG rendering.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <lagsim/acceptance.hpp>
#include <lagsim/io.hpp>
#include <lagsim/stats.hpp>
#include <lagsim/svg.hpp>

using namespace lagsim;

namespace {

struct ModelFlags {
    std::string family = "gaussian";
    double beta = 0;
    double gamma = 1;
    int d = 2;
    bool beta_set = false;
};

void add_model_flags(CLI::App* sub, ModelFlags& mf) {
    sub->add_option("--model", mf.family, "model family")
        ->check(CLI::IsMember({"beta", "beta-prime", "gaussian"}))
        ->capture_default_str();
    sub->add_option("--beta", mf.beta, "time exponent (beta / beta-prime models)")
        ->each([&mf](const std::string&) { mf.beta_set = true; });
    sub->add_option("--gamma", mf.gamma, "intensity factor (beta / beta-prime models)")
        ->capture_default_str();
    sub->add_option("--d", mf.d, "spatial dimension")->capture_default_str();
}

ModelParams to_model(const ModelFlags& mf) {
    ModelParams m;
    m.family = parse_family(mf.family);
    m.beta = mf.beta;
    m.gamma = mf.gamma;
    m.d = mf.d;
    if (m.family == Family::BetaPrime && !mf.beta_set) m.beta = 12;  // documented default
    m.validate();
    if (m.family == Family::BetaPrime && m.beta <= 5 * m.d + 1)
        std::fprintf(stderr,
                     "warning: beta-prime with beta = %s is outside the proved n^d "
                     "variance-scaling regime (needs beta > %d); proceeding anyway\n",
                     fmt_num(m.beta).c_str(), 5 * m.d + 1);
    return m;
}

int exit_code_for_flags(const RunStats& rs) {
    for (const std::string& f : rs.flags)
        if (f.rfind("UNCERTIFIED", 0) == 0 || f.rfind("CERTIFIED_UNBOUNDED_ANOMALY", 0) == 0)
            return 3;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poisson-Laguerre tessellation toolkit (LAGUERRE_THREADS caps parallelism)"};
    app.require_subcommand(1);

    // ---- sample ----
    auto* sample = app.add_subcommand("sample", "draw one space-time realization");
    ModelFlags sample_mf;
    double sample_n = 1, sample_tol = 1e-3;
    std::uint64_t sample_seed = 1;
    std::string sample_out = "seeds.csv";
    add_model_flags(sample, sample_mf);
    sample->add_option("--n", sample_n, "window half-width")->capture_default_str();
    sample->add_option("--tol", sample_tol, "truncation error budget")->capture_default_str();
    sample->add_option("--seed", sample_seed, "master RNG seed")->capture_default_str();
    sample->add_option("-o,--out", sample_out, "output CSV path")->capture_default_str();
    std::string sample_cfg;
    sample->add_option("--config", sample_cfg, "flat key=value config file");

    // ---- tessellate ----
    auto* tess = app.add_subcommand("tessellate", "classify seeds and export cell geometry");
    std::string tess_in, tess_out = "tessellation.json", tess_svg;
    double tess_n = 0, tess_width = 800;
    bool tess_no_color = false, tess_hide_gray = false;
    tess->add_option("-i,--in", tess_in, "input seed CSV");
    tess->add_option("-o,--out", tess_out, "output JSON path")->capture_default_str();
    tess->add_option("--svg", tess_svg, "also render an SVG to this path");
    tess->add_option("--n", tess_n, "report the extreme count in the window [-n,n]^d");
    tess->add_option("--width", tess_width, "SVG canvas width in px")->capture_default_str();
    tess->add_flag("--no-color", tess_no_color, "neutral cell fill instead of h colormap");
    tess->add_flag("--hide-nonextreme", tess_hide_gray, "omit non-extreme nuclei from the SVG");
    std::string tess_cfg;
    tess->add_option("--config", tess_cfg, "flat key=value config file");

    // ---- render ----
    auto* render = app.add_subcommand("render", "render seeds straight to SVG");
    std::string render_in, render_out = "tessellation.svg";
    double render_width = 800;
    bool render_no_color = false, render_hide_gray = false;
    render->add_option("-i,--in", render_in, "input seed CSV");
    render->add_option("-o,--out", render_out, "output SVG path")->capture_default_str();
    render->add_option("--width", render_width, "canvas width in px")->capture_default_str();
    render->add_flag("--no-color", render_no_color, "neutral cell fill instead of h colormap");
    render->add_flag("--hide-nonextreme", render_hide_gray, "omit non-extreme nuclei");
    std::string render_cfg;
    render->add_option("--config", render_cfg, "flat key=value config file");

    // ---- experiment ----
    auto* exp = app.add_subcommand("experiment", "replicated window counts with diagnostics");
    ModelFlags exp_mf;
    std::vector<double> exp_sizes = {4, 8, 16};
    int exp_reps = 100, exp_cert_reps = 48;
    double exp_tol = 1e-3;
    std::uint64_t exp_seed = 1;
    bool exp_no_certify = false;
    std::string exp_out = "runstats.json", exp_samples_csv;
    add_model_flags(exp, exp_mf);
    exp->add_option("--sizes", exp_sizes, "window half-widths (increasing)")
        ->capture_default_str();
    exp->add_option("--reps", exp_reps, "replications per size")->capture_default_str();
    exp->add_option("--tol", exp_tol, "truncation error budget")->capture_default_str();
    exp->add_option("--seed", exp_seed, "master RNG seed")->capture_default_str();
    exp->add_flag("--no-certify", exp_no_certify, "skip the doubling certification");
    exp->add_option("--cert-reps", exp_cert_reps, "replicates to certify per size")
        ->capture_default_str();
    exp->add_option("-o,--out", exp_out, "output JSON path")->capture_default_str();
    exp->add_option("--samples-csv", exp_samples_csv, "also write raw counts as CSV");
    std::string exp_cfg;
    exp->add_option("--config", exp_cfg, "flat key=value config file");

    // ---- tails ----
    auto* tails = app.add_subcommand("tails", "coverage-time survival curve");
    ModelFlags tails_mf;
    double tails_n = 6, tails_tol = 1e-3;
    int tails_reps = 100, tails_grid = 40;
    std::uint64_t tails_seed = 1;
    std::string tails_out = "tails.json";
    add_model_flags(tails, tails_mf);
    tails->add_option("--n", tails_n, "window half-width")->capture_default_str();
    tails->add_option("--reps", tails_reps, "replications")->capture_default_str();
    tails->add_option("--tol", tails_tol, "truncation error budget")->capture_default_str();
    tails->add_option("--seed", tails_seed, "master RNG seed")->capture_default_str();
    tails->add_option("--grid-points", tails_grid, "survival grid size")->capture_default_str();
    tails->add_option("-o,--out", tails_out, "output JSON path")->capture_default_str();
    std::string tails_cfg;
    tails->add_option("--config", tails_cfg, "flat key=value config file");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run one named acceptance check");
    std::string verify_id;
    std::string verify_out;
    verify->add_option("--check", verify_id, "check id")
        ->required()
        ->check(CLI::IsMember(lagsim::acceptance_ids()));
    verify->add_option("-o,--out", verify_out, "also write the report as JSON");

    CLI11_PARSE(app, argc, argv);

    // flat key=value config files: command-line flags win, file fills the rest
    const auto apply_config = [](CLI::App* sub, const std::string& path) {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file: " + path);
        sub->parse_from_stream(in);
    };

    try {
        apply_config(sample, sample_cfg);
        apply_config(tess, tess_cfg);
        apply_config(render, render_cfg);
        apply_config(exp, exp_cfg);
        apply_config(tails, tails_cfg);

        if (*sample) {
            const ModelParams m = to_model(sample_mf);
            const Window w{sample_n, {}};
            const TruncationPlan plan = truncation_plan(m, w, sample_tol);
            const Box box = Box::cube(m.d, sample_n + plan.padding);
            auto eng = make_engine(derive_stream(sample_seed, 0));
            SeedSet S = sample_process(m, box, plan.time_cutoff, eng, derive_stream(sample_seed, 0));
            write_seedset(sample_out, S);
            std::printf("total_mass=%s realized_count=%zu\n",
                        fmt_num(total_mass(m, box.volume(), plan.time_cutoff)).c_str(),
                        S.seeds.size());
            return 0;
        }

        if (*tess) {
            if (tess_in.empty()) {
                std::fprintf(stderr, "error: tessellate needs --in\n");
                return 2;
            }
            const SeedSet S = read_seedset(tess_in);
            if (S.seeds.empty()) {
                std::fprintf(stderr, "error: no seeds in %s\n", tess_in.c_str());
                return 2;
            }
            TessellationResult R = classify(S);
            const bool planar = S.seeds.front().v.size() == 2;
            if (planar) fill_cells(R, S);
            write_tessellation(tess_out, S, R);
            std::int64_t extreme = 0;
            for (char e : R.extreme) extreme += e;
            if (tess->count("--n")) {
                const auto fc = f_n_count(R, Window{tess_n, {}});
                std::printf("seeds=%zu extreme=%lld f_n=%lld\n", S.seeds.size(),
                            static_cast<long long>(extreme), static_cast<long long>(fc.count));
            } else {
                std::printf("seeds=%zu extreme=%lld\n", S.seeds.size(),
                            static_cast<long long>(extreme));
            }
            if (!tess_svg.empty()) {
                if (!planar) {
                    std::fprintf(stderr, "error: SVG rendering requires d = 2\n");
                    return 2;
                }
                RenderOptions opt;
                opt.width = tess_width;
                opt.color_by_time = !tess_no_color;
                opt.gray_nonextreme = !tess_hide_gray;
                atomic_write(tess_svg, render_svg(S, R, opt));
            }
            return 0;
        }

        if (*render) {
            if (render_in.empty()) {
                std::fprintf(stderr, "error: render needs --in\n");
                return 2;
            }
            const SeedSet S = read_seedset(render_in);
            if (S.seeds.empty()) {
                std::fprintf(stderr, "error: no seeds in %s\n", render_in.c_str());
                return 2;
            }
            const TessellationResult R = classify(S);
            RenderOptions opt;
            opt.width = render_width;
            opt.color_by_time = !render_no_color;
            opt.gray_nonextreme = !render_hide_gray;
            atomic_write(render_out, render_svg(S, R, opt));
            return 0;
        }

        if (*exp) {
            ExperimentConfig cfg;
            cfg.model = to_model(exp_mf);
            cfg.sizes = exp_sizes;
            cfg.replications = exp_reps;
            cfg.tol = exp_tol;
            cfg.master_seed = exp_seed;
            cfg.certify = !exp_no_certify;
            cfg.cert_reps = exp_cert_reps;
            cfg.validate();
            const RunStats rs = run_replications(cfg);
            write_runstats(exp_out, rs);
            if (!exp_samples_csv.empty()) atomic_write(exp_samples_csv, fn_samples_csv(rs));
            for (const PerSizeStats& ps : rs.per_n)
                std::printf("n=%s mean=%s variance=%s\n", fmt_num(ps.n).c_str(),
                            fmt_num(ps.mean).c_str(), fmt_num(ps.variance).c_str());
            if (rs.scaling.defined)
                std::printf("scaling_slope=%s stderr=%s\n", fmt_num(rs.scaling.slope).c_str(),
                            fmt_num(rs.scaling.stderr_).c_str());
            for (const std::string& f : rs.flags) std::printf("flag=%s\n", f.c_str());
            return exit_code_for_flags(rs);
        }

        if (*tails) {
            TailRunConfig cfg;
            cfg.model = to_model(tails_mf);
            cfg.n = tails_n;
            cfg.replications = tails_reps;
            cfg.tol = tails_tol;
            cfg.master_seed = tails_seed;
            cfg.grid_points = tails_grid;
            const TailRun tr = run_tails(cfg);
            write_tailrun(tails_out, cfg, tr);
            std::printf("certified_samples=%lld anomalies=%lld\n",
                        static_cast<long long>(tr.curve.samples),
                        static_cast<long long>(tr.anomalies));
            return 0;
        }

        if (*verify) {
            const CheckResult r = run_acceptance_check(verify_id);
            ordered_json j;
            j["id"] = r.id;
            j["pass"] = r.pass;
            ordered_json measured;
            for (const auto& [k, v] : r.measured) measured[k] = v;
            j["measured"] = std::move(measured);
            if (!r.note.empty()) j["note"] = r.note;
            const std::string doc = j.dump(2);
            std::printf("%s\n", doc.c_str());
            if (!verify_out.empty()) atomic_write(verify_out, doc + "\n");
            return r.pass ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
