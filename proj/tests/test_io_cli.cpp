#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include <lagsim/io.hpp>
#include <lagsim/oracle.hpp>
#include <lagsim/svg.hpp>

using namespace lagsim;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("lagsim-test-" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Minimal XML well-formedness scan: every tag closes, quotes balance.
bool well_formed_xml(const std::string& s) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '<') {
            ++i;
            continue;
        }
        std::size_t j = s.find('>', i);
        if (j == std::string::npos) return false;
        std::string tag = s.substr(i + 1, j - i - 1);
        if (!tag.empty() && tag[0] == '?') {  // declaration
            i = j + 1;
            continue;
        }
        long quotes = std::count(tag.begin(), tag.end(), '"');
        if (quotes % 2 != 0) return false;
        if (tag[0] == '/') {
            if (stack.empty()) return false;
            if (stack.back() != tag.substr(1)) return false;
            stack.pop_back();
        } else if (tag.back() != '/') {
            stack.push_back(tag.substr(0, tag.find_first_of(" \t\n")));
        }
        i = j + 1;
    }
    return stack.empty();
}

int count_of(const std::string& hay, const std::string& needle) {
    int c = 0;
    for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1))
        ++c;
    return c;
}

SeedSet five_seed_square() {
    SeedSet S;
    S.seeds.push_back({{0, 0}, 0});
    S.seeds.push_back({{1, 0}, 0});
    S.seeds.push_back({{-1, 0}, 0});
    S.seeds.push_back({{0, 1}, 0});
    S.seeds.push_back({{0, -1}, 0});
    return S;
}

int run_cmd(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("number formatting round-trips exactly", "[io]") {
    auto eng = std::mt19937_64(2024);
    std::uniform_real_distribution<double> U(-1, 1);
    std::uniform_int_distribution<int> E(-300, 300);
    for (int k = 0; k < 20000; ++k) {
        const double x = std::ldexp(U(eng), E(eng));
        REQUIRE(parse_num(fmt_num(x)) == x);
    }
    REQUIRE(fmt_num(0.1) == "0.1");
    REQUIRE(fmt_num(1.0) == "1");
    REQUIRE(fmt_num(inf) == "inf");
    REQUIRE(fmt_num(-inf) == "-inf");
    REQUIRE(parse_num("inf") == inf);
    REQUIRE(parse_num("-inf") == -inf);
    REQUIRE_THROWS_AS(parse_num("1.5x"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_num(""), std::invalid_argument);
}

TEST_CASE("12-digit rounding keeps shortest printouts", "[io]") {
    REQUIRE(sig12(1.0 / 3) == 0.333333333333);
    REQUIRE(fmt_num(sig12(1.0 / 3)) == "0.333333333333");
    REQUIRE(sig12(2.0) == 2.0);
    REQUIRE(sig12(inf) == inf);
    REQUIRE(fmt_num(sig12(-123456.789012345)).size() <= 14);  // sign + 12 digits + dot
}

TEST_CASE("atomic write replaces files and leaves no temp", "[io]") {
    const fs::path dir = fresh_dir("atomic");
    const fs::path f = dir / "out.txt";
    atomic_write(f, "first");
    REQUIRE(slurp(f) == "first");
    atomic_write(f, "second version");
    REQUIRE(slurp(f) == "second version");
    int entries = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        (void)e;
        ++entries;
    }
    REQUIRE(entries == 1);
}

TEST_CASE("seed sets round-trip through CSV exactly", "[io]") {
    const fs::path dir = fresh_dir("seedset");
    SeedSet S;
    S.model.family = Family::BetaPrime;
    S.model.beta = 12;
    S.model.gamma = 0.75;
    S.model.d = 2;
    S.box.lo = {-2.5, -3.5};
    S.box.hi = {2.5, 3.5};
    S.range.lo = -inf;
    S.range.hi = -0.125;
    S.rng_label = 0xDEADBEEFCAFEF00Dull;
    auto eng = std::mt19937_64(99);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int k = 0; k < 200; ++k) S.seeds.push_back({{U(eng), U(eng)}, -std::abs(U(eng)) - 0.1});

    const fs::path csv = dir / "seeds.csv";
    write_seedset(csv, S);
    REQUIRE(fs::exists(dir / "seeds.meta.json"));
    const SeedSet T = read_seedset(csv);
    REQUIRE(T.seeds.size() == S.seeds.size());
    for (std::size_t i = 0; i < S.seeds.size(); ++i) {
        REQUIRE(T.seeds[i].v == S.seeds[i].v);  // bitwise round trip
        REQUIRE(T.seeds[i].h == S.seeds[i].h);
    }
    REQUIRE(T.model.family == S.model.family);
    REQUIRE(T.model.beta == S.model.beta);
    REQUIRE(T.model.gamma == S.model.gamma);
    REQUIRE(T.box.lo == S.box.lo);
    REQUIRE(T.box.hi == S.box.hi);
    REQUIRE(T.range.lo == S.range.lo);
    REQUIRE(T.range.hi == S.range.hi);
    REQUIRE(T.rng_label == S.rng_label);

    SECTION("CSV without sidecar still loads seeds") {
        fs::remove(dir / "seeds.meta.json");
        const SeedSet U2 = read_seedset(csv);
        REQUIRE(U2.seeds.size() == S.seeds.size());
        REQUIRE(U2.model.d == 2);
    }
    SECTION("errors") {
        REQUIRE_THROWS(read_seedset(dir / "missing.csv"));
        atomic_write(dir / "bad1.csv", "a,b,c\n1,2,3\n");
        REQUIRE_THROWS(read_seedset(dir / "bad1.csv"));  // header must end in h
        atomic_write(dir / "bad2.csv", "x0,x1,h\n1,2\n");
        REQUIRE_THROWS(read_seedset(dir / "bad2.csv"));  // short row
    }
}

TEST_CASE("tessellation JSON carries flags, times, and geometry", "[io]") {
    SeedSet S = five_seed_square();
    TessellationResult R = classify(S);
    fill_cells(R, S);
    const ordered_json j = tessellation_json(S, R);
    REQUIRE(j["d"] == 2);
    REQUIRE(j["count"] == 5);
    REQUIRE(j["cells"].size() == 5);
    const auto& center = j["cells"][0];
    REQUIRE(center["extreme"] == true);
    REQUIRE(center["coverage_time"].get<double>() == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(center["polygon"].size() == 4);
    REQUIRE_FALSE(center.contains("rays"));
    for (const auto& v : center["polygon"]) {
        REQUIRE(std::abs(std::abs(v[0].get<double>()) - 0.5) < 1e-9);
        REQUIRE(std::abs(std::abs(v[1].get<double>()) - 0.5) < 1e-9);
    }
    const auto& outer = j["cells"][1];
    REQUIRE(outer["coverage_time"] == "inf");
    REQUIRE(outer.contains("rays"));
    REQUIRE(outer["rays"].size() == 2);

    // a dominated seed serializes with the -inf marker and no polygon
    SeedSet D = S;
    D.seeds.push_back({{0, 0}, 5.0});
    TessellationResult RD = classify(D);
    fill_cells(RD, D);
    const ordered_json jd = tessellation_json(D, RD);
    REQUIRE(jd["cells"][5]["extreme"] == false);
    REQUIRE(jd["cells"][5]["coverage_time"] == "-inf");
    REQUIRE_FALSE(jd["cells"][5].contains("polygon"));
}

TEST_CASE("run statistics JSON echoes config without thread state", "[io]") {
    ExperimentConfig cfg;
    cfg.model.family = Family::Gaussian;
    cfg.model.d = 2;
    cfg.sizes = {1, 1.5, 2};
    cfg.replications = 4;
    cfg.tol = 0.25;
    cfg.master_seed = 11;
    cfg.cert_reps = 2;
    const RunStats rs = run_replications(cfg);
    const ordered_json j = runstats_json(rs);
    REQUIRE(j["config"]["model"]["family"] == "gaussian");
    REQUIRE(j["config"]["replications"] == 4);
    REQUIRE(j["config"]["cert_reps"] == 2);
    REQUIRE(j["config"]["master_seed"] == 11);
    const std::string dump = j.dump(2);
    REQUIRE(dump.find("thread") == std::string::npos);
    REQUIRE(j["per_n"].size() == 3);
    for (const auto& p : j["per_n"]) REQUIRE(p["samples"].size() == 4);
    REQUIRE(j["scaling"].contains("slope"));

    // identical reruns serialize to identical bytes
    const RunStats rs2 = run_replications(cfg);
    REQUIRE(runstats_json(rs2).dump(2) == dump);

    const std::string csv = fn_samples_csv(rs);
    REQUIRE(csv.rfind("n,replicate,f_n\n", 0) == 0);
    REQUIRE(count_of(csv, "\n") == 1 + 3 * 4);
}

TEST_CASE("svg renders cells, clips, and counts polygons", "[io][svg]") {
    SECTION("five-seed square") {
        SeedSet S = five_seed_square();
        const TessellationResult R = classify(S);
        const std::string svg = render_svg(S, R);
        REQUIRE(well_formed_xml(svg));
        REQUIRE(count_of(svg, "<polygon") == 5);  // all five cells meet the canvas
        REQUIRE(count_of(svg, "class=\"nucleus\"") == 5);
        REQUIRE(count_of(svg, "class=\"nucleus-gray\"") == 0);
    }
    SECTION("dominated seed appears only as gray dot") {
        SeedSet S = five_seed_square();
        S.seeds.push_back({{0.1, 0}, 6.0});
        const TessellationResult R = classify(S);
        RenderOptions opt;
        const std::string svg = render_svg(S, R, opt);
        REQUIRE(count_of(svg, "<polygon") == 5);
        REQUIRE(count_of(svg, "class=\"nucleus\"") == 5);
        REQUIRE(count_of(svg, "class=\"nucleus-gray\"") == 1);
        opt.gray_nonextreme = false;
        REQUIRE(count_of(render_svg(S, R, opt), "class=\"nucleus-gray\"") == 0);
    }
    SECTION("single seed covers the canvas") {
        SeedSet S;
        S.seeds.push_back({{0.3, -0.2}, 1.0});
        const TessellationResult R = classify(S);
        const std::string svg = render_svg(S, R);
        REQUIRE(well_formed_xml(svg));
        REQUIRE(count_of(svg, "<polygon") == 1);
    }
    SECTION("restricted view matches a grid census of visible cells") {
        SeedSet S;
        auto eng = std::mt19937_64(31415);
        std::uniform_real_distribution<double> U(0, 1);
        for (int k = 0; k < 20; ++k) S.seeds.push_back({{U(eng), U(eng)}, 0.0});
        const TessellationResult R = classify(S);
        RenderOptions opt;
        Box view;
        view.lo = {0.2, 0.25};
        view.hi = {0.8, 0.7};
        opt.view = view;
        const std::string svg = render_svg(S, R, opt);
        std::set<std::size_t> seen;
        for (int iy = 0; iy <= 400; ++iy)
            for (int ix = 0; ix <= 400; ++ix) {
                const Vec w = {view.lo[0] + (view.hi[0] - view.lo[0]) * ix / 400.0,
                               view.lo[1] + (view.hi[1] - view.lo[1]) * iy / 400.0};
                const auto owners = nearest_power_owner(w, S);
                if (owners.size() == 1) seen.insert(owners[0]);
            }
        REQUIRE(count_of(svg, "<polygon") == static_cast<int>(seen.size()));
        // nuclei outside the view are not drawn
        int inside = 0;
        for (const Seed& s : S.seeds)
            inside += (s.v[0] >= 0.2 && s.v[0] <= 0.8 && s.v[1] >= 0.25 && s.v[1] <= 0.7);
        REQUIRE(count_of(svg, "<circle") == inside);
    }
    SECTION("color encodes the h range linearly") {
        SeedSet S = five_seed_square();
        S.seeds[0].h = -1;  // realized range [-1, 0]
        const TessellationResult R = classify(S);
        const std::string svg = render_svg(S, R);
        REQUIRE(svg.find("#2166ac") != std::string::npos);  // low anchor at h = -1
        REQUIRE(svg.find("#b2182b") != std::string::npos);  // high anchor at h = 0
        RenderOptions mono;
        mono.color_by_time = false;
        REQUIRE(render_svg(S, R, mono).find("#2166ac") == std::string::npos);
    }
    SECTION("validation") {
        SeedSet empty;
        TessellationResult R;
        REQUIRE_THROWS_AS(render_svg(empty, R), std::invalid_argument);
    }
}

TEST_CASE("fixture configuration renders four nuclei", "[io][svg]") {
    const double d2 = 1.0 / 256;
    const double ell = 1.0 / 8;
    SeedSet S;
    S.seeds.push_back({{0, 0}, ell - 9 * d2});
    for (int k = 0; k < 3; ++k) {
        const double th = M_PI / 2 + 2 * M_PI * k / 3;
        S.seeds.push_back(
            {{(4.0 / 3) * (3.0 / 16) * std::cos(th), (4.0 / 3) * (3.0 / 16) * std::sin(th)},
             ell - 18 * d2});
    }
    const TessellationResult R = classify(S);
    const std::string svg = render_svg(S, R);
    REQUIRE(count_of(svg, "class=\"nucleus\"") == 4);
}

TEST_CASE("command line drives the full pipeline", "[io][cli]") {
    const char* bin = std::getenv("LAGSIM_BIN");
    if (!bin) {
        SKIP("LAGSIM_BIN not set; run through ctest");
    }
    const fs::path dir = fresh_dir("cli");
    const std::string B = std::string("\"") + bin + "\"";
    const std::string quiet = " > /dev/null 2>&1";

    SECTION("sample is deterministic and round-trips") {
        const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
        REQUIRE(run_cmd(B + " sample --model gaussian --d 2 --n 0.5 --tol 0.5 --seed 7 -o " + a +
                        quiet) == 0);
        REQUIRE(run_cmd(B + " sample --model gaussian --d 2 --n 0.5 --tol 0.5 --seed 7 -o " + b +
                        quiet) == 0);
        REQUIRE(slurp(a) == slurp(b));
        REQUIRE(slurp(dir / "a.meta.json") == slurp(dir / "b.meta.json"));
        const SeedSet S = read_seedset(a);
        REQUIRE(!S.seeds.empty());
        write_seedset(dir / "c.csv", S);
        REQUIRE(slurp(a) == slurp(dir / "c.csv"));  // read-write closure
    }
    SECTION("tessellate writes JSON and SVG for a hand-made file") {
        atomic_write(dir / "sq.csv", seedset_csv(five_seed_square()));
        const std::string cmd = B + " tessellate -i " + (dir / "sq.csv").string() + " -o " +
                                (dir / "t.json").string() + " --svg " + (dir / "t.svg").string() +
                                quiet;
        REQUIRE(run_cmd(cmd) == 0);
        const std::string svg = slurp(dir / "t.svg");
        REQUIRE(well_formed_xml(svg));
        REQUIRE(count_of(svg, "<polygon") == 5);
        ordered_json j = ordered_json::parse(slurp(dir / "t.json"));
        REQUIRE(j["count"] == 5);
        REQUIRE(j["cells"][0]["coverage_time"].get<double>() == 0.5);
    }
    SECTION("validation failures exit with code 2") {
        REQUIRE(run_cmd(B + " sample --model beta --beta -2" + quiet) == 2);
        atomic_write(dir / "empty.csv", "x0,x1,h\n");
        REQUIRE(run_cmd(B + " tessellate -i " + (dir / "empty.csv").string() + quiet) == 2);
        REQUIRE(run_cmd(B + " verify --check NOT-A-CHECK" + quiet) != 0);
    }
    SECTION("experiment output is byte-identical across thread counts") {
        const std::string out1 = (dir / "r1.json").string(), out2 = (dir / "r2.json").string();
        const std::string args = " experiment --model gaussian --d 2 --sizes 1 1.5 --reps 4 "
                                 "--tol 0.25 --seed 3 --cert-reps 2 -o ";
        const int e1 = run_cmd("LAGUERRE_THREADS=1 " + B + args + out1 + quiet);
        const int e2 = run_cmd("LAGUERRE_THREADS=3 " + B + args + out2 + quiet);
        REQUIRE(e1 == e2);
        REQUIRE((e1 == 0 || e1 == 3));  // 3 = honest uncertified flag at loose tolerance
        REQUIRE(slurp(out1) == slurp(out2));
    }
    SECTION("config file fills in what flags omit, flags win") {
        atomic_write(dir / "cfg.txt", "model=gaussian\nd=2\nn=0.5\ntol=0.5\nseed=9\n");
        const std::string a = (dir / "cfga.csv").string(), b = (dir / "cfgb.csv").string();
        REQUIRE(run_cmd(B + " sample --config " + (dir / "cfg.txt").string() + " -o " + a +
                        quiet) == 0);
        REQUIRE(run_cmd(B + " sample --model gaussian --d 2 --n 0.5 --tol 0.5 --seed 9 -o " + b +
                        quiet) == 0);
        REQUIRE(slurp(a) == slurp(b));
        // a flag overrides the config file's seed
        const std::string c = (dir / "cfgc.csv").string();
        REQUIRE(run_cmd(B + " sample --config " + (dir / "cfg.txt").string() +
                        " --seed 10 -o " + c + quiet) == 0);
        REQUIRE(slurp(a) != slurp(c));
    }
    SECTION("verify emits machine-readable pass lines") {
        const std::string out = (dir / "fx.json").string();
        REQUIRE(run_cmd(B + " verify --check AC-FIXTURE -o " + out + quiet) == 0);
        ordered_json j = ordered_json::parse(slurp(out));
        REQUIRE(j["id"] == "AC-FIXTURE");
        REQUIRE(j["pass"] == true);
        REQUIRE(j["measured"].contains("extreme_A_ell=0.125"));
    }
}
