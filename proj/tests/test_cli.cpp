#include <doctest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "nql/cli/commands.hpp"
#include "nql/cli/svg_plot.hpp"
#include "test_support.hpp"

using namespace nql;
using namespace nql::cli;
namespace fs = std::filesystem;
using nql::testing::read_file;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("nql_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "nql");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

fs::path write_config(const TempDir& dir, const fs::path& data, const std::string& extra = "") {
    const fs::path cfg = dir.path / "run.conf";
    write(cfg, "data_path = " + data.string() + "\noutput_dir = out\n" + extra);
    return cfg;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

const FittedModel& shipped_model() {
    static const FittedModel m = fit_model(nql::testing::shipped_table(), ChainConfig{});
    return m;
}

}  // namespace

TEST_CASE("run config parsing") {
    const auto cfg = parse_run_config(
        "data_path = d.csv\noutput_dir = o\nplot.axes = 2,3\nchain.n_nodes = 12\n", "/base");
    CHECK(cfg.data_path == fs::path("/base/d.csv"));
    CHECK(cfg.output_dir == fs::path("/base/o"));
    CHECK(cfg.plot_axes.first == 2);
    CHECK(cfg.plot_axes.second == 3);
    CHECK(cfg.chain.n_nodes == 12);
    CHECK(cfg.chain.lambda_schedule == ChainConfig{}.lambda_schedule);

    CHECK_THROWS_AS(parse_run_config("output_dir = o\n", "/"), Error);
    CHECK_THROWS_AS(parse_run_config("data_path = d\nbogus = 1\n", "/"), Error);
    CHECK_THROWS_AS(parse_axes("1,1"), Error);
    CHECK_THROWS_AS(parse_axes("0,2"), Error);
    CHECK_THROWS_AS(parse_axes("1,5"), Error);
    CHECK_THROWS_AS(parse_axes("12"), Error);
}

TEST_CASE("committed default config matches the built-in defaults") {
    const auto cfg = load_run_config(nql::testing::source_dir() / "config" / "default.conf");
    CHECK(cfg.chain == ChainConfig{});
    CHECK(fs::equivalent(cfg.data_path, nql::testing::data_path()));
}

TEST_CASE("model file round trip reproduces the ranking") {
    const auto& m = shipped_model();
    const auto text = write_model(m);
    const auto back = read_model(text);
    CHECK(write_model(back) == text);
    CHECK(back.chain.nodes == m.chain.nodes);
    CHECK(back.basis.components == m.basis.components);
    CHECK(back.chain.config == m.chain.config);
    CHECK(back.energy_log.size() == m.energy_log.size());

    const auto table = nql::testing::shipped_table();
    CHECK(format_ranking_tsv(rank_with_model(back, table)) == format_ranking_tsv(rank_with_model(m, table)));

    CHECK_THROWS_AS(read_model("NQL_MODEL 2\n"), Error);
    CHECK_THROWS_AS(read_model(text.substr(0, text.size() / 2)), Error);
}

TEST_CASE("schema mismatch") {
    auto m = shipped_model();
    m.columns.pop_back();
    try {
        rank_with_model(m, nql::testing::shipped_table());
        FAIL("expected SchemaMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SchemaMismatch);
    }
}

TEST_CASE("fit command") {
    TempDir dir;
    SUBCASE("writes a model and logs the curve explained variance") {
        const auto r = run_cli({"fit", "--config", write_config(dir, nql::testing::data_path()).string()});
        CHECK(r.code == 0);
        CHECK(fs::exists(dir.path / "out" / "model.nql"));
        std::smatch m;
        REQUIRE(std::regex_search(r.out, m, std::regex("principal curve explained variance: ([0-9.]+)")));
        CHECK(std::stod(m[1]) >= 0.84);
    }
    SUBCASE("missing data file exits 2 and names the path") {
        const auto missing = dir.path / "nope.csv";
        const auto r = run_cli({"fit", "--config", write_config(dir, missing).string()});
        CHECK(r.code == 2);
        CHECK(r.err.find(missing.string()) != std::string::npos);
        CHECK(count(r.err, "\n") == 1);
    }
    SUBCASE("reruns are byte-identical") {
        const auto cfg = write_config(dir, nql::testing::data_path()).string();
        REQUIRE(run_cli({"fit", "--config", cfg}).code == 0);
        const auto first = read_file(dir.path / "out" / "model.nql");
        REQUIRE(run_cli({"fit", "--config", cfg}).code == 0);
        CHECK(read_file(dir.path / "out" / "model.nql") == first);
    }
    SUBCASE("bad config exits 2") {
        const auto r = run_cli({"fit", "--config", write_config(dir, nql::testing::data_path(), "chain.n_nodes = 1\n").string()});
        CHECK(r.code == 2);
    }
    SUBCASE("constant column is a computation error") {
        const auto data = dir.path / "flat.csv";
        write(data, "country,gdp_ppp,life_expectancy,tb_incidence,infant_mortality\nA,1,70,3,4\nB,2,70,4,5\nC,3,70,1,2\n");
        CHECK(run_cli({"fit", "--config", write_config(dir, data).string()}).code == 1);
    }
    SUBCASE("usage errors exit 2") {
        CHECK(run_cli({}).code == 2);
        CHECK(run_cli({"fit"}).code == 2);
        CHECK(run_cli({"frobnicate"}).code == 2);
    }
}

TEST_CASE("rank, report and plot commands") {
    TempDir dir;
    const auto model = dir.path / "model.nql";
    save_model(shipped_model(), model);
    const auto data = nql::testing::data_path().string();

    SUBCASE("rank on the shipped data") {
        const auto r = run_cli({"rank", "--model", model.string(), "--data", data});
        REQUIRE(r.code == 0);
        std::istringstream in(r.out);
        std::string line, first, last;
        std::getline(in, line);
        CHECK(line == "rank\tcountry\tnql_index\tlinear_rank\tlinear_index");
        std::getline(in, first);
        while (std::getline(in, line)) last = line;
        CHECK(first.rfind("1\tLuxembourg\t", 0) == 0);
        CHECK(last.rfind("171\tSwaziland\t", 0) == 0);

        const auto ref = nql::testing::reference_ranks();
        const auto table = rank_with_model(shipped_model(), nql::testing::shipped_table());
        std::vector<double> ours, theirs;
        for (const auto& row : table.rows) {
            ours.push_back(static_cast<double>(row.nql_rank));
            theirs.push_back(ref.at(row.name).rank);
        }
        CHECK(nql::testing::spearman(ours, theirs) >= 0.98);

        CHECK(run_cli({"rank", "--model", model.string(), "--data", data}).out == r.out);
    }
    SUBCASE("rank on two countries") {
        const auto two = dir.path / "two.csv";
        write(two, "country,gdp_ppp,life_expectancy,tb_incidence,infant_mortality\n"
                   "Russia,11861,65.33,46,15\nEgypt,5049,69.542,10,31\n");
        const auto r = run_cli({"rank", "--model", model.string(), "--data", two.string()});
        REQUIRE(r.code == 0);
        CHECK(count(r.out, "\n") == 3);
        CHECK(r.out.find("\n1\t") != std::string::npos);
        CHECK(r.out.find("\n2\t") != std::string::npos);
    }
    SUBCASE("rank with a mismatched data header") {
        const auto bad = dir.path / "bad.csv";
        write(bad, "country,gdp,life\nA,1,2\nB,3,4\n");
        CHECK(run_cli({"rank", "--model", model.string(), "--data", bad.string()}).code == 2);
    }
    SUBCASE("report on the shipped data") {
        const auto r = run_cli({"report", "--model", model.string(), "--data", data});
        REQUIRE(r.code == 0);
        std::smatch m;
        REQUIRE(std::regex_search(r.out, m, std::regex("PC1 explained variance: ([0-9.]+)")));
        CHECK(std::stod(m[1]) >= 0.74);
        CHECK(std::stod(m[1]) <= 0.78);
        REQUIRE(std::regex_search(r.out, m, std::regex("principal curve explained variance: ([0-9.]+)")));
        CHECK(std::stod(m[1]) >= 0.84);
        CHECK(r.out.find("nonlinear: Russia") != std::string::npos);
        REQUIRE(std::regex_search(r.out, m, std::regex("nonlinear: Russia (\\d+), Egypt (\\d+)")));
        CHECK(std::stoi(m[1]) < std::stoi(m[2]));
        CHECK(count(r.out, "\n+") + count(r.out, "\n-") == 10);
    }
    SUBCASE("plot on the shipped data") {
        const auto svg_path = dir.path / "fig.svg";
        const auto r = run_cli({"plot", "--model", model.string(), "--data", data, "--axes", "1,2", "--out", svg_path.string()});
        REQUIRE(r.code == 0);
        const auto svg = read_file(svg_path);
        CHECK(count(svg, "<circle ") == 171);
        CHECK(count(svg, "<polyline ") == 1);
        std::smatch m;
        REQUIRE(std::regex_search(svg, m, std::regex("points=\"([^\"]*)\"")));
        CHECK(count(m[1].str(), ",") == shipped_model().chain.nodes.size());
        CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
        CHECK(svg.find("PC1 (76.8%)") != std::string::npos);
        CHECK(svg.find("Cote d&apos;Ivoire") != std::string::npos);

        const auto again = dir.path / "fig2.svg";
        REQUIRE(run_cli({"plot", "--model", model.string(), "--data", data, "--out", again.string()}).code == 0);
        CHECK(read_file(again) == svg);
    }
    SUBCASE("plot rejects equal axes without writing") {
        const auto svg_path = dir.path / "bad.svg";
        const auto r = run_cli({"plot", "--model", model.string(), "--data", data, "--axes", "1,1", "--out", svg_path.string()});
        CHECK(r.code == 2);
        CHECK_FALSE(fs::exists(svg_path));
    }
    SUBCASE("plot of an empty dataset fails without writing") {
        const auto empty = dir.path / "empty.csv";
        write(empty, "country,gdp_ppp,life_expectancy,tb_incidence,infant_mortality\n");
        const auto svg_path = dir.path / "empty.svg";
        const auto r = run_cli({"plot", "--model", model.string(), "--data", empty.string(), "--out", svg_path.string()});
        CHECK(r.code == 2);
        CHECK_FALSE(fs::exists(svg_path));
    }
    SUBCASE("plot to an unwritable path") {
        const auto r = run_cli({"plot", "--model", model.string(), "--data", data, "--out",
                                (dir.path / "no" / "such" / "dir.svg").string()});
        CHECK(r.code == 2);
    }
}

TEST_CASE("report on linear synthetic data") {
    std::vector<Vec4> raw;
    for (int i = 0; i < 60; ++i) {
        const double t = 0.1 * i;
        raw.push_back({1000 + 300 * t, 50 + 4 * t, 200 - 20 * t, 90 - 10 * t});
    }
    const auto table = nql::testing::table_from_rows(raw);
    const auto model = fit_model(table, ChainConfig{});
    const auto s = summarize(model, table);
    CHECK(std::abs(s.pc1_ratio - s.curve_ratio) < 0.01);
    CHECK(report_text(model, table).find("pair unavailable") != std::string::npos);
}

TEST_CASE("render_svg escapes labels") {
    PlotSpec spec;
    spec.points.push_back({0, 0, "A & <B>"});
    spec.points.push_back({1, 1, "C"});
    spec.curve = {{0, 0}, {1, 1}};
    const auto svg = render_svg(spec);
    CHECK(svg.find("A &amp; &lt;B&gt;") != std::string::npos);
}
