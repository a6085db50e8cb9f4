#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <sys/wait.h>

#include "robust_grad/harness/check_suite.hpp"
#include "robust_grad/harness/config.hpp"
#include "robust_grad/harness/parallel.hpp"
#include "robust_grad/harness/studies.hpp"

using namespace robust_grad;
using namespace robust_grad::harness;

namespace {

std::string csv(const std::vector<Row>& rows) {
    std::ostringstream os;
    write_rows(os, rows, OutputFormat::Csv);
    return os.str();
}

int cli(const std::string& args) {
    const std::string cmd = std::string(ROBUST_GRAD_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const CheckOutcome& find(const CheckReport& report, const std::string& name) {
    for (const auto& o : report.outcomes)
        if (o.name == name) return o;
    FAIL("missing check " << name);
    throw std::logic_error("unreachable");
}

Vec shrunken_vclip(double tau, ConstVecView v) { return prox::vclip(0.5 * tau, v); }

}  // namespace

TEST_CASE("csv records") {
    CHECK(kCsvHeader == "study,method,setting,alpha,seed,iter,metric,value");
    const Row row{"optimize", "vclip", "s1", 1.1, 3, 10, "loss", 0.25};
    std::ostringstream os;
    write_csv_row(os, row);
    CHECK(os.str() == "optimize,vclip,s1,1.1,3,10,loss,0.25\n");

    Row summary = row;
    summary.seed.reset();
    std::ostringstream os2;
    write_csv_row(os2, summary);
    CHECK(os2.str() == "optimize,vclip,s1,1.1,,10,loss,0.25\n");

    std::ostringstream js;
    write_jsonl_row(js, row);
    const auto parsed = nlohmann::json::parse(js.str());
    CHECK(parsed["method"] == "vclip");
    CHECK(parsed["seed"] == 3);
    CHECK(parsed["value"] == 0.25);
}

TEST_CASE("doubles round-trip through their text form") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("seed lists") {
    CHECK(parse_seed_list("0-3") == std::vector<std::uint64_t>{0, 1, 2, 3});
    CHECK(parse_seed_list("5,2,9") == std::vector<std::uint64_t>{5, 2, 9});
    CHECK(parse_seed_list("0-1,7") == std::vector<std::uint64_t>{0, 1, 7});
    CHECK_THROWS(parse_seed_list("3-1"));
    CHECK_THROWS(parse_seed_list("x"));
    CHECK_THROWS(parse_seed_list(""));
}

TEST_CASE("configuration") {
    auto cfg = default_config(Study::Optimize);
    CHECK(cfg.seeds.size() == 50);
    CHECK(cfg.settings.size() == 3);

    apply_json(cfg, nlohmann::json::parse(R"({"methods": "vclip,l1-median", "iters": 20, "seeds": "0-2", "alpha": 1.5})"));
    CHECK(cfg.methods == std::vector<std::string>{"vclip", "l1-median"});
    CHECK(cfg.iters == 20);
    CHECK(cfg.seeds.size() == 3);
    CHECK(cfg.alphas == std::vector<double>{1.5});
    CHECK_NOTHROW(cfg.validate());

    CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"({"learning_rate": 0.1})")), ConfigError);

    auto bad = cfg;
    bad.methods = {"adam"};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.tau = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    auto moments = default_config(Study::Moments);
    moments.n_grid = {4};
    CHECK_THROWS_AS(moments.validate(), ConfigError);

    auto est = default_config(Study::Estimate);
    est.methods = {"l1-median"};
    CHECK_THROWS_AS(est.validate(), ConfigError);

    CHECK_THROWS_AS(study_from_string("train"), ConfigError);
    CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/config.json"), ConfigError);
}

TEST_CASE("parallel map keeps index order and rethrows") {
    const auto squares = parallel_map(100, 4, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < 100; ++i) CHECK(squares[i] == i * i);
    CHECK_THROWS_AS(parallel_map(10, 3,
                                 [](std::size_t i) -> int {
                                     if (i == 7) throw std::runtime_error("boom");
                                     return 0;
                                 }),
                    std::runtime_error);
}

TEST_CASE("studies give the same bytes with one or several workers") {
    SUBCASE("estimate") {
        auto cfg = default_config(Study::Estimate);
        cfg.iters = 50;
        cfg.seeds = {0, 1, 2, 3, 4};
        cfg.alphas = {1.1, 2.0};
        const auto serial = csv(estimate_study(cfg).rows);
        cfg.jobs = 4;
        CHECK(csv(estimate_study(cfg).rows) == serial);
        CHECK(csv(estimate_study(cfg).rows) == serial);
    }
    SUBCASE("optimize") {
        auto cfg = default_config(Study::Optimize);
        cfg.iters = 50;
        cfg.seeds = {0, 1, 2};
        const auto serial = csv(optimize_study(cfg).rows);
        cfg.jobs = 3;
        CHECK(csv(optimize_study(cfg).rows) == serial);
    }
    SUBCASE("moments") {
        const auto serial = csv(moment_rows(moments_study({1.1, 1.5}, {1, 3, 5}, 500, 0, 1), 0));
        CHECK(csv(moment_rows(moments_study({1.1, 1.5}, {1, 3, 5}, 500, 0, 4), 0)) == serial);
    }
}

TEST_CASE("study row layout") {
    auto cfg = default_config(Study::Estimate);
    cfg.iters = 10;
    cfg.seeds = {0, 1};
    cfg.alphas = {1.5};
    cfg.methods = {"vclip"};
    const auto out = estimate_study(cfg);
    CHECK(out.cells.size() == 2);
    CHECK(out.final_errors("vclip", 1.5).size() == 2);
    CHECK(out.rows.front().metric == "rel_error");
    CHECK(out.rows.front().iter == 1u);
    CHECK(median_of({3, 1, 2}) == 2);
    CHECK(median_of({4, 1, 3, 2}) == 2.5);
}

TEST_CASE("check suite passes and catches a corrupted clip") {
    CheckOptions opts;
    opts.tuples = 300;
    opts.median_batches = 200;
    opts.geo_batches = 5;
    const auto good = check_suite(opts);
    for (const auto& o : good.outcomes) {
        CAPTURE(o.name);
        CAPTURE(o.detail);
        CHECK(o.passed);
    }
    CHECK(good.all_passed());
    CHECK(good.rows().size() == 2 * good.outcomes.size());

    opts.kernels.vclip = &shrunken_vclip;
    const auto bad = check_suite(opts);
    CHECK_FALSE(bad.all_passed());
    CHECK_FALSE(find(bad, "spp_projection_l2").passed);
    CHECK(find(bad, "spp_projection_l1").passed);
}

TEST_CASE("command-line exit codes") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "robust_grad_cli_test";
    fs::create_directories(dir);
    const auto out = (dir / "est.csv").string();

    CHECK(cli("estimate --iters 20 --seeds 0-1 --alpha 1.5 --out " + out) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == kCsvHeader);

    CHECK(cli("estimate --methods adam") == 1);
    CHECK(cli("optimize --tau -1") == 1);
    CHECK(cli("train") == 1);

    const auto cfg_path = (dir / "bad.json").string();
    std::ofstream(cfg_path) << R"({"unknown_key": 1})";
    CHECK(cli("estimate --config " + cfg_path) == 1);

    const auto good_cfg = (dir / "good.json").string();
    std::ofstream(good_cfg) << R"({"iters": 5, "seeds": [0], "alpha": [2.0], "format": "jsonl"})";
    CHECK(cli("estimate --config " + good_cfg + " --iters 3 --out " + out) == 0);
    std::ifstream jl(out);
    std::size_t lines = 0;
    for (std::string line; std::getline(jl, line);) {
        CHECK(nlohmann::json::parse(line)["iter"].get<int>() <= 3);
        ++lines;
    }
    CHECK(lines > 0);
    fs::remove_all(dir);
}
