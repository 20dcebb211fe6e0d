#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chains/cli.hpp"

using namespace chains;
using cli::run_command;
using cli::run_outcome;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("count reports the exact diagonal value") {
    const run_outcome out = run_command({"count", "--n", "5"});
    CHECK(out.exit_code == 0);
    CHECK(out.report.results["value"] == "77");
    CHECK(out.report.results["n1"] == 5);
    CHECK(out.report.results["n2"] == 5);
    // the rendered report is valid JSON carrying the same value
    const nlohmann::json j = nlohmann::json::parse(out.rendered);
    CHECK(j["results"]["value"] == "77");
    CHECK(j["all_pass"] == true);

    const run_outcome rect = run_command({"count", "--n1", "4", "--n2", "7"});
    CHECK(rect.exit_code == 0);
    CHECK(rect.report.results["value"] == count_table(4, 7).at(4, 7).get_str());
}

TEST_CASE("polyomino count matches the small table") {
    const run_outcome out = run_command({"polyomino-count", "--n", "8"});
    CHECK(out.exit_code == 0);
    CHECK(out.report.results["value"] == "60");
}

TEST_CASE("usage, domain, and resource problems map to distinct exit codes") {
    CHECK(run_command({"no-such-command"}).exit_code == 2);
    CHECK(run_command({}).exit_code == 2);
    CHECK(run_command({"count"}).exit_code == 2);                           // missing size
    CHECK(run_command({"count", "--n", "3", "--n1", "2"}).exit_code == 2);  // both forms
    CHECK(run_command({"count", "--n1", "3"}).exit_code == 2);              // half a pair
    CHECK(run_command({"logz", "--beta", "99"}).exit_code == 2);            // domain
    CHECK(run_command({"cumulant", "--beta", "0.5", "--k1", "2", "--k2", "1"}).exit_code == 2);
    const run_outcome big = run_command({"count", "--n1", "1100", "--n2", "1100"});
    CHECK(big.exit_code == 3);  // table budget
    CHECK(big.report.results.contains("error"));
}

TEST_CASE("help requests succeed and list the subcommands") {
    const run_outcome out = run_command({"--help"});
    CHECK(out.exit_code == 0);
    CHECK(out.rendered.find("count") != std::string::npos);
    CHECK(out.rendered.find("estimate") != std::string::npos);
    CHECK(out.rendered.find("sample-conditioned") != std::string::npos);
    CHECK(run_command({"count", "--help"}).exit_code == 0);
}

TEST_CASE("deterministic reports are byte-stable and undated") {
    const std::vector<std::string> args = {"calibrate", "--n", "10", "--deterministic"};
    const run_outcome a = run_command(args);
    const run_outcome b = run_command(args);
    CHECK(a.exit_code == 0);
    CHECK(a.rendered == b.rendered);
    CHECK(nlohmann::json::parse(a.rendered).contains("unix_time") == false);
    const run_outcome dated = run_command({"calibrate", "--n", "10"});
    CHECK(nlohmann::json::parse(dated.rendered).contains("unix_time") == true);
}

TEST_CASE("calibrate exposes the pinned temperature") {
    const run_outcome out = run_command({"calibrate", "--n", "30"});
    CHECK(out.exit_code == 0);
    CHECK(std::abs(out.report.results["beta"].get<double>() - 0.29565763236245) <= 1e-10);
    CHECK(std::abs(out.report.results["variance_total"].get<double>() - 587.1274388) <= 1e-5);
    REQUIRE(out.report.checks.size() == 1);
    CHECK(out.report.checks[0].name == "calibration_residual");
    CHECK(out.report.checks[0].pass);
}

TEST_CASE("logz and cumulant report pinned analytics") {
    const run_outcome lz = run_command({"logz", "--beta", "0.2"});
    CHECK(lz.exit_code == 0);
    CHECK(std::abs(lz.report.results["log_z"].get<double>() - 20.27147649523169) <= 1e-12);

    const run_outcome cm = run_command({"cumulant", "--beta", "0.2", "--k1", "0", "--k2", "0"});
    CHECK(cm.exit_code == 0);
    CHECK(std::abs(cm.report.results["value"].get<double>() - 20.27147649523169) <= 1e-12);
}

TEST_CASE("dirichlet verification passes with both convergence checks") {
    const run_outcome out = run_command({"dirichlet", "--m", "100000"});
    CHECK(out.exit_code == 0);
    CHECK(std::abs(out.report.results["gap"].get<double>() - 6.079255771673786e-06) <= 1e-14);
    REQUIRE(out.report.checks.size() == 2);
    CHECK(out.report.checks[0].pass);
    CHECK(out.report.checks[1].pass);
    CHECK(run_command({"dirichlet", "--s-re", "1.5"}).exit_code == 2);
}

TEST_CASE("ierr reports the pinned integral with a clean imaginary part") {
    const run_outcome out = run_command({"ierr", "--beta", "0.1"});
    CHECK(out.exit_code == 0);
    CHECK(std::abs(out.report.results["value"].get<double>() - 0.050127923955) <= 1e-10);
    CHECK(out.report.results["imag_residue"].get<double>() <= 1e-10);
}

TEST_CASE("zeros lists the three ordinates below thirty") {
    const run_outcome out = run_command({"zeros", "--n", "30"});
    CHECK(out.exit_code == 0);
    CHECK(out.report.results["count"] == 3);
    REQUIRE(out.report.results["zeros"].size() == 3);
    CHECK(std::abs(out.report.results["zeros"][0]["gamma"].get<double>() - 14.134725141734693) <=
          1e-9);
}

TEST_CASE("zeros cache writes on first use and verifies on the second") {
    namespace fs = std::filesystem;
    const fs::path cache = fs::temp_directory_path() / "chains_test_zero_cache.txt";
    fs::remove(cache);
    const run_outcome first = run_command({"zeros", "--n", "30", "--cache", cache.string()});
    CHECK(first.exit_code == 0);
    CHECK(fs::exists(cache));
    const run_outcome second = run_command({"zeros", "--n", "30", "--cache", cache.string()});
    CHECK(second.exit_code == 0);
    bool verified = false;
    for (const check_row& c : second.report.checks)
        if (c.name == "cache_verified" && c.pass) verified = true;
    CHECK(verified);
    fs::remove(cache);
}

TEST_CASE("icrit reconciles the zero sum with the two-term shortcut") {
    const run_outcome out = run_command({"icrit", "--beta", "0.1", "--zeros", "1"});
    CHECK(out.exit_code == 0);
    CHECK(out.report.results.contains("two_term"));
    bool agreed = false;
    for (const check_row& c : out.report.checks)
        if (c.name == "two_term_agreement" && c.pass) agreed = true;
    CHECK(agreed);
    CHECK(out.report.results["imag_residue"].get<double>() <= 1e-12);
    CHECK(run_command({"icrit", "--beta", "0.1", "--zeros", "40"}).exit_code == 2);
}

TEST_CASE("estimate reports the pinned scientific value and checks") {
    const run_outcome out = run_command({"estimate", "--n", "100", "--zeros", "2"});
    CHECK(out.exit_code == 0);
    CHECK(out.report.results["value"] == "2.3753931e+22");
    CHECK(std::abs(out.report.results["log10_value"].get<double>() - 22.375735497876803) <=
          1e-10);
    REQUIRE(out.report.checks.size() == 2);
    CHECK(out.report.all_pass());
}

TEST_CASE("estimate with the exact flag reports the observed ratio") {
    const run_outcome out = run_command({"estimate", "--n", "100", "--zeros", "2", "--exact"});
    CHECK(out.exit_code == 0);
    CHECK(out.report.results["exact"] == "26878385993387721255010");
    CHECK(std::abs(out.report.results["exact_over_estimate"].get<double>() -
                   1.1315342097880114) <= 1e-8);
}

TEST_CASE("polyomino estimate with the exact flag approaches unity") {
    const run_outcome out = run_command({"estimate-polyomino", "--n", "200", "--exact"});
    CHECK(out.exit_code == 0);
    CHECK(std::abs(out.report.results["exact_over_estimate"].get<double>() -
                   0.9965319680581225) <= 1e-8);
}

TEST_CASE("rh-gap emits one row per size") {
    const run_outcome out = run_command({"rh-gap", "--n", "6"});
    CHECK(out.exit_code == 0);
    REQUIRE(out.report.results["rows"].size() == 6);
    CHECK(std::abs(out.report.results["rows"][0]["gap"].get<double>() - (-2.009027573)) <= 1e-8);
}

TEST_CASE("free sampling at a fixed seed is reproducible") {
    const std::vector<std::string> args = {"sample",  "--beta", "0.8",           "--samples",
                                           "500",     "--seed", "9",             "--deterministic"};
    const run_outcome a = run_command(args);
    const run_outcome b = run_command(args);
    CHECK(a.exit_code == 0);
    CHECK(a.rendered == b.rendered);
    CHECK(a.report.results["mean"].contains("x"));
    CHECK(a.report.results["covariance"].contains("xy"));
    CHECK(a.report.results["levels"] == 57);  // floor(46/0.8)
}

TEST_CASE("calibrated sampling at a hit target passes its own 3-sigma checks") {
    const run_outcome out =
        run_command({"sample", "--n", "30", "--samples", "4000", "--seed", "1"});
    CHECK(out.exit_code == 0);
    CHECK(std::abs(out.report.results["exact_hit_probability"].get<double>() -
                   0.0009350961172077328) <= 1e-14);
    CHECK(std::abs(out.report.results["local_limit_rate"].get<double>() -
                   0.0008878849105103856) <= 1e-14);
    CHECK(std::abs(out.report.results["hit_ratio_exact_over_llt"].get<double>() -
                   1.0531726647659871) <= 1e-10);
    REQUIRE(out.report.checks.size() == 2);
    CHECK(out.report.all_pass());
}

TEST_CASE("conditioned sampling writes the chain file") {
    namespace fs = std::filesystem;
    const fs::path csv = fs::temp_directory_path() / "chains_test_cond.csv";
    fs::remove(csv);
    const run_outcome out = run_command(
        {"sample-conditioned", "--n", "12", "--seed", "3", "--out", csv.string()});
    CHECK(out.exit_code == 0);
    CHECK(out.report.results["accepted"] == true);
    CHECK(out.report.results["vertices"].get<long long>() >= 2);
    const std::string body = slurp(csv);
    CHECK(body.rfind("x,y\n", 0) == 0);
    fs::remove(csv);
}

TEST_CASE("limit-shape runs a single size and records medians") {
    const run_outcome out =
        run_command({"limit-shape", "--n", "10", "--samples", "5", "--seed", "2"});
    CHECK(out.exit_code == 0);
    REQUIRE(out.report.results["sizes"].size() == 1);
    const nlohmann::json& row = out.report.results["sizes"][0];
    CHECK(row["n"] == 10);
    CHECK(row["median"].get<double>() > 0.0);
    CHECK(row["median"].get<double>() < 1.0);
    CHECK(run_command({"limit-shape", "--samples", "2"}).exit_code == 2);
}

TEST_CASE("csv reports flatten results into section rows") {
    const run_outcome out = run_command({"count", "--n", "5", "--format", "csv"});
    CHECK(out.exit_code == 0);
    CHECK(out.rendered.rfind("section,key,value\n", 0) == 0);
    CHECK(out.rendered.find("result,value,77\n") != std::string::npos);
    CHECK(out.rendered.find("run,all_pass,true\n") != std::string::npos);
}

TEST_CASE("count cache verifies previous records before appending") {
    namespace fs = std::filesystem;
    const fs::path cache = fs::temp_directory_path() / "chains_test_count_cache.jsonl";
    fs::remove(cache);
    CHECK(run_command({"count", "--n", "6", "--cache", cache.string()}).exit_code == 0);
    CHECK(run_command({"count", "--n", "7", "--cache", cache.string()}).exit_code == 0);
    CHECK(load_count_records(cache.string()).size() == 2);

    // tamper with the stored value: the next run must refuse to append
    std::vector<count_record> recs = load_count_records(cache.string());
    recs[0].value += 1;
    fs::remove(cache);
    append_count_records(cache.string(), recs);
    const run_outcome bad = run_command({"count", "--n", "8", "--cache", cache.string()});
    CHECK(bad.exit_code == 1);
    CHECK(bad.report.results.contains("error"));
    CHECK(load_count_records(cache.string()).size() == 2);  // nothing appended
    fs::remove(cache);
}

TEST_CASE("bundled verification suites pass end to end") {
    for (const std::string suite : {"oracle", "identities", "montecarlo", "paper"}) {
        const run_outcome out = run_command({"verify", "--suite", suite});
        INFO("suite " << suite);
        CHECK(out.exit_code == 0);
        CHECK(out.report.checks.size() >= 4);
        CHECK(out.report.all_pass());
    }
    CHECK(run_command({"verify", "--suite", "bogus"}).exit_code == 2);
}
