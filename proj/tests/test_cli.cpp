#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "focuskit/cli.hpp"
#include "focuskit/errors.hpp"
#include "focuskit/report.hpp"

using namespace focuskit;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("number formatting") {
    CHECK(report::format_number(196.38919) == "196.389");
    CHECK(report::format_number(0.5) == "0.5");
    CHECK(report::format_number(1234567.0) == "1.23457e+06");
    CHECK(report::format_number(-0.0) == "0");
}

TEST_CASE("csv and svg") {
    report::Table t;
    t.columns = {"a", "b"};
    CHECK_THROWS_AS(report::to_csv(t), InputError);
    t.rows.push_back({1.0 / 3.0, std::string("x,y")});
    CHECK(report::to_csv(t) == "a,b\n0.333333,\"x,y\"\n");

    report::Plot plot;
    plot.x_label = "alpha (dimensionless)";
    plot.y_label = "travel [um]";
    CHECK_THROWS_AS(report::to_svg(plot), InputError);
    plot.series.push_back({"s", {{0.0, 1.0}, {1.0, 2.0}}, false});
    const auto svg = report::to_svg(plot);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("travel [um]") != std::string::npos);
    CHECK(svg.find("alpha (dimensionless)") != std::string::npos);
}

TEST_CASE("formats") {
    CHECK(report::parse_format("csv") == report::Format::csv);
    CHECK_THROWS_AS(report::parse_format("xml"), InputError);
}

TEST_CASE("empty sweep is an error") {
    CHECK_THROWS_AS(report::sweep_json({}), InputError);
    CHECK_THROWS_AS(report::to_csv(report::sweep_table({})), InputError);
}

}

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run({"table2", "--bogus"}).code == cli::kExitUsage);
    CHECK(run({"focus-sweep", "--lens", "mfm30"}).code == cli::kExitUsage);
    CHECK(run({"trace", "--lens", "mfm30", "--field", "abc"}).code == cli::kExitUsage);
}

TEST_CASE("help documents units for every verb") {
    const auto top = run({"--help"});
    CHECK(top.code == 0);
    for (const char* verb : {"first-order", "gamma-curve", "table2", "trace", "focus-sweep", "tolerance",
                             "array-plan", "validate"}) {
        CAPTURE(verb);
        const auto r = run({verb, "--help"});
        CHECK(r.code == 0);
        const bool has_units = r.out.find("[mm]") != std::string::npos || r.out.find("[um]") != std::string::npos ||
                               r.out.find("[deg]") != std::string::npos || r.out.find("um") != std::string::npos ||
                               r.out.find("dimensionless") != std::string::npos;
        CHECK(has_units);
    }
}

TEST_CASE("input and numeric failures") {
    CHECK(run({"trace", "--lens", "no_such_lens.json"}).code == cli::kExitInput);
    CHECK(run({"table2", "--format", "svg"}).code == cli::kExitInput);
    CHECK(run({"first-order", "--f1", "10", "--f2", "-10", "--d", "0"}).code == cli::kExitNumeric);
    CHECK(run({"array-plan", "--lens", "mfm30"}).code == cli::kExitInput);
    const auto r = run({"gamma-curve", "--from", "0.9", "--to", "0.1"});
    CHECK(r.code == cli::kExitInput);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("table2 csv") {
    const auto r = run({"table2", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(count_lines(r.out) == 9);
    CHECK(r.out.rfind("lens,f_mm,fno,l_b_m,r_um,r_o_um,gamma\n", 0) == 0);
    CHECK(r.out.find("1,25,2.5,-2,238,312.5,0.7616") != std::string::npos);
}

TEST_CASE("gamma curve in three formats") {
    const auto csv = run({"gamma-curve", "--from", "0.1", "--to", "0.95", "--n", "100", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(count_lines(csv.out) == 101);
    const auto svg = run({"gamma-curve", "--format", "svg"});
    REQUIRE(svg.code == 0);
    CHECK(svg.out.find("<polyline") != std::string::npos);
    const auto json = nlohmann::json::parse(run({"gamma-curve"}).out);
    CHECK(json["segments"][0].size() == 100);
}

TEST_CASE("validate prints the total track") {
    const auto r = run({"validate", "--lens", "mms45"});
    CHECK(r.code == 0);
    CHECK(r.out.find("total track: 124.100 mm") != std::string::npos);
    const auto j = nlohmann::json::parse(run({"validate", "--lens", "mfm30", "--format", "json"}).out);
    CHECK(j["ok"] == true);
}

TEST_CASE("focus sweep json") {
    const auto r = run({"focus-sweep", "--lens", "mfm30", "--near", "2000"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["travel_range_um"].get<double>() >= 190.0);
    CHECK(j["travel_range_um"].get<double>() <= 240.0);
    CHECK(j["entries"][0]["object_distance_mm"] == "infinity");
    const auto csv = run({"focus-sweep", "--lens", "mfm30", "--near", "2000", "--format", "csv"});
    CHECK(csv.out.rfind("object_distance_mm,best_shift_um,rms_um\n", 0) == 0);
}

TEST_CASE("array plan carries both equivalent focal lengths") {
    const auto j = nlohmann::json::parse(run({"array-plan", "--lens", "mms45"}).out);
    CHECK(j["eq_fl_diagonal_mm"].get<double>() == doctest::Approx(298.64).epsilon(1e-4));
    CHECK(j["eq_fl_ifov_mm"].get<double>() == doctest::Approx(180.0));
    CHECK(j["overlap_deg"].get<double>() == doctest::Approx(1.28));
    CHECK(j["channels_per_axis"] == 15);
}

TEST_CASE("trace outputs") {
    const auto j = nlohmann::json::parse(run({"trace", "--lens", "mfm30", "--shift", "-0.2"}).out);
    CHECK(j["spot"]["n_traced"].get<int>() > 0);
    const auto svg = run({"trace", "--lens", "mms45", "--field", "3", "--format", "svg"});
    CHECK(svg.code == 0);
    CHECK(svg.out.find("<circle") != std::string::npos);
}

TEST_CASE("tolerance and first-order") {
    const auto t = nlohmann::json::parse(run({"tolerance", "--lens", "mfm30", "--decenter", "0.025"}).out);
    CHECK(t["rms_growth_um"].get<double>() > 0.0);
    CHECK(run({"tolerance", "--lens", "mfm30", "--tilt", "2"}).code == cli::kExitInput);
    const auto f = nlohmann::json::parse(run({"first-order"}).out);
    CHECK(f["efl_mm"].get<double>() == doctest::Approx(29.959).epsilon(1e-4));
    CHECK(f["focus_budget"]["positions"] == 19);
}

TEST_CASE("output file") {
    const std::string path = "focuskit_cli_test.csv";
    const auto r = run({"table2", "--format", "csv", "--output", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == run({"table2", "--format", "csv"}).out);
    std::remove(path.c_str());
}

TEST_CASE("byte-deterministic output on the built-ins") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"trace", "--lens", "mms45", "--field", "2", "--format", "csv"},
             {"focus-sweep", "--lens", "mms45", "--near", "5000"},
             {"table2"},
             {"validate", "--lens", "mfm30"}}) {
        CHECK(run(args).out == run(args).out);
    }
}

}
