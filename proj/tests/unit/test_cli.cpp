#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "support.hpp"

using namespace invmean::cli;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"invmean"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path temp_file(const char* name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("eval targets") {
    Run r = run({"eval", "--pair", "example31", "--x", "0", "--y", "3", "--target", "lo"});
    CHECK(r.code == kExitOk);
    CHECK(std::abs(std::stod(r.out) - 1.0) < 1e-9);
    CHECK(r.out.find("converged") != std::string::npos);

    r = run({"eval", "--pair", "example31", "--x", "5", "--y", "5", "--target", "tr"});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "5 converged\n");

    r = run({"eval", "--mean-m", "(x+y)/2", "--mean-n", "sqrt(x*y)", "--domain", "1", "2", "--x", "1", "--y", "2",
             "--target", "tr"});
    CHECK(r.code == kExitOk);
    const double oracle = static_cast<double>(invmean::testing::agm_oracle(1.0L, 2.0L));
    CHECK(std::abs(std::stod(r.out) - oracle) < 1e-12);

    r = run({"eval", "--x", "0", "--y", "3", "--target", "bo", "--phi", "limsup"});
    CHECK(std::abs(std::stod(r.out) - 2.0) < 1e-9);
    r = run({"eval", "--x", "0", "--y", "3", "--target", "stage", "--stage", "2", "--component", "b"});
    CHECK(r.out == "1.5 converged\n");

    r = run({"eval", "--x", "0", "--y", "3", "--target", "up", "--format", "json"});
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["converged"] == true);
    CHECK(std::abs(j["value"].get<double>() - 2.0) < 1e-9);
}

TEST_CASE("eval exit codes") {
    CHECK(run({"eval", "--x", "0", "--y", "3", "--target", "lo", "--max-steps", "3"}).code == kExitApproximate);
    const Run outside = run({"eval", "--x", "0", "--y", "30"});
    CHECK(outside.code == kExitError);
    CHECK_FALSE(outside.err.empty());
    const Run syntax = run({"eval", "--mean-m", "sqrt(x*", "--mean-n", "max", "--x", "0", "--y", "1"});
    CHECK(syntax.code == kExitError);
    CHECK(syntax.err.find("1:8") != std::string::npos);
    CHECK(run({"eval", "--x", "0"}).code == kExitError);
    CHECK(run({"eval", "--pair", "example31", "--mean-m", "x", "--mean-n", "y", "--x", "0", "--y", "1"}).code ==
          kExitError);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("orbit export") {
    Run r = run({"orbit", "--pair", "example31", "--x", "0", "--y", "3"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("n,x_n,y_n,gap\n", 0) == 0);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() > 5);
    CHECK(rows[0] == std::vector<double>{0, 0, 3, 3});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][3] <= rows[i - 1][3]);
    CHECK(std::abs(rows.back()[3] - 1.0) < 1e-9);

    // rows replay exactly through the pair
    const auto pair = invmean::make_example_pair(invmean::Interval(0, 10));
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const invmean::Point next = pair(rows[i][1], rows[i][2]);
        CHECK(next.x == rows[i + 1][1]);
        CHECK(next.y == rows[i + 1][2]);
    }

    r = run({"orbit", "--x", "2", "--y", "2"});
    CHECK(csv_rows(r.out) == std::vector<std::vector<double>>{{0, 2, 2, 0}});

    r = run({"orbit", "--pair", "agm", "--x", "1", "--y", "2"});
    rows = csv_rows(r.out);
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i - 1][3] > 0) CHECK(rows[i][3] < rows[i - 1][3]);
    CHECK(rows.back()[3] < 1e-12);

    r = run({"orbit", "--x", "0", "--y", "3", "--format", "json"});
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["rows"][0]["gap"] == 3.0);
    CHECK(j["converged"] == true);
}

TEST_CASE("output file") {
    const auto path = temp_file("invmean_cli_test.csv");
    std::filesystem::remove(path);
    const std::string p = path.string();
    CHECK(run({"orbit", "--x", "0", "--y", "3", "--out", p.c_str()}).code == kExitOk);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,x_n,y_n,gap");
    std::filesystem::remove(path);
    CHECK(run({"orbit", "--x", "0", "--y", "3", "--out", "/nonexistent-dir/x.csv"}).code == kExitError);
}

TEST_CASE("checks") {
    Run r = run({"check", "invariance", "--k", "(x+y)/2", "--pair", "example31"});
    CHECK(r.code == kExitOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["passed"] == true);
    CHECK(j["result"]["invariance"]["max_residual"].get<double>() < 1e-12);
    CHECK(j["grid"]["points"] == 11201);

    r = run({"check", "invariance", "--k", "sqrt(x*y)", "--pair", "example31", "--domain", "1", "10"});
    CHECK(r.code == kExitCheckFailed);
    j = nlohmann::json::parse(r.out);
    CHECK(j["passed"] == false);
    CHECK(j["result"]["invariance"]["witness"].is_array());

    r = run({"check", "properties", "--pair", "example31", "--grid", "100", "--random-pairs", "0"});
    CHECK(r.code == kExitOk);

    r = run({"check", "ordering", "--candidate", "kc:-1", "--candidate", "kc:1", "--candidate", "tr",
             "--candidate", "bo:w:x", "--candidate", "geometric", "--grid", "31", "--domain", "1", "10"});
    CHECK(r.code == kExitOk);
    j = nlohmann::json::parse(r.out);
    CHECK(j["result"]["candidates"][4]["invariant"] == false);

    CHECK(run({"check", "phi", "--phi", "x + y", "--grid", "31"}).code == kExitOk);
    CHECK(run({"check", "phi", "--phi", "x * y", "--grid", "31"}).code == kExitCheckFailed);
    CHECK(run({"check", "uniqueness", "--grid", "41"}).code == kExitOk);
    CHECK(run({"check", "limitlike", "--spec", "liminf", "--spec", "w:x*x"}).code == kExitOk);
    CHECK(run({"check", "limitlike", "--spec", "w:2*x"}).code == kExitError);
    CHECK(run({"check"}).code == kExitError);
}

TEST_CASE("reports are byte-identical across runs") {
    const Run a = run({"check", "ordering", "--grid", "21"});
    const Run b = run({"check", "ordering", "--grid", "21"});
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
}

TEST_CASE("config file with flag override") {
    const auto path = temp_file("invmean_cli_test.toml");
    {
        std::ofstream f(path);
        f << "pair = \"agm\"\ndomain = [1, 2]\nmax-steps = 3\n";
    }
    const std::string p = path.string();
    Run r = run({"--config", p.c_str(), "eval", "--x", "1", "--y", "2", "--target", "lo"});
    CHECK(r.code == kExitApproximate);

    r = run({"--config", p.c_str(), "--max-steps", "100", "eval", "--x", "1", "--y", "2", "--target", "lo"});
    CHECK(r.code == kExitOk);
    const double oracle = static_cast<double>(invmean::testing::agm_oracle(1.0L, 2.0L));
    CHECK(std::abs(std::stod(r.out) - oracle) < 1e-12);

    r = run({"--config", p.c_str(), "--domain", "1", "4", "--max-steps", "100", "eval", "--x", "1", "--y", "4", "--target", "lo"});
    CHECK(r.code == kExitOk);
    CHECK(std::stod(r.out) == doctest::Approx(static_cast<double>(invmean::testing::agm_oracle(1.0L, 4.0L))));
    std::filesystem::remove(path);
}
