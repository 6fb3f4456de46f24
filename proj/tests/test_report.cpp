#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mixrisk/report.hpp"

using namespace mixrisk;

namespace {

SavingScenario small_mixed1() {
    SavingScenario scn;
    scn.model = ModelKind::MixedI;
    scn.y0 = 2.0;
    scn.x0 = 1.0;
    scn.first_period = BiUtility::log_additive();
    scn.second_period = BiUtility::cara_additive(1.0, 1.0);
    scn.income_fuzzy = FuzzyNumber::rectangular(0.95, 1.05);
    scn.background_random = RandomVariable::uniform(0.95, 1.05);
    return scn;
}

SavingScenario quadratic_control() {
    SavingScenario scn;
    scn.model = ModelKind::MixedI;
    scn.y0 = 5.0;
    scn.x0 = 2.0;
    scn.first_period = BiUtility::quadratic(0.01, 0.01);
    scn.second_period = BiUtility::quadratic(0.01, 0.01);
    scn.income_fuzzy = FuzzyNumber::rectangular(1.8, 2.2);
    scn.background_random = RandomVariable::uniform(0.8, 1.2);
    return scn;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("csv layout: one row per situation and indicator") {
    auto report = precautionary_report(small_mixed1());
    std::string csv = render_csv(report);
    CHECK(csv.rfind("model,situation,s_opt,indicator_kind,indicator_value,"
                    "predicate_value,taylor_gap,agreement\n",
                    0) == 0);
    // mixed model: 4 situations x 3 indicators
    CHECK(count_lines(csv) == 1 + 12);
    CHECK(csv.find("\r") == std::string::npos);  // LF only
    CHECK(csv.find("mixed-I,full_risk,") != std::string::npos);
}

TEST_CASE("csv layout for the probabilistic baseline") {
    SavingScenario scn;
    scn.model = ModelKind::Probabilistic;
    scn.y0 = 2.0;
    scn.x0 = 1.0;
    scn.first_period = BiUtility::log_additive();
    scn.second_period = BiUtility::cara_additive(1.0, 1.0);
    scn.income_random = RandomVariable::uniform(0.95, 1.05);
    scn.background_random = RandomVariable::uniform(0.95, 1.05);
    auto report = precautionary_report(scn);
    std::string csv = render_csv(report);
    // two indicators per solved situation
    CHECK(count_lines(csv) == 1 + 2 * 3);
}

TEST_CASE("csv values use 12 significant digits in scientific notation") {
    auto report = precautionary_report(quadratic_control());
    std::string csv = render_csv(report);
    std::istringstream lines(csv);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    // s_opt of the quadratic control problem is exactly 1.5
    CHECK(first.find("1.50000000000e+00") != std::string::npos);
}

TEST_CASE("tied indicators render as zero-within-tolerance") {
    auto report = precautionary_report(quadratic_control());
    std::string table = render_table(report);
    CHECK(table.find("0 (tol)") != std::string::npos);
    CHECK(table.find("model: mixed-I") != std::string::npos);
}

TEST_CASE("table shows agreement state per indicator") {
    auto report = precautionary_report(small_mixed1());
    std::string table = render_table(report);
    CHECK(table.find("add_income") != std::string::npos);
    CHECK(table.find("two_source") != std::string::npos);
    CHECK(table.find("add_background") != std::string::npos);
    CHECK(table.find("MISMATCH") == std::string::npos);
}

TEST_CASE("rendering is deterministic") {
    auto report = precautionary_report(small_mixed1());
    CHECK(render_csv(report) == render_csv(report));
    CHECK(render_table(report) == render_table(report));

    auto report2 = precautionary_report(small_mixed1());
    CHECK(render_csv(report) == render_csv(report2));
}

TEST_CASE("csv emission writes atomically and reproducibly") {
    namespace fs = std::filesystem;
    auto report = precautionary_report(small_mixed1());
    fs::path dir = fs::temp_directory_path() / "mixrisk_report_test";
    fs::create_directories(dir);
    fs::path a = dir / "a.csv";
    fs::path b = dir / "b.csv";
    emit_csv(report, a.string());
    emit_csv(report, b.string());
    CHECK(fs::exists(a));
    CHECK_FALSE(fs::exists(a.string() + ".tmp"));
    CHECK(read_file(a.string()) == read_file(b.string()));
    CHECK(read_file(a.string()) == render_csv(report));
    fs::remove_all(dir);
}

TEST_CASE("csv emission to an unwritable path fails loudly") {
    auto report = precautionary_report(quadratic_control());
    CHECK_THROWS_AS(emit_csv(report, "/nonexistent_dir/report.csv"), Error);
}
