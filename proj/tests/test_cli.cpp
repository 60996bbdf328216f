#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "confint/confint.hpp"

using namespace confint;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

fs::path scratch_file(const std::string& tag) {
    static int counter = 0;
    return fs::temp_directory_path() /
           ("confint_cli_" + std::to_string(::getpid()) + "_" + tag + "_" +
            std::to_string(counter++));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const fs::path out = scratch_file("out"), err = scratch_file("err");
    const std::string cmd = std::string(CONFINT_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

const std::string kStudyArgs = "--rho-xy -0.11 --sigma-ratio 42.94 --r2x 0.1 0.5 --r2y 0 0.2";

} // namespace

TEST_CASE("interval prints the case-study endpoints", "[cli]") {
    const auto r = run_cli("interval " + kStudyArgs);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[-36.60, 17.71]") != std::string::npos);

    const auto tight = run_cli("interval " + kStudyArgs + " --rho-hxhy 0 1");
    CHECK(tight.exit_code == 0);
    CHECK(tight.out.find("[-36.60, -5.25]") != std::string::npos);
}

TEST_CASE("invalid bounds name the violated constraint and exit 2", "[cli]") {
    const auto r = run_cli("interval --rho-xy -0.11 --sigma-ratio 42.94 "
                           "--r2x 0.6 0.5 --r2y 0 0.2");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("lower bound exceeds upper") != std::string::npos);
}

TEST_CASE("empty feasible set exits 3", "[cli]") {
    const auto r = run_cli("interval --rho-xy 0.9 --sigma-ratio 1 "
                           "--r2x 0.5 0.5 --r2y 0.02 0.02");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("no sensitivity tuple") != std::string::npos);
}

TEST_CASE("machine interval outputs agree with the library", "[cli]") {
    const auto iv = solve_interval({-0.11, 42.94}, {0.1, 0.5, 0.0, 0.2, -1, 1});

    const auto js = run_cli("interval " + kStudyArgs + " --format json");
    REQUIRE(js.exit_code == 0);
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j["lower"].get<double>() == round12(iv.lower));
    CHECK(j["upper"].get<double>() == round12(iv.upper));
    CHECK(j["argmin"]["rho_hxhy"].get<double>() == 1.0);
    CHECK(j["candidates_generated"].get<int>() <= 88);

    const auto cs = run_cli("interval " + kStudyArgs + " --format csv");
    REQUIRE(cs.exit_code == 0);
    std::istringstream rows(cs.out);
    std::string header, row;
    std::getline(rows, header);
    std::getline(rows, row);
    CHECK(header.rfind("rho_xy,sigma_ratio,", 0) == 0);
    CHECK(row.find(format_number(round12(iv.lower))) != std::string::npos);
}

TEST_CASE("sweep emits nested rows for widening rho bounds", "[cli]") {
    const auto r = run_cli("sweep " + kStudyArgs + " --resolution 21 --format csv");
    REQUIRE(r.exit_code == 0);
    std::istringstream rows(r.out);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "l_rho,u_rho,lower,upper,feasible");
    double full_lo = 0, full_hi = 0, pos_lo = 0, pos_hi = 0;
    std::vector<std::array<double, 2>> points; // rows with l_rho == u_rho
    while (std::getline(rows, line)) {
        std::istringstream cells(line);
        std::string c;
        std::vector<std::string> v;
        while (std::getline(cells, c, ',')) v.push_back(c);
        REQUIRE(v.size() == 5);
        if (v[4] != "1") continue;
        const double lo = std::stod(v[0]), hi = std::stod(v[1]);
        if (lo == -1.0 && hi == 1.0) { full_lo = std::stod(v[2]); full_hi = std::stod(v[3]); }
        if (lo == 0.0 && hi == 1.0) { pos_lo = std::stod(v[2]); pos_hi = std::stod(v[3]); }
        if (lo == hi) points.push_back({std::stod(v[2]), std::stod(v[3])});
    }
    CHECK(full_lo == Catch::Approx(-36.60444054552604).margin(1e-9));
    CHECK(full_hi == Catch::Approx(17.710840545526043).margin(1e-9));
    CHECK(pos_lo == Catch::Approx(-36.60444054552604).margin(1e-9));
    CHECK(pos_hi == Catch::Approx(-5.248222222222222).margin(1e-9));
    REQUIRE(!points.empty());
    for (const auto& pt : points) {
        CHECK(pt[0] >= full_lo - 1e-9);
        CHECK(pt[1] <= full_hi + 1e-9);
    }
}

TEST_CASE("from-data reproduces the generating parameters", "[cli]") {
    const SummaryStats s{-0.11, 42.94};
    const SensitivityTuple t{0.5, 0.2, 1.0};
    const auto d = synthesize_data(s, t, 10, 2, 77);
    const fs::path csv = scratch_file("data");
    {
        std::ofstream f(csv);
        write_dataset_csv(f, d);
    }
    const auto r = run_cli("from-data " + csv.string() + " --format json");
    fs::remove(csv);
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["n"].get<int>() == 10);
    CHECK(j["p"].get<int>() == 2);
    CHECK(j["rho_xy"].get<double>() == Catch::Approx(-0.11).margin(1e-10));
    CHECK(j["r2wx"].get<double>() == Catch::Approx(0.5).margin(1e-10));
    CHECK(j["r2wy"].get<double>() == Catch::Approx(0.2).margin(1e-10));
    CHECK(j["rho_hxhy"].get<double>() == Catch::Approx(1.0).margin(1e-10));
    CHECK(j["verification"].get<std::string>() == "ok");
    CHECK(j["abs_discrepancy"].get<double>() < 1e-8);
}

TEST_CASE("from-data with x and y only reports stats and skips the tuple", "[cli]") {
    const fs::path csv = scratch_file("xy");
    {
        std::ofstream f(csv);
        f << "x,y\n1,2\n2,3\n3,5\n4,4\n";
    }
    const auto r = run_cli("from-data " + csv.string() + " --format json");
    fs::remove(csv);
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["p"].get<int>() == 0);
    CHECK(!j.contains("r2wx"));
    CHECK(j["verification"].get<std::string>().rfind("skipped", 0) == 0);
}

TEST_CASE("from-data parse errors carry coordinates and exit 2", "[cli]") {
    const fs::path csv = scratch_file("bad");
    {
        std::ofstream f(csv);
        f << "x,y\n1,2\n3,abc\n";
    }
    const auto r = run_cli("from-data " + csv.string());
    fs::remove(csv);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("row 3") != std::string::npos);
    CHECK(r.err.find("column 2") != std::string::npos);
}

TEST_CASE("missing files exit 4", "[cli]") {
    CHECK(run_cli("from-data /nonexistent/path.csv").exit_code == 4);
    CHECK(run_cli("interval " + kStudyArgs + " --out /nonexistent/dir/x.csv").exit_code == 4);
}

TEST_CASE("region emits a nonempty cloud for the explain-away example", "[cli]") {
    const auto r = run_cli("region --rho-xy 0.5 --sigma-ratio 1 --exclude 0.2 inf "
                           "--resolution 31 --format csv");
    REQUIRE(r.exit_code == 0);
    std::istringstream rows(r.out);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "r2wx,r2wy,rho_hxhy,beta");
    int count = 0;
    while (std::getline(rows, line)) {
        const auto pos = line.rfind(',');
        CHECK(std::stod(line.substr(pos + 1)) < 0.2);
        ++count;
    }
    CHECK(count > 0);
}

TEST_CASE("prior output is deterministic and brackets the quantiles", "[cli]") {
    const fs::path a = scratch_file("prior_a"), b = scratch_file("prior_b");
    const std::string args = "prior " + kStudyArgs +
                             " --uniform --samples 20000 --seed 7 --format json --out ";
    REQUIRE(run_cli(args + a.string()).exit_code == 0);
    REQUIRE(run_cli(args + b.string()).exit_code == 0);
    const std::string text_a = slurp(a), text_b = slurp(b);
    fs::remove(a);
    fs::remove(b);
    CHECK(text_a == text_b);

    const auto j = nlohmann::json::parse(text_a);
    const auto iv = solve_interval({-0.11, 42.94}, {0.1, 0.5, 0.0, 0.2, -1, 1});
    const double q_lo = j["quantiles"]["2.5"].get<double>();
    const double q_hi = j["quantiles"]["97.5"].get<double>();
    CHECK(q_lo >= iv.lower - 1e-9);
    CHECK(q_hi <= iv.upper + 1e-9);
    CHECK(j["samples"].size() == 20000);
}

TEST_CASE("config files feed flags and flags win", "[cli]") {
    const fs::path conf = scratch_file("conf");
    {
        std::ofstream f(conf);
        f << "# case study inputs\n"
          << "rho-xy = -0.11\n"
          << "sigma-ratio = 42.94\n"
          << "r2x = 0.1 0.5\n"
          << "r2y = 0 0.2\n"
          << "format = json\n";
    }
    const auto from_file = run_cli("interval --config " + conf.string());
    REQUIRE(from_file.exit_code == 0);
    const auto j = nlohmann::json::parse(from_file.out);
    CHECK(j["lower"].get<double>() == Catch::Approx(-36.6044405455).margin(1e-9));

    // a flag on the command line overrides the file
    const auto overridden =
        run_cli("interval --config " + conf.string() + " --rho-hxhy 0 1 --format json");
    fs::remove(conf);
    REQUIRE(overridden.exit_code == 0);
    const auto j2 = nlohmann::json::parse(overridden.out);
    CHECK(j2["upper"].get<double>() == Catch::Approx(-5.2482222222).margin(1e-9));
}

TEST_CASE("verify suite passes", "[cli]") {
    const auto r = run_cli("verify --samples 40 --seed 3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("PASS bound-set u_y2=0.2") != std::string::npos);
    CHECK(r.out.find("does not reproduce") != std::string::npos);
    CHECK(r.out.find("PASS slope identity") != std::string::npos);
    CHECK(r.out.find("PASS round trip") != std::string::npos);
    CHECK(r.out.find("all checks passed") != std::string::npos);
}
