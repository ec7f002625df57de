#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "leocov/cli.hpp"
#include "leocov/error.hpp"
#include "leocov/kernels.hpp"

using namespace leocov;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run invoke(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) result.push_back(line);
    return result;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> fields;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

TEST_CASE("parse_range")
{
    const auto alt = cli::parse_range("200:1500:50");
    REQUIRE(alt.size() == 27);
    CHECK(alt.front() == 200.0);
    CHECK(alt.back() == 1500.0);

    const auto x = cli::parse_range("0.01:0.99:0.01");
    REQUIRE(x.size() == 99);
    CHECK(cli::format_double(x[6]) == "0.07");
    CHECK(cli::format_double(x[28]) == "0.29");
    CHECK(x.back() == 0.99);

    CHECK(cli::parse_range("200,400,800") == std::vector<double>{200, 400, 800});
    CHECK(cli::parse_range("5") == std::vector<double>{5});
    CHECK(cli::parse_range("1:2:0.4") == std::vector<double>{1, 1.4, 1.8});
    CHECK_THROWS_AS(cli::parse_range(""), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_range("1:2"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_range("1:2:0"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_range("2:1:1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_range("a,b"), InvalidArgument);
}

TEST_CASE("format_double and db_to_linear")
{
    CHECK(cli::format_double(0.1) == "0.1");
    CHECK(cli::format_double(1e-12) == "1e-12");
    CHECK(cli::format_double(200) == "200");
    CHECK(std::stod(cli::format_double(M_PI)) == M_PI);
    CHECK(cli::db_to_linear(0) == 1.0);
    CHECK(cli::db_to_linear(-10) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("moments: header, row count and dB threshold")
{
    const auto a = invoke({"moments", "--alt-km", "300,900", "--quad-k", "64", "--quad-n", "64"});
    REQUIRE(a.code == 0);
    const auto rows = lines(a.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "altitude_km,m1,m2,variance");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = split(rows[i]);
        REQUIRE(f.size() == 4);
        const double m1 = std::stod(f[1]);
        const double m2 = std::stod(f[2]);
        CHECK(m1 > 0.0);
        CHECK(m2 <= m1);
        CHECK(std::stod(f[3]) == doctest::Approx(std::max(0.0, m2 - m1 * m1)).epsilon(1e-12));
    }

    // Default threshold is 0.1 = -10 dB.
    const auto b = invoke({"moments", "--alt-km", "300,900", "--quad-k", "64", "--quad-n", "64", "--theta-db", "-10"});
    CHECK(b.out == a.out);
    const auto c = invoke({"moments", "--alt-km", "300", "--quad-k", "64", "--quad-n", "64", "--theta-db", "0"});
    const auto d = invoke({"moments", "--alt-km", "300", "--quad-k", "64", "--quad-n", "64", "--theta", "1"});
    CHECK(c.out == d.out);
}

TEST_CASE("moments --sim adds Monte Carlo columns")
{
    const auto r = invoke({"moments", "--alt-km", "400", "--quad-k", "64", "--quad-n", "64", "--sim",
                           "--realizations", "200"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows[0] == "altitude_km,m1,m2,variance,sim_m1,sim_m2,sim_se1,sim_se2");
    CHECK(split(rows[1]).size() == 8);
}

TEST_CASE("meta: default grid gives one row per altitude and reliability")
{
    const auto r = invoke({"meta", "--quad-k", "64", "--quad-n", "64"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows[0] == "altitude_km,x,meta_ccdf");
    CHECK(rows.size() == 1 + 297);
    CHECK(split(rows[7])[1] == "0.07");
    for (std::size_t i = 2; i <= 99; ++i) {
        CHECK(std::stod(split(rows[i])[2]) <= std::stod(split(rows[i - 1])[2]));
    }

    const auto s = invoke({"meta", "--alt-km", "400", "--x", "0.2,0.6", "--quad-k", "64", "--quad-n", "64",
                           "--sim", "--realizations", "100"});
    REQUIRE(s.code == 0);
    CHECK(lines(s.out)[0] == "altitude_km,x,meta_ccdf,empirical_ccdf");
    CHECK(lines(s.out).size() == 3);
}

TEST_CASE("simulate: schema, seed echo and byte-identical reruns")
{
    const std::vector<std::string> args{"simulate", "--alt-km", "200,600", "--realizations", "300", "--seed", "42"};
    const auto a = invoke(args);
    REQUIRE(a.code == 0);
    CHECK(a.err.find("seed = 42") != std::string::npos);
    const auto rows = lines(a.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] ==
          "altitude_km,lambda,m,theta,mode,realizations,seed,m1_hat,se1,m2_hat,se2,variance_hat,empty_fraction,"
          "mean_visible");
    const auto f = split(rows[1]);
    REQUIRE(f.size() == 14);
    CHECK(f[4] == "exact-m1");
    CHECK(f[5] == "300");
    CHECK(f[6] == "42");

    CHECK(invoke(args).out == a.out);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(invoke(threaded).out == a.out);
    auto scalar = args;
    scalar.insert(scalar.end(), {"--kernels", "scalar"});
    // Backends may differ in the last bits from reduction order.
    const auto previous = kernels::active_backend();
    const auto scalar_rows = lines(invoke(scalar).out);
    kernels::set_backend(previous);
    REQUIRE(scalar_rows.size() == rows.size());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto s = split(scalar_rows[i]);
        for (std::size_t k = 7; k < f.size(); ++k) {
            CHECK(std::stod(s[k]) == doctest::Approx(std::stod(split(rows[i])[k])).epsilon(1e-12));
        }
    }
    auto other = args;
    other.back() = "43";
    CHECK(invoke(other).out != a.out);
}

TEST_CASE("simulate: Nakagami defaults to fading Monte Carlo")
{
    const auto r = invoke({"simulate", "--m", "3", "--realizations", "50", "--fading-draws", "20"});
    REQUIRE(r.code == 0);
    CHECK(split(lines(r.out)[1])[4] == "fading-mc");
}

TEST_CASE("--output writes the CSV to a file")
{
    const auto path = std::filesystem::temp_directory_path() / "leocov_cli_output_test.csv";
    const auto r = invoke({"simulate", "--realizations", "20", "--output", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str().rfind("altitude_km,lambda", 0) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("compare: gate passes for Rayleigh fading")
{
    const auto r = invoke({"compare", "--alt-km", "400", "--realizations", "2000", "--seed", "3"});
    CHECK(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "altitude_km,quantity,analytic,simulated,se,abs_diff,within_3se");
    CHECK(split(rows[1])[1] == "m1");
    CHECK(split(rows[2])[1] == "m2");
    CHECK(r.err.find("max |diff|") != std::string::npos);
}

TEST_CASE("usage errors")
{
    CHECK(invoke({}).code == cli::kUsage);
    CHECK(invoke({"bogus"}).code == cli::kUsage);
    CHECK(invoke({"simulate", "--realizations", "0"}).code == cli::kUsage);
    CHECK(invoke({"moments", "--alt-km", ""}).code == cli::kUsage);
    CHECK(invoke({"moments", "--alt-km", "300:200:50"}).code == cli::kUsage);
    CHECK(invoke({"moments", "--theta", "1", "--theta-db", "0"}).code == cli::kUsage);
    CHECK(invoke({"simulate", "--m", "2", "--mode", "exact-m1"}).code == cli::kUsage);
    CHECK(invoke({"simulate", "--mode", "exact"}).code == cli::kUsage);
    CHECK(invoke({"simulate", "--lambda", "-1"}).code == cli::kUsage);
    CHECK(invoke({"moments", "--kernels", "neon"}).code == cli::kUsage);
    const auto r = invoke({"simulate", "--realizations", "0"});
    CHECK(r.out.empty());
    CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("help exits cleanly")
{
    const auto r = invoke({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("moments") != std::string::npos);
}
