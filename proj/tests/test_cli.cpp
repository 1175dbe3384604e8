#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "expframe/cli.hpp"

using namespace expframe;
using json = nlohmann::json;

namespace {

json run(const std::vector<std::string>& args, int expectExit = 0) {
    CommandResult r = runCommand(args);
    CHECK(r.exitCode == expectExit);
    return json::parse(r.reportJson);
}

std::string latticeFile() {
    std::string path = "/tmp/expframe_cli_z.pts";
    std::ofstream out(path);
    for (int n = -2000; n <= 2000; ++n) out << n << "\n";
    return path;
}

}  // namespace

TEST_CASE("density command on a lattice file") {
    json rep = run({"density", "--input", latticeFile(), "--ladder", "10,100,1000"});
    CHECK(rep["command"] == "density");
    CHECK(rep["result"]["Dplus"].get<double>() == doctest::Approx(1.001));
    CHECK(rep["result"]["Dminus"].get<double>() == doctest::Approx(1.0));
    CHECK(rep["params"]["ladder"].size() == 3);
    CHECK(rep["result"]["measure"]["count"] == 4001);
}

TEST_CASE("generator specs replace input files") {
    json rep = run({"density", "--gen", "lattice:b=1,lo=-2000,hi=2000", "--ladder", "10,100"});
    CHECK(rep["result"]["Dplus"].get<double>() == doctest::Approx(1.01));

    json leb = run({"density", "--gen", "lebesgue:spacing=0.01,lo=0,hi=3000",
                    "--ladder", "10,100,1000"});
    CHECK(leb["result"]["Dplus"].get<double>() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("usage errors exit with 2") {
    CommandResult unknown = runCommand({"density", "--no-such-flag", "1"});
    CHECK(unknown.exitCode == 2);
    CHECK(json::parse(unknown.reportJson).contains("error"));

    CommandResult noCmd = runCommand({});
    CHECK(noCmd.exitCode == 2);

    CommandResult both = runCommand({"density", "--input", "a", "--gen", "lattice:b=1"});
    CHECK(both.exitCode == 2);

    CommandResult neither = runCommand({"density", "--ladder", "10"});
    CHECK(neither.exitCode == 2);
}

TEST_CASE("reports are byte-identical across runs") {
    std::vector<std::string> args{"matrix-density", "--gen", "lattice:b=1,lo=-500,hi=500",
                                  "--nodes", "0,1", "--ladder", "50,100"};
    CommandResult a = runCommand(args);
    CommandResult b = runCommand(args);
    CHECK(a.reportJson == b.reportJson);
    CHECK(a.exitCode == 0);
}

TEST_CASE("eps-sweep report trends toward the matrix targets") {
    json rep = run({"eps-sweep", "--gen", "lattice:b=1,lo=-500,hi=500", "--centers", "0,1",
                    "--eps", "0.2,0.1,0.05", "--grid", "64", "--trunc", "500",
                    "--density-ladder", "125,250,500", "--tol", "0.25"});
    auto rows = rep["result"]["rows"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[2]["Beps"].get<double>() >= 1.8);
    CHECK(rows[2]["Aeps"].get<double>() <= 0.2);
    CHECK(rep["result"]["DplusN"].get<double>() == doctest::Approx(2.0).epsilon(0.01));
    CHECK(rep["result"]["pass"].get<bool>());
}

TEST_CASE("group-test and well-dist verdict exit codes") {
    json pass = run({"group-test", "--gen", "lattice:b=1.4142135623730951,lo=0,hi=15000",
                     "--gens", "1", "--random-queries", "5", "--seed", "3", "--r-ladder",
                     "1000,10000", "--target-a", "0.7071067811865475", "--target-b",
                     "0.7071067811865475", "--tol", "0.02"});
    CHECK(pass["result"]["tightPass"].get<bool>());

    CommandResult fail = runCommand({"group-test", "--gen", "lattice:b=1,lo=0,hi=15000",
                                     "--gens", "1", "--query", "0:0.1", "--r-ladder",
                                     "1000,10000", "--target-a", "5", "--target-b", "5"});
    CHECK(fail.exitCode == 1);
    CHECK(json::parse(fail.reportJson)["result"]["Bhat"].get<double>() ==
          doctest::Approx(10.0).epsilon(0.01));

    json wd = run({"well-dist", "--gen", "lattice:b=1.4142135623730951,lo=0,hi=30000",
                   "--mod", "1", "--cell", "0:0.5", "--n-ladder", "100,1000,10000"});
    CHECK(wd["result"]["pass"].get<bool>());
}

TEST_CASE("gen writes a loadable point set and echoes a load report") {
    std::string out = "/tmp/expframe_cli_gen.pts";
    json rep = run({"gen", "modelset", "--p", "0", "--q", "1", "--d", "2", "--wlo", "0",
                    "--whi", "1", "--lo", "0", "--hi", "1000", "--out", out});
    CHECK(rep["result"]["load"]["count"].get<int>() > 300);
    CHECK(rep["result"]["minGap"].get<double>() > 0.5);

    json reload = run({"density", "--input", out, "--ladder", "50,200"});
    CHECK(reload["result"]["Dplus"].get<double>() ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(0.05));
    std::remove(out.c_str());
}

TEST_CASE("dyadic-witness command") {
    json rep = run({"dyadic-witness", "--shifts", "0.5,1.7"});
    CHECK(rep["result"]["verified"].get<bool>());
    CHECK(rep["result"]["steps"].size() == 2);

    json base = run({"dyadic-witness"});
    CHECK(base["result"]["z"].get<double>() == 0.0);
    CHECK(base["result"]["epsMaxApprox"].get<double>() == 1.0);
}

TEST_CASE("bessel-blowup command") {
    json rep = run({"bessel-blowup", "--gen", "lattice:b=1,lo=0,hi=20000", "--nodes",
                    "1,2,3,4,5,6,7,8,9,10", "--r", "100", "--density-ladder",
                    "100,1000,5000"});
    CHECK(rep["result"]["probe"].get<double>() == doctest::Approx(100.0).epsilon(0.05));
    CHECK(rep["result"]["ratio"].get<double>() == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("local-l2-demo thresholds") {
    json conv = run({"local-l2-demo", "--alpha", "0.2", "--jmax", "1000000"});
    CHECK(conv["result"]["classification"] == "CONVERGENT");
    // (1/0.6) * zeta(1.2) = 9.31930, tail-corrected
    CHECK(conv["result"]["limitEstimate"].get<double>() ==
          doctest::Approx(9.3193).epsilon(0.005));
    CHECK(std::abs(conv["result"]["logLogSlope"].get<double>()) <= 0.05);

    json div = run({"local-l2-demo", "--alpha", "0.3", "--jmax", "1000000"});
    CHECK(div["result"]["classification"] == "DIVERGENT");
    CHECK(div["result"]["logLogSlope"].get<double>() == doctest::Approx(0.2).epsilon(0.25));

    json edge = run({"local-l2-demo", "--alpha", "0.25", "--jmax", "1000000"});
    CHECK(edge["result"]["classification"] == "DIVERGENT");
    // S grows like 2 ln J: one decade adds 2 ln 10
    CHECK(edge["result"]["logTrendIncrement"].get<double>() ==
          doctest::Approx(2.0 * std::log(10.0)).epsilon(0.02));

    CommandResult bad = runCommand({"local-l2-demo", "--alpha", "0.7"});
    CHECK(bad.exitCode == 2);
}
