#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyostat/simulate.hpp"

using nlohmann::json;

namespace {

std::string g_cli;

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args, bool merge_stderr = false) {
    std::string cmd = g_cli + " " + args;
    cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
    int st = pclose(p);
    RunResult r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.out = std::move(out);
    return r;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

void check_close(double got, double want, double tol) {
    CHECK(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)));
}

}  // namespace

TEST_CASE("constants report") {
    auto r = run("constants dcc --format json");
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["family"] == "dcc");
    check_close(j["rho"].get<double>(), 0.3819660113, 1e-6);
    check_close(j["mu4"].get<double>(), 1.736656315, 1e-6);
    check_close(j["sigma4_sq"].get<double>(), 0.6082631123, 1e-6);
    CHECK(j["gf_supported"].get<bool>());

    auto csv = run("constants dcc --format csv");
    REQUIRE(csv.code == 0);
    auto ls = lines_of(csv.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0].rfind("family,rho,mu1,", 0) == 0);
    CHECK(ls[1].rfind("dcc,0.38196601125", 0) == 0);
}

TEST_CASE("constants schema is identical across families") {
    std::set<std::string> base;
    for (const char* fam : {"dcc", "cc", "dc", "st", "es", "wa"}) {
        auto r = run(std::string("constants ") + fam);
        REQUIRE(r.code == 0);
        auto j = json::parse(r.out);
        std::set<std::string> keys;
        for (auto it = j.begin(); it != j.end(); ++it) keys.insert(it.key());
        if (base.empty())
            base = keys;
        else
            CHECK(base == keys);
        bool gf = j["gf_supported"].get<bool>();
        std::string f = fam;
        CHECK(gf == (f == "dcc" || f == "cc" || f == "st" || f == "wa"));
    }
}

TEST_CASE("usage errors exit with 2") {
    auto r = run("constants xx", true);
    CHECK(r.code == 2);
    CHECK(r.out.find("dcc") != std::string::npos);
    CHECK(run("", true).code == 2);
    CHECK(run("constants", true).code == 2);
    CHECK(run("constants dcc --format yaml", true).code == 2);
}

TEST_CASE("enumerate totals") {
    auto r = run("enumerate wa --n-max 10 --format csv");
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 11);
    CHECK(ls[0] == "n,total");
    long long want = 1;
    for (int n = 1; n <= 10; ++n) {
        CHECK(ls[n] == std::to_string(n) + "," + std::to_string(want));
        want *= 2;
    }

    auto j = json::parse(run("enumerate dcc --n-max 25").out);
    CHECK(j["totals"].size() == 25);
    CHECK(j["totals"][3].get<long long>() == 13);
    check_close(j["growth_estimate"].get<double>(), 0.38196601125, 1e-3);

    // over the hard cap: computational error, not usage
    CHECK(run("enumerate dcc --n-max 61", true).code == 1);
}

TEST_CASE("enumerate histograms") {
    auto j = json::parse(run("enumerate es --n-max 10 --histogram").out);
    CHECK(j["total"].get<double>() == 222.0);

    auto h = json::parse(run("enumerate es --n-max 6 --histogram").out);
    CHECK(h["total"].get<double>() == 23.0);
    CHECK(h["histogram"]["10"].get<long long>() == 2);
    CHECK(h["histogram"]["12"].get<long long>() == 7);
    CHECK(h["histogram"]["14"].get<long long>() == 14);

    auto r = run("enumerate wa --n-max 6 --histogram --format csv");
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "n,perimeter,count");
    CHECK(ls[1] == "6,10,2");
    CHECK(ls[2] == "6,12,9");
    CHECK(ls[3] == "6,14,21");
}

TEST_CASE("generating-function cross-check") {
    auto r = run("gf-check st");
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["within_tolerance"].get<bool>());
    CHECK(j["mu4_dev"].get<double>() < 1e-5);
    CHECK(j["sigma4_sq_dev"].get<double>() < 1e-5);

    auto dc = run("gf-check dc", true);
    CHECK(dc.code == 1);
    CHECK(dc.out.find("supported: dcc cc st wa") != std::string::npos);
    CHECK(run("gf-check es", true).code == 1);
}

TEST_CASE("trajectory stream output") {
    auto r = run("simulate dcc --m 50");
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 52);
    CHECK(ls[0] == "# generator=splitmix64-ctr-v1 family=dcc m=50 seed=1");
    CHECK(ls[1] == "step,x,X,T,Q");
    polyostat::TrajectoryStream ts(polyostat::FamilyId::dcc, 1);
    for (int d = 0; d < 50; ++d) {
        auto row = ts.next();
        std::ostringstream want;
        want << row.step << ',' << row.x << ',' << row.X << ',' << row.T
             << ',' << row.Q;
        CHECK(ls[2 + d] == want.str());
    }
    // trajectories have no json form
    CHECK(run("simulate dcc --m 50 --format json", true).code == 2);
}

TEST_CASE("simulation report") {
    auto r = run("simulate dcc --m 100 --trials 8 --seed 3");
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["generator"] == "splitmix64-ctr-v1");
    CHECK(j["m"].get<int>() == 100);
    CHECK(j["trials"].get<int>() == 8);
    CHECK(j["seed"].get<std::uint64_t>() == 3);
    CHECK_FALSE(j["variance_skipped"].get<bool>());
    auto rep = polyostat::gaussian_check(polyostat::FamilyId::dcc, 100, 8, 3);
    check_close(j["z_mu2"].get<double>(), rep.z_mu2, 1e-9);
    check_close(j["z_mu4s"].get<double>(), rep.z_mu4s, 1e-9);
    check_close(j["ks"].get<double>(), rep.ks, 1e-9);

    auto one = json::parse(run("simulate st --m 60 --trials 1").out);
    CHECK(one["variance_skipped"].get<bool>());
    CHECK(one["z_var2"].get<double>() == 0.0);
}

TEST_CASE("local limit residual") {
    auto j = json::parse(run("llt wa --n-max 30").out);
    CHECK(j["residual"].get<double>() < 0.08);

    auto r = run("llt dcc --n-max 12 --format csv");
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 10);
    CHECK(ls[0] == "n,residual");
    CHECK(ls[1].rfind("4,", 0) == 0);
    CHECK(ls[9].rfind("12,", 0) == 0);
}

TEST_CASE("chain diagnostics") {
    auto j = json::parse(run("chain-check dcc").out);
    CHECK(j["k_max"].get<int>() == 80);
    CHECK(j["reversibility_residual"].get<double>() < 1e-10);
    CHECK(j["row_residual"].get<double>() < 1e-8);
    check_close(j["stationary_mean"].get<double>(), 2.2360679775, 1e-9);

    auto k40 = json::parse(run("chain-check dcc --k-max 40").out);
    CHECK(k40["k_max"].get<int>() == 40);
    CHECK(k40["row_residual"].get<double>() < 1e-8);

    auto r = run("chain-check wa --format csv");
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    CHECK(ls[0] == "k,j,p");
    bool found = false;
    for (const auto& l : ls)
        if (l == "5,3,0.125") found = true;
    CHECK(found);
}

TEST_CASE("seeded runs are byte identical") {
    for (const char* cmd :
         {"constants es", "simulate cc --m 200 --trials 5 --seed 9",
          "simulate cc --m 120", "enumerate st --n-max 12 --format csv"}) {
        auto a = run(cmd);
        auto b = run(cmd);
        REQUIRE(a.code == 0);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("file output matches stdout") {
    std::string path = "/tmp/polyostat_cli_out_test.json";
    auto direct = run("constants cc");
    auto filed = run("constants cc --out " + path);
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == direct.out);
    std::remove(path.c_str());
}

TEST_CASE("double precision profile stays close") {
    auto ext = json::parse(run("constants dcc").out);
    std::string cmd = "env POLYOSTAT_PRECISION=double " + g_cli +
                      " constants dcc 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
    pclose(p);
    auto dbl = json::parse(out);
    check_close(dbl["rho"].get<double>(), ext["rho"].get<double>(), 1e-10);
    check_close(dbl["mu4"].get<double>(), ext["mu4"].get<double>(), 1e-8);
}

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (!a.empty() && a[0] != '-') g_cli = a;
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli <path-to-polyostat-binary>\n");
        return 1;
    }
    doctest::Context ctx;
    return ctx.run();
}
