// tests/test_experiment.cpp
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "torusmu/errors.hpp"
#include "torusmu/experiment.hpp"

using namespace torusmu;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("torusmu_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

int cli(const std::string& args) {
    std::string cmd = std::string(TORUSMU_CLI) + " " + args;
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string after_first_line(const std::string& csv) { return csv.substr(csv.find('\n') + 1); }

}  // namespace

TEST_CASE("config documents round trip") {
    auto c = parse_config("# demo\nexperiment = short-interval\n  M = 1000, 2000 \nH=5,6\nnu = random:7\nworkers = 3\n");
    CHECK(c.kind == ExperimentKind::ShortInterval);
    CHECK(c.M == std::vector<std::int64_t>{1000, 2000});
    CHECK(c.H == std::vector<std::int64_t>{5, 6});
    CHECK(c.workers == 3u);
    CHECK(c.poly == "sqrt2,0,0");
    CHECK(parse_config(to_text(c)) == c);
    CHECK(parse_config("experiment = selftest") == ExperimentConfig{});
}

TEST_CASE("config errors name the line and key") {
    try {
        parse_config("experiment = sieve\nspeed = 3\n");
        FAIL("no error");
    } catch (const ConfigError& e) {
        std::string what = e.what();
        CHECK(what.find("line 2") != std::string::npos);
        CHECK(what.find("speed") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("experiment = sieve\nfrom = 1\nfrom = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("from = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = teleport\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = sieve\nfrom = x\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment sieve\n"), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("experiment = kbsz\nprimes_up_to = 2\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("experiment = sieve\nnu = wobbly\n")), ConfigError);
}

TEST_CASE("config hash ignores workers and paths only") {
    auto a = parse_config("experiment = block-stat\nK = 10\n");
    auto b = a;
    b.workers = 7;
    b.out = "x.csv";
    b.fixture = "y.csv";
    CHECK(config_hash(a) == config_hash(b));
    b.K = {11};
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("csv comparison") {
    std::string a = "# x\nM,H,S\n1,2,0.5\n";
    CHECK(compare_csv(a, "# other\nM,H,S\n1,2,0.5000000001\n", 1e-9).empty());
    CHECK(compare_csv(a, "M,H,S\n1,2,0.51\n", 1e-9).size() == 1);
    CHECK_FALSE(compare_csv(a, "M,H,T\n1,2,0.5\n", 1e-9).empty());
    CHECK_FALSE(compare_csv(a, "M,H,S\n1,2,0.5\n1,2,0.5\n", 1e-9).empty());
    CHECK(fixture_tolerance(ExperimentKind::Sieve) == 0.0);
    CHECK(fixture_tolerance(ExperimentKind::ShortInterval) == 1e-9);
}

TEST_CASE("run reports usage errors and fixture results") {
    TempDir tmp;
    auto c = parse_config("experiment = short-interval\nM = 1000,10000\n");
    auto first = run(c);
    REQUIRE(first.status == kExitPass);
    spit(tmp.path / "self.csv", first.csv);
    c.fixture = (tmp.path / "self.csv").string();
    CHECK(run(c).status == kExitPass);

    std::string tampered = first.csv;
    tampered.replace(tampered.rfind(",0.") + 3, 1, "9");
    spit(tmp.path / "bad.csv", tampered);
    c.fixture = (tmp.path / "bad.csv").string();
    auto bad = run(c);
    CHECK(bad.status == kExitMismatch);
    CHECK(bad.diffs.size() == 1);

    c.fixture = (tmp.path / "missing.csv").string();
    CHECK(run(c).status == kExitUsage);
    CHECK(run(parse_config("experiment = kbsz\nprimes_up_to = 1\n")).status == kExitUsage);
    CHECK(run(parse_config("experiment = short-interval\nM = 10\nH = 11\n")).status == kExitUsage);
}

TEST_CASE("cli exit codes") {
    TempDir tmp;
    CHECK(cli("selftest --workers 2 > /dev/null 2>&1") == 0);
    CHECK(cli("kbsz --primes-up-to 2 > /dev/null 2>&1") == 1);
    CHECK(cli("no-such-command > /dev/null 2>&1") == 1);
    CHECK(cli("sieve --from 0 --to 5 > /dev/null 2>&1") == 1);
    spit(tmp.path / "fx.csv", "M,H,S\n1000,10,0.5\n");
    CHECK(cli("short-interval --M 1000 --fixture " + (tmp.path / "fx.csv").string() + " > /dev/null 2>&1") == 2);
    CHECK(cli("run " + (tmp.path / "absent.cfg").string() + " > /dev/null 2>&1") == 1);
}

TEST_CASE("cli writes --out and honours the fixture directory") {
    TempDir tmp;
    auto out = tmp.path / "si.csv";
    REQUIRE(cli("short-interval --M 10000 --out " + out.string() + " 2>/dev/null") == 0);
    CHECK(after_first_line(slurp(out)) == "M,H,S\n10000,21,0.15159482852931816\n");
    std::string env = "TORUSMU_FIXTURE_DIR=" + std::string(TORUSMU_FIXTURES) + " ";
    std::string cmd = env + TORUSMU_CLI + " run " + TORUSMU_FIXTURES + "/block_stat_decay.cfg --workers 2 > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    spit(tmp.path / "run.cfg", "experiment = switched\nK = 5\nalign = true\n");
    auto run_out = tmp.path / "run.csv";
    REQUIRE(cli("run " + (tmp.path / "run.cfg").string() + " --out " + run_out.string() + " 2>/dev/null") == 0);
    CHECK(slurp(run_out).starts_with("# torusmu switched config_hash="));
}

TEST_CASE("sieve csv over [1, 1e6) equals the trial-division reference") {
    TempDir tmp;
    auto out = tmp.path / "mu.csv";
    REQUIRE(cli("sieve --kind moebius --from 1 --to 1000000 --workers 2 --out " + out.string() + " 2>/dev/null") == 0);
    std::string expected = "n,value\n";
    expected.reserve(12'000'000);
    for (std::int64_t n = 1; n < 1'000'000; ++n)
        expected += std::to_string(n) + ',' + std::to_string(oracle::moebius(n)) + '\n';
    std::string actual = slurp(out);
    auto c = parse_config("experiment = sieve\nfrom = 1\nto = 1000000\n");
    std::ostringstream head;
    head << "# torusmu sieve config_hash=" << std::hex;
    head.width(16);
    head.fill('0');
    head << config_hash(c) << '\n';
    CHECK(actual.substr(0, actual.find('\n') + 1) == head.str());
    CHECK(after_first_line(actual) == expected);
}
