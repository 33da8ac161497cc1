// tools/torusmu_main.cpp
//
// Command line front end. Every subcommand builds an ExperimentConfig from
// its flags (or reads one with `run CONFIG`) and hands it to torusmu::run.
//
//   torusmu sieve --kind moebius --from 1 --to 1000001 --out mu.csv
//   torusmu phase --poly "sqrt2,0,0" --from 0 --count 100
//   torusmu quasi --check tr-lemma --d 4 --r-max 20
//   torusmu quasi --birkhoff --freq 0,1 --alpha sqrt2 --N 1e6
//   torusmu kbsz --poly "sqrt2,0,0" --primes-up-to 50 --N 1e5
//   torusmu short-interval --poly "sqrt2,0,0" --nu moebius --M 1e6 --H 100
//   torusmu block-stat --scheme sqrt --K 595,2795,13045
//   torusmu switched --poly "sqrt2,0,0" --scheme sqrt --align --K 200
//   torusmu selftest
//   torusmu run experiment.cfg --workers 4
//
// Exit codes: 0 pass, 1 usage, 2 fixture mismatch, 3 internal.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "torusmu/errors.hpp"
#include "torusmu/experiment.hpp"

namespace {

using torusmu::ExperimentConfig;
using torusmu::ExperimentKind;

struct RawOptions {
    std::string poly, nu, scheme, check, alpha, freq, M, H, K, config_file;
    std::string from, to, count, N, primes, d, r_max, samples, seed;
    bool birkhoff = false;
    bool align = false;
    bool print_config = false;
};

std::string set_if(const std::string& key, const std::string& value) {
    return value.empty() ? std::string() : key + " = " + value + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"torusmu: polynomial phases, multiplicative functions and skew products"};
    app.require_subcommand(1);

    RawOptions o;
    std::string workers, out, fixture;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--workers", workers, "worker threads (default: available parallelism)");
        sub->add_option("--out", out, "CSV output file (default: stdout)");
        sub->add_option("--fixture", fixture, "compare output against this CSV fixture");
        sub->add_flag("--print-config", o.print_config, "print the resolved config document and exit");
    };

    auto* sieve = app.add_subcommand("sieve", "values of a multiplicative function on [from, to)");
    sieve->add_option("--kind,--nu", o.nu, "moebius | liouville | archimedean:T | random:SEED | custom:FILE");
    sieve->add_option("--from", o.from, "first n (>= 1)");
    sieve->add_option("--to", o.to, "one past the last n");

    auto* phase = app.add_subcommand("phase", "e^{2 pi i P(n)} from the exact torus orbit");
    phase->add_option("--poly", o.poly, "coefficients c_d,...,c_0");
    phase->add_option("--from", o.from, "first n (>= 0)");
    phase->add_option("--count", o.count, "number of terms");

    auto* quasi = app.add_subcommand("quasi", "quasi-eigenfunction checks");
    quasi->add_option("--check", o.check, "tr-lemma");
    quasi->add_flag("--birkhoff", o.birkhoff, "Birkhoff average of a character");
    quasi->add_option("--d", o.d, "largest torus dimension for tr-lemma");
    quasi->add_option("--r-max", o.r_max, "largest power r");
    quasi->add_option("--samples", o.samples, "characters per dimension");
    quasi->add_option("--seed", o.seed, "random seed");
    quasi->add_option("--freq", o.freq, "character frequency m1,...,md");
    quasi->add_option("--alpha", o.alpha, "rotation token (sqrt2, phi, pi-frac, decimal, a/b)");
    quasi->add_option("--N", o.N, "orbit length");

    auto* kbsz = app.add_subcommand("kbsz", "prime-pair correlations (1/N) sum a_{rn} conj(a_{sn})");
    kbsz->add_option("--poly", o.poly, "coefficients c_d,...,c_0");
    kbsz->add_option("--primes-up-to", o.primes, "use all primes up to this bound");
    kbsz->add_option("--N", o.N, "number of terms");

    auto* shorti = app.add_subcommand("short-interval", "two-scale short interval statistic");
    shorti->add_option("--poly", o.poly, "coefficients c_d,...,c_0");
    shorti->add_option("--nu", o.nu, "multiplicative function");
    shorti->add_option("--M", o.M, "comma separated M values");
    shorti->add_option("--H", o.H, "comma separated H values (default floor(M^(1/3)))");

    auto* block = app.add_subcommand("block-stat", "block-weighted statistic");
    block->add_option("--poly", o.poly, "coefficients c_d,...,c_0");
    block->add_option("--nu", o.nu, "multiplicative function");
    block->add_option("--scheme", o.scheme, "sqrt | log2 | pow:THETA[:OFFSET] | list:b1,b2,...");
    block->add_option("--K", o.K, "comma separated block counts");

    auto* switched = app.add_subcommand("switched", "per-block sums along a switched orbit");
    switched->add_option("--poly", o.poly, "coefficients c_d,...,c_0");
    switched->add_option("--nu", o.nu, "multiplicative function");
    switched->add_option("--scheme", o.scheme, "block scheme");
    switched->add_flag("--align", o.align, "rotate every block sum onto the positive reals");
    switched->add_option("--K", o.K, "number of blocks");

    auto* selftest = app.add_subcommand("selftest", "quick internal consistency checks");

    auto* runcmd = app.add_subcommand("run", "execute a config document");
    runcmd->add_option("config", o.config_file, "config file")->required();

    for (auto* sub : {sieve, phase, quasi, kbsz, shorti, block, switched, selftest, runcmd}) common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : torusmu::kExitUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    std::string doc;
    if (chosen == runcmd) {
        std::ifstream in(o.config_file);
        if (!in) {
            std::cerr << "cannot open config '" << o.config_file << "'\n";
            return torusmu::kExitUsage;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        doc = buf.str();
    } else {
        std::string kind = chosen->get_name();
        if (chosen == quasi && o.birkhoff) o.check = "birkhoff";
        doc = "experiment = " + kind + "\n";
        doc += set_if("poly", o.poly) + set_if("nu", o.nu) + set_if("from", o.from) + set_if("to", o.to) +
               set_if("count", o.count) + set_if("N", o.N) + set_if("M", o.M) + set_if("H", o.H) +
               set_if("K", o.K) + set_if("scheme", o.scheme) + set_if("primes_up_to", o.primes) +
               set_if("check", o.check) + set_if("d", o.d) + set_if("r_max", o.r_max) +
               set_if("samples", o.samples) + set_if("seed", o.seed) + set_if("freq", o.freq) +
               set_if("alpha", o.alpha) + (o.align ? "align = true\n" : "");
    }

    ExperimentConfig config;
    try {
        config = torusmu::parse_config(doc);
        // Command line overrides for the run-time keys.
        if (!workers.empty()) {
            ExperimentConfig probe = torusmu::parse_config("experiment = selftest\nworkers = " + workers + "\n");
            config.workers = probe.workers;
        }
        if (!out.empty()) config.out = out;
        if (!fixture.empty()) config.fixture = fixture;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return torusmu::kExitUsage;
    }

    if (o.print_config) {
        std::cout << torusmu::to_text(config);
        return torusmu::kExitPass;
    }

    torusmu::ExitReport report = torusmu::run(config);
    if (config.out.empty() && !report.csv.empty()) std::cout << report.csv;
    for (const auto& d : report.diffs) std::cerr << d << '\n';
    std::cerr << report.message << '\n';
    return report.status;
}
