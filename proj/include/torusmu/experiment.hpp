// include/torusmu/experiment.hpp
//
// Experiment runner: a strict key = value configuration, one CSV per run,
// and optional comparison against a regression fixture.
//
// Config document example:
//
//   # comments start with '#'
//   experiment = short-interval
//   poly = sqrt2,0,0
//   nu = moebius
//   M = 10000,100000
//
// Unknown or repeated keys are errors. Every CSV starts with a comment line
// carrying a hash of the configuration (worker count and file paths are
// excluded, since they do not change the output).
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "torusmu/arith.hpp"

namespace torusmu {

enum class ExperimentKind { Sieve, Phase, Quasi, Kbsz, ShortInterval, BlockStat, Switched, Selftest };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_kind(std::string_view name);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Selftest;
    std::string poly = "sqrt2,0,0";
    /// moebius | liouville | archimedean:T | random:SEED | custom:FILE
    std::string nu = "moebius";
    std::int64_t from = 1;
    std::int64_t to = 1001;
    std::int64_t count = 16;
    std::int64_t N = 100000;
    std::vector<std::int64_t> M{1000000};
    /// Empty means H = ⌊M^{1/3}⌋ for every M.
    std::vector<std::int64_t> H;
    std::vector<std::int64_t> K{1000};
    std::string scheme = "sqrt";
    std::int64_t primes_up_to = 50;
    /// quasi mode: tr-lemma | birkhoff
    std::string check = "tr-lemma";
    int d = 4;
    std::int64_t r_max = 20;
    std::int64_t samples = 1000;
    std::uint64_t seed = 1;
    std::vector<std::int64_t> freq{0, 1};
    std::string alpha = "sqrt2";
    bool align = false;
    /// 0 selects the available hardware parallelism.
    unsigned workers = 0;
    std::string out;
    std::string fixture;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses a config document. Errors (ConfigError) name the line and key.
ExperimentConfig parse_config(std::string_view text);

/// Canonical document; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& config);

/// FNV-1a over the canonical text of the keys that determine the output.
std::uint64_t config_hash(const ExperimentConfig& config);

/// Throws ConfigError when the config is inconsistent or out of range.
void validate(const ExperimentConfig& config);

/// Builds the multiplicative spec named by a `nu` value.
MultiplicativeSpec parse_nu(std::string_view text);

/// CSV text of the experiment (comment line, header, rows).
std::string render(const ExperimentConfig& config);

enum ExitStatus : int { kExitPass = 0, kExitUsage = 1, kExitMismatch = 2, kExitInternal = 3 };

struct ExitReport {
    int status = kExitPass;
    std::string message;
    std::vector<std::string> diffs;
    std::string csv;
};

/// Field-wise comparison of two CSV documents (comment lines skipped);
/// numeric fields may differ by at most `tol`.
std::vector<std::string> compare_csv(std::string_view actual, std::string_view expected, double tol);

/// Tolerance used for fixture comparison of each experiment kind.
double fixture_tolerance(ExperimentKind kind);

/// Renders, writes the CSV to config.out (if set) and compares against the
/// fixture (if set). A relative fixture path is resolved against
/// $TORUSMU_FIXTURE_DIR when that variable is set. Never throws.
ExitReport run(const ExperimentConfig& config);

}  // namespace torusmu
