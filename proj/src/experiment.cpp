// src/experiment.cpp
#include "torusmu/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "torusmu/errors.hpp"
#include "torusmu/models.hpp"
#include "torusmu/quasi.hpp"
#include "torusmu/reduce.hpp"
#include "torusmu/stats.hpp"
#include "torusmu/torus.hpp"

namespace torusmu {

namespace {

constexpr std::int64_t kMaxRange = std::int64_t{1} << 62;
constexpr std::int64_t kMaxRows = 100'000'000;

const std::vector<std::pair<ExperimentKind, std::string_view>> kKindNames = {
    {ExperimentKind::Sieve, "sieve"},
    {ExperimentKind::Phase, "phase"},
    {ExperimentKind::Quasi, "quasi"},
    {ExperimentKind::Kbsz, "kbsz"},
    {ExperimentKind::ShortInterval, "short-interval"},
    {ExperimentKind::BlockStat, "block-stat"},
    {ExperimentKind::Switched, "switched"},
    {ExperimentKind::Selftest, "selftest"},
};

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::int64_t parse_int(std::string_view text, std::string_view key) {
    std::string s = trim(text);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
    // Scientific shorthand such as 1e6, accepted only when exactly integral.
    char* end = nullptr;
    double d = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size() && std::isfinite(d) && d == std::floor(d) &&
        std::fabs(d) <= 9007199254740992.0)
        return static_cast<std::int64_t>(d);
    throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" + s + "'");
}

std::vector<std::int64_t> parse_int_list(std::string_view text, std::string_view key) {
    std::vector<std::int64_t> out;
    std::string s = trim(text);
    if (s.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        auto comma = s.find(',', start);
        out.push_back(parse_int(std::string_view(s).substr(start, comma - start), key));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_bool(std::string_view text, std::string_view key) {
    std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("key '" + std::string(key) + "': expected true or false, got '" + s + "'");
}

std::string join(const std::vector<std::int64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

/// Shortest round-trip decimal form; identical on every run.
std::string fmt(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct Field {
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
    bool affects_output = true;
};

const std::vector<std::pair<std::string_view, Field>>& fields() {
    static const std::vector<std::pair<std::string_view, Field>> table = [] {
        std::vector<std::pair<std::string_view, Field>> t;
        auto str = [&](std::string_view key, std::string ExperimentConfig::*member, bool affects = true) {
            t.push_back({key,
                         {[member](ExperimentConfig& c, std::string_view v) { c.*member = trim(v); },
                          [member](const ExperimentConfig& c) { return c.*member; }, affects}});
        };
        auto i64 = [&](std::string_view key, std::int64_t ExperimentConfig::*member) {
            t.push_back({key,
                         {[member, key](ExperimentConfig& c, std::string_view v) { c.*member = parse_int(v, key); },
                          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }}});
        };
        auto list = [&](std::string_view key, std::vector<std::int64_t> ExperimentConfig::*member) {
            t.push_back({key,
                         {[member, key](ExperimentConfig& c, std::string_view v) { c.*member = parse_int_list(v, key); },
                          [member](const ExperimentConfig& c) { return join(c.*member); }}});
        };
        t.push_back({"experiment",
                     {[](ExperimentConfig& c, std::string_view v) { c.kind = parse_kind(trim(v)); },
                      [](const ExperimentConfig& c) { return std::string(to_string(c.kind)); }}});
        str("poly", &ExperimentConfig::poly);
        str("nu", &ExperimentConfig::nu);
        i64("from", &ExperimentConfig::from);
        i64("to", &ExperimentConfig::to);
        i64("count", &ExperimentConfig::count);
        i64("N", &ExperimentConfig::N);
        list("M", &ExperimentConfig::M);
        list("H", &ExperimentConfig::H);
        list("K", &ExperimentConfig::K);
        str("scheme", &ExperimentConfig::scheme);
        i64("primes_up_to", &ExperimentConfig::primes_up_to);
        str("check", &ExperimentConfig::check);
        t.push_back({"d",
                     {[](ExperimentConfig& c, std::string_view v) {
                          std::int64_t d = parse_int(v, "d");
                          if (d < 0 || d > 1000) throw ConfigError("key 'd': out of range");
                          c.d = static_cast<int>(d);
                      },
                      [](const ExperimentConfig& c) { return std::to_string(c.d); }}});
        i64("r_max", &ExperimentConfig::r_max);
        i64("samples", &ExperimentConfig::samples);
        t.push_back({"seed",
                     {[](ExperimentConfig& c, std::string_view v) {
                          std::int64_t s = parse_int(v, "seed");
                          if (s < 0) throw ConfigError("key 'seed': must be >= 0");
                          c.seed = static_cast<std::uint64_t>(s);
                      },
                      [](const ExperimentConfig& c) { return std::to_string(c.seed); }}});
        list("freq", &ExperimentConfig::freq);
        str("alpha", &ExperimentConfig::alpha);
        t.push_back({"align",
                     {[](ExperimentConfig& c, std::string_view v) { c.align = parse_bool(v, "align"); },
                      [](const ExperimentConfig& c) { return std::string(c.align ? "true" : "false"); }}});
        t.push_back({"workers",
                     {[](ExperimentConfig& c, std::string_view v) {
                          std::int64_t w = parse_int(v, "workers");
                          if (w < 0 || w > 1024) throw ConfigError("key 'workers': must be in [0, 1024]");
                          c.workers = static_cast<unsigned>(w);
                      },
                      [](const ExperimentConfig& c) { return std::to_string(c.workers); }, false}});
        str("out", &ExperimentConfig::out, false);
        str("fixture", &ExperimentConfig::fixture, false);
        return t;
    }();
    return table;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// ---------------------------------------------------------------------------
// experiments

struct Csv {
    std::string text;
    void line(std::string_view s) {
        text += s;
        text += '\n';
    }
};

std::string header_comment(const ExperimentConfig& c) {
    return "# torusmu " + std::string(to_string(c.kind)) + " config_hash=" + hex64(config_hash(c));
}

unsigned workers_of(const ExperimentConfig& c) { return c.workers == 0 ? default_workers() : c.workers; }

std::string render_sieve(const ExperimentConfig& c, unsigned workers) {
    auto len = static_cast<std::uint64_t>(c.to - c.from);
    MultiplicativeSpec nu = parse_nu(c.nu);
    bool integer_output = nu.kind() == MultiplicativeSpec::Kind::Moebius;
    constexpr std::uint64_t kSegment = std::uint64_t{1} << 16;
    std::size_t units = (len + kSegment - 1) / kSegment;
    std::vector<std::string> parts(units);
    parallel_units(units, workers, [&](std::size_t u) {
        std::int64_t lo = c.from + static_cast<std::int64_t>(u * kSegment);
        std::int64_t hi = std::min<std::int64_t>(c.to, lo + static_cast<std::int64_t>(kSegment));
        std::string& s = parts[u];
        if (integer_output) {
            MoebiusSegment seg = sieve_moebius(lo, hi);
            for (std::int64_t n = lo; n < hi; ++n)
                s += std::to_string(n) + ',' + std::to_string(static_cast<int>(seg.at(n))) + '\n';
        } else {
            ValueSegment seg = eval_multiplicative(nu, lo, hi);
            for (std::int64_t n = lo; n < hi; ++n)
                s += std::to_string(n) + ',' + fmt(seg.at(n).real()) + ',' + fmt(seg.at(n).imag()) + '\n';
        }
    });
    std::string out = header_comment(c) + '\n' + (integer_output ? "n,value\n" : "n,value_re,value_im\n");
    for (auto& p : parts) out += p;
    return out;
}

std::string render_phase(const ExperimentConfig& c) {
    auto [map, start] = poly_to_initial(PolySpec::parse(c.poly));
    Csv csv;
    csv.line(header_comment(c));
    csv.line("n,phase_re,phase_im");
    PhaseStream stream(map, start, c.from, c.count);
    while (stream.has_next()) {
        std::int64_t n = stream.index();
        auto z = stream.next();
        csv.line(std::to_string(n) + ',' + fmt(z.real()) + ',' + fmt(z.imag()));
    }
    return csv.text;
}

/// Random characters for the lemma grid: the unit vectors first, then
/// entries uniform in [-1000, 1000].
std::vector<QuasiEig> sample_characters(int d, std::int64_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(d) * 0x9e3779b97f4a7c15ULL);
    std::vector<QuasiEig> out;
    for (int i = 0; i < d && static_cast<std::int64_t>(out.size()) < samples; ++i) {
        QuasiEig f{std::vector<std::int64_t>(static_cast<std::size_t>(d), 0), Frac64(rng())};
        f.m[static_cast<std::size_t>(i)] = 1;
        out.push_back(f);
    }
    while (static_cast<std::int64_t>(out.size()) < samples) {
        QuasiEig f{std::vector<std::int64_t>(static_cast<std::size_t>(d)), Frac64(rng())};
        for (auto& v : f.m) v = static_cast<std::int64_t>(rng() % 2001) - 1000;
        out.push_back(f);
    }
    return out;
}

std::string render_quasi(const ExperimentConfig& c, unsigned workers) {
    Csv csv;
    csv.line(header_comment(c));
    if (c.check == "tr-lemma") {
        csv.line("d,r,characters,verdict");
        Frac64 alpha = resolve_frac64(c.alpha);
        for (int d = 1; d <= c.d; ++d) {
            AffineSkewMap map(d, alpha);
            auto chars = sample_characters(d, c.samples, c.seed);
            for (std::int64_t r = 1; r <= c.r_max; ++r) {
                bool ok = std::all_of(chars.begin(), chars.end(), [&](const QuasiEig& f) {
                    return check_tr_lemma(map, f, static_cast<std::uint64_t>(r), d);
                });
                csv.line(std::to_string(d) + ',' + std::to_string(r) + ',' + std::to_string(chars.size()) + ',' +
                         (ok ? "true" : "false"));
            }
        }
    } else {
        csv.line("d,N,re,im,abs");
        int d = static_cast<int>(c.freq.size());
        AffineSkewMap map(d, resolve_frac64(c.alpha));
        QuasiEig f{c.freq, Frac64(0)};
        auto z = birkhoff_average(map, f, TorusPoint(d), c.N, workers);
        csv.line(std::to_string(d) + ',' + std::to_string(c.N) + ',' + fmt(z.real()) + ',' + fmt(z.imag()) + ',' +
                 fmt(std::abs(z)));
    }
    return csv.text;
}

std::string render_kbsz(const ExperimentConfig& c, unsigned workers) {
    Orbit orbit = make_orbit(PolySpec::parse(c.poly));
    auto primes = primes_up_to(static_cast<std::uint64_t>(c.primes_up_to));
    Csv csv;
    csv.line(header_comment(c));
    csv.line("r,s,re,im,abs");
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (std::size_t j = i + 1; j < primes.size(); ++j) {
            auto r = static_cast<std::int64_t>(primes[i]);
            auto s = static_cast<std::int64_t>(primes[j]);
            auto z = kbsz_correlation(orbit, r, s, c.N, workers);
            csv.line(std::to_string(r) + ',' + std::to_string(s) + ',' + fmt(z.real()) + ',' + fmt(z.imag()) + ',' +
                     fmt(std::abs(z)));
        }
    }
    return csv.text;
}

std::string render_short_interval(const ExperimentConfig& c, unsigned workers) {
    Orbit orbit = make_orbit(PolySpec::parse(c.poly));
    Csv csv;
    csv.line(header_comment(c));
    csv.line("M,H,S");
    for (std::size_t i = 0; i < c.M.size(); ++i) {
        std::int64_t M = c.M[i];
        std::int64_t H = c.H.empty() ? icbrt(M) : c.H[i];
        MultiplicativeSpec nu = parse_nu(c.nu);
        double S = short_interval_stat(orbit, nu, M, H, {workers});
        csv.line(std::to_string(M) + ',' + std::to_string(H) + ',' + fmt(S));
    }
    return csv.text;
}

/// Rule-based schemes are generated far enough for `blocks` complete blocks.
BlockScheme scheme_for(const ExperimentConfig& c, std::int64_t blocks) {
    std::int64_t until = 1024;
    for (;;) {
        BlockScheme s = BlockScheme::parse(c.scheme, until);
        if (s.block_count() >= blocks || c.scheme.starts_with("list:")) return s;
        until *= 4;
        if (until > kMaxRange / 4) throw ConfigError("block scheme cannot reach K=" + std::to_string(blocks));
    }
}

std::string render_block_stat(const ExperimentConfig& c, unsigned workers) {
    Orbit orbit = make_orbit(PolySpec::parse(c.poly));
    BlockScheme scheme = scheme_for(c, *std::max_element(c.K.begin(), c.K.end()));
    MultiplicativeSpec nu = parse_nu(c.nu);
    Csv csv;
    csv.line(header_comment(c));
    csv.line("K,W");
    for (std::int64_t K : c.K)
        csv.line(std::to_string(K) + ',' + fmt(weighted_block_stat(orbit, nu, scheme, K, workers)));
    return csv.text;
}

std::string render_switched(const ExperimentConfig& c, unsigned workers) {
    auto [map, base] = poly_to_initial(PolySpec::parse(c.poly));
    std::int64_t K = c.K.front();
    BlockScheme scheme = scheme_for(c, K);
    MultiplicativeSpec nu = parse_nu(c.nu);
    std::vector<TorusPoint> seeds = c.align ? aligned_seeds(map, base, scheme, nu, K, workers)
                                            : std::vector<TorusPoint>(static_cast<std::size_t>(K), base);
    SwitchedOrbit orbit(map, scheme, std::move(seeds));
    auto sums = block_sums(orbit, nu, scheme, K, workers);
    Csv csv;
    csv.line(header_comment(c));
    csv.line("k,b_k,b_k1,blocksum_re,blocksum_im,abs");
    for (std::int64_t k = 1; k <= K; ++k) {
        auto z = sums[static_cast<std::size_t>(k - 1)];
        csv.line(std::to_string(k) + ',' + std::to_string(scheme.b(k)) + ',' + std::to_string(scheme.b(k + 1)) + ',' +
                 fmt(z.real()) + ',' + fmt(z.imag()) + ',' + fmt(std::abs(z)));
    }
    return csv.text;
}

int trial_moebius(std::int64_t n) {
    int sign = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    return n > 1 ? -sign : sign;
}

std::string render_selftest(const ExperimentConfig& c, unsigned workers) {
    std::vector<std::pair<std::string, bool>> checks;
    {
        auto seg = sieve_moebius(1, 5000);
        bool ok = true;
        for (std::int64_t n = 1; n < 5000; ++n) ok = ok && seg.at(n) == trial_moebius(n);
        checks.emplace_back("sieve-vs-trial-division", ok);
    }
    {
        AffineSkewMap map(4, Frac64(0x9e3779b97f4a7c15ULL));
        TorusPoint p{Frac64(1), Frac64(0x1234), Frac64(0xdeadbeef), Frac64(0xfedcba9876543210ULL)};
        PhaseStream stream(map, p, 0, 5000);
        bool ok = true;
        for (std::uint64_t n = 0; stream.has_next(); ++n) ok = ok && stream.next_state() == binomial_eval(map, p, n);
        checks.emplace_back("stream-vs-binomial", ok);
    }
    {
        bool ok = true;
        for (int d = 1; d <= 3; ++d) {
            AffineSkewMap map(d, resolve_frac64("sqrt2"));
            for (const auto& f : sample_characters(d, 50, c.seed))
                for (std::uint64_t r = 1; r <= 6; ++r) ok = ok && check_tr_lemma(map, f, r, d);
        }
        checks.emplace_back("tr-lemma", ok);
    }
    {
        Orbit orbit = make_orbit(PolySpec::parse("sqrt2,0,0"));
        auto nu = MultiplicativeSpec::moebius();
        double a = short_interval_stat(orbit, nu, 3000, 17, {workers, 100});
        double b = short_interval_stat(orbit, nu, 3000, 17, {1, 1 << 16});
        checks.emplace_back("sliding-window-refresh", std::fabs(a - b) <= 1e-12);
    }
    Csv csv;
    csv.line(header_comment(c));
    csv.line("check,result");
    for (const auto& [name, ok] : checks) csv.line(name + ',' + (ok ? "pass" : "fail"));
    return csv.text;
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<std::string> data_lines(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        std::string line = trim(text.substr(start, nl - start));
        if (!line.empty() && line[0] != '#') out.push_back(std::move(line));
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

bool as_number(const std::string& s, double& v) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

ExperimentKind parse_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::map<std::string, int> seen;
    std::size_t start = 0;
    int line_no = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        ++line_no;
        std::string line = trim(raw);
        if (!line.empty() && line[0] != '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
            std::string key = trim(std::string_view(line).substr(0, eq));
            std::string value = trim(std::string_view(line).substr(eq + 1));
            auto it = std::find_if(fields().begin(), fields().end(), [&](const auto& f) { return f.first == key; });
            if (it == fields().end())
                throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            if (auto [pos, fresh] = seen.emplace(key, line_no); !fresh)
                throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' already set on line " +
                                  std::to_string(pos->second));
            try {
                it->second.set(config, value);
            } catch (const ConfigError& e) {
                throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    if (!seen.contains("experiment")) throw ConfigError("missing required key 'experiment'");
    return config;
}

std::string to_text(const ExperimentConfig& config) {
    std::string out;
    for (const auto& [key, field] : fields()) out += std::string(key) + " = " + field.get(config) + '\n';
    return out;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [key, field] : fields()) {
        if (!field.affects_output) continue;
        std::string line = std::string(key) + '=' + field.get(config) + '\n';
        for (unsigned char ch : line) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

MultiplicativeSpec parse_nu(std::string_view text) {
    if (text == "moebius") return MultiplicativeSpec::moebius();
    if (text == "liouville") return MultiplicativeSpec::liouville();
    auto arg = [&](std::size_t prefix) { return std::string(text.substr(prefix)); };
    try {
        if (text.starts_with("archimedean:")) return MultiplicativeSpec::archimedean(std::stod(arg(12)));
        if (text.starts_with("random:"))
            return MultiplicativeSpec::random_unimodular(static_cast<std::uint64_t>(parse_int(arg(7), "nu")));
        if (text.starts_with("custom:")) {
            std::ifstream in(arg(7));
            if (!in) throw ConfigError("cannot open custom table '" + arg(7) + "'");
            PrimePowerTable table;
            std::string line;
            while (std::getline(in, line)) {
                line = trim(line);
                if (line.empty() || line[0] == '#') continue;
                auto f = split_fields(line);
                if (f.size() != 4) throw ConfigError("custom table rows are p,e,re,im: '" + line + "'");
                table[{static_cast<std::uint64_t>(parse_int(f[0], "p")), static_cast<unsigned>(parse_int(f[1], "e"))}] =
                    {std::stod(f[2]), std::stod(f[3])};
            }
            return MultiplicativeSpec::custom(std::move(table));
        }
    } catch (const SpecError& e) {
        throw ConfigError(std::string("nu: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ConfigError("nu: bad number in '" + std::string(text) + "'");
    }
    throw ConfigError("unknown nu '" + std::string(text) +
                      "' (expected moebius, liouville, archimedean:T, random:SEED or custom:FILE)");
}

void validate(const ExperimentConfig& c) {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    auto check_poly = [&] {
        try {
            poly_to_initial(PolySpec::parse(c.poly));
        } catch (const Error& e) {
            throw ConfigError(std::string("poly: ") + e.what());
        }
    };
    auto check_nu = [&] {
        if (c.nu.starts_with("custom:") || c.nu.starts_with("random:") || c.nu.starts_with("archimedean:") ||
            c.nu == "moebius" || c.nu == "liouville")
            return;
        parse_nu(c.nu);
    };
    switch (c.kind) {
        case ExperimentKind::Sieve:
            need(c.from >= 1, "sieve: from must be >= 1");
            need(c.to > c.from, "sieve: to must exceed from");
            need(c.to <= kMaxRange, "sieve: to exceeds 2^62");
            need(c.to - c.from <= kMaxRows, "sieve: range too long for CSV output");
            check_nu();
            break;
        case ExperimentKind::Phase:
            check_poly();
            need(c.from >= 0, "phase: from must be >= 0");
            need(c.count >= 0 && c.count <= kMaxRows, "phase: count out of range");
            break;
        case ExperimentKind::Quasi:
            need(c.check == "tr-lemma" || c.check == "birkhoff", "quasi: check must be tr-lemma or birkhoff");
            resolve_frac64(c.alpha);
            if (c.check == "tr-lemma") {
                need(c.d >= 1 && c.d <= kMaxDim, "quasi: d must be in [1,16]");
                need(c.r_max >= 1 && c.r_max <= 1000, "quasi: r_max must be in [1,1000]");
                need(c.samples >= 1 && c.samples <= 1'000'000, "quasi: samples must be in [1,1e6]");
            } else {
                need(!c.freq.empty() && c.freq.size() <= static_cast<std::size_t>(kMaxDim),
                     "quasi: freq needs 1..16 entries");
                need(c.N >= 1 && c.N <= kMaxRange, "quasi: N out of range");
            }
            break;
        case ExperimentKind::Kbsz:
            check_poly();
            need(primes_up_to(static_cast<std::uint64_t>(std::max<std::int64_t>(c.primes_up_to, 0))).size() >= 2,
                 "kbsz: empty prime list (primes_up_to must be >= 3)");
            need(c.primes_up_to <= 100000, "kbsz: primes_up_to too large");
            need(c.N >= 1 && c.N <= kMaxRange / std::max<std::int64_t>(c.primes_up_to, 1), "kbsz: N out of range");
            break;
        case ExperimentKind::ShortInterval:
            check_poly();
            check_nu();
            need(!c.M.empty(), "short-interval: M list is empty");
            need(c.H.empty() || c.H.size() == c.M.size(), "short-interval: H list must match M list");
            for (std::size_t i = 0; i < c.M.size(); ++i) {
                need(c.M[i] >= 1 && c.M[i] <= kMaxRows, "short-interval: M out of range");
                std::int64_t H = c.H.empty() ? icbrt(c.M[i]) : c.H[i];
                need(H >= 1 && H <= c.M[i], "short-interval: need 1 <= H <= M");
            }
            break;
        case ExperimentKind::BlockStat:
        case ExperimentKind::Switched:
            check_poly();
            check_nu();
            need(!c.K.empty(), "block experiments need K");
            need(c.kind == ExperimentKind::BlockStat || c.K.size() == 1, "switched: K takes a single value");
            for (std::int64_t K : c.K) need(K >= 1 && K <= 10'000'000, "K out of range");
            BlockScheme::parse(c.scheme, 16);
            break;
        case ExperimentKind::Selftest:
            break;
    }
}

std::string render(const ExperimentConfig& config) {
    validate(config);
    unsigned workers = workers_of(config);
    switch (config.kind) {
        case ExperimentKind::Sieve: return render_sieve(config, workers);
        case ExperimentKind::Phase: return render_phase(config);
        case ExperimentKind::Quasi: return render_quasi(config, workers);
        case ExperimentKind::Kbsz: return render_kbsz(config, workers);
        case ExperimentKind::ShortInterval: return render_short_interval(config, workers);
        case ExperimentKind::BlockStat: return render_block_stat(config, workers);
        case ExperimentKind::Switched: return render_switched(config, workers);
        case ExperimentKind::Selftest: return render_selftest(config, workers);
    }
    throw ConfigError("unhandled experiment kind");
}

std::vector<std::string> compare_csv(std::string_view actual, std::string_view expected, double tol) {
    std::vector<std::string> diffs;
    auto a = data_lines(actual);
    auto e = data_lines(expected);
    if (a.size() != e.size())
        diffs.push_back("row count " + std::to_string(a.size()) + " != fixture " + std::to_string(e.size()));
    std::size_t rows = std::min(a.size(), e.size());
    for (std::size_t i = 0; i < rows; ++i) {
        if (a[i] == e[i]) continue;
        auto fa = split_fields(a[i]);
        auto fe = split_fields(e[i]);
        bool same = fa.size() == fe.size();
        for (std::size_t j = 0; same && j < fa.size(); ++j) {
            double x = 0, y = 0;
            if (fa[j] == fe[j]) continue;
            same = i > 0 && as_number(fa[j], x) && as_number(fe[j], y) && std::fabs(x - y) <= tol;
        }
        if (!same) diffs.push_back("row " + std::to_string(i) + ": got '" + a[i] + "' expected '" + e[i] + "'");
    }
    return diffs;
}

double fixture_tolerance(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Sieve:
        case ExperimentKind::Selftest: return 0.0;
        default: return 1e-9;
    }
}

ExitReport run(const ExperimentConfig& config) {
    ExitReport report;
    try {
        report.csv = render(config);
    } catch (const ConfigError& e) {
        return {kExitUsage, std::string("usage error: ") + e.what(), {}, {}};
    } catch (const ParameterError& e) {
        return {kExitUsage, std::string("usage error: ") + e.what(), {}, {}};
    } catch (const SpecError& e) {
        return {kExitUsage, std::string("usage error: ") + e.what(), {}, {}};
    } catch (const std::exception& e) {
        return {kExitInternal, std::string("internal error: ") + e.what(), {}, {}};
    }
    if (config.kind == ExperimentKind::Selftest && report.csv.find(",fail") != std::string::npos) {
        report.status = kExitInternal;
        report.message = "selftest failed";
    }
    if (!config.out.empty()) {
        std::ofstream out(config.out, std::ios::binary);
        out << report.csv;
        if (!out) return {kExitInternal, "cannot write '" + config.out + "'", {}, report.csv};
    }
    if (!config.fixture.empty()) {
        std::filesystem::path path(config.fixture);
        if (const char* dir = std::getenv("TORUSMU_FIXTURE_DIR"); dir && *dir && path.is_relative())
            path = std::filesystem::path(dir) / path;
        std::ifstream in(path, std::ios::binary);
        if (!in) return {kExitUsage, "cannot open fixture '" + path.string() + "'", {}, report.csv};
        std::stringstream buf;
        buf << in.rdbuf();
        report.diffs = compare_csv(report.csv, buf.str(), fixture_tolerance(config.kind));
        if (!report.diffs.empty()) {
            report.status = kExitMismatch;
            report.message = "fixture mismatch: " + std::to_string(report.diffs.size()) + " row(s) differ";
        } else if (report.status == kExitPass) {
            report.message = "fixture match";
        }
    }
    if (report.message.empty()) report.message = "ok";
    report.message += " (workers=" + std::to_string(workers_of(config)) + ")";
    return report;
}

}  // namespace torusmu
