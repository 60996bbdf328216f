// confint: confounding intervals for regression slopes from summary
// statistics. Subcommands: interval, sweep, from-data, region, prior, verify.
//
// Exit codes: 0 success, 1 verification failure or internal error,
// 2 invalid input, 3 empty feasible set, 4 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "confint/confint.hpp"

using nlohmann::ordered_json;
using namespace confint;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// config file: flat key-value lines mirroring flag names (no leading dashes),
// e.g. "rho-xy = -0.11" or "r2x = 0.1 0.5". Flags override file values.

struct ConfigFile {
    std::map<std::string, std::vector<std::string>> entries;

    static ConfigFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open config file '" + path + "'");
        ConfigFile cfg;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::string key;
            if (!(ls >> key)) continue;
            if (!key.empty() && key.back() == '=') key.pop_back();
            std::vector<std::string> vals;
            std::string tok;
            while (ls >> tok) {
                if (tok == "=") continue;
                vals.push_back(tok);
            }
            if (key.empty() || vals.empty())
                throw parse_error("config line is not 'key = value...'", lineno, 0);
            cfg.entries[key] = std::move(vals);
        }
        return cfg;
    }
};

double parse_double(const std::string& tok) {
    std::string t = tok;
    for (auto& ch : t) ch = char(std::tolower(static_cast<unsigned char>(ch)));
    if (t == "inf" || t == "+inf" || t == "infinity") return kInf;
    if (t == "-inf" || t == "-infinity") return -kInf;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty())
        throw domain_error("'" + tok + "' is not a number");
    return v;
}

// fills holes left by absent flags from the config file
struct OptionMerge {
    const CLI::App* sub;
    const ConfigFile* cfg;

    bool flag_given(const std::string& flag) const {
        const auto* opt = sub->get_option_no_throw("--" + flag);
        return opt != nullptr && opt->count() > 0;
    }

    bool from_file(const std::string& flag, std::vector<std::string>& out) const {
        if (flag_given(flag) || cfg == nullptr) return false;
        const auto it = cfg->entries.find(flag);
        if (it == cfg->entries.end()) return false;
        out = it->second;
        return true;
    }

    void scalar(const std::string& flag, double& value, bool& present) const {
        present = present || flag_given(flag);
        std::vector<std::string> v;
        if (from_file(flag, v)) {
            if (v.size() != 1) throw domain_error("config key '" + flag + "' needs one value");
            value = parse_double(v[0]);
            present = true;
        }
    }

    void pair_(const std::string& flag, double& lo, double& hi, bool& present) const {
        present = present || flag_given(flag);
        std::vector<std::string> v;
        if (from_file(flag, v)) {
            if (v.size() != 2) throw domain_error("config key '" + flag + "' needs two values");
            lo = parse_double(v[0]);
            hi = parse_double(v[1]);
            present = true;
        }
    }

    void integer(const std::string& flag, std::int64_t& value) const {
        std::vector<std::string> v;
        if (from_file(flag, v)) {
            if (v.size() != 1) throw domain_error("config key '" + flag + "' needs one value");
            value = std::int64_t(parse_double(v[0]));
        }
    }

    void text(const std::string& flag, std::string& value) const {
        std::vector<std::string> v;
        if (from_file(flag, v)) {
            if (v.size() != 1) throw domain_error("config key '" + flag + "' needs one value");
            value = v[0];
        }
    }
};

// ---------------------------------------------------------------------------
// output plumbing

struct Output {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw io_error("cannot open output file '" + path + "'");
        stream = &file;
    }
    std::ostream& os() { return *stream; }
};

std::string fmt_tuple(const SensitivityTuple& t, bool machine) {
    auto f = machine ? format_number : format_fixed2;
    return "r2wx=" + f(t.r2wx) + " r2wy=" + f(t.r2wy) + " rho_hxhy=" + f(t.rho_hxhy);
}

ordered_json json_tuple(const SensitivityTuple& t) {
    return {{"r2wx", round12(t.r2wx)},
            {"r2wy", round12(t.r2wy)},
            {"rho_hxhy", round12(t.rho_hxhy)}};
}

// shared flag set for the summary-statistics subcommands
struct SpecArgs {
    double rho_xy = 0.0;
    double sigma_ratio = 0.0;
    double r2x_lo = 0.0, r2x_hi = 0.0;
    double r2y_lo = 0.0, r2y_hi = 0.0;
    double rho_lo = -1.0, rho_hi = 1.0;
    bool has_rho_xy = false, has_ratio = false, has_r2x = false, has_r2y = false,
         has_rho = false;
    std::vector<double> r2x_raw, r2y_raw, rho_raw;

    void attach(CLI::App* sub, bool rho_band_too = true) {
        sub->add_option("--rho-xy", rho_xy, "measured correlation of x and y");
        sub->add_option("--sigma-ratio", sigma_ratio, "sigma_y / sigma_x");
        sub->add_option("--r2x", r2x_raw, "bounds L U on R^2_wx")->expected(2);
        sub->add_option("--r2y", r2y_raw, "bounds L U on R^2_wy")->expected(2);
        if (rho_band_too)
            sub->add_option("--rho-hxhy", rho_raw,
                            "bounds L U on the fitted-value correlation (default -1 1)")
                ->expected(2);
    }

    void finalize(const CLI::App* sub, const ConfigFile* cfg, bool need_box,
                  double default_r2_hi = -1.0) {
        OptionMerge merge{sub, cfg};
        if (!r2x_raw.empty()) { r2x_lo = r2x_raw[0]; r2x_hi = r2x_raw[1]; has_r2x = true; }
        if (!r2y_raw.empty()) { r2y_lo = r2y_raw[0]; r2y_hi = r2y_raw[1]; has_r2y = true; }
        if (!rho_raw.empty()) { rho_lo = rho_raw[0]; rho_hi = rho_raw[1]; has_rho = true; }
        merge.scalar("rho-xy", rho_xy, has_rho_xy);
        merge.scalar("sigma-ratio", sigma_ratio, has_ratio);
        merge.pair_("r2x", r2x_lo, r2x_hi, has_r2x);
        merge.pair_("r2y", r2y_lo, r2y_hi, has_r2y);
        merge.pair_("rho-hxhy", rho_lo, rho_hi, has_rho);
        if (!has_rho_xy) throw domain_error("--rho-xy is required");
        if (!has_ratio) throw domain_error("--sigma-ratio is required");
        if (need_box) {
            if (!has_r2x) throw domain_error("--r2x L U is required");
            if (!has_r2y) throw domain_error("--r2y L U is required");
        } else if (default_r2_hi > 0.0) {
            if (!has_r2x) { r2x_lo = 0.0; r2x_hi = default_r2_hi; }
            if (!has_r2y) { r2y_lo = 0.0; r2y_hi = default_r2_hi; }
        }
    }

    SummaryStats stats() const { return {rho_xy, sigma_ratio}; }
    BoundSpec bounds() const { return {r2x_lo, r2x_hi, r2y_lo, r2y_hi, rho_lo, rho_hi}; }

    ordered_json echo_json() const {
        return {{"rho_xy", round12(rho_xy)},
                {"sigma_ratio", round12(sigma_ratio)},
                {"r2x", {round12(r2x_lo), round12(r2x_hi)}},
                {"r2y", {round12(r2y_lo), round12(r2y_hi)}},
                {"rho_hxhy", {round12(rho_lo), round12(rho_hi)}}};
    }
};

// ---------------------------------------------------------------------------
// subcommand: interval

int run_interval(const SpecArgs& spec, const std::string& format, Output& out) {
    SolveDiagnostics diag;
    const auto iv = solve_interval(spec.stats(), spec.bounds(), kFeasTol, &diag);
    if (format == "json") {
        ordered_json j = spec.echo_json();
        j["lower"] = round12(iv.lower);
        j["upper"] = round12(iv.upper);
        j["argmin"] = json_tuple(iv.argmin);
        j["argmax"] = json_tuple(iv.argmax);
        j["argmin_family"] = to_string(diag.argmin_family);
        j["argmax_family"] = to_string(diag.argmax_family);
        j["candidates_generated"] = diag.generated;
        j["candidates_feasible"] = diag.feasible;
        out.os() << j.dump(2) << "\n";
    } else if (format == "csv") {
        out.os() << "rho_xy,sigma_ratio,r2x_lo,r2x_hi,r2y_lo,r2y_hi,rho_lo,rho_hi,"
                    "lower,upper,argmin_r2wx,argmin_r2wy,argmin_rho_hxhy,"
                    "argmax_r2wx,argmax_r2wy,argmax_rho_hxhy,"
                    "candidates_generated,candidates_feasible\n";
        out.os() << format_number(spec.rho_xy) << ',' << format_number(spec.sigma_ratio)
                 << ',' << format_number(spec.r2x_lo) << ',' << format_number(spec.r2x_hi)
                 << ',' << format_number(spec.r2y_lo) << ',' << format_number(spec.r2y_hi)
                 << ',' << format_number(spec.rho_lo) << ',' << format_number(spec.rho_hi)
                 << ',' << format_number(iv.lower) << ',' << format_number(iv.upper) << ','
                 << format_number(iv.argmin.r2wx) << ',' << format_number(iv.argmin.r2wy)
                 << ',' << format_number(iv.argmin.rho_hxhy) << ','
                 << format_number(iv.argmax.r2wx) << ',' << format_number(iv.argmax.r2wy)
                 << ',' << format_number(iv.argmax.rho_hxhy) << ',' << diag.generated << ','
                 << diag.feasible << "\n";
    } else {
        out.os() << "rho_xy       " << format_fixed2(spec.rho_xy) << "\n"
                 << "sigma_ratio  " << format_fixed2(spec.sigma_ratio) << "\n"
                 << "r2wx         [" << format_fixed2(spec.r2x_lo) << ", "
                 << format_fixed2(spec.r2x_hi) << "]\n"
                 << "r2wy         [" << format_fixed2(spec.r2y_lo) << ", "
                 << format_fixed2(spec.r2y_hi) << "]\n"
                 << "rho_hxhy     [" << format_fixed2(spec.rho_lo) << ", "
                 << format_fixed2(spec.rho_hi) << "]\n"
                 << "interval     [" << format_fixed2(iv.lower) << ", "
                 << format_fixed2(iv.upper) << "]\n"
                 << "argmin       " << fmt_tuple(iv.argmin, false) << "  ("
                 << to_string(diag.argmin_family) << ")\n"
                 << "argmax       " << fmt_tuple(iv.argmax, false) << "  ("
                 << to_string(diag.argmax_family) << ")\n"
                 << "candidates   generated=" << diag.generated
                 << " feasible=" << diag.feasible << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: sweep — interval per (l_rho, u_rho) lattice pair

int run_sweep(const SpecArgs& spec, std::int64_t resolution, const std::string& format,
              Output& out) {
    if (resolution < 2) throw domain_error("--resolution must be at least 2");
    const auto node = [&](std::int64_t i) {
        return -1.0 + 2.0 * double(i) / double(resolution - 1);
    };
    struct Row {
        double lo, hi;
        std::optional<ConfoundingInterval> iv;
    };
    std::vector<Row> rows;
    for (std::int64_t i = 0; i < resolution; ++i)
        for (std::int64_t j = i; j < resolution; ++j) {
            BoundSpec b = spec.bounds();
            b.rho_lo = node(i);
            b.rho_hi = node(j);
            Row row{b.rho_lo, b.rho_hi, std::nullopt};
            try {
                row.iv = solve_interval(spec.stats(), b);
            } catch (const empty_feasible_set&) {
            }
            rows.push_back(row);
        }

    if (format == "json") {
        ordered_json j = spec.echo_json();
        j.erase("rho_hxhy");
        j["rows"] = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json jr = {{"l_rho", round12(r.lo)}, {"u_rho", round12(r.hi)}};
            jr["lower"] = r.iv ? ordered_json(round12(r.iv->lower)) : ordered_json(nullptr);
            jr["upper"] = r.iv ? ordered_json(round12(r.iv->upper)) : ordered_json(nullptr);
            jr["feasible"] = bool(r.iv);
            j["rows"].push_back(jr);
        }
        out.os() << j.dump(2) << "\n";
    } else {
        const bool machine = format == "csv";
        auto f = machine ? format_number : format_fixed2;
        out.os() << "l_rho,u_rho,lower,upper,feasible\n";
        for (const auto& r : rows) {
            out.os() << f(r.lo) << ',' << f(r.hi) << ',';
            if (r.iv) out.os() << f(r.iv->lower) << ',' << f(r.iv->upper) << ",1\n";
            else out.os() << ",,0\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: from-data

int run_from_data(const std::string& path, const std::string& format, Output& out) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open data file '" + path + "'");
    const Dataset d = read_dataset_csv(in);
    const auto r = summarize(d);
    const Eigen::Index n = d.rows();
    const Eigen::Index p = d.confounders();

    std::optional<double> ols, formula, disc;
    std::string verification = "skipped: no confounder columns";
    if (p > 0) {
        if (n <= p + 2) {
            verification = "skipped: need n > p + 2 rows";
        } else if (r.tuple.r2wx >= 1.0 - 1e-12 || r.tuple.r2wy >= 1.0 - 1e-12) {
            verification = "skipped: a confounder fit is perfect (R^2 = 1)";
        } else {
            ols = ols_beta(d);
            formula = beta_adjusted(r.stats, r.tuple);
            disc = std::fabs(*ols - *formula);
            verification = "ok";
        }
    }

    if (format == "json") {
        ordered_json j{{"n", n},
                       {"p", p},
                       {"rho_xy", round12(r.stats.rho_xy)},
                       {"sigma_x", round12(r.sigma_x)},
                       {"sigma_y", round12(r.sigma_y)},
                       {"sigma_ratio", round12(r.stats.sigma_ratio)}};
        if (p > 0) {
            j["r2wx"] = round12(r.tuple.r2wx);
            j["r2wy"] = round12(r.tuple.r2wy);
            j["rho_hxhy"] = round12(r.tuple.rho_hxhy);
            j["x_fit_degenerate"] = r.x_fit_degenerate;
            j["y_fit_degenerate"] = r.y_fit_degenerate;
        }
        j["verification"] = verification;
        if (disc) {
            j["ols_slope"] = round12(*ols);
            j["formula_slope"] = round12(*formula);
            j["abs_discrepancy"] = round12(*disc);
        }
        out.os() << j.dump(2) << "\n";
    } else if (format == "csv") {
        out.os() << "n,p,rho_xy,sigma_x,sigma_y,sigma_ratio,r2wx,r2wy,rho_hxhy,"
                    "ols_slope,formula_slope,abs_discrepancy\n"
                 << n << ',' << p << ',' << format_number(r.stats.rho_xy) << ','
                 << format_number(r.sigma_x) << ',' << format_number(r.sigma_y) << ','
                 << format_number(r.stats.sigma_ratio) << ',';
        if (p > 0)
            out.os() << format_number(r.tuple.r2wx) << ',' << format_number(r.tuple.r2wy)
                     << ',' << format_number(r.tuple.rho_hxhy) << ',';
        else
            out.os() << ",,,";
        if (disc)
            out.os() << format_number(*ols) << ',' << format_number(*formula) << ','
                     << format_number(*disc) << "\n";
        else
            out.os() << ",,\n";
    } else {
        out.os() << "n            " << n << "\n"
                 << "p            " << p << "\n"
                 << "rho_xy       " << format_fixed2(r.stats.rho_xy) << "\n"
                 << "sigma_x      " << format_fixed2(r.sigma_x) << "\n"
                 << "sigma_y      " << format_fixed2(r.sigma_y) << "\n"
                 << "sigma_ratio  " << format_fixed2(r.stats.sigma_ratio) << "\n";
        if (p > 0) {
            out.os() << "r2wx         " << format_fixed2(r.tuple.r2wx)
                     << (r.x_fit_degenerate ? "  (degenerate fit)" : "") << "\n"
                     << "r2wy         " << format_fixed2(r.tuple.r2wy)
                     << (r.y_fit_degenerate ? "  (degenerate fit)" : "") << "\n"
                     << "rho_hxhy     " << format_fixed2(r.tuple.rho_hxhy) << "\n";
        }
        out.os() << "verification " << verification << "\n";
        if (disc) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.3g", *disc);
            out.os() << "ols_slope    " << format_fixed2(*ols) << "\n"
                     << "formula      " << format_fixed2(*formula) << "\n"
                     << "discrepancy  " << buf << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: region

int run_region(const SpecArgs& spec, const SignificanceRange& sig,
               std::int64_t resolution, const std::string& format, Output& out) {
    const auto cloud = necessary_region(spec.stats(), spec.bounds(), sig,
                                        {int(resolution), kFeasTol});
    if (format == "json") {
        auto inf_str = [](double v) {
            if (v == kInf) return ordered_json("inf");
            if (v == -kInf) return ordered_json("-inf");
            return ordered_json(round12(v));
        };
        ordered_json j = spec.echo_json();
        j["exclude"] = {inf_str(sig.lo), inf_str(sig.hi)};
        j["resolution"] = resolution;
        j["points"] = ordered_json::array();
        for (const auto& pt : cloud) {
            ordered_json jp = json_tuple(pt.tuple);
            jp["beta"] = round12(pt.beta);
            j["points"].push_back(jp);
        }
        out.os() << j.dump(2) << "\n";
    } else {
        const bool machine = format == "csv";
        auto f = machine ? format_number : format_fixed2;
        out.os() << "r2wx,r2wy,rho_hxhy,beta\n";
        for (const auto& pt : cloud)
            out.os() << f(pt.tuple.r2wx) << ',' << f(pt.tuple.r2wy) << ','
                     << f(pt.tuple.rho_hxhy) << ',' << f(pt.beta) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: prior

int run_prior(const SpecArgs& spec, const PriorSpec& prior, const std::string& format,
              Output& out) {
    const auto res = propagate_prior(spec.stats(), spec.bounds(), prior);
    const char* qnames[5] = {"2.5", "25", "50", "75", "97.5"};
    if (format == "json") {
        ordered_json j = spec.echo_json();
        j["samples_requested"] = prior.sample_count;
        j["seed"] = prior.seed;
        j["acceptance_rate"] = round12(res.acceptance_rate);
        j["quantiles"] = ordered_json::object();
        for (int i = 0; i < 5; ++i) j["quantiles"][qnames[i]] = round12(res.quantiles[i]);
        j["samples"] = ordered_json::array();
        for (double v : res.samples) j["samples"].push_back(round12(v));
        out.os() << j.dump(2) << "\n";
    } else if (format == "csv") {
        out.os() << "beta\n";
        for (double v : res.samples) out.os() << format_number(v) << "\n";
    } else {
        out.os() << "samples          " << res.samples.size() << "\n"
                 << "acceptance_rate  " << format_number(res.acceptance_rate) << "\n";
        for (int i = 0; i < 5; ++i)
            out.os() << "q" << qnames[i] << std::string(15 - std::string(qnames[i]).size(), ' ')
                     << format_fixed2(res.quantiles[i]) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: verify — the oracle suite

int run_verify(std::uint64_t seed, std::int64_t samples, Output& out) {
    int failures = 0;
    auto report = [&](bool ok, const std::string& name, const std::string& detail) {
        if (!ok) ++failures;
        out.os() << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    };

    // Which R^2_wy upper bound reproduces the published case-study endpoints?
    {
        const SummaryStats s{-0.11, 42.94};
        const auto a_full = solve_interval(s, {0.1, 0.5, 0.0, 0.2, -1, 1});
        const auto a_pos = solve_interval(s, {0.1, 0.5, 0.0, 0.2, 0, 1});
        const auto b_full = solve_interval(s, {0.1, 0.5, 0.0, 0.5, -1, 1});
        const auto b_pos = solve_interval(s, {0.1, 0.5, 0.0, 0.5, 0, 1});
        const bool a_match = std::fabs(a_full.lower + 36.60) < 0.01 &&
                             std::fabs(a_full.upper - 17.71) < 0.01 &&
                             std::fabs(a_pos.lower + 36.60) < 0.01 &&
                             std::fabs(a_pos.upper + 5.25) < 0.01;
        const bool b_match = std::fabs(b_full.lower + 36.60) < 0.01 &&
                             std::fabs(b_pos.lower + 36.60) < 0.01;
        report(a_match, "bound-set u_y2=0.2",
               "[" + format_fixed2(a_full.lower) + ", " + format_fixed2(a_full.upper) +
                   "] and rho>=0 [" + format_fixed2(a_pos.lower) + ", " +
                   format_fixed2(a_pos.upper) + "] match the published endpoints");
        report(true, "bound-set u_y2=0.5",
               std::string(b_match ? "also matches" : "does not reproduce them") +
                   ": [" + format_fixed2(b_full.lower) + ", " +
                   format_fixed2(b_full.upper) + "] and rho>=0 [" +
                   format_fixed2(b_pos.lower) + ", " + format_fixed2(b_pos.upper) + "]");
    }

    std::mt19937_64 gen(seed);
    auto urand = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    };

    // grid oracle equivalence on random feasible specs
    {
        int done = 0;
        bool ok = true;
        std::string detail;
        while (done < 10) {
            const SummaryStats s{urand(-0.9, 0.9), 1.0};
            BoundSpec b;
            b.r2x_lo = urand(0, 0.9); b.r2x_hi = urand(b.r2x_lo, 0.9);
            b.r2y_lo = urand(0, 0.9); b.r2y_hi = urand(b.r2y_lo, 0.9);
            b.rho_lo = urand(-1, 1); b.rho_hi = urand(b.rho_lo, 1);
            try {
                const auto iv = solve_interval(s, b);
                const auto g = grid_min_max(s, b, {201, kFeasTol});
                if (g.interval.lower < iv.lower - 1e-9 ||
                    g.interval.upper > iv.upper + 1e-9 ||
                    iv.lower < g.interval.lower - 0.15 ||
                    iv.upper > g.interval.upper + 0.15) {
                    ok = false;
                    detail = "mismatch at rho_xy=" + format_number(s.rho_xy);
                }
                ++done;
            } catch (const empty_feasible_set&) {
            }
        }
        report(ok, "grid equivalence",
               ok ? "10 random specs: 201^3 grid contained, gap < 0.15" : detail);
    }

    // formula vs regression, end to end
    {
        double worst = 0.0;
        for (std::int64_t i = 0; i < samples; ++i) {
            const SummaryStats s{urand(-0.9, 0.9), urand(0.5, 5)};
            SensitivityTuple t;
            for (;;) {
                t.r2wx = urand(0.01, 0.9);
                t.r2wy = urand(0.01, 0.9);
                const auto r = feasible_rho_range(s, t.r2wx, t.r2wy);
                if (r.empty()) continue;
                t.rho_hxhy = urand(r.lo, r.hi);
                break;
            }
            worst = std::max(worst, verify_prop1(s, t, 8, 2, gen()).abs_diff);
        }
        report(worst < 1e-8, "slope identity",
               "max |ols - formula| = " + format_number(worst) + " over " +
                   std::to_string(samples) + " synthesized datasets");
    }

    // synthesize -> summarize round trip
    {
        double worst = 0.0;
        for (std::int64_t i = 0; i < samples; ++i) {
            const SummaryStats s{urand(-0.9, 0.9), urand(0.5, 5)};
            SensitivityTuple t;
            for (;;) {
                t.r2wx = urand(0.01, 0.9);
                t.r2wy = urand(0.01, 0.9);
                const auto r = feasible_rho_range(s, t.r2wx, t.r2wy);
                if (r.empty()) continue;
                t.rho_hxhy = urand(r.lo, r.hi);
                break;
            }
            const auto d = synthesize_data(s, t, 10, 2, gen());
            const auto r = summarize(d);
            worst = std::max({worst, std::fabs(r.stats.rho_xy - s.rho_xy),
                              std::fabs(r.stats.sigma_ratio - s.sigma_ratio),
                              std::fabs(r.tuple.r2wx - t.r2wx),
                              std::fabs(r.tuple.r2wy - t.r2wy),
                              std::fabs(r.tuple.rho_hxhy - t.rho_hxhy)});
        }
        report(worst < 1e-10, "round trip",
               "max reconstruction error = " + format_number(worst) + " over " +
                   std::to_string(samples) + " tuples");
    }

    out.os() << (failures == 0 ? "verify: all checks passed\n"
                               : "verify: " + std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"confounding intervals for regression slopes"};
    app.require_subcommand(1);

    std::string format = "table", out_path, config_path, data_path;
    std::int64_t resolution = 0, samples = 0;
    std::int64_t seed = 0;
    SpecArgs spec;
    std::vector<double> exclude_raw;
    std::vector<std::string> exclude_text;
    std::vector<double> beta_r2x, beta_r2y, beta_rho;
    bool uniform_prior = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "table, csv, or json")
            ->check(CLI::IsMember({"table", "csv", "json"}));
        sub->add_option("--out", out_path, "write output to a file instead of stdout");
        sub->add_option("--config", config_path, "flat key-value config file");
    };

    auto* c_interval = app.add_subcommand("interval", "exact confounding interval");
    spec.attach(c_interval);
    add_common(c_interval);

    auto* c_sweep = app.add_subcommand(
        "sweep", "intervals over a lattice of (l_rho, u_rho) bound pairs");
    spec.attach(c_sweep, false);
    c_sweep->add_option("--resolution", resolution, "lattice points per rho axis (default 21)");
    add_common(c_sweep);

    auto* c_from = app.add_subcommand("from-data", "summary statistics from a CSV file");
    c_from->add_option("path", data_path, "CSV with columns x, y, and confounders")
        ->required();
    add_common(c_from);

    auto* c_region = app.add_subcommand(
        "region", "realizable tuples pushing the slope outside a significance range");
    spec.attach(c_region);
    c_region->add_option("--exclude", exclude_text,
                         "significance range LO HI (inf allowed)")
        ->expected(2);
    c_region->add_option("--resolution", resolution, "grid nodes per axis (default 101)");
    add_common(c_region);

    auto* c_prior = app.add_subcommand("prior", "propagate a prior to slope samples");
    spec.attach(c_prior);
    c_prior->add_option("--samples", samples, "number of accepted samples (default 10000)");
    c_prior->add_option("--seed", seed, "RNG seed (default 0)");
    c_prior->add_flag("--uniform", uniform_prior, "independent uniform marginals (default)");
    c_prior->add_option("--beta-r2x", beta_r2x, "beta prior A B for R^2_wx")->expected(2);
    c_prior->add_option("--beta-r2y", beta_r2y, "beta prior A B for R^2_wy")->expected(2);
    c_prior->add_option("--beta-rho", beta_rho, "beta prior A B for rho_hxhy")->expected(2);
    add_common(c_prior);

    auto* c_verify = app.add_subcommand("verify", "run the verification oracle suite");
    c_verify->add_option("--seed", seed, "RNG seed (default 0)");
    c_verify->add_option("--samples", samples, "tuples per check (default 200)");
    add_common(c_verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::optional<ConfigFile> cfg;
        CLI::App* sub = app.get_subcommands().front();
        if (!config_path.empty()) cfg = ConfigFile::load(config_path);
        const ConfigFile* cfgp = cfg ? &*cfg : nullptr;
        OptionMerge merge{sub, cfgp};
        merge.text("format", format);
        merge.text("out", out_path);
        merge.integer("resolution", resolution);
        merge.integer("samples", samples);
        merge.integer("seed", seed);
        if (format != "table" && format != "csv" && format != "json")
            throw domain_error("format must be table, csv, or json");

        Output out(out_path);
        if (c_interval->parsed()) {
            spec.finalize(c_interval, cfgp, true);
            validate(spec.stats());
            validate(spec.bounds());
            return run_interval(spec, format, out);
        }
        if (c_sweep->parsed()) {
            spec.finalize(c_sweep, cfgp, true);
            validate(spec.stats());
            if (resolution == 0) resolution = 21;
            BoundSpec base = spec.bounds();
            base.rho_lo = -1.0;
            base.rho_hi = 1.0;
            validate(base);
            return run_sweep(spec, resolution, format, out);
        }
        if (c_from->parsed()) {
            return run_from_data(data_path, format, out);
        }
        if (c_region->parsed()) {
            spec.finalize(c_region, cfgp, false, 0.99);
            validate(spec.stats());
            validate(spec.bounds());
            SignificanceRange sig{-kInf, kInf};
            bool has_exclude = !exclude_text.empty();
            if (cfgp && !has_exclude) {
                const auto it = cfgp->entries.find("exclude");
                if (it != cfgp->entries.end()) {
                    exclude_text = it->second;
                    has_exclude = true;
                }
            }
            if (!has_exclude) throw domain_error("--exclude LO HI is required");
            if (exclude_text.size() != 2) throw domain_error("--exclude needs two values");
            sig.lo = parse_double(exclude_text[0]);
            sig.hi = parse_double(exclude_text[1]);
            if (resolution == 0) resolution = 101;
            return run_region(spec, sig, resolution, format, out);
        }
        if (c_prior->parsed()) {
            spec.finalize(c_prior, cfgp, true);
            validate(spec.stats());
            validate(spec.bounds());
            PriorSpec prior;
            prior.sample_count = samples == 0 ? 10000 : samples;
            prior.seed = std::uint64_t(seed);
            if (!beta_r2x.empty()) prior.r2x = {PriorFamily::beta, beta_r2x[0], beta_r2x[1]};
            if (!beta_r2y.empty()) prior.r2y = {PriorFamily::beta, beta_r2y[0], beta_r2y[1]};
            if (!beta_rho.empty()) prior.rho = {PriorFamily::beta, beta_rho[0], beta_rho[1]};
            return run_prior(spec, prior, format, out);
        }
        if (c_verify->parsed()) {
            return run_verify(std::uint64_t(seed), samples == 0 ? 200 : samples, out);
        }
        return 2;
    } catch (const empty_feasible_set& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const low_acceptance_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what();
        if (e.row > 0) std::cerr << " (row " << e.row << ", column " << e.col << ")";
        std::cerr << "\n";
        return 2;
    } catch (const confint::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
