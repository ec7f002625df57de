#include "leocov/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "csv.hpp"
#include "leocov/analytic.hpp"
#include "leocov/error.hpp"
#include "leocov/geometry.hpp"
#include "leocov/kernels.hpp"
#include "leocov/simulator.hpp"

namespace leocov::cli {

namespace {

constexpr double kKm = 1000.0;

struct Options {
    double lambda = 1e-12;
    std::optional<std::string> alt_km;
    double alpha = 3.5;
    int m = 1;
    std::optional<double> theta;
    std::optional<double> theta_db;
    double earth_km = 6371.0;
    int quad_k = 768;
    int quad_n = 768;
    std::uint64_t seed = 1;
    std::size_t realizations = 10000;
    std::string mode;
    int fading_draws = 2000;
    std::string output;
    unsigned threads = 0;
    std::string kernels = "auto";
    std::string x_grid = "0.01:0.99:0.01";
    bool with_sim = false;
};

struct Defaults {
    std::string alt_km;
    double theta;
};

double parse_number(std::string_view text)
{
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    while (first != last && *first == ' ') ++first;
    while (last != first && last[-1] == ' ') --last;
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value)) {
        throw InvalidArgument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

// Drops the representation error of start + i * step (0.35000000000000003 -> 0.35).
double snap_decimal(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    double out = v;
    std::from_chars(buf, res.ptr, out);
    return out;
}

SystemConfig make_config(const Options& o, double altitude_km, double theta)
{
    SystemConfig c;
    c.earth_radius = o.earth_km * kKm;
    c.altitude = altitude_km * kKm;
    c.density = o.lambda;
    c.path_loss_exponent = o.alpha;
    c.nakagami_m = o.m;
    c.sir_threshold = theta;
    c.validate();
    return c;
}

double resolve_theta(const Options& o, const Defaults& d)
{
    if (o.theta_db) return db_to_linear(*o.theta_db);
    if (o.theta) return *o.theta;
    return d.theta;
}

std::vector<double> altitudes(const Options& o, const Defaults& d)
{
    return parse_range(o.alt_km.value_or(d.alt_km));
}

std::vector<double> x_values(const Options& o)
{
    auto xs = parse_range(o.x_grid);
    for (double x : xs) {
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("x grid values must lie in [0, 1]");
    }
    return xs;
}

sim::EstimateOptions estimate_options(const Options& o, const SystemConfig& config)
{
    sim::EstimateOptions e;
    e.mode = o.mode.empty() ? sim::default_mode(config) : sim::parse_mode(o.mode);
    e.fading_draws = o.fading_draws;
    e.master_seed = o.seed;
    e.threads = o.threads;
    return e;
}

analytic::QuadratureRules rules_for(const Options& o)
{
    return analytic::QuadratureRules({o.quad_k, o.quad_n});
}

void check_realizations(const Options& o)
{
    if (o.realizations < 1) throw InvalidArgument("--realizations must be >= 1");
}

void add_common(CLI::App* sub, Options& o, const Defaults& d, bool simulation)
{
    sub->add_option("--lambda", o.lambda, "Satellite density per square meter")->capture_default_str();
    sub->add_option("--alt-km", o.alt_km,
                    "Altitude(s) in km: value, comma list, or start:stop:step (inclusive)")
        ->default_str(d.alt_km);
    sub->add_option("--alpha", o.alpha, "Path-loss exponent")->capture_default_str();
    sub->add_option("--m", o.m, "Nakagami parameter (integer)")->capture_default_str();
    auto* theta = sub->add_option("--theta", o.theta, "Linear SIR threshold")
                      ->default_str(format_double(d.theta));
    auto* theta_db = sub->add_option("--theta-db", o.theta_db, "SIR threshold in dB");
    theta->excludes(theta_db);
    sub->add_option("--earth-km", o.earth_km, "Earth radius in km")->capture_default_str();
    sub->add_option("--quad-k", o.quad_k, "Outer quadrature order")->capture_default_str();
    sub->add_option("--quad-n", o.quad_n, "Inner quadrature order")->capture_default_str();
    sub->add_option("--output", o.output, "Write CSV to FILE instead of stdout");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
    sub->add_option("--kernels", o.kernels, "Kernel backend: auto, scalar, avx2")->capture_default_str();
    if (simulation) {
        sub->add_option("--seed", o.seed, "Master seed of the Monte Carlo streams")->capture_default_str();
        sub->add_option("--realizations", o.realizations, "Constellation realizations")
            ->capture_default_str();
        sub->add_option("--mode", o.mode, "Per-realization coverage: exact-m1, fading-mc, lemma1")
            ->default_str("exact-m1 if M = 1, else fading-mc");
        sub->add_option("--fading-draws", o.fading_draws, "Fading draws per realization (fading-mc)")
            ->capture_default_str();
    }
}

void cmd_moments(const Options& o, const Defaults& d, std::ostream& out, std::ostream& err)
{
    const double theta = resolve_theta(o, d);
    const auto alts = altitudes(o, d);
    if (o.with_sim) check_realizations(o);
    const auto rules = rules_for(o);
    CsvWriter csv(out);
    std::vector<std::string> header{"altitude_km", "m1", "m2", "variance"};
    if (o.with_sim) header.insert(header.end(), {"sim_m1", "sim_m2", "sim_se1", "sim_se2"});
    csv.row(header);
    for (double alt : alts) {
        const auto config = make_config(o, alt, theta);
        const auto geo = derive(config);
        const double m1 = analytic::moment(1, theta, config, geo, rules, o.threads).value;
        const double m2 = analytic::moment(2, theta, config, geo, rules, o.threads).value;
        const double v = m2 - m1 * m1;
        if (v < -1e-6) err << "warning: negative variance " << v << " at " << alt << " km\n";
        std::vector<std::string> row{format_double(alt), format_double(m1), format_double(m2),
                                     format_double(std::max(v, 0.0))};
        if (o.with_sim) {
            const auto est = sim::estimate(theta, config, o.realizations, estimate_options(o, config));
            row.insert(row.end(), {format_double(est.m1_hat), format_double(est.m2_hat),
                                   format_double(est.m1_se), format_double(est.m2_se)});
        }
        csv.row(row);
    }
    if (o.with_sim) err << "seed = " << o.seed << '\n';
}

void cmd_meta(const Options& o, const Defaults& d, std::ostream& out, std::ostream& err)
{
    const double theta = resolve_theta(o, d);
    const auto alts = altitudes(o, d);
    const auto xs = x_values(o);
    if (o.with_sim) check_realizations(o);
    const auto rules = rules_for(o);
    CsvWriter csv(out);
    std::vector<std::string> header{"altitude_km", "x", "meta_ccdf"};
    if (o.with_sim) header.emplace_back("empirical_ccdf");
    csv.row(header);
    for (double alt : alts) {
        const auto config = make_config(o, alt, theta);
        const auto geo = derive(config);
        const double m1 = analytic::moment(1, theta, config, geo, rules, o.threads).value;
        const double m2 = analytic::moment(2, theta, config, geo, rules, o.threads).value;
        const auto fit = analytic::beta_fit(m1, m2);
        if (!fit.valid) err << "warning: " << alt << " km: beta fit failed: " << fit.diagnostic << '\n';
        std::vector<std::pair<double, double>> empirical;
        if (o.with_sim) {
            auto opts = estimate_options(o, config);
            opts.ccdf_grid = xs;
            empirical = sim::estimate(theta, config, o.realizations, opts).empirical_ccdf;
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::vector<std::string> row{format_double(alt), format_double(xs[i]),
                                         fit.valid ? format_double(analytic::meta_ccdf(fit, xs[i])) : ""};
            if (o.with_sim) row.push_back(format_double(empirical[i].second));
            csv.row(row);
        }
    }
    if (o.with_sim) err << "seed = " << o.seed << '\n';
}

void cmd_simulate(const Options& o, const Defaults& d, std::ostream& out, std::ostream& err)
{
    check_realizations(o);
    const double theta = resolve_theta(o, d);
    const auto alts = altitudes(o, d);
    CsvWriter csv(out);
    csv.row({"altitude_km", "lambda", "m", "theta", "mode", "realizations", "seed", "m1_hat", "se1",
             "m2_hat", "se2", "variance_hat", "empty_fraction", "mean_visible"});
    for (double alt : alts) {
        const auto config = make_config(o, alt, theta);
        const auto opts = estimate_options(o, config);
        const auto est = sim::estimate(theta, config, o.realizations, opts);
        csv.row({format_double(alt), format_double(o.lambda), std::to_string(o.m), format_double(theta),
                 std::string(sim::mode_name(opts.mode)), std::to_string(est.realizations),
                 std::to_string(est.master_seed), format_double(est.m1_hat), format_double(est.m1_se),
                 format_double(est.m2_hat), format_double(est.m2_se),
                 format_double(est.m2_hat - est.m1_hat * est.m1_hat), format_double(est.empty_fraction),
                 format_double(est.mean_visible)});
    }
    err << "seed = " << o.seed << '\n';
}

int cmd_compare(const Options& o, const Defaults& d, std::ostream& out, std::ostream& err)
{
    check_realizations(o);
    const double theta = resolve_theta(o, d);
    const auto alts = altitudes(o, d);
    const auto rules = rules_for(o);
    const bool gated = o.m == 1;
    CsvWriter csv(out);
    csv.row({"altitude_km", "quantity", "analytic", "simulated", "se", "abs_diff", "within_3se"});
    double max_diff = 0.0;
    double sum_diff = 0.0;
    int points = 0;
    int failures = 0;
    for (double alt : alts) {
        const auto config = make_config(o, alt, theta);
        const auto geo = derive(config);
        const double m1 = analytic::moment(1, theta, config, geo, rules, o.threads).value;
        const double m2 = analytic::moment(2, theta, config, geo, rules, o.threads).value;
        const auto est = sim::estimate(theta, config, o.realizations, estimate_options(o, config));
        const struct {
            const char* name;
            double analytic, simulated, se;
        } rows[] = {{"m1", m1, est.m1_hat, est.m1_se}, {"m2", m2, est.m2_hat, est.m2_se}};
        for (const auto& r : rows) {
            const double diff = std::abs(r.analytic - r.simulated);
            const bool ok = diff <= 3.0 * r.se;
            max_diff = std::max(max_diff, diff);
            sum_diff += diff;
            ++points;
            failures += !ok;
            csv.row({format_double(alt), r.name, format_double(r.analytic), format_double(r.simulated),
                     format_double(r.se), format_double(diff), ok ? "1" : "0"});
        }
    }
    err << "compare: " << points << " points, max |diff| = " << format_double(max_diff)
        << ", mean |diff| = " << format_double(points > 0 ? sum_diff / points : 0.0) << ", seed = " << o.seed
        << '\n';
    if (!gated) {
        err << "compare: 3-SE gate not applied for M = " << o.m
            << " (the analytic moments are approximate there); " << failures << " points outside 3 SE\n";
        return kSuccess;
    }
    err << "compare: 3-SE gate " << (failures == 0 ? "passed" : "FAILED") << " (" << failures
        << " of " << points << " outside)\n";
    return failures == 0 ? kSuccess : kGateFailure;
}

class WarningRedirect {
public:
    explicit WarningRedirect(std::ostream& err)
    {
        set_warning_handler([&err](std::string_view msg) { err << "warning: " << msg << '\n'; });
    }
    ~WarningRedirect() { set_warning_handler({}); }
    WarningRedirect(const WarningRedirect&) = delete;
    WarningRedirect& operator=(const WarningRedirect&) = delete;
};

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string format_double(double value)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::vector<double> parse_range(std::string_view spec)
{
    if (spec.empty()) throw InvalidArgument("empty sweep");
    std::vector<double> out;
    if (spec.find(':') != std::string_view::npos) {
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        for (std::size_t pos; (pos = spec.find(':', start)) != std::string_view::npos; start = pos + 1) {
            parts.push_back(spec.substr(start, pos - start));
        }
        parts.push_back(spec.substr(start));
        if (parts.size() != 3) throw InvalidArgument("range must be start:stop:step, got '" + std::string(spec) + "'");
        const double first = parse_number(parts[0]);
        const double last = parse_number(parts[1]);
        const double step = parse_number(parts[2]);
        if (!(step > 0.0)) throw InvalidArgument("range step must be > 0");
        if (last < first) throw InvalidArgument("empty sweep: stop < start in '" + std::string(spec) + "'");
        const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
        if (count > 10'000'000) throw InvalidArgument("range has too many points");
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(snap_decimal(first + static_cast<double>(i) * step));
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto pos = spec.find(',', start);
        const auto token = spec.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        out.push_back(parse_number(token));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Coverage and meta distribution of downlink LEO satellite networks", "leocov"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    Options o;
    const Defaults moments_defaults{"200:1500:50", 0.1};
    const Defaults meta_defaults{"200,400,800", 1.0};
    const Defaults simulate_defaults{"200", 1.0};
    const Defaults compare_defaults{"200,400,800", 1.0};

    auto* moments = app.add_subcommand("moments", "Sweep altitude; emit M1, M2 and variance");
    add_common(moments, o, moments_defaults, true);
    moments->add_flag("--sim", o.with_sim, "Add Monte Carlo columns");

    auto* meta = app.add_subcommand("meta", "Beta-approximated CCDF of the conditional coverage");
    add_common(meta, o, meta_defaults, true);
    meta->add_option("--x", o.x_grid, "Reliability grid (range syntax)")->capture_default_str();
    meta->add_flag("--sim", o.with_sim, "Add the empirical CCDF column");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo moment estimates with standard errors");
    add_common(simulate, o, simulate_defaults, true);

    auto* compare = app.add_subcommand("compare", "Analytic vs Monte Carlo moments with a 3-SE gate");
    add_common(compare, o, compare_defaults, true);

    std::vector<const char*> argv{"leocov"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    WarningRedirect redirect(err);
    try {
        if (o.kernels != "auto") {
            kernels::set_backend(kernels::parse_backend(o.kernels));
        }
        std::ofstream file;
        std::ostream* sink = &out;
        if (!o.output.empty()) {
            file.open(o.output, std::ios::binary);
            if (!file) throw InvalidArgument("cannot open output file '" + o.output + "'");
            sink = &file;
        }
        // Buffer so a failure mid-sweep never leaves a partial CSV behind.
        std::ostringstream csv;
        csv.imbue(std::locale::classic());
        int code = kSuccess;
        if (moments->parsed()) cmd_moments(o, moments_defaults, csv, err);
        else if (meta->parsed()) cmd_meta(o, meta_defaults, csv, err);
        else if (simulate->parsed()) cmd_simulate(o, simulate_defaults, csv, err);
        else if (compare->parsed()) code = cmd_compare(o, compare_defaults, csv, err);
        *sink << csv.str();
        sink->flush();
        return code;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const UnfittableMoments& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace leocov::cli
