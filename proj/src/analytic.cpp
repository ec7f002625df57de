#include "leocov/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "leocov/error.hpp"
#include "leocov/kernels.hpp"
#include "leocov/parallel.hpp"

namespace leocov::analytic {

namespace {

constexpr double kRangeSlack = 1e-9;
constexpr double kProbabilitySlack = 1e-9;

// Nodes of the inner rule mapped onto [r1, R_max]: quadrature weight times r
// (the area element) and the path-loss ratio (r1 / r)^alpha.
struct InnerNodes {
    std::vector<double> weighted_r;
    std::vector<double> ratio;
    double half_length = 0.0;
};

InnerNodes inner_nodes(double r1, double alpha, double max_distance,
                       const special::ChebyshevRule& inner)
{
    InnerNodes nodes;
    const auto w = inner.weights();
    nodes.weighted_r.resize(w.size());
    nodes.ratio.resize(w.size());
    nodes.half_length = 0.5 * (max_distance - r1);
    for (std::size_t n = 0; n < w.size(); ++n) {
        const double c = inner.map(r1, max_distance, n);
        nodes.weighted_r[n] = w[n] * c;
        nodes.ratio[n] = std::pow(r1 / c, alpha);
    }
    return nodes;
}

// Per-m scale m eta theta / M; exponents M b_m.
void alzer_factors(int nakagami_m, double theta, std::span<const int> b_vector,
                   std::vector<double>& scales, std::vector<int>& exponents)
{
    const double e = eta(nakagami_m).eta;
    scales.resize(static_cast<std::size_t>(nakagami_m));
    exponents.resize(static_cast<std::size_t>(nakagami_m));
    for (int m = 1; m <= nakagami_m; ++m) {
        scales[m - 1] = m * e * theta / nakagami_m;
        exponents[m - 1] = nakagami_m * b_vector[m - 1];
    }
}

void check_composition(std::span<const int> b_vector, int nakagami_m)
{
    if (static_cast<int>(b_vector.size()) != nakagami_m) {
        throw InvalidArgument("composition has " + std::to_string(b_vector.size()) +
                              " parts, expected M = " + std::to_string(nakagami_m));
    }
    for (int v : b_vector) {
        if (v < 0) throw InvalidArgument("composition parts must be nonnegative");
    }
}

double field_prefactor(const SystemConfig& config, const DerivedGeometry& geo)
{
    return 2.0 * std::numbers::pi * config.density * geo.orbit_radius / config.earth_radius;
}

double clamp_probability(double p, const char* what)
{
    if (p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack || !std::isfinite(p)) {
        throw NumericalError(std::string(what) + " left [0, 1]: " + std::to_string(p));
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

EtaConstant eta(int m)
{
    if (m < 1) throw InvalidArgument("Nakagami parameter must be >= 1");
    return {m, m * std::pow(special::factorial(m), -1.0 / m)};
}

double conditional_coverage_lemma1(double theta, double r1, std::span<const double> interferers,
                                   const SystemConfig& config)
{
    const DerivedGeometry geo = derive(config);
    if (!(theta >= 0.0)) throw InvalidArgument("theta must be >= 0");
    const double lo = config.altitude * (1.0 - kRangeSlack);
    const double hi = geo.max_distance * (1.0 + kRangeSlack);
    if (!(r1 >= lo && r1 <= hi)) throw InvalidArgument("serving distance outside [altitude, max_distance]");
    double previous = r1;
    for (double r : interferers) {
        if (!(r <= hi)) throw InvalidArgument("interferer beyond the horizon");
        if (r < previous) throw InvalidArgument("interferer distances must be sorted and >= r1");
        previous = r;
    }

    const int big_m = config.nakagami_m;
    const double alpha = config.path_loss_exponent;
    std::vector<double> ratio(interferers.size());
    for (std::size_t i = 0; i < interferers.size(); ++i) {
        ratio[i] = std::pow(r1 / interferers[i], alpha);
    }
    const double e = eta(big_m).eta;
    double total = 0.0;
    for (int m = 1; m <= big_m; ++m) {
        const double sign = (m % 2 == 1) ? 1.0 : -1.0;
        total += sign * special::binomial(big_m, m) *
                 kernels::interference_product(ratio, m * e * theta / big_m, big_m);
    }
    return clamp_probability(total, "conditional coverage");
}

double nearest_distance_pdf(double r, const SystemConfig& config, const DerivedGeometry& geo)
{
    if (!std::isfinite(r)) throw DomainError("serving distance must be finite");
    if (r < config.altitude || r > geo.max_distance) return 0.0;
    const double c = std::numbers::pi * config.density * geo.orbit_radius / config.earth_radius;
    const double h = config.altitude;
    // upsilon r exp(-c r^2), renormalized at R_min so nothing overflows:
    // 2 c r exp(-c (r^2 - R_min^2)) / (1 - exp(-lambda |A|)).
    return 2.0 * c * r * std::exp(-c * (r - h) * (r + h)) / geo.visibility_probability;
}

double nearest_distance_cdf(double r, const SystemConfig& config, const DerivedGeometry& geo)
{
    if (!(r > config.altitude)) return 0.0;
    if (r >= geo.max_distance) return 1.0;
    const double c = std::numbers::pi * config.density * geo.orbit_radius / config.earth_radius;
    const double h = config.altitude;
    return -std::expm1(-c * (r - h) * (r + h)) / geo.visibility_probability;
}

double q_exponent(double r1, double theta, std::span<const int> b_vector, const SystemConfig& config,
                  const DerivedGeometry& geo, const special::ChebyshevRule& inner)
{
    check_composition(b_vector, config.nakagami_m);
    if (!(r1 >= config.altitude * (1.0 - kRangeSlack) && r1 <= geo.max_distance * (1.0 + kRangeSlack))) {
        throw InvalidArgument("serving distance outside [altitude, max_distance]");
    }
    r1 = std::min(r1, geo.max_distance);
    const InnerNodes nodes = inner_nodes(r1, config.path_loss_exponent, geo.max_distance, inner);
    std::vector<double> scales;
    std::vector<int> exponents;
    alzer_factors(config.nakagami_m, theta, b_vector, scales, exponents);
    const double s = kernels::pgfl_sum(nodes.weighted_r, nodes.ratio, scales, exponents);
    return std::max(0.0, field_prefactor(config, geo) * nodes.half_length * s);
}

MomentResult moment(int b, double theta, const SystemConfig& config, const DerivedGeometry& geo,
                    const QuadratureRules& rules, unsigned threads)
{
    if (b < 1) throw InvalidArgument("moment order b must be >= 1");
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw InvalidArgument("theta must be finite and >= 0");
    const int big_m = config.nakagami_m;
    if (b > 4 || big_m > 5) {
        warn("moment b=" + std::to_string(b) + " with M=" + std::to_string(big_m) +
             " enumerates " + std::to_string(special::binomial(b + big_m - 1, big_m - 1)) +
             " compositions");
    }

    const auto& outer = rules.outer();
    const double r_lo = config.altitude;
    const double r_hi = geo.max_distance;

    // Outer nodes and their inner grids do not depend on the composition.
    const std::size_t k_count = outer.nodes().size();
    std::vector<double> outer_weight(k_count);
    std::vector<double> outer_r(k_count);
    std::vector<InnerNodes> inner(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        outer_r[k] = outer.map(r_lo, r_hi, k);
        outer_weight[k] = outer.weights()[k] * nearest_distance_pdf(outer_r[k], config, geo);
        inner[k] = inner_nodes(outer_r[k], config.path_loss_exponent, r_hi, rules.inner());
    }

    const auto comps = special::compositions(b, big_m);
    const double prefactor = field_prefactor(config, geo);
    std::vector<double> partial(comps.size());
    parallel_for(comps.size(), threads, [&](std::size_t c) {
        const auto& bv = comps[c];
        double coefficient = special::multinomial(b, bv);
        for (int m = 1; m <= big_m; ++m) {
            const double sign = (m % 2 == 1) ? 1.0 : -1.0;
            coefficient *= std::pow(sign * special::binomial(big_m, m), bv[m - 1]);
        }
        std::vector<double> scales;
        std::vector<int> exponents;
        alzer_factors(big_m, theta, bv, scales, exponents);
        double acc = 0.0;
        for (std::size_t k = 0; k < k_count; ++k) {
            const InnerNodes& nodes = inner[k];
            const double q = prefactor * nodes.half_length *
                             kernels::pgfl_sum(nodes.weighted_r, nodes.ratio, scales, exponents);
            acc += outer_weight[k] * std::exp(-std::max(0.0, q));
        }
        partial[c] = coefficient * 0.5 * (r_hi - r_lo) * acc;
    });

    double conditional = 0.0;
    for (double p : partial) conditional += p;
    const double raw = conditional * geo.visibility_probability;

    MomentResult result;
    result.order_b = b;
    result.theta = theta;
    result.unclamped = raw;
    result.value = std::clamp(raw, 0.0, 1.0);
    result.quad_outer = outer.order();
    result.quad_inner = rules.inner().order();
    return result;
}

double coverage_probability(double theta, const SystemConfig& config, const DerivedGeometry& geo,
                            const QuadratureRules& rules)
{
    return moment(1, theta, config, geo, rules).value;
}

double variance(double theta, const SystemConfig& config, const DerivedGeometry& geo,
                const QuadratureRules& rules)
{
    const double m1 = moment(1, theta, config, geo, rules).value;
    const double m2 = moment(2, theta, config, geo, rules).value;
    const double v = m2 - m1 * m1;
    if (v < -1e-6) {
        warn("negative variance " + std::to_string(v) + " from quadrature; clamped to 0");
    }
    return std::max(v, 0.0);
}

BetaFit beta_fit(double m1, double m2)
{
    BetaFit fit;
    fit.m1 = m1;
    fit.m2 = m2;
    if (!(m1 > 0.0 && m1 < 1.0)) {
        fit.diagnostic = "first moment " + std::to_string(m1) + " is not inside (0, 1)";
        return fit;
    }
    const double denom = m1 * m1 - m2;
    if (!(denom < 0.0)) {
        fit.diagnostic = "no spread: M2 <= M1^2";
        return fit;
    }
    if (!(m2 < m1)) {
        fit.diagnostic = "M2 >= M1 is impossible for a variable in [0, 1]";
        return fit;
    }
    fit.kappa = (m1 * m2 - m1 * m1) / denom;
    fit.beta = (1.0 - m1) * (m2 - m1) / denom;
    fit.valid = fit.kappa > 0.0 && fit.beta > 0.0 && std::isfinite(fit.kappa) && std::isfinite(fit.beta);
    if (!fit.valid) fit.diagnostic = "moment matching produced nonpositive shape parameters";
    return fit;
}

double meta_ccdf(const BetaFit& fit, double x)
{
    if (!fit.valid) throw UnfittableMoments("cannot evaluate meta distribution: " + fit.diagnostic);
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("reliability x must lie in [0, 1]");
    return 1.0 - special::regularized_incomplete_beta(x, fit.kappa, fit.beta);
}

double meta_ccdf(double theta, double x, const SystemConfig& config, const DerivedGeometry& geo,
                 const QuadratureRules& rules)
{
    const double m1 = moment(1, theta, config, geo, rules).value;
    const double m2 = moment(2, theta, config, geo, rules).value;
    return meta_ccdf(beta_fit(m1, m2), x);
}

}  // namespace leocov::analytic
