#include "leocov/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <string>

#include "leocov/analytic.hpp"
#include "leocov/error.hpp"
#include "leocov/kernels.hpp"
#include "leocov/parallel.hpp"
#include "leocov/special.hpp"

namespace leocov::sim {

namespace {

std::vector<double> path_loss_ratios(std::span<const double> distances, double r1, double alpha)
{
    std::vector<double> ratio(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) ratio[i] = std::pow(r1 / distances[i], alpha);
    return ratio;
}

struct MeanAndError {
    double mean = 0.0;
    double standard_error = 0.0;
};

// Two-pass sample mean and standard error of the mean, in index order.
template <class F>
MeanAndError mean_and_error(std::size_t n, F value)
{
    MeanAndError out;
    if (n == 0) return out;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += value(i);
    out.mean = sum / static_cast<double>(n);
    if (n < 2) return out;
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = value(i) - out.mean;
        sq += d * d;
    }
    out.standard_error = std::sqrt(sq / static_cast<double>(n - 1) / static_cast<double>(n));
    return out;
}

}  // namespace

std::string_view mode_name(CoverageMode mode)
{
    switch (mode) {
        case CoverageMode::exact_m1: return "exact-m1";
        case CoverageMode::fading_mc: return "fading-mc";
        case CoverageMode::lemma1: return "lemma1";
    }
    return "unknown";
}

CoverageMode parse_mode(std::string_view name)
{
    if (name == "exact-m1") return CoverageMode::exact_m1;
    if (name == "fading-mc") return CoverageMode::fading_mc;
    if (name == "lemma1") return CoverageMode::lemma1;
    throw InvalidArgument("unknown coverage mode '" + std::string(name) + "'");
}

CoverageMode default_mode(const SystemConfig& config)
{
    return config.nakagami_m == 1 ? CoverageMode::exact_m1 : CoverageMode::fading_mc;
}

ConstellationRealization sample_constellation(const SystemConfig& config, const DerivedGeometry& geo,
                                              Philox4x32& rng)
{
    ConstellationRealization out;
    out.seed_info = {rng.seed(), rng.stream()};
    std::poisson_distribution<long> count_dist(expected_visible_count(config, geo));
    const long count = count_dist(rng);
    out.distances.reserve(static_cast<std::size_t>(count));
    // Heights on a sphere are uniform along the axis, so the cap above the
    // horizon plane is sampled exactly by z ~ U[R_E, R_S]. The azimuth does not
    // affect the distance to a user on the axis and is not drawn.
    std::uniform_real_distribution<double> height(config.earth_radius, geo.orbit_radius);
    for (long i = 0; i < count; ++i) {
        out.distances.push_back(distance_from_height(height(rng), geo, config));
    }
    std::sort(out.distances.begin(), out.distances.end());
    return out;
}

CoverageSample conditional_ps(const ConstellationRealization& realization, double theta,
                              const SystemConfig& config, CoverageMode mode, int fading_draws,
                              Philox4x32& rng)
{
    if (mode == CoverageMode::exact_m1 && config.nakagami_m != 1) {
        throw ModeMismatch("exact-m1 mode requires M = 1 (got M = " +
                           std::to_string(config.nakagami_m) + ")");
    }
    if (mode == CoverageMode::fading_mc && fading_draws < 1) {
        throw InvalidArgument("fading-mc mode needs at least one fading draw");
    }
    const auto& d = realization.distances;
    if (d.empty()) return {};

    const double r1 = d.front();
    const std::span<const double> interferers(d.data() + 1, d.size() - 1);

    switch (mode) {
        case CoverageMode::exact_m1: {
            const auto ratio = path_loss_ratios(interferers, r1, config.path_loss_exponent);
            return {kernels::interference_product(ratio, theta, 1), 0.0};
        }
        case CoverageMode::lemma1:
            return {analytic::conditional_coverage_lemma1(theta, r1, interferers, config), 0.0};
        case CoverageMode::fading_mc:
            break;
    }

    // P(|g_1|^2 > theta r1^a I) = Q(M, M theta r1^a I) for unit-mean Gamma(M) power.
    const int big_m = config.nakagami_m;
    const auto ratio = path_loss_ratios(interferers, r1, config.path_loss_exponent);
    std::gamma_distribution<double> power(big_m, 1.0 / big_m);
    std::vector<double> gains(ratio.size());
    std::vector<double> draws(static_cast<std::size_t>(fading_draws));
    for (auto& p : draws) {
        for (auto& g : gains) g = power(rng);
        const double interference = kernels::dot(gains, ratio);
        p = special::regularized_upper_gamma(big_m, big_m * theta * interference);
    }
    const auto stats = mean_and_error(draws.size(), [&](std::size_t i) { return draws[i]; });
    return {std::clamp(stats.mean, 0.0, 1.0), stats.standard_error};
}

std::vector<double> default_ccdf_grid()
{
    std::vector<double> grid(99);
    for (int i = 0; i < 99; ++i) grid[i] = (i + 1) / 100.0;
    return grid;
}

std::vector<std::pair<double, double>> empirical_ccdf(const std::vector<double>& ps,
                                                      const std::vector<double>& grid)
{
    std::vector<double> sorted = ps;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    const double n = static_cast<double>(sorted.size());
    for (double x : grid) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
        out.emplace_back(x, n > 0 ? static_cast<double>(above) / n : 0.0);
    }
    return out;
}

SimulationEstimate estimate(double theta, const SystemConfig& config, std::size_t realizations,
                            const EstimateOptions& options)
{
    if (realizations < 1) throw InvalidArgument("need at least one realization");
    const DerivedGeometry geo = derive(config);
    // Fail before spawning workers.
    if (options.mode == CoverageMode::exact_m1 && config.nakagami_m != 1) {
        throw ModeMismatch("exact-m1 mode requires M = 1");
    }

    std::vector<double> ps(realizations);
    std::vector<std::size_t> visible(realizations);
    parallel_for(realizations, options.threads, [&](std::size_t i) {
        Philox4x32 rng(options.master_seed, i);
        const auto realization = sample_constellation(config, geo, rng);
        visible[i] = realization.distances.size();
        ps[i] = conditional_ps(realization, theta, config, options.mode, options.fading_draws, rng).value;
    });

    SimulationEstimate est;
    est.realizations = realizations;
    est.master_seed = options.master_seed;
    const auto first = mean_and_error(realizations, [&](std::size_t i) { return ps[i]; });
    const auto second = mean_and_error(realizations, [&](std::size_t i) { return ps[i] * ps[i]; });
    est.m1_hat = first.mean;
    est.m1_se = first.standard_error;
    est.m2_hat = second.mean;
    est.m2_se = second.standard_error;
    std::size_t empty = 0;
    double visible_sum = 0.0;
    for (std::size_t i = 0; i < realizations; ++i) {
        empty += visible[i] == 0;
        visible_sum += static_cast<double>(visible[i]);
    }
    est.empty_fraction = static_cast<double>(empty) / static_cast<double>(realizations);
    est.mean_visible = visible_sum / static_cast<double>(realizations);
    est.empirical_ccdf = empirical_ccdf(ps, options.ccdf_grid);
    if (options.keep_per_realization) est.per_realization_ps = std::move(ps);
    return est;
}

}  // namespace leocov::sim
