#pragma once

// Monte Carlo reference for the analytic engine: Poisson constellations on
// the visible cap, per-realization conditional coverage, and moment / CCDF
// estimates with standard errors.

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "leocov/geometry.hpp"
#include "leocov/rng.hpp"

namespace leocov::sim {

struct StreamInfo {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

struct ConstellationRealization {
    std::vector<double> distances;  // ascending; empty when the cap is empty
    StreamInfo seed_info;
};

/// How P_s(theta) is computed for one realization.
enum class CoverageMode {
    exact_m1,   // closed-form product; Rayleigh fading only
    fading_mc,  // nested Monte Carlo over the interferer fading
    lemma1,     // analytic approximation from the analytic engine
};

std::string_view mode_name(CoverageMode mode);

/// Parses "exact-m1", "fading-mc", "lemma1".
CoverageMode parse_mode(std::string_view name);

/// exact_m1 when M == 1, fading_mc otherwise.
CoverageMode default_mode(const SystemConfig& config);

/// Draws a Poisson number of satellites uniformly on the visible cap.
ConstellationRealization sample_constellation(const SystemConfig& config, const DerivedGeometry& geo,
                                              Philox4x32& rng);

struct CoverageSample {
    double value = 0.0;
    double standard_error = 0.0;  // nonzero only for fading_mc
};

/// Conditional coverage of one realization; 0 when no satellite is visible.
/// Throws ModeMismatch for exact_m1 with M != 1 and InvalidArgument for
/// fading_mc with zero draws.
CoverageSample conditional_ps(const ConstellationRealization& realization, double theta,
                              const SystemConfig& config, CoverageMode mode, int fading_draws,
                              Philox4x32& rng);

/// 0.01, 0.02, ..., 0.99.
std::vector<double> default_ccdf_grid();

struct EstimateOptions {
    CoverageMode mode = CoverageMode::exact_m1;
    int fading_draws = 2000;
    std::uint64_t master_seed = 1;
    unsigned threads = 0;
    std::vector<double> ccdf_grid = default_ccdf_grid();
    bool keep_per_realization = false;
};

struct SimulationEstimate {
    std::size_t realizations = 0;
    std::uint64_t master_seed = 0;
    double m1_hat = 0.0;
    double m1_se = 0.0;
    double m2_hat = 0.0;
    double m2_se = 0.0;
    double empty_fraction = 0.0;
    double mean_visible = 0.0;
    std::vector<std::pair<double, double>> empirical_ccdf;  // (x, Pr(P_s > x))
    std::optional<std::vector<double>> per_realization_ps;
};

/// Samples `realizations` constellations; realization i uses Philox stream
/// (master_seed, i) for both the geometry and the fading. Output is
/// bit-identical for any thread count.
SimulationEstimate estimate(double theta, const SystemConfig& config, std::size_t realizations,
                            const EstimateOptions& options);

/// Pr(P_s > x) for each x in `grid`.
std::vector<std::pair<double, double>> empirical_ccdf(const std::vector<double>& ps,
                                                      const std::vector<double>& grid);

}  // namespace leocov::sim
