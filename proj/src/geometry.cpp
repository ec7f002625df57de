#include "leocov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "leocov/error.hpp"

namespace leocov {

void SystemConfig::validate() const
{
    auto fail = [](const std::string& what) { throw InvalidConfig("invalid config: " + what); };
    if (!(std::isfinite(earth_radius) && earth_radius > 0.0)) fail("earth_radius must be > 0");
    if (!(std::isfinite(altitude) && altitude > 0.0)) fail("altitude must be > 0");
    if (!(std::isfinite(density) && density > 0.0)) fail("density must be > 0");
    if (!(std::isfinite(path_loss_exponent) && path_loss_exponent > 2.0)) {
        fail("path_loss_exponent must be > 2");
    }
    if (nakagami_m < 1) fail("nakagami_m must be >= 1");
    if (!(std::isfinite(sir_threshold) && sir_threshold > 0.0)) fail("sir_threshold must be > 0");
}

DerivedGeometry derive(const SystemConfig& config)
{
    config.validate();
    DerivedGeometry geo;
    const double re = config.earth_radius;
    const double rs = re + config.altitude;
    geo.orbit_radius = rs;
    // rs^2 - re^2 factored to avoid cancellation for low shells.
    geo.max_distance = std::sqrt(config.altitude * (rs + re));
    geo.cap_area = 2.0 * std::numbers::pi * rs * config.altitude;
    geo.visibility_probability = -std::expm1(-config.density * geo.cap_area);
    return geo;
}

double expected_visible_count(const SystemConfig& config, const DerivedGeometry& geo)
{
    return config.density * geo.cap_area;
}

double distance_from_height(double z, const DerivedGeometry& geo, const SystemConfig& config)
{
    const double re = config.earth_radius;
    const double rs = geo.orbit_radius;
    if (!(z >= re && z <= rs)) {
        throw DomainError("height " + std::to_string(z) + " m is outside the visible cap");
    }
    // r^2 = rs^2 + re^2 - 2 re z, rearranged as (rs - re)^2 + 2 re (rs - z).
    const double h = rs - re;
    const double r = std::sqrt(h * h + 2.0 * re * (rs - z));
    return std::clamp(r, config.altitude, geo.max_distance);
}

double height_from_distance(double r, const DerivedGeometry& geo, const SystemConfig& config)
{
    if (!(r >= config.altitude && r <= geo.max_distance)) {
        throw DomainError("distance " + std::to_string(r) + " m is outside [altitude, max_distance]");
    }
    const double re = config.earth_radius;
    const double h = config.altitude;
    const double z = geo.orbit_radius - (r - h) * (r + h) / (2.0 * re);
    return std::clamp(z, re, geo.orbit_radius);
}

}  // namespace leocov
