#pragma once

// Spherical geometry of a user on the Earth surface looking at a constellation
// shell. Lengths are meters, densities satellites per square meter.

namespace leocov {

struct SystemConfig {
    double earth_radius = 6.371e6;
    double altitude = 5.0e5;
    double density = 1e-12;
    double path_loss_exponent = 3.5;
    int nakagami_m = 1;
    double sir_threshold = 0.1;

    /// Throws InvalidConfig naming the first violated field.
    void validate() const;
};

struct DerivedGeometry {
    double orbit_radius = 0.0;    // earth_radius + altitude
    double max_distance = 0.0;    // distance to a satellite on the horizon
    double cap_area = 0.0;        // visible part of the orbit shell
    double visibility_probability = 0.0;  // Pr(at least one satellite visible)
};

DerivedGeometry derive(const SystemConfig& config);

/// Mean number of satellites on the visible cap, density * cap area.
double expected_visible_count(const SystemConfig& config, const DerivedGeometry& geo);

/// User-to-satellite distance for a satellite at Cartesian height z above the
/// Earth center (the user sits at (0, 0, earth_radius)). Valid for
/// earth_radius <= z <= orbit_radius; throws DomainError otherwise.
double distance_from_height(double z, const DerivedGeometry& geo, const SystemConfig& config);

/// Inverse of distance_from_height on [altitude, max_distance].
double height_from_distance(double r, const DerivedGeometry& geo, const SystemConfig& config);

}  // namespace leocov
