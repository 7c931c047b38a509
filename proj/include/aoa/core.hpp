#pragma once

// Geometry, angle conventions, direction vectors of arrival and the
// Gaussian-uniform mixture measurement model.

#include <Eigen/Core>

#include <numbers>
#include <span>
#include <vector>

#include "aoa/random.hpp"

namespace aoa {

inline constexpr double kPi = std::numbers::pi;

/// Cartesian position in meters.
using Point3 = Eigen::Vector3d;

/// Azimuth/elevation pair in radians, both held in [-pi, pi].
class AnglePair {
public:
    AnglePair() = default;
    /// Wraps both angles into [-pi, pi].
    AnglePair(double azimuth, double elevation);

    double azimuth() const { return azimuth_; }
    double elevation() const { return elevation_; }

private:
    double azimuth_ = 0.0;
    double elevation_ = 0.0;
};

/// Unit direction vector of arrival: (cos el cos az, cos el sin az, sin el).
class Dvoa {
public:
    /// Throws InvalidDvoaError unless |u| is 1 within 1e-9.
    explicit Dvoa(const Eigen::Vector3d& u);

    const Eigen::Vector3d& vector() const { return u_; }

private:
    Eigen::Vector3d u_;
};

struct NoiseSpec {
    double sigma = 0.0;   // radians
    double p_nlos = 0.0;  // probability of a uniform (-pi, pi) draw

    /// Throws InputError on sigma <= 0 or p outside [0, 1].
    NoiseSpec(double sigma_rad, double p);
    NoiseSpec() = default;

    bool is_nlos() const { return p_nlos > 0.0; }
};

struct Scenario {
    std::vector<Point3> sensors;
    Point3 source = Point3::Zero();
    std::vector<NoiseSpec> noise;

    /// Throws InputError when fewer than two sensors, sensors repeat,
    /// or the noise list does not match the sensor list.
    void validate() const;
};

struct AngleNoise {
    double azimuth;
    double elevation;
};

bool is_finite(const Point3& p);

/// Returns a - b reduced into (-pi, pi].
double wrapped_diff(double a, double b);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Angles of the ray from sensor to source. Elevation is measured against the
/// horizontal (xy-plane) range, so it lies in [-pi/2, pi/2]; azimuth is 0 when
/// the horizontal offset vanishes. Throws DegenerateGeometryError when the
/// points coincide.
AnglePair true_angles(const Point3& source, const Point3& sensor);

Dvoa dvoa_from_angles(const AnglePair& a);

/// Inverse of dvoa_from_angles; azimuth is 0 at the poles.
AnglePair angles_from_dvoa(const Dvoa& u);

AngleNoise sample_noise(const NoiseSpec& spec, RandomStream& rng);

std::vector<AnglePair> generate_measurements(const Scenario& sc, RandomStream& rng);

/// Noise-free measurements of source from every sensor.
std::vector<AnglePair> exact_measurements(const Point3& source, std::span<const Point3> sensors);

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace aoa
