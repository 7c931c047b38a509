#include "aoa/core.hpp"

#include <cmath>
#include <string>

#include "aoa/errors.hpp"

namespace aoa {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

}  // namespace

AnglePair::AnglePair(double azimuth, double elevation)
    : azimuth_(wrap_angle(azimuth)), elevation_(wrap_angle(elevation))
{
}

Dvoa::Dvoa(const Eigen::Vector3d& u) : u_(u)
{
    const double n = u.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-9) {
        throw InvalidDvoaError("direction vector is not unit norm (|u| = " + std::to_string(n) + ")");
    }
}

NoiseSpec::NoiseSpec(double sigma_rad, double p) : sigma(sigma_rad), p_nlos(p)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InputError("noise sigma must be positive and finite");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InputError("NLOS probability must lie in [0, 1]");
    }
}

void Scenario::validate() const
{
    if (sensors.size() < 2) {
        throw InputError("a scenario needs at least two sensors");
    }
    if (noise.size() != sensors.size()) {
        throw InputError("noise list length must equal sensor count");
    }
    if (!is_finite(source)) {
        throw InputError("source position is not finite");
    }
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        if (!is_finite(sensors[i])) {
            throw InputError("sensor " + std::to_string(i) + " position is not finite");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (sensors[i] == sensors[j]) {
                throw InputError("sensors " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
            }
        }
    }
}

bool is_finite(const Point3& p)
{
    return std::isfinite(p.x()) && std::isfinite(p.y()) && std::isfinite(p.z());
}

double wrapped_diff(double a, double b)
{
    double d = std::remainder(a - b, kTwoPi);
    if (d <= -kPi) {
        d += kTwoPi;
    }
    return d;
}

double wrap_angle(double a)
{
    return wrapped_diff(a, 0.0);
}

AnglePair true_angles(const Point3& source, const Point3& sensor)
{
    const Point3 d = source - sensor;
    if (d.x() == 0.0 && d.y() == 0.0 && d.z() == 0.0) {
        throw DegenerateGeometryError("source coincides with sensor");
    }
    const double horizontal = std::hypot(d.x(), d.y());
    const double azimuth = horizontal == 0.0 ? 0.0 : std::atan2(d.y(), d.x());
    return {azimuth, std::atan2(d.z(), horizontal)};
}

Dvoa dvoa_from_angles(const AnglePair& a)
{
    const double ce = std::cos(a.elevation());
    Eigen::Vector3d u(ce * std::cos(a.azimuth()), ce * std::sin(a.azimuth()), std::sin(a.elevation()));
    return Dvoa(u.normalized());
}

AnglePair angles_from_dvoa(const Dvoa& dvoa)
{
    const auto& u = dvoa.vector();
    const double horizontal = std::hypot(u.x(), u.y());
    const double azimuth = horizontal == 0.0 ? 0.0 : std::atan2(u.y(), u.x());
    return {azimuth, std::atan2(u.z(), horizontal)};
}

AngleNoise sample_noise(const NoiseSpec& spec, RandomStream& rng)
{
    auto draw = [&]() {
        if (spec.p_nlos > 0.0 && rng.uniform01() < spec.p_nlos) {
            return rng.uniform(-kPi, kPi);
        }
        return spec.sigma * rng.standard_normal();
    };
    const double m = draw();
    const double n = draw();
    return {m, n};
}

std::vector<AnglePair> generate_measurements(const Scenario& sc, RandomStream& rng)
{
    sc.validate();
    std::vector<AnglePair> out;
    out.reserve(sc.sensors.size());
    for (std::size_t i = 0; i < sc.sensors.size(); ++i) {
        const AnglePair truth = true_angles(sc.source, sc.sensors[i]);
        const AngleNoise e = sample_noise(sc.noise[i], rng);
        out.emplace_back(truth.azimuth() + e.azimuth, truth.elevation() + e.elevation);
    }
    return out;
}

std::vector<AnglePair> exact_measurements(const Point3& source, std::span<const Point3> sensors)
{
    std::vector<AnglePair> out;
    out.reserve(sensors.size());
    for (const auto& s : sensors) {
        out.push_back(true_angles(source, s));
    }
    return out;
}

}  // namespace aoa
