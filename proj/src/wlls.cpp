#include "aoa/wlls.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <numeric>

#include "aoa/errors.hpp"

namespace aoa {

namespace {

constexpr double kRankTolerance = 1e-10;

void check_lengths(std::span<const AnglePair> measurements, std::span<const Point3> sensors)
{
    if (measurements.size() != sensors.size()) {
        throw InputError("measurement count (" + std::to_string(measurements.size()) +
                         ") differs from sensor count (" + std::to_string(sensors.size()) + ")");
    }
}

}  // namespace

Eigen::Vector3d azimuth_row(const AnglePair& m)
{
    return {-std::sin(m.azimuth()), std::cos(m.azimuth()), 0.0};
}

Eigen::Vector3d elevation_row(const AnglePair& m)
{
    const Eigen::Vector3d u = dvoa_from_angles(m).vector();
    return Eigen::Vector3d::UnitZ() - u * std::sin(m.elevation());
}

LinearSystem build_linear_system(std::span<const AnglePair> measurements,
                                 std::span<const Point3> sensors,
                                 std::span<const std::size_t> subset)
{
    check_lengths(measurements, sensors);
    const std::size_t m = subset.size();
    if (m < 2) {
        throw InputError("at least two measurements are required");
    }

    LinearSystem sys;
    sys.a.resize(static_cast<Eigen::Index>(2 * m), 3);
    sys.b.resize(static_cast<Eigen::Index>(2 * m));
    sys.sensor_index.assign(subset.begin(), subset.end());
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t id = subset[j];
        if (id >= sensors.size()) {
            throw InputError("sensor id " + std::to_string(id) + " out of range");
        }
        const auto az = static_cast<Eigen::Index>(j);
        const auto el = static_cast<Eigen::Index>(m + j);
        const Eigen::Vector3d c = azimuth_row(measurements[id]);
        const Eigen::Vector3d e = elevation_row(measurements[id]);
        sys.a.row(az) = c.transpose();
        sys.a.row(el) = e.transpose();
        sys.b(az) = c.dot(sensors[id]);
        sys.b(el) = e.dot(sensors[id]);
    }
    return sys;
}

LinearSystem build_linear_system(std::span<const AnglePair> measurements, std::span<const Point3> sensors)
{
    check_lengths(measurements, sensors);
    std::vector<std::size_t> all(measurements.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return build_linear_system(measurements, sensors, all);
}

Point3 solve_weighted(const LinearSystem& sys, std::span<const double> weights)
{
    const std::size_t m = sys.measurement_count();
    if (weights.size() != m) {
        throw InputError("weight count must equal measurement count");
    }

    Eigen::Matrix<double, Eigen::Dynamic, 3> wa = sys.a;
    Eigen::VectorXd wb = sys.b;
    for (std::size_t j = 0; j < m; ++j) {
        if (!(weights[j] >= 0.0)) {
            throw InputError("weights must be nonnegative");
        }
        const double s = std::sqrt(weights[j]);
        for (const auto row : {static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m + j)}) {
            wa.row(row) *= s;
            wb(row) *= s;
        }
    }

    const Eigen::HouseholderQR<Eigen::Matrix<double, Eigen::Dynamic, 3>> qr(wa);
    const Eigen::Matrix3d r = qr.matrixQR().topRows<3>().triangularView<Eigen::Upper>();
    const Eigen::Vector3d qtb = (qr.householderQ().transpose() * wb).head<3>();

    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || !(sv(2) >= kRankTolerance * sv(0))) {
        throw DegenerateGeometryError("linear system is rank deficient (singular value ratio " +
                                      std::to_string(sv(0) > 0.0 ? sv(2) / sv(0) : 0.0) + ")");
    }
    return svd.solve(qtb);
}

Point3 solve_lls(const LinearSystem& sys)
{
    const std::vector<double> ones(sys.measurement_count(), 1.0);
    return solve_weighted(sys, ones);
}

std::vector<double> compute_weights(const Point3& x_init, std::span<const Point3> sensors)
{
    std::vector<double> dist(sensors.size());
    double total = 0.0;
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        dist[i] = (x_init - sensors[i]).norm();
        total += dist[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw DegenerateGeometryError("distance weights undefined: all distances are zero");
    }
    std::vector<double> w(sensors.size());
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        w[i] = 1.0 - dist[i] / total;
    }
    return w;
}

double weighted_residual(const LinearSystem& sys, std::span<const double> weights, const Point3& x)
{
    const Eigen::VectorXd r = sys.a * x - sys.b;
    const std::size_t m = sys.measurement_count();
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double az = r(static_cast<Eigen::Index>(j));
        const double el = r(static_cast<Eigen::Index>(m + j));
        sum += weights[j] * (az * az + el * el);
    }
    return sum;
}

EstimateReport solve_wlls(const LinearSystem& sys, std::span<const Point3> sensors)
{
    const Point3 x_bar = solve_lls(sys);

    std::vector<Point3> used;
    used.reserve(sys.measurement_count());
    for (const auto id : sys.sensor_index) {
        used.push_back(sensors[id]);
    }
    const std::vector<double> w = compute_weights(x_bar, used);

    EstimateReport report;
    report.method = "wlls";
    report.position = solve_weighted(sys, w);
    report.subset = sys.sensor_index;
    report.residual = weighted_residual(sys, w, report.position);
    return report;
}

EstimateReport solve_wlls(std::span<const AnglePair> measurements, std::span<const Point3> sensors)
{
    return solve_wlls(build_linear_system(measurements, sensors), sensors);
}

}  // namespace aoa
