#pragma once

// Linearized AOA constraints and the two-stage closed-form weighted linear
// least squares estimator.
//
// Each sensor i contributes two rows acting on (x - x_i):
//   azimuth row    c_i = (-sin az_i, cos az_i, 0)
//   elevation row  k - u_i sin el_i,  k = (0, 0, 1), u_i the measured DVOA
// The system stores all azimuth rows first, then all elevation rows, with
// b holding each row applied to its sensor position.

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

#include "aoa/core.hpp"
#include "aoa/report.hpp"

namespace aoa {

struct LinearSystem {
    Eigen::Matrix<double, Eigen::Dynamic, 3> a;
    Eigen::VectorXd b;
    std::vector<std::size_t> sensor_index;  // sensor id of measurement j (rows j and m + j)

    std::size_t measurement_count() const { return sensor_index.size(); }
};

/// Throws InputError on length mismatch or fewer than two measurements.
LinearSystem build_linear_system(std::span<const AnglePair> measurements, std::span<const Point3> sensors);

/// Same, restricted to the listed sensor ids (in the given order).
LinearSystem build_linear_system(std::span<const AnglePair> measurements,
                                 std::span<const Point3> sensors,
                                 std::span<const std::size_t> subset);

/// Azimuth and elevation constraint rows for one measurement.
Eigen::Vector3d azimuth_row(const AnglePair& m);
Eigen::Vector3d elevation_row(const AnglePair& m);

/// Minimizes sum_j w_j * ((A x - b)_j^2 + (A x - b)_{m+j}^2), one weight per
/// measurement. Throws DegenerateGeometryError when the smallest singular
/// value of W^{1/2} A is below 1e-10 of the largest.
Point3 solve_weighted(const LinearSystem& sys, std::span<const double> weights);

/// Unweighted solve (all weights 1).
Point3 solve_lls(const LinearSystem& sys);

/// w_i = 1 - |x - x_i| / sum_j |x - x_j|. Weights sum to L - 1.
std::vector<double> compute_weights(const Point3& x_init, std::span<const Point3> sensors);

/// |W^{1/2} (A x - b)|^2.
double weighted_residual(const LinearSystem& sys, std::span<const double> weights, const Point3& x);

/// Two-stage estimate: unweighted solve, distance weights from that
/// estimate, weighted solve. The report residual is the weighted residual.
EstimateReport solve_wlls(const LinearSystem& sys, std::span<const Point3> sensors);
EstimateReport solve_wlls(std::span<const AnglePair> measurements, std::span<const Point3> sensors);

}  // namespace aoa
