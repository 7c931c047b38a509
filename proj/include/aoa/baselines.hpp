#pragma once

// Comparison estimators: plain linear least squares and residual weighting.

#include <cstdint>
#include <span>

#include "aoa/core.hpp"
#include "aoa/data_select.hpp"
#include "aoa/report.hpp"

namespace aoa {

/// Unweighted solve over all measurements. The report residual is the
/// subset residual cost over all L measurements.
EstimateReport solve_lls_baseline(std::span<const AnglePair> measurements, std::span<const Point3> sensors);

/// Running sums of the residual-weighted average.
struct RwghAccumulator {
    Point3 z = Point3::Zero();
    double rho = 0.0;

    void add(const Point3& estimate, double residual);
    bool empty() const { return rho == 0.0; }
    Point3 mean() const { return z / rho; }
};

/// Residuals below this are raised to it before inversion.
inline constexpr double kRwghResidualFloor = 1e-12;

struct RwghOptions {
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

/// Averages the WLLS estimates of every subset of size 2..L, each weighted by
/// the inverse of its residual cost. Degenerate subsets contribute nothing.
EstimateReport rwgh(std::span<const AnglePair> measurements,
                    std::span<const Point3> sensors,
                    const RwghOptions& options = {});

}  // namespace aoa
