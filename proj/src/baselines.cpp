#include "aoa/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "aoa/errors.hpp"
#include "aoa/wlls.hpp"

namespace aoa {

EstimateReport solve_lls_baseline(std::span<const AnglePair> measurements, std::span<const Point3> sensors)
{
    const LinearSystem sys = build_linear_system(measurements, sensors);
    EstimateReport report;
    report.method = "lls";
    report.position = solve_lls(sys);
    report.subset = sys.sensor_index;
    report.residual = residual_cost(report.subset, report.position, measurements, sensors);
    return report;
}

void RwghAccumulator::add(const Point3& estimate, double residual)
{
    const double inv = 1.0 / std::max(residual, kRwghResidualFloor);
    z += estimate * inv;
    rho += inv;
}

EstimateReport rwgh(std::span<const AnglePair> measurements,
                    std::span<const Point3> sensors,
                    const RwghOptions& options)
{
    if (measurements.size() != sensors.size()) {
        throw InputError("measurement count differs from sensor count");
    }
    const std::size_t l = sensors.size();
    if (l < 2) {
        throw InputError("at least two measurements are required");
    }
    std::uint64_t total = 0;
    for (std::size_t j = 2; j <= l; ++j) {
        const std::uint64_t c = binomial(l, j);
        total = c > std::numeric_limits<std::uint64_t>::max() - total ? std::numeric_limits<std::uint64_t>::max()
                                                                     : total + c;
    }
    if (total > options.enumeration_cap) {
        throw ResourceError("residual weighting would enumerate " + std::to_string(total) +
                            " subsets, above the enumeration cap");
    }

    RwghAccumulator acc;
    for (std::size_t j = 2; j <= l; ++j) {
        SubsetEnumerator subsets(l, j);
        while (auto subset = subsets.next()) {
            Point3 estimate;
            try {
                estimate = solve_wlls(build_linear_system(measurements, sensors, *subset), sensors).position;
            } catch (const DegenerateGeometryError&) {
                continue;
            }
            acc.add(estimate, residual_cost(*subset, estimate, measurements, sensors));
        }
    }
    if (acc.empty()) {
        throw EstimationFailure("every measurement subset is degenerate");
    }

    EstimateReport report;
    report.method = "rwgh";
    report.position = acc.mean();
    report.subset.resize(l);
    std::iota(report.subset.begin(), report.subset.end(), std::size_t{0});
    report.residual = residual_cost(report.subset, report.position, measurements, sensors);
    return report;
}

}  // namespace aoa
