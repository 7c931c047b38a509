#include "aoa/data_select.hpp"

#include <limits>
#include <numeric>
#include <string>

#include "aoa/errors.hpp"
#include "aoa/wlls.hpp"

namespace aoa {

namespace {

constexpr double kTieTolerance = 1e-15;

bool improves(double candidate, double incumbent)
{
    return candidate < incumbent && !(incumbent - candidate <= kTieTolerance);
}

}  // namespace

double residual_cost(std::span<const std::size_t> subset,
                     const Point3& estimate,
                     std::span<const AnglePair> measurements,
                     std::span<const Point3> sensors)
{
    if (subset.empty()) {
        throw InputError("residual cost needs a nonempty subset");
    }
    double sum = 0.0;
    for (const auto id : subset) {
        const Point3 d = estimate - sensors[id];
        const double az = azimuth_row(measurements[id]).dot(d);
        const double el = elevation_row(measurements[id]).dot(d);
        sum += az * az + el * el;
    }
    return sum / static_cast<double>(subset.size());
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i stays integral at every step.
        const std::uint64_t factor = n - k + i;
        const std::uint64_t g = std::gcd(result, i);
        const std::uint64_t r = result / g;
        const std::uint64_t f = factor / (i / g);
        if (r != 0 && f > std::numeric_limits<std::uint64_t>::max() / r) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        result = r * f;
    }
    return result;
}

SubsetEnumerator::SubsetEnumerator(std::size_t n, std::size_t k) : n_(n), k_(k)
{
    if (k < 2 || k > n) {
        throw InputError("subset size " + std::to_string(k) + " must lie in [2, " + std::to_string(n) + "]");
    }
}

std::optional<std::vector<std::size_t>> SubsetEnumerator::next()
{
    if (done_) {
        return std::nullopt;
    }
    if (!started_) {
        started_ = true;
        current_.resize(k_);
        std::iota(current_.begin(), current_.end(), std::size_t{0});
        return current_;
    }
    // Rightmost position that can still advance.
    std::size_t i = k_;
    while (i > 0 && current_[i - 1] == n_ - k_ + (i - 1)) {
        --i;
    }
    if (i == 0) {
        done_ = true;
        return std::nullopt;
    }
    ++current_[i - 1];
    for (std::size_t j = i; j < k_; ++j) {
        current_[j] = current_[j - 1] + 1;
    }
    return current_;
}

std::vector<std::vector<std::size_t>> enumerate_subsets(std::size_t n, std::size_t k)
{
    SubsetEnumerator it(n, k);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(static_cast<std::size_t>(it.count()));
    while (auto s = it.next()) {
        out.push_back(std::move(*s));
    }
    return out;
}

EstimateReport iad_select(std::span<const AnglePair> measurements,
                          std::span<const Point3> sensors,
                          std::size_t n,
                          const IadOptions& options)
{
    if (measurements.size() != sensors.size()) {
        throw InputError("measurement count differs from sensor count");
    }
    const std::size_t l = sensors.size();
    SubsetEnumerator subsets(l, n);
    if (subsets.count() > options.enumeration_cap) {
        throw ResourceError("C(" + std::to_string(l) + ", " + std::to_string(n) + ") = " +
                            std::to_string(subsets.count()) + " exceeds the enumeration cap");
    }

    EstimateReport best;
    best.method = "alg1";
    double delta = std::numeric_limits<double>::infinity();
    bool have_estimate = false;

    std::vector<std::size_t> all(l);
    std::iota(all.begin(), all.end(), std::size_t{0});
    try {
        const EstimateReport init = solve_wlls(measurements, sensors);
        best.position = init.position;
        best.subset = all;
        delta = residual_cost(all, init.position, measurements, sensors);
        have_estimate = true;
    } catch (const DegenerateGeometryError&) {
    }

    while (auto subset = subsets.next()) {
        EstimateReport candidate;
        try {
            candidate = solve_wlls(build_linear_system(measurements, sensors, *subset), sensors);
        } catch (const DegenerateGeometryError&) {
            continue;
        }
        const double r = residual_cost(*subset, candidate.position, measurements, sensors);
        if (!have_estimate || improves(r, delta)) {
            delta = r;
            best.position = candidate.position;
            best.subset = std::move(*subset);
            have_estimate = true;
        }
    }

    if (!have_estimate) {
        throw EstimationFailure("every measurement subset is degenerate");
    }
    best.residual = delta;
    return best;
}

}  // namespace aoa
