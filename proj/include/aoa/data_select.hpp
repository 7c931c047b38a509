#pragma once

// Residual-based identify-and-discard subset selection.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aoa/core.hpp"
#include "aoa/report.hpp"

namespace aoa {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// (1/N) * sum over the subset of squared azimuth-row and elevation-row
/// residuals at `estimate`, unweighted.
double residual_cost(std::span<const std::size_t> subset,
                     const Point3& estimate,
                     std::span<const AnglePair> measurements,
                     std::span<const Point3> sensors);

/// Binomial coefficient; saturates at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Lexicographic enumeration of the k-subsets of {0, ..., n-1}.
class SubsetEnumerator {
public:
    /// Throws InputError unless 2 <= k <= n.
    SubsetEnumerator(std::size_t n, std::size_t k);

    /// The next subset, or nullopt once all C(n, k) have been produced.
    std::optional<std::vector<std::size_t>> next();

    std::uint64_t count() const { return binomial(n_, k_); }

private:
    std::size_t n_;
    std::size_t k_;
    std::vector<std::size_t> current_;
    bool started_ = false;
    bool done_ = false;
};

/// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> enumerate_subsets(std::size_t n, std::size_t k);

struct IadOptions {
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

/// Starts from the two-stage WLLS estimate over all L measurements with
/// incumbent residual R(L, .), then runs WLLS on every N-subset and keeps the
/// one whose residual is strictly lower (ties within 1e-15 keep the earlier
/// subset). Degenerate subsets are skipped.
///
/// Throws InputError for N outside [2, L], ResourceError when C(L, N)
/// exceeds the cap, EstimationFailure when nothing could be solved.
EstimateReport iad_select(std::span<const AnglePair> measurements,
                          std::span<const Point3> sensors,
                          std::size_t n,
                          const IadOptions& options = {});

}  // namespace aoa
