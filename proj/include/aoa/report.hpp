#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aoa/core.hpp"

namespace aoa {

/// Position estimate plus whatever the producing method knows about it.
struct EstimateReport {
    Point3 position = Point3::Zero();
    std::string method;
    std::vector<std::size_t> subset;  // sensor ids the estimate was built from
    double residual = 0.0;            // method-specific objective at `position`
    std::size_t iterations = 0;       // accepted iterations (annealing only)
    std::size_t proposals = 0;        // total proposals (annealing only)
    bool truncated = false;           // proposal cap hit before termination
};

}  // namespace aoa
