#pragma once

// Monte-Carlo benchmark driver: scenario presets, per-trial data generation,
// RMSE aggregation and CSV reporting.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "aoa/asa.hpp"
#include "aoa/core.hpp"
#include "aoa/report.hpp"

namespace aoa {

enum class Method { alg1, alg2, lls, wlls, rwgh };

inline constexpr Method kAllMethods[] = {Method::alg1, Method::alg2, Method::lls, Method::wlls, Method::rwgh};

std::string_view method_name(Method m);
/// Throws InputError for unknown names.
Method parse_method(std::string_view name);
/// Comma-separated list, e.g. "alg1,lls".
std::vector<Method> parse_method_list(std::string_view list);

/// Annealing settings that do not depend on geometry.
struct AsaParams {
    double t0 = 100.0;
    std::size_t n_max = 3000;
    double gamma = 1e-6;
    double cooling_c = 1.0;

    AsaConfig make_config(std::span<const Point3> sensors) const;
};

struct ScenarioConfig {
    std::size_t num_sensors = 10;
    double region = 20.0;  // cube side, origin centered, meters
    double sigma_deg = 1.0;
    std::size_t nlos_count = 0;
    std::vector<double> p_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t trials = 1000;
    std::vector<Method> methods = {Method::alg1, Method::alg2, Method::lls, Method::wlls, Method::rwgh};
    std::optional<std::size_t> alg1_n;  // defaults to the LOS count
    std::uint64_t seed = 0;
    bool redraw_nlos = true;  // false: one NLOS link set shared by all trials
    AsaParams asa;

    std::size_t effective_alg1_n() const;
    bool uses(Method m) const;

    /// Throws InputError when an invariant is violated.
    void validate() const;
};

/// mild / moderate / severe: 2 / 5 / 8 NLOS links out of 10.
ScenarioConfig preset(std::string_view name);

void to_json(nlohmann::json& j, const ScenarioConfig& cfg);
/// Missing fields keep their defaults; unknown fields are rejected.
void from_json(const nlohmann::json& j, ScenarioConfig& cfg);

struct RmseRecord {
    std::string method;
    double p = 0.0;        // NaN when not applicable
    std::size_t n = 0;     // measurements selected (alg1) or available
    std::size_t trials = 0;
    std::size_t failures = 0;
    double rmse = 0.0;     // meters, over successful trials
};

/// Throws InputError on empty or mismatched input.
double rmse(std::span<const Point3> estimates, std::span<const Point3> truths);

/// Streaming sum of squared errors with failure accounting.
class RmseAccumulator {
public:
    void add(const Point3& estimate, const Point3& truth);
    void add_squared(double sq);
    void add_failure() { ++failures_; }

    std::size_t successes() const { return count_; }
    std::size_t failures() const { return failures_; }
    double value() const;

private:
    double sum_sq_ = 0.0;
    std::size_t count_ = 0;
    std::size_t failures_ = 0;
};

/// One Monte-Carlo draw: geometry, link states and noisy measurements.
struct Trial {
    Scenario scenario;
    std::vector<bool> nlos;
    std::vector<AnglePair> measurements;
};

/// Deterministic in (cfg.seed, trial index, p); geometry and link states do
/// not depend on p.
Trial make_trial(const ScenarioConfig& cfg, double p, std::size_t trial_index);

/// Runs one estimator. `rng` feeds the annealing start and proposals.
EstimateReport run_method(Method m,
                          std::span<const AnglePair> measurements,
                          std::span<const Point3> sensors,
                          std::size_t alg1_n,
                          const AsaParams& asa,
                          RandomStream& rng);

/// Stream for the annealing run of one trial; shared across the p grid and
/// independent of which other methods are enabled.
RandomStream method_stream(const ScenarioConfig& cfg, std::size_t trial_index);

/// One record per (p, method), p-major in grid order.
std::vector<RmseRecord> run_scenario(const ScenarioConfig& cfg);

/// Records keyed by N for alg1 plus one record per other enabled method,
/// for every p in the grid.
std::vector<RmseRecord> sweep_n(const ScenarioConfig& cfg, std::span<const std::size_t> n_values);

/// Worker count from AOA_THREADS, else hardware concurrency.
std::size_t worker_count();

/// Calls fn(i) for i in [0, count) on worker_count() threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Shortest round-trip decimal text; "nan" / "inf" for non-finite values.
std::string format_double(double v);

void write_rmse_csv(std::ostream& out, std::span<const RmseRecord> records);

}  // namespace aoa
