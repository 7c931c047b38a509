#pragma once

// Simulated-annealing minimization of the l1 angle-residual objective.
//
//   objective     psi(x) = sum_i |az_i - az_i(x)| + |el_i - el_i(x)|   (wrapped)
//   schedule      T(k)   = T0 exp(-c k^(1/D))
//   proposal      x'     = x + s o r, r_j ~ F_T with
//                 F_T(r) = 1/2 + sgn(r)/2 * ln(1 + |r|/T) / ln(1 + 1/T)
//   acceptance    1 if psi' <= psi, else 1 / (1 + exp((psi' - psi) / T))
//
// k counts accepted moves only; total proposals are bounded separately.

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <span>

#include "aoa/core.hpp"
#include "aoa/random.hpp"
#include "aoa/report.hpp"

namespace aoa {

struct Bounds {
    Point3 lower = Point3::Zero();
    Point3 upper = Point3::Zero();

    bool contains(const Point3& p) const;
    Point3 clamp(const Point3& p) const;
};

struct AsaConfig {
    double t0 = 100.0;
    std::size_t n_max = 3000;
    double gamma = 1e-6;
    double cooling_c = 1.0;
    int dim = 3;
    Bounds bounds;
    Eigen::Vector3d scale = Eigen::Vector3d::Ones();
    std::size_t proposal_cap = 50 * 3000;

    /// Throws InputError when an invariant is violated.
    void validate() const;
};

/// Default search box: the sensors' bounding box padded on every axis by
/// half of its largest side; step scale is half of each padded side.
AsaConfig default_asa_config(std::span<const Point3> sensors);

/// Re-derives proposal_cap as 50 * n_max.
void set_iteration_budget(AsaConfig& cfg, std::size_t n_max);

/// Throws DegenerateGeometryError when x coincides with a sensor.
double l1_objective(const Point3& x, std::span<const AnglePair> measurements, std::span<const Point3> sensors);

double temperature(std::size_t k, const AsaConfig& cfg);

/// Inverse of F_T evaluated at u in (0, 1).
double r_from_uniform(double t, double u);

double sample_r(double t, RandomStream& rng);

/// F_T(r) for r in [-1, 1].
double proposal_cdf(double t, double r);

/// x + s o r, clamped into the configured bounds.
Point3 apply_step(const Point3& x, const Eigen::Vector3d& r, const AsaConfig& cfg);

Point3 generate_candidate(const Point3& x, double t, const AsaConfig& cfg, RandomStream& rng);

/// Probability of moving from psi_old to psi_new; values below 1e-300 are
/// returned as 0.
double acceptance(double psi_new, double psi_old, double t);

struct AsaTraceEvent {
    std::size_t k;         // accepted-iteration index before this proposal
    double temperature;
    Point3 candidate;
    double psi_candidate;
    double psi_current;    // before the decision
    bool accepted;
    double psi_best;       // after the decision
};

using AsaTrace = std::function<void(const AsaTraceEvent&)>;

/// Runs the annealing chain from a uniform start inside cfg.bounds.
/// Returns the best point seen; report.iterations is the accepted-move count,
/// report.truncated is set when proposal_cap stopped the run early.
EstimateReport run_asa(std::span<const AnglePair> measurements,
                       std::span<const Point3> sensors,
                       const AsaConfig& cfg,
                       RandomStream& rng,
                       const AsaTrace& trace = {});

}  // namespace aoa
