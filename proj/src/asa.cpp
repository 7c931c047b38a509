#include "aoa/asa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "aoa/errors.hpp"

namespace aoa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// |wrapped_diff(a, b)| for a, b already in [-pi, pi].
double circular_gap(double a, double b)
{
    double d = std::abs(a - b);
    if (d > kPi) {
        d = 2.0 * kPi - d;
    }
    return d;
}

// Objective evaluator for the annealing loop. Sums the same per-sensor terms
// as l1_objective, returning +inf for sensor-coincident points.
//
// exceeds() answers "is psi(x) > limit" from a cheap lower bound on each
// angular gap: for unit m and direction v with s = |m x v| / |v|, the gap is
// asin(s) >= s when m.v >= 0 and pi - asin(s) >= pi - s*pi/2 otherwise.
class L1Evaluator {
public:
    L1Evaluator(std::span<const AnglePair> measurements, std::span<const Point3> sensors) : sensors_(sensors)
    {
        for (const auto& m : measurements) {
            terms_.push_back({m.azimuth(), m.elevation(), std::cos(m.azimuth()), std::sin(m.azimuth()),
                              std::cos(m.elevation()), std::sin(m.elevation())});
        }
    }

    double evaluate(const Point3& x) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < sensors_.size(); ++i) {
            const double dx = x.x() - sensors_[i].x();
            const double dy = x.y() - sensors_[i].y();
            const double dz = x.z() - sensors_[i].z();
            const double h = std::sqrt(dx * dx + dy * dy);
            if (h == 0.0 && dz == 0.0) {
                return kInf;
            }
            const double az = h == 0.0 ? 0.0 : std::atan2(dy, dx);
            const double el = std::atan2(dz, h);
            sum += circular_gap(terms_[i].azimuth, az) + circular_gap(terms_[i].elevation, el);
        }
        return sum;
    }

    bool exceeds(const Point3& x, double limit) const
    {
        double bound = 0.0;
        for (std::size_t i = 0; i < sensors_.size(); ++i) {
            const double dx = x.x() - sensors_[i].x();
            const double dy = x.y() - sensors_[i].y();
            const double dz = x.z() - sensors_[i].z();
            const double h = std::sqrt(dx * dx + dy * dy);
            if (h == 0.0) {
                // Azimuth convention at the vertical; fall back to the exact value.
                return evaluate(x) > limit;
            }
            const auto& t = terms_[i];
            bound += gap_lower_bound(t.cos_az, t.sin_az, dx, dy, h);
            bound += gap_lower_bound(t.cos_el, t.sin_el, h, dz, std::sqrt(h * h + dz * dz));
            if (bound * (1.0 - 1e-9) > limit) {
                return true;
            }
        }
        return false;
    }

private:
    struct Term {
        double azimuth;
        double elevation;
        double cos_az;
        double sin_az;
        double cos_el;
        double sin_el;
    };

    static double gap_lower_bound(double c, double s, double vx, double vy, double norm)
    {
        const double sine = std::min(1.0, std::abs(c * vy - s * vx) / norm);
        return c * vx + s * vy >= 0.0 ? sine : kPi - sine * (0.5 * kPi);
    }

    std::span<const Point3> sensors_;
    std::vector<Term> terms_;
};

// t * ((1 + 1/t)^|v| - 1) with v = 2u - 1 and log_ratio = ln(1 + 1/t).
double step_from_uniform(double t, double log_ratio, double u)
{
    const double v = 2.0 * u - 1.0;
    if (v == 0.0) {
        return 0.0;
    }
    const double magnitude = std::min(1.0, t * std::expm1(std::abs(v) * log_ratio));
    return std::copysign(magnitude, v);
}

Point3 apply_step_impl(const Point3& x, const Eigen::Vector3d& r, const AsaConfig& cfg)
{
    return cfg.bounds.clamp(x + cfg.scale.cwiseProduct(r));
}

Point3 candidate_with_log_ratio(const Point3& x, double t, double log_ratio, const AsaConfig& cfg, RandomStream& rng)
{
    Eigen::Vector3d r;
    for (Eigen::Index j = 0; j < 3; ++j) {
        r(j) = step_from_uniform(t, log_ratio, rng.uniform01());
    }
    return apply_step_impl(x, r, cfg);
}

// Largest objective increase that acceptance() can still accept against draw
// u, padded so that an early stop never rejects an acceptable candidate.
double acceptance_margin(double psi, double t, double u)
{
    const double slack = t * std::log((1.0 - u) / u);
    return psi + std::max(0.0, slack) * (1.0 + 1e-9) + 1e-9 * (1.0 + std::abs(psi));
}

}  // namespace

bool Bounds::contains(const Point3& p) const
{
    return (p.array() >= lower.array()).all() && (p.array() <= upper.array()).all();
}

Point3 Bounds::clamp(const Point3& p) const
{
    return p.cwiseMax(lower).cwiseMin(upper);
}

void AsaConfig::validate() const
{
    if (!(t0 > 0.0) || !std::isfinite(t0)) {
        throw InputError("annealing t0 must be positive");
    }
    if (n_max < 1) {
        throw InputError("annealing n_max must be at least 1");
    }
    if (!(gamma > 0.0)) {
        throw InputError("annealing gamma must be positive");
    }
    if (!(cooling_c > 0.0) || !std::isfinite(cooling_c)) {
        throw InputError("annealing cooling constant must be positive");
    }
    if (dim < 1) {
        throw InputError("annealing dimension must be at least 1");
    }
    if (!is_finite(bounds.lower) || !is_finite(bounds.upper) || !(bounds.lower.array() < bounds.upper.array()).all()) {
        throw InputError("annealing bounds must be nonempty finite intervals");
    }
    if (!(scale.array() > 0.0).all() || !scale.allFinite()) {
        throw InputError("annealing step scale must be positive");
    }
    if (proposal_cap < n_max) {
        throw InputError("annealing proposal cap must be at least n_max");
    }
}

AsaConfig default_asa_config(std::span<const Point3> sensors)
{
    if (sensors.empty()) {
        throw InputError("default annealing bounds need at least one sensor");
    }
    Point3 lo = sensors.front();
    Point3 hi = sensors.front();
    for (const auto& s : sensors) {
        lo = lo.cwiseMin(s);
        hi = hi.cwiseMax(s);
    }
    double pad = 0.5 * (hi - lo).maxCoeff();
    if (!(pad > 0.0)) {
        pad = 1.0;
    }

    AsaConfig cfg;
    cfg.bounds.lower = lo.array() - pad;
    cfg.bounds.upper = hi.array() + pad;
    cfg.scale = 0.5 * (cfg.bounds.upper - cfg.bounds.lower);
    return cfg;
}

void set_iteration_budget(AsaConfig& cfg, std::size_t n_max)
{
    cfg.n_max = n_max;
    cfg.proposal_cap = 50 * n_max;
}

double l1_objective(const Point3& x, std::span<const AnglePair> measurements, std::span<const Point3> sensors)
{
    if (measurements.size() != sensors.size()) {
        throw InputError("measurement count differs from sensor count");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const AnglePair model = true_angles(x, sensors[i]);
        sum += std::abs(wrapped_diff(measurements[i].azimuth(), model.azimuth())) +
               std::abs(wrapped_diff(measurements[i].elevation(), model.elevation()));
    }
    return sum;
}

double temperature(std::size_t k, const AsaConfig& cfg)
{
    const double kd = std::pow(static_cast<double>(k), 1.0 / static_cast<double>(cfg.dim));
    return cfg.t0 * std::exp(-cfg.cooling_c * kd);
}

double r_from_uniform(double t, double u)
{
    return step_from_uniform(t, std::log1p(1.0 / t), u);
}

double sample_r(double t, RandomStream& rng)
{
    return r_from_uniform(t, rng.uniform01());
}

double proposal_cdf(double t, double r)
{
    if (r == 0.0) {
        return 0.5;
    }
    const double mass = std::log1p(std::abs(r) / t) / std::log1p(1.0 / t);
    return 0.5 + std::copysign(0.5, r) * mass;
}

Point3 apply_step(const Point3& x, const Eigen::Vector3d& r, const AsaConfig& cfg)
{
    return apply_step_impl(x, r, cfg);
}

Point3 generate_candidate(const Point3& x, double t, const AsaConfig& cfg, RandomStream& rng)
{
    return candidate_with_log_ratio(x, t, std::log1p(1.0 / t), cfg, rng);
}

double acceptance(double psi_new, double psi_old, double t)
{
    const double delta = psi_new - psi_old;
    if (delta <= 0.0) {
        return 1.0;
    }
    if (std::isnan(delta)) {
        return 0.0;
    }
    const double a = 1.0 / (1.0 + std::exp(delta / t));
    return a < 1e-300 ? 0.0 : a;
}

EstimateReport run_asa(std::span<const AnglePair> measurements,
                       std::span<const Point3> sensors,
                       const AsaConfig& cfg,
                       RandomStream& rng,
                       const AsaTrace& trace)
{
    cfg.validate();
    if (measurements.size() != sensors.size()) {
        throw InputError("measurement count differs from sensor count");
    }
    if (measurements.size() < 2) {
        throw InputError("at least two measurements are required");
    }
    const L1Evaluator objective(measurements, sensors);

    Point3 x;
    for (Eigen::Index j = 0; j < 3; ++j) {
        x(j) = rng.uniform(cfg.bounds.lower(j), cfg.bounds.upper(j));
    }
    double psi = objective.evaluate(x);

    EstimateReport report;
    report.method = "alg2";
    report.position = x;
    report.residual = psi;

    std::size_t k = 0;
    std::size_t proposals = 0;
    std::size_t cached_k = 0;
    double t = temperature(0, cfg);
    double log_ratio = std::log1p(1.0 / t);
    while (k <= cfg.n_max && psi > cfg.gamma) {
        if (proposals >= cfg.proposal_cap) {
            report.truncated = true;
            break;
        }
        if (k != cached_k) {
            cached_k = k;
            t = temperature(k, cfg);
            log_ratio = std::log1p(1.0 / t);
        }
        const Point3 candidate = candidate_with_log_ratio(x, t, log_ratio, cfg, rng);
        const double u = rng.uniform01();
        ++proposals;

        // Candidates provably beyond the acceptance threshold are rejected
        // without the exact objective; the decision is the same either way.
        const bool quick_reject = !trace && std::isfinite(psi) && objective.exceeds(candidate, acceptance_margin(psi, t, u));
        const double psi_candidate = quick_reject ? kInf : objective.evaluate(candidate);
        const double psi_before = psi;
        const bool accepted = !quick_reject && acceptance(psi_candidate, psi, t) >= u;
        if (accepted) {
            x = candidate;
            psi = psi_candidate;
            ++k;
            if (psi < report.residual) {
                report.position = x;
                report.residual = psi;
            }
        }
        if (trace) {
            trace({k - (accepted ? 1 : 0), t, candidate, psi_candidate, psi_before, accepted, report.residual});
        }
    }

    report.iterations = k;
    report.proposals = proposals;
    return report;
}

}  // namespace aoa
