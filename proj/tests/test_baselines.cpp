#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "aoa/baselines.hpp"
#include "aoa/errors.hpp"
#include "aoa/wlls.hpp"

using namespace aoa;

namespace {

std::vector<Point3> random_sensors(RandomStream& rng, std::size_t l)
{
    std::vector<Point3> s;
    for (std::size_t i = 0; i < l; ++i) {
        s.emplace_back(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10));
    }
    return s;
}

std::vector<AnglePair> perturbed(const Point3& src, const std::vector<Point3>& sensors, double sigma, RandomStream& rng)
{
    std::vector<AnglePair> m;
    for (const auto& s : sensors) {
        const auto t = true_angles(src, s);
        m.emplace_back(t.azimuth() + sigma * rng.standard_normal(), t.elevation() + sigma * rng.standard_normal());
    }
    return m;
}

double cost_oracle(const std::vector<std::size_t>& subset, const Point3& x, const std::vector<AnglePair>& m,
                   const std::vector<Point3>& sensors)
{
    double sum = 0.0;
    for (const auto i : subset) {
        const double az = m[i].azimuth();
        const double el = m[i].elevation();
        const Eigen::Vector3d d = x - sensors[i];
        const double ra = -std::sin(az) * d.x() + std::cos(az) * d.y();
        const double re = d.z() - std::sin(el) * (std::cos(el) * std::cos(az) * d.x() +
                                                  std::cos(el) * std::sin(az) * d.y() + std::sin(el) * d.z());
        sum += ra * ra + re * re;
    }
    return sum / static_cast<double>(subset.size());
}

}  // namespace

TEST(LlsBaseline, MatchesSolveLls)
{
    RandomStream rng(71);
    const auto sensors = random_sensors(rng, 6);
    const Point3 src(1, -2, 3);
    const auto m = perturbed(src, sensors, 0.05, rng);
    const auto r = solve_lls_baseline(m, sensors);
    EXPECT_EQ(r.position, solve_lls(build_linear_system(m, sensors)));
    EXPECT_EQ(r.method, "lls");
    const std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
    EXPECT_NEAR(r.residual, cost_oracle(all, r.position, m, sensors), 1e-12 * (1 + r.residual));
}

TEST(LlsBaseline, NoiselessRecovery)
{
    RandomStream rng(72);
    for (int trial = 0; trial < 50; ++trial) {
        const auto sensors = random_sensors(rng, 2 + rng.below(8));
        const Point3 src(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10));
        EXPECT_LT((solve_lls_baseline(exact_measurements(src, sensors), sensors).position - src).norm(), 1e-6);
    }
}

TEST(Rwgh, TwoSensorsEqualsWlls)
{
    RandomStream rng(73);
    const auto sensors = random_sensors(rng, 2);
    const auto m = perturbed(Point3(0, 1, 2), sensors, 0.05, rng);
    const auto r = rwgh(m, sensors);
    EXPECT_LT((r.position - solve_wlls(m, sensors).position).norm(), 1e-12);
    EXPECT_EQ(r.method, "rwgh");
}

TEST(Rwgh, NoiselessRecovery)
{
    RandomStream rng(74);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sensors = random_sensors(rng, 2 + rng.below(7));
        const Point3 src(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10));
        EXPECT_LT((rwgh(exact_measurements(src, sensors), sensors).position - src).norm(), 1e-6);
    }
}

TEST(Rwgh, ThreeSensorOracle)
{
    const std::vector<Point3> sensors{{0, 0, 0}, {10, 0, 1}, {3, 9, -2}};
    const Point3 src(4, 3, 2);
    auto m = exact_measurements(src, sensors);
    m[0] = AnglePair(m[0].azimuth() + 0.04, m[0].elevation() - 0.03);
    m[1] = AnglePair(m[1].azimuth() - 0.02, m[1].elevation() + 0.05);
    m[2] = AnglePair(m[2].azimuth() + 0.3, m[2].elevation() + 0.1);

    const std::vector<std::vector<std::size_t>> subsets{{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    Point3 z = Point3::Zero();
    double rho = 0.0;
    for (const auto& s : subsets) {
        const Point3 x = solve_wlls(build_linear_system(m, sensors, s), sensors).position;
        const double r = std::max(cost_oracle(s, x, m, sensors), 1e-12);
        z += x / r;
        rho += 1.0 / r;
    }
    EXPECT_LT((rwgh(m, sensors).position - z / rho).norm(), 1e-9);
}

TEST(Rwgh, InsideHullOfSubsetEstimates)
{
    RandomStream rng(75);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sensors = random_sensors(rng, 5);
        const auto m = perturbed(Point3(1, 1, 1), sensors, 0.2, rng);
        Point3 lo = Point3::Constant(1e300);
        Point3 hi = Point3::Constant(-1e300);
        for (std::size_t j = 2; j <= 5; ++j) {
            for (const auto& s : enumerate_subsets(5, j)) {
                const Point3 x = solve_wlls(build_linear_system(m, sensors, s), sensors).position;
                lo = lo.cwiseMin(x);
                hi = hi.cwiseMax(x);
            }
        }
        const Point3 r = rwgh(m, sensors).position;
        EXPECT_TRUE(((r.array() >= lo.array() - 1e-9) && (r.array() <= hi.array() + 1e-9)).all());
    }
}

TEST(Rwgh, AccumulatorFloor)
{
    RwghAccumulator acc;
    EXPECT_TRUE(acc.empty());
    acc.add(Point3(1, 0, 0), 0.0);
    acc.add(Point3(0, 1, 0), 1.0);
    EXPECT_NEAR(acc.rho, 1e12 + 1.0, 1e-3);
    EXPECT_LT((acc.mean() - Point3(1, 0, 0)).norm(), 1e-11);
}

TEST(Rwgh, Errors)
{
    const std::vector<Point3> sensors{{0, 0, 0}, {0, 0, 1}, {0, 0, 2}};
    const std::vector<AnglePair> m(3, AnglePair(0.0, kPi / 2));
    EXPECT_THROW(rwgh(m, sensors), EstimationFailure);

    RandomStream rng(76);
    const auto many = random_sensors(rng, 12);
    const auto mm = exact_measurements(Point3(0, 0, 0.5), many);
    RwghOptions tight;
    tight.enumeration_cap = 1000;
    EXPECT_THROW(rwgh(mm, many, tight), ResourceError);
}
