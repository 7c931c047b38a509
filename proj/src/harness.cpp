#include "aoa/harness.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "aoa/baselines.hpp"
#include "aoa/data_select.hpp"
#include "aoa/errors.hpp"
#include "aoa/wlls.hpp"

namespace aoa {

namespace {

constexpr std::uint64_t kGeometryKey = 0;
constexpr std::uint64_t kNoiseKey = 1;
constexpr std::uint64_t kMethodKey = 2;
constexpr std::uint64_t kFixedLinksKey = 0xf1f1f1f1ULL;

std::vector<bool> choose_links(std::size_t l, std::size_t count, RandomStream& rng)
{
    std::vector<std::size_t> ids(l);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(l - i));
        std::swap(ids[i], ids[j]);
    }
    std::vector<bool> flags(l, false);
    for (std::size_t i = 0; i < count; ++i) {
        flags[ids[i]] = true;
    }
    return flags;
}

Point3 uniform_in_cube(double side, RandomStream& rng)
{
    const double h = 0.5 * side;
    const double x = rng.uniform(-h, h);
    const double y = rng.uniform(-h, h);
    const double z = rng.uniform(-h, h);
    return {x, y, z};
}

struct Column {
    Method method;
    std::size_t n;
};

// Squared error per (p, trial, column); NaN marks a failed estimate.
std::vector<RmseRecord> evaluate_columns(const ScenarioConfig& cfg, const std::vector<Column>& columns)
{
    const std::size_t np = cfg.p_grid.size();
    const std::size_t nt = cfg.trials;
    const std::size_t nc = columns.size();
    std::vector<double> sq(np * nt * nc, std::numeric_limits<double>::quiet_NaN());

    parallel_for(np * nt, [&](std::size_t unit) {
        const std::size_t pi = unit / nt;
        const std::size_t ti = unit % nt;
        const double p = cfg.p_grid[pi];
        const Trial trial = make_trial(cfg, p, ti);
        for (std::size_t c = 0; c < nc; ++c) {
            RandomStream rng = method_stream(cfg, ti);
            try {
                const EstimateReport r = run_method(columns[c].method, trial.measurements, trial.scenario.sensors,
                                                    columns[c].n, cfg.asa, rng);
                if (is_finite(r.position)) {
                    sq[unit * nc + c] = (r.position - trial.scenario.source).squaredNorm();
                }
            } catch (const Error&) {
            }
        }
    });

    std::vector<RmseRecord> records;
    records.reserve(np * nc);
    for (std::size_t pi = 0; pi < np; ++pi) {
        for (std::size_t c = 0; c < nc; ++c) {
            RmseAccumulator acc;
            for (std::size_t ti = 0; ti < nt; ++ti) {
                const double v = sq[(pi * nt + ti) * nc + c];
                if (std::isnan(v)) {
                    acc.add_failure();
                } else {
                    acc.add_squared(v);
                }
            }
            records.push_back({std::string(method_name(columns[c].method)), cfg.p_grid[pi], columns[c].n, nt,
                               acc.failures(), acc.value()});
        }
    }
    return records;
}

}  // namespace

std::string_view method_name(Method m)
{
    switch (m) {
    case Method::alg1: return "alg1";
    case Method::alg2: return "alg2";
    case Method::lls: return "lls";
    case Method::wlls: return "wlls";
    case Method::rwgh: return "rwgh";
    }
    return "unknown";
}

Method parse_method(std::string_view name)
{
    for (const auto m : kAllMethods) {
        if (method_name(m) == name) {
            return m;
        }
    }
    throw InputError("unknown method '" + std::string(name) + "' (expected alg1, alg2, lls, wlls or rwgh)");
}

std::vector<Method> parse_method_list(std::string_view list)
{
    std::vector<Method> out;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const auto token = list.substr(0, comma);
        const Method m = parse_method(token);
        if (std::find(out.begin(), out.end(), m) == out.end()) {
            out.push_back(m);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        list.remove_prefix(comma + 1);
    }
    if (out.empty()) {
        throw InputError("method list is empty");
    }
    return out;
}

AsaConfig AsaParams::make_config(std::span<const Point3> sensors) const
{
    AsaConfig cfg = default_asa_config(sensors);
    cfg.t0 = t0;
    set_iteration_budget(cfg, n_max);
    cfg.gamma = gamma;
    cfg.cooling_c = cooling_c;
    return cfg;
}

std::size_t ScenarioConfig::effective_alg1_n() const
{
    return alg1_n.value_or(num_sensors - nlos_count);
}

bool ScenarioConfig::uses(Method m) const
{
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

void ScenarioConfig::validate() const
{
    if (num_sensors < 2) {
        throw InputError("num_sensors must be at least 2");
    }
    if (!(region > 0.0) || !std::isfinite(region)) {
        throw InputError("region must be positive");
    }
    if (!(sigma_deg > 0.0) || !std::isfinite(sigma_deg)) {
        throw InputError("sigma_deg must be positive");
    }
    if (nlos_count > num_sensors) {
        throw InputError("nlos_count must not exceed num_sensors");
    }
    if (p_grid.empty()) {
        throw InputError("p_grid is empty");
    }
    for (const double p : p_grid) {
        if (!(p > 0.0 && p <= 1.0)) {
            throw InputError("every p must lie in (0, 1]");
        }
    }
    if (trials < 1) {
        throw InputError("trials must be at least 1");
    }
    if (methods.empty()) {
        throw InputError("no methods selected");
    }
    if (uses(Method::alg1)) {
        const std::size_t n = effective_alg1_n();
        if (n < 2 || n > num_sensors) {
            throw InputError("alg1_n = " + std::to_string(n) + " must lie in [2, " + std::to_string(num_sensors) + "]");
        }
    }
    if (!(asa.t0 > 0.0) || asa.n_max < 1 || !(asa.gamma > 0.0) || !(asa.cooling_c > 0.0)) {
        throw InputError("annealing parameters must be positive");
    }
}

ScenarioConfig preset(std::string_view name)
{
    ScenarioConfig cfg;
    if (name == "mild") {
        cfg.nlos_count = 2;
    } else if (name == "moderate") {
        cfg.nlos_count = 5;
    } else if (name == "severe") {
        cfg.nlos_count = 8;
    } else {
        throw InputError("unknown preset '" + std::string(name) + "' (expected mild, moderate or severe)");
    }
    return cfg;
}

void to_json(nlohmann::json& j, const ScenarioConfig& cfg)
{
    std::vector<std::string> methods;
    for (const auto m : cfg.methods) {
        methods.emplace_back(method_name(m));
    }
    j = nlohmann::json{
        {"num_sensors", cfg.num_sensors},
        {"region", cfg.region},
        {"sigma_deg", cfg.sigma_deg},
        {"nlos_count", cfg.nlos_count},
        {"p_grid", cfg.p_grid},
        {"trials", cfg.trials},
        {"methods", methods},
        {"seed", cfg.seed},
        {"redraw_nlos", cfg.redraw_nlos},
        {"asa_t0", cfg.asa.t0},
        {"asa_nmax", cfg.asa.n_max},
        {"asa_gamma", cfg.asa.gamma},
        {"asa_c", cfg.asa.cooling_c},
    };
    if (cfg.alg1_n) {
        j["alg1_n"] = *cfg.alg1_n;
    }
}

void from_json(const nlohmann::json& j, ScenarioConfig& cfg)
{
    if (!j.is_object()) {
        throw InputError("scenario config must be a JSON object");
    }
    // A preset only sets the NLOS link count; explicit fields win over it.
    if (j.contains("preset")) {
        cfg.nlos_count = preset(j.at("preset").get<std::string>()).nlos_count;
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "preset") {
            continue;
        } else if (key == "num_sensors") {
            cfg.num_sensors = value.get<std::size_t>();
        } else if (key == "region") {
            cfg.region = value.get<double>();
        } else if (key == "sigma_deg") {
            cfg.sigma_deg = value.get<double>();
        } else if (key == "nlos_count") {
            cfg.nlos_count = value.get<std::size_t>();
        } else if (key == "p_grid") {
            cfg.p_grid = value.get<std::vector<double>>();
        } else if (key == "trials") {
            cfg.trials = value.get<std::size_t>();
        } else if (key == "methods") {
            cfg.methods.clear();
            for (const auto& m : value) {
                cfg.methods.push_back(parse_method(m.get<std::string>()));
            }
        } else if (key == "alg1_n") {
            cfg.alg1_n = value.get<std::size_t>();
        } else if (key == "seed") {
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "redraw_nlos") {
            cfg.redraw_nlos = value.get<bool>();
        } else if (key == "asa_t0") {
            cfg.asa.t0 = value.get<double>();
        } else if (key == "asa_nmax") {
            cfg.asa.n_max = value.get<std::size_t>();
        } else if (key == "asa_gamma") {
            cfg.asa.gamma = value.get<double>();
        } else if (key == "asa_c") {
            cfg.asa.cooling_c = value.get<double>();
        } else {
            throw InputError("unknown scenario config field '" + key + "'");
        }
    }
}

double rmse(std::span<const Point3> estimates, std::span<const Point3> truths)
{
    if (estimates.empty()) {
        throw InputError("rmse of an empty set");
    }
    if (estimates.size() != truths.size()) {
        throw InputError("estimate and truth lists differ in length");
    }
    RmseAccumulator acc;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        acc.add(estimates[i], truths[i]);
    }
    return acc.value();
}

void RmseAccumulator::add(const Point3& estimate, const Point3& truth)
{
    add_squared((estimate - truth).squaredNorm());
}

void RmseAccumulator::add_squared(double sq)
{
    sum_sq_ += sq;
    ++count_;
}

double RmseAccumulator::value() const
{
    if (count_ == 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::sqrt(sum_sq_ / static_cast<double>(count_));
}

Trial make_trial(const ScenarioConfig& cfg, double p, std::size_t trial_index)
{
    const RandomStream root(cfg.seed);
    const RandomStream trial_root = root.split(trial_index);
    RandomStream geometry = trial_root.split(kGeometryKey);

    Trial t;
    t.scenario.source = uniform_in_cube(cfg.region, geometry);
    t.scenario.sensors.reserve(cfg.num_sensors);
    while (t.scenario.sensors.size() < cfg.num_sensors) {
        const Point3 s = uniform_in_cube(cfg.region, geometry);
        const bool clash = s == t.scenario.source ||
                           std::find(t.scenario.sensors.begin(), t.scenario.sensors.end(), s) != t.scenario.sensors.end();
        if (!clash) {
            t.scenario.sensors.push_back(s);
        }
    }

    if (cfg.redraw_nlos) {
        t.nlos = choose_links(cfg.num_sensors, cfg.nlos_count, geometry);
    } else {
        RandomStream fixed = root.split(kFixedLinksKey);
        t.nlos = choose_links(cfg.num_sensors, cfg.nlos_count, fixed);
    }

    const double sigma = deg_to_rad(cfg.sigma_deg);
    for (std::size_t i = 0; i < cfg.num_sensors; ++i) {
        t.scenario.noise.emplace_back(sigma, t.nlos[i] ? p : 0.0);
    }
    RandomStream noise = trial_root.split(kNoiseKey);
    t.measurements = generate_measurements(t.scenario, noise);
    return t;
}

RandomStream method_stream(const ScenarioConfig& cfg, std::size_t trial_index)
{
    return RandomStream(cfg.seed).split(trial_index).split(kMethodKey);
}

EstimateReport run_method(Method m,
                          std::span<const AnglePair> measurements,
                          std::span<const Point3> sensors,
                          std::size_t alg1_n,
                          const AsaParams& asa,
                          RandomStream& rng)
{
    switch (m) {
    case Method::alg1:
        return iad_select(measurements, sensors, alg1_n);
    case Method::alg2:
        return run_asa(measurements, sensors, asa.make_config(sensors), rng);
    case Method::lls:
        return solve_lls_baseline(measurements, sensors);
    case Method::wlls:
        return solve_wlls(measurements, sensors);
    case Method::rwgh:
        return rwgh(measurements, sensors);
    }
    throw InputError("unknown method");
}

std::vector<RmseRecord> run_scenario(const ScenarioConfig& cfg)
{
    cfg.validate();
    std::vector<Column> columns;
    for (const auto m : kAllMethods) {
        if (cfg.uses(m)) {
            columns.push_back({m, m == Method::alg1 ? cfg.effective_alg1_n() : cfg.num_sensors});
        }
    }
    return evaluate_columns(cfg, columns);
}

std::vector<RmseRecord> sweep_n(const ScenarioConfig& cfg, std::span<const std::size_t> n_values)
{
    ScenarioConfig checked = cfg;
    checked.alg1_n = checked.num_sensors;
    checked.validate();
    if (n_values.empty()) {
        throw InputError("sweep needs at least one N");
    }
    std::vector<Column> columns;
    for (const auto m : kAllMethods) {
        if (!cfg.uses(m)) {
            continue;
        }
        if (m == Method::alg1) {
            for (const auto n : n_values) {
                if (n < 2 || n > cfg.num_sensors) {
                    throw InputError("sweep N = " + std::to_string(n) + " must lie in [2, " +
                                     std::to_string(cfg.num_sensors) + "]");
                }
                columns.push_back({m, n});
            }
        } else {
            columns.push_back({m, cfg.num_sensors});
        }
    }
    return evaluate_columns(cfg, columns);
}

std::size_t worker_count()
{
    if (const char* env = std::getenv("AOA_THREADS")) {
        std::size_t n = 0;
        const auto* end = env + std::char_traits<char>::length(env);
        const auto [ptr, ec] = std::from_chars(env, end, n);
        if (ec == std::errc() && ptr == end && n > 0) {
            return n;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn)
{
    const std::size_t workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_rmse_csv(std::ostream& out, std::span<const RmseRecord> records)
{
    out << "method,p,n,trials,failures,rmse_m\n";
    for (const auto& r : records) {
        out << r.method << ',' << (std::isnan(r.p) ? std::string() : format_double(r.p)) << ',' << r.n << ','
            << r.trials << ',' << r.failures << ',' << format_double(r.rmse) << '\n';
    }
}

}  // namespace aoa
