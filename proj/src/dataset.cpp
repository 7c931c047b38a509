#include "aoa/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

#include "aoa/errors.hpp"

namespace aoa {

namespace {

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = line.find(',');
        auto field = line.substr(0, comma);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
            field.remove_prefix(1);
        }
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) {
            field.remove_suffix(1);
        }
        out.push_back(field);
        if (comma == std::string_view::npos) {
            break;
        }
        line.remove_prefix(comma + 1);
    }
    return out;
}

template <typename T>
T parse_number(std::string_view field, const std::string& source, std::size_t line, const char* what)
{
    T value{};
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(source, line, std::string("bad ") + what + " '" + std::string(field) + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            throw ParseError(source, line, std::string("non-finite ") + what);
        }
    }
    return value;
}

// Reads CSV lines, skipping blank lines, and checks the header.
template <typename RowFn>
void read_csv(std::istream& in, const std::string& source, std::string_view header, std::size_t width, RowFn&& row)
{
    std::string text;
    std::size_t line = 0;
    bool seen_header = false;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') {
            text.pop_back();
        }
        if (text.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        if (!seen_header) {
            if (text != header) {
                throw ParseError(source, line, "expected header '" + std::string(header) + "'");
            }
            seen_header = true;
            continue;
        }
        const auto fields = split_fields(text);
        if (fields.size() != width) {
            throw ParseError(source, line,
                             "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
        }
        row(fields, line);
    }
    if (!seen_header) {
        throw ParseError(source, line, "missing header '" + std::string(header) + "'");
    }
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    return in;
}

}  // namespace

SiteRole role_for_id(const std::string& id)
{
    return id.rfind("RP", 0) == 0 ? SiteRole::reference_point : SiteRole::receiver;
}

std::vector<Site> RealDataset::receivers() const
{
    std::vector<Site> out;
    std::copy_if(sites_.begin(), sites_.end(), std::back_inserter(out),
                 [](const Site& s) { return s.role == SiteRole::receiver; });
    return out;
}

std::vector<Site> RealDataset::reference_points() const
{
    std::vector<Site> out;
    std::copy_if(sites_.begin(), sites_.end(), std::back_inserter(out),
                 [](const Site& s) { return s.role == SiteRole::reference_point; });
    return out;
}

const Site* RealDataset::find(const std::string& id) const
{
    const auto it = std::find_if(sites_.begin(), sites_.end(), [&](const Site& s) { return s.id == id; });
    return it == sites_.end() ? nullptr : &*it;
}

void RealDataset::add_site(Site site)
{
    if (site.id.empty()) {
        throw InputError("empty site id");
    }
    if (find(site.id) != nullptr) {
        throw InputError("duplicate site id '" + site.id + "'");
    }
    sites_.push_back(std::move(site));
}

void RealDataset::add_observation(Observation obs)
{
    const Site* rec = find(obs.receiver_id);
    if (rec == nullptr || rec->role != SiteRole::receiver) {
        throw InputError("unknown receiver id '" + obs.receiver_id + "'");
    }
    const Site* rp = find(obs.rp_id);
    if (rp == nullptr || rp->role != SiteRole::reference_point) {
        throw InputError("unknown reference point id '" + obs.rp_id + "'");
    }
    observations_.push_back(std::move(obs));
}

void read_coordinates(std::istream& in, const std::string& source, RealDataset& ds)
{
    read_csv(in, source, "id,x,y,z", 4, [&](const std::vector<std::string_view>& f, std::size_t line) {
        Site site{std::string(f[0]),
                  Point3(parse_number<double>(f[1], source, line, "x"), parse_number<double>(f[2], source, line, "y"),
                         parse_number<double>(f[3], source, line, "z")),
                  role_for_id(std::string(f[0])),
                  {std::string(f[1]), std::string(f[2]), std::string(f[3])}};
        try {
            ds.add_site(std::move(site));
        } catch (const InputError& e) {
            throw ParseError(source, line, e.what());
        }
    });
}

void read_observations(std::istream& in, const std::string& source, RealDataset& ds)
{
    read_csv(in, source, "receiver_id,rp_id,pulse,ux,uy,uz", 6,
             [&](const std::vector<std::string_view>& f, std::size_t line) {
                 Eigen::Vector3d u(parse_number<double>(f[3], source, line, "ux"),
                                   parse_number<double>(f[4], source, line, "uy"),
                                   parse_number<double>(f[5], source, line, "uz"));
                 const double norm = u.norm();
                 if (std::abs(norm - 1.0) > 1e-6) {
                     throw ParseError(source, line, "DVOA norm " + format_double(norm) + " is not 1");
                 }
                 try {
                     ds.add_observation({std::string(f[0]), std::string(f[1]),
                                         parse_number<std::int64_t>(f[2], source, line, "pulse"), Dvoa(u / norm)});
                 } catch (const InputError& e) {
                     throw ParseError(source, line, e.what());
                 }
             });
}

RealDataset ingest_dataset(const std::filesystem::path& coordinates,
                           const std::optional<std::filesystem::path>& observations)
{
    RealDataset ds;
    {
        auto in = open_input(coordinates);
        read_coordinates(in, coordinates.string(), ds);
    }
    if (observations) {
        auto in = open_input(*observations);
        read_observations(in, observations->string(), ds);
    }
    return ds;
}

void write_coordinates(std::ostream& out, const RealDataset& ds)
{
    out << "id,x,y,z\n";
    for (const auto& s : ds.sites()) {
        out << s.id;
        for (Eigen::Index j = 0; j < 3; ++j) {
            const std::string& token = s.text[static_cast<std::size_t>(j)];
            double parsed = 0.0;
            const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), parsed);
            const bool reuse = !token.empty() && ec == std::errc() && end == token.data() + token.size() &&
                               parsed == s.position(j);
            out << ',' << (reuse ? token : format_double(s.position(j)));
        }
        out << '\n';
    }
}

void write_observations(std::ostream& out, const RealDataset& ds)
{
    out << "receiver_id,rp_id,pulse,ux,uy,uz\n";
    for (const auto& o : ds.observations()) {
        const auto& u = o.dvoa.vector();
        out << o.receiver_id << ',' << o.rp_id << ',' << o.pulse << ',' << format_double(u.x()) << ','
            << format_double(u.y()) << ',' << format_double(u.z()) << '\n';
    }
}

DatasetEvaluation evaluate_dataset(const RealDataset& ds, const EvaluationOptions& options)
{
    struct Column {
        Method method;
        std::size_t n;  // 0: use every observation
    };
    std::vector<Column> columns;
    for (const auto m : options.methods) {
        if (m == Method::alg1) {
            for (const auto n : options.alg1_n) {
                columns.push_back({m, n});
            }
        } else {
            columns.push_back({m, 0});
        }
    }

    // Groups in (rp_id, pulse) order; observations keep file order inside a group.
    std::map<std::pair<std::string, std::int64_t>, std::vector<const Observation*>> groups;
    for (const auto& o : ds.observations()) {
        groups[{o.rp_id, o.pulse}].push_back(&o);
    }

    DatasetEvaluation result;
    result.pulses = groups.size();
    std::vector<RmseAccumulator> acc(columns.size());
    const RandomStream root(options.seed);
    std::size_t group_index = 0;
    for (const auto& [key, obs] : groups) {
        const Point3 truth = ds.find(key.first)->position;
        std::vector<Point3> sensors;
        std::vector<AnglePair> measurements;
        for (const auto* o : obs) {
            sensors.push_back(ds.find(o->receiver_id)->position);
            measurements.push_back(angles_from_dvoa(o->dvoa));
        }
        if (sensors.size() < 2) {
            ++result.skipped_pulses;
            ++group_index;
            continue;
        }
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const std::size_t n = columns[c].n == 0 ? sensors.size() : columns[c].n;
            RandomStream rng = root.split(group_index);
            try {
                const EstimateReport r =
                    run_method(columns[c].method, measurements, sensors, n, options.asa, rng);
                if (is_finite(r.position)) {
                    acc[c].add(r.position, truth);
                } else {
                    acc[c].add_failure();
                }
            } catch (const Error&) {
                acc[c].add_failure();
            }
        }
        ++group_index;
    }

    const std::size_t receivers = ds.receivers().size();
    for (std::size_t c = 0; c < columns.size(); ++c) {
        result.records.push_back({std::string(method_name(columns[c].method)),
                                  std::numeric_limits<double>::quiet_NaN(),
                                  columns[c].n == 0 ? receivers : columns[c].n,
                                  result.pulses - result.skipped_pulses, acc[c].failures(), acc[c].value()});
    }
    return result;
}

RealDataset synthesize_dataset(const RealDataset& geometry, const SynthesisOptions& options)
{
    RealDataset ds;
    for (const auto& s : geometry.sites()) {
        ds.add_site(s);
    }
    for (const auto& id : options.nlos_receivers) {
        const Site* s = ds.find(id);
        if (s == nullptr || s->role != SiteRole::receiver) {
            throw InputError("unknown receiver id '" + id + "'");
        }
    }

    const auto receivers = ds.receivers();
    const auto rps = ds.reference_points();
    const double sigma = deg_to_rad(options.sigma_deg);
    const RandomStream root(options.seed);
    for (std::size_t r = 0; r < rps.size(); ++r) {
        for (std::size_t pulse = 0; pulse < options.pulses; ++pulse) {
            RandomStream rng = root.split(r).split(pulse);
            for (const auto& rec : receivers) {
                const bool nlos = std::find(options.nlos_receivers.begin(), options.nlos_receivers.end(), rec.id) !=
                                  options.nlos_receivers.end();
                const NoiseSpec spec(sigma, nlos ? options.p_nlos : 0.0);
                const AnglePair truth = true_angles(rps[r].position, rec.position);
                const AngleNoise e = sample_noise(spec, rng);
                const AnglePair noisy(truth.azimuth() + e.azimuth, truth.elevation() + e.elevation);
                ds.add_observation({rec.id, rps[r].id, static_cast<std::int64_t>(pulse), dvoa_from_angles(noisy)});
            }
        }
    }
    return ds;
}

}  // namespace aoa
