#pragma once

// Recorded-data ingestion and evaluation.
//
// Coordinates CSV:   id,x,y,z        ids starting with "RP" are reference
//                                    points, every other id is a receiver
// Observations CSV:  receiver_id,rp_id,pulse,ux,uy,uz   (unit DVOA)

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aoa/core.hpp"
#include "aoa/harness.hpp"

namespace aoa {

enum class SiteRole { receiver, reference_point };

struct Site {
    std::string id;
    Point3 position;
    SiteRole role;
    /// Coordinate tokens as read; reused on output when they still denote
    /// `position` exactly, so files round-trip byte for byte.
    std::array<std::string, 3> text{};
};

struct Observation {
    std::string receiver_id;
    std::string rp_id;
    std::int64_t pulse;
    Dvoa dvoa;
};

class RealDataset {
public:
    /// Sites in file order.
    const std::vector<Site>& sites() const { return sites_; }
    const std::vector<Observation>& observations() const { return observations_; }

    std::vector<Site> receivers() const;
    std::vector<Site> reference_points() const;
    const Site* find(const std::string& id) const;

    /// Throws InputError on a duplicate id.
    void add_site(Site site);
    /// Throws InputError when an id is unknown or has the wrong role.
    void add_observation(Observation obs);

private:
    std::vector<Site> sites_;
    std::vector<Observation> observations_;
};

SiteRole role_for_id(const std::string& id);

/// Parsers throw ParseError carrying `source` and the 1-based line number.
void read_coordinates(std::istream& in, const std::string& source, RealDataset& ds);
void read_observations(std::istream& in, const std::string& source, RealDataset& ds);

RealDataset ingest_dataset(const std::filesystem::path& coordinates,
                           const std::optional<std::filesystem::path>& observations = std::nullopt);

void write_coordinates(std::ostream& out, const RealDataset& ds);
void write_observations(std::ostream& out, const RealDataset& ds);

struct EvaluationOptions {
    std::vector<Method> methods = {Method::alg1, Method::alg2, Method::lls, Method::wlls, Method::rwgh};
    std::vector<std::size_t> alg1_n = {3};
    AsaParams asa;
    std::uint64_t seed = 0;
};

struct DatasetEvaluation {
    std::vector<RmseRecord> records;  // p is NaN
    std::size_t pulses = 0;           // (reference point, pulse) groups
    std::size_t skipped_pulses = 0;   // fewer than two observing receivers
};

/// Groups observations by (reference point, pulse), localizes each group and
/// scores it against the reference point's coordinates. A group too small for
/// a given alg1 N counts as a failure of that column.
DatasetEvaluation evaluate_dataset(const RealDataset& ds, const EvaluationOptions& options);

struct SynthesisOptions {
    std::size_t pulses = 100;
    double sigma_deg = 1.0;
    std::vector<std::string> nlos_receivers;
    double p_nlos = 0.9;
    std::uint64_t seed = 0;
};

/// Adds simulated observations of every reference point from every receiver
/// to a copy of `geometry` (existing observations are dropped).
RealDataset synthesize_dataset(const RealDataset& geometry, const SynthesisOptions& options);

}  // namespace aoa
