#include "aoa/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "aoa/dataset.hpp"
#include "aoa/errors.hpp"
#include "aoa/harness.hpp"

namespace aoa {

namespace {

constexpr int kUsageError = 2;

struct UsageError : InputError {
    using InputError::InputError;
};

// Flags shared by the simulation subcommands; unset flags leave the config alone.
struct ScenarioFlags {
    std::string config_path;
    std::string preset;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> sigma_deg;
    std::vector<double> p_grid;
    std::string methods;
    std::optional<std::size_t> alg1_n;
    std::optional<std::size_t> num_sensors;
    std::optional<std::size_t> nlos_count;
    std::optional<double> region;
    bool fixed_nlos = false;
    std::optional<double> asa_t0;
    std::optional<std::size_t> asa_nmax;
    std::optional<double> asa_gamma;
    std::optional<double> asa_c;
    std::string output;

    void attach(CLI::App& cmd)
    {
        cmd.add_option("--config", config_path, "JSON scenario config")->check(CLI::ExistingFile);
        cmd.add_option("--preset", preset, "NLOS preset")->check(CLI::IsMember({"mild", "moderate", "severe"}));
        cmd.add_option("--trials", trials, "Monte-Carlo trials per p");
        cmd.add_option("--seed", seed, "root random seed");
        cmd.add_option("--sigma-deg", sigma_deg, "Gaussian angle noise std dev (degrees)");
        cmd.add_option("--p-grid", p_grid, "comma-separated NLOS probabilities")->delimiter(',');
        cmd.add_option("--methods", methods, "comma-separated subset of alg1,alg2,lls,wlls,rwgh");
        cmd.add_option("--alg1-n", alg1_n, "subset size N for alg1");
        cmd.add_option("--num-sensors", num_sensors, "sensor count L");
        cmd.add_option("--nlos-count", nlos_count, "number of NLOS links");
        cmd.add_option("--region", region, "cube side length (m)");
        cmd.add_flag("--fixed-nlos", fixed_nlos, "draw the NLOS link set once instead of per trial");
        cmd.add_option("--asa-t0", asa_t0, "annealing initial temperature");
        cmd.add_option("--asa-nmax", asa_nmax, "annealing accepted-iteration limit");
        cmd.add_option("--asa-gamma", asa_gamma, "annealing objective stop threshold");
        cmd.add_option("--asa-c", asa_c, "annealing cooling constant");
        cmd.add_option("-o,--output", output, "write CSV here instead of standard output");
    }

    ScenarioConfig build(ScenarioConfig cfg) const
    {
        try {
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                const auto j = nlohmann::json::parse(in);
                from_json(j, cfg);
            }
            if (!preset.empty()) {
                cfg.nlos_count = aoa::preset(preset).nlos_count;
            }
            if (trials) cfg.trials = *trials;
            if (seed) cfg.seed = *seed;
            if (sigma_deg) cfg.sigma_deg = *sigma_deg;
            if (!p_grid.empty()) cfg.p_grid = p_grid;
            if (!methods.empty()) cfg.methods = parse_method_list(methods);
            if (alg1_n) cfg.alg1_n = *alg1_n;
            if (num_sensors) cfg.num_sensors = *num_sensors;
            if (nlos_count) cfg.nlos_count = *nlos_count;
            if (region) cfg.region = *region;
            if (fixed_nlos) cfg.redraw_nlos = false;
            if (asa_t0) cfg.asa.t0 = *asa_t0;
            if (asa_nmax) cfg.asa.n_max = *asa_nmax;
            if (asa_gamma) cfg.asa.gamma = *asa_gamma;
            if (asa_c) cfg.asa.cooling_c = *asa_c;
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("bad config file: ") + e.what());
        } catch (const InputError& e) {
            throw UsageError(e.what());
        }
        return cfg;
    }
};

void emit(const std::string& path, std::ostream& out, const std::string& text)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw InputError("cannot write " + path);
    }
    file << text;
}

std::string records_csv(const std::vector<RmseRecord>& records)
{
    std::ostringstream s;
    write_rmse_csv(s, records);
    return s.str();
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"3-D AOA source localization under mixed LOS/NLOS conditions", "aoa"};
    app.require_subcommand(1);

    ScenarioFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo RMSE versus NLOS probability");
    sim_flags.attach(*simulate);

    ScenarioFlags sweep_flags;
    std::vector<std::size_t> n_values;
    auto* sweep = app.add_subcommand("sweep-n", "Monte-Carlo RMSE versus the alg1 subset size N");
    sweep_flags.attach(*sweep);
    sweep->add_option("--n-values", n_values, "comma-separated N values (default 2..L)")->delimiter(',');

    std::string est_coords, est_obs, est_methods, est_output;
    std::vector<std::size_t> est_n;
    std::uint64_t est_seed = 0;
    AsaParams est_asa;
    auto* estimate = app.add_subcommand("estimate", "Localize recorded observations and score them per method");
    estimate->add_option("--coords", est_coords, "coordinates CSV (id,x,y,z)")->required()->check(CLI::ExistingFile);
    estimate->add_option("--observations", est_obs, "observations CSV (receiver_id,rp_id,pulse,ux,uy,uz)")
        ->required()
        ->check(CLI::ExistingFile);
    estimate->add_option("--methods", est_methods, "comma-separated subset of alg1,alg2,lls,wlls,rwgh");
    estimate->add_option("--alg1-n", est_n, "comma-separated N values for alg1 (default 3)")->delimiter(',');
    estimate->add_option("--seed", est_seed, "random seed for alg2");
    estimate->add_option("--asa-t0", est_asa.t0, "annealing initial temperature");
    estimate->add_option("--asa-nmax", est_asa.n_max, "annealing accepted-iteration limit");
    estimate->add_option("--asa-gamma", est_asa.gamma, "annealing objective stop threshold");
    estimate->add_option("--asa-c", est_asa.cooling_c, "annealing cooling constant");
    estimate->add_option("-o,--output", est_output, "write CSV here instead of standard output");

    std::string check_coords, check_obs;
    bool check_emit = false;
    auto* ingest = app.add_subcommand("ingest-check", "Validate dataset files");
    ingest->add_option("coords", check_coords, "coordinates CSV (id,x,y,z)")->required()->check(CLI::ExistingFile);
    ingest->add_option("--observations", check_obs, "observations CSV")->check(CLI::ExistingFile);
    ingest->add_flag("--emit", check_emit, "print the parsed coordinates in canonical CSV form");

    std::string syn_coords, syn_output;
    std::vector<std::string> syn_nlos;
    SynthesisOptions syn;
    auto* synth = app.add_subcommand("synthesize", "Simulate observations for a coordinates file");
    synth->add_option("--coords", syn_coords, "coordinates CSV (id,x,y,z)")->required()->check(CLI::ExistingFile);
    synth->add_option("--pulses", syn.pulses, "pulses per reference point");
    synth->add_option("--sigma-deg", syn.sigma_deg, "Gaussian angle noise std dev (degrees)");
    synth->add_option("--nlos", syn_nlos, "comma-separated NLOS receiver ids")->delimiter(',');
    synth->add_option("--p", syn.p_nlos, "NLOS probability of the listed receivers");
    synth->add_option("--seed", syn.seed, "random seed");
    synth->add_option("-o,--output", syn_output, "write CSV here instead of standard output");

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::ParseError& e) {
            err << "aoa: " << e.what() << "\n" << app.help();
            return kUsageError;
        }

        if (*simulate) {
            const ScenarioConfig cfg = sim_flags.build(ScenarioConfig{});
            try {
                cfg.validate();
            } catch (const InputError& e) {
                throw UsageError(e.what());
            }
            emit(sim_flags.output, out, records_csv(run_scenario(cfg)));
        } else if (*sweep) {
            ScenarioConfig base = preset("moderate");
            base.p_grid = {0.9};
            base.methods = {Method::alg1, Method::alg2, Method::lls, Method::wlls};
            const ScenarioConfig cfg = sweep_flags.build(base);
            if (n_values.empty()) {
                n_values.resize(cfg.num_sensors > 1 ? cfg.num_sensors - 1 : 0);
                std::iota(n_values.begin(), n_values.end(), std::size_t{2});
            }
            std::vector<RmseRecord> records;
            try {
                ScenarioConfig checked = cfg;
                checked.alg1_n = cfg.num_sensors;
                checked.validate();
                for (const auto n : n_values) {
                    if (n < 2 || n > cfg.num_sensors) {
                        throw InputError("N = " + std::to_string(n) + " must lie in [2, " +
                                         std::to_string(cfg.num_sensors) + "]");
                    }
                }
            } catch (const InputError& e) {
                throw UsageError(e.what());
            }
            emit(sweep_flags.output, out, records_csv(sweep_n(cfg, n_values)));
        } else if (*estimate) {
            EvaluationOptions opts;
            try {
                if (!est_methods.empty()) opts.methods = parse_method_list(est_methods);
            } catch (const InputError& e) {
                throw UsageError(e.what());
            }
            if (!est_n.empty()) opts.alg1_n = est_n;
            opts.asa = est_asa;
            opts.seed = est_seed;
            const RealDataset ds = ingest_dataset(est_coords, std::filesystem::path(est_obs));
            const DatasetEvaluation ev = evaluate_dataset(ds, opts);
            if (ev.skipped_pulses > 0) {
                err << "aoa: skipped " << ev.skipped_pulses << " of " << ev.pulses
                    << " pulses with fewer than two observations\n";
            }
            emit(est_output, out, records_csv(ev.records));
        } else if (*ingest) {
            std::optional<std::filesystem::path> obs;
            if (!check_obs.empty()) obs = check_obs;
            const RealDataset ds = ingest_dataset(check_coords, obs);
            if (check_emit) {
                write_coordinates(out, ds);
            } else {
                out << "receivers: " << ds.receivers().size() << "\n"
                    << "reference points: " << ds.reference_points().size() << "\n"
                    << "observations: " << ds.observations().size() << "\n";
            }
        } else if (*synth) {
            syn.nlos_receivers = syn_nlos;
            const RealDataset geometry = ingest_dataset(syn_coords);
            std::ostringstream s;
            write_observations(s, synthesize_dataset(geometry, syn));
            emit(syn_output, out, s.str());
        }
    } catch (const UsageError& e) {
        err << "aoa: usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "aoa: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace aoa
