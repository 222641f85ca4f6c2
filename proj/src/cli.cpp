#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "radarmi/experiments.hpp"

namespace radarmi {

namespace {

nlohmann::json load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error("invalid JSON in " + path + ": " + e.what());
    }
}

void emit(const SweepTable& table, const std::string& format, const std::string& out_path) {
    std::string payload;
    if (format == "json")
        payload = table.to_json().dump(2) + "\n";
    else
        payload = table.to_csv();
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw config_error("cannot open output file: " + out_path);
    out << payload;
    if (!out.good()) throw config_error("failed writing output file: " + out_path);
}

struct OutputOptions {
    std::string format = "csv";
    std::string out_path;
};

void add_output_options(CLI::App* cmd, OutputOptions& opts) {
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", opts.out_path, "write output to this file instead of stdout");
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Mutual-information-optimal waveform design for widely spaced MIMO radar"};
    app.name("radar-mi");
    app.set_version_flag("--version", artifact_version);
    app.require_subcommand(1);

    CLI::App* sweep_corr = app.add_subcommand(
        "sweep-correlation", "MI across a target-spectrum correlation sweep per SNR");
    std::string corr_config;
    OutputOptions corr_out;
    std::uint64_t corr_seed = 0;
    bool corr_seed_given = false;
    sweep_corr->add_option("--config", corr_config, "scenario JSON file")->required();
    sweep_corr->add_option("--seed", corr_seed, "override the config seed")
        ->each([&](const std::string&) { corr_seed_given = true; });
    add_output_options(sweep_corr, corr_out);

    CLI::App* sweep_freq = app.add_subcommand(
        "sweep-frequency", "MI vs SNR for each carrier frequency of a radar scene");
    std::string freq_config;
    OutputOptions freq_out;
    std::uint64_t freq_seed = 0;
    bool freq_seed_given = false;
    bool white_noise = false;
    sweep_freq->add_option("--config", freq_config, "scenario JSON file")->required();
    sweep_freq->add_option("--seed", freq_seed, "override the config seed")
        ->each([&](const std::string&) { freq_seed_given = true; });
    sweep_freq->add_flag("--white-noise", white_noise,
                         "use identity noise covariance instead of the configured spectrum");
    add_output_options(sweep_freq, freq_out);

    CLI::App* schur = app.add_subcommand(
        "schur-report", "pairwise convexity-threshold table for a spectrum pair");
    std::vector<double> sigma_h_values, sigma_w_values;
    OutputOptions schur_out;
    schur->add_option("--sigma-h", sigma_h_values, "target eigenvalues, descending")
        ->delimiter(',')
        ->required();
    schur->add_option("--sigma-w", sigma_w_values, "noise eigenvalues, descending")
        ->delimiter(',')
        ->required();
    add_output_options(schur, schur_out);

    CLI::App* decorr = app.add_subcommand(
        "decorrelation-check", "aperture decorrelation conditions for an antenna-pair choice");
    std::string decorr_config;
    OutputOptions decorr_out;
    double frequency_hz = 0.0;
    bool frequency_given = false;
    std::vector<std::size_t> tx_pair{1, 2};
    std::vector<std::size_t> rx_pair{1, 2};
    decorr->add_option("--config", decorr_config, "geometry JSON file")->required();
    decorr->add_option("--frequency-hz", frequency_hz, "carrier frequency in Hz")
        ->each([&](const std::string&) { frequency_given = true; });
    decorr->add_option("--tx-pair", tx_pair, "transmit antenna pair, 1-based")
        ->delimiter(',')
        ->expected(2);
    decorr->add_option("--rx-pair", rx_pair, "receive antenna pair, 1-based")
        ->delimiter(',')
        ->expected(2);
    add_output_options(decorr, decorr_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep_corr->parsed()) {
            CorrelationSweepConfig cfg = parse_correlation_config(load_scenario(corr_config));
            SweepTable table = sweep_correlation(cfg);
            if (corr_seed_given) table.metadata["seed"] = corr_seed;
            emit(table, corr_out.format, corr_out.out_path);
        } else if (sweep_freq->parsed()) {
            FrequencySweepConfig cfg = parse_frequency_config(load_scenario(freq_config));
            if (freq_seed_given) cfg.seed = freq_seed;
            if (white_noise) cfg.white_noise = true;
            emit(sweep_snr_frequency(cfg), freq_out.format, freq_out.out_path);
        } else if (schur->parsed()) {
            const Spectrum sigma_h(sigma_h_values);
            const Spectrum sigma_w(sigma_w_values);
            emit(schur_report(sigma_h, sigma_w), schur_out.format, schur_out.out_path);
        } else if (decorr->parsed()) {
            const nlohmann::json scenario = load_scenario(decorr_config);
            if (!scenario.is_object()) throw config_error("scenario file must be a JSON object");
            if (scenario.contains("schema") &&
                (!scenario["schema"].is_number_integer() || scenario["schema"].get<int>() != 1))
                throw config_error("scenario file must declare \"schema\": 1");
            double freq = frequency_hz;
            if (!frequency_given) {
                if (!scenario.contains("frequency_hz"))
                    throw config_error(
                        "no carrier frequency: pass --frequency-hz or put frequency_hz "
                        "in the config");
                freq = scenario["frequency_hz"].get<double>();
            }
            const nlohmann::json& geo =
                scenario.contains("geometry") ? scenario["geometry"] : scenario;
            const RadarGeometry geometry = parse_geometry(geo, freq);
            emit(decorrelation_table(geometry, {tx_pair[0], tx_pair[1]},
                                     {rx_pair[0], rx_pair[1]}),
                 decorr_out.format, decorr_out.out_path);
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace radarmi
