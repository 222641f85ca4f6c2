#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "radarmi/channel.hpp"
#include "radarmi/majorize.hpp"
#include "radarmi/waveform.hpp"

namespace radarmi {

inline constexpr const char* artifact_version = "0.1.0";

/// Spectrum-interpolation sweep: MI of the water-filled optimum as the
/// target spectrum slides from an uncorrelated endpoint (tau = 0) to a
/// correlated one (tau = 1), per SNR point. Purely spectral; eigenbases are
/// identity.
struct CorrelationSweepConfig {
    std::size_t tx_count = 2;     // M
    std::size_t rx_count = 2;     // N
    std::size_t sample_count = 2; // K, waveform samples per receiver
    std::vector<double> noise_spectrum;        // length N*K, descending
    std::vector<double> correlated_endpoint;   // length M*N, descending
    std::vector<double> uncorrelated_endpoint; // length M*N, same trace
    std::vector<double> tau_grid;              // ascending in [0,1]
    std::vector<double> snr_db;

    static std::vector<double> default_tau_grid(); // 21 uniform points
    void validate() const;                         // throws config_error
};

/// Two-frequency geometry sweep: analytic channel covariance per carrier,
/// then optimal-waveform MI over an SNR grid.
struct FrequencySweepConfig {
    std::vector<Point2> tx_positions;
    std::vector<Point2> rx_positions;
    Point2 target_center;
    double dim_x = 0.0;
    double dim_y = 0.0;
    std::vector<double> frequencies_hz;
    std::size_t scatterer_count = 1000;
    std::size_t sample_count = 2; // K
    std::uint64_t seed = 1;
    std::vector<double> snr_db;
    /// Noise eigenvalues (identity eigenbasis). Empty = default: the colored
    /// [8, 4, 3, 2] when the noise dimension is 4, otherwise an explicit
    /// spectrum is required. `white` forces the identity.
    std::vector<double> noise_spectrum;
    bool white_noise = false;

    static std::vector<double> default_snr_grid(); // -10:2:30 dB
    RadarGeometry geometry_at(double frequency_hz) const;
    std::vector<double> resolve_noise_spectrum() const; // applies the default rule
    void validate() const;
};

/// Tabular sweep result: named columns, JSON-typed cells, and a metadata
/// object echoed into the output (config, seed, artifact version).
struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::ordered_json>> rows;
    nlohmann::ordered_json metadata;

    /// Comma-separated, '.' decimal, LF, header row, 12 significant digits;
    /// metadata as leading '#'-prefixed lines. Byte-identical for identical
    /// inputs.
    std::string to_csv() const;
    nlohmann::ordered_json to_json() const;
};

SweepTable sweep_correlation(const CorrelationSweepConfig& cfg);
SweepTable sweep_snr_frequency(const FrequencySweepConfig& cfg);

/// Pairwise difference-ratio table plus the Schur-convex power region for a
/// target/noise spectrum pair (undefined ratios rendered as "undefined").
SweepTable schur_report(const Spectrum& sigma_h, const Spectrum& sigma_w);

/// The four aperture conditions for one antenna-pair choice, as a table.
SweepTable decorrelation_table(const RadarGeometry& geometry,
                               std::pair<std::size_t, std::size_t> tx_pair,
                               std::pair<std::size_t, std::size_t> rx_pair);

/// Scenario-file loaders (JSON with a `schema: 1` marker).
CorrelationSweepConfig parse_correlation_config(const nlohmann::json& scenario);
FrequencySweepConfig parse_frequency_config(const nlohmann::json& scenario);
RadarGeometry parse_geometry(const nlohmann::json& block, double frequency_hz);

/// `radar-mi` entry point: subcommands sweep-correlation, sweep-frequency,
/// schur-report, decorrelation-check. Returns the process exit code
/// (0 success, 1 numerical failure, 2 configuration/usage error).
int cli_main(int argc, const char* const* argv);

} // namespace radarmi
