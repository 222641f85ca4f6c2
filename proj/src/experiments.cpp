#include "radarmi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "radarmi/parallel.hpp"

namespace radarmi {

namespace {

using ordered_json = nlohmann::ordered_json;

void check(bool cond, const std::string& msg) {
    if (!cond) throw config_error(msg);
}

bool ascending(const std::vector<double>& v) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] > v[i + 1]) return false;
    return true;
}

double vector_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

double total_power_for(double snr_db, double mean_noise) {
    return std::pow(10.0, snr_db / 10.0) * mean_noise;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_to_csv(const ordered_json& cell) {
    if (cell.is_string()) return csv_escape(cell.get<std::string>());
    if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
    if (cell.is_number_integer()) return std::to_string(cell.get<long long>());
    if (cell.is_number_unsigned()) return std::to_string(cell.get<unsigned long long>());
    if (cell.is_number_float()) return format_double(cell.get<double>());
    if (cell.is_null()) return "";
    return csv_escape(cell.dump());
}

} // namespace

std::string SweepTable::to_csv() const {
    std::string out;
    for (const auto& [key, value] : metadata.items()) {
        out += "# ";
        out += key;
        out += ": ";
        if (value.is_string())
            out += value.get<std::string>();
        else
            out += value.dump();
        out += '\n';
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += csv_escape(columns[c]);
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += cell_to_csv(row[c]);
        }
        out += '\n';
    }
    return out;
}

ordered_json SweepTable::to_json() const {
    ordered_json j;
    j["metadata"] = metadata;
    j["columns"] = columns;
    ordered_json out_rows = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json r = ordered_json::array();
        for (const auto& cell : row) r.push_back(cell);
        out_rows.push_back(std::move(r));
    }
    j["rows"] = std::move(out_rows);
    return j;
}

std::vector<double> CorrelationSweepConfig::default_tau_grid() {
    std::vector<double> grid(21);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) / 20.0;
    return grid;
}

void CorrelationSweepConfig::validate() const {
    check(tx_count >= 1 && rx_count >= 1 && sample_count >= 1,
          "antenna and sample counts must be at least 1");
    const std::size_t target_dim = tx_count * rx_count;
    const std::size_t noise_dim = rx_count * sample_count;
    check(noise_dim >= target_dim,
          "noise dimension rx_count*sample_count must be >= target dimension "
          "tx_count*rx_count");
    check(noise_spectrum.size() == noise_dim,
          "noise_spectrum must have length rx_count*sample_count");
    check(correlated_endpoint.size() == target_dim,
          "correlated_endpoint must have length tx_count*rx_count");
    check(uncorrelated_endpoint.size() == target_dim,
          "uncorrelated_endpoint must have length tx_count*rx_count");
    for (double v : noise_spectrum) check(v > 0.0, "noise eigenvalues must be positive");
    for (std::size_t i = 0; i + 1 < noise_spectrum.size(); ++i)
        check(noise_spectrum[i] >= noise_spectrum[i + 1],
              "noise_spectrum must be sorted descending");
    auto check_spectrum = [](const std::vector<double>& s, const char* name) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            check(s[i] >= s[i + 1], std::string(name) + " must be sorted descending");
        check(s.back() >= 0.0, std::string(name) + " must be non-negative");
    };
    check_spectrum(correlated_endpoint, "correlated_endpoint");
    check_spectrum(uncorrelated_endpoint, "uncorrelated_endpoint");
    check(std::abs(vector_sum(correlated_endpoint) - vector_sum(uncorrelated_endpoint)) <= 1e-9,
          "endpoint spectra must share the same trace");
    check(!tau_grid.empty(), "tau_grid must be non-empty");
    check(ascending(tau_grid), "tau_grid must be sorted ascending");
    check(tau_grid.front() >= 0.0 && tau_grid.back() <= 1.0, "tau_grid must lie within [0,1]");
    check(!snr_db.empty(), "snr_db must be non-empty");
}

SweepTable sweep_correlation(const CorrelationSweepConfig& cfg) {
    cfg.validate();
    const std::size_t target_dim = cfg.tx_count * cfg.rx_count;
    const Spectrum noise_full(cfg.noise_spectrum);
    const Spectrum noise_sel = smallest_modes(noise_full, target_dim);
    const double mean_noise = noise_full.sum() / static_cast<double>(noise_full.size());

    const std::size_t n_tau = cfg.tau_grid.size();
    const std::size_t n_snr = cfg.snr_db.size();
    std::vector<double> mi(n_tau * n_snr, 0.0);

    parallel_for(n_tau * n_snr, [&](std::size_t idx) {
        const std::size_t ti = idx / n_snr;
        const std::size_t si = idx % n_snr;
        const double tau = cfg.tau_grid[ti];
        std::vector<double> blend(target_dim);
        for (std::size_t k = 0; k < target_dim; ++k)
            blend[k] = tau * cfg.correlated_endpoint[k] + (1.0 - tau) * cfg.uncorrelated_endpoint[k];
        const Spectrum sigma_h(std::move(blend));
        const double p_tot = total_power_for(cfg.snr_db[si], mean_noise);
        const PowerAllocation alloc = waterfill(sigma_h, noise_sel, p_tot);
        mi[idx] = spectral_mi(alloc.mode_powers, sigma_h, noise_sel).bits;
    });

    // Per-SNR normalization across the tau grid; the max row divides by
    // itself, so it is exactly 1.
    std::vector<double> group_max(n_snr, 0.0);
    for (std::size_t ti = 0; ti < n_tau; ++ti)
        for (std::size_t si = 0; si < n_snr; ++si)
            group_max[si] = std::max(group_max[si], mi[ti * n_snr + si]);

    SweepTable table;
    table.columns = {"tau", "snr_db", "mi_bits", "mi_normalized"};
    for (std::size_t ti = 0; ti < n_tau; ++ti) {
        for (std::size_t si = 0; si < n_snr; ++si) {
            const double value = mi[ti * n_snr + si];
            const double normalized = group_max[si] > 0.0 ? value / group_max[si] : 0.0;
            table.rows.push_back({cfg.tau_grid[ti], cfg.snr_db[si], value, normalized});
        }
    }

    ordered_json config_echo;
    config_echo["tx_count"] = cfg.tx_count;
    config_echo["rx_count"] = cfg.rx_count;
    config_echo["sample_count"] = cfg.sample_count;
    config_echo["noise_spectrum"] = cfg.noise_spectrum;
    config_echo["correlated_endpoint"] = cfg.correlated_endpoint;
    config_echo["uncorrelated_endpoint"] = cfg.uncorrelated_endpoint;
    config_echo["tau_grid"] = cfg.tau_grid;
    config_echo["snr_db"] = cfg.snr_db;
    table.metadata["artifact"] = "radar-mi";
    table.metadata["version"] = artifact_version;
    table.metadata["kind"] = "correlation-sweep";
    table.metadata["snr_definition"] = "P_tot = 10^(snr_db/10) * mean(noise eigenvalues)";
    table.metadata["config"] = std::move(config_echo);
    return table;
}

std::vector<double> FrequencySweepConfig::default_snr_grid() {
    std::vector<double> grid;
    for (int db = -10; db <= 30; db += 2) grid.push_back(static_cast<double>(db));
    return grid;
}

RadarGeometry FrequencySweepConfig::geometry_at(double frequency_hz) const {
    RadarGeometry g;
    g.tx_positions = tx_positions;
    g.rx_positions = rx_positions;
    g.target_center = target_center;
    g.dim_x = dim_x;
    g.dim_y = dim_y;
    g.carrier_frequency_hz = frequency_hz;
    return g;
}

std::vector<double> FrequencySweepConfig::resolve_noise_spectrum() const {
    const std::size_t noise_dim = rx_positions.size() * sample_count;
    if (white_noise) return std::vector<double>(noise_dim, 1.0);
    if (!noise_spectrum.empty()) return noise_spectrum;
    if (noise_dim == 4) return {8.0, 4.0, 3.0, 2.0};
    throw config_error("no noise_spectrum given and the built-in default applies only to "
                       "noise dimension 4; specify one or set white_noise");
}

void FrequencySweepConfig::validate() const {
    check(frequencies_hz.size() >= 2, "frequency sweep needs at least two frequencies");
    for (double f : frequencies_hz) check(f > 0.0, "frequencies must be positive");
    check(scatterer_count >= 1, "scatterer_count must be at least 1");
    check(sample_count >= 1, "sample_count must be at least 1");
    check(!snr_db.empty(), "snr_db must be non-empty");
    geometry_at(frequencies_hz.front()).validate();
    const std::size_t target_dim = tx_positions.size() * rx_positions.size();
    const std::vector<double> noise = resolve_noise_spectrum();
    check(noise.size() == rx_positions.size() * sample_count,
          "noise_spectrum must have length rx_count*sample_count");
    check(noise.size() >= target_dim,
          "noise dimension rx_count*sample_count must be >= target dimension "
          "tx_count*rx_count");
    for (double v : noise) check(v > 0.0, "noise eigenvalues must be positive");
    for (std::size_t i = 0; i + 1 < noise.size(); ++i)
        check(noise[i] >= noise[i + 1], "noise_spectrum must be sorted descending");
}

SweepTable sweep_snr_frequency(const FrequencySweepConfig& cfg) {
    cfg.validate();
    const std::vector<double> noise_values = cfg.resolve_noise_spectrum();
    const HermitianMatrix noise_cov = HermitianMatrix::diagonal(noise_values);
    const double mean_noise =
        vector_sum(noise_values) / static_cast<double>(noise_values.size());

    // Scatterer positions are drawn once and shared across frequencies, so
    // only the propagation phases change with the carrier.
    const ScattererSet scatterers = synthesize_scatterers(
        cfg.geometry_at(cfg.frequencies_hz.front()), cfg.scatterer_count, cfg.seed);

    const std::size_t n_freq = cfg.frequencies_hz.size();
    const std::size_t n_snr = cfg.snr_db.size();
    std::vector<HermitianMatrix> covariances;
    covariances.reserve(n_freq);
    ordered_json spectra_echo;
    for (std::size_t fi = 0; fi < n_freq; ++fi) {
        const PathMatrices paths =
            path_matrices(cfg.geometry_at(cfg.frequencies_hz[fi]), scatterers);
        covariances.push_back(target_covariance(paths));
        const EigDecomposition eig = hermitian_eig(covariances.back());
        spectra_echo[format_double(cfg.frequencies_hz[fi])] = eig.eigenvalues;
    }

    std::vector<double> mi(n_freq * n_snr, 0.0);
    parallel_for(n_freq * n_snr, [&](std::size_t idx) {
        const std::size_t fi = idx / n_snr;
        const std::size_t si = idx % n_snr;
        const double p_tot = total_power_for(cfg.snr_db[si], mean_noise);
        const auto [waveform, alloc] = optimal_waveform(covariances[fi], noise_cov, p_tot);
        mi[idx] = mutual_information(waveform, covariances[fi], noise_cov).bits;
    });

    std::vector<double> group_max(n_snr, 0.0);
    for (std::size_t fi = 0; fi < n_freq; ++fi)
        for (std::size_t si = 0; si < n_snr; ++si)
            group_max[si] = std::max(group_max[si], mi[fi * n_snr + si]);

    SweepTable table;
    table.columns = {"frequency_hz", "snr_db", "mi_bits", "mi_normalized"};
    for (std::size_t fi = 0; fi < n_freq; ++fi) {
        for (std::size_t si = 0; si < n_snr; ++si) {
            const double value = mi[fi * n_snr + si];
            const double normalized = group_max[si] > 0.0 ? value / group_max[si] : 0.0;
            table.rows.push_back(
                {cfg.frequencies_hz[fi], cfg.snr_db[si], value, normalized});
        }
    }

    ordered_json config_echo;
    ordered_json tx = ordered_json::array();
    for (const Point2& p : cfg.tx_positions) tx.push_back({p.x, p.y});
    ordered_json rx = ordered_json::array();
    for (const Point2& p : cfg.rx_positions) rx.push_back({p.x, p.y});
    config_echo["geometry"] = {{"tx", tx},
                               {"rx", rx},
                               {"target_center", {cfg.target_center.x, cfg.target_center.y}},
                               {"patch_dims", {cfg.dim_x, cfg.dim_y}}};
    config_echo["frequencies_hz"] = cfg.frequencies_hz;
    config_echo["scatterer_count"] = cfg.scatterer_count;
    config_echo["sample_count"] = cfg.sample_count;
    config_echo["snr_db"] = cfg.snr_db;
    config_echo["noise_spectrum"] = noise_values;
    table.metadata["artifact"] = "radar-mi";
    table.metadata["version"] = artifact_version;
    table.metadata["kind"] = "frequency-sweep";
    table.metadata["seed"] = cfg.seed;
    table.metadata["snr_definition"] = "P_tot = 10^(snr_db/10) * mean(noise eigenvalues)";
    table.metadata["config"] = std::move(config_echo);
    table.metadata["target_spectra"] = std::move(spectra_echo);
    return table;
}

SweepTable schur_report(const Spectrum& sigma_h, const Spectrum& sigma_w) {
    const ThresholdReport report = schur_threshold(sigma_h, sigma_w);

    SweepTable table;
    table.columns = {"i", "j", "ratio"};
    for (const ThresholdEntry& e : report.entries) {
        ordered_json ratio;
        if (e.defined)
            ratio = e.ratio;
        else
            ratio = "undefined";
        table.rows.push_back({e.i, e.j, std::move(ratio)});
    }

    table.metadata["artifact"] = "radar-mi";
    table.metadata["version"] = artifact_version;
    table.metadata["kind"] = "schur-report";
    table.metadata["sigma_h"] = sigma_h.values();
    table.metadata["sigma_w"] = sigma_w.values();
    table.metadata["defined_count"] = report.defined_count;
    table.metadata["max_ratio"] = report.max_ratio;
    if (report.bounded) {
        table.metadata["p_upper"] = report.p_upper();
        table.metadata["schur_convex_region"] = "(0, " + format_double(report.p_upper()) + "]";
    } else {
        table.metadata["p_upper"] = "inf";
        table.metadata["schur_convex_region"] = "(0, inf)";
    }
    return table;
}

SweepTable decorrelation_table(const RadarGeometry& geometry,
                               std::pair<std::size_t, std::size_t> tx_pair,
                               std::pair<std::size_t, std::size_t> rx_pair) {
    const DecorrelationReport report = decorrelation_report(geometry, tx_pair, rx_pair);

    SweepTable table;
    table.columns = {"condition", "lhs", "threshold", "met"};
    for (const DecorrelationCondition& c : report.conditions)
        table.rows.push_back({c.name, c.lhs, c.threshold, c.met});

    table.metadata["artifact"] = "radar-mi";
    table.metadata["version"] = artifact_version;
    table.metadata["kind"] = "decorrelation-check";
    table.metadata["frequency_hz"] = geometry.carrier_frequency_hz;
    table.metadata["wavelength_m"] = geometry.wavelength();
    table.metadata["tx_pair"] = {tx_pair.first, tx_pair.second};
    table.metadata["rx_pair"] = {rx_pair.first, rx_pair.second};
    table.metadata["verdict"] = report.uncorrelated ? "uncorrelated" : "correlated";
    return table;
}

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw config_error(std::string("missing config field '") + key + "'");
    return *it;
}

std::vector<double> double_list(const nlohmann::json& j, const char* key) {
    const nlohmann::json& arr = field(j, key);
    if (!arr.is_array() || arr.empty())
        throw config_error(std::string("config field '") + key +
                           "' must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number())
            throw config_error(std::string("config field '") + key + "' must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

Point2 parse_point(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw config_error(std::string(what) + " must be a [x, y] number pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point2> parse_points(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw config_error(std::string(what) + " must be a non-empty array of [x, y] pairs");
    std::vector<Point2> out;
    for (const auto& p : j) out.push_back(parse_point(p, what));
    return out;
}

void check_schema(const nlohmann::json& scenario) {
    auto it = scenario.find("schema");
    if (it == scenario.end() || !it->is_number_integer() || it->get<int>() != 1)
        throw config_error("scenario file must declare \"schema\": 1");
}

void check_kind(const nlohmann::json& scenario, const char* expected) {
    auto it = scenario.find("kind");
    if (it != scenario.end() && it->get<std::string>() != expected)
        throw config_error(std::string("scenario kind '") + it->get<std::string>() +
                           "' does not match subcommand '" + expected + "'");
}

} // namespace

RadarGeometry parse_geometry(const nlohmann::json& block, double frequency_hz) {
    RadarGeometry g;
    g.tx_positions = parse_points(field(block, "tx"), "geometry.tx");
    g.rx_positions = parse_points(field(block, "rx"), "geometry.rx");
    g.target_center = parse_point(field(block, "target_center"), "geometry.target_center");
    const nlohmann::json& dims = field(block, "patch_dims");
    const Point2 d = parse_point(dims, "geometry.patch_dims");
    g.dim_x = d.x;
    g.dim_y = d.y;
    g.carrier_frequency_hz = frequency_hz;
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("invalid geometry: ") + e.what());
    }
    return g;
}

CorrelationSweepConfig parse_correlation_config(const nlohmann::json& scenario) {
    check_schema(scenario);
    check_kind(scenario, "correlation-sweep");
    CorrelationSweepConfig cfg;
    cfg.tx_count = field(scenario, "tx_count").get<std::size_t>();
    cfg.rx_count = field(scenario, "rx_count").get<std::size_t>();
    cfg.sample_count = field(scenario, "sample_count").get<std::size_t>();
    cfg.noise_spectrum = double_list(scenario, "noise_spectrum");
    cfg.correlated_endpoint = double_list(scenario, "correlated_endpoint");
    cfg.uncorrelated_endpoint = double_list(scenario, "uncorrelated_endpoint");
    if (scenario.contains("tau_grid"))
        cfg.tau_grid = double_list(scenario, "tau_grid");
    else
        cfg.tau_grid = CorrelationSweepConfig::default_tau_grid();
    if (scenario.contains("snr_db"))
        cfg.snr_db = double_list(scenario, "snr_db");
    else
        cfg.snr_db = {0.0, 5.0, 20.0};
    return cfg;
}

FrequencySweepConfig parse_frequency_config(const nlohmann::json& scenario) {
    check_schema(scenario);
    check_kind(scenario, "frequency-sweep");
    FrequencySweepConfig cfg;
    const nlohmann::json& geo = field(scenario, "geometry");
    cfg.tx_positions = parse_points(field(geo, "tx"), "geometry.tx");
    cfg.rx_positions = parse_points(field(geo, "rx"), "geometry.rx");
    cfg.target_center = parse_point(field(geo, "target_center"), "geometry.target_center");
    const Point2 dims = parse_point(field(geo, "patch_dims"), "geometry.patch_dims");
    cfg.dim_x = dims.x;
    cfg.dim_y = dims.y;
    cfg.frequencies_hz = double_list(scenario, "frequencies_hz");
    if (scenario.contains("scatterer_count"))
        cfg.scatterer_count = field(scenario, "scatterer_count").get<std::size_t>();
    if (scenario.contains("sample_count"))
        cfg.sample_count = field(scenario, "sample_count").get<std::size_t>();
    if (scenario.contains("seed")) cfg.seed = field(scenario, "seed").get<std::uint64_t>();
    if (scenario.contains("snr_db"))
        cfg.snr_db = double_list(scenario, "snr_db");
    else
        cfg.snr_db = FrequencySweepConfig::default_snr_grid();
    if (scenario.contains("noise_spectrum")) {
        const nlohmann::json& noise = scenario["noise_spectrum"];
        if (noise.is_string() && noise.get<std::string>() == "white")
            cfg.white_noise = true;
        else
            cfg.noise_spectrum = double_list(scenario, "noise_spectrum");
    }
    return cfg;
}

} // namespace radarmi
