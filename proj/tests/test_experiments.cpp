#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "radarmi/experiments.hpp"
#include "radarmi/parallel.hpp"

using namespace radarmi;

namespace {

CorrelationSweepConfig reference_corr_config() {
    CorrelationSweepConfig cfg;
    cfg.tx_count = 2;
    cfg.rx_count = 2;
    cfg.sample_count = 2;
    cfg.noise_spectrum = {8.0, 4.0, 3.0, 2.0};
    cfg.correlated_endpoint = {1.0, 0.0, 0.0, 0.0};
    cfg.uncorrelated_endpoint = {0.25, 0.25, 0.25, 0.25};
    cfg.tau_grid = CorrelationSweepConfig::default_tau_grid();
    cfg.snr_db = {0.0, 5.0, 20.0};
    return cfg;
}

FrequencySweepConfig reference_freq_config() {
    FrequencySweepConfig cfg;
    cfg.tx_positions = {{2.0, 4.8}, {2.2, 4.0}};
    cfg.rx_positions = {{0.0, 2.0}, {0.0, 4.0}};
    cfg.target_center = {2.0, 2.0};
    cfg.dim_x = 2.0;
    cfg.dim_y = 2.0;
    cfg.frequencies_hz = {1e8, 8e9};
    cfg.scatterer_count = 50;
    cfg.sample_count = 2;
    cfg.seed = 1;
    cfg.snr_db = {-10.0, 0.0, 10.0};
    return cfg;
}

double cell_number(const SweepTable& table, std::size_t row, const std::string& column) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        if (table.columns[c] == column) return table.rows[row][c].get<double>();
    FAIL("no such column ", column);
    return 0.0;
}

struct EnvGuard {
    std::string name;
    std::string saved;
    bool had = false;
    EnvGuard(const char* variable, const char* value) : name(variable) {
        if (const char* old = std::getenv(variable)) {
            saved = old;
            had = true;
        }
        setenv(variable, value, 1);
    }
    ~EnvGuard() {
        if (had)
            setenv(name.c_str(), saved.c_str(), 1);
        else
            unsetenv(name.c_str());
    }
};

std::string temp_path(const char* stem) {
    return std::string("/tmp/radarmi_test_") + stem + "_" + std::to_string(::getpid());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("CSV writer formats numbers at 12 significant digits with metadata lines") {
    SweepTable table;
    table.columns = {"a", "b,c"};
    table.metadata["kind"] = "demo";
    table.metadata["list"] = {1, 2};
    table.rows.push_back({1.0 / 3.0, "plain"});
    table.rows.push_back({0.1, "with,comma"});
    table.rows.push_back({true, nullptr});
    const std::string csv = table.to_csv();
    CHECK(csv.find("# kind: demo\n") != std::string::npos);
    CHECK(csv.find("# list: [1,2]\n") != std::string::npos);
    CHECK(csv.find("0.333333333333,plain\n") != std::string::npos);
    CHECK(csv.find("0.1,\"with,comma\"\n") != std::string::npos);
    CHECK(csv.find("true,\n") != std::string::npos);
    CHECK(csv.find("a,\"b,c\"\n") != std::string::npos);

    const nlohmann::ordered_json j = table.to_json();
    CHECK(j["metadata"]["kind"] == "demo");
    CHECK(j["columns"].size() == 2);
    CHECK(j["rows"].size() == 3);
}

TEST_CASE("correlation sweep reproduces the endpoint orderings") {
    CorrelationSweepConfig cfg = reference_corr_config();
    cfg.tau_grid = {0.0, 1.0};
    cfg.snr_db = {0.0, 20.0};
    const SweepTable table = sweep_correlation(cfg);
    REQUIRE(table.rows.size() == 4);
    // rows: (tau 0, snr 0), (tau 0, snr 20), (tau 1, snr 0), (tau 1, snr 20)
    const double mi_flat_0db = cell_number(table, 0, "mi_bits");
    const double mi_flat_20db = cell_number(table, 1, "mi_bits");
    const double mi_peak_0db = cell_number(table, 2, "mi_bits");
    const double mi_peak_20db = cell_number(table, 3, "mi_bits");
    CHECK(mi_peak_0db > mi_flat_0db);   // low SNR: correlation helps
    CHECK(mi_flat_20db > mi_peak_20db); // high SNR: correlation hurts
}

TEST_CASE("correlation sweep normalization and determinism") {
    CorrelationSweepConfig cfg = reference_corr_config();
    const SweepTable a = sweep_correlation(cfg);
    const SweepTable b = sweep_correlation(cfg);
    CHECK(a.to_csv() == b.to_csv());

    double max_normalized[3] = {0.0, 0.0, 0.0};
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        const double snr = cell_number(a, r, "snr_db");
        const std::size_t group = snr == 0.0 ? 0 : (snr == 5.0 ? 1 : 2);
        max_normalized[group] =
            std::max(max_normalized[group], cell_number(a, r, "mi_normalized"));
    }
    for (double m : max_normalized) CHECK(m == 1.0); // exactly, by self-division

    CorrelationSweepConfig single = reference_corr_config();
    single.tau_grid = {0.5};
    single.snr_db = {5.0};
    const SweepTable s = sweep_correlation(single);
    REQUIRE(s.rows.size() == 1);
    CHECK(cell_number(s, 0, "mi_normalized") == 1.0);
}

TEST_CASE("correlation sweep validates its configuration") {
    CorrelationSweepConfig cfg = reference_corr_config();
    cfg.uncorrelated_endpoint = {0.5, 0.25, 0.25, 0.25}; // trace mismatch
    CHECK_THROWS_AS(sweep_correlation(cfg), config_error);
    cfg = reference_corr_config();
    cfg.tau_grid = {0.5, 0.2};
    CHECK_THROWS_AS(sweep_correlation(cfg), config_error);
    cfg = reference_corr_config();
    cfg.tau_grid = {0.5, 1.2};
    CHECK_THROWS_AS(sweep_correlation(cfg), config_error);
    cfg = reference_corr_config();
    cfg.noise_spectrum = {8.0, 4.0, 3.0};
    CHECK_THROWS_AS(sweep_correlation(cfg), config_error);
    cfg = reference_corr_config();
    cfg.noise_spectrum = {8.0, 4.0, 3.0, 0.0};
    CHECK_THROWS_AS(sweep_correlation(cfg), config_error);
    cfg = reference_corr_config();
    cfg.snr_db.clear();
    CHECK_THROWS_AS(sweep_correlation(cfg), config_error);
}

TEST_CASE("frequency sweep basics: determinism, identical carriers, rank-1 scenes") {
    FrequencySweepConfig cfg = reference_freq_config();
    const SweepTable a = sweep_snr_frequency(cfg);
    const SweepTable b = sweep_snr_frequency(cfg);
    CHECK(a.to_csv() == b.to_csv());
    REQUIRE(a.rows.size() == 6);

    FrequencySweepConfig twin = reference_freq_config();
    twin.frequencies_hz = {8e9, 8e9};
    const SweepTable t = sweep_snr_frequency(twin);
    for (std::size_t si = 0; si < 3; ++si)
        CHECK(cell_number(t, si, "mi_bits") == cell_number(t, 3 + si, "mi_bits"));

    FrequencySweepConfig lone = reference_freq_config();
    lone.scatterer_count = 1;
    const SweepTable l = sweep_snr_frequency(lone);
    for (std::size_t si = 0; si < 3; ++si)
        CHECK(cell_number(l, si, "mi_bits") ==
              doctest::Approx(cell_number(l, 3 + si, "mi_bits")).epsilon(1e-9));

    FrequencySweepConfig bad = reference_freq_config();
    bad.frequencies_hz = {8e9};
    CHECK_THROWS_AS(sweep_snr_frequency(bad), config_error);
    bad = reference_freq_config();
    bad.noise_spectrum = {1.0, 2.0, 3.0, 4.0}; // ascending
    CHECK_THROWS_AS(sweep_snr_frequency(bad), config_error);
}

TEST_CASE("frequency sweep noise defaults") {
    FrequencySweepConfig cfg = reference_freq_config();
    CHECK(cfg.resolve_noise_spectrum() == std::vector<double>{8.0, 4.0, 3.0, 2.0});
    cfg.white_noise = true;
    CHECK(cfg.resolve_noise_spectrum() == std::vector<double>(4, 1.0));
    cfg.white_noise = false;
    cfg.sample_count = 3; // noise dimension 6: no built-in default
    CHECK_THROWS_AS(cfg.resolve_noise_spectrum(), config_error);
    cfg.noise_spectrum = {6.0, 5.0, 4.0, 3.0, 2.0, 1.0};
    CHECK(cfg.resolve_noise_spectrum().size() == 6);
}

TEST_CASE("schur report renders the table and undefined markers") {
    const SweepTable table =
        schur_report(Spectrum({5.0, 2.0, 1.0, 0.5}), Spectrum({8.0, 4.0, 3.0, 2.0}));
    const std::string csv = table.to_csv();
    CHECK(csv.find("i,j,ratio\n") != std::string::npos);
    CHECK(csv.find("1,2,3\n") != std::string::npos);
    CHECK(csv.find("1,4,0.75\n") != std::string::npos);
    CHECK(csv.find("3,4,0.125\n") != std::string::npos);
    CHECK(csv.find("# max_ratio: 3") != std::string::npos);
    CHECK(csv.find("# schur_convex_region: (0, 0.333333333333]") != std::string::npos);

    const SweepTable degenerate =
        schur_report(Spectrum({3.0, 2.0, 1.0}), Spectrum({2.0, 2.0, 1.0}));
    CHECK(degenerate.to_csv().find("2,3,undefined\n") != std::string::npos);
}

TEST_CASE("decorrelation table carries the verdict") {
    RadarGeometry g;
    g.tx_positions = {{2.0, 4.8}, {2.2, 4.0}};
    g.rx_positions = {{0.0, 2.0}, {0.0, 4.0}};
    g.target_center = {2.0, 2.0};
    g.dim_x = 2.0;
    g.dim_y = 2.0;
    g.carrier_frequency_hz = 8e9;
    CHECK(decorrelation_table(g, {1, 2}, {1, 2}).metadata["verdict"] == "uncorrelated");
    g.carrier_frequency_hz = 1e8;
    const SweepTable low = decorrelation_table(g, {1, 2}, {1, 2});
    CHECK(low.metadata["verdict"] == "correlated");
    CHECK(low.rows.size() == 4);
}

TEST_CASE("scenario parsing validates schema, kinds, and fields") {
    nlohmann::json good = {
        {"schema", 1},
        {"kind", "correlation-sweep"},
        {"tx_count", 2},
        {"rx_count", 2},
        {"sample_count", 2},
        {"noise_spectrum", {8, 4, 3, 2}},
        {"correlated_endpoint", {1, 0, 0, 0}},
        {"uncorrelated_endpoint", {0.25, 0.25, 0.25, 0.25}},
    };
    const CorrelationSweepConfig cfg = parse_correlation_config(good);
    CHECK(cfg.tau_grid.size() == 21); // default grid
    CHECK(cfg.snr_db == std::vector<double>{0.0, 5.0, 20.0});

    nlohmann::json no_schema = good;
    no_schema.erase("schema");
    CHECK_THROWS_AS(parse_correlation_config(no_schema), config_error);
    nlohmann::json bad_schema = good;
    bad_schema["schema"] = 2;
    CHECK_THROWS_AS(parse_correlation_config(bad_schema), config_error);
    nlohmann::json wrong_kind = good;
    wrong_kind["kind"] = "frequency-sweep";
    CHECK_THROWS_AS(parse_correlation_config(wrong_kind), config_error);
    nlohmann::json missing = good;
    missing.erase("noise_spectrum");
    CHECK_THROWS_AS(parse_correlation_config(missing), config_error);

    nlohmann::json freq = {
        {"schema", 1},
        {"geometry",
         {{"tx", {{2.0, 4.8}, {2.2, 4.0}}},
          {"rx", {{0.0, 2.0}, {0.0, 4.0}}},
          {"target_center", {2.0, 2.0}},
          {"patch_dims", {2.0, 2.0}}}},
        {"frequencies_hz", {1e8, 8e9}},
        {"noise_spectrum", "white"},
        {"seed", 42},
    };
    const FrequencySweepConfig fcfg = parse_frequency_config(freq);
    CHECK(fcfg.white_noise);
    CHECK(fcfg.seed == 42);
    CHECK(fcfg.snr_db.size() == 21); // -10:2:30
    CHECK(fcfg.scatterer_count == 1000);

    nlohmann::json bad_geo = freq;
    bad_geo["geometry"].erase("patch_dims");
    CHECK_THROWS_AS(parse_frequency_config(bad_geo), config_error);
}

TEST_CASE("thread budget parsing and parallel determinism") {
    {
        EnvGuard env("RADAR_MI_THREADS", "3");
        CHECK(resolve_thread_count(10) == 3);
        CHECK(resolve_thread_count(2) == 2);
    }
    {
        EnvGuard env("RADAR_MI_THREADS", "0");
        CHECK(resolve_thread_count(4) >= 1);
    }
    {
        EnvGuard env("RADAR_MI_THREADS", "banana");
        CHECK_THROWS_AS(resolve_thread_count(4), config_error);
    }
    {
        EnvGuard env("RADAR_MI_THREADS", "-2");
        CHECK_THROWS_AS(resolve_thread_count(4), config_error);
    }

    std::vector<double> serial(64), threaded(64);
    {
        EnvGuard env("RADAR_MI_THREADS", "1");
        parallel_for(64, [&](std::size_t i) { serial[i] = std::sqrt(static_cast<double>(i)); });
    }
    {
        EnvGuard env("RADAR_MI_THREADS", "4");
        parallel_for(64,
                     [&](std::size_t i) { threaded[i] = std::sqrt(static_cast<double>(i)); });
    }
    CHECK(serial == threaded);

    CorrelationSweepConfig cfg = reference_corr_config();
    std::string csv_serial, csv_parallel;
    {
        EnvGuard env("RADAR_MI_THREADS", "1");
        csv_serial = sweep_correlation(cfg).to_csv();
    }
    {
        EnvGuard env("RADAR_MI_THREADS", "8");
        csv_parallel = sweep_correlation(cfg).to_csv();
    }
    CHECK(csv_serial == csv_parallel);
}

TEST_CASE("CLI round trip through the in-process entry point") {
    auto run = [](std::initializer_list<const char*> args) {
        std::vector<const char*> argv{"radar-mi"};
        argv.insert(argv.end(), args.begin(), args.end());
        return cli_main(static_cast<int>(argv.size()), argv.data());
    };

    SUBCASE("schur report to a file") {
        const std::string out = temp_path("schur");
        CHECK(run({"schur-report", "--sigma-h", "5,2,1,0.5", "--sigma-w", "8,4,3,2", "--out",
                   out.c_str()}) == 0);
        const std::string csv = read_file(out);
        CHECK(csv.find("1,2,3\n") != std::string::npos);
        CHECK(csv.find("# schur_convex_region: (0, 0.333333333333]") != std::string::npos);
        std::remove(out.c_str());
    }
    SUBCASE("json format") {
        const std::string out = temp_path("schur_json");
        CHECK(run({"schur-report", "--sigma-h", "5,2,1,0.5", "--sigma-w", "8,4,3,2",
                   "--format", "json", "--out", out.c_str()}) == 0);
        const nlohmann::json j = nlohmann::json::parse(read_file(out));
        CHECK(j["metadata"]["max_ratio"] == 3.0);
        CHECK(j["rows"].size() == 6);
        std::remove(out.c_str());
    }
    SUBCASE("usage errors exit 2") {
        CHECK(run({"no-such-command"}) == 2);
        CHECK(run({"schur-report", "--sigma-h", "5,2"}) == 2);            // missing sigma-w
        CHECK(run({"sweep-correlation", "--config", "/nonexistent"}) == 2);
        CHECK(run({"schur-report", "--sigma-h", "1,2,3", "--sigma-w", "3,2,1"}) ==
              2); // ascending target spectrum
        CHECK(run({"sweep-correlation", "--config", "/nonexistent", "--bogus"}) == 2);
        CHECK(run({}) == 2);
    }
    SUBCASE("decorrelation check needs a frequency from somewhere") {
        const std::string cfg_path = temp_path("geo");
        std::ofstream(cfg_path) << R"({
            "schema": 1,
            "geometry": {
                "tx": [[2.0, 4.8], [2.2, 4.0]],
                "rx": [[0.0, 2.0], [0.0, 4.0]],
                "target_center": [2.0, 2.0],
                "patch_dims": [2.0, 2.0]
            }
        })";
        CHECK(run({"decorrelation-check", "--config", cfg_path.c_str()}) == 2);
        const std::string out = temp_path("decorr");
        CHECK(run({"decorrelation-check", "--config", cfg_path.c_str(), "--frequency-hz",
                   "8e9", "--out", out.c_str()}) == 0);
        const std::string csv = read_file(out);
        CHECK(csv.find("# verdict: uncorrelated") != std::string::npos);
        CHECK(csv.find("tx-x,") != std::string::npos);
        std::remove(out.c_str());
        std::remove(cfg_path.c_str());
    }
    SUBCASE("malformed scenario JSON exits 2") {
        const std::string cfg_path = temp_path("badjson");
        std::ofstream(cfg_path) << "{ not json";
        CHECK(run({"sweep-correlation", "--config", cfg_path.c_str()}) == 2);
        std::remove(cfg_path.c_str());
    }
}
