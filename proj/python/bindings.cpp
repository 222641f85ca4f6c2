#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <complex>
#include <cstring>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "radarmi/channel.hpp"
#include "radarmi/experiments.hpp"
#include "radarmi/majorize.hpp"
#include "radarmi/numlin.hpp"
#include "radarmi/waveform.hpp"

namespace py = pybind11;
using namespace radarmi;

namespace {

using farray =
    py::array_t<std::complex<double>, py::array::f_style | py::array::forcecast>;

ComplexMatrix to_matrix(const farray& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    const std::size_t rows = static_cast<std::size_t>(arr.shape(0));
    const std::size_t cols = static_cast<std::size_t>(arr.shape(1));
    std::vector<cdouble> data(arr.data(), arr.data() + rows * cols);
    return ComplexMatrix(rows, cols, std::move(data));
}

py::array from_matrix(const ComplexMatrix& m) {
    const auto rows = static_cast<py::ssize_t>(m.rows());
    const auto cols = static_cast<py::ssize_t>(m.cols());
    constexpr auto itemsize = static_cast<py::ssize_t>(sizeof(cdouble));
    return py::array_t<std::complex<double>>({rows, cols},
                                             {itemsize, rows * itemsize}, m.data().data());
}

Spectrum to_spectrum(std::vector<double> values) {
    return Spectrum::from_eigenvalues(std::move(values));
}

RadarGeometry make_geometry(const std::vector<std::array<double, 2>>& tx,
                            const std::vector<std::array<double, 2>>& rx,
                            const std::array<double, 2>& target_center, double dim_x,
                            double dim_y, double frequency_hz) {
    RadarGeometry g;
    for (const auto& p : tx) g.tx_positions.push_back({p[0], p[1]});
    for (const auto& p : rx) g.rx_positions.push_back({p[0], p[1]});
    g.target_center = {target_center[0], target_center[1]};
    g.dim_x = dim_x;
    g.dim_y = dim_y;
    g.carrier_frequency_hz = frequency_hz;
    g.validate();
    return g;
}

py::dict allocation_dict(const PowerAllocation& alloc) {
    py::dict d;
    d["mode_powers"] = alloc.mode_powers;
    d["water_level"] = alloc.water_level;
    d["active_count"] = alloc.active_count;
    return d;
}

py::object witness_obj(const std::optional<SchurWitness>& w) {
    if (!w) return py::none();
    py::dict d;
    d["dominant"] = w->dominant;
    d["dominated"] = w->dominated;
    d["f_dominant"] = w->f_dominant;
    d["f_dominated"] = w->f_dominated;
    return d;
}

nlohmann::json parse_scenario(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("invalid scenario JSON: ") + e.what());
    }
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mutual-information-optimal waveform design for widely spaced MIMO radar";
    m.attr("__version__") = artifact_version;

    py::register_exception<numerical_error>(m, "NumericalError");
    py::register_exception<config_error>(m, "ConfigError");

    // --- dense Hermitian linear algebra -----------------------------------
    m.def(
        "eigh",
        [](const farray& a) {
            const EigDecomposition eig = hermitian_eig(HermitianMatrix(to_matrix(a)));
            return py::make_tuple(py::array(py::cast(eig.eigenvalues)),
                                  from_matrix(eig.eigenvectors));
        },
        py::arg("matrix"),
        "Eigendecomposition of a Hermitian matrix: (descending eigenvalues, "
        "matching eigenvector columns).");
    m.def(
        "log_det_psd",
        [](const farray& a, double ridge) {
            return log_det_psd(HermitianMatrix(to_matrix(a)), ridge);
        },
        py::arg("matrix"), py::arg("ridge") = 0.0,
        "Natural-log determinant of a positive-definite Hermitian matrix.");
    m.def(
        "kron", [](const farray& a, const farray& b) {
            return from_matrix(kron(to_matrix(a), to_matrix(b)));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "vec", [](const farray& a) { return py::array(py::cast(vec(to_matrix(a)))); },
        py::arg("matrix"), "Column stacking of a matrix into a vector.");

    // --- majorization and Schur analysis -----------------------------------
    m.def(
        "majorizes",
        [](std::vector<double> x, std::vector<double> y, double tol) {
            return majorizes(to_spectrum(std::move(x)), to_spectrum(std::move(y)), tol);
        },
        py::arg("x"), py::arg("y"), py::arg("tol") = 1e-9,
        "Whether x majorizes y (prefix-sum dominance under equal totals).");
    m.def(
        "more_correlated",
        [](std::vector<double> a, std::vector<double> b, double tol) {
            return to_string(
                more_correlated(to_spectrum(std::move(a)), to_spectrum(std::move(b)), tol));
        },
        py::arg("a"), py::arg("b"), py::arg("tol") = 1e-9,
        "Correlation order of two equal-trace spectra: 'first', 'second', 'equal', or "
        "'incomparable'.");
    m.def(
        "schur_scan",
        [](const std::function<double(std::vector<double>)>& f, std::size_t dimension,
           double trace, std::size_t trials, std::uint64_t seed, double tol) {
            const SchurVerdict verdict = schur_scan(
                [&f](std::span<const double> values) {
                    return f(std::vector<double>(values.begin(), values.end()));
                },
                dimension, trace, trials, seed, tol);
            py::dict d;
            d["classification"] = to_string(verdict.classification);
            d["trials"] = verdict.trials;
            d["convexity_violation"] = witness_obj(verdict.convexity_violation);
            d["concavity_violation"] = witness_obj(verdict.concavity_violation);
            return d;
        },
        py::arg("f"), py::arg("dimension"), py::arg("trace"), py::arg("trials") = 500,
        py::arg("seed") = 1, py::arg("tol") = 1e-12,
        "Randomized Schur-convexity scan of f over comparable spectrum pairs.");
    m.def(
        "schur_threshold",
        [](std::vector<double> sigma_h, std::vector<double> sigma_w) {
            const ThresholdReport report = schur_threshold(to_spectrum(std::move(sigma_h)),
                                                           to_spectrum(std::move(sigma_w)));
            py::list entries;
            for (const ThresholdEntry& e : report.entries) {
                py::dict d;
                d["i"] = e.i;
                d["j"] = e.j;
                d["defined"] = e.defined;
                d["ratio"] = e.ratio;
                entries.append(d);
            }
            py::dict d;
            d["entries"] = entries;
            d["defined_count"] = report.defined_count;
            d["max_ratio"] = report.max_ratio;
            d["bounded"] = report.bounded;
            d["p_upper"] = report.p_upper();
            return d;
        },
        py::arg("sigma_h"), py::arg("sigma_w"),
        "Difference-ratio table and the Schur-convex power region bound.");

    // --- waveform design ----------------------------------------------------
    m.def(
        "waterfill",
        [](std::vector<double> sigma_h, std::vector<double> sigma_w, double total_power) {
            return allocation_dict(waterfill(to_spectrum(std::move(sigma_h)),
                                             to_spectrum(std::move(sigma_w)), total_power));
        },
        py::arg("sigma_h"), py::arg("sigma_w"), py::arg("total_power"),
        "Water-filling power allocation over opposed target/noise eigenmodes.");
    m.def(
        "spectral_mi",
        [](const std::vector<double>& mode_powers, std::vector<double> sigma_h,
           std::vector<double> sigma_w) {
            return spectral_mi(mode_powers, to_spectrum(std::move(sigma_h)),
                               to_spectrum(std::move(sigma_w)))
                .bits;
        },
        py::arg("mode_powers"), py::arg("sigma_h"), py::arg("sigma_w"),
        "Mutual information in bits of a diagonal mode allocation.");
    m.def(
        "mutual_information",
        [](const farray& samples, const farray& target_cov, const farray& noise_cov) {
            ComplexMatrix s = to_matrix(samples);
            const double power = frobenius_norm(s) * frobenius_norm(s);
            return mutual_information(WaveformMatrix{std::move(s), power},
                                      HermitianMatrix(to_matrix(target_cov)),
                                      HermitianMatrix(to_matrix(noise_cov)))
                .bits;
        },
        py::arg("samples"), py::arg("target_cov"), py::arg("noise_cov"),
        "Log-det mutual information in bits of a waveform against target and noise "
        "covariances.");
    m.def(
        "optimal_waveform",
        [](const farray& target_cov, const farray& noise_cov, double total_power) {
            auto [waveform, alloc] =
                optimal_waveform(HermitianMatrix(to_matrix(target_cov)),
                                 HermitianMatrix(to_matrix(noise_cov)), total_power);
            return py::make_tuple(from_matrix(waveform.samples), allocation_dict(alloc));
        },
        py::arg("target_cov"), py::arg("noise_cov"), py::arg("total_power"),
        "MI-optimal waveform (samples matrix, power allocation) for a power budget.");
    m.def(
        "fiedler_bounds",
        [](std::vector<double> alpha, std::vector<double> beta) {
            return fiedler_bounds(to_spectrum(std::move(alpha)), to_spectrum(std::move(beta)));
        },
        py::arg("alpha"), py::arg("beta"),
        "(lower, upper) range of det(A+B) over relative eigenbasis rotations.");

    // --- channel model ------------------------------------------------------
    m.def(
        "decorrelation_report",
        [](const std::vector<std::array<double, 2>>& tx,
           const std::vector<std::array<double, 2>>& rx,
           const std::array<double, 2>& target_center, double dim_x, double dim_y,
           double frequency_hz, std::pair<std::size_t, std::size_t> tx_pair,
           std::pair<std::size_t, std::size_t> rx_pair) {
            const DecorrelationReport report = decorrelation_report(
                make_geometry(tx, rx, target_center, dim_x, dim_y, frequency_hz), tx_pair,
                rx_pair);
            py::list conditions;
            for (const DecorrelationCondition& c : report.conditions) {
                py::dict d;
                d["name"] = c.name;
                d["lhs"] = c.lhs;
                d["threshold"] = c.threshold;
                d["met"] = c.met;
                conditions.append(d);
            }
            py::dict d;
            d["conditions"] = conditions;
            d["uncorrelated"] = report.uncorrelated;
            return d;
        },
        py::arg("tx"), py::arg("rx"), py::arg("target_center"), py::arg("dim_x"),
        py::arg("dim_y"), py::arg("frequency_hz"),
        py::arg("tx_pair") = std::pair<std::size_t, std::size_t>{1, 2},
        py::arg("rx_pair") = std::pair<std::size_t, std::size_t>{1, 2},
        "The four aperture decorrelation conditions for one antenna-pair choice.");
    m.def(
        "target_covariance",
        [](const std::vector<std::array<double, 2>>& tx,
           const std::vector<std::array<double, 2>>& rx,
           const std::array<double, 2>& target_center, double dim_x, double dim_y,
           double frequency_hz, std::size_t scatterer_count, std::uint64_t seed) {
            const RadarGeometry g =
                make_geometry(tx, rx, target_center, dim_x, dim_y, frequency_hz);
            const ScattererSet scene = synthesize_scatterers(g, scatterer_count, seed);
            return from_matrix(target_covariance(path_matrices(g, scene)).matrix());
        },
        py::arg("tx"), py::arg("rx"), py::arg("target_center"), py::arg("dim_x"),
        py::arg("dim_y"), py::arg("frequency_hz"), py::arg("scatterer_count") = 1000,
        py::arg("seed") = 1,
        "Analytic stacked channel covariance for a random scatterer scene.");
    m.def(
        "monte_carlo_target_covariance",
        [](const std::vector<std::array<double, 2>>& tx,
           const std::vector<std::array<double, 2>>& rx,
           const std::array<double, 2>& target_center, double dim_x, double dim_y,
           double frequency_hz, std::size_t scatterer_count, std::uint64_t seed,
           std::size_t draws, std::uint64_t draw_seed) {
            const RadarGeometry g =
                make_geometry(tx, rx, target_center, dim_x, dim_y, frequency_hz);
            const ScattererSet scene = synthesize_scatterers(g, scatterer_count, seed);
            return from_matrix(
                monte_carlo_target_covariance(path_matrices(g, scene), draws, draw_seed)
                    .matrix());
        },
        py::arg("tx"), py::arg("rx"), py::arg("target_center"), py::arg("dim_x"),
        py::arg("dim_y"), py::arg("frequency_hz"), py::arg("scatterer_count") = 1000,
        py::arg("seed") = 1, py::arg("draws") = 10000, py::arg("draw_seed") = 7,
        "Monte Carlo estimate of the stacked channel covariance.");

    // --- experiment sweeps ----------------------------------------------
    m.def(
        "sweep_correlation_csv",
        [](const std::string& scenario_json) {
            const CorrelationSweepConfig cfg =
                parse_correlation_config(parse_scenario(scenario_json));
            return sweep_correlation(cfg).to_csv();
        },
        py::arg("scenario_json"), py::call_guard<py::gil_scoped_release>(),
        "Run the spectrum-blend MI sweep described by a scenario JSON string; returns CSV.");
    m.def(
        "sweep_frequency_csv",
        [](const std::string& scenario_json) {
            const FrequencySweepConfig cfg =
                parse_frequency_config(parse_scenario(scenario_json));
            return sweep_snr_frequency(cfg).to_csv();
        },
        py::arg("scenario_json"), py::call_guard<py::gil_scoped_release>(),
        "Run the two-carrier SNR sweep described by a scenario JSON string; returns CSV.");
}
