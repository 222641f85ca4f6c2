#include "radarmi/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "radarmi/rng.hpp"

namespace radarmi {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double distance(Point2 a, Point2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// exp(-j 2 pi d / lambda): propagation phase over one leg of length d.
cdouble leg_phase(double d, double wavelength) {
    const double angle = -2.0 * std::numbers::pi * d / wavelength;
    return {std::cos(angle), std::sin(angle)};
}

std::vector<cdouble> draw_reflectivities(std::size_t count, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(count));
    std::vector<cdouble> alpha(count);
    for (cdouble& a : alpha) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        a = cdouble(re * scale, im * scale);
    }
    return alpha;
}

} // namespace

void RadarGeometry::validate() const {
    require(!tx_positions.empty(), "geometry needs at least one transmit antenna");
    require(!rx_positions.empty(), "geometry needs at least one receive antenna");
    require(dim_x > 0.0 && dim_y > 0.0, "patch dimensions must be positive");
    require(std::isfinite(dim_x) && std::isfinite(dim_y), "patch dimensions must be finite");
    require(carrier_frequency_hz > 0.0 && std::isfinite(carrier_frequency_hz),
            "carrier frequency must be positive");
    for (const Point2& p : tx_positions)
        require(std::isfinite(p.x) && std::isfinite(p.y), "antenna positions must be finite");
    for (const Point2& p : rx_positions)
        require(std::isfinite(p.x) && std::isfinite(p.y), "antenna positions must be finite");
    require(std::isfinite(target_center.x) && std::isfinite(target_center.y),
            "target center must be finite");
}

ScattererSet synthesize_scatterers(const RadarGeometry& geometry, std::size_t count,
                                   std::uint64_t seed) {
    geometry.validate();
    require(count > 0, "scatterer count must be positive");

    std::mt19937_64 rng = make_rng(seed);
    std::uniform_real_distribution<double> ux(geometry.target_center.x - 0.5 * geometry.dim_x,
                                              geometry.target_center.x + 0.5 * geometry.dim_x);
    std::uniform_real_distribution<double> uy(geometry.target_center.y - 0.5 * geometry.dim_y,
                                              geometry.target_center.y + 0.5 * geometry.dim_y);
    ScattererSet set;
    set.positions.resize(count);
    for (Point2& p : set.positions) {
        p.x = ux(rng);
        p.y = uy(rng);
    }
    set.reflectivities = draw_reflectivities(count, rng);
    return set;
}

std::vector<cdouble> redraw_reflectivities(std::size_t count, std::uint64_t seed) {
    require(count > 0, "scatterer count must be positive");
    std::mt19937_64 rng = make_rng(seed);
    return draw_reflectivities(count, rng);
}

PathMatrices path_matrices(const RadarGeometry& geometry, const ScattererSet& scatterers) {
    geometry.validate();
    const std::size_t q_count = scatterers.count();
    require(q_count > 0, "scatterer set is empty");
    require(scatterers.reflectivities.size() == q_count,
            "scatterer positions and reflectivities must have equal length");

    const double lambda = geometry.wavelength();
    PathMatrices paths;
    paths.tx_paths = ComplexMatrix(q_count, geometry.tx_count());
    paths.rx_paths = ComplexMatrix(geometry.rx_count(), q_count);
    for (std::size_t q = 0; q < q_count; ++q) {
        for (std::size_t m = 0; m < geometry.tx_count(); ++m)
            paths.tx_paths(q, m) =
                leg_phase(distance(geometry.tx_positions[m], scatterers.positions[q]), lambda);
        for (std::size_t n = 0; n < geometry.rx_count(); ++n)
            paths.rx_paths(n, q) =
                leg_phase(distance(scatterers.positions[q], geometry.rx_positions[n]), lambda);
    }
    paths.reflectivities = scatterers.reflectivities;
    return paths;
}

ComplexMatrix channel_matrix(const PathMatrices& paths) {
    const std::size_t q_count = paths.tx_paths.rows();
    const std::size_t m_count = paths.tx_paths.cols();
    const std::size_t n_count = paths.rx_paths.rows();
    require(paths.rx_paths.cols() == q_count, "path matrices disagree on scatterer count");
    require(paths.reflectivities.size() == q_count,
            "reflectivity count must match scatterer count");

    ComplexMatrix gains(m_count, n_count);
    for (std::size_t q = 0; q < q_count; ++q) {
        const cdouble alpha = paths.reflectivities[q];
        for (std::size_t n = 0; n < n_count; ++n) {
            const cdouble rx = alpha * paths.rx_paths(n, q);
            for (std::size_t m = 0; m < m_count; ++m)
                gains(m, n) += paths.tx_paths(q, m) * rx;
        }
    }
    return gains;
}

namespace {

/// Per-scatterer stacked phase signature: entry n*M + m is tx_paths(q, m) *
/// rx_paths(n, q), the deterministic part of the stacked channel vector.
std::vector<cdouble> path_signature(const PathMatrices& paths, std::size_t q) {
    const std::size_t m_count = paths.tx_paths.cols();
    const std::size_t n_count = paths.rx_paths.rows();
    std::vector<cdouble> sig(m_count * n_count);
    for (std::size_t n = 0; n < n_count; ++n)
        for (std::size_t m = 0; m < m_count; ++m)
            sig[n * m_count + m] = paths.tx_paths(q, m) * paths.rx_paths(n, q);
    return sig;
}

} // namespace

HermitianMatrix target_covariance(const PathMatrices& paths) {
    const std::size_t q_count = paths.tx_paths.rows();
    require(q_count > 0, "path matrices are empty");
    require(paths.rx_paths.cols() == q_count, "path matrices disagree on scatterer count");
    const std::size_t dim = paths.tx_paths.cols() * paths.rx_paths.rows();

    ComplexMatrix cov(dim, dim);
    for (std::size_t q = 0; q < q_count; ++q) {
        const std::vector<cdouble> sig = path_signature(paths, q);
        for (std::size_t j = 0; j < dim; ++j) {
            const cdouble sj = std::conj(sig[j]);
            for (std::size_t i = 0; i < dim; ++i) cov(i, j) += sig[i] * sj;
        }
    }
    const cdouble scale = 1.0 / static_cast<double>(q_count);
    return HermitianMatrix(scale * cov);
}

HermitianMatrix monte_carlo_target_covariance(const PathMatrices& paths, std::size_t draws,
                                              std::uint64_t seed) {
    const std::size_t q_count = paths.tx_paths.rows();
    require(q_count > 0, "path matrices are empty");
    require(paths.rx_paths.cols() == q_count, "path matrices disagree on scatterer count");
    require(draws > 0, "Monte Carlo needs at least one draw");
    const std::size_t dim = paths.tx_paths.cols() * paths.rx_paths.rows();

    std::vector<std::vector<cdouble>> signatures(q_count);
    for (std::size_t q = 0; q < q_count; ++q) signatures[q] = path_signature(paths, q);

    ComplexMatrix acc(dim, dim);
    std::vector<cdouble> stacked(dim);
    for (std::size_t d = 0; d < draws; ++d) {
        const std::vector<cdouble> alpha =
            redraw_reflectivities(q_count, derive_seed(seed, d));
        std::fill(stacked.begin(), stacked.end(), cdouble{});
        for (std::size_t q = 0; q < q_count; ++q) {
            const cdouble a = alpha[q];
            const std::vector<cdouble>& sig = signatures[q];
            for (std::size_t k = 0; k < dim; ++k) stacked[k] += a * sig[k];
        }
        for (std::size_t j = 0; j < dim; ++j) {
            const cdouble sj = std::conj(stacked[j]);
            for (std::size_t i = 0; i < dim; ++i) acc(i, j) += stacked[i] * sj;
        }
    }
    const cdouble scale = 1.0 / static_cast<double>(draws);
    return HermitianMatrix(scale * acc);
}

DecorrelationReport decorrelation_report(const RadarGeometry& geometry,
                                         std::pair<std::size_t, std::size_t> tx_pair,
                                         std::pair<std::size_t, std::size_t> rx_pair) {
    geometry.validate();
    auto pick = [](const std::vector<Point2>& arr, std::size_t index_1based, const char* what) {
        if (index_1based < 1 || index_1based > arr.size())
            throw std::invalid_argument(std::string(what) + " antenna index out of range");
        return arr[index_1based - 1];
    };
    const Point2 t1 = pick(geometry.tx_positions, tx_pair.first, "transmit");
    const Point2 t2 = pick(geometry.tx_positions, tx_pair.second, "transmit");
    const Point2 r1 = pick(geometry.rx_positions, rx_pair.first, "receive");
    const Point2 r2 = pick(geometry.rx_positions, rx_pair.second, "receive");

    const double lambda = geometry.wavelength();
    const Point2 center = geometry.target_center;
    // Direction-cosine spread between two antennas, one coordinate at a time:
    // each term is the antenna coordinate over its distance to the patch
    // center; the pair decorrelates in that axis when the spread exceeds
    // wavelength / patch extent.
    auto spread = [&](Point2 a, Point2 b, bool use_x) {
        const double da = distance(a, center);
        const double db = distance(b, center);
        if (da == 0.0 || db == 0.0)
            throw std::invalid_argument("antenna coincides with the target center");
        const double ca = (use_x ? a.x : a.y) / da;
        const double cb = (use_x ? b.x : b.y) / db;
        return std::abs(ca - cb);
    };

    DecorrelationReport report;
    report.conditions[0] = {"tx-x", spread(t1, t2, true), lambda / geometry.dim_x, false};
    report.conditions[1] = {"tx-y", spread(t1, t2, false), lambda / geometry.dim_y, false};
    report.conditions[2] = {"rx-x", spread(r1, r2, true), lambda / geometry.dim_x, false};
    report.conditions[3] = {"rx-y", spread(r1, r2, false), lambda / geometry.dim_y, false};
    for (DecorrelationCondition& c : report.conditions) {
        c.met = c.lhs > c.threshold;
        report.uncorrelated = report.uncorrelated || c.met;
    }
    return report;
}

} // namespace radarmi
