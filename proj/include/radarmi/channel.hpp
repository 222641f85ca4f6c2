#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "radarmi/numlin.hpp"

namespace radarmi {

inline constexpr double speed_of_light = 299792458.0;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Antenna layout, illuminated patch, and carrier for one widely spaced
/// radar configuration. Distances in meters, frequency in Hz.
struct RadarGeometry {
    std::vector<Point2> tx_positions;
    std::vector<Point2> rx_positions;
    Point2 target_center;
    double dim_x = 0.0; // patch extent along x, centered on target_center
    double dim_y = 0.0;
    double carrier_frequency_hz = 0.0;

    std::size_t tx_count() const { return tx_positions.size(); }
    std::size_t rx_count() const { return rx_positions.size(); }
    double wavelength() const { return speed_of_light / carrier_frequency_hz; }

    /// Throws std::invalid_argument on empty arrays or non-positive
    /// dimensions/frequency.
    void validate() const;
};

/// Point scatterers inside the patch with complex Gaussian reflectivities
/// (each entry CN(0, 1/Q) so the total expected reflected power is 1).
struct ScattererSet {
    std::vector<Point2> positions;
    std::vector<cdouble> reflectivities;

    std::size_t count() const { return positions.size(); }
};

/// Uniformly random scatterer positions over the patch plus reflectivity
/// draws, deterministic in (geometry, count, seed).
ScattererSet synthesize_scatterers(const RadarGeometry& geometry, std::size_t count,
                                   std::uint64_t seed);

/// Fresh reflectivity draws for fixed positions (Monte Carlo redraws keep the
/// geometry of the scene and vary only the complex gains).
std::vector<cdouble> redraw_reflectivities(std::size_t count, std::uint64_t seed);

/// Unit-modulus propagation phase factors for every scatterer path:
/// tx_paths(q, m) carries transmitter m -> scatterer q, rx_paths(n, q)
/// carries scatterer q -> receiver n.
struct PathMatrices {
    ComplexMatrix tx_paths; // Q x M
    ComplexMatrix rx_paths; // N x Q
    std::vector<cdouble> reflectivities;
};

PathMatrices path_matrices(const RadarGeometry& geometry, const ScattererSet& scatterers);

/// Narrowband channel: entry (m, n) sums reflectivity-weighted phase products
/// over scatterers for the tx m -> rx n path; shape M x N.
ComplexMatrix channel_matrix(const PathMatrices& paths);

/// Covariance of the stacked channel vector over the reflectivity
/// distribution, computed in closed form from the path phases (MN x MN,
/// trace MN). The stacking puts receiver n's block of M transmitter entries
/// at rows [n*M, (n+1)*M).
HermitianMatrix target_covariance(const PathMatrices& paths);

/// Same covariance estimated by averaging `draws` reflectivity redraws with
/// positions held fixed. Deterministic in (paths, draws, seed) and
/// independent of thread count.
HermitianMatrix monte_carlo_target_covariance(const PathMatrices& paths, std::size_t draws,
                                              std::uint64_t seed);

/// One aperture test: channel entries decorrelate when the direction-cosine
/// spread across the patch exceeds a wavelength-over-aperture threshold.
struct DecorrelationCondition {
    std::string name; // e.g. "tx-x": transmit pair, x extent
    double lhs = 0.0;
    double threshold = 0.0;
    bool met = false; // lhs > threshold
};

struct DecorrelationReport {
    std::array<DecorrelationCondition, 4> conditions;
    bool uncorrelated = false; // any condition met
};

/// Evaluates the four decorrelation conditions for one transmit pair and one
/// receive pair (1-based antenna indices).
DecorrelationReport decorrelation_report(const RadarGeometry& geometry,
                                         std::pair<std::size_t, std::size_t> tx_pair,
                                         std::pair<std::size_t, std::size_t> rx_pair);

} // namespace radarmi
