#pragma once

#include <span>
#include <utility>
#include <vector>

#include "radarmi/majorize.hpp"
#include "radarmi/numlin.hpp"

namespace radarmi {

/// Transmit waveform in stacked form: `samples` multiplies the stacked
/// channel vector, so it has as many columns as target dimensions and at
/// least that many rows. `power` caches tr(S S^H).
struct WaveformMatrix {
    ComplexMatrix samples;
    double power = 0.0;
};

/// Water-filling solution over eigenmodes, in target-eigenvalue order
/// (descending): mode_powers[i] is the power on the i-th largest target
/// eigenvalue.
struct PowerAllocation {
    std::vector<double> mode_powers;
    double water_level = 0.0; // common level active modes fill to
    std::size_t active_count = 0;
};

enum class MIMethod { logdet, spectral };

struct MIResult {
    double bits = 0.0;
    MIMethod method = MIMethod::logdet;
};

/// I(waveform) = log2 det(S R_h S^H + R_w) - log2 det(R_w). The noise
/// covariance must be positive definite.
MIResult mutual_information(const WaveformMatrix& waveform, const HermitianMatrix& target_cov,
                            const HermitianMatrix& noise_cov);

/// Optimal power split for total budget `total_power` over modes with target
/// eigenvalues sigma_h (descending) facing noise eigenvalues sigma_w
/// (descending, same length): mode i sees the noise floor
/// sigma_w[last-i] / sigma_h[i], and active modes fill to a common level.
PowerAllocation waterfill(const Spectrum& sigma_h, const Spectrum& sigma_w, double total_power);

/// MI of a diagonal allocation: sum of log2(1 + p_i * sigma_h_i / w_i) with
/// the same opposed mode pairing as waterfill.
MIResult spectral_mi(std::span<const double> mode_powers, const Spectrum& sigma_h,
                     const Spectrum& sigma_w);

/// MI-optimal waveform for the given covariances and power budget: rotates a
/// water-filled diagonal core so the strongest target mode rides the quietest
/// noise direction. Requires noise dimension >= target dimension.
std::pair<WaveformMatrix, PowerAllocation> optimal_waveform(const HermitianMatrix& target_cov,
                                                            const HermitianMatrix& noise_cov,
                                                            double total_power);

/// The `count` smallest entries of s, still descending.
Spectrum smallest_modes(const Spectrum& s, std::size_t count);

/// Range of det(A + B) over relative rotations of two PSD matrices with
/// spectra alpha and beta: {prod(alpha_i + beta_i), prod(alpha_i +
/// beta_rev_i)} — aligned eigenvector pairing gives the lower end, opposed
/// pairing the upper.
std::pair<double, double> fiedler_bounds(const Spectrum& alpha, const Spectrum& beta);

} // namespace radarmi
