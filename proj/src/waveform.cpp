#include "radarmi/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace radarmi {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

MIResult mutual_information(const WaveformMatrix& waveform, const HermitianMatrix& target_cov,
                            const HermitianMatrix& noise_cov) {
    const ComplexMatrix& s = waveform.samples;
    require(!s.empty(), "waveform is empty");
    require(s.cols() == target_cov.dim(),
            "waveform columns must match the target covariance dimension");
    require(s.rows() == noise_cov.dim(),
            "waveform rows must match the noise covariance dimension");

    const double noise_logdet = [&] {
        try {
            return log_det_psd(noise_cov);
        } catch (const numerical_error&) {
            throw numerical_error("mutual_information: noise covariance is singular");
        }
    }();

    const ComplexMatrix filtered = s * target_cov.matrix() * adjoint(s);
    const HermitianMatrix total(filtered + noise_cov.matrix());
    const double total_logdet = log_det_psd(total);

    double bits = (total_logdet - noise_logdet) / kLn2;
    if (bits < -1e-9)
        throw numerical_error("mutual_information: negative value " + std::to_string(bits));
    if (bits < 0.0) bits = 0.0;
    return {bits, MIMethod::logdet};
}

PowerAllocation waterfill(const Spectrum& sigma_h, const Spectrum& sigma_w, double total_power) {
    require(sigma_h.size() == sigma_w.size(),
            "waterfill needs matching target and noise spectrum lengths");
    require(total_power > 0.0 && std::isfinite(total_power), "total power must be positive");
    const std::size_t count = sigma_h.size();

    // Mode i (descending target order) faces the i-th smallest noise
    // eigenvalue; its floor is noise/target, infinite for dead modes.
    std::vector<double> floors(count);
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < count; ++i) {
        if (sigma_h[i] > 0.0) {
            floors[i] = sigma_w[count - 1 - i] / sigma_h[i];
            usable.push_back(i);
        } else {
            floors[i] = std::numeric_limits<double>::infinity();
        }
    }
    if (usable.empty()) throw std::invalid_argument("waterfill: no usable eigenmode");

    std::stable_sort(usable.begin(), usable.end(),
                     [&](std::size_t a, std::size_t b) { return floors[a] < floors[b]; });

    // Grow the active set in floor order; the first k whose common level
    // stays at or below the next floor satisfies the stationarity conditions.
    double floor_sum = 0.0;
    double level = 0.0;
    std::size_t active = 0;
    for (std::size_t k = 0; k < usable.size(); ++k) {
        floor_sum += floors[usable[k]];
        level = (total_power + floor_sum) / static_cast<double>(k + 1);
        const double next = (k + 1 < usable.size()) ? floors[usable[k + 1]]
                                                    : std::numeric_limits<double>::infinity();
        if (level <= next) {
            active = k + 1;
            break;
        }
    }

    PowerAllocation alloc;
    alloc.mode_powers.assign(count, 0.0);
    alloc.water_level = level;
    alloc.active_count = active;
    for (std::size_t k = 0; k < active; ++k) {
        const std::size_t i = usable[k];
        alloc.mode_powers[i] = level - floors[i]; // > 0 for every chosen mode
    }
    return alloc;
}

MIResult spectral_mi(std::span<const double> mode_powers, const Spectrum& sigma_h,
                     const Spectrum& sigma_w) {
    require(sigma_h.size() == sigma_w.size(),
            "spectral MI needs matching target and noise spectrum lengths");
    require(mode_powers.size() == sigma_h.size(),
            "allocation length must match the spectrum length");
    const std::size_t count = sigma_h.size();

    double bits = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        require(mode_powers[i] >= 0.0 && std::isfinite(mode_powers[i]),
                "mode powers must be non-negative and finite");
        const double signal = mode_powers[i] * sigma_h[i];
        if (signal == 0.0) continue;
        const double noise = sigma_w[count - 1 - i];
        if (noise == 0.0)
            throw numerical_error("spectral_mi: positive signal on a zero noise eigenvalue "
                                  "gives infinite information");
        bits += std::log2(signal / noise + 1.0);
    }
    return {bits, MIMethod::spectral};
}

Spectrum smallest_modes(const Spectrum& s, std::size_t count) {
    require(count >= 1 && count <= s.size(), "smallest_modes: count out of range");
    std::vector<double> tail(s.values().end() - static_cast<std::ptrdiff_t>(count),
                             s.values().end());
    return Spectrum(std::move(tail));
}

std::pair<WaveformMatrix, PowerAllocation> optimal_waveform(const HermitianMatrix& target_cov,
                                                            const HermitianMatrix& noise_cov,
                                                            double total_power) {
    const std::size_t target_dim = target_cov.dim();
    const std::size_t noise_dim = noise_cov.dim();
    require(noise_dim >= target_dim,
            "optimal waveform needs noise dimension >= target dimension");

    const EigDecomposition target_eig = hermitian_eig(target_cov);
    const EigDecomposition noise_eig = hermitian_eig(noise_cov);
    const Spectrum sigma_h = Spectrum::from_eigenvalues(target_eig.eigenvalues);
    const Spectrum sigma_w_full = Spectrum::from_eigenvalues(noise_eig.eigenvalues);
    if (sigma_w_full[noise_dim - 1] <= 0.0)
        throw numerical_error("optimal_waveform: noise covariance is singular");
    const Spectrum sigma_w = smallest_modes(sigma_w_full, target_dim);

    const PowerAllocation alloc = waterfill(sigma_h, sigma_w, total_power);

    // Diagonal-by-placement core: target mode i (largest first) is routed to
    // noise eigenvector column noise_dim-1-i (noise ascending from the
    // bottom), realizing the opposed pairing the allocation assumes.
    ComplexMatrix core(noise_dim, target_dim);
    for (std::size_t i = 0; i < target_dim; ++i)
        core(noise_dim - 1 - i, i) = std::sqrt(alloc.mode_powers[i]);

    WaveformMatrix waveform;
    waveform.samples = noise_eig.eigenvectors * core * adjoint(target_eig.eigenvectors);
    waveform.power = std::accumulate(alloc.mode_powers.begin(), alloc.mode_powers.end(), 0.0);
    return {std::move(waveform), alloc};
}

std::pair<double, double> fiedler_bounds(const Spectrum& alpha, const Spectrum& beta) {
    require(alpha.size() == beta.size(), "determinant bounds need equal spectrum lengths");
    const std::size_t n = alpha.size();
    double lower = 1.0;
    double upper = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        lower *= alpha[i] + beta[i];
        upper *= alpha[i] + beta[n - 1 - i];
    }
    return {lower, upper};
}

} // namespace radarmi
