#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "radarmi/errors.hpp"

namespace radarmi {

/// Non-negative values sorted descending; the canonical form of a PSD
/// eigenvalue list.
class Spectrum {
public:
    /// Values must already be descending, non-negative, and finite.
    explicit Spectrum(std::vector<double> values);

    /// Sorts descending and clamps tiny negative round-off (anything below
    /// -1e-10 relative to the largest magnitude is rejected).
    static Spectrum from_eigenvalues(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    double sum() const;

private:
    struct unchecked_tag {};
    Spectrum(std::vector<double> values, unchecked_tag) : values_(std::move(values)) {}
    std::vector<double> values_;
};

/// x majorizes y: equal sums (within tol) and every partial sum of x
/// dominates the matching partial sum of y.
bool majorizes(const Spectrum& x, const Spectrum& y, double tol = 1e-9);

enum class CorrelationOrder { first, second, equal, incomparable };

/// Orders two equal-trace spectra by majorization: `first`/`second` names the
/// strictly more correlated one, `equal` means elementwise equal (or mutual
/// majorization), `incomparable` means the partial-sum curves cross.
CorrelationOrder more_correlated(const Spectrum& a, const Spectrum& b, double tol = 1e-9);

/// One side of a counterexample found by schur_scan.
struct SchurWitness {
    std::vector<double> dominant;  // spectrum that majorizes
    std::vector<double> dominated; // spectrum it majorizes
    double f_dominant = 0.0;
    double f_dominated = 0.0;
};

enum class SchurClass { convex_consistent, concave_consistent, neither };

struct SchurVerdict {
    SchurClass classification = SchurClass::neither;
    std::size_t trials = 0;
    /// Pair with f(dominant) < f(dominated) - tol, if one was seen.
    std::optional<SchurWitness> convexity_violation;
    /// Pair with f(dominant) > f(dominated) + tol, if one was seen.
    std::optional<SchurWitness> concavity_violation;
};

/// Draws a majorization-comparable pair: the first spectrum is random with
/// the requested trace, the second is derived from it by 1..10 Robin Hood
/// transfers, so the first majorizes the second by construction.
std::pair<Spectrum, Spectrum> comparable_pair(std::size_t dimension, double trace,
                                              std::mt19937_64& rng);

/// Samples `trials` comparable pairs and tests f for order violations in
/// each direction. A function consistent with Schur-convexity on every pair
/// is classified convex_consistent; failing that, concave_consistent; failing
/// both, neither (with witnesses for both directions). Non-finite f values
/// throw numerical_error naming the offending input.
SchurVerdict schur_scan(const std::function<double(std::span<const double>)>& f,
                        std::size_t dimension, double trace, std::size_t trials,
                        std::uint64_t seed, double tol = 1e-12);

/// One (i, j) difference-ratio entry of the convexity-threshold table.
struct ThresholdEntry {
    std::size_t i = 0; // 1-based, i < j
    std::size_t j = 0;
    bool defined = false; // false when the noise-difference denominator is 0
    double ratio = 0.0;
};

/// Threshold analysis for the scaled-identity-noise family: the power scale p
/// keeps the mutual-information objective Schur-convex in the target spectrum
/// exactly on p in (0, 1/max_ratio].
struct ThresholdReport {
    std::vector<ThresholdEntry> entries;
    std::size_t defined_count = 0;
    double max_ratio = 0.0;
    bool bounded = false; // true iff some defined entry has a positive ratio

    /// Upper end of the Schur-convex power region; +inf when unbounded.
    double p_upper() const;
};

/// Tabulates (sigma_h_i - sigma_h_j) / (sigma_w_rev_i - sigma_w_rev_j) over
/// all i < j, where sigma_w_rev pairs the k-th largest target eigenvalue with
/// the k-th smallest noise eigenvalue. Sizes must match.
ThresholdReport schur_threshold(const Spectrum& sigma_h, const Spectrum& sigma_w);

std::string to_string(CorrelationOrder order);
std::string to_string(SchurClass cls);

} // namespace radarmi
