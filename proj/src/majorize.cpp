#include "radarmi/majorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace radarmi {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string format_values(std::span<const double> v) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << "]";
    return os.str();
}

} // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
    require(!values_.empty(), "spectrum must be non-empty");
    for (double v : values_)
        require(std::isfinite(v), "spectrum entries must be finite");
    for (std::size_t i = 0; i + 1 < values_.size(); ++i)
        require(values_[i] >= values_[i + 1], "spectrum must be sorted descending");
    require(values_.back() >= 0.0, "spectrum entries must be non-negative");
}

Spectrum Spectrum::from_eigenvalues(std::vector<double> values) {
    require(!values.empty(), "spectrum must be non-empty");
    double top = 0.0;
    for (double v : values) {
        require(std::isfinite(v), "spectrum entries must be finite");
        top = std::max(top, std::abs(v));
    }
    const double floor = -1e-10 * std::max(top, 1.0);
    for (double& v : values) {
        if (v < floor)
            throw std::invalid_argument("eigenvalue " + std::to_string(v) +
                                        " is too negative for a PSD spectrum");
        if (v < 0.0) v = 0.0;
    }
    std::sort(values.begin(), values.end(), std::greater<double>());
    return Spectrum(std::move(values), unchecked_tag{});
}

double Spectrum::sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
}

bool majorizes(const Spectrum& x, const Spectrum& y, double tol) {
    require(x.size() == y.size(), "majorization requires equal lengths");
    require(tol >= 0.0, "tolerance must be non-negative");
    double px = 0.0, py = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        px += x[k];
        py += y[k];
        if (k + 1 < x.size()) {
            if (px < py - tol) return false;
        } else {
            if (std::abs(px - py) > tol) return false; // total sums must agree
        }
    }
    return true;
}

CorrelationOrder more_correlated(const Spectrum& a, const Spectrum& b, double tol) {
    require(a.size() == b.size(), "correlation ordering requires equal lengths");
    if (std::abs(a.sum() - b.sum()) > tol)
        throw std::invalid_argument("correlation ordering requires equal traces");
    const bool ab = majorizes(a, b, tol);
    const bool ba = majorizes(b, a, tol);
    if (ab && ba) return CorrelationOrder::equal;
    if (ab) return CorrelationOrder::first;
    if (ba) return CorrelationOrder::second;
    return CorrelationOrder::incomparable;
}

std::pair<Spectrum, Spectrum> comparable_pair(std::size_t dimension, double trace,
                                              std::mt19937_64& rng) {
    require(dimension >= 2, "comparable pairs need dimension >= 2");
    require(trace > 0.0 && std::isfinite(trace), "trace must be positive and finite");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> a(dimension);
    double s = 0.0;
    for (double& v : a) {
        v = unit(rng);
        s += v;
    }
    while (s <= 0.0) { // essentially impossible, but keep the scale sane
        s = 0.0;
        for (double& v : a) {
            v = unit(rng);
            s += v;
        }
    }
    for (double& v : a) v *= trace / s;
    std::sort(a.begin(), a.end(), std::greater<double>());

    // Robin Hood transfers: each moves mass from a larger entry to a smaller
    // one without swapping their order, which walks strictly down the
    // majorization order.
    std::vector<double> b = a;
    std::uniform_int_distribution<std::size_t> count_dist(1, 10);
    std::uniform_int_distribution<std::size_t> index_dist(0, dimension - 1);
    std::uniform_real_distribution<double> fraction(0.0, 0.5);
    const std::size_t transfers = count_dist(rng);
    for (std::size_t t = 0; t < transfers; ++t) {
        std::size_t i = index_dist(rng);
        std::size_t j = index_dist(rng);
        if (i == j) continue;
        if (b[i] < b[j]) std::swap(i, j);
        const double delta = fraction(rng) * (b[i] - b[j]);
        b[i] -= delta;
        b[j] += delta;
        std::sort(b.begin(), b.end(), std::greater<double>());
    }
    return {Spectrum(std::move(a)), Spectrum(std::move(b))};
}

SchurVerdict schur_scan(const std::function<double(std::span<const double>)>& f,
                        std::size_t dimension, double trace, std::size_t trials,
                        std::uint64_t seed, double tol) {
    require(static_cast<bool>(f), "schur_scan needs a callable");
    require(trials > 0, "schur_scan needs at least one trial");
    require(tol >= 0.0, "tolerance must be non-negative");

    std::mt19937_64 rng(seed);
    SchurVerdict verdict;
    verdict.trials = trials;

    auto evaluate = [&](const Spectrum& s) {
        const double value = f(std::span<const double>(s.values()));
        if (!std::isfinite(value))
            throw numerical_error("schur_scan: objective returned a non-finite value on " +
                                  format_values(s.values()));
        return value;
    };

    for (std::size_t t = 0; t < trials; ++t) {
        const auto [hi, lo] = comparable_pair(dimension, trace, rng);
        const double f_hi = evaluate(hi);
        const double f_lo = evaluate(lo);
        if (f_hi < f_lo - tol && !verdict.convexity_violation)
            verdict.convexity_violation = SchurWitness{hi.values(), lo.values(), f_hi, f_lo};
        if (f_hi > f_lo + tol && !verdict.concavity_violation)
            verdict.concavity_violation = SchurWitness{hi.values(), lo.values(), f_hi, f_lo};
    }

    if (!verdict.convexity_violation)
        verdict.classification = SchurClass::convex_consistent;
    else if (!verdict.concavity_violation)
        verdict.classification = SchurClass::concave_consistent;
    else
        verdict.classification = SchurClass::neither;
    return verdict;
}

ThresholdReport schur_threshold(const Spectrum& sigma_h, const Spectrum& sigma_w) {
    require(sigma_h.size() == sigma_w.size(), "threshold analysis requires equal lengths");
    const std::size_t n = sigma_h.size();
    require(n >= 2, "threshold analysis needs at least two modes");

    // Mode k rides the k-th smallest noise eigenvalue.
    std::vector<double> noise_rev(n);
    for (std::size_t k = 0; k < n; ++k) noise_rev[k] = sigma_w[n - 1 - k];

    ThresholdReport report;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ThresholdEntry entry;
            entry.i = i + 1;
            entry.j = j + 1;
            const double num = sigma_h[i] - sigma_h[j];
            const double den = noise_rev[j] - noise_rev[i];
            if (den != 0.0) {
                entry.defined = true;
                entry.ratio = num / den;
                ++report.defined_count;
                report.max_ratio = std::max(report.max_ratio, entry.ratio);
            }
            report.entries.push_back(entry);
        }
    }
    report.bounded = report.max_ratio > 0.0;
    return report;
}

double ThresholdReport::p_upper() const {
    return bounded ? 1.0 / max_ratio : std::numeric_limits<double>::infinity();
}

std::string to_string(CorrelationOrder order) {
    switch (order) {
    case CorrelationOrder::first: return "first";
    case CorrelationOrder::second: return "second";
    case CorrelationOrder::equal: return "equal";
    case CorrelationOrder::incomparable: return "incomparable";
    }
    return "incomparable";
}

std::string to_string(SchurClass cls) {
    switch (cls) {
    case SchurClass::convex_consistent: return "convex-consistent";
    case SchurClass::concave_consistent: return "concave-consistent";
    case SchurClass::neither: return "neither";
    }
    return "neither";
}

} // namespace radarmi
