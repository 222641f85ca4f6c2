#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "radarmi/majorize.hpp"

using namespace radarmi;

TEST_CASE("spectrum constructor enforces the canonical form") {
    CHECK_THROWS_AS(Spectrum(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(Spectrum({1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(Spectrum({1.0, -0.5}), std::invalid_argument);
    const Spectrum s({4.0, 2.0, 2.0, 0.0});
    CHECK(s.sum() == doctest::Approx(8.0));
    CHECK(s[1] == 2.0);
}

TEST_CASE("from_eigenvalues sorts and clamps round-off") {
    const Spectrum s = Spectrum::from_eigenvalues({1.0, 3.0, -1e-14, 2.0});
    CHECK(s.values() == std::vector<double>{3.0, 2.0, 1.0, 0.0});
    CHECK_THROWS_AS(Spectrum::from_eigenvalues({1.0, -0.1}), std::invalid_argument);
}

TEST_CASE("majorization basics") {
    const Spectrum peak({1.0, 0.0, 0.0, 0.0});
    const Spectrum flat({0.25, 0.25, 0.25, 0.25});
    CHECK(majorizes(peak, flat));
    CHECK_FALSE(majorizes(flat, peak));
    CHECK(majorizes(peak, peak));
    CHECK_FALSE(majorizes(Spectrum({2.0, 0.0}), Spectrum({0.5, 0.5}))); // sum mismatch
    CHECK_THROWS_AS(majorizes(peak, Spectrum({1.0})), std::invalid_argument);
}

TEST_CASE("comparable pairs are ordered by construction and transitively") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dim = 2 + trial % 7;
        const double trace = 0.5 + (trial % 11);
        const auto [a, b] = comparable_pair(dim, trace, rng);
        CHECK(a.size() == dim);
        CHECK(std::abs(a.sum() - trace) < 1e-12 * std::max(1.0, trace));
        CHECK(std::abs(b.sum() - trace) < 1e-12 * std::max(1.0, trace));
        CHECK(majorizes(a, b, 1e-12));
    }

    // chains: a >= b and a "Robin Hooded" twice stays dominated
    for (int trial = 0; trial < 200; ++trial) {
        std::mt19937_64 chain_rng(5000 + trial);
        const auto [a, b] = comparable_pair(4, 4.0, chain_rng);
        // run another walk starting from b by reusing the generator on b's values
        std::vector<double> c_vals = b.values();
        std::uniform_real_distribution<double> fraction(0.0, 0.5);
        const double delta = fraction(chain_rng) * (c_vals[0] - c_vals[3]);
        c_vals[0] -= delta;
        c_vals[3] += delta;
        std::sort(c_vals.begin(), c_vals.end(), std::greater<double>());
        const Spectrum c(std::move(c_vals));
        CHECK(majorizes(b, c, 1e-12));
        CHECK(majorizes(a, c, 1e-12)); // transitivity
    }
}

TEST_CASE("more_correlated distinguishes the four outcomes") {
    const Spectrum peak({1.0, 0.0, 0.0, 0.0});
    const Spectrum flat({0.25, 0.25, 0.25, 0.25});
    CHECK(more_correlated(peak, flat) == CorrelationOrder::first);
    CHECK(more_correlated(flat, peak) == CorrelationOrder::second);
    CHECK(more_correlated(flat, flat) == CorrelationOrder::equal);
    // prefix curves cross: {0.6, 0.8, 1.0} vs {0.5, 1.0, 1.0}
    const Spectrum x({0.6, 0.2, 0.2, 0.0});
    const Spectrum y({0.5, 0.5, 0.0, 0.0});
    CHECK(more_correlated(x, y) == CorrelationOrder::incomparable);
    CHECK_THROWS_AS(more_correlated(peak, Spectrum({2.0, 0.0, 0.0, 0.0})),
                    std::invalid_argument);
    CHECK(to_string(CorrelationOrder::first) == "first");
}

namespace {

double spread_top(std::span<const double> v) { return v[0]; } // Schur-convex

} // namespace

TEST_CASE("schur_scan classifies known objectives") {
    const auto convex = schur_scan(spread_top, 4, 4.0, 300, 42);
    CHECK(convex.classification == SchurClass::convex_consistent);
    CHECK_FALSE(convex.convexity_violation.has_value());
    CHECK(convex.trials == 300);

    const auto concave = schur_scan([](std::span<const double> v) { return -v[0]; }, 4, 4.0,
                                    300, 42);
    CHECK(concave.classification == SchurClass::concave_consistent);
    CHECK(concave.convexity_violation.has_value());
    const SchurWitness& w = *concave.convexity_violation;
    CHECK(majorizes(Spectrum(w.dominant), Spectrum(w.dominated), 1e-9));
    CHECK(w.f_dominant < w.f_dominated);

    // rises until the top entry reaches 0.7 of the trace, then falls:
    // violated in both directions over dimension-2 pairs
    const auto neither = schur_scan(
        [](std::span<const double> v) {
            return v[0] < 0.7 ? v[0] : 1.4 - v[0];
        },
        2, 1.0, 500, 7);
    CHECK(neither.classification == SchurClass::neither);
    CHECK(neither.convexity_violation.has_value());
    CHECK(neither.concavity_violation.has_value());

    CHECK_THROWS_AS(schur_scan([](std::span<const double>) {
                        return std::numeric_limits<double>::quiet_NaN();
                    },
                                3, 1.0, 10, 1),
                    numerical_error);
}

TEST_CASE("schur_threshold reproduces the known six-entry table") {
    const Spectrum sigma_h({5.0, 2.0, 1.0, 0.5});
    const Spectrum sigma_w({8.0, 4.0, 3.0, 2.0});
    const ThresholdReport report = schur_threshold(sigma_h, sigma_w);
    REQUIRE(report.entries.size() == 6);
    CHECK(report.defined_count == 6);

    auto ratio_of = [&](std::size_t i, std::size_t j) {
        for (const ThresholdEntry& e : report.entries)
            if (e.i == i && e.j == j) {
                REQUIRE(e.defined);
                return e.ratio;
            }
        FAIL("missing entry");
        return 0.0;
    };
    CHECK(std::abs(ratio_of(1, 2) - 3.0) <= 1e-12);
    CHECK(std::abs(ratio_of(1, 3) - 2.0) <= 1e-12);
    CHECK(std::abs(ratio_of(1, 4) - 0.75) <= 1e-12);
    CHECK(std::abs(ratio_of(2, 3) - 1.0) <= 1e-12);
    CHECK(std::abs(ratio_of(2, 4) - 0.3) <= 1e-12);
    CHECK(std::abs(ratio_of(3, 4) - 0.125) <= 1e-12);
    CHECK(std::abs(report.max_ratio - 3.0) <= 1e-12);
    CHECK(report.bounded);
    CHECK(std::abs(report.p_upper() - 1.0 / 3.0) <= 1e-12);
}

TEST_CASE("schur_threshold handles degenerate inputs") {
    const ThresholdReport flat =
        schur_threshold(Spectrum({1.0, 1.0, 1.0}), Spectrum({3.0, 2.0, 1.0}));
    for (const ThresholdEntry& e : flat.entries) {
        CHECK(e.defined);
        CHECK(e.ratio == 0.0);
    }
    CHECK_FALSE(flat.bounded);
    CHECK(std::isinf(flat.p_upper()));

    const ThresholdReport repeated =
        schur_threshold(Spectrum({3.0, 2.0, 1.0}), Spectrum({2.0, 2.0, 1.0}));
    std::size_t undefined = 0;
    for (const ThresholdEntry& e : repeated.entries)
        if (!e.defined) ++undefined;
    CHECK(undefined == 1); // the noise pair (2,2) collapses one denominator
    CHECK(repeated.defined_count == 2);

    CHECK_THROWS_AS(schur_threshold(Spectrum({1.0}), Spectrum({1.0})), std::invalid_argument);
    CHECK_THROWS_AS(schur_threshold(Spectrum({1.0, 0.5}), Spectrum({1.0})),
                    std::invalid_argument);
}
