#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "linksim/metrics.hpp"
#include "linksim/pn_codes.hpp"
#include "linksim/sweep.hpp"
#include "linksim/theory.hpp"

using namespace linksim;

namespace {

pn::ChipSequence mseq7() {
    auto poly = pn::GeneratorPolynomial::parse("x^3+x+1");
    return pn::to_bipolar(pn::generate_msequence(poly, {1, 0, 0}, 7));
}

}  // namespace

TEST_CASE("error counting", "[metrics]") {
    CHECK(metrics::count_errors({0, 1, 1, 0}, {0, 1, 1, 0}) ==
          std::pair<std::size_t, std::size_t>{4, 0});
    CHECK(metrics::count_errors({0, 1, 1, 0}, {1, 0, 0, 1}) ==
          std::pair<std::size_t, std::size_t>{4, 4});
    CHECK(metrics::count_errors({0, 1, 1, 0}, {0, 0, 1, 0}) ==
          std::pair<std::size_t, std::size_t>{4, 1});
    CHECK_THROWS_AS(metrics::count_errors({0, 1}, {0}), std::invalid_argument);
}

TEST_CASE("wilson interval", "[metrics]") {
    auto zero = metrics::confidence_interval(0, 100);
    CHECK(zero.first == 0.0);
    CHECK(zero.second > 0.0);

    auto half = metrics::confidence_interval(50, 100);
    CHECK(half.first + half.second == Catch::Approx(1.0).margin(1e-9));
    CHECK(half.second - half.first == Catch::Approx(0.19).margin(0.005));

    // the 0 dB reference point: the interval covers the closed-form rate
    auto table = metrics::confidence_interval(15615, 200000);
    const double p = theory::q_function(std::sqrt(2.0));
    CHECK(table.first < p);
    CHECK(table.second > p);

    CHECK_THROWS_AS(metrics::confidence_interval(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(metrics::confidence_interval(5, 4), std::invalid_argument);
    CHECK_THROWS_AS(metrics::confidence_interval(5, 10, 1.5), std::invalid_argument);
}

TEST_CASE("wilson coverage over synthetic Bernoulli experiments", "[metrics][slow]") {
    std::mt19937_64 rng(1001);
    int covered = 0;
    const int experiments = 200;
    for (int e = 0; e < experiments; ++e) {
        const double p = 0.01 + 0.4 * (e % 20) / 20.0;
        const std::size_t n = 500;
        std::binomial_distribution<std::size_t> bin(n, p);
        const std::size_t errors = bin(rng);
        auto [lo, hi] = metrics::confidence_interval(errors, n);
        if (lo <= p && p <= hi) ++covered;
    }
    CHECK(covered >= experiments * 90 / 100);
}

TEST_CASE("run_point is reproducible and respects stopping rules", "[metrics]") {
    metrics::PointConfig pc;
    pc.code = mseq7();
    metrics::StoppingRule rule{100, 100000};

    auto a = metrics::run_point(pc, 2.0, rule, 77);
    auto b = metrics::run_point(pc, 2.0, rule, 77);
    CHECK(a.bits_sent == b.bits_sent);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.ber == b.ber);
    CHECK(a.symbol_errors == b.symbol_errors);
    CHECK(a.seed == 77);
    CHECK(a.bit_errors >= 100);

    auto c = metrics::run_point(pc, 2.0, rule, 78);
    CHECK(a.bit_errors != c.bit_errors);

    // exact bit budget: max_bits divisible by the frame size
    metrics::StoppingRule budget{1000000000, 20000};
    auto d = metrics::run_point(pc, 0.0, budget, 5);
    CHECK(d.bits_sent == 20000);
    CHECK(d.ber == Catch::Approx(static_cast<double>(d.bit_errors) / 20000.0));
    CHECK(d.ci_low <= d.ber);
    CHECK(d.ci_high >= d.ber);
}

TEST_CASE("noiseless run reports zero errors below resolution", "[metrics]") {
    metrics::PointConfig pc;
    pc.code = mseq7();
    metrics::StoppingRule rule{100, 10000};
    auto rec = metrics::run_point(pc, 200.0, rule, 1);  // sigma ~ 1e-10: no errors
    CHECK(rec.bit_errors == 0);
    CHECK(rec.ber == 0.0);
    CHECK(rec.below_resolution);
    CHECK(rec.bits_sent == 10000);
}

TEST_CASE("per-point seeds are stable and spread", "[metrics]") {
    const auto s1 = harness::derive_point_seed(42, 0.0, 0);
    const auto s2 = harness::derive_point_seed(42, 0.0, 0);
    CHECK(s1 == s2);
    CHECK(harness::derive_point_seed(42, 0.0, 1) != s1);
    CHECK(harness::derive_point_seed(42, 1.0, 0) != s1);
    CHECK(harness::derive_point_seed(43, 0.0, 0) != s1);
}
