#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "linksim/correlation.hpp"
#include "linksim/pn_codes.hpp"

using namespace linksim;

namespace {

pn::ChipSequence mseq_chips(const std::string& poly_text) {
    auto poly = pn::GeneratorPolynomial::parse(poly_text);
    std::vector<std::uint8_t> seed(poly.degree(), 0);
    seed[0] = 1;
    const std::size_t period = (std::size_t{1} << poly.degree()) - 1;
    return pn::to_bipolar(pn::generate_msequence(poly, seed, period));
}

pn::ChipSequence random_chips(std::size_t n, std::mt19937_64& rng) {
    pn::ChipSequence c;
    c.period = n;
    for (std::size_t i = 0; i < n; ++i) c.chips.push_back((rng() & 1) ? 1 : -1);
    return c;
}

}  // namespace

TEST_CASE("periodic correlation of the period-7 m-sequence", "[corr]") {
    auto x = mseq_chips("x^3+x+1");
    CHECK(corr::periodic_ccf(x, x, 0) == 7);
    CHECK(corr::periodic_acf(x, 3) == -1);
    for (long lag = 1; lag < 7; ++lag) CHECK(corr::periodic_acf(x, lag) == -1);

    // two distinct shifts at lag 0 equal the ACF at the shift difference
    auto codes = pn::assign_user_codes(x, 3);
    CHECK(corr::periodic_ccf(codes[0], codes[2], 0) == -1);
}

TEST_CASE("period-31 m-sequence has two-valued ACF", "[corr]") {
    auto x = mseq_chips("x^5+x^2+1");
    CHECK(corr::periodic_acf(x, 0) == 31);
    for (long lag = 1; lag < 31; ++lag) CHECK(corr::periodic_acf(x, lag) == -1);
}

TEST_CASE("two-valued ACF holds for every primitive polynomial of degree 3..10",
          "[corr][slow]") {
    for (int n = 3; n <= 10; ++n) {
        const std::uint32_t lead = 1u << n;
        const long period = (1 << n) - 1;
        for (std::uint32_t mid = 0; mid < (1u << (n - 1)); ++mid) {
            pn::GeneratorPolynomial poly(n, lead | (mid << 1) | 1u);
            if (!pn::verify_maximal_period(poly)) continue;
            std::vector<std::uint8_t> seed(n, 0);
            seed[0] = 1;
            auto chips = pn::to_bipolar(
                pn::generate_msequence(poly, seed, static_cast<std::size_t>(period)));
            auto profile = corr::acf_profile(chips);
            REQUIRE(profile.raw[0] == period);
            for (long lag = 1; lag < period; ++lag) REQUIRE(profile.raw[lag] == -1);
        }
    }
}

TEST_CASE("periodic CCF symmetry and lag periodicity", "[corr]") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 32; ++trial) {
        const std::size_t n = 5 + rng() % 28;
        auto x = random_chips(n, rng);
        auto y = random_chips(n, rng);
        const long lag = static_cast<long>(rng() % n);
        CHECK(corr::periodic_ccf(x, y, lag) == corr::periodic_ccf(y, x, -lag));
        CHECK(corr::periodic_ccf(x, y, lag) ==
              corr::periodic_ccf(x, y, lag + static_cast<long>(n)));
    }
}

TEST_CASE("normalized ACF at lag zero is one", "[corr]") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {3u, 8u, 17u}) {
        auto x = random_chips(n, rng);
        auto profile = corr::acf_profile(x);
        CHECK(profile.normalized(0) == 1.0);
    }
}

TEST_CASE("mismatched periods are rejected", "[corr]") {
    std::mt19937_64 rng(3);
    auto x = random_chips(7, rng);
    auto y = random_chips(9, rng);
    CHECK_THROWS_AS(corr::periodic_ccf(x, y, 0), std::invalid_argument);
}

TEST_CASE("aperiodic correlation uses the overlap window only", "[corr]") {
    auto x = mseq_chips("x^3+x+1");  // chips -1,+1,+1,-1,+1,-1,-1
    CHECK(corr::aperiodic_ccf(x, x, 0) == 7);
    CHECK(corr::aperiodic_ccf(x, x, 7) == 0);
    CHECK(corr::aperiodic_ccf(x, x, -7) == 0);
    // lag 2, 5-chip overlap, hand summation:
    // (-1)(+1) + (+1)(-1) + (+1)(+1) + (-1)(-1) + (+1)(-1) = -1
    CHECK(corr::aperiodic_ccf(x, x, 2) == -1);

    // naive oracle over random pairs
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 16; ++trial) {
        auto a = random_chips(4 + rng() % 20, rng);
        auto b = random_chips(4 + rng() % 20, rng);
        const long lag = static_cast<long>(rng() % 25) - 12;
        long expect = 0;
        for (long i = 0; i < static_cast<long>(a.chips.size()); ++i) {
            const long j = i + lag;
            if (j >= 0 && j < static_cast<long>(b.chips.size()))
                expect += a.chips[i] * b.chips[j];
        }
        CHECK(corr::aperiodic_ccf(a, b, lag) == expect);
    }
}

TEST_CASE("correlation profiles expose raw and normalized columns", "[corr]") {
    auto x = mseq_chips("x^3+x+1");
    auto profile = corr::acf_profile(x);
    REQUIRE(profile.raw.size() == 7);
    CHECK(profile.raw[0] == 7);
    CHECK(profile.normalized(3) == Catch::Approx(-1.0 / 7.0));
}
