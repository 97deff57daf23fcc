#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "linksim/channel.hpp"
#include "linksim/modem.hpp"

using namespace linksim;

TEST_CASE("noise sigma calibration", "[channel]") {
    // Eb/N0 = 0 dB, qpsk symbols, no spreading: Eb = 1/2, N0 = 1/2, sigma = 1/2
    CHECK(channel::noise_sigma(0.0, 2, 1, 1.0) == Catch::Approx(0.5).margin(1e-15));

    // very high Eb/N0 drives sigma to zero
    CHECK(channel::noise_sigma(300.0, 2, 1, 1.0) < 1e-15);

    // doubling SF doubles N0 (sigma^2) at fixed Eb/N0
    const double s1 = channel::noise_sigma(3.0, 2, 2, 1.0);
    const double s2 = channel::noise_sigma(3.0, 2, 4, 1.0);
    CHECK(s2 * s2 == Catch::Approx(2.0 * s1 * s1));

    CHECK_THROWS_AS(channel::noise_sigma(0.0, 0, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(channel::noise_sigma(0.0, 2, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(channel::noise_sigma(0.0, 2, 1, 0.0), std::invalid_argument);
}

TEST_CASE("awgn: zero sigma is the identity, same seed repeats exactly", "[channel]") {
    modem::SymbolFrame f;
    f.symbols = {{1, 0}, {0, 1}, {-1, -1}};
    auto out = channel::apply_awgn(f, 0.0, std::uint64_t{5});
    CHECK(out.symbols == f.symbols);

    auto a = channel::apply_awgn(f, 0.3, std::uint64_t{99});
    auto b = channel::apply_awgn(f, 0.3, std::uint64_t{99});
    CHECK(a.symbols == b.symbols);
    CHECK(a.symbols != f.symbols);
}

TEST_CASE("awgn empirical variance within 1% at one million samples", "[channel]") {
    const double sigma = 0.7;
    modem::SymbolFrame f;
    f.symbols.assign(1000000, {0.0, 0.0});
    auto out = channel::apply_awgn(f, sigma, std::uint64_t{2025});
    double vr = 0, vi = 0;
    for (auto s : out.symbols) {
        vr += s.real() * s.real();
        vi += s.imag() * s.imag();
    }
    vr /= out.symbols.size();
    vi /= out.symbols.size();
    CHECK(vr == Catch::Approx(sigma * sigma).epsilon(0.01));
    CHECK(vi == Catch::Approx(sigma * sigma).epsilon(0.01));
}

TEST_CASE("post-channel SNR matches Es/(2 sigma^2)", "[channel]") {
    const double sigma = 0.35;
    std::mt19937_64 rng(7);
    std::vector<std::uint8_t> bits(2000000);
    for (auto& b : bits) b = rng() & 1;
    auto f = modem::modulate(bits, modem::Scheme::Qpsk);
    auto rx = channel::apply_awgn(f, sigma, rng);
    double sig_pow = 0, noise_pow = 0;
    for (std::size_t i = 0; i < f.symbols.size(); ++i) {
        sig_pow += std::norm(f.symbols[i]);
        noise_pow += std::norm(rx.symbols[i] - f.symbols[i]);
    }
    const double snr = sig_pow / noise_pow;
    CHECK(snr == Catch::Approx(1.0 / (2.0 * sigma * sigma)).epsilon(0.02));
}

TEST_CASE("doppler from speed", "[channel]") {
    CHECK(channel::doppler_from_speed(0.0, 2.0e9) == 0.0);
    const double fd120 = channel::doppler_from_speed(120.0, 2.0e9);
    const double fd60 = channel::doppler_from_speed(60.0, 2.0e9);
    CHECK(fd120 == Catch::Approx(222.38).margin(0.01));
    CHECK(fd60 == Catch::Approx(0.5 * fd120));
    CHECK_THROWS_AS(channel::doppler_from_speed(-1.0, 2e9), std::invalid_argument);
    CHECK_THROWS_AS(channel::doppler_from_speed(10.0, 0.0), std::invalid_argument);
}

TEST_CASE("fading: zero doppler is a constant gain", "[channel]") {
    auto r = channel::rayleigh_gains(1000, 0.0, 192000.0, 11);
    for (auto g : r.gains) CHECK(g == r.gains[0]);
}

TEST_CASE("fading realizations are seed-deterministic", "[channel]") {
    auto a = channel::rayleigh_gains(500, 100.0, 10000.0, 77);
    auto b = channel::rayleigh_gains(500, 100.0, 10000.0, 77);
    auto c = channel::rayleigh_gains(500, 100.0, 10000.0, 78);
    CHECK(a.gains == b.gains);
    CHECK(a.gains != c.gains);
}

TEST_CASE("fading moments: unit mean power and Rayleigh median", "[channel][slow]") {
    // high normalized doppler so samples decorrelate quickly
    auto r = channel::rayleigh_gains(1000000, 2000.0, 10000.0, 1234);
    double power = 0;
    std::size_t below_median = 0;
    const double median_sq = std::log(2.0);  // square of the Rayleigh median
    for (auto g : r.gains) {
        const double m2 = std::norm(g);
        power += m2;
        if (m2 <= median_sq) ++below_median;
    }
    power /= static_cast<double>(r.gains.size());
    CHECK(power == Catch::Approx(1.0).margin(0.02));
    const double cdf = static_cast<double>(below_median) / static_cast<double>(r.gains.size());
    CHECK(cdf == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("fading autocorrelation tracks J0(2 pi fd tau)", "[channel][slow]") {
    const double fd = 2000.0, fs = 10000.0;
    auto r = channel::rayleigh_gains(1000000, fd, fs, 4321);
    double power = 0;
    for (auto g : r.gains) power += std::norm(g);
    power /= static_cast<double>(r.gains.size());

    // lags out to 1/(4 fd) and a bit beyond
    for (int lag = 1; lag <= 3; ++lag) {
        double acc = 0;
        const std::size_t n = r.gains.size() - lag;
        for (std::size_t i = 0; i < n; ++i)
            acc += (std::conj(r.gains[i]) * r.gains[i + lag]).real();
        const double rho = acc / static_cast<double>(n) / power;
        const double j0 = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * fd * lag / fs);
        CHECK(rho == Catch::Approx(j0).margin(0.05));
    }
}

TEST_CASE("fading validation", "[channel]") {
    CHECK_THROWS_AS(channel::rayleigh_gains(10, 5000.0, 10000.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(channel::rayleigh_gains(10, -1.0, 10000.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(channel::rayleigh_gains(10, 10.0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("apply_fading is elementwise and preserves mean power", "[channel]") {
    modem::SymbolFrame f;
    f.symbols = {{1, 0}, {0, 1}, {1, 1}};

    channel::FadingRealization unit;
    unit.gains.assign(3, {1.0, 0.0});
    CHECK(channel::apply_fading(f, unit).symbols == f.symbols);

    channel::FadingRealization rot;
    rot.gains.assign(3, {0.0, 1.0});
    auto rotated = channel::apply_fading(f, rot);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rotated.symbols[i] == f.symbols[i] * modem::cplx(0, 1));
        CHECK(std::norm(rotated.symbols[i]) == Catch::Approx(std::norm(f.symbols[i])));
    }

    channel::FadingRealization wrong;
    wrong.gains.assign(2, {1.0, 0.0});
    CHECK_THROWS_AS(channel::apply_fading(f, wrong), std::invalid_argument);

    // mean output power equals mean input power under unit-power fading
    modem::SymbolFrame big;
    std::mt19937_64 rng(3);
    std::vector<std::uint8_t> bits(200000);
    for (auto& b : bits) b = rng() & 1;
    big = modem::modulate(bits, modem::Scheme::Qpsk);
    auto gains = channel::rayleigh_gains(big.symbols.size(), 2000.0, 10000.0, 5);
    auto faded = channel::apply_fading(big, gains);
    double pin = 0, pout = 0;
    for (std::size_t i = 0; i < big.symbols.size(); ++i) {
        pin += std::norm(big.symbols[i]);
        pout += std::norm(faded.symbols[i]);
    }
    CHECK(pout / pin == Catch::Approx(1.0).margin(0.02));
}
