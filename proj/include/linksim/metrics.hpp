#ifndef LINKSIM_METRICS_HPP
#define LINKSIM_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "linksim/channel.hpp"
#include "linksim/modem.hpp"
#include "linksim/pn_codes.hpp"
#include "linksim/receiver.hpp"
#include "linksim/spreading.hpp"

namespace linksim::metrics {

/// Hamming distance between equal-length bit sequences; returns (bits, errors).
inline std::pair<std::size_t, std::size_t> count_errors(const std::vector<std::uint8_t>& tx,
                                                        const std::vector<std::uint8_t>& rx) {
    if (tx.size() != rx.size())
        throw std::invalid_argument("count_errors needs equal lengths, got " +
                                    std::to_string(tx.size()) + " vs " +
                                    std::to_string(rx.size()));
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx.size(); ++i) errors += (tx[i] ^ rx[i]) & 1;
    return {tx.size(), errors};
}

namespace detail {

// Inverse standard normal CDF (Acklam's rational approximation plus one
// Halley refinement through erfc); good to ~1e-14 over (0, 1).
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("probability must be in (0, 1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= phigh) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        const double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    // Halley refinement
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
    return x - u / (1 + x * u / 2);
}

}  // namespace detail

/// Wilson score interval for a binomial proportion.
inline std::pair<double, double> confidence_interval(std::size_t errors, std::size_t trials,
                                                     double level = 0.95) {
    if (trials == 0) throw std::invalid_argument("confidence interval needs trials > 0");
    if (errors > trials) throw std::invalid_argument("errors exceed trials");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence level must be in (0, 1)");
    const double z = detail::inverse_normal_cdf(0.5 + level / 2.0);
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    double lo = center - half, hi = center + half;
    if (errors == 0) lo = 0.0;
    if (errors == trials) hi = 1.0;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

/// Sequential stopping: accumulate frames until enough errors or the bit budget.
struct StoppingRule {
    std::size_t min_errors = 100;
    std::size_t max_bits = 10'000'000;
};

/// One measured operating point with full provenance.
struct BerRecord {
    double ebn0_db = 0.0;
    modem::Scheme scheme = modem::Scheme::Qpsk;
    channel::Kind channel = channel::Kind::Awgn;
    int sf = 1;
    int users = 1;
    double doppler_hz = 0.0;
    receiver::CsiMode csi = receiver::CsiMode::perfect();
    receiver::Despread despread = receiver::Despread::Soft;
    std::size_t bits_sent = 0;
    std::size_t bit_errors = 0;
    std::size_t symbols_sent = 0;
    std::size_t symbol_errors = 0;
    double ber = 0.0;
    double ser = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t seed = 0;
    bool below_resolution = false;
};

/// Everything run_point needs to drive the chain at one operating point.
struct PointConfig {
    modem::Scheme scheme = modem::Scheme::Qpsk;
    channel::Kind channel = channel::Kind::Awgn;
    int sf = 1;
    int users = 1;
    pn::ChipSequence code;           // base spreading code (period N_c)
    double doppler_hz = 0.0;         // Rayleigh only
    double sample_rate_hz = 192000;  // symbol rate
    receiver::CsiMode csi = receiver::CsiMode::perfect();
    receiver::Despread despread = receiver::Despread::Soft;
    std::size_t frame_bits = 2000;  // per user per frame, before step rounding
};

namespace detail {

inline std::size_t round_up(std::size_t value, std::size_t step) {
    return ((value + step - 1) / step) * step;
}

// Per-user frame bits must make sf*bits divisible by bits/symbol.
inline std::size_t frame_step(int sf, int bits_per_symbol) {
    const std::size_t g = std::gcd(static_cast<std::size_t>(sf),
                                   static_cast<std::size_t>(bits_per_symbol));
    return static_cast<std::size_t>(bits_per_symbol) / g;
}

inline std::vector<std::uint8_t> random_bits(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::uint8_t> bits(n);
    std::uint64_t word = 0;
    int avail = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (avail == 0) {
            word = rng();
            avail = 64;
        }
        bits[i] = static_cast<std::uint8_t>(word & 1u);
        word >>= 1;
        --avail;
    }
    return bits;
}

}  // namespace detail

/// Runs frames through the full transmit/channel/receive chain until the
/// stopping rule fires. All randomness comes from `seed`, so the record is a
/// pure function of (config, ebn0, rule, seed) regardless of what else runs
/// concurrently.
inline BerRecord run_point(const PointConfig& cfg, double ebn0_db, const StoppingRule& rule,
                           std::uint64_t seed) {
    if (rule.min_errors == 0 || rule.max_bits == 0)
        throw std::invalid_argument("stopping rule fields must be positive");
    if (cfg.users < 1) throw std::invalid_argument("users must be >= 1");

    const int k = modem::bits_per_symbol(cfg.scheme);
    const std::size_t step = detail::frame_step(cfg.sf, k);
    const std::size_t users = static_cast<std::size_t>(cfg.users);
    const auto codes = pn::assign_user_codes(cfg.code, cfg.users);
    const double sigma =
        channel::noise_sigma(ebn0_db, k, cfg.sf, 1.0 / static_cast<double>(cfg.users));

    std::mt19937_64 rng(seed);

    BerRecord rec;
    rec.ebn0_db = ebn0_db;
    rec.scheme = cfg.scheme;
    rec.channel = cfg.channel;
    rec.sf = cfg.sf;
    rec.users = cfg.users;
    rec.doppler_hz = (cfg.channel == channel::Kind::RayleighAwgn) ? cfg.doppler_hz : 0.0;
    rec.csi = cfg.csi;
    rec.despread = cfg.despread;
    rec.seed = seed;

    const std::size_t nominal = std::max(detail::round_up(cfg.frame_bits, step), step);

    while (rec.bit_errors < rule.min_errors && rec.bits_sent < rule.max_bits) {
        std::size_t per_user = nominal;
        const std::size_t remaining = rule.max_bits - rec.bits_sent;
        if (users * per_user > remaining) {
            per_user = remaining / users;
            per_user = (per_user / step) * step;
            if (per_user == 0) per_user = step;
        }

        std::vector<std::vector<std::uint8_t>> tx_bits(users);
        for (auto& b : tx_bits) b = detail::random_bits(per_user, rng);

        spread::DownlinkFrame dl = spread::build_downlink(tx_bits, codes, cfg.sf, cfg.scheme);
        const std::size_t n_sym = dl.composite.symbols.size();

        modem::SymbolFrame rx = dl.composite;
        channel::FadingRealization fading;
        if (cfg.channel == channel::Kind::RayleighAwgn) {
            fading = channel::rayleigh_gains(n_sym, cfg.doppler_hz, cfg.sample_rate_hz, rng());
            rx = channel::apply_fading(rx, fading);
        }
        rx = channel::apply_awgn(rx, sigma, rng);
        if (cfg.channel == channel::Kind::RayleighAwgn)
            rx = receiver::compensate(rx, fading, cfg.csi);

        // Chip-symbol decisions against the noiseless composite (for K = 1 these
        // are exactly the transmitted labels).
        const std::vector<int> ref_labels = modem::hard_labels(dl.composite);
        const std::vector<int> rx_labels = modem::hard_labels(rx);
        for (std::size_t i = 0; i < n_sym; ++i)
            rec.symbol_errors += (ref_labels[i] != rx_labels[i]) ? 1u : 0u;
        rec.symbols_sent += n_sym;

        for (std::size_t u = 0; u < users; ++u) {
            const auto decoded = receiver::receive_user(rx, static_cast<int>(u), codes, cfg.sf,
                                                        cfg.scheme, cfg.despread);
            const auto [bits, errs] = count_errors(tx_bits[u], decoded);
            rec.bits_sent += bits;
            rec.bit_errors += errs;
        }
    }

    rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits_sent);
    rec.ser = rec.symbols_sent
                  ? static_cast<double>(rec.symbol_errors) / static_cast<double>(rec.symbols_sent)
                  : 0.0;
    const auto ci = confidence_interval(rec.bit_errors, rec.bits_sent);
    rec.ci_low = ci.first;
    rec.ci_high = ci.second;
    rec.below_resolution = (rec.bit_errors == 0);
    return rec;
}

}  // namespace linksim::metrics

#endif  // LINKSIM_METRICS_HPP
