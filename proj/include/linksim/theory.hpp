#ifndef LINKSIM_THEORY_HPP
#define LINKSIM_THEORY_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "linksim/channel.hpp"
#include "linksim/modem.hpp"

namespace linksim::theory {

/// Gaussian upper-tail probability Q(x) = 0.5 * erfc(x / sqrt(2)).
inline double q_function(double x) {
    if (!std::isfinite(x)) {
        if (std::isnan(x)) throw std::invalid_argument("q_function needs a finite argument");
        return x > 0 ? 0.0 : 1.0;
    }
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// One operating point of a closed-form error-rate curve.
struct TheoryPoint {
    modem::Scheme scheme;
    channel::Kind channel;
    double gamma_b;  // linear Eb/N0
    double ber;
    double ser;
};

/// Standard coherent Gray-coded AWGN expressions:
///   QPSK:  Pb = Q(sqrt(2 gamma)), Ps = 1 - (1 - Pb)^2
///   16QAM: Pb = (3/4) Q(sqrt(0.8 gamma)); per-axis 4-PAM Ps folds into
///          Ps = 1 - (1 - 1.5 Q(sqrt(0.8 gamma)))^2
///   8PSK:  Ps = 2 Q(sqrt(6 gamma) sin(pi/8)), Pb = Ps / 3
inline TheoryPoint ber_awgn(modem::Scheme scheme, double gamma_b) {
    if (!(gamma_b >= 0.0)) throw std::invalid_argument("gamma_b must be >= 0");
    TheoryPoint p{scheme, channel::Kind::Awgn, gamma_b, 0.0, 0.0};
    switch (scheme) {
        case modem::Scheme::Qpsk: {
            const double pb = q_function(std::sqrt(2.0 * gamma_b));
            p.ber = pb;
            p.ser = pb * (2.0 - pb);  // 1 - (1 - pb)^2 without cancellation
            break;
        }
        case modem::Scheme::Qam16: {
            const double q = q_function(std::sqrt(0.8 * gamma_b));
            p.ber = 0.75 * q;
            const double axis = 1.5 * q;
            p.ser = axis * (2.0 - axis);
            break;
        }
        case modem::Scheme::Psk8: {
            const double q = q_function(std::sqrt(6.0 * gamma_b) * std::sin(std::numbers::pi / 8.0));
            p.ser = 2.0 * q;
            p.ber = p.ser / 3.0;
            break;
        }
        default:
            throw std::invalid_argument("unsupported scheme for closed-form BER");
    }
    return p;
}

/// Average BER of coherent QPSK over unit-power flat Rayleigh fading.
inline double ber_rayleigh_qpsk(double gamma_b_mean) {
    if (!(gamma_b_mean >= 0.0)) throw std::invalid_argument("mean gamma_b must be >= 0");
    return 0.5 * (1.0 - std::sqrt(gamma_b_mean / (1.0 + gamma_b_mean)));
}

namespace detail {
// Composite Simpson quadrature of f(u) * exp(-u) over u in [0, 60].
template <typename F>
double exp_average(F&& f) {
    constexpr int n = 6000;  // even
    constexpr double hi = 60.0;
    const double h = hi / n;
    double acc = f(0.0) + f(hi) * std::exp(-hi);
    for (int i = 1; i < n; ++i) {
        const double u = i * h;
        acc += f(u) * std::exp(-u) * ((i % 2) ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}
}  // namespace detail

/// QPSK symbol-error rate over flat Rayleigh, by numerically averaging the
/// conditional SER over the exponential SNR density.
inline double ser_rayleigh_qpsk(double gamma_b_mean) {
    if (!(gamma_b_mean >= 0.0)) throw std::invalid_argument("mean gamma_b must be >= 0");
    return detail::exp_average([gamma_b_mean](double u) {
        const double pb = q_function(std::sqrt(2.0 * gamma_b_mean * u));
        return 2.0 * pb - pb * pb;
    });
}

inline TheoryPoint rayleigh_point_qpsk(double gamma_b_mean) {
    return TheoryPoint{modem::Scheme::Qpsk, channel::Kind::RayleighAwgn, gamma_b_mean,
                       ber_rayleigh_qpsk(gamma_b_mean), ser_rayleigh_qpsk(gamma_b_mean)};
}

namespace detail {

struct AxisLevel {
    double coord;
    int bits;       // per-axis label bits for this level
    int bit_count;  // number of label bits on this axis
};

// Expected wrong bits on one axis given the noiseless received coordinate y,
// the true per-axis bits, and per-component noise sigma. Decision regions are
// the min-distance intervals between consecutive levels.
inline double axis_expected_bit_errors(double y, int true_bits,
                                       const std::vector<AxisLevel>& levels, double sigma) {
    double expected = 0.0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const double lo = (j == 0) ? -std::numeric_limits<double>::infinity()
                                   : 0.5 * (levels[j - 1].coord + levels[j].coord);
        const double hi = (j + 1 == levels.size())
                              ? std::numeric_limits<double>::infinity()
                              : 0.5 * (levels[j].coord + levels[j + 1].coord);
        const double p_lo = std::isinf(lo) ? 1.0 : q_function((lo - y) / sigma);
        const double p_hi = std::isinf(hi) ? 0.0 : q_function((hi - y) / sigma);
        const double p = p_lo - p_hi;
        expected += p * __builtin_popcount(static_cast<unsigned>(levels[j].bits ^ true_bits));
    }
    return expected;
}

inline const std::vector<AxisLevel>& qpsk_axis() {
    static const std::vector<AxisLevel> axis = {
        {-1.0 / std::numbers::sqrt2, 1, 1},
        {+1.0 / std::numbers::sqrt2, 0, 1},
    };
    return axis;
}

inline const std::vector<AxisLevel>& qam16_axis() {
    static const std::vector<AxisLevel> axis = [] {
        const double s = 1.0 / std::sqrt(10.0);
        // ascending coordinates with the per-axis Gray labels
        return std::vector<AxisLevel>{
            {-3.0 * s, 0b00, 2}, {-1.0 * s, 0b01, 2}, {+1.0 * s, 0b11, 2}, {+3.0 * s, 0b10, 2}};
    }();
    return axis;
}

}  // namespace detail

/// Semianalytic BER: the frame carries every deterministic distortion and the
/// Gaussian noise is integrated analytically per received point. Rectangular
/// schemes use exact per-axis boundary-crossing probabilities; 8PSK uses the
/// nearest-angular-boundary Q approximation. tx_bits are the transmitted
/// labels, so distortion-induced decision changes count as errors.
inline double semianalytic_ber(const modem::SymbolFrame& noiseless_rx,
                               const std::vector<std::uint8_t>& tx_bits, modem::Scheme scheme,
                               double gamma_b) {
    if (noiseless_rx.symbols.empty())
        throw std::invalid_argument("semianalytic BER needs a non-empty frame");
    if (noiseless_rx.scheme != scheme)
        throw std::invalid_argument("frame scheme does not match requested scheme");
    if (!(gamma_b > 0.0)) throw std::invalid_argument("gamma_b must be positive");
    const int k = modem::bits_per_symbol(scheme);
    if (tx_bits.size() != noiseless_rx.symbols.size() * static_cast<std::size_t>(k))
        throw std::invalid_argument("tx bit count does not match frame size");

    const double eb = 1.0 / k;  // unit-energy constellation
    const double sigma = std::sqrt(eb / gamma_b / 2.0);

    double total = 0.0;
    const std::size_t n = noiseless_rx.symbols.size();
    if (scheme == modem::Scheme::Qpsk || scheme == modem::Scheme::Qam16) {
        const bool qpsk = (scheme == modem::Scheme::Qpsk);
        const auto& axis = qpsk ? detail::qpsk_axis() : detail::qam16_axis();
        const int axis_bits = axis.front().bit_count;
        for (std::size_t i = 0; i < n; ++i) {
            int label = 0;
            for (int j = 0; j < k; ++j) label = (label << 1) | tx_bits[i * k + j];
            // QPSK carries b0 on I and b1 on Q; 16QAM carries b3b2 on I, b1b0 on Q.
            const int i_bits = qpsk ? (label & 1) : (label >> axis_bits);
            const int q_bits = qpsk ? (label >> 1) : (label & ((1 << axis_bits) - 1));
            total += detail::axis_expected_bit_errors(noiseless_rx.symbols[i].real(), i_bits,
                                                      axis, sigma);
            total += detail::axis_expected_bit_errors(noiseless_rx.symbols[i].imag(), q_bits,
                                                      axis, sigma);
        }
    } else {
        static constexpr int gray[8] = {0, 1, 3, 2, 6, 7, 5, 4};
        int sector_of[8];
        for (int m = 0; m < 8; ++m) sector_of[gray[m]] = m;
        const double half = std::numbers::pi / 8.0;
        for (std::size_t i = 0; i < n; ++i) {
            int label = 0;
            for (int j = 0; j < k; ++j) label = (label << 1) | tx_bits[i * k + j];
            const int m = sector_of[label];
            const double center = 2.0 * std::numbers::pi * m / 8.0;
            const auto r = noiseless_rx.symbols[i];
            const double mag = std::abs(r);
            double delta = std::arg(r) - center;
            while (delta > std::numbers::pi) delta -= 2.0 * std::numbers::pi;
            while (delta < -std::numbers::pi) delta += 2.0 * std::numbers::pi;
            const double d_up = mag * std::sin(half - delta);
            const double d_dn = mag * std::sin(half + delta);
            const int up = gray[(m + 1) % 8];
            const int dn = gray[(m + 7) % 8];
            total += q_function(d_up / sigma) *
                     __builtin_popcount(static_cast<unsigned>(label ^ up));
            total += q_function(d_dn / sigma) *
                     __builtin_popcount(static_cast<unsigned>(label ^ dn));
        }
    }
    return total / (static_cast<double>(n) * k);
}

}  // namespace linksim::theory

#endif  // LINKSIM_THEORY_HPP
