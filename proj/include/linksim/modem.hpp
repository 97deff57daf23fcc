#ifndef LINKSIM_MODEM_HPP
#define LINKSIM_MODEM_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace linksim::modem {

using cplx = std::complex<double>;

enum class Scheme { Qpsk, Qam16, Psk8 };

inline int bits_per_symbol(Scheme s) {
    switch (s) {
        case Scheme::Qpsk: return 2;
        case Scheme::Qam16: return 4;
        case Scheme::Psk8: return 3;
    }
    throw std::invalid_argument("unknown modulation scheme");
}

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Qpsk: return "qpsk";
        case Scheme::Qam16: return "16qam";
        case Scheme::Psk8: return "8psk";
    }
    return "?";
}

inline Scheme parse_scheme(const std::string& name) {
    if (name == "qpsk") return Scheme::Qpsk;
    if (name == "16qam" || name == "qam16") return Scheme::Qam16;
    if (name == "8psk" || name == "psk8") return Scheme::Psk8;
    throw std::invalid_argument("unknown scheme '" + name + "' (expected qpsk|16qam|8psk)");
}

/// Gray-labeled constellation at unit average symbol energy. The label tables
/// are part of the output contract and are fixed here, not derived:
///   QPSK  (b1b0, point*sqrt(2)):  00 -> +1+j, 01 -> -1+j, 11 -> -1-j, 10 -> +1-j
///   16QAM (b3b2|b1b0): per-axis Gray 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3,
///         b3b2 on I, b1b0 on Q, scaled by 1/sqrt(10)
///   8PSK  Gray sequence 000,001,011,010,110,111,101,100 counter-clockwise
///         from angle 0 on the unit circle
struct Constellation {
    Scheme scheme;
    int order;
    int bits;
    std::vector<cplx> points;  // indexed by label value

    static const Constellation& get(Scheme s) {
        static const Constellation qpsk = make(Scheme::Qpsk);
        static const Constellation qam16 = make(Scheme::Qam16);
        static const Constellation psk8 = make(Scheme::Psk8);
        switch (s) {
            case Scheme::Qpsk: return qpsk;
            case Scheme::Qam16: return qam16;
            case Scheme::Psk8: return psk8;
        }
        throw std::invalid_argument("unknown modulation scheme");
    }

private:
    static Constellation make(Scheme s) {
        Constellation c;
        c.scheme = s;
        c.bits = bits_per_symbol(s);
        c.order = 1 << c.bits;
        c.points.resize(c.order);
        switch (s) {
            case Scheme::Qpsk: {
                const double a = 1.0 / std::numbers::sqrt2;
                for (int label = 0; label < 4; ++label) {
                    const int b1 = (label >> 1) & 1;
                    const int b0 = label & 1;
                    c.points[label] = cplx(b0 ? -a : a, b1 ? -a : a);
                }
                break;
            }
            case Scheme::Qam16: {
                const double scale = 1.0 / std::sqrt(10.0);
                auto level = [](int hi, int lo) {
                    // Gray map on one axis: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
                    if (!hi) return lo ? -1.0 : -3.0;
                    return lo ? +1.0 : +3.0;
                };
                for (int label = 0; label < 16; ++label) {
                    const int b3 = (label >> 3) & 1, b2 = (label >> 2) & 1;
                    const int b1 = (label >> 1) & 1, b0 = label & 1;
                    c.points[label] = cplx(level(b3, b2) * scale, level(b1, b0) * scale);
                }
                break;
            }
            case Scheme::Psk8: {
                static constexpr int gray[8] = {0, 1, 3, 2, 6, 7, 5, 4};
                for (int m = 0; m < 8; ++m) {
                    const double ang = 2.0 * std::numbers::pi * m / 8.0;
                    c.points[gray[m]] = cplx(std::cos(ang), std::sin(ang));
                }
                break;
            }
        }
        return c;
    }
};

/// A block of complex baseband symbols tagged with its modulation.
struct SymbolFrame {
    std::vector<cplx> symbols;
    Scheme scheme = Scheme::Qpsk;
};

/// Maps bits to symbols, consuming bits_per_symbol bits MSB-first per label.
/// Bit counts that do not divide evenly are rejected, never padded.
inline SymbolFrame modulate(const std::vector<std::uint8_t>& bits, Scheme scheme) {
    const Constellation& c = Constellation::get(scheme);
    const int k = c.bits;
    if (bits.size() % static_cast<std::size_t>(k) != 0)
        throw std::invalid_argument("bit count " + std::to_string(bits.size()) +
                                    " not divisible by " + std::to_string(k) +
                                    " bits/symbol");
    SymbolFrame f;
    f.scheme = scheme;
    f.symbols.reserve(bits.size() / k);
    for (std::size_t i = 0; i < bits.size(); i += k) {
        int label = 0;
        for (int j = 0; j < k; ++j) label = (label << 1) | (bits[i + j] & 1);
        f.symbols.push_back(c.points[label]);
    }
    return f;
}

/// Minimum-distance decision for one sample; ties resolve to the lowest label.
inline int nearest_label(cplx r, const Constellation& c) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int label = 0; label < c.order; ++label) {
        const double d = std::norm(r - c.points[label]);
        if (d < best_d) {
            best_d = d;
            best = label;
        }
    }
    return best;
}

inline std::vector<int> hard_labels(const SymbolFrame& frame) {
    const Constellation& c = Constellation::get(frame.scheme);
    std::vector<int> out;
    out.reserve(frame.symbols.size());
    for (cplx r : frame.symbols) out.push_back(nearest_label(r, c));
    return out;
}

inline std::vector<std::uint8_t> demodulate_hard(const SymbolFrame& frame) {
    const Constellation& c = Constellation::get(frame.scheme);
    std::vector<std::uint8_t> bits;
    bits.reserve(frame.symbols.size() * static_cast<std::size_t>(c.bits));
    for (cplx r : frame.symbols) {
        const int label = nearest_label(r, c);
        for (int j = c.bits - 1; j >= 0; --j)
            bits.push_back(static_cast<std::uint8_t>((label >> j) & 1));
    }
    return bits;
}

/// Per-bit soft metrics in stream order; positive favors bit 0 (the +1 chip).
/// QPSK uses the I/Q components directly (the exact matched-filter statistic);
/// 16QAM and 8PSK use the max-log metric, the squared-distance gap between the
/// nearest bit=1 and nearest bit=0 constellation points.
inline std::vector<double> soft_bit_metrics(const SymbolFrame& frame) {
    const Constellation& c = Constellation::get(frame.scheme);
    std::vector<double> metrics;
    metrics.reserve(frame.symbols.size() * static_cast<std::size_t>(c.bits));
    if (frame.scheme == Scheme::Qpsk) {
        for (cplx r : frame.symbols) {
            metrics.push_back(r.imag());  // b1
            metrics.push_back(r.real());  // b0
        }
        return metrics;
    }
    for (cplx r : frame.symbols) {
        for (int j = c.bits - 1; j >= 0; --j) {
            double d0 = std::numeric_limits<double>::infinity();
            double d1 = std::numeric_limits<double>::infinity();
            for (int label = 0; label < c.order; ++label) {
                const double d = std::norm(r - c.points[label]);
                if ((label >> j) & 1) {
                    if (d < d1) d1 = d;
                } else {
                    if (d < d0) d0 = d;
                }
            }
            metrics.push_back(d1 - d0);
        }
    }
    return metrics;
}

}  // namespace linksim::modem

#endif  // LINKSIM_MODEM_HPP
