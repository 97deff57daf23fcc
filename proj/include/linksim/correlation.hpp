#ifndef LINKSIM_CORRELATION_HPP
#define LINKSIM_CORRELATION_HPP

#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "linksim/pn_codes.hpp"

namespace linksim::corr {

namespace detail {
inline std::size_t wrap(long lag, std::size_t n) {
    long m = lag % static_cast<long>(n);
    if (m < 0) m += static_cast<long>(n);
    return static_cast<std::size_t>(m);
}
}  // namespace detail

/// Periodic cross-correlation sum_{i=0}^{N-1} x_i * y_{(i+lag) mod N} over one period.
inline long periodic_ccf(const pn::ChipSequence& x, const pn::ChipSequence& y, long lag) {
    if (x.period != y.period)
        throw std::invalid_argument("periodic CCF requires equal periods");
    const std::size_t n = x.period;
    if (x.chips.size() < n || y.chips.size() < n)
        throw std::invalid_argument("chip sequence shorter than its stated period");
    const std::size_t off = detail::wrap(lag, n);
    long acc = 0;
    for (std::size_t i = 0; i < n; ++i)
        acc += static_cast<long>(x.chips[i]) * static_cast<long>(y.chips[(i + off) % n]);
    return acc;
}

inline long periodic_acf(const pn::ChipSequence& x, long lag) {
    return periodic_ccf(x, x, lag);
}

/// Aperiodic correlation: the windowed sum over the overlap only, no wraparound.
/// Lags with empty overlap give 0.
inline long aperiodic_ccf(const pn::ChipSequence& x, const pn::ChipSequence& y, long lag) {
    const long nx = static_cast<long>(x.chips.size());
    const long ny = static_cast<long>(y.chips.size());
    long acc = 0;
    for (long i = 0; i < nx; ++i) {
        const long j = i + lag;
        if (j < 0 || j >= ny) continue;
        acc += static_cast<long>(x.chips[i]) * static_cast<long>(y.chips[j]);
    }
    return acc;
}

/// Full table of periodic correlation values for lags 0 .. period-1.
struct CorrelationProfile {
    std::size_t period = 0;
    std::vector<long> raw;

    double normalized(std::size_t lag) const {
        return static_cast<double>(raw.at(lag)) / static_cast<double>(period);
    }
};

inline CorrelationProfile ccf_profile(const pn::ChipSequence& x, const pn::ChipSequence& y) {
    CorrelationProfile p;
    p.period = x.period;
    p.raw.reserve(x.period);
    for (std::size_t lag = 0; lag < x.period; ++lag)
        p.raw.push_back(periodic_ccf(x, y, static_cast<long>(lag)));
    return p;
}

inline CorrelationProfile acf_profile(const pn::ChipSequence& x) {
    return ccf_profile(x, x);
}

}  // namespace linksim::corr

#endif  // LINKSIM_CORRELATION_HPP
