#ifndef LINKSIM_SPREADING_HPP
#define LINKSIM_SPREADING_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "linksim/modem.hpp"
#include "linksim/pn_codes.hpp"

namespace linksim::spread {

namespace detail {
// Code chip at a global chip index, consumed cyclically; +1 chips are bit 0.
inline std::uint8_t code_bit(const pn::ChipSequence& code, std::size_t chip_index) {
    return code.chips[chip_index % code.period] < 0 ? 1 : 0;
}
inline int code_chip(const pn::ChipSequence& code, std::size_t chip_index) {
    return code.chips[chip_index % code.period];
}
inline void check_sf(int sf, const pn::ChipSequence& code) {
    if (sf < 1) throw std::invalid_argument("spreading factor must be >= 1");
    if (static_cast<std::size_t>(sf) > code.period)
        throw std::invalid_argument("spreading factor " + std::to_string(sf) +
                                    " exceeds code period " + std::to_string(code.period));
}
}  // namespace detail

/// XOR each data bit onto sf consecutive code chips; chip j of bit i carries
/// bits[i] ^ code_bit[(i*sf + j) mod period].
inline std::vector<std::uint8_t> spread_bits(const std::vector<std::uint8_t>& bits,
                                             const pn::ChipSequence& code, int sf) {
    detail::check_sf(sf, code);
    std::vector<std::uint8_t> chips;
    chips.reserve(bits.size() * static_cast<std::size_t>(sf));
    std::size_t idx = 0;
    for (std::uint8_t b : bits)
        for (int j = 0; j < sf; ++j, ++idx)
            chips.push_back(static_cast<std::uint8_t>((b ^ detail::code_bit(code, idx)) & 1));
    return chips;
}

/// Correlation receiver: bit i is the sign of the code-weighted sum of its sf
/// chip metrics; a zero sum resolves to bit 0.
inline std::vector<std::uint8_t> despread_soft(const std::vector<double>& metrics,
                                               const pn::ChipSequence& code, int sf) {
    detail::check_sf(sf, code);
    if (metrics.size() % static_cast<std::size_t>(sf) != 0)
        throw std::invalid_argument("metric count " + std::to_string(metrics.size()) +
                                    " not divisible by spreading factor " + std::to_string(sf));
    std::vector<std::uint8_t> bits;
    bits.reserve(metrics.size() / sf);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < metrics.size(); i += sf) {
        double acc = 0.0;
        for (int j = 0; j < sf; ++j, ++idx) acc += metrics[idx] * detail::code_chip(code, idx);
        bits.push_back(acc < 0.0 ? 1 : 0);
    }
    return bits;
}

/// XOR each received chip bit with the code, then majority-vote per bit window;
/// ties resolve to bit 0.
inline std::vector<std::uint8_t> despread_hard(const std::vector<std::uint8_t>& chip_bits,
                                               const pn::ChipSequence& code, int sf) {
    detail::check_sf(sf, code);
    if (chip_bits.size() % static_cast<std::size_t>(sf) != 0)
        throw std::invalid_argument("chip count " + std::to_string(chip_bits.size()) +
                                    " not divisible by spreading factor " + std::to_string(sf));
    std::vector<std::uint8_t> bits;
    bits.reserve(chip_bits.size() / sf);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < chip_bits.size(); i += sf) {
        int ones = 0;
        for (int j = 0; j < sf; ++j, ++idx)
            ones += (chip_bits[idx] ^ detail::code_bit(code, idx)) & 1;
        bits.push_back(ones * 2 > sf ? 1 : 0);
    }
    return bits;
}

/// Synchronous downlink: every user's bits are spread, modulated, and the
/// per-user frames are summed with 1/sqrt(K) scaling so the composite keeps
/// unit average energy.
struct DownlinkFrame {
    modem::SymbolFrame composite;
    std::vector<std::vector<std::uint8_t>> user_bits;
    int users = 1;
};

inline DownlinkFrame build_downlink(const std::vector<std::vector<std::uint8_t>>& users_bits,
                                    const std::vector<pn::ChipSequence>& codes, int sf,
                                    modem::Scheme scheme) {
    if (users_bits.empty()) throw std::invalid_argument("downlink needs at least one user");
    if (codes.size() < users_bits.size())
        throw std::invalid_argument("fewer codes than users");
    const std::size_t nbits = users_bits.front().size();
    for (const auto& b : users_bits)
        if (b.size() != nbits)
            throw std::invalid_argument("users must send equal bit counts");
    const std::size_t k = users_bits.size();
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (codes[a].chips == codes[b].chips)
                throw std::invalid_argument("duplicate spreading codes in downlink");

    DownlinkFrame frame;
    frame.users = static_cast<int>(k);
    frame.user_bits = users_bits;
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    for (std::size_t u = 0; u < k; ++u) {
        auto chips = spread_bits(users_bits[u], codes[u], sf);
        modem::SymbolFrame f = modem::modulate(chips, scheme);
        if (u == 0) {
            frame.composite = std::move(f);
            for (auto& s : frame.composite.symbols) s *= scale;
        } else {
            if (f.symbols.size() != frame.composite.symbols.size())
                throw std::invalid_argument("inconsistent per-user frame lengths");
            for (std::size_t i = 0; i < f.symbols.size(); ++i)
                frame.composite.symbols[i] += f.symbols[i] * scale;
        }
    }
    return frame;
}

}  // namespace linksim::spread

#endif  // LINKSIM_SPREADING_HPP
