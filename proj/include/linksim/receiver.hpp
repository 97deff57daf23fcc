#ifndef LINKSIM_RECEIVER_HPP
#define LINKSIM_RECEIVER_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "linksim/channel.hpp"
#include "linksim/modem.hpp"
#include "linksim/pn_codes.hpp"
#include "linksim/spreading.hpp"

namespace linksim::receiver {

/// Channel knowledge at the detector. PERFECT divides by the true per-sample
/// gain; BLOCK_ESTIMATE reuses the gain of each block's first sample for the
/// whole block, which goes stale as Doppler grows.
struct CsiMode {
    enum class Kind { Perfect, BlockEstimate };
    Kind kind = Kind::Perfect;
    int block_len = 1;

    static CsiMode perfect() { return CsiMode{Kind::Perfect, 1}; }
    static CsiMode block(int len) {
        if (len < 1) throw std::invalid_argument("CSI block length must be >= 1");
        return CsiMode{Kind::BlockEstimate, len};
    }
    static CsiMode parse(const std::string& text) {
        if (text == "perfect") return perfect();
        if (text.rfind("block:", 0) == 0) return block(std::stoi(text.substr(6)));
        throw std::invalid_argument("unknown csi mode '" + text +
                                    "' (expected perfect|block:<len>)");
    }
    std::string name() const {
        return kind == Kind::Perfect ? "perfect" : "block:" + std::to_string(block_len);
    }
};

enum class Despread { Soft, Hard };

inline const char* despread_name(Despread d) { return d == Despread::Soft ? "soft" : "hard"; }

inline Despread parse_despread(const std::string& name) {
    if (name == "soft") return Despread::Soft;
    if (name == "hard") return Despread::Hard;
    throw std::invalid_argument("unknown despread mode '" + name + "' (expected soft|hard)");
}

/// Zero-forcing channel compensation. Gains below 1e-12 in magnitude mark a
/// deep fade; those samples pass through unscaled instead of blowing up.
inline modem::SymbolFrame compensate(const modem::SymbolFrame& received,
                                     const channel::FadingRealization& realization,
                                     CsiMode mode) {
    if (received.symbols.size() != realization.gains.size())
        throw std::invalid_argument("fading realization length does not match frame");
    constexpr double kErasureGain = 1e-12;
    modem::SymbolFrame out = received;
    const std::size_t n = out.symbols.size();
    if (mode.kind == CsiMode::Kind::Perfect) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto g = realization.gains[i];
            if (std::abs(g) >= kErasureGain) out.symbols[i] /= g;
        }
    } else {
        const std::size_t block = static_cast<std::size_t>(mode.block_len);
        for (std::size_t start = 0; start < n; start += block) {
            const auto g = realization.gains[start];
            const bool usable = std::abs(g) >= kErasureGain;
            const std::size_t end = std::min(start + block, n);
            for (std::size_t i = start; i < end; ++i)
                if (usable) out.symbols[i] /= g;
        }
    }
    return out;
}

/// Detection chain for one user: demodulate the composite to chip metrics or
/// chip bits, then despread with that user's code.
inline std::vector<std::uint8_t> receive_user(const modem::SymbolFrame& frame, int user_index,
                                              const std::vector<pn::ChipSequence>& codes, int sf,
                                              modem::Scheme scheme, Despread mode) {
    if (user_index < 0 || static_cast<std::size_t>(user_index) >= codes.size())
        throw std::invalid_argument("user index " + std::to_string(user_index) +
                                    " out of range for " + std::to_string(codes.size()) +
                                    " codes");
    if (frame.scheme != scheme)
        throw std::invalid_argument("frame scheme does not match receiver scheme");
    const pn::ChipSequence& code = codes[static_cast<std::size_t>(user_index)];
    if (mode == Despread::Soft) {
        std::vector<double> metrics = modem::soft_bit_metrics(frame);
        return spread::despread_soft(metrics, code, sf);
    }
    std::vector<std::uint8_t> chip_bits = modem::demodulate_hard(frame);
    return spread::despread_hard(chip_bits, code, sf);
}

}  // namespace linksim::receiver

#endif  // LINKSIM_RECEIVER_HPP
