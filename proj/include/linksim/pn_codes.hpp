#ifndef LINKSIM_PN_CODES_HPP
#define LINKSIM_PN_CODES_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace linksim::pn {

/// Feedback polynomial H(x) = x^n + h_{n-1}x^{n-1} + ... + h_1 x + 1 over GF(2).
/// Coefficients are stored as a mask with bit i = coefficient of x^i; bit 0 and
/// bit `degree` are always set. The degree cap keeps maximal-period checks by
/// full state enumeration cheap.
class GeneratorPolynomial {
public:
    static constexpr int kMaxDegree = 24;

    GeneratorPolynomial(int degree, std::uint32_t coeff_mask)
        : degree_(degree), mask_(coeff_mask) {
        if (degree < 1 || degree > kMaxDegree)
            throw std::invalid_argument("polynomial degree must be in [1, 24], got " +
                                        std::to_string(degree));
        mask_ |= 1u;  // constant term is always 1
        if (((mask_ >> degree) & 1u) == 0)
            throw std::invalid_argument("leading coefficient h_n must be 1");
        if (mask_ >> (degree + 1))
            throw std::invalid_argument("coefficient mask exceeds stated degree");
    }

    /// Build from the list of exponents with nonzero coefficients, e.g. {3,1,0}
    /// for x^3 + x + 1. The constant term may be omitted; it is always present.
    static GeneratorPolynomial from_exponents(const std::vector<int>& exponents) {
        if (exponents.empty())
            throw std::invalid_argument("polynomial needs at least the leading exponent");
        std::uint32_t mask = 1u;
        int degree = 0;
        for (int e : exponents) {
            if (e < 0 || e > kMaxDegree)
                throw std::invalid_argument("polynomial exponent out of range: " +
                                            std::to_string(e));
            if (e > 0 && ((mask >> e) & 1u))
                throw std::invalid_argument("duplicate exponent in polynomial: " +
                                            std::to_string(e));
            mask |= (1u << e);
            degree = std::max(degree, e);
        }
        return GeneratorPolynomial(degree, mask);
    }

    /// Accepts "x^3+x+1" style or the shorthand exponent list "3,1,0".
    static GeneratorPolynomial parse(std::string_view text) {
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
        if (s.empty()) throw std::invalid_argument("empty polynomial string");

        std::vector<int> exps;
        if (s.find('x') != std::string::npos || s.find('X') != std::string::npos) {
            std::size_t pos = 0;
            while (pos < s.size()) {
                std::size_t next = s.find('+', pos);
                std::string term = s.substr(pos, next == std::string::npos ? next : next - pos);
                pos = (next == std::string::npos) ? s.size() : next + 1;
                if (term.empty()) throw std::invalid_argument("malformed polynomial: '" + s + "'");
                if (term == "1") {
                    exps.push_back(0);
                } else if (term == "x" || term == "X") {
                    exps.push_back(1);
                } else if ((term[0] == 'x' || term[0] == 'X') && term.size() > 2 && term[1] == '^') {
                    exps.push_back(std::stoi(term.substr(2)));
                } else {
                    throw std::invalid_argument("malformed polynomial term: '" + term + "'");
                }
            }
        } else {
            std::size_t pos = 0;
            while (pos < s.size()) {
                std::size_t next = s.find(',', pos);
                std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
                pos = (next == std::string::npos) ? s.size() : next + 1;
                if (tok.empty()) throw std::invalid_argument("malformed exponent list: '" + s + "'");
                exps.push_back(std::stoi(tok));
            }
        }
        return from_exponents(exps);
    }

    int degree() const { return degree_; }
    std::uint32_t coeff_mask() const { return mask_; }
    bool coeff(int i) const { return (mask_ >> i) & 1u; }

    std::string to_string() const {
        std::string out;
        for (int e = degree_; e >= 0; --e) {
            if (!coeff(e)) continue;
            if (!out.empty()) out += "+";
            if (e == 0) out += "1";
            else if (e == 1) out += "x";
            else out += "x^" + std::to_string(e);
        }
        return out;
    }

private:
    int degree_;
    std::uint32_t mask_;
};

/// A 0/1 sequence together with the period of the state cycle it was drawn from.
struct BinarySequence {
    std::vector<std::uint8_t> bits;
    std::size_t period = 1;
};

/// Bipolar spreading code: one or more periods of +/-1 chips.
struct ChipSequence {
    std::vector<std::int8_t> chips;
    std::size_t period = 1;
};

namespace detail {

// State holds the most recent `n` sequence bits, bit j = a_{k-n+j}. The next
// output is a_k = XOR of a_{k-n+e} over exponents e < n of H(x); this is the
// recurrence sum_{i=0..n} h_i a_{k-n+i} = 0 solved for the h_n = 1 term.
inline std::uint32_t lfsr_step(std::uint32_t state, const GeneratorPolynomial& poly) {
    const int n = poly.degree();
    std::uint32_t fb = 0;
    std::uint32_t taps = poly.coeff_mask() & ((1u << n) - 1u);
    fb = static_cast<std::uint32_t>(__builtin_popcount(state & taps)) & 1u;
    return (state >> 1) | (fb << (n - 1));
}

// Cycle length of the register starting from `state` (bounded by 2^n; the map
// is invertible because h_0 = 1, so every nonzero state lies on a cycle).
inline std::size_t cycle_length(std::uint32_t state, const GeneratorPolynomial& poly) {
    const std::uint32_t start = state;
    std::size_t steps = 0;
    const std::size_t bound = (std::size_t{1} << poly.degree()) + 1;
    do {
        state = lfsr_step(state, poly);
        ++steps;
        if (steps > bound)
            throw std::runtime_error("LFSR state cycle did not close");  // unreachable
    } while (state != start);
    return steps;
}

}  // namespace detail

/// Runs the Fibonacci-form shift register seeded with bits (a_0 .. a_{n-1}) and
/// returns `length` output bits; the first n outputs are the seed itself.
inline BinarySequence generate_msequence(const GeneratorPolynomial& poly,
                                         const std::vector<std::uint8_t>& seed,
                                         std::size_t length) {
    const int n = poly.degree();
    if (static_cast<int>(seed.size()) != n)
        throw std::invalid_argument("seed length " + std::to_string(seed.size()) +
                                    " does not match polynomial degree " + std::to_string(n));
    if (length == 0) throw std::invalid_argument("sequence length must be >= 1");

    std::uint32_t state = 0;
    for (int j = 0; j < n; ++j) {
        if (seed[j] > 1) throw std::invalid_argument("seed bits must be 0 or 1");
        state |= static_cast<std::uint32_t>(seed[j]) << j;
    }
    if (state == 0)
        throw std::invalid_argument("all-zero seed is a fixed point and is rejected");

    BinarySequence out;
    out.bits.reserve(length);
    std::uint32_t s = state;
    for (std::size_t i = 0; i < length; ++i) {
        out.bits.push_back(static_cast<std::uint8_t>(s & 1u));
        s = detail::lfsr_step(s, poly);
    }
    out.period = detail::cycle_length(state, poly);
    return out;
}

/// True iff the register cycles through all 2^n - 1 nonzero states, i.e. the
/// polynomial is primitive and the sequence is maximal-length.
inline bool verify_maximal_period(const GeneratorPolynomial& poly) {
    const std::size_t full = (std::size_t{1} << poly.degree()) - 1;
    return detail::cycle_length(1u, poly) == full;
}

/// Bit 0 -> chip +1, bit 1 -> chip -1, so XOR on bits is multiplication on chips.
inline ChipSequence to_bipolar(const BinarySequence& seq) {
    ChipSequence out;
    out.period = seq.period;
    out.chips.reserve(seq.bits.size());
    for (std::uint8_t b : seq.bits)
        out.chips.push_back(b ? std::int8_t{-1} : std::int8_t{+1});
    return out;
}

/// Per-user codes are cyclic shifts of the base code: user k gets a shift by k.
/// The shift count is capped by the period, which reproduces the user ceiling
/// of a short code family (7 users on a period-7 code).
inline std::vector<ChipSequence> assign_user_codes(const ChipSequence& base, int num_users) {
    const std::size_t n = base.period;
    if (base.chips.size() < n)
        throw std::invalid_argument("chip sequence shorter than its stated period");
    if (num_users < 1)
        throw std::invalid_argument("num_users must be >= 1");
    if (static_cast<std::size_t>(num_users) > n)
        throw std::invalid_argument("num_users " + std::to_string(num_users) +
                                    " exceeds code capacity " + std::to_string(n) +
                                    " (one cyclic shift per user)");

    std::vector<ChipSequence> codes;
    codes.reserve(num_users);
    for (int k = 0; k < num_users; ++k) {
        ChipSequence c;
        c.period = n;
        c.chips.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            c.chips[i] = base.chips[(i + static_cast<std::size_t>(k)) % n];
        codes.push_back(std::move(c));
    }
    for (int a = 0; a < num_users; ++a)
        for (int b = a + 1; b < num_users; ++b)
            if (codes[a].chips == codes[b].chips)
                throw std::invalid_argument(
                    "cyclic shifts of the base code are not distinct (shift " +
                    std::to_string(a) + " == shift " + std::to_string(b) + ")");
    return codes;
}

}  // namespace linksim::pn

#endif  // LINKSIM_PN_CODES_HPP
