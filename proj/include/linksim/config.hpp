#ifndef LINKSIM_CONFIG_HPP
#define LINKSIM_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "linksim/channel.hpp"
#include "linksim/metrics.hpp"
#include "linksim/modem.hpp"
#include "linksim/pn_codes.hpp"
#include "linksim/receiver.hpp"

namespace linksim::harness {

/// A full experiment description: the sweep axes (scheme, sf, users, doppler,
/// ebn0) plus the fixed chain parameters and stopping rule.
struct SimulationConfig {
    std::vector<modem::Scheme> schemes;
    channel::Kind channel = channel::Kind::Awgn;
    std::vector<double> ebn0_db;
    std::vector<int> sf_list = {1};
    std::vector<int> users_list = {1};
    std::vector<double> doppler_list = {0.0};
    pn::GeneratorPolynomial code_poly = pn::GeneratorPolynomial::from_exponents({3, 1, 0});
    double bit_rate = 384000.0;
    double carrier_hz = 2.0e9;
    receiver::CsiMode csi = receiver::CsiMode::perfect();
    receiver::Despread despread = receiver::Despread::Soft;
    metrics::StoppingRule rule;
    std::size_t frame_bits = 2000;
    std::uint64_t master_seed = 0;
    std::string out_path;
    bool theory_rows = false;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline double parse_number(const std::string& key, const std::string& tok) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': '" + tok + "' is not a number");
    }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next == std::string::npos ? next : next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

/// Numeric list values: "[a,b,c]", "[a..b]" (step 1), "a:b:step", or a scalar.
inline std::vector<double> parse_number_list(const std::string& key, std::string value) {
    value = trim(value);
    if (value.empty()) throw std::invalid_argument("config key '" + key + "': empty value");
    if (value.front() == '[' && value.back() == ']') {
        std::string inner = trim(value.substr(1, value.size() - 2));
        if (inner.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
        const std::size_t dots = inner.find("..");
        if (dots != std::string::npos) {
            const double lo = parse_number(key, trim(inner.substr(0, dots)));
            const double hi = parse_number(key, trim(inner.substr(dots + 2)));
            if (hi < lo)
                throw std::invalid_argument("config key '" + key + "': descending range");
            std::vector<double> out;
            for (double v = lo; v <= hi + 1e-9; v += 1.0) out.push_back(v);
            return out;
        }
        std::vector<double> out;
        for (const auto& tok : split(inner, ','))
            out.push_back(parse_number(key, tok));
        return out;
    }
    const auto colon_parts = split(value, ':');
    if (colon_parts.size() == 3) {
        const double lo = parse_number(key, colon_parts[0]);
        const double hi = parse_number(key, colon_parts[1]);
        const double step = parse_number(key, colon_parts[2]);
        if (!(step > 0.0))
            throw std::invalid_argument("config key '" + key + "': step must be positive");
        if (hi < lo) throw std::invalid_argument("config key '" + key + "': descending range");
        std::vector<double> out;
        for (double v = lo; v <= hi + step * 1e-9; v += step) out.push_back(v);
        return out;
    }
    if (colon_parts.size() != 1)
        throw std::invalid_argument("config key '" + key + "': malformed range '" + value + "'");
    return {parse_number(key, value)};
}

inline std::vector<int> to_int_list(const std::string& key, const std::vector<double>& vals) {
    std::vector<int> out;
    for (double v : vals) {
        if (std::abs(v - std::round(v)) > 1e-9)
            throw std::invalid_argument("config key '" + key + "' expects integers");
        out.push_back(static_cast<int>(std::round(v)));
    }
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config key '" + key + "': expected true|false");
}

/// Splits the document into key/value pairs. Accepts one `key = value` or
/// `key: value` per line, '#' comments, and the single-line brace form
/// `{k: v, k: v}` with commas outside brackets as separators.
inline std::vector<std::pair<std::string, std::string>> tokenize(const std::string& text) {
    std::vector<std::string> entries;
    std::string body = trim(text);
    if (!body.empty() && body.front() == '{' && body.back() == '}') {
        body = body.substr(1, body.size() - 2);
        int depth = 0;
        std::string cur;
        for (char c : body) {
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == ',' && depth == 0) {
                entries.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        entries.push_back(cur);
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t next = text.find('\n', pos);
            entries.push_back(text.substr(pos, next == std::string::npos ? next : next - pos));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
    }

    std::vector<std::pair<std::string, std::string>> pairs;
    for (auto& raw : entries) {
        std::string line = raw;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t sep = line.find('=');
        if (sep == std::string::npos) sep = line.find(':');
        if (sep == std::string::npos)
            throw std::invalid_argument("malformed config line: '" + trim(raw) + "'");
        const std::string key = trim(line.substr(0, sep));
        const std::string value = trim(line.substr(sep + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("malformed config line: '" + trim(raw) + "'");
        pairs.emplace_back(key, value);
    }
    return pairs;
}

}  // namespace detail

/// Parses and validates a config document; defaults are filled, unknown keys
/// and constraint violations are rejected with the offending key named.
inline SimulationConfig parse_config(const std::string& text) {
    SimulationConfig cfg;
    bool have_scheme = false, have_channel = false, have_ebn0 = false;
    std::optional<std::vector<double>> doppler_hz;
    std::optional<std::vector<double>> speed_list;

    std::set<std::string> seen;
    for (const auto& [key, value] : detail::tokenize(text)) {
        if (!seen.insert(key).second)
            throw std::invalid_argument("config key '" + key + "' appears twice");
        if (key == "scheme") {
            cfg.schemes.clear();
            std::string v = value;
            if (!v.empty() && v.front() == '[' && v.back() == ']')
                v = detail::trim(v.substr(1, v.size() - 2));
            for (const auto& tok : detail::split(v, ','))
                cfg.schemes.push_back(modem::parse_scheme(tok));
            have_scheme = true;
        } else if (key == "channel") {
            cfg.channel = channel::parse_kind(value);
            have_channel = true;
        } else if (key == "ebn0_db") {
            cfg.ebn0_db = detail::parse_number_list(key, value);
            have_ebn0 = true;
        } else if (key == "sf") {
            cfg.sf_list = detail::to_int_list(key, detail::parse_number_list(key, value));
        } else if (key == "num_users") {
            cfg.users_list = detail::to_int_list(key, detail::parse_number_list(key, value));
        } else if (key == "code_polynomial") {
            cfg.code_poly = pn::GeneratorPolynomial::parse(value);
        } else if (key == "bit_rate") {
            cfg.bit_rate = detail::parse_number(key, value);
        } else if (key == "carrier_hz") {
            cfg.carrier_hz = detail::parse_number(key, value);
        } else if (key == "doppler_hz") {
            doppler_hz = detail::parse_number_list(key, value);
        } else if (key == "speed_kmph") {
            speed_list = detail::parse_number_list(key, value);
        } else if (key == "csi") {
            cfg.csi = receiver::CsiMode::parse(value);
        } else if (key == "despread") {
            cfg.despread = receiver::parse_despread(value);
        } else if (key == "min_errors") {
            const auto v = detail::parse_number(key, value);
            if (!(v >= 1)) throw std::invalid_argument("config key 'min_errors' must be >= 1");
            cfg.rule.min_errors = static_cast<std::size_t>(v);
        } else if (key == "max_bits") {
            const auto v = detail::parse_number(key, value);
            if (!(v >= 1)) throw std::invalid_argument("config key 'max_bits' must be >= 1");
            cfg.rule.max_bits = static_cast<std::size_t>(v);
        } else if (key == "frame_bits") {
            const auto v = detail::parse_number(key, value);
            if (!(v >= 1)) throw std::invalid_argument("config key 'frame_bits' must be >= 1");
            cfg.frame_bits = static_cast<std::size_t>(v);
        } else if (key == "seed") {
            cfg.master_seed = static_cast<std::uint64_t>(detail::parse_number(key, value));
        } else if (key == "out") {
            cfg.out_path = value;
        } else if (key == "theory_rows") {
            cfg.theory_rows = detail::parse_bool(key, value);
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }

    if (!have_scheme) throw std::invalid_argument("config is missing required key 'scheme'");
    if (!have_channel) throw std::invalid_argument("config is missing required key 'channel'");
    if (!have_ebn0) throw std::invalid_argument("config is missing required key 'ebn0_db'");
    if (cfg.ebn0_db.empty()) throw std::invalid_argument("config key 'ebn0_db': empty sweep");

    if (doppler_hz && speed_list)
        throw std::invalid_argument(
            "config keys 'doppler_hz' and 'speed_kmph' are mutually exclusive");
    if (cfg.channel == channel::Kind::Awgn) {
        if (doppler_hz || speed_list)
            throw std::invalid_argument(
                "config keys 'doppler_hz'/'speed_kmph' require channel = rayleigh");
        cfg.doppler_list = {0.0};
    } else {
        if (!doppler_hz && !speed_list)
            throw std::invalid_argument(
                "channel = rayleigh needs 'doppler_hz' or 'speed_kmph'");
        if (speed_list) {
            cfg.doppler_list.clear();
            for (double v : *speed_list)
                cfg.doppler_list.push_back(channel::doppler_from_speed(v, cfg.carrier_hz));
        } else {
            cfg.doppler_list = *doppler_hz;
        }
    }

    if (!(cfg.bit_rate > 0)) throw std::invalid_argument("config key 'bit_rate' must be positive");
    if (!(cfg.carrier_hz > 0))
        throw std::invalid_argument("config key 'carrier_hz' must be positive");

    // Canonical sweep order: sorted, unique.
    auto canon = [](auto& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    canon(cfg.ebn0_db);
    canon(cfg.sf_list);
    canon(cfg.users_list);
    canon(cfg.doppler_list);

    const std::size_t period = (std::size_t{1} << cfg.code_poly.degree()) - 1;
    for (int sf : cfg.sf_list) {
        if (sf < 1) throw std::invalid_argument("config key 'sf' must be >= 1");
        if (static_cast<std::size_t>(sf) > period)
            throw std::invalid_argument("config key 'sf': " + std::to_string(sf) +
                                        " exceeds code period " + std::to_string(period));
    }
    for (int users : cfg.users_list) {
        if (users < 1) throw std::invalid_argument("config key 'num_users' must be >= 1");
        if (static_cast<std::size_t>(users) > period)
            throw std::invalid_argument("config key 'num_users': " + std::to_string(users) +
                                        " exceeds code capacity " + std::to_string(period) +
                                        " (period of the code polynomial)");
    }
    for (double fd : cfg.doppler_list) {
        if (fd < 0) throw std::invalid_argument("config key 'doppler_hz' must be >= 0");
        for (auto scheme : cfg.schemes)
            for (int sf : cfg.sf_list) {
                const double fs =
                    cfg.bit_rate * sf / modem::bits_per_symbol(scheme);
                if (fd >= fs / 2)
                    throw std::invalid_argument(
                        "config key 'doppler_hz': " + std::to_string(fd) +
                        " Hz is not below half the symbol rate " + std::to_string(fs));
            }
    }
    return cfg;
}

}  // namespace linksim::harness

#endif  // LINKSIM_CONFIG_HPP
