#ifndef LINKSIM_SWEEP_HPP
#define LINKSIM_SWEEP_HPP

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "linksim/config.hpp"
#include "linksim/metrics.hpp"
#include "linksim/theory.hpp"

namespace linksim::harness {

inline constexpr const char* kCsvHeader =
    "source,scheme,channel,ebn0_db,sf,users,doppler_hz,csi,despread,bits,bit_errors,ber,"
    "symbols,symbol_errors,ser,ci_low,ci_high,seed";

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string fmt_e(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

}  // namespace detail

/// Per-point seeds mix the master seed, the operating point, and the grid
/// index, so a sweep is reproducible point-by-point and order-independent.
inline std::uint64_t derive_point_seed(std::uint64_t master_seed, double ebn0_db,
                                       std::size_t point_index) {
    std::uint64_t h = detail::splitmix64(master_seed);
    h = detail::splitmix64(h ^ std::bit_cast<std::uint64_t>(ebn0_db));
    h = detail::splitmix64(h ^ static_cast<std::uint64_t>(point_index));
    return h;
}

struct SweepPoint {
    metrics::PointConfig point;
    double ebn0_db = 0.0;
    std::uint64_t seed = 0;
};

/// Expands the config's sweep axes into the deterministic grid order
/// (scheme, sf, users, doppler, ebn0).
inline std::vector<SweepPoint> build_grid(const SimulationConfig& cfg) {
    const std::size_t period = (std::size_t{1} << cfg.code_poly.degree()) - 1;
    const auto base = pn::to_bipolar(pn::generate_msequence(
        cfg.code_poly, [&] {
            std::vector<std::uint8_t> s(cfg.code_poly.degree(), 0);
            s[0] = 1;
            return s;
        }(), period));

    std::vector<SweepPoint> grid;
    std::size_t index = 0;
    for (auto scheme : cfg.schemes)
        for (int sf : cfg.sf_list)
            for (int users : cfg.users_list)
                for (double fd : cfg.doppler_list)
                    for (double ebn0 : cfg.ebn0_db) {
                        SweepPoint sp;
                        sp.point.scheme = scheme;
                        sp.point.channel = cfg.channel;
                        sp.point.sf = sf;
                        sp.point.users = users;
                        sp.point.code = base;
                        sp.point.doppler_hz = fd;
                        sp.point.sample_rate_hz =
                            cfg.bit_rate * sf / modem::bits_per_symbol(scheme);
                        sp.point.csi = cfg.csi;
                        sp.point.despread = cfg.despread;
                        sp.point.frame_bits = cfg.frame_bits;
                        sp.ebn0_db = ebn0;
                        sp.seed = derive_point_seed(cfg.master_seed, ebn0, index);
                        grid.push_back(std::move(sp));
                        ++index;
                    }
    return grid;
}

/// Evaluates every grid point, fanning out across `jobs` workers. Results are
/// gathered by grid index, so output order never depends on scheduling.
inline std::vector<metrics::BerRecord> run_sweep(const SimulationConfig& cfg, int jobs = 1) {
    const auto grid = build_grid(cfg);
    std::vector<metrics::BerRecord> records(grid.size());
    if (jobs < 1) jobs = 1;
    const int workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(jobs), grid.size()));

    if (workers <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            records[i] = metrics::run_point(grid[i].point, grid[i].ebn0_db, cfg.rule,
                                            grid[i].seed);
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= grid.size()) break;
                records[i] = metrics::run_point(grid[i].point, grid[i].ebn0_db, cfg.rule,
                                                grid[i].seed);
            }
        });
    for (auto& t : pool) t.join();
    return records;
}

inline std::string csv_row(const metrics::BerRecord& r) {
    std::string row = "sim,";
    row += modem::scheme_name(r.scheme);
    row += ',';
    row += channel::kind_name(r.channel);
    row += ',';
    row += detail::fmt_g(r.ebn0_db);
    row += ',' + std::to_string(r.sf);
    row += ',' + std::to_string(r.users);
    row += ',' + detail::fmt_g(r.doppler_hz);
    row += ',' + r.csi.name();
    row += ',';
    row += receiver::despread_name(r.despread);
    row += ',' + std::to_string(r.bits_sent);
    row += ',' + std::to_string(r.bit_errors);
    row += ',' + detail::fmt_e(r.ber);
    row += ',' + std::to_string(r.symbols_sent);
    row += ',' + std::to_string(r.symbol_errors);
    row += ',' + detail::fmt_e(r.ser);
    row += ',' + detail::fmt_e(r.ci_low);
    row += ',' + detail::fmt_e(r.ci_high);
    row += ',' + std::to_string(r.seed);
    return row;
}

inline std::string csv_theory_row(const theory::TheoryPoint& p, int sf, int users,
                                  double doppler_hz) {
    std::string row = "theory,";
    row += modem::scheme_name(p.scheme);
    row += ',';
    row += channel::kind_name(p.channel);
    row += ',';
    row += detail::fmt_g(10.0 * std::log10(p.gamma_b));
    row += ',' + std::to_string(sf);
    row += ',' + std::to_string(users);
    row += ',' + detail::fmt_g(doppler_hz);
    row += ",-,-";
    row += ",0,0," + detail::fmt_e(p.ber);
    row += ",0,0," + detail::fmt_e(p.ser);
    row += ',' + detail::fmt_e(p.ber);
    row += ',' + detail::fmt_e(p.ber);
    row += ",0";
    return row;
}

/// Renders a finished sweep as CSV. Theory companion rows follow each measured
/// row when requested and a closed form exists for the (scheme, channel) pair.
inline std::string sweep_to_csv(const SimulationConfig& cfg,
                                const std::vector<metrics::BerRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        out += csv_row(r);
        out += '\n';
        if (!cfg.theory_rows) continue;
        const double gamma = std::pow(10.0, r.ebn0_db / 10.0);
        if (r.channel == channel::Kind::Awgn) {
            out += csv_theory_row(theory::ber_awgn(r.scheme, gamma), r.sf, r.users,
                                  r.doppler_hz);
            out += '\n';
        } else if (r.scheme == modem::Scheme::Qpsk) {
            out += csv_theory_row(theory::rayleigh_point_qpsk(gamma), r.sf, r.users,
                                  r.doppler_hz);
            out += '\n';
        }
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream ofs(path, std::ios::binary | std::ios::trunc);
    if (!ofs) throw std::runtime_error("cannot open output file: " + path);
    ofs << contents;
    if (!ofs) throw std::runtime_error("write failed: " + path);
}

}  // namespace linksim::harness

#endif  // LINKSIM_SWEEP_HPP
