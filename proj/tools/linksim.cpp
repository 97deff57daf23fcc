// Command-line front end: config-driven BER sweeps, closed-form curves,
// spreading-code correlation tables, and a built-in self check.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "linksim/linksim.hpp"

namespace {

using namespace linksim;

std::string read_file(const std::string& path) {
    std::ifstream ifs(path, std::ios::binary);
    if (!ifs) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << ifs.rdbuf();
    return ss.str();
}

void emit(const std::string& out_path, const std::string& contents) {
    if (out_path.empty())
        std::cout << contents;
    else
        harness::write_file(out_path, contents);
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag,
                 const std::string& seed_flag, int jobs) {
    harness::SimulationConfig cfg = harness::parse_config(read_file(config_path));

    if (const char* env = std::getenv("LINKSIM_SEED"))
        cfg.master_seed = std::stoull(env);
    if (!seed_flag.empty()) cfg.master_seed = std::stoull(seed_flag);

    std::string out_path = out_flag;
    if (out_path.empty() && !cfg.out_path.empty()) {
        std::filesystem::path p(cfg.out_path);
        if (p.is_relative())
            p = std::filesystem::path(config_path).parent_path() / p;
        out_path = p.string();
    }

    const auto records = harness::run_sweep(cfg, jobs);
    emit(out_path, harness::sweep_to_csv(cfg, records));
    if (!out_path.empty())
        std::cerr << "wrote " << records.size() << " points to " << out_path << "\n";
    return 0;
}

int cmd_theory(const std::string& scheme_name, const std::string& channel_name,
               const std::string& ebn0_range, const std::string& out_path) {
    const modem::Scheme scheme = modem::parse_scheme(scheme_name);
    const channel::Kind kind = channel::parse_kind(channel_name);
    if (kind == channel::Kind::RayleighAwgn && scheme != modem::Scheme::Qpsk)
        throw std::invalid_argument("closed-form rayleigh curves exist for qpsk only");

    const auto grid = harness::detail::parse_number_list("ebn0", ebn0_range);
    std::string out = harness::kCsvHeader;
    out += '\n';
    for (double db : grid) {
        const double gamma = std::pow(10.0, db / 10.0);
        const theory::TheoryPoint p = (kind == channel::Kind::Awgn)
                                          ? theory::ber_awgn(scheme, gamma)
                                          : theory::rayleigh_point_qpsk(gamma);
        out += harness::csv_theory_row(p, 1, 1, 0.0);
        out += '\n';
    }
    emit(out_path, out);
    return 0;
}

int cmd_codes(const std::string& poly_text, bool acf, int ccf_shift, bool have_ccf,
              const std::string& out_path) {
    if (acf == have_ccf)
        throw std::invalid_argument("pick exactly one of --acf or --ccf <shift>");
    const auto poly = pn::GeneratorPolynomial::parse(poly_text);
    const std::size_t period = (std::size_t{1} << poly.degree()) - 1;
    std::vector<std::uint8_t> seed(poly.degree(), 0);
    seed[0] = 1;
    const auto code = pn::to_bipolar(pn::generate_msequence(poly, seed, period));

    corr::CorrelationProfile profile;
    if (acf) {
        profile = corr::acf_profile(code);
    } else {
        pn::ChipSequence shifted;
        shifted.period = period;
        shifted.chips.resize(period);
        const std::size_t s = static_cast<std::size_t>(((ccf_shift % static_cast<long>(period)) +
                                                        static_cast<long>(period)) %
                                                       static_cast<long>(period));
        for (std::size_t i = 0; i < period; ++i)
            shifted.chips[i] = code.chips[(i + s) % period];
        profile = corr::ccf_profile(code, shifted);
    }

    std::string out = "lag,raw,normalized\n";
    for (std::size_t lag = 0; lag < profile.period; ++lag) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%zu,%ld,%.10g\n", lag, profile.raw[lag],
                      profile.normalized(lag));
        out += buf;
    }
    emit(out_path, out);
    return 0;
}

struct Doctor {
    int failures = 0;
    void check(const std::string& name, bool ok) {
        std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    }
};

int cmd_doctor() {
    Doctor d;

    auto poly3 = pn::GeneratorPolynomial::parse("x^3+x+1");
    auto seq = pn::generate_msequence(poly3, {1, 0, 0}, 7);
    d.check("m-sequence x^3+x+1 emits 1001011",
            seq.bits == std::vector<std::uint8_t>({1, 0, 0, 1, 0, 1, 1}));
    d.check("x^3+x+1 is maximal", pn::verify_maximal_period(poly3));
    d.check("x^5+x^2+1 has period 31",
            pn::generate_msequence(pn::GeneratorPolynomial::parse("x^5+x^2+1"), {1, 0, 0, 0, 0}, 31)
                    .period == 31);

    auto chips = pn::to_bipolar(seq);
    bool acf_ok = corr::periodic_acf(chips, 0) == 7;
    for (long lag = 1; lag < 7; ++lag) acf_ok = acf_ok && corr::periodic_acf(chips, lag) == -1;
    d.check("period-7 ACF is {7, -1}", acf_ok);

    bool round = true;
    for (auto scheme : {modem::Scheme::Qpsk, modem::Scheme::Qam16, modem::Scheme::Psk8}) {
        const int k = modem::bits_per_symbol(scheme);
        std::vector<std::uint8_t> bits;
        for (int label = 0; label < (1 << k); ++label)
            for (int j = k - 1; j >= 0; --j) bits.push_back((label >> j) & 1);
        round = round && (modem::demodulate_hard(modem::modulate(bits, scheme)) == bits);
    }
    d.check("modulate/demodulate round trip", round);

    bool energy = true;
    for (auto scheme : {modem::Scheme::Qpsk, modem::Scheme::Qam16, modem::Scheme::Psk8}) {
        const auto& c = modem::Constellation::get(scheme);
        double e = 0;
        for (auto p : c.points) e += std::norm(p);
        energy = energy && std::abs(e / c.order - 1.0) < 1e-12;
    }
    d.check("constellations at unit average energy", energy);

    d.check("Q(0) = 1/2", std::abs(theory::q_function(0.0) - 0.5) < 1e-15);
    d.check("Q(sqrt 2) = 0.0786496",
            std::abs(theory::q_function(std::sqrt(2.0)) - 0.0786496035251426) < 1e-12);
    d.check("noise sigma at 0 dB, qpsk, sf 1 is 0.5",
            std::abs(channel::noise_sigma(0.0, 2, 1, 1.0) - 0.5) < 1e-15);

    auto codes = pn::assign_user_codes(chips, 7);
    std::mt19937_64 rng(1);
    auto bits = metrics::detail::random_bits(700, rng);
    auto spreadbits = spread::spread_bits(bits, codes[2], 7);
    auto frame = modem::modulate(spreadbits, modem::Scheme::Qpsk);
    d.check("noiseless chain round trip (qpsk, sf 7)",
            receiver::receive_user(frame, 2, codes, 7, modem::Scheme::Qpsk,
                                   receiver::Despread::Soft) == bits);

    auto fading = channel::rayleigh_gains(100000, 200.0, 10000.0, 7);
    double p = 0;
    for (auto g : fading.gains) p += std::norm(g);
    d.check("fading mean power within 2%", std::abs(p / fading.gains.size() - 1.0) < 0.02);

    auto ci = metrics::confidence_interval(0, 100);
    d.check("wilson interval lower bound at zero errors", ci.first == 0.0);

    if (d.failures) {
        std::cout << d.failures << " checks failed\n";
        return 2;
    }
    std::cout << "all checks passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DSSS W-CDMA downlink link-level BER simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, seed_flag;
    int jobs = 1;
    auto* sim = app.add_subcommand("simulate", "run the sweep described by a config file");
    sim->add_option("config", config_path, "config file")->required();
    sim->add_option("--out", out_path, "output CSV path (default: config 'out' key or stdout)");
    sim->add_option("--seed", seed_flag, "override the master seed");
    sim->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    std::string scheme_name, channel_name, ebn0_range, theory_out;
    auto* th = app.add_subcommand("theory", "emit closed-form BER/SER curves as CSV");
    th->add_option("--scheme", scheme_name, "qpsk|16qam|8psk")->required();
    th->add_option("--channel", channel_name, "awgn|rayleigh")->required();
    th->add_option("--ebn0", ebn0_range, "Eb/N0 grid, e.g. 0:8:1")->required();
    th->add_option("--out", theory_out, "output CSV path (default stdout)");

    std::string poly_text, codes_out;
    bool acf = false;
    int ccf_shift = 0;
    auto* codes = app.add_subcommand("codes", "correlation tables of an m-sequence");
    codes->add_option("--poly", poly_text, "generator polynomial, e.g. x^3+x+1 or 3,1,0")
        ->required();
    codes->add_flag("--acf", acf, "periodic autocorrelation table");
    auto* ccf_opt = codes->add_option("--ccf", ccf_shift,
                                      "cross-correlation against the cyclic shift by N");
    codes->add_option("--out", codes_out, "output CSV path (default stdout)");

    auto* doctor = app.add_subcommand("doctor", "run the built-in invariant self-checks");
    (void)doctor;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) return cmd_simulate(config_path, out_path, seed_flag, jobs);
        if (th->parsed()) return cmd_theory(scheme_name, channel_name, ebn0_range, theory_out);
        if (codes->parsed())
            return cmd_codes(poly_text, acf, ccf_shift, ccf_opt->count() > 0, codes_out);
        return cmd_doctor();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}
