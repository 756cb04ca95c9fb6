// Command-line front end: construct designs, analyze materialized codes,
// encode/decode bit streams, and run BER sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdc/analysis.hpp"
#include "pdc/channel.hpp"
#include "pdc/codec.hpp"
#include "pdc/design.hpp"
#include "pdc/matrix.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;  // search exhaustion / validation failure

pdc::DifferenceDesign load_design(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open design file: " + path);
    nlohmann::json j;
    in >> j;
    return pdc::design_from_json(j);
}

// Packed bit I/O, LSB-first within each byte.
std::vector<std::uint8_t> read_packed_bits(std::istream& is) {
    std::vector<std::uint8_t> bits;
    char byte;
    while (is.get(byte))
        for (int i = 0; i < 8; ++i) bits.push_back((static_cast<unsigned char>(byte) >> i) & 1);
    return bits;
}

void write_packed_bits(std::ostream& os, const std::vector<std::uint8_t>& bits) {
    for (std::size_t i = 0; i < bits.size(); i += 8) {
        unsigned char byte = 0;
        for (std::size_t j = 0; j < 8 && i + j < bits.size(); ++j) byte |= bits[i + j] << j;
        os.put(static_cast<char>(byte));
    }
}

std::vector<double> parse_ebno_range(const std::string& spec) {
    double start, step, stop;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || !ss.eof())
        throw CLI::ValidationError("--ebno", "expected start:step:stop");
    if (step <= 0 || stop < start)
        throw CLI::ValidationError("--ebno", "need step > 0 and stop >= start");
    std::vector<double> out;
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    return out;
}

int run_construct(int a, int w, bool uniform, bool random, int max_diff,
                  std::uint64_t seed, bool avoid_six, std::uint64_t attempts,
                  const std::string& out_path) {
    pdc::DifferenceDesign d;
    if (uniform == random) {
        std::cerr << "construct: pass exactly one of --uniform / --random\n";
        return kExitUsage;
    }
    try {
        d = uniform ? pdc::uniform_design(a, w)
                    : pdc::random_design(a, w, max_diff, seed, avoid_six, attempts);
    } catch (const pdc::SearchExhausted& e) {
        std::cerr << "construct: " << e.what() << '\n';
        return kExitFailure;
    }

    auto j = pdc::design_to_json(d);
    if (out_path.empty() || out_path == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        out << j.dump(2) << '\n';
    }

    auto sf = pdc::syndrome_former(d);
    bool four_free = pdc::is_four_cycle_free(d);
    bool six_free = pdc::six_cycle_witnesses(d).empty();
    std::cerr << "lh=" << sf.lh << " vs=" << sf.vs << " lh_bound=" << pdc::lh_lower_bound(a, w)
              << " four_cycle_free=" << (four_free ? "true" : "false")
              << " six_cycle_free=" << (six_free ? "true" : "false") << '\n';
    return kExitOk;
}

int run_analyze(const std::string& design_path, int n_blocks_flag, int weight_cap_flag,
                bool use_window, bool verify_stability, const std::string& alist_path) {
    auto d = load_design(design_path);
    auto sf = pdc::syndrome_former(d);
    const int n_blocks = n_blocks_flag > 0 ? n_blocks_flag : 4 * sf.lh;

    auto materialize = [&](int n) {
        return use_window ? pdc::conv_window(d, n) : pdc::tail_biting_matrix(d, n);
    };
    auto h = materialize(n_blocks);
    const int cap = weight_cap_flag > 0 ? weight_cap_flag : (use_window ? 2 * d.w + 2 : 2 * d.w);

    auto g = pdc::girth(h);
    auto dist = pdc::min_distance(h, cap);
    auto window = pdc::conv_window(d, n_blocks);
    bool full_rank = pdc::rank_gf2(window) == window.rows;
    bool four_free = pdc::is_four_cycle_free(d);
    bool six_free = pdc::six_cycle_witnesses(d).empty();

    if (verify_stability) {
        auto h2 = materialize(2 * n_blocks);
        auto g2 = pdc::girth(h2);
        auto dist2 = pdc::min_distance(h2, cap, false);
        if (g.girth != g2.girth || dist.d_min != dist2.d_min)
            std::cerr << "warning: girth/d_min differ between n_blocks=" << n_blocks << " and "
                      << 2 * n_blocks << "; increase --n-blocks\n";
    }

    const int k = h.cols - pdc::rank_gf2(h);
    if (!use_window && k > n_blocks * (d.a - 1))
        std::cerr << "note: wrap-around rank deficiency, k=" << k << " exceeds n_blocks*(a-1)\n";

    nlohmann::ordered_json rep{
        {"girth", g.girth ? nlohmann::json(*g.girth) : nlohmann::json(nullptr)},
        {"d_min", dist.d_min ? nlohmann::json(*dist.d_min) : nlohmann::json(nullptr)},
        {"multiplicity", dist.multiplicity},
        {"lh", sf.lh},
        {"vs", sf.vs},
        {"lh_bound", pdc::lh_lower_bound(d.a, d.w)},
        {"four_cycle_free", four_free},
        {"six_cycle_free", six_free},
        {"full_rank", full_rank},
    };
    std::cout << rep.dump(2) << '\n';

    if (!alist_path.empty()) {
        std::ofstream out(alist_path);
        pdc::write_alist(out, h);
    }

    bool ok = four_free && full_rank && sf.lh >= pdc::lh_lower_bound(d.a, d.w);
    return ok ? kExitOk : kExitFailure;
}

int run_encode(const std::string& design_path) {
    auto d = load_design(design_path);
    auto bits = read_packed_bits(std::cin);
    // Pad the trailing partial info block with zeros.
    while (bits.size() % (d.a - 1) != 0) bits.push_back(0);
    std::vector<pdc::BitVec> info;
    for (std::size_t i = 0; i < bits.size(); i += d.a - 1)
        info.emplace_back(bits.begin() + i, bits.begin() + i + d.a - 1);
    std::vector<std::uint8_t> out;
    for (const auto& blk : pdc::encode_stream(d, info)) out.insert(out.end(), blk.begin(), blk.end());
    write_packed_bits(std::cout, out);
    return kExitOk;
}

int run_decode(const std::string& design_path, int n_blocks_flag, int max_iters) {
    auto d = load_design(design_path);
    auto bits = read_packed_bits(std::cin);
    const int n_blocks = n_blocks_flag > 0 ? n_blocks_flag : static_cast<int>(bits.size()) / d.a;
    if (n_blocks < 1 || static_cast<int>(bits.size()) < n_blocks * d.a) {
        std::cerr << "decode: input shorter than n_blocks * a bits\n";
        return kExitFailure;
    }
    // Hard-decision channel: map received bits to fixed-confidence LLRs.
    std::vector<double> llr(n_blocks * d.a);
    for (int i = 0; i < n_blocks * d.a; ++i) llr[i] = bits[i] ? -4.0 : 4.0;
    pdc::DecoderConfig cfg;
    cfg.max_iterations = max_iters;
    auto res = pdc::decode_sum_product(pdc::conv_window(d, n_blocks), llr, cfg);
    std::vector<std::uint8_t> info;
    for (int t = 0; t < n_blocks; ++t)
        for (int c = 0; c < d.a - 1; ++c) info.push_back(res.hard_bits[t * d.a + c]);
    write_packed_bits(std::cout, info);
    std::cerr << "decode: converged=" << (res.converged ? "true" : "false")
              << " iterations=" << res.iterations_used << '\n';
    return kExitOk;
}

int run_simulate(const std::string& design_path, const std::string& ebno_spec,
                 const pdc::SimConfig& cfg, std::uint64_t seed, const std::string& out_path) {
    auto d = load_design(design_path);
    auto ebnos = parse_ebno_range(ebno_spec);

    std::ofstream csv(out_path);
    if (!csv) throw std::runtime_error("cannot open output: " + out_path);
    pdc::write_csv_header(csv);

    nlohmann::ordered_json sidecar = nlohmann::ordered_json::array();
    auto records = pdc::sweep(d, ebnos, cfg, seed, [&](const pdc::SimRecord& r) {
        pdc::write_csv_row(csv, r);
        csv.flush();  // partial results survive interruption
        sidecar.push_back(r.config_echo);
        std::cerr << "ebno=" << r.ebno_db << " ber=" << r.ber << " fer=" << r.fer
                  << " frames=" << r.frames << '\n';
    });

    std::ofstream side(out_path + ".json");
    side << sidecar.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PDC-LDPC code construction, analysis and simulation"};
    app.require_subcommand(1);

    // construct
    auto* c = app.add_subcommand("construct", "Build a difference-set design");
    int a = 0, w = 0, max_diff = 0;
    bool uniform = false, random = false, avoid_six = false;
    std::uint64_t seed = 1, attempts = 1'000'000;
    std::string out_path;
    c->add_option("--a", a, "Block width a")->required();
    c->add_option("--w", w, "Column weight w")->required();
    c->add_flag("--uniform", uniform, "Uniform construction");
    c->add_flag("--random", random, "Random search construction");
    c->add_option("--max-diff", max_diff, "Largest difference value for --random");
    c->add_option("--seed", seed, "Search seed");
    c->add_flag("--avoid-six-cycles", avoid_six, "Also reject designs with length-6 witnesses");
    c->add_option("--attempts", attempts, "Random search attempt budget");
    c->add_option("-o,--output", out_path, "Design JSON path (default stdout)");

    // analyze
    auto* an = app.add_subcommand("analyze", "Girth / distance / rank report");
    std::string an_design, alist_path;
    int an_blocks = 0, an_cap = 0, de_iters = 50;
    bool an_window = false, an_stability = false;
    an->add_option("design", an_design, "Design JSON file")->required();
    an->add_option("--n-blocks", an_blocks, "Block length (default 4 * L_h)");
    an->add_option("--weight-cap", an_cap, "Distance search cap (default 2w, window: 2w+2)");
    an->add_flag("--window", an_window, "Analyze the truncated window instead of tail-biting");
    an->add_flag("--verify-stability", an_stability, "Re-measure at twice the length and warn on mismatch");
    an->add_option("--export-alist", alist_path, "Write the analyzed matrix in sparse text format");

    // encode / decode
    auto* en = app.add_subcommand("encode", "Encode packed info bits from stdin (LSB-first)");
    std::string en_design;
    en->add_option("design", en_design, "Design JSON file")->required();
    auto* de = app.add_subcommand("decode", "Decode packed hard bits from stdin (LSB-first)");
    std::string de_design;
    int de_blocks = 0;
    de->add_option("design", de_design, "Design JSON file")->required();
    de->add_option("--n-blocks", de_blocks, "Code blocks in the input (default: infer)");
    de->add_option("--iters", de_iters, "Decoder iteration cap");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo BER/FER sweep");
    std::string sim_design, ebno_spec, sim_out = "results.csv";
    pdc::SimConfig scfg;
    std::uint64_t sim_seed = 1;
    sim->add_option("design", sim_design, "Design JSON file")->required();
    sim->add_option("--ebno", ebno_spec, "Eb/N0 sweep, start:step:stop in dB")->required();
    sim->add_option("--n-blocks", scfg.n_blocks, "Frame length in blocks (default 20 * L_h)");
    sim->add_option("--guard", scfg.guard_blocks, "Guard blocks discarded at each end (default L_h)");
    sim->add_option("--min-frame-errors", scfg.stop.min_frame_errors, "Stop after this many frame errors");
    sim->add_option("--max-frames", scfg.stop.max_frames, "Hard frame budget per point");
    sim->add_option("--iters", scfg.decoder.max_iterations, "Decoder iteration cap");
    sim->add_option("--threads", scfg.threads, "Worker threads (default: PDC_THREADS or hardware)");
    sim->add_option("--seed", sim_seed, "Master seed");
    sim->add_option("-o,--output", sim_out, "Results CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c->parsed())
            return run_construct(a, w, uniform, random, max_diff, seed, avoid_six, attempts, out_path);
        if (an->parsed())
            return run_analyze(an_design, an_blocks, an_cap, an_window, an_stability, alist_path);
        if (en->parsed()) return run_encode(en_design);
        if (de->parsed()) return run_decode(de_design, de_blocks, de_iters);
        if (sim->parsed()) return run_simulate(sim_design, ebno_spec, scfg, sim_seed, sim_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
