#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pdc/codec.hpp"
#include "pdc/design.hpp"
#include "pdc/matrix.hpp"

namespace pdc {

/// splitmix64; used to derive independent sub-seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Gaussian deviates via Box-Muller on mt19937_64, implemented here so the
/// bit stream is identical on every platform (std::normal_distribution is not).
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double uniform01() { return (rng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline std::vector<double> bpsk_modulate(const BitVec& bits) {
    std::vector<double> s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? -1.0 : 1.0;
    return s;
}

inline double awgn_sigma2(double ebno_db, double rate) {
    if (rate <= 0.0 || rate > 1.0) throw std::invalid_argument("awgn: rate must be in (0, 1]");
    return 1.0 / (2.0 * rate * std::pow(10.0, ebno_db / 10.0));
}

inline std::vector<double> awgn_channel(const std::vector<double>& symbols, double sigma2,
                                        std::uint64_t seed) {
    GaussianSource g(seed);
    const double sigma = std::sqrt(sigma2);
    std::vector<double> y(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) y[i] = symbols[i] + sigma * g.next();
    return y;
}

/// Channel LLR for BPSK over AWGN: llr = 2 y / sigma^2, positive favoring bit 0.
inline std::vector<double> llr_from_channel(const std::vector<double>& y, double sigma2) {
    std::vector<double> llr(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) llr[i] = 2.0 * y[i] / sigma2;
    return llr;
}

inline std::vector<double> awgn_llr(const std::vector<double>& symbols, double ebno_db,
                                    double rate, std::uint64_t seed) {
    const double sigma2 = awgn_sigma2(ebno_db, rate);
    return llr_from_channel(awgn_channel(symbols, sigma2, seed), sigma2);
}

struct StopRule {
    std::uint64_t min_frame_errors = 100;
    std::uint64_t max_frames = 1'000'000;
};

struct SimConfig {
    int n_blocks = 0;       // 0: default 20 * L_h
    int guard_blocks = -1;  // -1: default L_h
    DecoderConfig decoder;
    StopRule stop;
    int threads = 0;        // 0: PDC_THREADS env or hardware_concurrency
};

struct SimRecord {
    double ebno_db = 0.0;
    std::uint64_t info_bits_counted = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    double ber = 0.0;
    double fer = 0.0;
    double mean_iterations = 0.0;
    nlohmann::ordered_json config_echo;
};

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PDC_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

namespace detail {

struct FrameOutcome {
    std::uint64_t bit_errors = 0;
    int iterations = 0;
    bool frame_error = false;
};

// One Monte Carlo frame with a counter-derived seed: random info stream,
// streaming encode, AWGN, BP decode on the truncated window, interior-block
// error count.
inline FrameOutcome run_frame(const DifferenceDesign& design, const SparseBitMatrix& h,
                              int n_blocks, int guard_blocks, double sigma2,
                              const DecoderConfig& dcfg, std::uint64_t frame_seed) {
    const int a = design.a;
    std::mt19937_64 bit_rng(mix_seed(frame_seed, 0));
    std::vector<BitVec> info(n_blocks, BitVec(a - 1));
    for (auto& blk : info)
        for (auto& b : blk) b = static_cast<std::uint8_t>(bit_rng() & 1);

    auto code_blocks = encode_stream(design, info);
    BitVec tx;
    tx.reserve(n_blocks * a);
    for (const auto& blk : code_blocks) tx.insert(tx.end(), blk.begin(), blk.end());

    auto y = awgn_channel(bpsk_modulate(tx), sigma2, mix_seed(frame_seed, 1));
    auto res = decode_sum_product(h, llr_from_channel(y, sigma2), dcfg);

    FrameOutcome out;
    out.iterations = res.iterations_used;
    for (int t = guard_blocks; t < n_blocks - guard_blocks; ++t)
        for (int c = 0; c < a - 1; ++c)
            out.bit_errors += res.hard_bits[t * a + c] != info[t][c];
    out.frame_error = out.bit_errors > 0;
    return out;
}

}  // namespace detail

/// One BER/FER point over the truncated convolutional code. Frames carry
/// counter-derived seeds and are committed in fixed-size chunks, so the
/// result is bit-identical for any worker count.
inline SimRecord run_ber_point(const DifferenceDesign& design, double ebno_db,
                               const SimConfig& cfg, std::uint64_t seed) {
    design.validate();
    auto sf = syndrome_former(design);
    const int n_blocks = cfg.n_blocks > 0 ? cfg.n_blocks : 20 * sf.lh;
    const int guard = cfg.guard_blocks >= 0 ? cfg.guard_blocks : sf.lh;
    if (n_blocks <= 2 * guard)
        throw std::invalid_argument("run_ber_point: need n_blocks > 2 * guard_blocks");
    if (cfg.stop.max_frames == 0) throw std::invalid_argument("run_ber_point: max_frames must be > 0");

    const double rate = static_cast<double>(design.a - 1) / design.a;
    const double sigma2 = awgn_sigma2(ebno_db, rate);
    const auto h = conv_window(design, n_blocks);
    const std::uint64_t info_bits_per_frame =
        static_cast<std::uint64_t>(n_blocks - 2 * guard) * (design.a - 1);
    const int threads = resolve_threads(cfg.threads);
    const std::uint64_t chunk = 64;  // commit granularity; independent of worker count

    SimRecord rec;
    rec.ebno_db = ebno_db;
    std::uint64_t iter_sum = 0;
    std::uint64_t next_frame = 0;
    while (rec.frames < cfg.stop.max_frames && rec.frame_errors < cfg.stop.min_frame_errors) {
        const std::uint64_t batch =
            std::min<std::uint64_t>(chunk, cfg.stop.max_frames - rec.frames);
        std::vector<detail::FrameOutcome> outcomes(batch);
        std::atomic<std::uint64_t> cursor{0};
        auto worker = [&] {
            for (;;) {
                std::uint64_t i = cursor.fetch_add(1);
                if (i >= batch) break;
                outcomes[i] = detail::run_frame(design, h, n_blocks, guard, sigma2, cfg.decoder,
                                                mix_seed(seed, next_frame + i));
            }
        };
        if (threads > 1) {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        } else {
            worker();
        }
        for (const auto& o : outcomes) {
            rec.frames += 1;
            rec.bit_errors += o.bit_errors;
            rec.frame_errors += o.frame_error;
            iter_sum += static_cast<std::uint64_t>(o.iterations);
        }
        next_frame += batch;
    }
    rec.info_bits_counted = rec.frames * info_bits_per_frame;
    rec.ber = rec.info_bits_counted ? static_cast<double>(rec.bit_errors) / rec.info_bits_counted : 0.0;
    rec.fer = rec.frames ? static_cast<double>(rec.frame_errors) / rec.frames : 0.0;
    rec.mean_iterations = rec.frames ? static_cast<double>(iter_sum) / rec.frames : 0.0;

    rec.config_echo = nlohmann::ordered_json{
        {"design_hash", design_hash(design)},
        {"design", design_to_json(design)},
        {"n_blocks", n_blocks},
        {"guard_blocks", guard},
        {"max_iterations", cfg.decoder.max_iterations},
        {"early_stop", cfg.decoder.early_stop},
        {"llr_clamp", cfg.decoder.llr_clamp},
        {"min_frame_errors", cfg.stop.min_frame_errors},
        {"max_frames", cfg.stop.max_frames},
        {"seed", seed},
    };
    return rec;
}

/// Per-point seeds are mixed from the master seed by point index, so points
/// are independent and any subset can be reproduced. Partial results are
/// flushed through `on_record` as each point completes.
template <typename RecordSink>
std::vector<SimRecord> sweep(const DifferenceDesign& design, const std::vector<double>& ebno_list,
                             const SimConfig& cfg, std::uint64_t master_seed, RecordSink&& on_record) {
    if (ebno_list.empty()) throw std::invalid_argument("sweep: empty Eb/N0 list");
    std::vector<SimRecord> out;
    out.reserve(ebno_list.size());
    for (std::size_t i = 0; i < ebno_list.size(); ++i) {
        out.push_back(run_ber_point(design, ebno_list[i], cfg, mix_seed(master_seed, 0xBE5000 + i)));
        on_record(out.back());
    }
    return out;
}

inline std::vector<SimRecord> sweep(const DifferenceDesign& design,
                                    const std::vector<double>& ebno_list, const SimConfig& cfg,
                                    std::uint64_t master_seed) {
    return sweep(design, ebno_list, cfg, master_seed, [](const SimRecord&) {});
}

inline const char* kCsvHeader = "ebno_db,info_bits,bit_errors,frames,frame_errors,ber,fer,mean_iters,seed";

inline void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

inline void write_csv_row(std::ostream& os, const SimRecord& r) {
    os << r.ebno_db << ',' << r.info_bits_counted << ',' << r.bit_errors << ',' << r.frames << ','
       << r.frame_errors << ',' << r.ber << ',' << r.fer << ',' << r.mean_iterations << ','
       << r.config_echo.value("seed", 0ULL) << '\n';
}

inline std::vector<SimRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw std::runtime_error("read_csv: missing or unexpected header");
    std::vector<SimRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        SimRecord r;
        char comma;
        std::uint64_t seed;
        if (!(ls >> r.ebno_db >> comma >> r.info_bits_counted >> comma >> r.bit_errors >> comma >>
              r.frames >> comma >> r.frame_errors >> comma >> r.ber >> comma >> r.fer >> comma >>
              r.mean_iterations >> comma >> seed))
            throw std::runtime_error("read_csv: malformed row");
        r.config_echo["seed"] = seed;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace pdc
