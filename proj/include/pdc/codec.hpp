#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pdc/matrix.hpp"

namespace pdc {

using BitVec = std::vector<std::uint8_t>;

inline bool syndrome_is_zero(const SparseBitMatrix& h, const BitVec& bits) {
    if (static_cast<int>(bits.size()) != h.cols)
        throw std::invalid_argument("syndrome_is_zero: word length mismatch");
    for (const auto& row : h.row_ones) {
        int parity = 0;
        for (int c : row) parity ^= bits[c];
        if (parity) return false;
    }
    return true;
}

/// Systematic streaming encoder. Each output block is (u_t, p_t) with the
/// parity bit last; p_t closes check t, which is solvable for a single bit
/// because H_0 is the all-one vector. State starts all-zero.
class StreamEncoder {
public:
    explicit StreamEncoder(const DifferenceDesign& design)
        : a_(design.a), sf_(syndrome_former(design)), history_(sf_.lh - 1, BitVec(design.a, 0)) {
        // cols_at_offset_[i]: columns of H_s^T with a one at row i >= 1.
        cols_at_offset_.resize(sf_.lh);
        for (int c = 0; c < a_; ++c)
            for (int off : sf_.hs.row_ones[c])
                if (off > 0) cols_at_offset_[off].push_back(c);
    }

    BitVec encode_block(const BitVec& info) {
        if (static_cast<int>(info.size()) != a_ - 1)
            throw std::invalid_argument("encode_block: info word must have a-1 bits");
        int p = 0;
        for (int bit : info) p ^= bit;
        for (int i = 1; i < sf_.lh; ++i)
            for (int c : cols_at_offset_[i]) p ^= history_[(pos_ + (sf_.lh - 1) - i) % (sf_.lh - 1)][c];
        BitVec block(info);
        block.push_back(static_cast<std::uint8_t>(p));
        if (sf_.lh > 1) {
            history_[pos_] = block;
            pos_ = (pos_ + 1) % (sf_.lh - 1);
        }
        return block;
    }

    void reset() {
        for (auto& b : history_) std::fill(b.begin(), b.end(), 0);
        pos_ = 0;
    }

private:
    int a_;
    SyndromeFormer sf_;
    std::vector<BitVec> history_;  // ring buffer of the last L_h - 1 blocks
    int pos_ = 0;
    std::vector<std::vector<int>> cols_at_offset_;
};

inline std::vector<BitVec> encode_stream(const DifferenceDesign& design,
                                         const std::vector<BitVec>& info_blocks) {
    StreamEncoder enc(design);
    std::vector<BitVec> out;
    out.reserve(info_blocks.size());
    for (const auto& u : info_blocks) out.push_back(enc.encode_block(u));
    return out;
}

/// Tail-biting block encoder built from a GF(2) systematization of H_tb:
/// info bits go on the free columns, pivot columns carry the parities.
class TailBitingEncoder {
public:
    TailBitingEncoder(const DifferenceDesign& design, int n_blocks)
        : h_(tail_biting_matrix(design, n_blocks)) {
        const int n = h_.cols;
        const int words = (n + 63) / 64;
        std::vector<std::vector<std::uint64_t>> rows(h_.rows, std::vector<std::uint64_t>(words, 0));
        for (int r = 0; r < h_.rows; ++r)
            for (int c : h_.row_ones[r]) rows[r][c >> 6] |= 1ULL << (c & 63);
        int rank = 0;
        for (int c = 0; c < n && rank < h_.rows; ++c) {
            int pr = -1;
            for (int r = rank; r < h_.rows; ++r)
                if (rows[r][c >> 6] & (1ULL << (c & 63))) {
                    pr = r;
                    break;
                }
            if (pr < 0) continue;
            std::swap(rows[rank], rows[pr]);
            for (int r = 0; r < h_.rows; ++r)
                if (r != rank && (rows[r][c >> 6] & (1ULL << (c & 63))))
                    for (int w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
            pivot_cols_.push_back(c);
            ++rank;
        }
        std::vector<char> is_pivot(n, 0);
        for (int c : pivot_cols_) is_pivot[c] = 1;
        for (int c = 0; c < n; ++c)
            if (!is_pivot[c]) systematic_cols_.push_back(c);
        // Row r of the RREF, restricted to free columns, gives pivot r's parity taps.
        parity_taps_.resize(rank);
        for (int r = 0; r < rank; ++r)
            for (std::size_t i = 0; i < systematic_cols_.size(); ++i) {
                int f = systematic_cols_[i];
                if (rows[r][f >> 6] & (1ULL << (f & 63))) parity_taps_[r].push_back(static_cast<int>(i));
            }
    }

    int k() const { return static_cast<int>(systematic_cols_.size()); }
    const SparseBitMatrix& parity_check() const { return h_; }
    const std::vector<int>& systematic_cols() const { return systematic_cols_; }

    BitVec encode(const BitVec& info) const {
        if (static_cast<int>(info.size()) != k())
            throw std::invalid_argument("encode: info word must have k bits");
        BitVec cw(h_.cols, 0);
        for (std::size_t i = 0; i < systematic_cols_.size(); ++i) cw[systematic_cols_[i]] = info[i];
        for (std::size_t r = 0; r < pivot_cols_.size(); ++r) {
            int p = 0;
            for (int tap : parity_taps_[r]) p ^= info[tap];
            cw[pivot_cols_[r]] = static_cast<std::uint8_t>(p);
        }
        return cw;
    }

private:
    SparseBitMatrix h_;
    std::vector<int> pivot_cols_;
    std::vector<int> systematic_cols_;
    std::vector<std::vector<int>> parity_taps_;
};

struct DecoderConfig {
    int max_iterations = 50;
    bool early_stop = true;
    double llr_clamp = 25.0;
};

struct DecodeResult {
    BitVec hard_bits;
    int iterations_used = 0;
    bool converged = false;
};

namespace detail {

/// Check-node tanh rule via prefix/suffix products; no division, so zero
/// inputs are handled exactly. Output i excludes input i.
inline void check_node_update(const std::vector<double>& in, std::vector<double>& out,
                              double clamp) {
    const std::size_t n = in.size();
    out.resize(n);
    static thread_local std::vector<double> tanh_half, suffix;
    tanh_half.resize(n);
    suffix.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) tanh_half[i] = std::tanh(0.5 * in[i]);
    suffix[n] = 1.0;
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * tanh_half[i];
    double prefix = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = prefix * suffix[i + 1];
        t = std::clamp(t, -1.0 + 1e-15, 1.0 - 1e-15);
        out[i] = std::clamp(2.0 * std::atanh(t), -clamp, clamp);
        prefix *= tanh_half[i];
    }
}

}  // namespace detail

/// Flooding-schedule sum-product decoding. Positive LLR means bit 0 is more
/// likely. Hard decisions come from the posterior sign; with early_stop the
/// decoder exits as soon as the syndrome is zero (iteration 0 checks the
/// channel hard decision before any message passing).
inline DecodeResult decode_sum_product(const SparseBitMatrix& h, const std::vector<double>& llr,
                                       const DecoderConfig& cfg = {}) {
    if (static_cast<int>(llr.size()) != h.cols)
        throw std::invalid_argument("decode_sum_product: llr length mismatch");
    if (cfg.max_iterations < 1 || cfg.llr_clamp <= 0)
        throw std::invalid_argument("decode_sum_product: bad config");

    // Flat edge layout, check-major.
    std::vector<int> check_begin(h.rows + 1, 0);
    for (int r = 0; r < h.rows; ++r)
        check_begin[r + 1] = check_begin[r] + static_cast<int>(h.row_ones[r].size());
    const int n_edges = check_begin[h.rows];
    std::vector<int> edge_var(n_edges);
    std::vector<std::vector<int>> var_edges(h.cols);
    for (int r = 0; r < h.rows; ++r)
        for (std::size_t i = 0; i < h.row_ones[r].size(); ++i) {
            int e = check_begin[r] + static_cast<int>(i);
            edge_var[e] = h.row_ones[r][i];
            var_edges[h.row_ones[r][i]].push_back(e);
        }

    DecodeResult res;
    res.hard_bits.resize(h.cols);
    // A posterior of exactly zero carries no information; a word containing
    // such coin-toss bits is never declared converged.
    bool decisive = true;
    auto harden = [&](const std::vector<double>& post) {
        decisive = true;
        for (int v = 0; v < h.cols; ++v) {
            res.hard_bits[v] = post[v] < 0.0 ? 1 : 0;
            decisive &= post[v] != 0.0;
        }
    };

    std::vector<double> posterior(llr);
    harden(posterior);
    if (cfg.early_stop && decisive && syndrome_is_zero(h, res.hard_bits)) {
        res.converged = true;
        return res;
    }

    std::vector<double> v2c(n_edges), c2v(n_edges, 0.0);
    for (int e = 0; e < n_edges; ++e)
        v2c[e] = std::clamp(llr[edge_var[e]], -cfg.llr_clamp, cfg.llr_clamp);

    std::vector<double> cin, cout;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        for (int r = 0; r < h.rows; ++r) {
            const int b = check_begin[r], e = check_begin[r + 1];
            cin.assign(v2c.begin() + b, v2c.begin() + e);
            detail::check_node_update(cin, cout, cfg.llr_clamp);
            std::copy(cout.begin(), cout.end(), c2v.begin() + b);
        }
        for (int v = 0; v < h.cols; ++v) {
            double total = llr[v];
            for (int e : var_edges[v]) total += c2v[e];
            posterior[v] = total;
            for (int e : var_edges[v]) v2c[e] = std::clamp(total - c2v[e], -cfg.llr_clamp, cfg.llr_clamp);
        }
        harden(posterior);
        res.iterations_used = iter;
        if (decisive && syndrome_is_zero(h, res.hard_bits)) {
            res.converged = true;
            if (cfg.early_stop) return res;
        }
    }
    res.converged = decisive && syndrome_is_zero(h, res.hard_bits);
    return res;
}

}  // namespace pdc
