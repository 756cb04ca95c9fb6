#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pdc/design.hpp"

namespace pdc {

/// Row-sparse binary matrix. Column views are derived on demand.
struct SparseBitMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<int>> row_ones;  // sorted, strictly increasing per row

    SparseBitMatrix() = default;
    SparseBitMatrix(int r, int c) : rows(r), cols(c), row_ones(r) {}

    void set(int r, int c) {
        auto& row = row_ones[r];
        auto it = std::lower_bound(row.begin(), row.end(), c);
        if (it == row.end() || *it != c) row.insert(it, c);
    }

    bool get(int r, int c) const {
        const auto& row = row_ones[r];
        return std::binary_search(row.begin(), row.end(), c);
    }

    std::size_t ones_count() const {
        std::size_t n = 0;
        for (const auto& r : row_ones) n += r.size();
        return n;
    }

    std::vector<std::vector<int>> column_ones() const {
        std::vector<std::vector<int>> cols_adj(cols);
        for (int r = 0; r < rows; ++r)
            for (int c : row_ones[r]) cols_adj[c].push_back(r);
        return cols_adj;
    }

    bool operator==(const SparseBitMatrix& o) const {
        return rows == o.rows && cols == o.cols && row_ones == o.row_ones;
    }
};

/// Syndrome former H_s (a x L_h) together with the derived memory quantities.
struct SyndromeFormer {
    DifferenceDesign design;
    SparseBitMatrix hs;  // a rows, lh columns; row i holds the one-positions of column i of H_s^T
    int lh = 0;          // number of row vectors H_0 .. H_{L_h-1}
    int ms = 0;          // memory order, lh - 1
    int vs = 0;          // constraint length, lh * a
};

/// Column i of H_s^T has ones at rows {0} and at every cumulative sum of D_i;
/// L_h = 1 + the largest cumulative sum over all columns.
inline SyndromeFormer syndrome_former(const DifferenceDesign& d) {
    d.validate();
    SyndromeFormer sf;
    sf.design = d;
    int max_sum = 0;
    std::vector<std::vector<int>> one_rows(d.a);
    for (int i = 0; i < d.a; ++i) {
        one_rows[i].push_back(0);
        int cum = 0;
        for (int v : d.diffs[i]) {
            cum += v;
            one_rows[i].push_back(cum);
        }
        max_sum = std::max(max_sum, cum);
    }
    sf.lh = 1 + max_sum;
    sf.ms = sf.lh - 1;
    sf.vs = sf.lh * d.a;
    sf.hs = SparseBitMatrix(d.a, sf.lh);
    sf.hs.row_ones = std::move(one_rows);
    return sf;
}

/// Finite top-left window of H_conv: n_blocks block-columns of width a,
/// n_blocks check rows. Checks extending below the window are truncated.
inline SparseBitMatrix conv_window(const DifferenceDesign& d, int n_blocks) {
    if (n_blocks < 1) throw std::invalid_argument("conv_window: n_blocks must be >= 1");
    auto sf = syndrome_former(d);
    SparseBitMatrix h(n_blocks, n_blocks * d.a);
    for (int t = 0; t < n_blocks; ++t)
        for (int c = 0; c < d.a; ++c)
            for (int off : sf.hs.row_ones[c]) {
                int r = t + off;
                if (r < n_blocks) h.row_ones[r].push_back(t * d.a + c);
            }
    for (auto& row : h.row_ones) std::sort(row.begin(), row.end());
    return h;
}

/// Tail-biting termination: block-column t places its ones at rows
/// (t + offset) mod n_blocks. Requires n_blocks >= L_h so a wrapped column
/// never overlaps itself; every column then has weight exactly w.
inline SparseBitMatrix tail_biting_matrix(const DifferenceDesign& d, int n_blocks) {
    auto sf = syndrome_former(d);
    if (n_blocks < sf.lh)
        throw std::invalid_argument("tail_biting_matrix: n_blocks must be >= L_h");
    SparseBitMatrix h(n_blocks, n_blocks * d.a);
    for (int t = 0; t < n_blocks; ++t)
        for (int c = 0; c < d.a; ++c)
            for (int off : sf.hs.row_ones[c])
                h.row_ones[(t + off) % n_blocks].push_back(t * d.a + c);
    for (auto& row : h.row_ones) std::sort(row.begin(), row.end());
    return h;
}

/// One circulant block of the reordered tail-biting matrix, identified by
/// the one-positions of its first column.
struct CirculantBlock {
    int size = 0;
    std::vector<int> first_col_rows;  // sorted
};

struct CirculantForm {
    std::vector<CirculantBlock> blocks;   // a blocks, each n_blocks x n_blocks
    std::vector<int> permutation;         // permutation[new_col] = old_col
};

/// Reorder columns by residue mod a (positions 1, a+1, 2a+1, ... first),
/// yielding a single row of a circulant blocks. Fails if any block is not
/// circulant, which indicates the input is not a tail-biting PDC matrix.
inline CirculantForm circulant_form(const SparseBitMatrix& h, int a) {
    if (a < 1 || h.cols % a != 0)
        throw std::invalid_argument("circulant_form: cols must be a multiple of a");
    const int n_blocks = h.cols / a;
    if (h.rows != n_blocks)
        throw std::invalid_argument("circulant_form: expected a tail-biting matrix (rows == cols / a)");

    CirculantForm out;
    out.permutation.resize(h.cols);
    for (int c = 0; c < h.cols; ++c) {
        int block = c % a, pos = c / a;
        out.permutation[block * n_blocks + pos] = c;
    }

    auto cols_adj = h.column_ones();
    out.blocks.resize(a);
    for (int b = 0; b < a; ++b) {
        auto& blk = out.blocks[b];
        blk.size = n_blocks;
        blk.first_col_rows = cols_adj[out.permutation[b * n_blocks]];
        for (int pos = 0; pos < n_blocks; ++pos) {
            const auto& col = cols_adj[out.permutation[b * n_blocks + pos]];
            if (col.size() != blk.first_col_rows.size())
                throw std::runtime_error("circulant_form: block " + std::to_string(b) + " is not circulant");
            std::vector<int> expect;
            expect.reserve(col.size());
            for (int r : blk.first_col_rows) expect.push_back((r + pos) % n_blocks);
            std::sort(expect.begin(), expect.end());
            if (expect != col)
                throw std::runtime_error("circulant_form: block " + std::to_string(b) + " is not circulant");
        }
    }
    return out;
}

/// Dense GF(2) row reduction over 64-bit words.
inline int rank_gf2(const SparseBitMatrix& m) {
    const int words = (m.cols + 63) / 64;
    if (m.rows == 0 || m.cols == 0) return 0;
    std::vector<std::vector<std::uint64_t>> rows(m.rows, std::vector<std::uint64_t>(words, 0));
    for (int r = 0; r < m.rows; ++r)
        for (int c : m.row_ones[r]) rows[r][c >> 6] |= 1ULL << (c & 63);

    int rank = 0;
    for (int c = 0; c < m.cols && rank < m.rows; ++c) {
        const int w = c >> 6;
        const std::uint64_t bit = 1ULL << (c & 63);
        int pivot = -1;
        for (int r = rank; r < m.rows; ++r)
            if (rows[r][w] & bit) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = 0; r < m.rows; ++r)
            if (r != rank && (rows[r][w] & bit))
                for (int k = w; k < words; ++k) rows[r][k] ^= rows[rank][k];
        ++rank;
    }
    return rank;
}

/// Plain-text sparse export: "rows cols" on the first line, then one line
/// per row listing its 1-based column indices.
inline void write_alist(std::ostream& os, const SparseBitMatrix& m) {
    os << m.rows << ' ' << m.cols << '\n';
    for (const auto& row : m.row_ones) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? " " : "") << row[i] + 1;
        os << '\n';
    }
}

inline SparseBitMatrix read_alist(std::istream& is) {
    int rows, cols;
    if (!(is >> rows >> cols) || rows < 0 || cols < 0)
        throw std::runtime_error("read_alist: malformed header");
    is.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    SparseBitMatrix m(rows, cols);
    std::string line;
    for (int r = 0; r < rows; ++r) {
        if (!std::getline(is, line)) throw std::runtime_error("read_alist: missing row " + std::to_string(r));
        std::istringstream ls(line);
        int c;
        while (ls >> c) {
            if (c < 1 || c > cols) throw std::runtime_error("read_alist: column index out of range");
            m.row_ones[r].push_back(c - 1);
        }
        std::sort(m.row_ones[r].begin(), m.row_ones[r].end());
    }
    return m;
}

}  // namespace pdc
