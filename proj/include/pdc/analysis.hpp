#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "pdc/matrix.hpp"

namespace pdc {

/// Shortest Tanner-graph cycle. Witness alternates column/row indices,
/// starting with a column, and has exactly `girth` entries.
struct GirthReport {
    std::optional<int> girth;   // nullopt: acyclic
    std::vector<int> witness;   // even positions: column index, odd: row index
};

namespace detail {

// Bipartite adjacency: node ids 0..cols-1 are variables, cols..cols+rows-1 checks.
inline std::vector<std::vector<int>> tanner_adjacency(const SparseBitMatrix& h) {
    std::vector<std::vector<int>> adj(h.cols + h.rows);
    for (int r = 0; r < h.rows; ++r)
        for (int c : h.row_ones[r]) {
            adj[c].push_back(h.cols + r);
            adj[h.cols + r].push_back(c);
        }
    return adj;
}

struct CycleHit {
    int length = std::numeric_limits<int>::max();
    int start = -1, u = -1, x = -1;
};

// BFS from `start` with parent exclusion; returns the best cycle closure seen
// and fills parent[] for witness reconstruction.
inline void girth_bfs(const std::vector<std::vector<int>>& adj, int start, int cap,
                      std::vector<int>& dist, std::vector<int>& parent, CycleHit& best) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent.begin(), parent.end(), -1);
    std::vector<int> queue{start};
    dist[start] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        if (2 * dist[u] + 1 >= std::min(best.length, cap)) break;
        for (int x : adj[u]) {
            if (x == parent[u]) continue;
            if (dist[x] < 0) {
                dist[x] = dist[u] + 1;
                parent[x] = u;
                queue.push_back(x);
            } else {
                int len = dist[u] + dist[x] + 1;
                if (len < best.length) best = {len, start, u, x};
            }
        }
    }
}

}  // namespace detail

inline GirthReport girth(const SparseBitMatrix& h) {
    auto adj = detail::tanner_adjacency(h);
    const int n = static_cast<int>(adj.size());
    std::vector<int> dist(n), parent(n);
    detail::CycleHit best;
    // Every cycle passes through a variable node, so variable starts suffice.
    for (int s = 0; s < h.cols; ++s) {
        detail::girth_bfs(adj, s, best.length, dist, parent, best);
        if (best.length == 4) break;
    }
    GirthReport rep;
    if (best.start < 0) return rep;  // acyclic

    // Rebuild parents for the winning start, then splice the two root paths.
    detail::CycleHit scratch;
    detail::girth_bfs(adj, best.start, best.length + 1, dist, parent, scratch);
    auto path_to_root = [&](int v) {
        std::vector<int> p;
        for (; v >= 0; v = parent[v]) p.push_back(v);
        std::reverse(p.begin(), p.end());  // root first
        return p;
    };
    auto pu = path_to_root(best.u);
    auto px = path_to_root(best.x);
    std::size_t common = 0;
    while (common + 1 < pu.size() && common + 1 < px.size() && pu[common + 1] == px[common + 1]) ++common;
    std::vector<int> cycle(pu.begin() + common, pu.end());
    for (std::size_t i = px.size(); i-- > common + 1;) cycle.push_back(px[i]);

    rep.girth = static_cast<int>(cycle.size());
    // Rotate so the witness opens on a variable node, then map ids to indices.
    std::size_t rot = (cycle[0] < h.cols) ? 0 : 1;
    rep.witness.reserve(cycle.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        int id = cycle[(i + rot) % cycle.size()];
        rep.witness.push_back(id < h.cols ? id : id - h.cols);
    }
    return rep;
}

enum class DistanceMethod { column_subset_search, exhaustive_enumeration };

struct DistanceReport {
    std::optional<int> d_min;   // nullopt: no codeword of weight <= weight_cap
    std::uint64_t multiplicity = 0;
    DistanceMethod method = DistanceMethod::column_subset_search;
    int weight_cap = 0;
};

namespace detail {

struct SubsetSearch {
    const std::vector<std::vector<int>>& cols_adj;  // rows per column
    const std::vector<std::vector<int>>& rows_adj;  // columns per row
    int rows, max_col_weight;
    std::vector<std::uint64_t> syndrome;
    int syndrome_weight = 0;
    std::vector<char> used;
    std::vector<int> chosen;
    std::set<std::vector<int>>* solutions = nullptr;  // null: stop at first
    bool found_any = false;

    void flip_column(int c) {
        for (int r : cols_adj[c]) {
            std::uint64_t bit = 1ULL << (r & 63);
            syndrome[r >> 6] ^= bit;
            syndrome_weight += (syndrome[r >> 6] & bit) ? 1 : -1;
        }
    }

    // Branch on the uncovered row with the fewest viable columns.
    int pick_row(int c_min) const {
        int best_row = -1, best_count = std::numeric_limits<int>::max();
        for (std::size_t w = 0; w < syndrome.size(); ++w) {
            std::uint64_t word = syndrome[w];
            while (word) {
                int r = static_cast<int>(w * 64) + std::countr_zero(word);
                word &= word - 1;
                int count = 0;
                for (int c : rows_adj[r])
                    if (c > c_min && !used[c]) ++count;
                if (count < best_count) {
                    best_count = count;
                    best_row = r;
                    if (count == 0) return best_row;
                }
            }
        }
        return best_row;
    }

    void dfs(int c_min, int remaining) {
        if (found_any && !solutions) return;
        if (syndrome_weight == 0) {
            found_any = true;
            if (solutions) {
                auto sorted = chosen;
                std::sort(sorted.begin(), sorted.end());
                solutions->insert(std::move(sorted));
            }
            return;
        }
        if (remaining == 0 || syndrome_weight > remaining * max_col_weight) return;
        int r = pick_row(c_min);
        for (int c : rows_adj[r]) {
            if (c <= c_min || used[c]) continue;
            used[c] = 1;
            chosen.push_back(c);
            flip_column(c);
            dfs(c_min, remaining - 1);
            flip_column(c);
            chosen.pop_back();
            used[c] = 0;
            if (found_any && !solutions) return;
        }
    }
};

}  // namespace detail

/// Smallest t <= weight_cap columns of h summing to zero over GF(2), found by
/// bounded DFS that always cancels the tightest uncovered check. Multiplicity
/// counts the distinct minimal column sets.
inline DistanceReport min_distance(const SparseBitMatrix& h, int weight_cap,
                                   bool count_multiplicity = true) {
    if (weight_cap < 1) throw std::invalid_argument("min_distance: weight_cap must be >= 1");
    auto cols_adj = h.column_ones();
    std::vector<std::vector<int>> rows_adj = h.row_ones;
    int max_w = 0;
    for (const auto& c : cols_adj) max_w = std::max(max_w, static_cast<int>(c.size()));

    DistanceReport rep;
    rep.weight_cap = weight_cap;
    for (int t = 1; t <= weight_cap; ++t) {
        std::set<std::vector<int>> solutions;
        detail::SubsetSearch search{cols_adj, rows_adj, h.rows, max_w,
                                    std::vector<std::uint64_t>((h.rows + 63) / 64, 0)};
        search.solutions = count_multiplicity ? &solutions : nullptr;
        for (int c0 = 0; c0 < h.cols; ++c0) {
            search.chosen.assign(1, c0);
            search.used.assign(h.cols, 0);
            search.used[c0] = 1;
            search.flip_column(c0);
            search.dfs(c0, t - 1);
            search.flip_column(c0);
            if (search.found_any && !count_multiplicity) break;
        }
        if (search.found_any) {
            rep.d_min = t;
            rep.multiplicity = count_multiplicity ? solutions.size() : 1;
            return rep;
        }
    }
    return rep;
}

/// Independent brute-force oracle: systematize H, enumerate all 2^k - 1
/// nonzero codewords in Gray-code order, report exact minimum weight and
/// multiplicity. Feasible only for k <= 24.
inline DistanceReport min_distance_oracle(const SparseBitMatrix& h) {
    const int n = h.cols;
    const int words = (n + 63) / 64;

    // Full RREF over dense bit rows.
    std::vector<std::vector<std::uint64_t>> rowsb(h.rows, std::vector<std::uint64_t>(words, 0));
    for (int r = 0; r < h.rows; ++r)
        for (int c : h.row_ones[r]) rowsb[r][c >> 6] |= 1ULL << (c & 63);
    std::vector<int> pivot_col;
    int rank = 0;
    for (int c = 0; c < n && rank < h.rows; ++c) {
        int pr = -1;
        for (int r = rank; r < h.rows; ++r)
            if (rowsb[r][c >> 6] & (1ULL << (c & 63))) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(rowsb[rank], rowsb[pr]);
        for (int r = 0; r < h.rows; ++r)
            if (r != rank && (rowsb[r][c >> 6] & (1ULL << (c & 63))))
                for (int w = 0; w < words; ++w) rowsb[r][w] ^= rowsb[rank][w];
        pivot_col.push_back(c);
        ++rank;
    }
    const int k = n - rank;
    if (k > 24) throw std::invalid_argument("min_distance_oracle: k > 24 is infeasible");

    std::vector<char> is_pivot(n, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    // Generator row for free column f: 1 at f, plus RREF entry at each pivot.
    std::vector<std::vector<std::uint64_t>> gen(k, std::vector<std::uint64_t>(words, 0));
    for (int i = 0; i < k; ++i) {
        int f = free_cols[i];
        gen[i][f >> 6] |= 1ULL << (f & 63);
        for (int r = 0; r < rank; ++r)
            if (rowsb[r][f >> 6] & (1ULL << (f & 63))) {
                int p = pivot_col[r];
                gen[i][p >> 6] |= 1ULL << (p & 63);
            }
    }

    DistanceReport rep;
    rep.method = DistanceMethod::exhaustive_enumeration;
    rep.weight_cap = n;
    if (k == 0) return rep;

    std::vector<std::uint64_t> word(words, 0);
    int best = std::numeric_limits<int>::max();
    std::uint64_t mult = 0;
    const std::uint64_t total = 1ULL << k;
    for (std::uint64_t g = 1; g < total; ++g) {
        int flip = std::countr_zero(g);  // Gray-code step
        for (int w = 0; w < words; ++w) word[w] ^= gen[flip][w];
        int weight = 0;
        for (int w = 0; w < words; ++w) weight += std::popcount(word[w]);
        if (weight < best) {
            best = weight;
            mult = 1;
        } else if (weight == best) {
            ++mult;
        }
    }
    rep.d_min = best;
    rep.multiplicity = mult;
    return rep;
}

}  // namespace pdc
