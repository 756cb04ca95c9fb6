#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace pdc {

/// Blueprint of a PDC-LDPC code: block width a, column weight w, and one
/// ordered list of w-1 positive row gaps per column.
struct DifferenceDesign {
    int a = 0;
    int w = 0;
    std::vector<std::vector<int>> diffs;   // diffs[i] has w-1 entries, i is 0-based
    std::string construction = "uniform";  // "uniform" | "random"
    std::optional<std::uint64_t> seed;

    int b() const { return a - 1; }
    double design_rate() const { return static_cast<double>(a - 1) / a; }

    void validate() const {
        if (a < 1) throw std::invalid_argument("design: a must be >= 1");
        if (w < 2) throw std::invalid_argument("design: w must be >= 2");
        if (static_cast<int>(diffs.size()) != a)
            throw std::invalid_argument("design: need exactly a difference sets");
        for (const auto& d : diffs) {
            if (static_cast<int>(d.size()) != w - 1)
                throw std::invalid_argument("design: each set needs w-1 entries");
            for (int v : d)
                if (v < 1) throw std::invalid_argument("design: differences must be >= 1");
        }
    }

    bool operator==(const DifferenceDesign& o) const {
        return a == o.a && w == o.w && diffs == o.diffs;
    }
};

/// Per-column expansion sets S_i (all elements of D_i plus all sums of
/// consecutive runs) and their combined multiset S, stored sorted.
struct ExpansionSets {
    std::vector<std::vector<int>> per_column;  // each sorted, size w(w-1)/2
    std::vector<int> combined;                 // sorted multiset union
};

struct SixCycleWitness {
    int i, j, k;        // 0-based column indices (may coincide)
    int si, sj, sk;     // si + sj == sk, si in S_i, sj in S_j, sk in S_k
    bool operator==(const SixCycleWitness& o) const {
        return i == o.i && j == o.j && k == o.k && si == o.si && sj == o.sj && sk == o.sk;
    }
};

inline long long lh_lower_bound(int a, int w) {
    if (a < 1 || w < 2) throw std::invalid_argument("lh_lower_bound: a >= 1, w >= 2 required");
    return 1LL + static_cast<long long>(a) * w * (w - 1) / 2;
}

/// Uniform construction: d_{i,2m+1} = 4^m (2(a-i)+1), d_{i,2m+2} = 4^m (4i-2),
/// with i counted from 1. Truncated to w-1 entries per column.
inline DifferenceDesign uniform_design(int a, int w) {
    if (a < 1) throw std::invalid_argument("uniform_design: a must be >= 1");
    if (w < 2) throw std::invalid_argument("uniform_design: w must be >= 2");
    DifferenceDesign d;
    d.a = a;
    d.w = w;
    d.construction = "uniform";
    d.diffs.resize(a);
    for (int i = 1; i <= a; ++i) {
        auto& col = d.diffs[i - 1];
        long long pow4 = 1;
        while (static_cast<int>(col.size()) < w - 1) {
            col.push_back(static_cast<int>(pow4 * (2 * (a - i) + 1)));
            if (static_cast<int>(col.size()) < w - 1)
                col.push_back(static_cast<int>(pow4 * (4 * i - 2)));
            pow4 *= 4;
        }
    }
    d.validate();
    return d;
}

inline ExpansionSets expansion_sets(const DifferenceDesign& d) {
    d.validate();
    ExpansionSets out;
    out.per_column.resize(d.a);
    for (int i = 0; i < d.a; ++i) {
        auto& s = out.per_column[i];
        const auto& diffs = d.diffs[i];
        for (size_t l = 0; l < diffs.size(); ++l) {
            int sum = 0;
            for (size_t m = l; m < diffs.size(); ++m) {
                sum += diffs[m];
                s.push_back(sum);
            }
        }
        std::sort(s.begin(), s.end());
        out.combined.insert(out.combined.end(), s.begin(), s.end());
    }
    std::sort(out.combined.begin(), out.combined.end());
    return out;
}

inline bool is_four_cycle_free(const DifferenceDesign& d) {
    auto s = expansion_sets(d).combined;
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

/// All triples with s_i + s_j = s_k over the expansion sets. Column indices
/// may coincide; shifted copies of one column can close a real length-6
/// cycle, so this check is deliberately conservative. The materialized
/// Tanner-graph girth is the ground truth.
inline std::vector<SixCycleWitness> six_cycle_witnesses(const DifferenceDesign& d) {
    auto es = expansion_sets(d);
    std::vector<SixCycleWitness> out;
    const int a = d.a;
    for (int i = 0; i < a; ++i)
        for (size_t l = 0; l < es.per_column[i].size(); ++l)
            for (int j = i; j < a; ++j)
                for (size_t m = (j == i ? l : 0); m < es.per_column[j].size(); ++m) {
                    int sum = es.per_column[i][l] + es.per_column[j][m];
                    for (int k = 0; k < a; ++k) {
                        const auto& sk = es.per_column[k];
                        if (std::binary_search(sk.begin(), sk.end(), sum))
                            out.push_back({i, j, k, es.per_column[i][l], es.per_column[j][m], sum});
                    }
                }
    return out;
}

struct SearchExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rejection sampling: draw each difference uniformly from [1, max_diff]
/// and keep the first draw with a duplicate-free expansion multiset (and,
/// optionally, no length-6 witnesses). Deterministic per seed.
inline DifferenceDesign random_design(int a, int w, int max_diff, std::uint64_t seed,
                                      bool avoid_six_cycles = false,
                                      std::uint64_t max_attempts = 1'000'000) {
    if (a < 1 || w < 2) throw std::invalid_argument("random_design: a >= 1, w >= 2 required");
    if (max_diff < 1) throw std::invalid_argument("random_design: max_diff must be >= 1");
    // |S| distinct values need max{S} >= |S|; max{S} <= (w-1) * max_diff.
    const long long s_size = static_cast<long long>(a) * w * (w - 1) / 2;
    if (static_cast<long long>(w - 1) * max_diff < s_size)
        throw SearchExhausted("random_design: search exhausted (max_diff too small for a duplicate-free S)");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(1, max_diff);
    DifferenceDesign d;
    d.a = a;
    d.w = w;
    d.construction = "random";
    d.seed = seed;
    d.diffs.assign(a, std::vector<int>(w - 1));
    for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        for (auto& col : d.diffs)
            for (auto& v : col) v = pick(rng);
        if (!is_four_cycle_free(d)) continue;
        if (avoid_six_cycles && !six_cycle_witnesses(d).empty()) continue;
        return d;
    }
    throw SearchExhausted("random_design: search exhausted after " + std::to_string(max_attempts) +
                          " attempts");
}

/// Canonical JSON: keys a, w, diffs, construction, seed in that order.
inline nlohmann::ordered_json design_to_json(const DifferenceDesign& d) {
    nlohmann::ordered_json j;
    j["a"] = d.a;
    j["w"] = d.w;
    j["diffs"] = d.diffs;
    j["construction"] = d.construction;
    if (d.seed)
        j["seed"] = *d.seed;
    else
        j["seed"] = nullptr;
    return j;
}

inline DifferenceDesign design_from_json(const nlohmann::json& j) {
    DifferenceDesign d;
    d.a = j.at("a").get<int>();
    d.w = j.at("w").get<int>();
    d.diffs = j.at("diffs").get<std::vector<std::vector<int>>>();
    if (j.contains("construction")) d.construction = j["construction"].get<std::string>();
    if (j.contains("seed") && !j["seed"].is_null()) d.seed = j["seed"].get<std::uint64_t>();
    d.validate();
    return d;
}

/// FNV-1a over the canonical serialization; used to tag simulation records.
inline std::uint64_t design_hash(const DifferenceDesign& d) {
    const std::string s = design_to_json(d).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace pdc
