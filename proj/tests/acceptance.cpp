// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Long-running criteria print progress on stderr.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "pdc/analysis.hpp"
#include "pdc/channel.hpp"
#include "pdc/codec.hpp"
#include "pdc/design.hpp"
#include "pdc/matrix.hpp"

using namespace pdc;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail = "") {
    std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

// Hand-picked non-uniform reference designs used throughout the suite.
const DifferenceDesign kDesc42{4, 2, {{4}, {3}, {2}, {1}}, "random", {}};
const DifferenceDesign kHand33{3, 3, {{5, 4}, {3, 7}, {1, 12}}, "random", {}};

SparseBitMatrix tb4lh(const DifferenceDesign& d) {
    return tail_biting_matrix(d, 4 * syndrome_former(d).lh);
}

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// 1. Golden matrix: uniform(4,4) -> the exact 4 x 38 syndrome former.
void criterion1() {
    const std::vector<std::vector<int>> golden = {
        {1, 8, 10, 38}, {1, 6, 12, 32}, {1, 4, 14, 26}, {1, 2, 16, 20}};
    auto sf = syndrome_former(uniform_design(4, 4));
    bool ok = sf.hs.rows == 4 && sf.hs.cols == 38 && sf.hs.ones_count() == 16;
    for (int r = 0; ok && r < 4; ++r) {
        std::vector<int> ones;
        for (int c : sf.hs.row_ones[r]) ones.push_back(c + 1);
        ok = ones == golden[r];
    }
    report(1, "golden 4x38 syndrome former for uniform a=4 w=4", ok);
}

// 2. Constraint lengths of the rate-7/8 uniform codes.
void criterion2() {
    int v3 = syndrome_former(uniform_design(8, 3)).vs;
    int v4 = syndrome_former(uniform_design(8, 4)).vs;
    report(2, "constraint lengths v_s = 256 / 624",
           v3 == 256 && v4 == 624, "got " + std::to_string(v3) + " / " + std::to_string(v4));
}

// 3. a=4 w=2: descending design hits d_min = 3 at the L_h bound; uniform gets d_min = 4, girth >= 8.
void criterion3() {
    auto sf1 = syndrome_former(kDesc42);
    bool ok = sf1.lh == 5 && sf1.lh == lh_lower_bound(4, 2);
    ok = ok && min_distance(tb4lh(kDesc42), 8).d_min == 3;

    auto u = uniform_design(4, 2);
    auto sfu = syndrome_former(u);
    auto hu = tb4lh(u);
    ok = ok && sfu.lh == 8;
    ok = ok && min_distance(hu, 8).d_min == 4;
    auto g = girth(hu);
    ok = ok && g.girth.has_value() && *g.girth >= 8;
    report(3, "a=4 w=2 descending: d_min 3 (L_h meets bound) vs uniform d_min 4, girth >= 8", ok);
}

// 4. a=3 w=3 hand-picked design: d_min = 4 with its two length-6 witnesses; uniform d_min = 6.
void criterion4() {
    bool ok = min_distance(tb4lh(kHand33), 8).d_min == 4;
    auto ws = six_cycle_witnesses(kHand33);
    auto has = [&](int si, int i, int sj, int j, int sk, int k) {
        for (const auto& w : ws) {
            bool direct = w.i == i && w.si == si && w.j == j && w.sj == sj;
            bool swapped = w.i == j && w.si == sj && w.j == i && w.sj == si;
            if ((direct || swapped) && w.k == k && w.sk == sk) return true;
        }
        return false;
    };
    ok = ok && has(3, 1, 1, 2, 4, 0);   // d_{2,1} + d_{3,1} = d_{1,2}
    ok = ok && has(5, 0, 7, 1, 12, 2);  // d_{1,1} + d_{2,2} = d_{3,2}
    ok = ok && min_distance(tb4lh(uniform_design(3, 3)), 8).d_min == 6;
    report(4, "a=3 w=3 hand-picked: d_min 4 with both length-6 witnesses vs uniform d_min 6", ok);
}

// 5. Structural property suite over >= 200 randomized designs.
void criterion5() {
    std::mt19937_64 rng(20240601);
    int checked = 0, violations = 0;
    while (checked < 200) {
        int a = 2 + static_cast<int>(rng() % 7);   // 2..8
        int w = 2 + static_cast<int>(rng() % 3);   // 2..4
        long long s_size = 1LL * a * w * (w - 1) / 2;
        int max_diff = static_cast<int>(s_size + 2 + rng() % (s_size + 4));
        DifferenceDesign d;
        try {
            d = random_design(a, w, max_diff, rng(), false, 20000);
        } catch (const SearchExhausted&) {
            continue;
        }
        ++checked;
        auto sf = syndrome_former(d);
        bool ok = sf.lh >= lh_lower_bound(a, w);

        const int n_blocks = std::max(2 * sf.lh, sf.lh + 4);
        auto h = tail_biting_matrix(d, n_blocks);
        auto g = girth(h);
        ok = ok && (!g.girth.has_value() || *g.girth >= 6);  // 4-cycle-free by construction

        if (w == 2) {
            auto rep = min_distance(h, 2 * w);
            ok = ok && rep.d_min.has_value() && g.girth.has_value() &&
                 *rep.d_min == *g.girth / 2;  // d_min = girth/2 when w = 2
            ok = ok && *rep.d_min <= 2 * w;
        } else if (w == 3) {
            auto rep = min_distance(h, 2 * w);
            ok = ok && rep.d_min.has_value() && *rep.d_min % 2 == 0  // all weights even
                 && *rep.d_min >= 4                                  // no weight-2 words
                 && *rep.d_min <= 2 * w;
        } else {
            // w=4: exhibit a weight <= 2w codeword from the circulant-pair
            // construction to confirm d_min <= 2w without a depth-8 search.
            // Column 0 carries the row offsets of base column 1 and vice
            // versa; the two circulant blocks commute, so the sum cancels.
            BitVec cw(h.cols, 0);
            auto sfh = syndrome_former(d);
            for (int off : sfh.hs.row_ones[1]) cw[(off % n_blocks) * a + 0] ^= 1;
            for (int off : sfh.hs.row_ones[0]) cw[(off % n_blocks) * a + 1] ^= 1;
            int weight = 0;
            for (auto b : cw) weight += b;
            ok = ok && weight > 0 && weight <= 2 * w && syndrome_is_zero(h, cw);
        }
        if (!ok) {
            ++violations;
            std::cerr << "  violation at a=" << a << " w=" << w << " design "
                      << design_to_json(d).dump() << "\n";
        }
        if (checked % 50 == 0) std::cerr << "  criterion 5: " << checked << "/200 designs\n";
    }
    report(5, "structural property suite over 200 random designs",
           violations == 0, std::to_string(violations) + " violations");
}

// 6. Minimum-weight codeword count within a factor 2 of C(a,2) * n / a.
void criterion6() {
    struct Case {
        DifferenceDesign d;
        int n_blocks;
    };
    std::vector<Case> cases = {
        {uniform_design(2, 3), 20}, {uniform_design(2, 3), 32},
        {kDesc42, 20},            {kDesc42, 40},
        {DifferenceDesign{3, 2, {{3}, {2}, {1}}, "random", {}}, 16},
        {DifferenceDesign{5, 2, {{5}, {4}, {3}, {2}, {1}}, "random", {}}, 24},
        {uniform_design(3, 3), 48},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        auto h = tail_biting_matrix(c.d, c.n_blocks);
        auto rep = min_distance(h, 2 * c.d.w);
        double expect = 0.5 * c.d.a * (c.d.a - 1) * c.n_blocks;  // C(a,2) * n / a
        double ratio = rep.multiplicity / expect;
        detail += (detail.empty() ? "" : ", ") + std::to_string(ratio).substr(0, 4);
        ok = ok && rep.d_min.has_value() && ratio >= 0.5 && ratio <= 2.0;
    }
    report(6, "A_dmin within factor 2 of C(a,2)*n/a on 7 tail-biting codes", ok,
           "ratios " + detail);
}

// 7. Search vs exhaustive oracle on every feasible (k <= 24) test code.
void criterion7() {
    struct Case {
        DifferenceDesign d;
        int n_blocks;
    };
    std::vector<Case> cases = {
        {uniform_design(2, 2), 8},  {uniform_design(2, 2), 11}, {uniform_design(2, 3), 10},
        {uniform_design(2, 3), 12}, {uniform_design(3, 2), 8},  {uniform_design(3, 2), 10},
        {kDesc42, 5},             {kDesc42, 6},             {uniform_design(2, 2), 14},
    };
    bool ok = true;
    for (const auto& c : cases) {
        auto h = tail_biting_matrix(c.d, c.n_blocks);
        int k = h.cols - rank_gf2(h);
        if (k > 24) {
            ok = false;
            continue;
        }
        auto search = min_distance(h, 2 * c.d.w);
        auto oracle = min_distance_oracle(h);
        bool agree = search.d_min == oracle.d_min && search.multiplicity == oracle.multiplicity;
        if (oracle.d_min && *oracle.d_min > 2 * c.d.w)
            agree = !search.d_min.has_value();  // capped search may only say "> cap"
        ok = ok && agree;
    }
    report(7, "min_distance equals the exhaustive oracle on all k <= 24 codes", ok);
}

// 8. Every finite window of H_conv has full row rank.
void criterion8() {
    std::mt19937_64 rng(77);
    bool ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        int a = 2 + static_cast<int>(rng() % 7);
        int w = 2 + static_cast<int>(rng() % 3);
        DifferenceDesign d;
        try {
            d = random_design(a, w, 3 * a * w * w, rng(), false, 20000);
        } catch (const SearchExhausted&) {
            --trial;
            continue;
        }
        int n = 1 + static_cast<int>(rng() % 60);
        auto h = conv_window(d, n);
        ok = ok && rank_gf2(h) == n;
    }
    report(8, "full row rank of 50 random conv windows", ok);
}

// 9. Codec round trip: noiseless decode of 1000 random streams; weak single error corrected.
void criterion9() {
    std::mt19937_64 rng(2718);
    bool ok = true;
    std::vector<DifferenceDesign> designs = {uniform_design(4, 2), uniform_design(3, 3),
                                             uniform_design(8, 3)};
    for (int trial = 0; trial < 1000; ++trial) {
        const auto& d = designs[trial % designs.size()];
        const int n = 20;
        std::vector<BitVec> info(n, BitVec(d.a - 1));
        for (auto& blk : info)
            for (auto& b : blk) b = static_cast<std::uint8_t>(rng() & 1);
        BitVec cw;
        for (const auto& blk : encode_stream(d, info)) cw.insert(cw.end(), blk.begin(), blk.end());
        std::vector<double> llr(cw.size());
        for (std::size_t i = 0; i < cw.size(); ++i) llr[i] = cw[i] ? -20.0 : 20.0;
        auto h = conv_window(d, n);
        auto res = decode_sum_product(h, llr);
        bool good = res.converged && res.hard_bits == cw;
        if (good && trial % 10 == 0) {
            // flip one bit weakly and require correction
            std::size_t pos = rng() % cw.size();
            llr[pos] = cw[pos] ? 0.5 : -0.5;
            auto res2 = decode_sum_product(h, llr);
            good = res2.converged && res2.hard_bits == cw;
        }
        ok = ok && good;
    }
    report(9, "noiseless round trip on 1000 streams, weak single errors corrected", ok);
}

// 10. Channel calibration and cross-parallelism reproducibility.
void criterion10() {
    const std::size_t n = 1'000'000;
    const double sigma2 = awgn_sigma2(5.0, 0.875);
    auto y = awgn_channel(std::vector<double>(n, 1.0), sigma2, 314159);
    double sum = 0.0, sum2 = 0.0;
    for (double v : y) {
        sum += v - 1.0;
        sum2 += (v - 1.0) * (v - 1.0);
    }
    double var = sum2 / n - (sum / n) * (sum / n);
    bool ok = std::abs(var - sigma2) / sigma2 < 0.01;

    auto d = uniform_design(4, 2);
    SimConfig c1;
    c1.n_blocks = 60;
    c1.guard_blocks = 8;
    c1.stop = {20, 100};
    c1.threads = 1;
    SimConfig c4 = c1;
    c4.threads = 4;
    auto r1 = run_ber_point(d, 4.0, c1, 99);
    auto r4 = run_ber_point(d, 4.0, c4, 99);
    ok = ok && r1.bit_errors == r4.bit_errors && r1.frame_errors == r4.frame_errors &&
         r1.frames == r4.frames && r1.mean_iterations == r4.mean_iterations;
    report(10, "AWGN variance within 1% at 1e6 samples; sim reproducible across workers", ok,
           "relative variance error " + std::to_string(std::abs(var - sigma2) / sigma2));
}

// 11. Waterfall substitute: uniform a=8 w=3 beats uncoded BPSK at 5 dB and the
// 3..6 dB sweep is non-increasing within 3 binomial standard errors.
void criterion11() {
    auto d = uniform_design(8, 3);
    SimConfig cfg;                 // n_blocks 20*L_h = 640, guard L_h = 32
    cfg.stop = {100, 1500};
    auto t0 = std::chrono::steady_clock::now();
    std::vector<SimRecord> recs = sweep(d, {3.0, 4.0, 5.0, 6.0}, cfg, 424242, [&](const SimRecord& r) {
        std::cerr << "  criterion 11: ebno=" << r.ebno_db << " ber=" << r.ber << " fer=" << r.fer
                  << " frames=" << r.frames << " ("
                  << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                  << "s)\n";
    });

    const double uncoded_5db = q_func(std::sqrt(2.0 * std::pow(10.0, 0.5)));
    const SimRecord& at5 = recs[2];
    bool ok = at5.ber < uncoded_5db;

    for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto& prev = recs[i - 1];
        const auto& cur = recs[i];
        double se = std::sqrt(std::max(prev.ber * (1.0 - prev.ber) / prev.info_bits_counted, 0.0));
        ok = ok && cur.ber <= prev.ber + 3.0 * se;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "ber@5dB %.3g < uncoded %.3g", at5.ber, uncoded_5db);
    report(11, "a=8 w=3 beats uncoded BPSK at 5 dB, sweep non-increasing", ok, buf);
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::string(argv[1]) == "--skip-slow";
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (quick)
        std::printf("SKIP  criterion 11 (--skip-slow)\n");
    else
        criterion11();
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    return failures ? 1 : 0;
}
