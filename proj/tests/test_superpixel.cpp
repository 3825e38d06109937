#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "sarcoast/error.hpp"
#include "sarcoast/superpixel.hpp"

using namespace sarcoast;

namespace {

// Columns before `split` drawn from `left`, the rest from `right`.
SarImage split_image(int w, int h, GgdParams left, GgdParams right, std::uint64_t seed, int split = -1) {
    if (split < 0) split = w / 2;
    Rng rng(seed);
    const auto a = ggd_sample(left, static_cast<std::size_t>(w * h), rng);
    const auto b = ggd_sample(right, static_cast<std::size_t>(w * h), rng);
    SarImage img{Grid<double>(w, h, 0.0)};
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t i = img.data.index(r, c);
            img.data[i] = c < split ? a[i] : b[i];
        }
    }
    return img;
}

// Number of 4-connected fragments per label by breadth-first flood fill.
std::map<int, int> fragments_oracle(const LabelGrid& g) {
    std::vector<char> seen(g.size(), 0);
    std::map<int, int> out;
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) {
            if (seen[g.index(r, c)]) continue;
            const int lab = g(r, c);
            ++out[lab];
            std::queue<std::pair<int, int>> q;
            q.push({r, c});
            seen[g.index(r, c)] = 1;
            while (!q.empty()) {
                auto [y, x] = q.front();
                q.pop();
                const int dy[] = {-1, 1, 0, 0}, dx[] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int ny = y + dy[k], nx = x + dx[k];
                    if (ny < 0 || nx < 0 || ny >= g.height() || nx >= g.width()) continue;
                    if (seen[g.index(ny, nx)] || g(ny, nx) != lab) continue;
                    seen[g.index(ny, nx)] = 1;
                    q.push({ny, nx});
                }
            }
        }
    }
    return out;
}

SuperpixelMap blank_map(const LabelGrid& labels, int K) {
    SuperpixelMap spm;
    spm.labels = labels;
    spm.K = K;
    spm.theta.assign(static_cast<std::size_t>(K), SuperpixelTheta{});
    spm.omega.assign(static_cast<std::size_t>(K), 1.0 / K);
    return spm;
}

}  // namespace

TEST(EngineConfig, Validation) {
    EXPECT_THROW((EngineConfig{.K = 1}.validate()), ConfigError);
    EXPECT_THROW((EngineConfig{.alpha = 0.5}.validate()), ConfigError);
    EXPECT_THROW((EngineConfig{.max_iters = 0}.validate()), ConfigError);
    EXPECT_NO_THROW(EngineConfig{}.validate());
}

TEST(InitGrid, HundredSquareCells) {
    const SarImage img = split_image(100, 100, {1, 1, 1}, {1, 8, 6}, 1);
    const auto spm = init_grid(img, {.K = 100});
    const auto counts = label_counts(spm.labels, 100);
    for (auto n : counts) EXPECT_EQ(n, 100u);
    for (double w : spm.omega) EXPECT_DOUBLE_EQ(w, 0.01);
    // Every cell is an aligned 10x10 block.
    for (int r = 0; r < 100; ++r) {
        for (int c = 0; c < 100; ++c) EXPECT_EQ(spm.labels(r, c), spm.labels(r / 10 * 10, c / 10 * 10));
    }
}

TEST(InitGrid, FourQuadrants) {
    const SarImage img = split_image(10, 10, {1, 1, 1}, {1, 1, 1}, 2);
    const auto spm = init_grid(img, {.K = 4});
    std::set<int> quadrant_labels;
    for (int qr = 0; qr < 2; ++qr) {
        for (int qc = 0; qc < 2; ++qc) {
            const int lab = spm.labels(qr * 5, qc * 5);
            quadrant_labels.insert(lab);
            for (int r = 0; r < 5; ++r) {
                for (int c = 0; c < 5; ++c) EXPECT_EQ(spm.labels(qr * 5 + r, qc * 5 + c), lab);
            }
        }
    }
    EXPECT_EQ(quadrant_labels.size(), 4u);
}

TEST(InitGrid, NonDivisibleLargeImage) {
    SarImage img{Grid<double>(723, 970, 1.0)};
    Rng rng(1);
    const auto s = ggd_sample({1, 2, 3}, img.data.size(), rng);
    std::copy(s.begin(), s.end(), img.data.values().begin());
    const auto spm = init_grid(img, {.K = 2000});
    const auto frags = fragments_oracle(spm.labels);
    EXPECT_EQ(frags.size(), 2000u);
    for (const auto& [lab, n] : frags) {
        EXPECT_GE(lab, 1);
        EXPECT_LE(lab, 2000);
        EXPECT_EQ(n, 1);
    }
}

TEST(InitGrid, TooManySuperpixels) {
    SarImage img{Grid<double>(12, 12, 1.0)};
    EXPECT_THROW(init_grid(img, {.K = 17}), PreconditionError);
    EXPECT_NO_THROW(init_grid(img, {.K = 16}));
}

TEST(UpdateOmega, ClosedFormExamples) {
    LabelGrid g(10, 1, 1);
    for (int c = 7; c < 10; ++c) g(0, c) = 2;
    auto spm = blank_map(g, 2);
    update_omega(spm, 2.0);
    EXPECT_DOUBLE_EQ(spm.omega[0], 8.0 / 12.0);
    EXPECT_DOUBLE_EQ(spm.omega[1], 4.0 / 12.0);
    update_omega(spm, 1.0);
    EXPECT_EQ(spm.omega[0], 0.7);
    EXPECT_EQ(spm.omega[1], 0.3);
}

TEST(UpdateOmega, SumsToOneForRandomCounts) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const int K = 2 + static_cast<int>(rng() % 40);
        LabelGrid g(37, 23, 1);
        for (auto& v : g.values()) v = 1 + static_cast<int>(rng() % static_cast<unsigned>(K));
        auto spm = blank_map(g, K);
        for (double alpha : {1.0, 1.5, 2.0}) {
            update_omega(spm, alpha);
            const double s = std::accumulate(spm.omega.begin(), spm.omega.end(), 0.0);
            EXPECT_NEAR(s, 1.0, 1e-12);
            for (double w : spm.omega) EXPECT_GE(w, 0.0);
        }
    }
}

TEST(UpdateLabels, DominantNeighbourWins) {
    LabelGrid g(6, 6, 1);
    for (int r = 0; r < 6; ++r) {
        for (int c = 3; c < 6; ++c) g(r, c) = 2;
    }
    auto spm = blank_map(g, 2);
    const SpatialParams shared{{2.5, 2.5}, {100.0, 0.0, 100.0}};
    spm.theta[0] = {{1, 1, 1}, shared, true};
    spm.theta[1] = {{1, 50, 100}, shared, true};
    SarImage img{Grid<double>(6, 6, 1.0)};
    for (int r = 0; r < 6; ++r) {
        for (int c = 3; c < 6; ++c) img.data(r, c) = 100.0;
    }
    img.data(2, 2) = 100.0;
    ASSERT_GT(pixel_score(img, spm, 2, 2, 2) - pixel_score(img, spm, 2, 2, 1), 20.0);
    const double changed = update_labels(img, spm);
    EXPECT_EQ(spm.labels(2, 2), 2);
    EXPECT_DOUBLE_EQ(changed, 1.0 / 36.0);
}

TEST(UpdateLabels, ExhaustiveRescoringOracle) {
    // Texture edge at column 4, off the 6-pixel cell grid.
    const SarImage img = split_image(12, 12, {1, 1, 1}, {1, 8, 6}, 77, 4);
    auto spm = init_grid(img, {.K = 4});
    const SuperpixelMap before = spm;
    const double changed = update_labels(img, spm);

    std::size_t n_changed = 0;
    for (int r = 0; r < 12; ++r) {
        for (int c = 0; c < 12; ++c) {
            const int own = before.labels(r, c);
            std::set<int> cands{own};
            const int dr[] = {-1, 0, 0, 1}, dc[] = {0, -1, 1, 0};
            for (int k = 0; k < 4; ++k) {
                const int nr = r + dr[k], nc = c + dc[k];
                if (before.labels.contains(nr, nc)) cands.insert(before.labels(nr, nc));
            }
            int best = own;
            double best_score = pixel_score(img, before, r, c, own);
            for (int lab : cands) {
                const double s = pixel_score(img, before, r, c, lab);
                if (s > best_score) {
                    best = lab;
                    best_score = s;
                }
            }
            EXPECT_EQ(spm.labels(r, c), best) << r << "," << c;
            const int got = spm.labels(r, c);
            EXPECT_GE(pixel_score(img, before, r, c, got), pixel_score(img, before, r, c, own));
            n_changed += got != own;
        }
    }
    EXPECT_GT(n_changed, 0u);
    EXPECT_DOUBLE_EQ(changed, static_cast<double>(n_changed) / 144.0);
}

TEST(UpdateLabels, ObjectiveNonDecreasingAndFixedPoint) {
    const SarImage img = split_image(32, 32, {1, 1, 1}, {1, 8, 6}, 4);
    auto spm = init_grid(img, {.K = 8});
    double prev = posterior_objective(img, spm);
    int sweeps = 0;
    while (sweeps < 200) {
        const double ch = update_labels(img, spm);
        const double now = posterior_objective(img, spm);
        EXPECT_GE(now, prev - 1e-9 * std::fabs(prev));
        prev = now;
        ++sweeps;
        if (ch == 0.0) break;
    }
    ASSERT_LT(sweeps, 200);
    const LabelGrid fixed = spm.labels;
    EXPECT_EQ(update_labels(img, spm), 0.0);
    EXPECT_EQ(spm.labels, fixed);
}

TEST(UpdateLabels, ScaleInvariantDecisions) {
    const SarImage img = split_image(24, 24, {1, 1, 1}, {1.5, 6, 4}, 21);
    auto a = init_grid(img, {.K = 6});
    auto b = a;
    SarImage scaled = img;
    for (auto& v : scaled.data.values()) v *= 37.0;
    for (auto& t : b.theta) t.ggd.sigma *= 37.0;
    update_labels(img, a);
    update_labels(scaled, b);
    EXPECT_EQ(a.labels, b.labels);
}

TEST(UpdateTheta, RecoversMemberDistributionAndFallbacks) {
    const int w = 100, h = 101;
    LabelGrid g(w, h, 1);
    for (int c = 0; c < 5; ++c) g(100, c) = 2;
    SarImage img{Grid<double>(w, h, 1.0)};
    Rng rng(99);
    const auto s = ggd_sample({1, 4, 2}, img.data.size(), rng);
    std::copy(s.begin(), s.end(), img.data.values().begin());

    auto spm = blank_map(g, 3);
    const GgdParams sentinel{3, 3, 3};
    spm.theta[1].ggd = sentinel;
    spm.theta[2].ggd = sentinel;
    update_theta(img, spm, {.K = 3, .min_est_pixels = 30});

    const auto& p = spm.theta[0].ggd;
    EXPECT_NEAR(p.v, 1.0, 0.05);
    EXPECT_NEAR(p.kappa / 4.0, 1.0, 0.05);
    EXPECT_NEAR(p.sigma / 2.0, 1.0, 0.05);
    EXPECT_EQ(spm.theta[1].ggd, sentinel);
    EXPECT_DOUBLE_EQ(spm.theta[1].spatial.mean.x, 2.0);
    EXPECT_DOUBLE_EQ(spm.theta[1].spatial.mean.y, 100.0);
    EXPECT_TRUE(spm.theta[1].active);
    EXPECT_FALSE(spm.theta[2].active);
    EXPECT_EQ(spm.theta[2].ggd, sentinel);
}

TEST(EnforceConnectivity, ConnectedMapUnchanged) {
    LabelGrid g(8, 8, 1);
    for (int r = 4; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) g(r, c) = 2;
    }
    auto spm = blank_map(g, 2);
    EXPECT_EQ(enforce_connectivity(spm), 0u);
    EXPECT_EQ(spm.labels, g);
}

TEST(EnforceConnectivity, StrayPixelAbsorbed) {
    LabelGrid g(9, 9, 7);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) g(r, c) = 3;
    }
    g(6, 6) = 3;
    auto spm = blank_map(g, 7);
    EXPECT_EQ(enforce_connectivity(spm), 1u);
    EXPECT_EQ(spm.labels(6, 6), 7);
    EXPECT_EQ(spm.labels(1, 1), 3);
}

TEST(EnforceConnectivity, RandomGridBecomesConnected) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        LabelGrid g(50, 50, 1);
        for (auto& v : g.values()) v = 1 + static_cast<int>(rng() % 12);
        auto spm = blank_map(g, 12);
        enforce_connectivity(spm);
        for (const auto& [lab, n] : fragments_oracle(spm.labels)) EXPECT_EQ(n, 1) << "label " << lab;
        const auto fc = fragment_counts(spm.labels, 12);
        for (int n : fc) EXPECT_LE(n, 1);
    }
}

TEST(Segment, UniformImageStaysValidPartition) {
    SarImage img{Grid<double>(16, 16, 5.0)};
    const auto spm = segment(img, {.K = 4});
    const auto counts = label_counts(spm.labels, 4);
    EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), 256u);
    for (const auto& [lab, n] : fragments_oracle(spm.labels)) EXPECT_EQ(n, 1);
}

TEST(Segment, TwoTextureBoundaryAdherence) {
    const SarImage img = split_image(64, 64, {1, 8, 6}, {1, 1, 1}, 5);
    const auto spm = segment(img, {.K = 16});
    const auto bnd = superpixel_boundary_mask(spm.labels);
    int hit = 0, total = 0;
    for (int r = 0; r < 64; ++r) {
        for (int c : {31, 32}) {
            ++total;
            bool near = false;
            for (int dr = -1; dr <= 1 && !near; ++dr) {
                for (int dc = -1; dc <= 1 && !near; ++dc) {
                    if (dr != 0 && dc != 0) continue;
                    near = spm.labels.contains(r + dr, c + dc) && bnd(r + dr, c + dc);
                }
            }
            hit += near;
        }
    }
    EXPECT_GE(static_cast<double>(hit) / total, 0.95);
    for (const auto& [lab, n] : fragments_oracle(spm.labels)) EXPECT_EQ(n, 1);
    const double s = std::accumulate(spm.omega.begin(), spm.omega.end(), 0.0);
    EXPECT_NEAR(s, 1.0, 1e-9);
}

TEST(Segment, Deterministic) {
    const SarImage img = split_image(48, 48, {1, 8, 6}, {1, 1, 1}, 6);
    const auto a = segment(img, {.K = 9, .seed = 3});
    const auto b = segment(img, {.K = 9, .seed = 3});
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.change_trace, b.change_trace);
}

TEST(Helpers, BoundaryMaskMatchesLabelDifference) {
    LabelGrid g(5, 4, 1);
    for (int r = 0; r < 4; ++r) {
        for (int c = 2; c < 5; ++c) g(r, c) = 2;
    }
    const auto m = superpixel_boundary_mask(g);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 5; ++c) EXPECT_EQ(m(r, c), (c == 1 || c == 2) ? 1 : 0);
    }
}
