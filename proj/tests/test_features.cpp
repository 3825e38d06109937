#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "sarcoast/error.hpp"
#include "sarcoast/features.hpp"

using namespace sarcoast;

TEST(Entropy, Examples) {
    const std::vector<double> same(20, 3.3);
    EXPECT_EQ(superpixel_entropy(same, 0.0, 64.0), 0.0);
    const std::vector<double> two{0.5, 0.5, 10.5, 10.5};
    EXPECT_DOUBLE_EQ(superpixel_entropy(two, 0.0, 64.0), 1.0);
    std::vector<double> uniform;
    for (int b = 0; b < 64; ++b) uniform.push_back(b + 0.5);
    EXPECT_DOUBLE_EQ(superpixel_entropy(uniform, 0.0, 64.0), 6.0);
}

TEST(Entropy, MaximumValueLandsInLastBin) {
    const std::vector<double> ends{0.0, 64.0};
    EXPECT_DOUBLE_EQ(superpixel_entropy(ends, 0.0, 64.0), 1.0);
}

TEST(Entropy, BoundedByLogBins) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> v(1 + rng() % 500);
        for (auto& x : v) x = u(rng);
        const double s = superpixel_entropy(v, 0.0, 1.0, 16);
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 4.0 + 1e-12);
    }
}

TEST(Entropy, EmptyThrows) {
    EXPECT_THROW(superpixel_entropy(std::vector<double>{}, 0.0, 1.0), PreconditionError);
}

TEST(Median, Examples) {
    EXPECT_EQ(superpixel_median(std::vector<double>{1, 3, 2}), 2.0);
    EXPECT_EQ(superpixel_median(std::vector<double>{1, 2, 3, 10}), 2.5);
    EXPECT_THROW(superpixel_median(std::vector<double>{}), PreconditionError);
}

TEST(Median, ExponentialOracle) {
    Rng rng(2);
    EXPECT_NEAR(superpixel_median(ggd_sample({1, 1, 1}, 100'000, rng)), std::numbers::ln2, 0.01);
}

TEST(ClusterTwo, WellSeparatedRows) {
    const std::vector<FeatureRow> rows{{1, 0.5, 1.0}, {2, 0.6, 1.1}, {3, 5.5, 40.0}, {4, 5.4, 42.0}};
    const auto ca = cluster_two(rows);
    EXPECT_FALSE(ca.degenerate);
    EXPECT_EQ(ca.at(1), LandClass::water);
    EXPECT_EQ(ca.at(2), LandClass::water);
    EXPECT_EQ(ca.at(3), LandClass::land);
    EXPECT_EQ(ca.at(4), LandClass::land);
}

TEST(ClusterTwo, IdenticalRowsAreDegenerate) {
    const std::vector<FeatureRow> rows{{1, 2.0, 3.0}, {2, 2.0, 3.0}, {3, 2.0, 3.0}};
    const auto ca = cluster_two(rows);
    EXPECT_TRUE(ca.degenerate);
    EXPECT_EQ(ca.classes.size(), 3u);
}

TEST(ClusterTwo, TooFewRows) {
    const std::vector<FeatureRow> rows{{1, 2.0, 3.0}};
    EXPECT_THROW(cluster_two(rows), PreconditionError);
}

TEST(ClusterTwo, GaussianBlobsRecoveredExactly) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<FeatureRow> rows;
    std::vector<LandClass> truth;
    for (int i = 0; i < 200; ++i) {
        const bool land = i % 2 == 1;
        rows.push_back({i + 1, (land ? 10.0 : 4.0) + n(rng), (land ? 20.0 : 14.0) + n(rng)});
        truth.push_back(land ? LandClass::land : LandClass::water);
    }
    const auto ca = cluster_two(rows);
    for (int i = 0; i < 200; ++i) EXPECT_EQ(ca.at(i + 1), truth[static_cast<std::size_t>(i)]);
}

TEST(ClusterTwo, PermutationInvariant) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<FeatureRow> rows;
    for (int i = 0; i < 80; ++i) rows.push_back({i + 1, n(rng) + (i < 30 ? 0 : 3), n(rng) + (i < 30 ? 0 : 3)});
    const auto a = cluster_two(rows);
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto b = cluster_two(rows);
    EXPECT_EQ(a.classes, b.classes);
}

TEST(ClusterTwo, MonotoneTransformKeepsOrientation) {
    const std::vector<FeatureRow> rows{{1, 0.5, 1.0}, {2, 0.6, 1.1}, {3, 5.5, 40.0}, {4, 5.4, 42.0}};
    auto logged = rows;
    for (auto& r : logged) r.median = std::log(r.median) + 5.0;
    EXPECT_EQ(cluster_two(rows).classes, cluster_two(logged).classes);
}

TEST(BuildBinaryMask, SubstitutesClasses) {
    SuperpixelMap spm;
    spm.K = 2;
    spm.labels = LabelGrid(4, 4, 1);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) spm.labels(r, c) = (r + c) % 2 == 0 ? 1 : 2;
    }
    ClassAssignment ca;
    ca.classes = {{1, LandClass::water}, {2, LandClass::land}};
    const auto m = build_binary_mask(spm, ca);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) EXPECT_EQ(m(r, c), (r + c) % 2 == 0 ? LandClass::water : LandClass::land);
    }
    ca.classes = {{1, LandClass::water}, {2, LandClass::water}};
    const auto all_water = build_binary_mask(spm, ca);
    for (auto v : all_water.values()) EXPECT_EQ(v, LandClass::water);
    ca.classes = {{1, LandClass::water}};
    EXPECT_THROW(build_binary_mask(spm, ca), PreconditionError);
}

TEST(ComputeFeatures, SkipsEmptyAndMatchesDirectComputation) {
    SarImage img{Grid<double>(4, 2, 1.0)};
    for (int c = 0; c < 4; ++c) {
        img.data(0, c) = 1.0 + c;
        img.data(1, c) = 10.0 + c;
    }
    SuperpixelMap spm;
    spm.K = 3;
    spm.labels = LabelGrid(4, 2, 1);
    for (int c = 0; c < 4; ++c) spm.labels(1, c) = 3;
    const auto rows = compute_features(img, spm, 8);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].superpixel_id, 1);
    EXPECT_EQ(rows[1].superpixel_id, 3);
    EXPECT_DOUBLE_EQ(rows[0].median, 2.5);
    EXPECT_DOUBLE_EQ(rows[1].median, 11.5);
    const std::vector<double> top{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(rows[0].entropy, superpixel_entropy(top, 1.0, 13.0, 8));
}

TEST(FeaturesCsv, HeaderAndRows) {
    const auto path = std::filesystem::temp_directory_path() / "sarcoast_features_test.csv";
    const std::vector<FeatureRow> rows{{1, 0.5, 2.0}, {4, 1.25, 3.5}};
    write_features_csv(path, rows);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "superpixel_id,entropy,median");
    std::getline(in, line);
    EXPECT_EQ(line, "1,0.5,2");
    std::getline(in, line);
    EXPECT_EQ(line, "4,1.25,3.5");
    std::filesystem::remove(path);
}
