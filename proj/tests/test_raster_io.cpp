#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarcoast/error.hpp"
#include "sarcoast/raster_io.hpp"

using namespace sarcoast;
namespace fs = std::filesystem;

namespace {

class RasterIo : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("sarcoast_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path file(const std::string& name) const { return dir_ / name; }

    void write_bytes(const fs::path& p, const std::string& bytes) const {
        std::ofstream out(p, std::ios::binary);
        out << bytes;
    }

    std::string read_bytes(const fs::path& p) const {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), {}};
    }

    fs::path dir_;
};

}  // namespace

TEST_F(RasterIo, PgmClampsZero) {
    write_bytes(file("a.pgm"), std::string("P5\n2 2\n255\n") + std::string{'\0', char(128), char(255), char(64)});
    const auto img = read_raster(file("a.pgm"), RasterFormat::pgm);
    EXPECT_DOUBLE_EQ(img.data(0, 0), 1e-6 * 255.0);
    EXPECT_EQ(img.data(0, 1), 128.0);
    EXPECT_EQ(img.data(1, 0), 255.0);
    EXPECT_EQ(img.data(1, 1), 64.0);
}

TEST_F(RasterIo, PgmSixteenBitAndComments) {
    write_bytes(file("b.pgm"), std::string("P5\n# note\n2 1\n# more\n65535\n") + std::string{char(0x01), char(0x02), char(0xff), char(0xfe)});
    const auto pgm = read_pgm(file("b.pgm"));
    EXPECT_EQ(pgm.max_value, 65535);
    EXPECT_EQ(pgm.pixels(0, 0), 0x0102);
    EXPECT_EQ(pgm.pixels(0, 1), 0xfffe);
}

TEST_F(RasterIo, PgmErrors) {
    write_bytes(file("t.pgm"), std::string("P5\n10 10\n255\n") + std::string(99, 'x'));
    EXPECT_THROW(read_raster(file("t.pgm"), RasterFormat::pgm), FormatError);
    write_bytes(file("m.pgm"), std::string("P2\n2 2\n255\n1 2 3 4\n"));
    EXPECT_THROW(read_raster(file("m.pgm"), RasterFormat::pgm), FormatError);
    write_bytes(file("z.pgm"), std::string("P5\n2 2\n255\n") + std::string(4, '\0'));
    EXPECT_THROW(read_raster(file("z.pgm"), RasterFormat::pgm), FormatError);
    EXPECT_THROW(read_raster(file("missing.pgm"), RasterFormat::pgm), IoError);
}

TEST_F(RasterIo, RawF32BitExact) {
    Grid<float> g(3, 2, 0.0f);
    const float vals[] = {1.5f, 3.25e-7f, 8.0f, 1e30f, 0.1f, 77.7f};
    std::copy(std::begin(vals), std::end(vals), g.values().begin());
    write_rawf32(file("x.f32"), g);
    const auto bytes = read_bytes(file("x.f32"));
    ASSERT_EQ(bytes.size(), 24u);
    std::uint32_t first = 0;
    std::memcpy(&first, bytes.data(), 4);
    if constexpr (std::endian::native == std::endian::little) EXPECT_EQ(first, std::bit_cast<std::uint32_t>(1.5f));
    const auto side = nlohmann::json::parse(read_bytes(sidecar_path(file("x.f32"))));
    EXPECT_EQ(side["width"], 3);
    EXPECT_EQ(side["height"], 2);

    EXPECT_EQ(read_rawf32(file("x.f32")), g);
    const auto img = read_raster(file("x.f32"), RasterFormat::rawf32);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(img.data[i], static_cast<double>(vals[i]));
}

TEST_F(RasterIo, RawF32SizeMismatch) {
    write_rawf32(file("y.f32"), Grid<float>(4, 4, 1.0f));
    write_bytes(sidecar_path(file("y.f32")), R"({"width": 5, "height": 4})");
    EXPECT_THROW(read_rawf32(file("y.f32")), FormatError);
}

TEST_F(RasterIo, MaskBytesAndRoundTrip) {
    write_mask(BinaryMask(2, 2, LandClass::land), file("l.pgm"));
    const auto s = read_bytes(file("l.pgm"));
    EXPECT_EQ(s.substr(s.size() - 4), std::string(4, char(255)));

    BinaryMask chk(5, 3, LandClass::water);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 5; ++c) chk(r, c) = (r + c) % 2 ? LandClass::land : LandClass::water;
    }
    write_mask(chk, file("c.pgm"));
    const auto pgm = read_pgm(file("c.pgm"));
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 5; ++c) EXPECT_EQ(pgm.pixels(r, c), (r + c) % 2 ? 255 : 0);
    }
    EXPECT_EQ(read_mask(file("c.pgm")), chk);
}

TEST_F(RasterIo, PgmWriteReadIdentity) {
    Grid<std::uint8_t> g(17, 9, 0);
    std::mt19937 rng(3);
    for (auto& v : g.values()) v = static_cast<std::uint8_t>(rng());
    write_pgm(file("g.pgm"), g);
    const auto back = read_pgm(file("g.pgm"));
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(back.pixels[i], g[i]);
}

TEST_F(RasterIo, LabelsRoundTrip) {
    LabelGrid g(6, 5, 1);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<int>(i * 7919 % 5000) + 1;
    write_labels(g, file("l.f32"));
    EXPECT_EQ(read_labels(file("l.f32")), g);
}

TEST_F(RasterIo, LabelVisualisationMarksLabelChanges) {
    SarImage img{Grid<double>(6, 4, 1.0)};
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = 1.0 + static_cast<double>(i % 5);
    SuperpixelMap one;
    one.K = 1;
    one.labels = LabelGrid(6, 4, 1);
    const auto v1 = label_visualization(one, img);
    for (std::size_t i = 0; i < v1.size(); ++i) {
        EXPECT_EQ(v1[i], static_cast<std::uint8_t>(std::lround((img.data[i] - 1.0) / 4.0 * 255.0)));
    }

    SuperpixelMap two = one;
    two.K = 2;
    for (int r = 0; r < 4; ++r) {
        for (int c = 3; c < 6; ++c) two.labels(r, c) = 2;
    }
    const auto v2 = label_visualization(two, img);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 6; ++c) {
            if (c == 2 || c == 3) EXPECT_EQ(v2(r, c), 255);
            else EXPECT_EQ(v2(r, c), v1(r, c));
        }
    }
}

TEST_F(RasterIo, WorldFile) {
    write_bytes(file("id.wld"), "1\n0\n0\n1\n0\n0\n");
    const auto id = read_world_file(file("id.wld"));
    EXPECT_EQ(id.apply(3, 2).x, 3.0);
    EXPECT_EQ(id.apply(3, 2).y, 2.0);

    write_bytes(file("utm.wld"), "10\n0\n0\n-10\n500000\n4000000\n");
    const auto wt = read_world_file(file("utm.wld"));
    EXPECT_EQ(wt.A, 10.0);
    EXPECT_EQ(wt.E, -10.0);
    EXPECT_EQ(wt.C, 500000.0);
    EXPECT_EQ(wt.F, 4000000.0);
    EXPECT_EQ(wt.apply(3, 2).x, 500030.0);
    EXPECT_EQ(wt.apply(3, 2).y, 3999980.0);
    EXPECT_EQ(wt.invert(500030.0, 3999980.0).x, 3.0);
    EXPECT_EQ(wt.invert(500030.0, 3999980.0).y, 2.0);

    write_bytes(file("five.wld"), "1\n0\n0\n1\n0\n");
    EXPECT_THROW(read_world_file(file("five.wld")), FormatError);
    write_bytes(file("nan.wld"), "1\n0\nabc\n1\n0\n0\n");
    EXPECT_THROW(read_world_file(file("nan.wld")), FormatError);
    write_bytes(file("sing.wld"), "1\n1\n1\n1\n0\n0\n");
    EXPECT_THROW(read_world_file(file("sing.wld")), DomainError);
}

TEST_F(RasterIo, GeoJsonPixelCoordinates) {
    const std::vector<Chain> chains{{{1, 1}, {1, 2}}};
    export_coastline(chains, std::nullopt, file("c.geojson"), ExportFormat::geojson);
    const auto j = nlohmann::json::parse(read_bytes(file("c.geojson")));
    EXPECT_EQ(j["type"], "FeatureCollection");
    const auto& geom = j["features"][0]["geometry"];
    EXPECT_EQ(geom["type"], "LineString");
    EXPECT_EQ(geom["coordinates"], nlohmann::json::parse("[[1,1],[2,1]]"));
}

TEST_F(RasterIo, IdentityTransformKeepsCoordinates) {
    const std::vector<Chain> chains{{{4, 2}, {5, 3}, {5, 4}}};
    export_coastline(chains, std::nullopt, file("a.geojson"), ExportFormat::geojson);
    export_coastline(chains, WorldTransform{}, file("b.geojson"), ExportFormat::geojson);
    const auto a = nlohmann::json::parse(read_bytes(file("a.geojson")));
    const auto b = nlohmann::json::parse(read_bytes(file("b.geojson")));
    EXPECT_EQ(a["features"], b["features"]);
}

TEST_F(RasterIo, CsvAndGeoJsonEncodeSameSequence) {
    const std::vector<Chain> chains{{{3, 3}, {3, 4}, {4, 5}}, {{10, 1}}, {{7, 7}, {8, 8}}};
    const WorldTransform wt{10, 0, 500000, 0, -10, 4000000};
    for (const auto& t : {std::optional<WorldTransform>{}, std::optional<WorldTransform>{wt}}) {
        export_coastline(chains, t, file("c.csv"), ExportFormat::csv);
        export_coastline(chains, t, file("c.geojson"), ExportFormat::geojson);
        EXPECT_EQ(read_coastline(file("c.csv"), ExportFormat::csv, t), chains);
        EXPECT_EQ(read_coastline(file("c.geojson"), ExportFormat::geojson, t), chains);
    }
    export_coastline(chains, wt, file("w.csv"), ExportFormat::csv);
    std::ifstream in(file("w.csv"));
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header, "chain_id,seq,col,row,x,y");
    EXPECT_EQ(first, "0,0,3,3,500030,3999970");
}

TEST_F(RasterIo, FormatParsing) {
    EXPECT_EQ(parse_raster_format("rawf32"), RasterFormat::rawf32);
    EXPECT_EQ(parse_export_format("csv"), ExportFormat::csv);
    EXPECT_THROW(parse_raster_format("tiff"), ConfigError);
    EXPECT_EQ(export_format_for("x/coast.csv"), ExportFormat::csv);
    EXPECT_EQ(export_format_for("x/coast.geojson"), ExportFormat::geojson);
}
