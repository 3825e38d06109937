#include "sarcoast/raster_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sarcoast/error.hpp"

namespace sarcoast {
namespace {

using json = nlohmann::json;

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::string& header, std::span<const unsigned char> payload) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    write_bytes(path, text, {});
}

// Shortest round-trip decimal representation.
std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

class PgmHeaderParser {
public:
    explicit PgmHeaderParser(std::span<const unsigned char> bytes) : bytes_(bytes) {}

    int next_int(const char* what) {
        skip_space_and_comments();
        long value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000) throw FormatError(std::string("PGM: ") + what + " too large");
            ++pos_;
            ++digits;
        }
        if (digits == 0) throw FormatError(std::string("PGM: malformed header, expected ") + what);
        return static_cast<int>(value);
    }

    std::size_t payload_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw FormatError("PGM: malformed header, missing separator before payload");
        }
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const unsigned char> bytes_;
    std::size_t pos_ = 2;
};

std::pair<int, int> read_sidecar(const std::filesystem::path& raw_path) {
    const auto side = sidecar_path(raw_path);
    std::ifstream in(side);
    if (!in) throw IoError("cannot open sidecar " + side.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError("sidecar " + side.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("width") || !j.contains("height") || !j["width"].is_number_integer() ||
        !j["height"].is_number_integer()) {
        throw FormatError("sidecar " + side.string() + " must hold integer width and height");
    }
    const int w = j["width"].get<int>();
    const int h = j["height"].get<int>();
    if (w <= 0 || h <= 0) throw FormatError("sidecar " + side.string() + ": non-positive dimensions");
    return {w, h};
}

SarImage clamp_to_image(Grid<double> data) {
    double max_value = 0.0;
    for (double v : data.values()) {
        if (!std::isfinite(v)) throw FormatError("raster contains non-finite samples");
        max_value = std::max(max_value, v);
    }
    if (!(max_value > 0.0)) throw FormatError("raster has no positive samples (all-zero image)");
    const double floor_value = kClampFraction * max_value;
    for (double& v : data.values()) {
        if (v <= 0.0) v = floor_value;
    }
    return {std::move(data), ChannelKind::amplitude};
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

RasterFormat parse_raster_format(const std::string& name) {
    const auto n = lower(name);
    if (n == "pgm") return RasterFormat::pgm;
    if (n == "rawf32") return RasterFormat::rawf32;
    throw ConfigError("unknown raster format '" + name + "' (expected pgm or rawf32)");
}

ExportFormat parse_export_format(const std::string& name) {
    const auto n = lower(name);
    if (n == "geojson") return ExportFormat::geojson;
    if (n == "csv") return ExportFormat::csv;
    throw ConfigError("unknown export format '" + name + "' (expected geojson or csv)");
}

ExportFormat export_format_for(const std::filesystem::path& path) {
    return lower(path.extension().string()) == ".csv" ? ExportFormat::csv : ExportFormat::geojson;
}

std::filesystem::path sidecar_path(const std::filesystem::path& raw_path) {
    auto p = raw_path;
    p += ".json";
    return p;
}

PgmImage read_pgm(const std::filesystem::path& path) {
    const auto bytes = read_bytes(path);
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw FormatError(path.string() + ": unsupported magic (expected binary PGM 'P5')");
    }
    PgmHeaderParser parser(bytes);
    const int w = parser.next_int("width");
    const int h = parser.next_int("height");
    const int maxval = parser.next_int("maxval");
    if (w <= 0 || h <= 0) throw FormatError(path.string() + ": non-positive dimensions");
    if (maxval < 1 || maxval > 65535) throw FormatError(path.string() + ": maxval out of range");
    const std::size_t offset = parser.payload_offset();

    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    if (bytes.size() < offset + n * sample_bytes) {
        throw FormatError(path.string() + ": truncated payload (" + std::to_string(bytes.size() - offset) +
                          " bytes for " + std::to_string(n) + " pixels)");
    }
    PgmImage img{Grid<std::uint16_t>(w, h, 0), maxval};
    for (std::size_t i = 0; i < n; ++i) {
        img.pixels[i] = sample_bytes == 1
                            ? bytes[offset + i]
                            : static_cast<std::uint16_t>((bytes[offset + 2 * i] << 8) | bytes[offset + 2 * i + 1]);
    }
    return img;
}

void write_pgm(const std::filesystem::path& path, const Grid<std::uint8_t>& pixels) {
    const std::string header =
        "P5\n" + std::to_string(pixels.width()) + " " + std::to_string(pixels.height()) + "\n255\n";
    write_bytes(path, header, {pixels.values().data(), pixels.size()});
}

Grid<float> read_rawf32(const std::filesystem::path& path) {
    const auto [w, h] = read_sidecar(path);
    const auto bytes = read_bytes(path);
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() != 4 * n) {
        throw FormatError(path.string() + ": payload holds " + std::to_string(bytes.size()) + " bytes, expected " +
                          std::to_string(4 * n));
    }
    Grid<float> out(w, h, 0.0f);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t word = static_cast<std::uint32_t>(bytes[4 * i]) |
                                   static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8 |
                                   static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16 |
                                   static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24;
        out[i] = std::bit_cast<float>(word);
    }
    return out;
}

void write_rawf32(const std::filesystem::path& path, const Grid<float>& data) {
    std::vector<unsigned char> payload(4 * data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto word = std::bit_cast<std::uint32_t>(data[i]);
        for (int b = 0; b < 4; ++b) payload[4 * i + static_cast<std::size_t>(b)] = static_cast<unsigned char>(word >> (8 * b));
    }
    write_bytes(path, "", payload);
    write_text(sidecar_path(path), json{{"width", data.width()}, {"height", data.height()}}.dump() + "\n");
}

void write_rawf32(const std::filesystem::path& path, const Grid<double>& data) {
    Grid<float> f(data.width(), data.height(), 0.0f);
    for (std::size_t i = 0; i < data.size(); ++i) f[i] = static_cast<float>(data[i]);
    write_rawf32(path, f);
}

SarImage read_raster(const std::filesystem::path& path, RasterFormat format) {
    if (format == RasterFormat::pgm) {
        const PgmImage pgm = read_pgm(path);
        Grid<double> data(pgm.pixels.width(), pgm.pixels.height(), 0.0);
        for (std::size_t i = 0; i < data.size(); ++i) data[i] = pgm.pixels[i];
        return clamp_to_image(std::move(data));
    }
    const Grid<float> raw = read_rawf32(path);
    Grid<double> data(raw.width(), raw.height(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = raw[i];
    return clamp_to_image(std::move(data));
}

void write_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    Grid<std::uint8_t> px(mask.width(), mask.height(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) px[i] = mask[i] == LandClass::land ? 255 : 0;
    write_pgm(path, px);
}

BinaryMask read_mask(const std::filesystem::path& path) {
    const PgmImage pgm = read_pgm(path);
    BinaryMask mask(pgm.pixels.width(), pgm.pixels.height(), LandClass::water);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = 2 * static_cast<int>(pgm.pixels[i]) > pgm.max_value ? LandClass::land : LandClass::water;
    }
    return mask;
}

void write_labels(const LabelGrid& labels, const std::filesystem::path& path) {
    Grid<float> f(labels.width(), labels.height(), 0.0f);
    for (std::size_t i = 0; i < labels.size(); ++i) f[i] = static_cast<float>(labels[i]);
    write_rawf32(path, f);
}

LabelGrid read_labels(const std::filesystem::path& path) {
    const Grid<float> f = read_rawf32(path);
    LabelGrid labels(f.width(), f.height(), 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] != std::floor(f[i]) || f[i] < 1.0f) throw FormatError(path.string() + ": labels must be positive integers");
        labels[i] = static_cast<std::int32_t>(f[i]);
    }
    return labels;
}

Grid<std::uint8_t> label_visualization(const SuperpixelMap& spm, const SarImage& img) {
    const auto values = img.data.values();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double range = *hi - *lo;
    Grid<std::uint8_t> out(img.width(), img.height(), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = range > 0.0 ? static_cast<std::uint8_t>(std::lround(255.0 * (values[i] - *lo) / range)) : 0;
    }
    const auto boundary = superpixel_boundary_mask(spm.labels);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (boundary[i]) out[i] = 255;
    }
    return out;
}

void write_label_visualization(const SuperpixelMap& spm, const SarImage& img, const std::filesystem::path& path) {
    write_pgm(path, label_visualization(spm, img));
}

void WorldTransform::validate() const {
    if (!std::isfinite(det()) || det() == 0.0) throw DomainError("world transform has a singular linear part");
}

Point2 WorldTransform::apply(double col, double row) const noexcept {
    return {A * col + B * row + C, D * col + E * row + F};
}

Point2 WorldTransform::invert(double x, double y) const {
    validate();
    const double dx = x - C;
    const double dy = y - F;
    return {(E * dx - B * dy) / det(), (A * dy - D * dx) / det()};
}

WorldTransform read_world_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open world file " + path.string());
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(b, e - b + 1);
        double v = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
            throw FormatError(path.string() + ": non-numeric line '" + token + "'");
        }
        values.push_back(v);
    }
    if (values.size() != 6) {
        throw FormatError(path.string() + ": world file needs 6 lines, found " + std::to_string(values.size()));
    }
    WorldTransform wt{values[0], values[2], values[4], values[1], values[3], values[5]};
    wt.validate();
    return wt;
}

void export_coastline(std::span<const Chain> chains, const std::optional<WorldTransform>& wt,
                      const std::filesystem::path& path, ExportFormat format) {
    if (wt) wt->validate();
    auto world = [&](const Pixel& p) {
        return wt ? wt->apply(p.col, p.row) : Point2{static_cast<double>(p.col), static_cast<double>(p.row)};
    };

    std::ostringstream os;
    if (format == ExportFormat::csv) {
        os << "chain_id,seq,col,row,x,y\n";
        for (std::size_t id = 0; id < chains.size(); ++id) {
            for (std::size_t seq = 0; seq < chains[id].size(); ++seq) {
                const Pixel& p = chains[id][seq];
                const Point2 w = world(p);
                os << id << ',' << seq << ',' << p.col << ',' << p.row << ',' << format_number(w.x) << ','
                   << format_number(w.y) << '\n';
            }
        }
        write_text(path, os.str());
        return;
    }

    // Written by hand so that coordinates use the shortest round-trip form.
    os << "{\"type\":\"FeatureCollection\",\"metadata\":{\"crs\":\""
       << (wt ? "world" : "pixel") << "\",\"convention\":\""
       << (wt ? "x = A*col + B*row + C, y = D*col + E*row + F at pixel centres"
              : "x = column index, y = row index (downwards), pixel centres")
       << "\"},\"features\":[";
    for (std::size_t id = 0; id < chains.size(); ++id) {
        if (id) os << ',';
        const Chain& chain = chains[id];
        os << "{\"type\":\"Feature\",\"properties\":{\"chain_id\":" << id << ",\"pixels\":" << chain.size()
           << "},\"geometry\":{\"type\":\"" << (chain.size() == 1 ? "Point" : "LineString")
           << "\",\"coordinates\":";
        auto vertex = [&](const Pixel& p) {
            const Point2 w = world(p);
            os << '[' << format_number(w.x) << ',' << format_number(w.y) << ']';
        };
        if (chain.size() == 1) {
            vertex(chain.front());
        } else {
            os << '[';
            for (std::size_t i = 0; i < chain.size(); ++i) {
                if (i) os << ',';
                vertex(chain[i]);
            }
            os << ']';
        }
        os << "}}";
    }
    os << "]}\n";
    write_text(path, os.str());
}

std::vector<Chain> read_coastline(const std::filesystem::path& path, ExportFormat format,
                                  const std::optional<WorldTransform>& wt) {
    std::vector<Chain> chains;
    std::ifstream in(path);
    if (!in) throw IoError("cannot open coastline " + path.string());

    if (format == ExportFormat::csv) {
        std::string line;
        std::getline(in, line);
        if (line.rfind("chain_id,seq,col,row", 0) != 0) throw FormatError(path.string() + ": unexpected CSV header");
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string field;
            std::array<long, 4> v{};
            for (auto& x : v) {
                if (!std::getline(ls, field, ',')) throw FormatError(path.string() + ": short CSV row");
                try {
                    x = std::stol(field);
                } catch (const std::exception&) {
                    throw FormatError(path.string() + ": non-integer CSV field '" + field + "'");
                }
            }
            const auto id = static_cast<std::size_t>(v[0]);
            if (id >= chains.size()) chains.resize(id + 1);
            chains[id].push_back({static_cast<int>(v[3]), static_cast<int>(v[2])});
        }
        return chains;
    }

    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    auto to_pixel = [&](const json& pos) {
        const double x = pos.at(0).get<double>();
        const double y = pos.at(1).get<double>();
        const Point2 px = wt ? wt->invert(x, y) : Point2{x, y};
        return Pixel{static_cast<int>(std::lround(px.y)), static_cast<int>(std::lround(px.x))};
    };
    try {
        for (const auto& feature : j.at("features")) {
            const auto& geom = feature.at("geometry");
            Chain chain;
            if (geom.at("type") == "Point") {
                chain.push_back(to_pixel(geom.at("coordinates")));
            } else {
                for (const auto& pos : geom.at("coordinates")) chain.push_back(to_pixel(pos));
            }
            chains.push_back(std::move(chain));
        }
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return chains;
}

}  // namespace sarcoast
