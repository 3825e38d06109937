#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <span>
#include <vector>

#include "sarcoast/mask.hpp"
#include "sarcoast/morphology.hpp"
#include "sarcoast/superpixel.hpp"

namespace sarcoast {

enum class RasterFormat { pgm, rawf32 };
enum class ExportFormat { geojson, csv };

RasterFormat parse_raster_format(const std::string& name);
ExportFormat parse_export_format(const std::string& name);

/// Zero or negative samples are replaced by this fraction of the image maximum.
inline constexpr double kClampFraction = 1e-6;

/// Reads a P5 PGM (8- or 16-bit, big-endian samples) or a little-endian f32
/// raw file whose dimensions come from the JSON sidecar `<path>.json`
/// ({"width": W, "height": H}). Non-positive samples are clamped to
/// kClampFraction * max. Throws FormatError or IoError.
SarImage read_raster(const std::filesystem::path& path, RasterFormat format);

/// Raw PGM payload without clamping; samples as stored (0..maxval).
struct PgmImage {
    Grid<std::uint16_t> pixels;
    int max_value = 255;
};

PgmImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Grid<std::uint8_t>& pixels);

/// Raw f32 grid and its `<path>.json` sidecar. No clamping on read.
Grid<float> read_rawf32(const std::filesystem::path& path);
void write_rawf32(const std::filesystem::path& path, const Grid<float>& data);
void write_rawf32(const std::filesystem::path& path, const Grid<double>& data);

std::filesystem::path sidecar_path(const std::filesystem::path& raw_path);

/// Land is written as 255, water as 0.
void write_mask(const BinaryMask& mask, const std::filesystem::path& path);
/// Samples above half of maxval read as land.
BinaryMask read_mask(const std::filesystem::path& path);

/// Superpixel ids as f32 raster.
void write_labels(const LabelGrid& labels, const std::filesystem::path& path);
LabelGrid read_labels(const std::filesystem::path& path);

/// The image min-max stretched to 8 bits with every superpixel boundary
/// pixel painted 255.
Grid<std::uint8_t> label_visualization(const SuperpixelMap& spm, const SarImage& img);
void write_label_visualization(const SuperpixelMap& spm, const SarImage& img, const std::filesystem::path& path);

/// Affine pixel-to-world map, x' = A col + B row + C, y' = D col + E row + F,
/// evaluated at pixel centres.
struct WorldTransform {
    double A = 1.0, B = 0.0, C = 0.0;
    double D = 0.0, E = 1.0, F = 0.0;

    double det() const noexcept { return A * E - B * D; }
    /// Throws DomainError on a singular linear part.
    void validate() const;
    Point2 apply(double col, double row) const noexcept;
    /// World to (col, row).
    Point2 invert(double x, double y) const;
};

/// ESRI six-line world file in the order A, D, B, E, C, F.
WorldTransform read_world_file(const std::filesystem::path& path);

/// GeoJSON FeatureCollection of LineStrings with (x, y) vertex order, or CSV
/// with header chain_id,seq,col,row,x,y. Without a transform x = col, y = row.
void export_coastline(std::span<const Chain> chains, const std::optional<WorldTransform>& wt,
                      const std::filesystem::path& path, ExportFormat format);

/// Reads chains back from either export format. GeoJSON coordinates are
/// mapped back to pixels through `wt` when given.
std::vector<Chain> read_coastline(const std::filesystem::path& path, ExportFormat format,
                                  const std::optional<WorldTransform>& wt = std::nullopt);

/// Guesses the export format from the file extension (.csv, else GeoJSON).
ExportFormat export_format_for(const std::filesystem::path& path);

}  // namespace sarcoast
