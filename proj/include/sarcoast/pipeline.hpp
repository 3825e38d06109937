#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarcoast/features.hpp"
#include "sarcoast/morphology.hpp"
#include "sarcoast/raster_io.hpp"
#include "sarcoast/superpixel.hpp"
#include "sarcoast/synth.hpp"

namespace sarcoast {

/// Smallest raster the pipeline accepts, per side.
inline constexpr int kMinPipelineSide = 16;

struct PipelineConfig {
    std::filesystem::path input;
    RasterFormat format = RasterFormat::pgm;
    std::filesystem::path out_dir = ".";
    /// Unset means N/400 clamped to [16, 5000].
    std::optional<int> superpixels;
    double alpha = 1.5;
    int max_iters = 20;
    double change_tol = 1e-3;
    int bins = kDefaultEntropyBins;
    std::size_t min_est_pixels = 30;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> world_file;
    ExportFormat export_format = ExportFormat::geojson;

    /// Checks everything that does not need the image. Throws ConfigError.
    void validate() const;
};

/// Overlays keys of a JSON object onto `cfg`. Keys mirror the long CLI flag
/// names with dashes replaced by underscores (e.g. "max_iters").
void apply_config_json(PipelineConfig& cfg, const nlohmann::json& j);

int default_superpixel_count(std::size_t pixels);

/// Engine settings for an image of `pixels` pixels.
EngineConfig engine_config(const PipelineConfig& cfg, std::size_t pixels);

/// Loads the input and enforces the pipeline's minimum raster size.
SarImage load_input(const PipelineConfig& cfg);

/// Output file names inside the output directory.
namespace artifacts {
inline constexpr const char* kLabels = "labels.f32";
inline constexpr const char* kOverlay = "superpixels.pgm";
inline constexpr const char* kFeatures = "features.csv";
inline constexpr const char* kPrefillMask = "mask_prefill.pgm";
inline constexpr const char* kFilledMask = "mask_filled.pgm";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kTimings = "timings.json";
inline constexpr const char* kSceneImage = "image.f32";
inline constexpr const char* kSceneTruth = "truth.pgm";
inline constexpr const char* kSceneCoastTruth = "coast_truth.pgm";
inline constexpr const char* kSceneMeta = "scene.json";
inline constexpr const char* kScore = "score.json";
std::string coastline(ExportFormat format);
}  // namespace artifacts

struct SegmentResult {
    SuperpixelMap spm;
    nlohmann::json report;
};

/// Superpixel stage: writes the label raster, the boundary overlay, the
/// report and per-stage timings.
SegmentResult run_segment(const PipelineConfig& cfg);

struct ExtractResult {
    SuperpixelMap spm;
    std::vector<FeatureRow> features;
    ClassAssignment classes;
    BinaryMask prefill;
    FillResult fill;
    Coastline coastline;
    nlohmann::json report;
};

/// Full chain: segment, features, two-class clustering, class mask, void
/// filling, land-side border, chain tracing and vector export. Throws
/// OneClassOnly (after writing the report) when no two-class mask exists.
ExtractResult run_extract(const PipelineConfig& cfg);

/// Coastline of an in-memory image without touching the filesystem.
ExtractResult extract_coastline(const SarImage& img, const EngineConfig& engine, int bins = kDefaultEntropyBins);

struct SynthConfig {
    std::filesystem::path out_dir = ".";
    SceneSpec spec;
};

/// Writes image.f32 (+ sidecar), truth.pgm, coast_truth.pgm and scene.json.
SyntheticScene run_synth(const SynthConfig& cfg);

nlohmann::json scene_metadata(const SyntheticScene& scene);

struct EvalConfig {
    std::filesystem::path extracted;
    /// A mask PGM (its filled land-side border is the truth) or a coastline file.
    std::filesystem::path truth;
    std::optional<std::filesystem::path> world_file;
    double tol_px = 2.0;
    double f1_threshold = 0.9;
    std::optional<std::filesystem::path> out_dir;
};

struct EvalResult {
    BoundaryScore score;
    bool passed = false;
    nlohmann::json report;
};

EvalResult run_eval(const EvalConfig& cfg);

/// Land-side coast pixels of a truth mask after void filling.
std::vector<Pixel> truth_coast_pixels(const BinaryMask& truth);

nlohmann::json to_json(const BoundaryScore& s);

}  // namespace sarcoast
