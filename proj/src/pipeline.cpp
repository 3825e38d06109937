#include "sarcoast/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "sarcoast/error.hpp"

namespace sarcoast {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// Reassigned components above this share of the image are reported.
constexpr double kLargeFlipWarning = 0.01;

class StageTimer {
public:
    void mark(const std::string& stage) {
        const auto now = Clock::now();
        timings_[stage] = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }
    const json& timings() const { return timings_; }

private:
    Clock::time_point last_ = Clock::now();
    json timings_ = json::object();
};

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json engine_json(const EngineConfig& e) {
    return {{"superpixels", e.K},         {"alpha", e.alpha}, {"max_iters", e.max_iters},
            {"change_tol", e.change_tol}, {"seed", e.seed},   {"min_est_pixels", e.min_est_pixels}};
}

json segmentation_json(const SuperpixelMap& spm) {
    const auto counts = label_counts(spm.labels, spm.K);
    return {{"iterations", spm.iterations_run},
            {"changed_fraction_trace", spm.change_trace},
            {"active_superpixels", std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; })}};
}

json params_json(const GgdParams& p) { return {{"v", p.v}, {"kappa", p.kappa}, {"sigma", p.sigma}}; }

// Largest reassigned component, in pixels, between the pre-fill and filled masks.
std::size_t largest_flip(const BinaryMask& before, const BinaryMask& after) {
    BinaryMask changed(before.width(), before.height(), LandClass::water);
    for (std::size_t i = 0; i < before.size(); ++i) {
        if (before[i] != after[i]) changed[i] = LandClass::land;
    }
    const auto comps = connected_components(changed, LandClass::land, Connectivity::eight);
    return comps.empty() ? 0 : comps.front().size();
}

}  // namespace

void PipelineConfig::validate() const {
    if (superpixels && *superpixels < 2) {
        throw ConfigError("--superpixels must be >= 2, got " + std::to_string(*superpixels));
    }
    EngineConfig probe{.K = superpixels.value_or(16), .alpha = alpha, .max_iters = max_iters,
                       .change_tol = change_tol, .min_est_pixels = min_est_pixels, .seed = seed};
    probe.validate();
    if (bins < 1) throw ConfigError("--bins must be >= 1");
}

void apply_config_json(PipelineConfig& cfg, const json& j) {
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "input") cfg.input = value.get<std::string>();
            else if (key == "format") cfg.format = parse_raster_format(value.get<std::string>());
            else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
            else if (key == "superpixels") cfg.superpixels = value.get<int>();
            else if (key == "alpha") cfg.alpha = value.get<double>();
            else if (key == "max_iters") cfg.max_iters = value.get<int>();
            else if (key == "change_tol") cfg.change_tol = value.get<double>();
            else if (key == "bins") cfg.bins = value.get<int>();
            else if (key == "min_est_pixels") cfg.min_est_pixels = value.get<std::size_t>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "world_file") cfg.world_file = value.get<std::string>();
            else if (key == "export") cfg.export_format = parse_export_format(value.get<std::string>());
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
}

int default_superpixel_count(std::size_t pixels) {
    return static_cast<int>(std::clamp<std::size_t>(pixels / 400, 16, 5000));
}

EngineConfig engine_config(const PipelineConfig& cfg, std::size_t pixels) {
    EngineConfig e{.K = cfg.superpixels.value_or(default_superpixel_count(pixels)),
                   .alpha = cfg.alpha,
                   .max_iters = cfg.max_iters,
                   .change_tol = cfg.change_tol,
                   .min_est_pixels = cfg.min_est_pixels,
                   .seed = cfg.seed};
    e.validate();
    if (static_cast<std::size_t>(e.K) * 9 > pixels) {
        throw ConfigError("--superpixels " + std::to_string(e.K) + " is too large for a " + std::to_string(pixels) +
                          "-pixel image (limit N/9)");
    }
    return e;
}

SarImage load_input(const PipelineConfig& cfg) {
    SarImage img = read_raster(cfg.input, cfg.format);
    if (img.width() < kMinPipelineSide || img.height() < kMinPipelineSide) {
        throw FormatError(cfg.input.string() + ": raster must be at least 16x16");
    }
    return img;
}

std::string artifacts::coastline(ExportFormat format) {
    return format == ExportFormat::csv ? "coastline.csv" : "coastline.geojson";
}

SegmentResult run_segment(const PipelineConfig& cfg) {
    cfg.validate();
    StageTimer timer;
    ensure_dir(cfg.out_dir);
    const SarImage img = load_input(cfg);
    const EngineConfig engine = engine_config(cfg, img.data.size());
    timer.mark("read");

    SegmentResult res{segment(img, engine), {}};
    timer.mark("segment");
    write_labels(res.spm.labels, cfg.out_dir / artifacts::kLabels);
    write_label_visualization(res.spm, img, cfg.out_dir / artifacts::kOverlay);
    timer.mark("write");

    res.report = {{"command", "segment"},
                  {"input", cfg.input.string()},
                  {"width", img.width()},
                  {"height", img.height()},
                  {"engine", engine_json(engine)},
                  {"segmentation", segmentation_json(res.spm)},
                  {"status", "ok"}};
    write_json(cfg.out_dir / artifacts::kReport, res.report);
    write_json(cfg.out_dir / artifacts::kTimings, timer.timings());
    return res;
}

ExtractResult extract_coastline(const SarImage& img, const EngineConfig& engine, int bins) {
    ExtractResult res;
    res.spm = segment(img, engine);
    res.features = compute_features(img, res.spm, bins);
    if (res.features.size() >= 2) {
        res.classes = cluster_two(res.features);
    } else {
        res.classes.degenerate = true;
        for (const auto& r : res.features) res.classes.classes[r.superpixel_id] = LandClass::water;
    }
    res.prefill = build_binary_mask(res.spm, res.classes);
    res.fill = fill_voids(res.prefill);
    if (!res.fill.one_class_only && res.fill.converged) {
        res.coastline.border = extract_border(res.fill.mask);
        res.coastline.chains = trace_polyline(res.coastline.border);
    }
    return res;
}

ExtractResult run_extract(const PipelineConfig& cfg) {
    cfg.validate();
    StageTimer timer;
    ensure_dir(cfg.out_dir);
    const SarImage img = load_input(cfg);
    const EngineConfig engine = engine_config(cfg, img.data.size());
    std::optional<WorldTransform> wt;
    if (cfg.world_file) wt = read_world_file(*cfg.world_file);
    timer.mark("read");

    ExtractResult res;
    res.spm = segment(img, engine);
    timer.mark("segment");
    res.features = compute_features(img, res.spm, cfg.bins);
    timer.mark("features");
    if (res.features.size() >= 2) {
        res.classes = cluster_two(res.features);
    } else {
        res.classes.degenerate = true;
        for (const auto& r : res.features) res.classes.classes[r.superpixel_id] = LandClass::water;
    }
    res.prefill = build_binary_mask(res.spm, res.classes);
    timer.mark("cluster");
    res.fill = fill_voids(res.prefill);
    timer.mark("fill");

    write_labels(res.spm.labels, cfg.out_dir / artifacts::kLabels);
    write_label_visualization(res.spm, img, cfg.out_dir / artifacts::kOverlay);
    write_features_csv(cfg.out_dir / artifacts::kFeatures, res.features);
    write_mask(res.prefill, cfg.out_dir / artifacts::kPrefillMask);

    std::size_t water_sp = 0;
    for (const auto& [id, cls] : res.classes.classes) water_sp += cls == LandClass::water;
    json warnings = json::array();
    res.report = {{"command", "extract"},
                  {"input", cfg.input.string()},
                  {"width", img.width()},
                  {"height", img.height()},
                  {"engine", engine_json(engine)},
                  {"bins", cfg.bins},
                  {"segmentation", segmentation_json(res.spm)},
                  {"clustering",
                   {{"explained", res.classes.explained},
                    {"degenerate", res.classes.degenerate},
                    {"water_superpixels", water_sp},
                    {"land_superpixels", res.classes.classes.size() - water_sp}}},
                  {"components_before",
                   {{"land", res.fill.land_components_before},
                    {"water", res.fill.water_components_before},
                    {"total", res.fill.components_before()}}}};

    if (res.fill.one_class_only) {
        res.report["status"] = "one_class_only";
        res.report["warnings"] = warnings;
        write_json(cfg.out_dir / artifacts::kReport, res.report);
        write_json(cfg.out_dir / artifacts::kTimings, timer.timings());
        throw OneClassOnly("input separates into a single land/water class; no coastline exists");
    }
    if (!res.fill.converged) {
        res.report["status"] = "fill_not_converged";
        write_json(cfg.out_dir / artifacts::kReport, res.report);
        throw std::runtime_error("void filling did not reach two components within " +
                                 std::to_string(kMaxFillPasses) + " passes");
    }

    const std::size_t flip = largest_flip(res.prefill, res.fill.mask);
    if (static_cast<double>(flip) > kLargeFlipWarning * static_cast<double>(img.data.size())) {
        warnings.push_back("void filling reassigned a region of " + std::to_string(flip) +
                           " pixels; a second large landmass or water body may have been erased");
    }
    write_mask(res.fill.mask, cfg.out_dir / artifacts::kFilledMask);

    res.coastline.border = extract_border(res.fill.mask);
    res.coastline.chains = trace_polyline(res.coastline.border);
    timer.mark("border");
    export_coastline(res.coastline.chains, wt, cfg.out_dir / artifacts::coastline(cfg.export_format),
                     cfg.export_format);
    timer.mark("export");

    std::size_t coast_pixels = 0;
    for (auto b : res.coastline.border.values()) coast_pixels += b;
    res.report["components_after"] = {{"land", res.fill.land_components_after},
                                      {"water", res.fill.water_components_after},
                                      {"total", res.fill.components_after()}};
    res.report["fill_passes"] = res.fill.passes;
    res.report["coast_pixels"] = coast_pixels;
    res.report["chains"] = res.coastline.chains.size();
    res.report["junctions"] = junction_count(res.coastline.border);
    res.report["georeferenced"] = wt.has_value();
    res.report["warnings"] = warnings;
    res.report["status"] = "ok";
    write_json(cfg.out_dir / artifacts::kReport, res.report);
    write_json(cfg.out_dir / artifacts::kTimings, timer.timings());
    return res;
}

json scene_metadata(const SyntheticScene& scene) {
    const auto& s = scene.spec;
    json terms = json::array();
    for (const auto& t : scene.terms) {
        terms.push_back({{"amplitude", t.amplitude}, {"frequency", t.frequency}, {"phase", t.phase}});
    }
    auto discs = [](const std::vector<Disc>& v) {
        json out = json::array();
        for (const auto& d : v) out.push_back({{"row", d.row}, {"col", d.col}, {"radius", d.radius}});
        return out;
    };
    return {{"width", s.width},
            {"height", s.height},
            {"seed", s.seed},
            {"roughness", s.roughness},
            {"land", params_json(s.land)},
            {"water", params_json(s.water)},
            {"sinusoids", terms},
            {"lakes", discs(scene.lakes)},
            {"islets", discs(scene.islets)},
            {"interface_pairs", scene.truth_interface.size()}};
}

SyntheticScene run_synth(const SynthConfig& cfg) {
    ensure_dir(cfg.out_dir);
    SyntheticScene scene = gen_coast_scene(cfg.spec);
    write_rawf32(cfg.out_dir / artifacts::kSceneImage, scene.image.data);
    write_mask(scene.truth_mask, cfg.out_dir / artifacts::kSceneTruth);
    write_mask(scene.coast_mask, cfg.out_dir / artifacts::kSceneCoastTruth);
    write_json(cfg.out_dir / artifacts::kSceneMeta, scene_metadata(scene));
    return scene;
}

std::vector<Pixel> truth_coast_pixels(const BinaryMask& truth) {
    const FillResult filled = fill_voids(truth);
    if (filled.one_class_only) throw OneClassOnly("truth mask holds a single class");
    return border_pixels(extract_border(filled.mask));
}

json to_json(const BoundaryScore& s) {
    return {{"precision", s.precision},
            {"recall", s.recall},
            {"f1", s.f1},
            {"mean_distance", finite_or_null(s.mean_distance)},
            {"hausdorff", finite_or_null(s.hausdorff)}};
}

EvalResult run_eval(const EvalConfig& cfg) {
    std::optional<WorldTransform> wt;
    if (cfg.world_file) wt = read_world_file(*cfg.world_file);

    auto flatten = [](const std::vector<Chain>& chains) {
        std::vector<Pixel> px;
        for (const auto& c : chains) px.insert(px.end(), c.begin(), c.end());
        return px;
    };
    const auto extracted = flatten(read_coastline(cfg.extracted, export_format_for(cfg.extracted), wt));

    std::vector<Pixel> truth;
    if (cfg.truth.extension() == ".pgm") {
        const BinaryMask mask = read_mask(cfg.truth);
        for (const Pixel& p : extracted) {
            if (!mask.contains(p.row, p.col)) {
                throw FormatError("extracted coastline pixel (" + std::to_string(p.row) + ", " +
                                  std::to_string(p.col) + ") lies outside the truth mask");
            }
        }
        truth = truth_coast_pixels(mask);
    } else {
        truth = flatten(read_coastline(cfg.truth, export_format_for(cfg.truth), wt));
    }

    EvalResult res;
    res.score = boundary_score(extracted, truth, cfg.tol_px);
    res.passed = res.score.f1 >= cfg.f1_threshold;
    res.report = {{"extracted", cfg.extracted.string()},
                  {"truth", cfg.truth.string()},
                  {"tol_px", cfg.tol_px},
                  {"f1_threshold", cfg.f1_threshold},
                  {"extracted_pixels", extracted.size()},
                  {"truth_pixels", truth.size()},
                  {"score", to_json(res.score)},
                  {"passed", res.passed}};
    if (cfg.out_dir) {
        ensure_dir(*cfg.out_dir);
        write_json(*cfg.out_dir / artifacts::kScore, res.report);
    }
    return res;
}

}  // namespace sarcoast
