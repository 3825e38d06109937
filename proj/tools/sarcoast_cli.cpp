#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sarcoast/error.hpp"
#include "sarcoast/pipeline.hpp"

namespace {

using namespace sarcoast;

enum ExitCode : int { kOk = 0, kQualityGate = 1, kUsage = 2, kIo = 3, kOneClass = 4 };

struct RawOptions {
    std::string input;
    std::string format = "pgm";
    std::string out_dir = ".";
    int superpixels = 0;
    double alpha = 1.5;
    int max_iters = 20;
    double change_tol = 1e-3;
    int bins = kDefaultEntropyBins;
    std::size_t min_est_pixels = 30;
    std::uint64_t seed = 0;
    std::string world_file;
    std::string export_format = "geojson";
    std::string config;
};

GgdParams parse_params(const std::string& text) {
    GgdParams p;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> p.v >> c1 >> p.kappa >> c2 >> p.sigma) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof()) {
        throw ConfigError("expected v,kappa,sigma but got '" + text + "'");
    }
    if (!p.valid()) throw ConfigError("invalid GGD parameters '" + text + "'");
    return p;
}

// Config file first, then every flag the user actually passed.
PipelineConfig build_config(const CLI::App& sub, const RawOptions& o) {
    PipelineConfig cfg;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw IoError("cannot open config file " + o.config);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config file " + o.config + ": " + e.what());
        }
        apply_config_json(cfg, j);
    }
    auto given = [&](const char* name) { return sub.count(name) > 0; };
    if (given("--input")) cfg.input = o.input;
    if (given("--format")) cfg.format = parse_raster_format(o.format);
    if (given("--out-dir")) cfg.out_dir = o.out_dir;
    if (given("--superpixels")) cfg.superpixels = o.superpixels;
    if (given("--alpha")) cfg.alpha = o.alpha;
    if (given("--max-iters")) cfg.max_iters = o.max_iters;
    if (given("--change-tol")) cfg.change_tol = o.change_tol;
    if (given("--bins")) cfg.bins = o.bins;
    if (given("--min-est-pixels")) cfg.min_est_pixels = o.min_est_pixels;
    if (given("--seed")) cfg.seed = o.seed;
    if (given("--world-file")) cfg.world_file = o.world_file;
    if (given("--export")) cfg.export_format = parse_export_format(o.export_format);
    if (cfg.input.empty()) throw ConfigError("--input is required");
    cfg.validate();
    return cfg;
}

void add_pipeline_flags(CLI::App* sub, RawOptions& o) {
    sub->add_option("--input", o.input, "Input raster");
    sub->add_option("--format", o.format, "Input format")->check(CLI::IsMember({"pgm", "rawf32"}));
    sub->add_option("--out-dir", o.out_dir, "Output directory");
    sub->add_option("--superpixels", o.superpixels, "Number of superpixels K");
    sub->add_option("--alpha", o.alpha, "Dirichlet concentration");
    sub->add_option("--max-iters", o.max_iters, "Maximum ICM iterations");
    sub->add_option("--change-tol", o.change_tol, "Stop when the changed-pixel fraction drops below this");
    sub->add_option("--bins", o.bins, "Entropy histogram bins");
    sub->add_option("--min-est-pixels", o.min_est_pixels, "Minimum pixels for GGD re-estimation");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--world-file", o.world_file, "Six-line affine world file");
    sub->add_option("--export", o.export_format, "Coastline format")->check(CLI::IsMember({"geojson", "csv"}));
    sub->add_option("--config", o.config, "JSON config file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SAR coastline extraction with GGD superpixels"};
    app.require_subcommand(1);

    RawOptions seg_opts, ext_opts;
    auto* seg = app.add_subcommand("segment", "Superpixel segmentation only");
    add_pipeline_flags(seg, seg_opts);
    auto* ext = app.add_subcommand("extract", "Full coastline extraction");
    add_pipeline_flags(ext, ext_opts);

    SynthConfig synth_cfg;
    std::string land_text, water_text;
    auto* syn = app.add_subcommand("synth", "Generate a synthetic coastal scene");
    syn->add_option("--out-dir", synth_cfg.out_dir, "Output directory");
    syn->add_option("--width", synth_cfg.spec.width, "Scene width")->check(CLI::PositiveNumber);
    syn->add_option("--height", synth_cfg.spec.height, "Scene height")->check(CLI::PositiveNumber);
    syn->add_option("--seed", synth_cfg.spec.seed, "Random seed");
    syn->add_option("--roughness", synth_cfg.spec.roughness, "Coast amplitude in pixels")->check(CLI::NonNegativeNumber);
    syn->add_option("--land", land_text, "Land GGD as v,kappa,sigma");
    syn->add_option("--water", water_text, "Water GGD as v,kappa,sigma");
    syn->add_option("--lakes", synth_cfg.spec.lakes, "Water discs inside land")->check(CLI::NonNegativeNumber);
    syn->add_option("--islets", synth_cfg.spec.islets, "Land discs inside water")->check(CLI::NonNegativeNumber);

    EvalConfig eval_cfg;
    std::string world, out;
    auto* ev = app.add_subcommand("eval", "Score an extracted coastline against truth");
    ev->add_option("--input", eval_cfg.extracted, "Extracted coastline (.geojson or .csv)")->required();
    ev->add_option("--truth", eval_cfg.truth, "Truth mask (.pgm) or coastline file")->required();
    ev->add_option("--world-file", world, "World file for georeferenced coastlines");
    ev->add_option("--tol-px", eval_cfg.tol_px, "Match tolerance in pixels")->check(CLI::NonNegativeNumber);
    ev->add_option("--f1-threshold", eval_cfg.f1_threshold, "Quality gate on F1")->check(CLI::Range(0.0, 1.0));
    ev->add_option("--out-dir", out, "Directory for score.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*seg) {
            const auto res = run_segment(build_config(*seg, seg_opts));
            std::cout << "segment: " << res.spm.K << " superpixels, " << res.spm.iterations_run << " iterations\n";
        } else if (*ext) {
            const auto res = run_extract(build_config(*ext, ext_opts));
            std::cout << "extract: " << res.coastline.chains.size() << " chain(s), "
                      << res.report["coast_pixels"].get<std::size_t>() << " coast pixels\n";
            for (const auto& w : res.report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
        } else if (*syn) {
            if (!land_text.empty()) synth_cfg.spec.land = parse_params(land_text);
            if (!water_text.empty()) synth_cfg.spec.water = parse_params(water_text);
            run_synth(synth_cfg);
            std::cout << "synth: wrote scene to " << synth_cfg.out_dir.string() << '\n';
        } else if (*ev) {
            if (!world.empty()) eval_cfg.world_file = world;
            if (!out.empty()) eval_cfg.out_dir = out;
            const auto res = run_eval(eval_cfg);
            std::cout << res.report["score"].dump(2) << '\n';
            return res.passed ? kOk : kQualityGate;
        }
    } catch (const OneClassOnly& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOneClass;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const FormatError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}
