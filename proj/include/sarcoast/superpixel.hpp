#pragma once

#include <cstdint>
#include <vector>

#include "sarcoast/ggd.hpp"
#include "sarcoast/grid.hpp"
#include "sarcoast/spatial.hpp"

namespace sarcoast {

enum class ChannelKind { amplitude, intensity };

/// Single-channel SAR raster. Values are strictly positive after ingest.
struct SarImage {
    Grid<double> data;
    ChannelKind channel = ChannelKind::amplitude;

    int width() const noexcept { return data.width(); }
    int height() const noexcept { return data.height(); }
};

using LabelGrid = Grid<std::int32_t>;

/// Mixture component of one superpixel: amplitude model plus spatial model.
struct SuperpixelTheta {
    GgdParams ggd;
    SpatialParams spatial;
    /// False once the superpixel owns no pixels.
    bool active = true;
};

/// Label grid plus per-superpixel parameters. Labels run 1..K; entry k-1 of
/// `theta` and `omega` belongs to label k.
struct SuperpixelMap {
    LabelGrid labels;
    int K = 0;
    std::vector<SuperpixelTheta> theta;
    std::vector<double> omega;
    int iterations_run = 0;
    /// changed fraction of every label sweep, in order
    std::vector<double> change_trace;

    const SuperpixelTheta& theta_of(int label) const { return theta[static_cast<std::size_t>(label - 1)]; }
    double omega_of(int label) const { return omega[static_cast<std::size_t>(label - 1)]; }
};

struct EngineConfig {
    int K = 100;
    /// Dirichlet concentration of the proportion prior.
    double alpha = 1.5;
    int max_iters = 20;
    /// Stop once fewer than this fraction of pixels change label.
    double change_tol = 1e-3;
    std::size_t min_est_pixels = 30;
    std::uint64_t seed = 0;

    /// Throws ConfigError when K < 2, alpha < 1 or max_iters < 1.
    void validate() const;
};

/// Regular grid initialisation with exactly K rectangular cells. Rows of
/// cells hold floor(K/rows) or one more cell so that K need not factor.
/// Throws PreconditionError when K > N/9.
SuperpixelMap init_grid(const SarImage& img, const EngineConfig& cfg);

/// Per-pixel posterior score of assigning `label` to the pixel at (row, col):
/// ggd_log_pdf + gaussian2_log_pdf + log(omega).
double pixel_score(const SarImage& img, const SuperpixelMap& spm, int row, int col, int label);

/// Sum of pixel_score over all pixels with their current labels.
double posterior_objective(const SarImage& img, const SuperpixelMap& spm);

/// One block-ICM label sweep. Boundary pixels choose the best of their own
/// and their 4-neighbours' labels; all decisions use the pre-sweep map and
/// are applied together. Ties keep the current label, then the smallest id.
/// Returns the fraction of pixels that changed.
double update_labels(const SarImage& img, SuperpixelMap& spm);

/// Re-estimates theta for every superpixel. The spatial part is always
/// refreshed; the GGD part keeps its previous value when the superpixel has
/// fewer than cfg.min_est_pixels members or the estimator fails. Empty
/// superpixels are marked inactive and left untouched.
void update_theta(const SarImage& img, SuperpixelMap& spm, const EngineConfig& cfg);

/// omega_k = (count_k + alpha - 1) / (N + K (alpha - 1)).
void update_omega(SuperpixelMap& spm, double alpha);

/// Keeps the largest 4-connected fragment of every label and hands every
/// other fragment to the most frequent label among its outside 4-neighbours
/// (ties to the smallest id). Returns the number of relabelled pixels.
std::size_t enforce_connectivity(SuperpixelMap& spm);

/// init_grid, then {update_labels, enforce_connectivity, update_theta,
/// update_omega} until the changed fraction drops below cfg.change_tol or
/// cfg.max_iters sweeps ran.
SuperpixelMap segment(const SarImage& img, const EngineConfig& cfg);

/// Pixel counts per label, index k-1 for label k.
std::vector<std::size_t> label_counts(const LabelGrid& labels, int K);

/// Number of 4-connected fragments of every label (index k-1), 0 for absent labels.
std::vector<int> fragment_counts(const LabelGrid& labels, int K);

/// 1 where a pixel has a 4-neighbour carrying a different label.
Grid<std::uint8_t> superpixel_boundary_mask(const LabelGrid& labels);

}  // namespace sarcoast
