#include "sarcoast/superpixel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sarcoast/error.hpp"

namespace sarcoast {
namespace {

Point2 coords_of(int row, int col) { return {static_cast<double>(col), static_cast<double>(row)}; }

// Fallback amplitude model when no estimate is available: exponential with the image mean.
GgdParams fallback_ggd(const SarImage& img) {
    double sum = 0.0;
    for (double a : img.data.values()) sum += a;
    return {1.0, 1.0, sum / static_cast<double>(img.data.size())};
}

struct Fragments {
    Grid<std::int32_t> id;             // fragment id per pixel
    std::vector<std::int32_t> label;   // label of each fragment
    std::vector<std::size_t> size;
    std::vector<std::size_t> first;    // first pixel in raster order
};

Fragments label_fragments(const LabelGrid& labels) {
    Fragments f;
    f.id = Grid<std::int32_t>(labels.width(), labels.height(), -1);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < labels.size(); ++start) {
        if (f.id[start] >= 0) continue;
        const auto frag = static_cast<std::int32_t>(f.label.size());
        const std::int32_t lab = labels[start];
        f.label.push_back(lab);
        f.first.push_back(start);
        std::size_t count = 0;
        f.id[start] = frag;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            ++count;
            const Pixel p = labels.pixel(cur);
            for (int d = 0; d < 4; ++d) {
                const int r = p.row + kDRow4[d];
                const int c = p.col + kDCol4[d];
                if (!labels.contains(r, c)) continue;
                const std::size_t nb = labels.index(r, c);
                if (f.id[nb] < 0 && labels[nb] == lab) {
                    f.id[nb] = frag;
                    stack.push_back(nb);
                }
            }
        }
        f.size.push_back(count);
    }
    return f;
}

}  // namespace

void EngineConfig::validate() const {
    if (K < 2) throw ConfigError("superpixel count K must be >= 2, got " + std::to_string(K));
    if (!(alpha >= 1.0)) throw ConfigError("alpha must be >= 1, got " + std::to_string(alpha));
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1, got " + std::to_string(max_iters));
    if (!(change_tol >= 0.0)) throw ConfigError("change_tol must be >= 0");
}

SuperpixelMap init_grid(const SarImage& img, const EngineConfig& cfg) {
    cfg.validate();
    const int W = img.width();
    const int H = img.height();
    const std::size_t N = img.data.size();
    if (static_cast<std::size_t>(cfg.K) * 9 > N) {
        throw PreconditionError("init_grid: K=" + std::to_string(cfg.K) + " exceeds N/9 for a " +
                                std::to_string(W) + "x" + std::to_string(H) + " image");
    }

    const double step = std::sqrt(static_cast<double>(N) / cfg.K);
    const int rows = std::clamp(static_cast<int>(std::lround(H / step)), 1, std::min(cfg.K, H));
    const int base = cfg.K / rows;
    const int extra = cfg.K % rows;

    SuperpixelMap spm;
    spm.K = cfg.K;
    spm.labels = LabelGrid(W, H, 0);
    std::int32_t next_label = 1;
    for (int j = 0; j < rows; ++j) {
        // spread the remainder evenly over the bands
        const int cells = base + ((j + 1) * extra / rows - j * extra / rows);
        const int y0 = static_cast<int>(static_cast<long long>(j) * H / rows);
        const int y1 = static_cast<int>(static_cast<long long>(j + 1) * H / rows);
        for (int i = 0; i < cells; ++i) {
            const int x0 = static_cast<int>(static_cast<long long>(i) * W / cells);
            const int x1 = static_cast<int>(static_cast<long long>(i + 1) * W / cells);
            for (int r = y0; r < y1; ++r) {
                for (int c = x0; c < x1; ++c) spm.labels(r, c) = next_label;
            }
            ++next_label;
        }
    }

    GgdParams global = fallback_ggd(img);
    try {
        global = estimate_ggd(img.data.values(), {.min_samples = cfg.min_est_pixels});
    } catch (const EstimationFailed&) {
    }

    spm.theta.assign(static_cast<std::size_t>(cfg.K), SuperpixelTheta{global, {}, true});
    spm.omega.assign(static_cast<std::size_t>(cfg.K), 1.0 / cfg.K);
    update_theta(img, spm, cfg);
    return spm;
}

double pixel_score(const SarImage& img, const SuperpixelMap& spm, int row, int col, int label) {
    const SuperpixelTheta& th = spm.theta_of(label);
    return ggd_log_pdf(img.data(row, col), th.ggd) + gaussian2_log_pdf(coords_of(row, col), th.spatial) +
           std::log(spm.omega_of(label));
}

double posterior_objective(const SarImage& img, const SuperpixelMap& spm) {
    double total = 0.0;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) total += pixel_score(img, spm, r, c, spm.labels(r, c));
    }
    return total;
}

double update_labels(const SarImage& img, SuperpixelMap& spm) {
    const LabelGrid& before = spm.labels;
    LabelGrid after = before;
    std::size_t changed = 0;

    for (int r = 0; r < before.height(); ++r) {
        for (int c = 0; c < before.width(); ++c) {
            const std::int32_t current = before(r, c);
            std::int32_t candidates[4];
            int n_candidates = 0;
            for (int d = 0; d < 4; ++d) {
                const int rr = r + kDRow4[d];
                const int cc = c + kDCol4[d];
                if (!before.contains(rr, cc)) continue;
                const std::int32_t lab = before(rr, cc);
                if (lab != current &&
                    std::find(candidates, candidates + n_candidates, lab) == candidates + n_candidates) {
                    candidates[n_candidates++] = lab;
                }
            }
            if (n_candidates == 0) continue;  // interior pixel

            std::int32_t best = current;
            double best_score = pixel_score(img, spm, r, c, current);
            std::sort(candidates, candidates + n_candidates);
            for (int i = 0; i < n_candidates; ++i) {
                const double s = pixel_score(img, spm, r, c, candidates[i]);
                if (s > best_score) {
                    best_score = s;
                    best = candidates[i];
                }
            }
            if (best != current) {
                after(r, c) = best;
                ++changed;
            }
        }
    }
    spm.labels = std::move(after);
    return static_cast<double>(changed) / static_cast<double>(spm.labels.size());
}

void update_theta(const SarImage& img, SuperpixelMap& spm, const EngineConfig& cfg) {
    const auto counts = label_counts(spm.labels, spm.K);
    std::vector<std::vector<double>> logs(static_cast<std::size_t>(spm.K));
    std::vector<std::vector<Point2>> coords(static_cast<std::size_t>(spm.K));
    for (std::size_t k = 0; k < logs.size(); ++k) {
        logs[k].reserve(counts[k]);
        coords[k].reserve(counts[k]);
    }
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const auto k = static_cast<std::size_t>(spm.labels(r, c) - 1);
            logs[k].push_back(std::log(img.data(r, c)));
            coords[k].push_back(coords_of(r, c));
        }
    }

    const EstimatorOptions opts{.min_samples = cfg.min_est_pixels};
    for (std::size_t k = 0; k < logs.size(); ++k) {
        SuperpixelTheta& th = spm.theta[k];
        if (counts[k] == 0) {
            th.active = false;
            continue;
        }
        th.active = true;
        th.spatial = estimate_spatial(coords[k]);
        if (counts[k] < std::max<std::size_t>(cfg.min_est_pixels, 3)) continue;
        try {
            th.ggd = estimate_ggd_from_cumulants(log_cumulants_of_logs(logs[k]), opts);
        } catch (const EstimationFailed&) {
            // keep the previous amplitude model
        }
    }
}

void update_omega(SuperpixelMap& spm, double alpha) {
    if (!(alpha >= 1.0)) throw ConfigError("update_omega: alpha must be >= 1");
    const auto counts = label_counts(spm.labels, spm.K);
    const double denom = static_cast<double>(spm.labels.size()) + spm.K * (alpha - 1.0);
    spm.omega.resize(static_cast<std::size_t>(spm.K));
    for (std::size_t k = 0; k < counts.size(); ++k) {
        spm.omega[k] = (static_cast<double>(counts[k]) + alpha - 1.0) / denom;
    }
}

std::size_t enforce_connectivity(SuperpixelMap& spm) {
    LabelGrid& labels = spm.labels;
    std::size_t relabelled = 0;
    for (;;) {
        const Fragments f = label_fragments(labels);
        const std::size_t n_frag = f.label.size();

        // largest fragment per label; ties go to the earlier fragment in raster order
        std::vector<std::int32_t> keeper(static_cast<std::size_t>(spm.K) + 1, -1);
        for (std::size_t i = 0; i < n_frag; ++i) {
            auto& k = keeper[static_cast<std::size_t>(f.label[i])];
            if (k < 0 || f.size[i] > f.size[static_cast<std::size_t>(k)]) k = static_cast<std::int32_t>(i);
        }
        std::vector<bool> kept(n_frag, false);
        bool any_orphan = false;
        for (std::size_t i = 0; i < n_frag; ++i) {
            kept[i] = keeper[static_cast<std::size_t>(f.label[i])] == static_cast<std::int32_t>(i);
            any_orphan = any_orphan || !kept[i];
        }
        if (!any_orphan) break;

        // Vote among outside neighbours that belong to kept fragments. An orphan
        // enclosed only by other orphans waits for a later round.
        std::vector<std::vector<std::size_t>> votes(n_frag);
        for (std::size_t idx = 0; idx < labels.size(); ++idx) {
            const auto frag = static_cast<std::size_t>(f.id[idx]);
            if (kept[frag]) continue;
            const Pixel p = labels.pixel(idx);
            for (int d = 0; d < 4; ++d) {
                const int r = p.row + kDRow4[d];
                const int c = p.col + kDCol4[d];
                if (!labels.contains(r, c)) continue;
                const auto nb_frag = static_cast<std::size_t>(f.id(r, c));
                if (nb_frag == frag || !kept[nb_frag]) continue;
                auto& v = votes[frag];
                const auto lab = static_cast<std::size_t>(labels(r, c));
                if (v.size() <= lab) v.resize(lab + 1, 0);
                ++v[lab];
            }
        }
        std::vector<std::int32_t> target(n_frag, 0);
        bool progress = false;
        for (std::size_t i = 0; i < n_frag; ++i) {
            if (kept[i] || votes[i].empty()) continue;
            const auto best = std::max_element(votes[i].begin(), votes[i].end());  // first max = smallest id
            if (*best == 0) continue;
            target[i] = static_cast<std::int32_t>(best - votes[i].begin());
            progress = true;
        }
        if (!progress) break;
        for (std::size_t idx = 0; idx < labels.size(); ++idx) {
            const auto frag = static_cast<std::size_t>(f.id[idx]);
            if (target[frag] != 0) {
                labels[idx] = target[frag];
                ++relabelled;
            }
        }
    }
    return relabelled;
}

SuperpixelMap segment(const SarImage& img, const EngineConfig& cfg) {
    SuperpixelMap spm = init_grid(img, cfg);
    for (int t = 1; t <= cfg.max_iters; ++t) {
        const double changed = update_labels(img, spm);
        enforce_connectivity(spm);
        update_theta(img, spm, cfg);
        update_omega(spm, cfg.alpha);
        spm.iterations_run = t;
        spm.change_trace.push_back(changed);
        if (changed < cfg.change_tol) break;
    }
    return spm;
}

std::vector<std::size_t> label_counts(const LabelGrid& labels, int K) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(K), 0);
    for (std::int32_t lab : labels.values()) {
        if (lab < 1 || lab > K) throw PreconditionError("label " + std::to_string(lab) + " outside 1..K");
        ++counts[static_cast<std::size_t>(lab - 1)];
    }
    return counts;
}

std::vector<int> fragment_counts(const LabelGrid& labels, int K) {
    const Fragments f = label_fragments(labels);
    std::vector<int> out(static_cast<std::size_t>(K), 0);
    for (std::int32_t lab : f.label) {
        if (lab >= 1 && lab <= K) ++out[static_cast<std::size_t>(lab - 1)];
    }
    return out;
}

Grid<std::uint8_t> superpixel_boundary_mask(const LabelGrid& labels) {
    Grid<std::uint8_t> mask(labels.width(), labels.height(), 0);
    for (int r = 0; r < labels.height(); ++r) {
        for (int c = 0; c < labels.width(); ++c) {
            for (int d = 0; d < 4; ++d) {
                const int rr = r + kDRow4[d];
                const int cc = c + kDCol4[d];
                if (labels.contains(rr, cc) && labels(rr, cc) != labels(r, c)) {
                    mask(r, c) = 1;
                    break;
                }
            }
        }
    }
    return mask;
}

}  // namespace sarcoast
