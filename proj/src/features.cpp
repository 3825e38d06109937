#include "sarcoast/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "sarcoast/clustering.hpp"
#include "sarcoast/error.hpp"

namespace sarcoast {

double superpixel_entropy(std::span<const double> members, double global_min, double global_max, int bins) {
    if (members.empty()) throw PreconditionError("superpixel_entropy: empty superpixel");
    if (!(global_max > global_min)) throw PreconditionError("superpixel_entropy: global_max must exceed global_min");
    if (bins < 1) throw PreconditionError("superpixel_entropy: bins must be >= 1");

    std::vector<std::size_t> hist(static_cast<std::size_t>(bins), 0);
    const double scale = bins / (global_max - global_min);
    for (double x : members) {
        const double pos = (x - global_min) * scale;
        const int bin = std::clamp(static_cast<int>(std::floor(pos)), 0, bins - 1);
        ++hist[static_cast<std::size_t>(bin)];
    }
    const double n = static_cast<double>(members.size());
    double s = 0.0;
    for (std::size_t count : hist) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / n;
        s -= p * std::log2(p);
    }
    return std::max(s, 0.0);
}

double superpixel_median(std::span<const double> members) {
    if (members.empty()) throw PreconditionError("superpixel_median: empty superpixel");
    std::vector<double> v(members.begin(), members.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<FeatureRow> compute_features(const SarImage& img, const SuperpixelMap& spm, int bins) {
    const auto values = img.data.values();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double gmin = *lo;
    // a constant image still needs a non-empty histogram range
    const double gmax = *hi > *lo ? *hi : *lo + 1.0;

    std::vector<std::vector<double>> members(static_cast<std::size_t>(spm.K));
    for (std::size_t i = 0; i < values.size(); ++i) {
        members[static_cast<std::size_t>(spm.labels[i] - 1)].push_back(values[i]);
    }
    std::vector<FeatureRow> rows;
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (members[k].empty()) continue;
        rows.push_back({static_cast<int>(k + 1), superpixel_entropy(members[k], gmin, gmax, bins),
                        superpixel_median(members[k])});
    }
    return rows;
}

void write_features_csv(const std::filesystem::path& path, std::span<const FeatureRow> rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.precision(17);
    out << "superpixel_id,entropy,median\n";
    for (const auto& r : rows) out << r.superpixel_id << ',' << r.entropy << ',' << r.median << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

LandClass ClassAssignment::at(int superpixel_id) const {
    const auto it = classes.find(superpixel_id);
    if (it == classes.end()) {
        throw PreconditionError("no class assigned to superpixel " + std::to_string(superpixel_id));
    }
    return it->second;
}

ClassAssignment cluster_two(std::span<const FeatureRow> rows, const ClusterOptions& opts) {
    if (rows.size() < 2) throw PreconditionError("cluster_two: need at least two feature rows");
    const std::size_t n = rows.size();

    auto standardise = [&](auto get) {
        double mean = 0.0;
        for (const auto& r : rows) mean += get(r);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& r : rows) var += (get(r) - mean) * (get(r) - mean);
        var /= static_cast<double>(n);
        std::vector<double> z(n, 0.0);
        if (var > 0.0) {
            const double sd = std::sqrt(var);
            for (std::size_t i = 0; i < n; ++i) z[i] = (get(rows[i]) - mean) / sd;
        }
        return z;
    };
    const auto ze = standardise([](const FeatureRow& r) { return r.entropy; });
    const auto zm = standardise([](const FeatureRow& r) { return r.median; });

    std::vector<std::array<double, 2>> points(n);
    double total_ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        points[i] = {ze[i], zm[i]};
        total_ss += ze[i] * ze[i] + zm[i] * zm[i];
    }

    ClassAssignment out;
    if (total_ss == 0.0) {
        out.degenerate = true;
        for (const auto& r : rows) out.classes[r.superpixel_id] = LandClass::water;
        return out;
    }

    const auto merges = ward_linkage(points);
    const auto group = cut_dendrogram(merges, n, 2);

    std::array<double, 2> count{}, raw_median{}, raw_entropy{};
    std::array<std::array<double, 2>, 2> centroid{};
    for (std::size_t i = 0; i < n; ++i) {
        const auto g = static_cast<std::size_t>(group[i]);
        count[g] += 1.0;
        raw_median[g] += rows[i].median;
        raw_entropy[g] += rows[i].entropy;
        centroid[g][0] += points[i][0];
        centroid[g][1] += points[i][1];
    }
    double between_ss = 0.0;
    for (std::size_t g = 0; g < 2; ++g) {
        raw_median[g] /= count[g];
        raw_entropy[g] /= count[g];
        centroid[g][0] /= count[g];
        centroid[g][1] /= count[g];
        // overall z-centroid is the origin
        between_ss += count[g] * (centroid[g][0] * centroid[g][0] + centroid[g][1] * centroid[g][1]);
    }
    out.explained = between_ss / total_ss;

    std::size_t water_group = 0;
    if (raw_median[1] < raw_median[0] || (raw_median[1] == raw_median[0] && raw_entropy[1] < raw_entropy[0])) {
        water_group = 1;
    }
    out.degenerate = out.explained < opts.min_explained;
    for (std::size_t i = 0; i < n; ++i) {
        const bool water = out.degenerate || static_cast<std::size_t>(group[i]) == water_group;
        out.classes[rows[i].superpixel_id] = water ? LandClass::water : LandClass::land;
    }
    return out;
}

BinaryMask build_binary_mask(const SuperpixelMap& spm, const ClassAssignment& ca) {
    BinaryMask mask(spm.labels.width(), spm.labels.height(), LandClass::water);
    for (std::size_t i = 0; i < spm.labels.size(); ++i) mask[i] = ca.at(spm.labels[i]);
    return mask;
}

}  // namespace sarcoast
