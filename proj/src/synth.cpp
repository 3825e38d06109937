#include "sarcoast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "sarcoast/error.hpp"

namespace sarcoast {
namespace {

constexpr int kSinusoidTerms = 5;
constexpr int kMaxFrequency = 8;
constexpr double kMaxDiscAreaFraction = 0.01;
constexpr double kCoastMargin = 6.0;
constexpr double kFrameMargin = 4.0;
constexpr double kDiscGap = 4.0;

Rng stream(std::uint64_t seed, std::uint32_t purpose) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), purpose};
    return Rng(seq);
}

// Exact 1-D squared distance transform of sampled function f (lower envelope of parabolas).
void edt_1d(std::span<const double> f, std::span<double> d, std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[static_cast<std::size_t>(q)] == inf) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -inf;
            z[1] = inf;
            continue;
        }
        // z[0] is -inf, so k never drops below 0
        double s = 0.0;
        for (;;) {
            const int p = v[static_cast<std::size_t>(k)];
            s = ((f[static_cast<std::size_t>(q)] + double(q) * q) - (f[static_cast<std::size_t>(p)] + double(p) * p)) /
                (2.0 * (q - p));
            if (s > z[static_cast<std::size_t>(k)]) break;
            --k;
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        z[static_cast<std::size_t>(k) + 1] = inf;
    }
    if (k < 0) {
        std::fill(d.begin(), d.end(), inf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
        const int p = v[static_cast<std::size_t>(j)];
        d[static_cast<std::size_t>(q)] = double(q - p) * (q - p) + f[static_cast<std::size_t>(p)];
    }
}

bool disc_clear(const SyntheticScene& scene, const Disc& d) {
    const auto& spec = scene.spec;
    if (d.row - d.radius < kFrameMargin || d.col - d.radius < kFrameMargin ||
        d.row + d.radius > spec.height - 1 - kFrameMargin || d.col + d.radius > spec.width - 1 - kFrameMargin) {
        return false;
    }
    const int c0 = std::max(0, static_cast<int>(std::floor(d.col - d.radius - kCoastMargin)));
    const int c1 = std::min(spec.width - 1, static_cast<int>(std::ceil(d.col + d.radius + kCoastMargin)));
    for (int c = c0; c <= c1; ++c) {
        // vertical clearance from the coast over the disc's column span
        if (std::abs(scene.coast_row(c) - (d.row + 0.5)) < d.radius + kCoastMargin) return false;
    }
    for (const auto* set : {&scene.lakes, &scene.islets}) {
        for (const Disc& o : *set) {
            if (std::hypot(o.row - d.row, o.col - d.col) < o.radius + d.radius + kDiscGap) return false;
        }
    }
    return true;
}

void place_discs(SyntheticScene& scene, int count, LandClass inside, Rng& rng) {
    if (count == 0) return;
    const auto& spec = scene.spec;
    const double area = kMaxDiscAreaFraction * spec.width * spec.height;
    // strictly below the area cap once rasterised
    const double r_max = std::min(10.0, std::floor(std::sqrt(area / std::numbers::pi)) - 1.0);
    const double r_min = std::min(4.0, r_max);
    if (r_max < 2.0) throw PreconditionError("gen_coast_scene: image too small for lakes or islets");

    std::uniform_real_distribution<double> radius(r_min, r_max);
    std::uniform_real_distribution<double> row(0.0, spec.height - 1.0);
    std::uniform_real_distribution<double> col(0.0, spec.width - 1.0);
    auto& out = inside == LandClass::land ? scene.lakes : scene.islets;
    for (int placed = 0; placed < count; ++placed) {
        bool ok = false;
        for (int attempt = 0; attempt < 20000 && !ok; ++attempt) {
            Disc d{std::round(row(rng)), std::round(col(rng)), std::round(radius(rng))};
            const bool in_land = d.row + 0.5 < scene.coast_row(static_cast<int>(d.col));
            if (in_land != (inside == LandClass::land) || !disc_clear(scene, d)) continue;
            out.push_back(d);
            ok = true;
        }
        if (!ok) throw PreconditionError("gen_coast_scene: could not place all lakes/islets");
    }
}

void paint_disc(BinaryMask& mask, const Disc& d, LandClass cls) {
    for (int r = static_cast<int>(d.row - d.radius); r <= static_cast<int>(d.row + d.radius); ++r) {
        for (int c = static_cast<int>(d.col - d.radius); c <= static_cast<int>(d.col + d.radius); ++c) {
            if (!mask.contains(r, c)) continue;
            const double dr = r - d.row;
            const double dc = c - d.col;
            if (dr * dr + dc * dc <= d.radius * d.radius) mask(r, c) = cls;
        }
    }
}

}  // namespace

double SyntheticScene::coast_row(int col) const {
    double b = spec.height / 2.0;
    for (const auto& t : terms) {
        b += t.amplitude * std::sin(2.0 * std::numbers::pi * t.frequency * col / spec.width + t.phase);
    }
    return b;
}

SyntheticScene gen_coast_scene(const SceneSpec& spec) {
    if (spec.width < 4 || spec.height < 4) throw PreconditionError("gen_coast_scene: image too small");
    if (!spec.land.valid() || !spec.water.valid()) throw DomainError("gen_coast_scene: invalid class parameters");
    if (!(spec.roughness >= 0.0) || !(spec.roughness < spec.height / 4.0)) {
        throw PreconditionError("gen_coast_scene: roughness must lie in [0, height/4)");
    }
    if (spec.lakes < 0 || spec.islets < 0) throw PreconditionError("gen_coast_scene: negative disc count");

    SyntheticScene scene;
    scene.spec = spec;

    Rng geometry = stream(spec.seed, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> freq(1, kMaxFrequency);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<double> weights(kSinusoidTerms);
    double weight_sum = 0.0;
    for (int j = 0; j < kSinusoidTerms; ++j) {
        Sinusoid t;
        weights[static_cast<std::size_t>(j)] = unit(geometry);
        weight_sum += weights[static_cast<std::size_t>(j)];
        t.frequency = freq(geometry);
        t.phase = phase(geometry);
        scene.terms.push_back(t);
    }
    for (int j = 0; j < kSinusoidTerms; ++j) {
        scene.terms[static_cast<std::size_t>(j)].amplitude =
            weight_sum > 0.0 ? spec.roughness * weights[static_cast<std::size_t>(j)] / weight_sum : 0.0;
    }

    scene.coast_mask = BinaryMask(spec.width, spec.height, LandClass::water);
    for (int c = 0; c < spec.width; ++c) {
        const double b = scene.coast_row(c);
        for (int r = 0; r < spec.height && r + 0.5 < b; ++r) scene.coast_mask(r, c) = LandClass::land;
    }

    Rng discs = stream(spec.seed, 3);
    place_discs(scene, spec.lakes, LandClass::land, discs);
    place_discs(scene, spec.islets, LandClass::water, discs);
    scene.truth_mask = scene.coast_mask;
    for (const Disc& d : scene.lakes) paint_disc(scene.truth_mask, d, LandClass::water);
    for (const Disc& d : scene.islets) paint_disc(scene.truth_mask, d, LandClass::land);

    const std::size_t n = static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height);
    Rng land_rng = stream(spec.seed, 1);
    Rng water_rng = stream(spec.seed, 2);
    const auto land = ggd_sample(spec.land, n, land_rng);
    const auto water = ggd_sample(spec.water, n, water_rng);
    scene.image.data = Grid<double>(spec.width, spec.height, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        scene.image.data[i] = scene.truth_mask[i] == LandClass::land ? land[i] : water[i];
    }
    scene.truth_interface = interface_pairs(scene.truth_mask);
    return scene;
}

std::vector<InterfacePair> interface_pairs(const BinaryMask& mask) {
    std::vector<InterfacePair> pairs;
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            // look right and down only, so each pair appears once
            for (auto [dr, dc] : {std::pair{0, 1}, std::pair{1, 0}}) {
                const int rr = r + dr;
                const int cc = c + dc;
                if (!mask.contains(rr, cc) || mask(r, c) == mask(rr, cc)) continue;
                if (mask(r, c) == LandClass::land) {
                    pairs.push_back({{r, c}, {rr, cc}});
                } else {
                    pairs.push_back({{rr, cc}, {r, c}});
                }
            }
        }
    }
    return pairs;
}

std::vector<Pixel> interface_pixels(const BinaryMask& mask) {
    Grid<std::uint8_t> on(mask.width(), mask.height(), 0);
    for (const auto& [land, water] : interface_pairs(mask)) {
        on(land.row, land.col) = 1;
        on(water.row, water.col) = 1;
    }
    std::vector<Pixel> out;
    for (std::size_t i = 0; i < on.size(); ++i) {
        if (on[i]) out.push_back(on.pixel(i));
    }
    return out;
}

Grid<double> distance_to_set(int width, int height, std::span<const Pixel> targets) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    Grid<double> d(width, height, inf);
    for (const Pixel& p : targets) {
        if (d.contains(p.row, p.col)) d(p.row, p.col) = 0.0;
    }
    const int n = std::max(width, height);
    std::vector<double> f(static_cast<std::size_t>(n));
    std::vector<double> out(static_cast<std::size_t>(n));
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);

    for (int c = 0; c < width; ++c) {
        for (int r = 0; r < height; ++r) f[static_cast<std::size_t>(r)] = d(r, c);
        edt_1d({f.data(), static_cast<std::size_t>(height)}, {out.data(), static_cast<std::size_t>(height)}, v, z);
        for (int r = 0; r < height; ++r) d(r, c) = out[static_cast<std::size_t>(r)];
    }
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) f[static_cast<std::size_t>(c)] = d(r, c);
        edt_1d({f.data(), static_cast<std::size_t>(width)}, {out.data(), static_cast<std::size_t>(width)}, v, z);
        for (int c = 0; c < width; ++c) d(r, c) = std::sqrt(out[static_cast<std::size_t>(c)]);
    }
    return d;
}

BoundaryScore boundary_score(std::span<const Pixel> extracted, std::span<const Pixel> truth, double tol) {
    if (!(tol >= 0.0)) throw PreconditionError("boundary_score: tol must be >= 0");
    BoundaryScore s;
    if (extracted.empty() && truth.empty()) {
        s.precision = s.recall = s.f1 = 1.0;
        return s;
    }
    if (extracted.empty() || truth.empty()) {
        s.mean_distance = s.hausdorff = std::numeric_limits<double>::infinity();
        return s;
    }

    int w = 0;
    int h = 0;
    for (const auto* set : {&extracted, &truth}) {
        for (const Pixel& p : *set) {
            if (p.row < 0 || p.col < 0) throw PreconditionError("boundary_score: negative pixel coordinate");
            w = std::max(w, p.col + 1);
            h = std::max(h, p.row + 1);
        }
    }
    const Grid<double> to_truth = distance_to_set(w, h, truth);
    const Grid<double> to_extracted = distance_to_set(w, h, extracted);

    double sum = 0.0;
    std::size_t hits_e = 0;
    for (const Pixel& p : extracted) {
        const double dist = to_truth(p.row, p.col);
        sum += dist;
        s.hausdorff = std::max(s.hausdorff, dist);
        if (dist <= tol) ++hits_e;
    }
    std::size_t hits_t = 0;
    for (const Pixel& p : truth) {
        const double dist = to_extracted(p.row, p.col);
        sum += dist;
        s.hausdorff = std::max(s.hausdorff, dist);
        if (dist <= tol) ++hits_t;
    }
    s.precision = static_cast<double>(hits_e) / static_cast<double>(extracted.size());
    s.recall = static_cast<double>(hits_t) / static_cast<double>(truth.size());
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    s.mean_distance = sum / static_cast<double>(extracted.size() + truth.size());
    return s;
}

double superpixel_boundary_recall(const LabelGrid& labels, std::span<const Pixel> truth, double tol) {
    if (!(tol >= 0.0)) throw PreconditionError("superpixel_boundary_recall: tol must be >= 0");
    if (truth.empty()) return 1.0;
    const auto boundary = superpixel_boundary_mask(labels);
    std::vector<Pixel> pts;
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        if (boundary[i]) pts.push_back(boundary.pixel(i));
    }
    const Grid<double> dist = distance_to_set(labels.width(), labels.height(), pts);
    std::size_t hits = 0;
    for (const Pixel& p : truth) {
        if (labels.contains(p.row, p.col) && dist(p.row, p.col) <= tol) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace sarcoast
