#include "sarcoast/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "sarcoast/error.hpp"

namespace sarcoast {
namespace {

// Condensed upper-triangular storage of a symmetric matrix with zero diagonal.
class CondensedMatrix {
public:
    explicit CondensedMatrix(std::size_t n) : n_(n), data_(n * (n - 1) / 2) {}

    double& at(std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        return data_[i * n_ - i * (i + 1) / 2 + (j - i - 1)];
    }

private:
    std::size_t n_;
    std::vector<double> data_;
};

}  // namespace

std::vector<WardMerge> ward_linkage(std::span<const std::array<double, 2>> points) {
    const std::size_t n = points.size();
    std::vector<WardMerge> merges;
    if (n < 2) return merges;
    merges.reserve(n - 1);

    // d holds 2 * (increase in SS), i.e. the plain squared distance for singletons.
    CondensedMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = points[i][0] - points[j][0];
            const double dy = points[i][1] - points[j][1];
            d.at(i, j) = dx * dx + dy * dy;
        }
    }

    std::vector<std::size_t> size(n, 1);
    std::vector<std::size_t> node(n);  // dendrogram node currently held by each slot
    std::iota(node.begin(), node.end(), std::size_t{0});
    std::vector<bool> active(n, true);
    std::vector<std::size_t> chain;
    chain.reserve(n);

    while (merges.size() < n - 1) {
        if (chain.empty()) {
            chain.push_back(static_cast<std::size_t>(std::find(active.begin(), active.end(), true) -
                                                     active.begin()));
        }
        for (;;) {
            const std::size_t a = chain.back();
            // Prefer the predecessor on ties so the chain terminates.
            std::size_t b = std::numeric_limits<std::size_t>::max();
            double best = std::numeric_limits<double>::infinity();
            if (chain.size() >= 2) {
                b = chain[chain.size() - 2];
                best = d.at(a, b);
            }
            for (std::size_t k = 0; k < n; ++k) {
                if (!active[k] || k == a) continue;
                const double dk = d.at(a, k);
                if (dk < best) {
                    best = dk;
                    b = k;
                }
            }
            if (chain.size() >= 2 && b == chain[chain.size() - 2]) break;
            chain.push_back(b);
        }

        const std::size_t a = chain.back();
        chain.pop_back();
        const std::size_t b = chain.back();
        chain.pop_back();
        const std::size_t lo = std::min(a, b);
        const std::size_t hi = std::max(a, b);
        const double d_ab = d.at(lo, hi);

        merges.push_back({std::min(node[lo], node[hi]), std::max(node[lo], node[hi]), 0.5 * d_ab,
                          size[lo] + size[hi]});

        // Lance-Williams update for Ward, merged cluster lives in slot `lo`.
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == lo || k == hi) continue;
            const double nk = static_cast<double>(size[k]);
            const double ni = static_cast<double>(size[lo]);
            const double nj = static_cast<double>(size[hi]);
            d.at(lo, k) = ((ni + nk) * d.at(lo, k) + (nj + nk) * d.at(hi, k) - nk * d_ab) / (ni + nj + nk);
        }
        active[hi] = false;
        size[lo] += size[hi];
        node[lo] = n + merges.size() - 1;
    }

    // Sort by cost and renumber created nodes so that position i creates n + i.
    std::vector<std::size_t> order(merges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return merges[x].cost < merges[y].cost; });
    std::vector<std::size_t> renumber(merges.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) renumber[order[pos]] = n + pos;
    auto remap = [&](std::size_t id) { return id < n ? id : renumber[id - n]; };

    std::vector<WardMerge> sorted;
    sorted.reserve(merges.size());
    for (std::size_t idx : order) {
        WardMerge m = merges[idx];
        m.a = remap(m.a);
        m.b = remap(m.b);
        if (m.a > m.b) std::swap(m.a, m.b);
        sorted.push_back(m);
    }
    return sorted;
}

std::vector<int> cut_dendrogram(std::span<const WardMerge> merges, std::size_t n_points, std::size_t clusters) {
    if (clusters == 0 || clusters > n_points) {
        throw PreconditionError("cut_dendrogram: cluster count out of range");
    }
    std::vector<std::size_t> parent(n_points);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    std::vector<std::size_t> representative(n_points + merges.size());
    std::iota(representative.begin(), representative.begin() + static_cast<std::ptrdiff_t>(n_points),
              std::size_t{0});
    const std::size_t to_apply = n_points - clusters;
    for (std::size_t i = 0; i < to_apply && i < merges.size(); ++i) {
        const std::size_t ra = find(representative[merges[i].a]);
        const std::size_t rb = find(representative[merges[i].b]);
        parent[std::max(ra, rb)] = std::min(ra, rb);
        representative[n_points + i] = std::min(ra, rb);
    }

    // Number groups by their smallest member.
    std::vector<int> group_of_root(n_points, -1);
    std::vector<int> out(n_points);
    int next = 0;
    for (std::size_t i = 0; i < n_points; ++i) {
        const std::size_t root = find(i);
        if (group_of_root[root] < 0) group_of_root[root] = next++;
        out[i] = group_of_root[root];
    }
    return out;
}

}  // namespace sarcoast
