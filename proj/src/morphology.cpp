#include "sarcoast/morphology.hpp"

#include <algorithm>
#include <string>

#include "sarcoast/error.hpp"

namespace sarcoast {

std::vector<Component> connected_components(const BinaryMask& mask, LandClass cls, Connectivity conn) {
    const int n_dirs = conn == Connectivity::four ? 4 : 8;
    const int* drow = conn == Connectivity::four ? kDRow4 : kDRow8;
    const int* dcol = conn == Connectivity::four ? kDCol4 : kDCol8;

    std::vector<Component> comps;
    std::vector<bool> seen(mask.size(), false);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (seen[start] || mask[start] != cls) continue;
        Component comp;
        seen[start] = true;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            comp.pixels.push_back(cur);
            const Pixel p = mask.pixel(cur);
            for (int d = 0; d < n_dirs; ++d) {
                const int r = p.row + drow[d];
                const int c = p.col + dcol[d];
                if (!mask.contains(r, c)) continue;
                const std::size_t nb = mask.index(r, c);
                if (!seen[nb] && mask[nb] == cls) {
                    seen[nb] = true;
                    stack.push_back(nb);
                }
            }
        }
        std::sort(comp.pixels.begin(), comp.pixels.end());
        comps.push_back(std::move(comp));
    }
    // discovery order already sorts by first pixel, so a stable sort on size suffices
    std::stable_sort(comps.begin(), comps.end(),
                     [](const Component& a, const Component& b) { return a.size() > b.size(); });
    return comps;
}

FillResult fill_voids(const BinaryMask& mask) {
    FillResult res;
    res.mask = mask;
    for (int pass = 0;; ++pass) {
        const auto land = connected_components(res.mask, LandClass::land, fill_connectivity(LandClass::land));
        const auto water = connected_components(res.mask, LandClass::water, fill_connectivity(LandClass::water));
        if (pass == 0) {
            res.land_components_before = land.size();
            res.water_components_before = water.size();
        }
        res.land_components_after = land.size();
        res.water_components_after = water.size();
        if (land.empty() || water.empty()) {
            res.one_class_only = true;
            return res;
        }
        if (land.size() == 1 && water.size() == 1) {
            res.converged = true;
            return res;
        }
        if (pass == kMaxFillPasses) return res;

        for (std::size_t i = 1; i < land.size(); ++i) {
            for (std::size_t idx : land[i].pixels) res.mask[idx] = LandClass::water;
        }
        for (std::size_t i = 1; i < water.size(); ++i) {
            for (std::size_t idx : water[i].pixels) res.mask[idx] = LandClass::land;
        }
        res.passes = pass + 1;
    }
}

BorderMask extract_border(const BinaryMask& filled, LandClass side) {
    const auto land = connected_components(filled, LandClass::land, fill_connectivity(LandClass::land));
    const auto water = connected_components(filled, LandClass::water, fill_connectivity(LandClass::water));
    if (land.size() != 1 || water.size() != 1) {
        throw PreconditionError("extract_border: mask must hold exactly one land and one water component (got " +
                                std::to_string(land.size()) + " land, " + std::to_string(water.size()) +
                                " water)");
    }

    const LandClass other = opposite(side);
    BorderMask border(filled.width(), filled.height(), 0);
    for (int r = 1; r + 1 < filled.height(); ++r) {
        for (int c = 1; c + 1 < filled.width(); ++c) {
            if (filled(r, c) != side) continue;
            for (int d = 0; d < 4; ++d) {
                const int rr = r + kDRow4[d];
                const int cc = c + kDCol4[d];
                if (filled(rr, cc) == other && !filled.on_frame(rr, cc)) {
                    border(r, c) = 1;
                    break;
                }
            }
        }
    }
    return border;
}

namespace {

int unvisited_neighbours(const BorderMask& border, const Grid<std::uint8_t>& visited, Pixel p) {
    int n = 0;
    for (int d = 0; d < 8; ++d) {
        const int r = p.row + kDRow8[d];
        const int c = p.col + kDCol8[d];
        if (border.contains(r, c) && border(r, c) && !visited(r, c)) ++n;
    }
    return n;
}

}  // namespace

std::vector<Chain> trace_polyline(const BorderMask& border) {
    std::vector<Chain> chains;
    Grid<std::uint8_t> grouped(border.width(), border.height(), 0);
    Grid<std::uint8_t> visited(border.width(), border.height(), 0);

    for (std::size_t start = 0; start < border.size(); ++start) {
        if (!border[start] || grouped[start]) continue;

        // collect the 8-connected group, then sort to raster order
        std::vector<std::size_t> group{start};
        grouped[start] = 1;
        for (std::size_t i = 0; i < group.size(); ++i) {
            const Pixel p = border.pixel(group[i]);
            for (int d = 0; d < 8; ++d) {
                const int r = p.row + kDRow8[d];
                const int c = p.col + kDCol8[d];
                if (border.contains(r, c) && border(r, c) && !grouped(r, c)) {
                    grouped(r, c) = 1;
                    group.push_back(border.index(r, c));
                }
            }
        }
        std::sort(group.begin(), group.end());

        std::size_t remaining = group.size();
        while (remaining > 0) {
            std::size_t first_unvisited = border.size();
            std::size_t first_endpoint = border.size();
            for (std::size_t idx : group) {
                if (visited[idx]) continue;
                if (first_unvisited == border.size()) first_unvisited = idx;
                if (unvisited_neighbours(border, visited, border.pixel(idx)) <= 1) {
                    first_endpoint = idx;
                    break;
                }
            }
            Pixel cur = border.pixel(first_endpoint != border.size() ? first_endpoint : first_unvisited);

            Chain chain{cur};
            visited(cur.row, cur.col) = 1;
            --remaining;
            for (;;) {
                int best_dir = -1;
                int best_rank = 0;
                for (int d = 0; d < 8; ++d) {
                    const int r = cur.row + kDRow8[d];
                    const int c = cur.col + kDCol8[d];
                    if (!border.contains(r, c) || !border(r, c) || visited(r, c)) continue;
                    // 4-neighbours (even directions) first, then fewest onward options
                    const int rank = (d % 2) * 16 + unvisited_neighbours(border, visited, {r, c});
                    if (best_dir < 0 || rank < best_rank) {
                        best_dir = d;
                        best_rank = rank;
                    }
                }
                if (best_dir < 0) break;
                cur = {cur.row + kDRow8[best_dir], cur.col + kDCol8[best_dir]};
                visited(cur.row, cur.col) = 1;
                --remaining;
                chain.push_back(cur);
            }
            chains.push_back(std::move(chain));
        }
    }
    return chains;
}

std::size_t junction_count(const BorderMask& border) {
    std::size_t junctions = 0;
    for (int r = 0; r < border.height(); ++r) {
        for (int c = 0; c < border.width(); ++c) {
            if (!border(r, c)) continue;
            // count separate runs of border pixels around the 8-neighbourhood
            int runs = 0;
            for (int d = 0; d < 8; ++d) {
                auto on = [&](int dir) {
                    const int rr = r + kDRow8[dir];
                    const int cc = c + kDCol8[dir];
                    return border.contains(rr, cc) && border(rr, cc) != 0;
                };
                if (on(d) && !on((d + 7) % 8)) ++runs;
            }
            if (runs >= 3) ++junctions;
        }
    }
    return junctions;
}

std::vector<Pixel> border_pixels(const BorderMask& border) {
    std::vector<Pixel> out;
    for (std::size_t i = 0; i < border.size(); ++i) {
        if (border[i]) out.push_back(border.pixel(i));
    }
    return out;
}

}  // namespace sarcoast
