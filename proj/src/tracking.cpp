#include "tapemouse/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace tapemouse {

namespace {

class DisjointSet {
public:
    std::uint32_t make() {
        parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
        return parent_.back();
    }

    std::uint32_t find(std::uint32_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        // Keep the smaller label as root so roots follow raster order.
        if (b < a) {
            std::swap(a, b);
        }
        parent_[b] = a;
    }

    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::uint32_t> parent_;
};

constexpr std::uint32_t kNoLabel = UINT32_MAX;

}  // namespace

std::vector<Component> connected_components(const BinaryMask& mask, Connectivity connectivity) {
    const std::size_t w = mask.width();
    const std::size_t h = mask.height();
    const bool eight = connectivity == Connectivity::Eight;
    const auto bits = mask.bits();

    // Rows outside [y_begin, y_end) hold no set bits.
    std::size_t y_begin = 0;
    while (y_begin < h && std::find(&bits[y_begin * w], &bits[y_begin * w] + w, 1) == &bits[y_begin * w] + w) {
        ++y_begin;
    }
    if (y_begin == h) {
        return {};
    }
    std::size_t y_end = h;
    while (std::find(&bits[(y_end - 1) * w], &bits[(y_end - 1) * w] + w, 1) == &bits[(y_end - 1) * w] + w) {
        --y_end;
    }

    std::vector<std::uint32_t> labels(w * h, kNoLabel);
    DisjointSet sets;

    // First pass: provisional labels from already-visited neighbours.
    for (std::size_t y = y_begin; y < y_end; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            if (bits[y * w + x] == 0) {
                continue;
            }
            std::uint32_t neighbours[4];
            int n = 0;
            if (x > 0 && labels[y * w + x - 1] != kNoLabel) {
                neighbours[n++] = labels[y * w + x - 1];
            }
            if (y > 0) {
                const std::size_t up = (y - 1) * w;
                if (labels[up + x] != kNoLabel) {
                    neighbours[n++] = labels[up + x];
                }
                if (eight && x > 0 && labels[up + x - 1] != kNoLabel) {
                    neighbours[n++] = labels[up + x - 1];
                }
                if (eight && x + 1 < w && labels[up + x + 1] != kNoLabel) {
                    neighbours[n++] = labels[up + x + 1];
                }
            }
            if (n == 0) {
                labels[y * w + x] = sets.make();
                continue;
            }
            const std::uint32_t label = *std::min_element(neighbours, neighbours + n);
            labels[y * w + x] = label;
            for (int i = 0; i < n; ++i) {
                sets.unite(label, neighbours[i]);
            }
        }
    }

    // Second pass: resolve roots and accumulate moments.
    struct Accum {
        std::size_t area = 0;
        double sx = 0.0;
        double sy = 0.0;
        BoundingBox bbox;
    };
    std::vector<std::uint32_t> slot(sets.size(), kNoLabel);
    std::vector<Accum> accums;
    for (std::size_t y = y_begin; y < y_end; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::uint32_t label = labels[y * w + x];
            if (label == kNoLabel) {
                continue;
            }
            const std::uint32_t root = sets.find(label);
            if (slot[root] == kNoLabel) {
                slot[root] = static_cast<std::uint32_t>(accums.size());
                accums.push_back({0, 0.0, 0.0, {x, y, x, y}});
            }
            Accum& a = accums[slot[root]];
            ++a.area;
            a.sx += static_cast<double>(x) + 0.5;
            a.sy += static_cast<double>(y) + 0.5;
            a.bbox.xmin = std::min(a.bbox.xmin, x);
            a.bbox.ymin = std::min(a.bbox.ymin, y);
            a.bbox.xmax = std::max(a.bbox.xmax, x);
            a.bbox.ymax = std::max(a.bbox.ymax, y);
        }
    }

    std::vector<Component> out;
    out.reserve(accums.size());
    for (const Accum& a : accums) {
        const double n = static_cast<double>(a.area);
        out.push_back({a.area, {a.sx / n, a.sy / n}, a.bbox});
    }
    return out;
}

std::string_view to_string(MarkerId id) noexcept {
    return id == MarkerId::Yellow ? "YELLOW" : "RED";
}

MarkerObservation extract_marker(const BinaryMask& mask, MarkerId id, std::size_t min_blob_area,
                                 Connectivity connectivity) {
    const std::vector<Component> components = connected_components(mask, connectivity);
    const Component* best = nullptr;
    for (const Component& c : components) {
        if (c.area < min_blob_area) {
            continue;
        }
        if (best == nullptr || c.area > best->area ||
            (c.area == best->area && std::pair(c.bbox.ymin, c.bbox.xmin) <
                                         std::pair(best->bbox.ymin, best->bbox.xmin))) {
            best = &c;
        }
    }
    if (best == nullptr) {
        return MarkerObservation::absent(id);
    }
    return {id, true, best->centroid, best->area, best->bbox};
}

std::optional<double> marker_distance(const MarkerObservation& a, const MarkerObservation& b) {
    if (!a.present || !b.present) {
        return std::nullopt;
    }
    return std::hypot(a.centroid.x - b.centroid.x, a.centroid.y - b.centroid.y);
}

std::size_t scaled_min_blob_area(std::size_t base_area, std::size_t width, std::size_t height) {
    const double scale = static_cast<double>(width * height) / (640.0 * 480.0);
    return static_cast<std::size_t>(std::lround(static_cast<double>(base_area) * scale));
}

}  // namespace tapemouse
