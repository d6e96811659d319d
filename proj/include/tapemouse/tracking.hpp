#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "tapemouse/imaging.hpp"
#include "tapemouse/segmentation.hpp"

namespace tapemouse {

enum class Connectivity { Four = 4, Eight = 8 };

struct BoundingBox {
    std::size_t xmin = 0;
    std::size_t ymin = 0;
    std::size_t xmax = 0;
    std::size_t ymax = 0;

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Component {
    std::size_t area = 0;
    Point2d centroid;  // mean of pixel centres (px + 0.5, py + 0.5)
    BoundingBox bbox;
};

/// Maximal connected regions of set bits, ordered by first pixel in raster
/// order. Two-pass labelling with union-find.
std::vector<Component> connected_components(const BinaryMask& mask,
                                            Connectivity connectivity = Connectivity::Eight);

enum class MarkerId { Yellow, Red };

std::string_view to_string(MarkerId id) noexcept;

/// One tape colour's detection in one frame. When `present` is false the
/// remaining fields carry no meaning.
struct MarkerObservation {
    MarkerId id = MarkerId::Yellow;
    bool present = false;
    Point2d centroid;
    std::size_t area = 0;
    BoundingBox bbox;

    static MarkerObservation absent(MarkerId id) { return {id, false, {}, 0, {}}; }
    static MarkerObservation at(MarkerId id, Point2d centroid, std::size_t area = 1) {
        return {id, true, centroid, area, {}};
    }
};

/// Largest component with area >= min_blob_area; equal areas go to the
/// smaller (ymin, xmin) bounding-box corner.
MarkerObservation extract_marker(const BinaryMask& mask, MarkerId id, std::size_t min_blob_area,
                                 Connectivity connectivity = Connectivity::Eight);

/// Euclidean centroid distance, or nullopt when either marker is absent.
std::optional<double> marker_distance(const MarkerObservation& a, const MarkerObservation& b);

/// `base_area` is defined at 640x480; other resolutions scale by pixel count.
std::size_t scaled_min_blob_area(std::size_t base_area, std::size_t width, std::size_t height);

}  // namespace tapemouse
