#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lacuna/pointcloud.hpp"
#include "lacuna/sampler.hpp"

namespace lacuna {

struct FigurePreset {
    std::string id;
    std::string description;
    SeriesSpec spec;
    double eps_tail = 1e-4;
    std::int64_t points = 1 << 20;
};

inline constexpr int kCanvasSize = 1024;

const std::vector<FigurePreset>& figure_presets();

// Throws ValidationError for unknown ids.
const FigurePreset& figure_preset(const std::string& id);

// 8-bit RGB, row-major, black points on white.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;
};

// Axis-equal fit of the first two coordinates into a square canvas, one pixel per point.
Raster rasterize(const PointCloud& points, int size = kCanvasSize);

Raster render_figure(const FigurePreset& preset, int threads = 1);

void write_png(const Raster& raster, const std::string& path);

}  // namespace lacuna
