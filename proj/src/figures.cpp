#include "lacuna/figures.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "lacuna/numeric.hpp"

namespace lacuna {

namespace {

std::vector<FigurePreset> build_presets() {
    std::vector<FigurePreset> v;
    const auto w = [&](const char* id, const char* desc, double lambda, double beta) {
        v.push_back({id, desc, presets::weierstrass(beta, lambda, ZeroPhases{})});
    };
    w("fig1a", "weierstrass lambda=6 beta=0.3", 6.0, 0.3);
    w("fig1b", "weierstrass lambda=6 beta=0.7", 6.0, 0.7);
    w("fig1c", "weierstrass lambda=6 beta=0.9", 6.0, 0.9);
    w("fig1d", "weierstrass lambda=6.5 beta=0.7", 6.5, 0.7);
    w("fig1e", "weierstrass lambda=sqrt(43) beta=0.7", std::sqrt(43.0), 0.7);
    w("fig1f", "weierstrass lambda=2pi beta=0.7", kTwoPi, 0.7);
    w("fig1g", "weierstrass lambda=30 beta=0.4", 30.0, 0.4);
    w("fig1h", "weierstrass lambda=30 beta=0.5", 30.0, 0.5);
    w("fig1i", "weierstrass lambda=30 beta=0.6", 30.0, 0.6);
    const auto r = [&](const char* id, const char* desc, double a, double b) {
        v.push_back({id, desc, presets::riemann(a, b, ZeroPhases{})});
    };
    r("fig2a", "riemann a=6 b=2 tau=0.25", 6.0, 2.0);
    r("fig2b", "riemann a=3 b=2 tau=0.5", 3.0, 2.0);
    r("fig2c", "riemann a=2 b=2 tau=0.75", 2.0, 2.0);
    v.push_back({"fig3a", "expdiff lambda=6 beta=0.3 theta_n=n*pi mod 1",
                 presets::expdiff(0.3, 6.0, EquidistributedPhases{kPi})});
    v.push_back({"fig3b", "expdiff lambda=6 beta=0.6 theta_n=n*pi mod 1",
                 presets::expdiff(0.6, 6.0, EquidistributedPhases{kPi})});
    v.push_back({"fig4a", "expdiff lambda=6 beta=0.3 theta_n iid uniform", presets::expdiff(0.3, 6.0, SteinhausPhases{0})});
    v.push_back({"fig4b", "expdiff lambda=6 beta=0.6 theta_n iid uniform", presets::expdiff(0.6, 6.0, SteinhausPhases{0})});
    v.push_back({"fig5a", "takagi_sine lambda=2 beta=0.3", presets::takagi(0.3, 2.0, ZeroPhases{})});
    v.push_back({"fig5b", "takagi_sine lambda=2 beta=0.6", presets::takagi(0.6, 2.0, ZeroPhases{})});
    v.push_back({"fig5c", "takagi_sine lambda=2 beta=1", presets::takagi(1.0, 2.0, ZeroPhases{})});
    v.push_back({"fig6", "sum n^-2 e(2^n x) tau=0", presets::dyadic_tau_zero(ZeroPhases{})});
    return v;
}

}  // namespace

const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets = build_presets();
    return presets;
}

const FigurePreset& figure_preset(const std::string& id) {
    for (const auto& p : figure_presets())
        if (p.id == id) return p;
    throw ValidationError("unknown figure preset '" + id + "'");
}

Raster rasterize(const PointCloud& points, int size) {
    if (size < 8) throw ValidationError("canvas too small");
    Raster r{size, size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size * 3, 255)};
    const std::size_t n = points.size();
    if (n == 0) return r;
    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {-lo[0], -lo[1]};
    for (std::size_t i = 0; i < n; ++i)
        for (int a = 0; a < 2; ++a) {
            lo[a] = std::min(lo[a], points.point(i)[a]);
            hi[a] = std::max(hi[a], points.point(i)[a]);
        }
    const int margin = size / 32;
    const double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-300});
    const double scale = (size - 1 - 2 * margin) / span;
    const double cx = 0.5 * (lo[0] + hi[0]), cy = 0.5 * (lo[1] + hi[1]);
    const double mid = 0.5 * (size - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = points.point(i);
        const auto px = static_cast<long>(std::lround(mid + (p[0] - cx) * scale));
        const auto py = static_cast<long>(std::lround(mid - (p[1] - cy) * scale));
        if (px < 0 || py < 0 || px >= size || py >= size) continue;
        const std::size_t o = (static_cast<std::size_t>(py) * size + static_cast<std::size_t>(px)) * 3;
        r.rgb[o] = r.rgb[o + 1] = r.rgb[o + 2] = 0;
    }
    return r;
}

Raster render_figure(const FigurePreset& preset, int threads) {
    EvalOptions opts;
    opts.threads = threads;
    const IntervalSet set{0.0, 1.0, preset.points};
    const SampledCurve curve = eval_series(preset.spec, set, preset.eps_tail, 0, opts);
    return rasterize(image_points(curve));
}

void write_png(const Raster& raster, const std::string& path) {
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
    if (!fp) throw Error("cannot open '" + path + "' for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("PNG encoding failed for '" + path + "'");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(raster.width), static_cast<png_uint_32>(raster.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < raster.height; ++y)
        png_write_row(png, raster.rgb.data() + static_cast<std::size_t>(y) * raster.width * 3);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace lacuna
