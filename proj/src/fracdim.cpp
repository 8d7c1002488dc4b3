#include "lacuna/fracdim.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>

#include "lacuna/numeric.hpp"
#include "lacuna/parallel.hpp"

namespace lacuna {

namespace {

using Key = std::uint64_t;

int axis_bits(int dim) { return dim == 2 ? 32 : 21; }

Key pack(const std::uint64_t* c, int dim) {
    if (dim == 2) return (c[0] << 32) | c[1];
    return (c[0] << 42) | (c[1] << 21) | c[2];
}

void unpack(Key k, int dim, std::uint64_t* c) {
    if (dim == 2) {
        c[0] = k >> 32;
        c[1] = k & 0xffffffffULL;
        return;
    }
    const Key m = (Key{1} << 21) - 1;
    c[0] = k >> 42;
    c[1] = (k >> 21) & m;
    c[2] = k & m;
}

std::int64_t sort_unique_count(std::vector<Key>& v) {
    std::sort(v.begin(), v.end());
    return std::unique(v.begin(), v.end()) - v.begin();
}

struct Bounds {
    double lo[3] = {0, 0, 0};
    double hi[3] = {0, 0, 0};
};

Bounds bounds(const PointCloud& pts) {
    Bounds b;
    for (int a = 0; a < pts.dim; ++a) {
        b.lo[a] = std::numeric_limits<double>::infinity();
        b.hi[a] = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double* p = pts.point(i);
        for (int a = 0; a < pts.dim; ++a) {
            b.lo[a] = std::min(b.lo[a], p[a]);
            b.hi[a] = std::max(b.hi[a], p[a]);
        }
    }
    return b;
}

void check_cloud(const PointCloud& pts) {
    if (pts.dim != 2 && pts.dim != 3) throw ValidationError("box counting supports 2 or 3 dimensions");
    if (pts.size() == 0) throw ValidationError("box counting needs a nonempty point set");
    for (double v : pts.coords)
        if (!std::isfinite(v)) throw ValidationError("point coordinates must be finite");
}

void check_scales(std::span<const double> scales) {
    if (scales.empty()) throw ValidationError("box counting needs at least one scale");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0) || !std::isfinite(scales[i])) throw ValidationError("scales must be positive");
        if (i > 0 && !(scales[i] < scales[i - 1])) throw ValidationError("scales must be strictly decreasing");
    }
}

double extent_of(const Bounds& b, int dim) {
    double e = 0.0;
    for (int a = 0; a < dim; ++a) e = std::max(e, b.hi[a] - b.lo[a]);
    return e;
}

double power_of_two_above(double e) {
    if (!(e > 0.0)) return 1.0;
    int exp = 0;
    std::frexp(e, &exp);  // 2^(exp-1) <= e < 2^exp
    return std::ldexp(1.0, exp);
}

// Sorted unique keys of the cells containing points, with per-chunk work in parallel.
std::vector<Key> unique_cells(const PointCloud& pts, int threads, auto&& cell_of) {
    const std::size_t n = pts.size();
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(n / 65536 + 1, 64));
    std::vector<std::vector<Key>> parts(chunks);
    parallel_chunks(n, chunks, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
        auto& v = parts[c];
        v.reserve(e - b);
        for (std::size_t i = b; i < e; ++i) v.push_back(cell_of(pts.point(i)));
        v.resize(static_cast<std::size_t>(sort_unique_count(v)));
    });
    std::vector<Key> acc = std::move(parts[0]);
    std::vector<Key> tmp;
    for (std::size_t c = 1; c < parts.size(); ++c) {
        tmp.clear();
        tmp.reserve(acc.size() + parts[c].size());
        std::set_union(acc.begin(), acc.end(), parts[c].begin(), parts[c].end(), std::back_inserter(tmp));
        acc.swap(tmp);
    }
    return acc;
}

BoxCountCurve empty_curve(std::span<const double> scales, int offsets, std::size_t n) {
    BoxCountCurve c;
    c.scales.assign(scales.begin(), scales.end());
    c.offsets_averaged = offsets;
    c.sample_count = static_cast<std::int64_t>(n);
    c.counts.resize(scales.size());
    c.mean_counts.resize(scales.size());
    c.min_counts.resize(scales.size());
    return c;
}

void record(BoxCountCurve& c, std::size_t i, const std::vector<std::int64_t>& per_offset) {
    c.counts[i] = per_offset[0];
    double sum = 0.0;
    std::int64_t mn = per_offset[0];
    for (auto v : per_offset) {
        sum += static_cast<double>(v);
        mn = std::min(mn, v);
    }
    c.mean_counts[i] = sum / static_cast<double>(per_offset.size());
    c.min_counts[i] = static_cast<double>(mn);
}

}  // namespace

double grid_extent(const PointCloud& points) {
    check_cloud(points);
    return power_of_two_above(extent_of(bounds(points), points.dim));
}

std::vector<double> dyadic_scales(const PointCloud& points, int j_min, int j_max) {
    if (j_min < 0 || j_max < j_min) throw ValidationError("dyadic_scales needs 0 <= j_min <= j_max");
    const double D = grid_extent(points);
    std::vector<double> out;
    for (int j = j_min; j <= j_max; ++j) out.push_back(std::ldexp(D, -j));
    return out;
}

BoxCountCurve box_count_direct(const PointCloud& pts, std::span<const double> scales, int offsets, int threads) {
    check_cloud(pts);
    check_scales(scales);
    if (offsets < 1) throw ValidationError("offsets must be >= 1");
    const Bounds b = bounds(pts);
    const double D = power_of_two_above(extent_of(b, pts.dim));
    const int dim = pts.dim;
    const double cap = std::ldexp(1.0, axis_bits(dim)) - 2.0;
    BoxCountCurve out = empty_curve(scales, offsets, pts.size());
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const double inv = 1.0 / scales[i];
        if (D * inv + 2.0 > cap) throw ValidationError("scale too fine for the cell index width");
        std::vector<std::int64_t> per_offset(static_cast<std::size_t>(offsets));
        for (int k = 0; k < offsets; ++k) {
            const double shift = static_cast<double>(k) / offsets;
            auto cells = unique_cells(pts, threads, [&](const double* p) {
                std::uint64_t c[3] = {0, 0, 0};
                for (int a = 0; a < dim; ++a)
                    c[a] = static_cast<std::uint64_t>(std::floor((p[a] - b.lo[a]) * inv + shift));
                return pack(c, dim);
            });
            per_offset[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(cells.size());
        }
        record(out, i, per_offset);
    }
    return out;
}

BoxCountCurve box_count(const PointCloud& pts, std::span<const double> scales, int offsets, int threads) {
    check_cloud(pts);
    check_scales(scales);
    if (offsets < 1) throw ValidationError("offsets must be >= 1");
    const Bounds b = bounds(pts);
    const double D = power_of_two_above(extent_of(b, pts.dim));
    const int dim = pts.dim;

    // Hierarchical path: scales D 2^-j with integer j and a power-of-two offset count.
    std::vector<int> levels;
    bool dyadic = std::has_single_bit(static_cast<unsigned>(offsets)) && offsets <= 8;
    for (double s : scales) {
        const double j = std::log2(D / s);
        const double jr = std::nearbyint(j);
        if (std::fabs(j - jr) > 1e-9 || jr < 0 || std::ldexp(D, -static_cast<int>(jr)) != s) {
            dyadic = false;
            break;
        }
        levels.push_back(static_cast<int>(jr));
    }
    const int g = std::countr_zero(static_cast<unsigned>(offsets));
    const int L = dyadic ? levels.back() + g : 0;
    if (!dyadic || L + 1 > axis_bits(dim) - 1) return box_count_direct(pts, scales, offsets, threads);

    const double to_fine = std::ldexp(1.0, L) / D;
    const double top = std::ldexp(1.0, L) - 1.0;
    std::vector<Key> U = unique_cells(pts, threads, [&](const double* p) {
        std::uint64_t c[3] = {0, 0, 0};
        for (int a = 0; a < dim; ++a)
            c[a] = static_cast<std::uint64_t>(std::min(std::floor((p[a] - b.lo[a]) * to_fine), top));
        return pack(c, dim);
    });

    BoxCountCurve out = empty_curve(scales, offsets, pts.size());
    std::vector<Key> work;
    std::size_t idx = scales.size();
    for (int m = L; idx > 0; --m) {
        if (m < L) {
            for (auto& key : U) {
                std::uint64_t c[3] = {0, 0, 0};
                unpack(key, dim, c);
                for (int a = 0; a < dim; ++a) c[a] >>= 1;
                key = pack(c, dim);
            }
            U.resize(static_cast<std::size_t>(sort_unique_count(U)));
        }
        const int j = m - g;
        if (j != levels[idx - 1]) continue;
        std::vector<std::int64_t> per_offset(static_cast<std::size_t>(offsets));
        for (int k = 0; k < offsets; ++k) {
            work.resize(U.size());
            for (std::size_t i = 0; i < U.size(); ++i) {
                std::uint64_t c[3] = {0, 0, 0};
                unpack(U[i], dim, c);
                for (int a = 0; a < dim; ++a) c[a] = (c[a] + static_cast<std::uint64_t>(k)) >> g;
                work[i] = pack(c, dim);
            }
            per_offset[static_cast<std::size_t>(k)] = sort_unique_count(work);
        }
        record(out, idx - 1, per_offset);
        --idx;
    }
    return out;
}

DimensionEstimate fit_dimension(const BoxCountCurve& curve, const FitPolicy& policy) {
    const auto& y = curve.min_counts.empty() ? curve.mean_counts : curve.min_counts;
    const std::size_t n = curve.scales.size();
    if (y.size() != n) throw ValidationError("box-count curve is inconsistent");
    DimensionEstimate est;
    for (std::size_t i = 0; i < n; ++i) {
        est.log_inv_scale.push_back(-std::log(curve.scales[i]));
        est.log_count.push_back(y[i] > 0 ? std::log(y[i]) : -std::numeric_limits<double>::infinity());
    }
    const double hi_cap = policy.max_fraction * static_cast<double>(curve.sample_count);
    int best_lo = 0, best_len = 0;
    for (std::size_t i = 0; i < n;) {
        if (!(y[i] >= policy.min_count && y[i] <= hi_cap)) {
            ++i;
            continue;
        }
        std::size_t e = i;
        while (e < n && y[e] >= policy.min_count && y[e] <= hi_cap) ++e;
        if (static_cast<int>(e - i) > best_len) {
            best_len = static_cast<int>(e - i);
            best_lo = static_cast<int>(i);
        }
        i = e;
    }
    if (best_len < policy.min_scales)
        throw FitError("only " + std::to_string(best_len) + " scales survive the fit policy (need " +
                       std::to_string(policy.min_scales) + ")");
    est.fit_lo = best_lo;
    est.fit_hi = best_lo + best_len - 1;
    const auto fit = fit_line(std::span(est.log_inv_scale).subspan(static_cast<std::size_t>(best_lo),
                                                                    static_cast<std::size_t>(best_len)),
                              std::span(est.log_count).subspan(static_cast<std::size_t>(best_lo),
                                                               static_cast<std::size_t>(best_len)));
    est.value = fit.slope;
    est.std_error = fit.std_error;
    est.r_squared = fit.r_squared;
    return est;
}

HolderEstimate holder_exponent(const SampledCurve& curve, const HolderPolicy& policy) {
    const std::size_t n = curve.xs.size();
    if (n < 4096) throw ValidationError("holder_exponent needs at least 2^12 samples");
    if (curve.values.size() != n) throw ValidationError("sampled curve is inconsistent");
    const double step = (curve.xs[n - 1] - curve.xs[0]) / static_cast<double>(n - 1);
    if (!(step > 0.0)) throw ValidationError("holder_exponent needs increasing abscissae");
    for (std::size_t i = 1; i < n; ++i)
        if (std::fabs((curve.xs[i] - curve.xs[i - 1]) - step) > 1e-6 * step)
            throw ValidationError("holder_exponent needs a uniform grid");
    const int J = std::bit_width(n) - 1;
    const int j_hi = J - policy.j_margin;
    if (policy.j_lo < 0 || j_hi - policy.j_lo + 1 < 3) throw ValidationError("holder lag range is too short");
    HolderEstimate est;
    est.j_lo = policy.j_lo;
    est.j_hi = j_hi;
    for (int j = policy.j_lo; j <= j_hi; ++j) {
        const std::size_t lag = std::size_t{1} << j;
        double m = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) m = std::max(m, std::abs(curve.values[i + lag] - curve.values[i]));
        if (!(m > 0.0)) throw FitError("zero oscillation: Hölder exponent undefined");
        est.log_lag.push_back(std::log(static_cast<double>(lag) * step));
        est.log_oscillation.push_back(std::log(m));
    }
    const auto fit = fit_line(est.log_lag, est.log_oscillation);
    est.exponent = fit.slope;
    est.std_error = fit.std_error;
    est.r_squared = fit.r_squared;
    return est;
}

double occupied_fraction(const PointCloud& pts, double resolution) {
    check_cloud(pts);
    if (pts.dim != 2) throw ValidationError("occupied_fraction expects planar points");
    if (!(resolution > 0.0)) throw ValidationError("resolution must be > 0");
    const Bounds b = bounds(pts);
    std::uint64_t cells[2];
    for (int a = 0; a < 2; ++a) {
        const double c = std::ceil((b.hi[a] - b.lo[a]) / resolution);
        if (c > 4.0e9) throw ValidationError("resolution too fine for the bounding box");
        cells[a] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(c));
    }
    auto occ = unique_cells(pts, 1, [&](const double* p) {
        std::uint64_t c[2] = {0, 0};
        for (int a = 0; a < 2; ++a)
            c[a] = std::min(static_cast<std::uint64_t>(std::floor((p[a] - b.lo[a]) / resolution)), cells[a] - 1);
        return pack(c, 2);
    });
    return static_cast<double>(occ.size()) / (static_cast<double>(cells[0]) * static_cast<double>(cells[1]));
}

std::string box_count_csv(const BoxCountCurve& curve) {
    std::string out = "scale,count,mean_count,min_count\n";
    char buf[64];
    for (std::size_t i = 0; i < curve.scales.size(); ++i) {
        auto put = [&](double v, char sep) {
            auto r = std::to_chars(buf, buf + sizeof buf, v);
            out.append(buf, r.ptr);
            out.push_back(sep);
        };
        put(curve.scales[i], ',');
        out += std::to_string(curve.counts[i]);
        out.push_back(',');
        put(curve.mean_counts[i], ',');
        put(curve.min_counts[i], '\n');
    }
    return out;
}

}  // namespace lacuna
