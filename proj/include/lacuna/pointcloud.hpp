#pragma once

#include <cstddef>
#include <vector>

namespace lacuna {

// Row-major point set in 2 or 3 dimensions.
struct PointCloud {
    int dim = 2;
    std::vector<double> coords;

    std::size_t size() const { return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0; }
    const double* point(std::size_t i) const { return coords.data() + i * static_cast<std::size_t>(dim); }
    void push(double x, double y) { coords.insert(coords.end(), {x, y}); }
    void push(double x, double y, double z) { coords.insert(coords.end(), {x, y, z}); }
};

}  // namespace lacuna
