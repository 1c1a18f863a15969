#include "nlgrad/grid.hpp"

#include "nlgrad/errors.hpp"
#include "nlgrad/parallel.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace nlgrad {

void Grid::validate() const {
    if (dim != 1 && dim != 2) fail(ErrorKind::UnsupportedDim, "grid dim must be 1 or 2");
    if (n_per_axis < 8 || (n_per_axis & (n_per_axis - 1)) != 0)
        fail(ErrorKind::GridMismatch, "points per axis must be a power of two >= 8");
    if (!(box_length > 0.0)) fail(ErrorKind::GridMismatch, "box length must be positive");
}

Field Field::from_function(const Grid& g, const std::function<double(double, double)>& f) {
    Field out(g);
    const double h = g.spacing();
    const int n = g.n_per_axis;
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) out.v_[i] = f(i * h, 0.0);
    } else {
        parallel_for(g.total(), [&](std::int64_t idx) {
            const int ix = static_cast<int>(idx % n);
            const int iy = static_cast<int>(idx / n);
            out.v_[static_cast<std::size_t>(idx)] = f(ix * h, iy * h);
        });
    }
    return out;
}

void Field::apply_mask(const SupportBox& box) {
    for (std::int64_t i = 0; i < size(); ++i)
        if (!box.contains(x_of(i), y_of(i))) v_[static_cast<std::size_t>(i)] = 0.0;
    support_ = box;
}

void write_field_binary(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::ExperimentFailure, "cannot open " + path + " for writing");
    const std::int64_t dim = f.grid().dim;
    const std::int64_t n = f.grid().n_per_axis;
    const double len = f.grid().box_length;
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(f.values().size() * sizeof(double)));
}

Field read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::ExperimentFailure, "cannot open " + path);
    std::int64_t dim = 0, n = 0;
    double len = 0.0;
    in.read(reinterpret_cast<char*>(&dim), sizeof dim);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&len), sizeof len);
    Grid g{static_cast<int>(dim), static_cast<int>(n), len};
    g.validate();
    Field f(g);
    in.read(reinterpret_cast<char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));
    if (!in) fail(ErrorKind::ExperimentFailure, "truncated field file " + path);
    return f;
}

void write_field_csv(const Field& f, const std::string& path) {
    if (f.grid().dim != 1) fail(ErrorKind::UnsupportedDim, "CSV export is defined for 1-d fields");
    std::ofstream out(path);
    if (!out) fail(ErrorKind::ExperimentFailure, "cannot open " + path + " for writing");
    out << "x,value\n";
    char buf[64];
    for (std::int64_t i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.x_of(i), f[i]);
        out << buf;
    }
}

} // namespace nlgrad
