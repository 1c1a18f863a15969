#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlgrad {

// Uniform periodic grid on the torus [0, L)^n, N points per axis (power of two).
struct Grid {
    int dim = 1;
    int n_per_axis = 64;
    double box_length = 1.0;

    double spacing() const { return box_length / n_per_axis; }
    std::int64_t total() const {
        std::int64_t t = n_per_axis;
        for (int d = 1; d < dim; ++d) t *= n_per_axis;
        return t;
    }
    // signed mode index for axis position k in [0, N)
    int mode(int k) const { return k < n_per_axis / 2 ? k : k - n_per_axis; }
    // continuum frequency of mode k
    double freq(int k) const { return mode(k) / box_length; }
    bool operator==(const Grid& o) const = default;

    void validate() const; // dim in {1,2}, N power of two >= 8, L > 0
};

struct SupportBox {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};

    bool contains(double x, double y = 0.0) const {
        if (x < lo[0] || x > hi[0]) return false;
        return !(y < lo[1] || y > hi[1]);
    }
    double width(int axis) const { return hi[axis] - lo[axis]; }
    double center(int axis) const { return 0.5 * (lo[axis] + hi[axis]); }
};

// Scalar samples on a Grid; values vanish outside the support box when one is set.
class Field {
public:
    Field() = default;
    explicit Field(const Grid& g) : grid_(g), v_(static_cast<std::size_t>(g.total()), 0.0) {}

    static Field from_function(const Grid& g, const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }
    double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }

    // coordinates of the flat index
    double x_of(std::int64_t i) const { return grid_.spacing() * static_cast<double>(i % grid_.n_per_axis); }
    double y_of(std::int64_t i) const { return grid_.spacing() * static_cast<double>(i / grid_.n_per_axis); }

    const std::optional<SupportBox>& support() const { return support_; }
    // Zero everything outside the box and remember it.
    void apply_mask(const SupportBox& box);
    void clear_support() { support_.reset(); }

private:
    Grid grid_;
    std::vector<double> v_;
    std::optional<SupportBox> support_;
};

// n components of a vector field on a shared grid.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const Grid& g) : grid_(g) {
        for (int d = 0; d < g.dim; ++d) comp_[d] = std::vector<double>(static_cast<std::size_t>(g.total()), 0.0);
    }

    const Grid& grid() const { return grid_; }
    int components() const { return grid_.dim; }
    std::vector<double>& comp(int d) { return comp_[d]; }
    const std::vector<double>& comp(int d) const { return comp_[d]; }

private:
    Grid grid_;
    std::array<std::vector<double>, 2> comp_;
};

// Flat binary field format: int64 dim, int64 N, float64 L, then N^dim float64 values.
void write_field_binary(const Field& f, const std::string& path);
Field read_field_binary(const std::string& path);
// CSV export (n = 1): header "x,value", 17 significant digits.
void write_field_csv(const Field& f, const std::string& path);

} // namespace nlgrad
