#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sifrk {

enum class BoundaryCondition { Periodic, HomogeneousNeumann };

std::string to_string(BoundaryCondition bc);
BoundaryCondition bc_from_string(const std::string& name);

/// Uniform tensor-product grid on a box, 1 to 3 dimensions.
///
/// Periodic grids are node-centered (points a + k*h, k = 0..n-1, the right
/// endpoint identified with the left); homogeneous-Neumann grids are
/// cell-centered (points a + (k+1/2)*h) so that even reflection diagonalizes
/// the second-difference operator exactly.
class Grid {
public:
    Grid(int dim, std::array<int, 3> n, std::array<double, 3> lo,
         std::array<double, 3> hi, BoundaryCondition bc);

    /// Convenience: cube [lo,hi]^dim with n points per dimension.
    static Grid cube(int dim, int n, double lo, double hi, BoundaryCondition bc);

    int dim() const { return dim_; }
    BoundaryCondition bc() const { return bc_; }
    int extent(int d) const { return n_[d]; }
    double lower(int d) const { return lo_[d]; }
    double upper(int d) const { return hi_[d]; }
    double spacing(int d) const { return h_[d]; }
    std::size_t size() const { return size_; }

    /// Volume of one cell, h_0*...*h_{dim-1}.
    double cell_volume() const;

    /// Coordinate of point index k along dimension d.
    double coordinate(int d, int k) const;

    bool same_layout(const Grid& other) const;

private:
    int dim_;
    std::array<int, 3> n_;
    std::array<double, 3> lo_, hi_, h_;
    BoundaryCondition bc_;
    std::size_t size_;
};

/// Real-valued grid function stored row-major (last dimension fastest).
struct Field {
    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0)
        : grid(g), data(g.size(), fill) {}

    Grid grid{1, {2, 1, 1}, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0},
              BoundaryCondition::Periodic};
    std::vector<double> data;

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
    std::size_t size() const { return data.size(); }
};

inline void require_same_grid(const Field& a, const Field& b,
                              const char* what) {
    if (!a.grid.same_layout(b.grid))
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace sifrk
