#include "sifrk/grid.hpp"

namespace sifrk {

std::string to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::Periodic ? "periodic" : "neumann";
}

BoundaryCondition bc_from_string(const std::string& name) {
    if (name == "periodic") return BoundaryCondition::Periodic;
    if (name == "neumann") return BoundaryCondition::HomogeneousNeumann;
    throw std::invalid_argument("unknown boundary condition '" + name + "'");
}

Grid::Grid(int dim, std::array<int, 3> n, std::array<double, 3> lo,
           std::array<double, 3> hi, BoundaryCondition bc)
    : dim_(dim), n_(n), lo_(lo), hi_(hi), bc_(bc) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Grid: dim must be 1, 2 or 3");
    size_ = 1;
    for (int d = 0; d < dim_; ++d) {
        if (n_[d] < 2) throw std::invalid_argument("Grid: need at least 2 points per dimension");
        if (!(hi_[d] > lo_[d])) throw std::invalid_argument("Grid: empty box");
        h_[d] = (hi_[d] - lo_[d]) / n_[d];
        size_ *= static_cast<std::size_t>(n_[d]);
    }
    for (int d = dim_; d < 3; ++d) {
        n_[d] = 1;
        h_[d] = 1.0;
    }
}

Grid Grid::cube(int dim, int n, double lo, double hi, BoundaryCondition bc) {
    return Grid(dim, {n, n, n}, {lo, lo, lo}, {hi, hi, hi}, bc);
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= h_[d];
    return v;
}

double Grid::coordinate(int d, int k) const {
    const double offset = bc_ == BoundaryCondition::Periodic ? 0.0 : 0.5;
    return lo_[d] + (k + offset) * h_[d];
}

bool Grid::same_layout(const Grid& other) const {
    if (dim_ != other.dim_ || bc_ != other.bc_) return false;
    for (int d = 0; d < dim_; ++d)
        if (n_[d] != other.n_[d] || lo_[d] != other.lo_[d] || hi_[d] != other.hi_[d])
            return false;
    return true;
}

}  // namespace sifrk
