#pragma once

#include <iosfwd>
#include <string>

#include "sifrk/grid.hpp"

namespace sifrk {

/// Binary field snapshot: magic "SIFK", version byte 1, u8 dim, u32-LE n per
/// dimension, f64-LE box bounds (lo,hi per dimension), then the values
/// f64-LE row-major.  The boundary condition is supplied on read.
void write_snapshot(std::ostream& os, const Field& u);
void write_snapshot_file(const std::string& path, const Field& u);

Field read_snapshot(std::istream& is, BoundaryCondition bc);
Field read_snapshot_file(const std::string& path, BoundaryCondition bc);

}  // namespace sifrk
