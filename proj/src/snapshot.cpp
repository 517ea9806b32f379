#include "sifrk/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace sifrk {

namespace {

constexpr char kMagic[4] = {'S', 'I', 'F', 'K'};
constexpr std::uint8_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v),
                          static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void write_snapshot(std::ostream& os, const Field& u) {
    os.write(kMagic, 4);
    os.put(static_cast<char>(kVersion));
    os.put(static_cast<char>(u.grid.dim()));
    for (int d = 0; d < u.grid.dim(); ++d)
        put_u32(os, static_cast<std::uint32_t>(u.grid.extent(d)));
    for (int d = 0; d < u.grid.dim(); ++d) {
        put_f64(os, u.grid.lower(d));
        put_f64(os, u.grid.upper(d));
    }
    for (double v : u.data) put_f64(os, v);
    if (!os) throw std::runtime_error("write_snapshot: stream failure");
}

void write_snapshot_file(const std::string& path, const Field& u) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_snapshot: cannot open '" + path + "'");
    write_snapshot(os, u);
}

Field read_snapshot(std::istream& is, BoundaryCondition bc) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_snapshot: bad magic");
    const int version = is.get();
    if (version != kVersion) throw std::runtime_error("read_snapshot: unsupported version");
    const int dim = is.get();
    if (dim < 1 || dim > 3) throw std::runtime_error("read_snapshot: bad dimension");
    std::array<int, 3> n{1, 1, 1};
    for (int d = 0; d < dim; ++d) n[d] = static_cast<int>(get_u32(is));
    std::array<double, 3> lo{0, 0, 0}, hi{1, 1, 1};
    for (int d = 0; d < dim; ++d) {
        lo[d] = get_f64(is);
        hi[d] = get_f64(is);
    }
    if (!is) throw std::runtime_error("read_snapshot: truncated header");
    Field u(Grid(dim, n, lo, hi, bc));
    for (auto& v : u.data) v = get_f64(is);
    if (!is) throw std::runtime_error("read_snapshot: truncated data");
    return u;
}

Field read_snapshot_file(const std::string& path, BoundaryCondition bc) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot: cannot open '" + path + "'");
    return read_snapshot(is, bc);
}

}  // namespace sifrk
