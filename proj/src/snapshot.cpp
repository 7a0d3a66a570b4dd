#include "thlab/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace thlab {

namespace {

constexpr char kMagic[4] = {'T', 'H', 'L', 'B'};
constexpr uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "snapshot records are little-endian; big-endian hosts are not supported");

size_t expected_count(FieldKind kind, int nx, int ny) {
    switch (kind) {
        case FieldKind::U2: return static_cast<size_t>(nx) * (ny + 1);
        default: return static_cast<size_t>(nx) * ny;
    }
}

} // namespace

void write_field_binary(const std::string& path, FieldKind kind, const Grid& g,
                        const double* data, size_t count) {
    if (count != expected_count(kind, g.nx, g.ny))
        throw std::invalid_argument("write_field_binary: sample count does not match grid/kind");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_field_binary: cannot open " + path);
    f.write(kMagic, 4);
    const uint32_t ver = kVersion, nx = static_cast<uint32_t>(g.nx), ny = static_cast<uint32_t>(g.ny);
    const uint8_t k = static_cast<uint8_t>(kind);
    f.write(reinterpret_cast<const char*>(&ver), 4);
    f.write(reinterpret_cast<const char*>(&nx), 4);
    f.write(reinterpret_cast<const char*>(&ny), 4);
    f.write(reinterpret_cast<const char*>(&k), 1);
    f.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
    if (!f) throw std::runtime_error("write_field_binary: short write to " + path);
}

FieldSnapshot read_field_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_field_binary: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_field_binary: bad magic in " + path);
    uint32_t ver = 0, nx = 0, ny = 0;
    uint8_t kind = 0;
    f.read(reinterpret_cast<char*>(&ver), 4);
    f.read(reinterpret_cast<char*>(&nx), 4);
    f.read(reinterpret_cast<char*>(&ny), 4);
    f.read(reinterpret_cast<char*>(&kind), 1);
    if (!f || ver != kVersion) throw std::runtime_error("read_field_binary: unsupported version in " + path);
    if (kind > 3) throw std::runtime_error("read_field_binary: unknown field kind in " + path);
    FieldSnapshot s;
    s.kind = static_cast<FieldKind>(kind);
    s.nx = static_cast<int>(nx);
    s.ny = static_cast<int>(ny);
    s.data.resize(expected_count(s.kind, s.nx, s.ny));
    f.read(reinterpret_cast<char*>(s.data.data()),
           static_cast<std::streamsize>(s.data.size() * sizeof(double)));
    if (!f) throw std::runtime_error("read_field_binary: truncated record in " + path);
    return s;
}

void write_state(const std::string& prefix, const State& u, const Grid& g) {
    write_field_binary(prefix + ".u1.thlb", FieldKind::U1, g, u.v.u1.data(), u.v.u1.size());
    write_field_binary(prefix + ".u2.thlb", FieldKind::U2, g, u.v.u2.data(), u.v.u2.size());
    write_field_binary(prefix + ".th.thlb", FieldKind::Theta, g, u.th.data.data(), u.th.data.size());
}

State read_state(const std::string& prefix, const Grid& g) {
    FieldSnapshot s1 = read_field_binary(prefix + ".u1.thlb");
    FieldSnapshot s2 = read_field_binary(prefix + ".u2.thlb");
    FieldSnapshot st = read_field_binary(prefix + ".th.thlb");
    if (s1.nx != g.nx || s1.ny != g.ny || s2.nx != g.nx || st.nx != g.nx)
        throw std::runtime_error("read_state: grid mismatch for " + prefix);
    State u(g);
    u.v.u1 = std::move(s1.data);
    u.v.u2 = std::move(s2.data);
    u.th.data = std::move(st.data);
    return u;
}

void write_field_csv(const std::string& path, FieldKind kind, const Grid& g, const double* data) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("write_field_csv: cannot open " + path);
    f << "x1,x2,value\n";
    char buf[96];
    const int jmax = (kind == FieldKind::U2) ? g.ny : g.ny - 1;
    for (int j = 0; j <= jmax; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double x1 = 0.0, x2 = 0.0;
            switch (kind) {
                case FieldKind::U1: x1 = g.xf(i), x2 = g.yc(j); break;
                case FieldKind::U2: x1 = g.xc(i), x2 = g.yf(j); break;
                default: x1 = g.xc(i), x2 = g.yc(j); break;
            }
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", x1, x2,
                          data[static_cast<size_t>(j) * g.nx + i]);
            f << buf;
        }
    }
}

void write_scalar_csv(const std::string& path, const ScalarField& f, const Grid& g) {
    write_field_csv(path, FieldKind::Cell, g, f.data.data());
}

} // namespace thlab
