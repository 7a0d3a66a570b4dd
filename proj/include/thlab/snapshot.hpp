#pragma once

#include <cstdint>
#include <string>

#include "thlab/field.hpp"
#include "thlab/grid.hpp"

namespace thlab {

/// Field snapshot kinds for the binary record.
enum class FieldKind : uint8_t { U1 = 0, U2 = 1, Theta = 2, Cell = 3 };

/// Flat little-endian binary record: magic "THLB", version u32, nx u32,
/// ny u32, field-kind u8, then row-major 64-bit floats.
void write_field_binary(const std::string& path, FieldKind kind, const Grid& g,
                        const double* data, size_t count);

struct FieldSnapshot {
    FieldKind kind;
    int nx = 0, ny = 0;
    std::vector<double> data;
};

FieldSnapshot read_field_binary(const std::string& path);

/// Whole states as three records: <prefix>.u1.thlb, <prefix>.u2.thlb,
/// <prefix>.th.thlb.
void write_state(const std::string& prefix, const State& u, const Grid& g);
State read_state(const std::string& prefix, const Grid& g);

/// CSV export (x1,x2,value) at the field's native sample points.
void write_field_csv(const std::string& path, FieldKind kind, const Grid& g, const double* data);
void write_scalar_csv(const std::string& path, const ScalarField& f, const Grid& g);

} // namespace thlab
