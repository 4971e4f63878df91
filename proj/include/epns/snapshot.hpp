#pragma once

#include <string>
#include <utility>
#include <vector>

#include "epns/distribution.hpp"
#include "epns/field.hpp"

namespace epns {

// Binary snapshot format, little-endian:
//   magic "EPNS" | u32 version | u32 kind(0=fields,1=phase) | u32 d | u32 n
//   kind=1 only: f64 vmax | u32 n_v
//   u32 field_count | per field: u16 name_len, name bytes
//   payload: field_count arrays of f64, row-major
// Every snapshot gets a JSON sidecar "<path>.json" with grid metadata.

void write_field_snapshot(const std::string& path,
                          const std::vector<std::pair<std::string, const SpectralScalar*>>& fields,
                          const std::string& meta_json);

struct FieldSnapshot {
    TorusGrid grid;
    std::vector<std::string> names;
    std::vector<SpectralScalar> fields;
};

FieldSnapshot read_field_snapshot(const std::string& path);

void write_phase_snapshot(const std::string& path, const DistributionFunction& f,
                          const std::string& meta_json);

DistributionFunction read_phase_snapshot(const std::string& path);

} // namespace epns
