#include "epns/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

namespace epns {

namespace {

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw ConfigError("snapshot: truncated file");
    return v;
}

void put_name(std::ofstream& out, const std::string& name) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
}

std::string get_name(std::ifstream& in) {
    auto len = get<std::uint16_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw ConfigError("snapshot: truncated name");
    return s;
}

void write_sidecar(const std::string& path, const std::string& meta_json) {
    std::ofstream out(path + ".json");
    out << meta_json << "\n";
}

constexpr char kMagic[4] = {'E', 'P', 'N', 'S'};

} // namespace

void write_field_snapshot(const std::string& path,
                          const std::vector<std::pair<std::string, const SpectralScalar*>>& fields,
                          const std::string& meta_json) {
    if (fields.empty()) throw ContractViolation("write_field_snapshot: no fields");
    const TorusGrid& g = fields.front().second->grid;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open snapshot for writing: " + path);
    out.write(kMagic, 4);
    put<std::uint32_t>(out, 1);
    put<std::uint32_t>(out, 0);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(fields.size()));
    for (const auto& [name, fld] : fields) put_name(out, name);
    for (const auto& [name, fld] : fields) {
        if (fld->grid != g) throw ContractViolation("write_field_snapshot: mixed grids");
        out.write(reinterpret_cast<const char*>(fld->values.data()),
                  static_cast<std::streamsize>(fld->values.size() * sizeof(double)));
    }
    write_sidecar(path, meta_json);
}

FieldSnapshot read_field_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open snapshot: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ConfigError("snapshot: bad magic");
    auto version = get<std::uint32_t>(in);
    if (version != 1) throw ConfigError("snapshot: unsupported version");
    auto kind = get<std::uint32_t>(in);
    if (kind != 0) throw ConfigError("snapshot: expected a field snapshot");
    int d = static_cast<int>(get<std::uint32_t>(in));
    int n = static_cast<int>(get<std::uint32_t>(in));
    auto count = get<std::uint32_t>(in);

    FieldSnapshot snap;
    snap.grid = TorusGrid(d, n);
    for (std::uint32_t i = 0; i < count; ++i) snap.names.push_back(get_name(in));
    for (std::uint32_t i = 0; i < count; ++i) {
        SpectralScalar f(snap.grid);
        in.read(reinterpret_cast<char*>(f.values.data()),
                static_cast<std::streamsize>(f.values.size() * sizeof(double)));
        if (!in) throw ConfigError("snapshot: truncated payload");
        snap.fields.push_back(std::move(f));
    }
    return snap;
}

void write_phase_snapshot(const std::string& path, const DistributionFunction& f,
                          const std::string& meta_json) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open snapshot for writing: " + path);
    out.write(kMagic, 4);
    put<std::uint32_t>(out, 1);
    put<std::uint32_t>(out, 1);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.dim));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.n));
    put<double>(out, f.vbox.vmax);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.vbox.n));
    put<std::uint32_t>(out, 1);
    put_name(out, "f");
    put<double>(out, f.sigma);
    put<double>(out, f.epsilon);
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    write_sidecar(path, meta_json);
}

DistributionFunction read_phase_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open snapshot: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ConfigError("snapshot: bad magic");
    if (get<std::uint32_t>(in) != 1) throw ConfigError("snapshot: unsupported version");
    if (get<std::uint32_t>(in) != 1) throw ConfigError("snapshot: expected a phase snapshot");
    int d = static_cast<int>(get<std::uint32_t>(in));
    int n = static_cast<int>(get<std::uint32_t>(in));
    double vmax = get<double>(in);
    int nv = static_cast<int>(get<std::uint32_t>(in));
    if (get<std::uint32_t>(in) != 1) throw ConfigError("snapshot: phase file must carry one field");
    (void)get_name(in);
    double sigma = get<double>(in);
    double epsilon = get<double>(in);

    DistributionFunction f(TorusGrid(d, n), VelocityBox(d, nv, vmax), sigma, epsilon);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!in) throw ConfigError("snapshot: truncated payload");
    f.seal_ledger();
    return f;
}

} // namespace epns
