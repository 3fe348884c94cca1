#include "chemokin/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace chemokin {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts are unsupported");

namespace {

constexpr char kMagic[6] = {'C', 'K', 'I', 'N', '1', '\0'};

template <typename T>
void put(std::ofstream& os, T value) {
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) throw std::runtime_error("snapshot: truncated file");
    return value;
}

} // namespace

void write_snapshot(const std::string& path, const SnapshotHeader& h,
                    const std::vector<const Field*>& fields) {
    if (h.dim != 1 && h.dim != 2) throw std::invalid_argument("snapshot dim must be 1 or 2");
    const std::int64_t per_field = h.values_per_field();
    for (const Field* f : fields)
        if (!f || static_cast<std::int64_t>(f->size()) != per_field)
            throw std::invalid_argument("snapshot: field size does not match header");

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("snapshot: cannot open " + path + " for writing");
    os.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(h.dim));
    for (int a = 0; a < h.dim; ++a) put<std::uint32_t>(os, static_cast<std::uint32_t>(h.cells[a]));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(h.velocity_nodes));
    for (int a = 0; a < h.dim; ++a) put<double>(os, h.extent[a]);
    put<double>(os, h.time);
    put<double>(os, h.eps);
    for (const Field* f : fields)
        os.write(reinterpret_cast<const char*>(f->data()),
                 static_cast<std::streamsize>(f->size() * sizeof(double)));
    if (!os) throw std::runtime_error("snapshot: short write to " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open " + path);
    char magic[6];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("snapshot: bad magic in " + path);

    Snapshot snap;
    SnapshotHeader& h = snap.header;
    h.dim = static_cast<int>(get<std::uint32_t>(is));
    if (h.dim != 1 && h.dim != 2) throw std::runtime_error("snapshot: bad dim");
    for (int a = 0; a < h.dim; ++a) h.cells[a] = static_cast<int>(get<std::uint32_t>(is));
    h.velocity_nodes = static_cast<int>(get<std::uint32_t>(is));
    for (int a = 0; a < h.dim; ++a) h.extent[a] = get<double>(is);
    h.time = get<double>(is);
    h.eps = get<double>(is);

    const std::int64_t per_field = h.values_per_field();
    const auto payload_start = is.tellg();
    is.seekg(0, std::ios::end);
    const std::int64_t payload_bytes = is.tellg() - payload_start;
    is.seekg(payload_start);
    const std::int64_t field_bytes = per_field * static_cast<std::int64_t>(sizeof(double));
    if (field_bytes <= 0 || payload_bytes % field_bytes != 0)
        throw std::runtime_error("snapshot: payload length inconsistent with header");
    const std::int64_t nfields = payload_bytes / field_bytes;
    for (std::int64_t i = 0; i < nfields; ++i) {
        Field f(per_field);
        is.read(reinterpret_cast<char*>(f.data()), field_bytes);
        if (!is) throw std::runtime_error("snapshot: truncated payload");
        snap.fields.push_back(std::move(f));
    }
    return snap;
}

} // namespace chemokin
