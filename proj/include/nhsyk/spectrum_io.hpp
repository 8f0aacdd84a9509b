// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nhsyk/errors.hpp"
#include "nhsyk/spectral.hpp"

namespace nhsyk {

static_assert(std::endian::native == std::endian::little,
              "spectrum records are little-endian; big-endian hosts unsupported");

// Binary spectrum record: fixed header followed by `length` little-endian
// f64 singular values, ascending.
namespace record {

inline constexpr char kMagic[8] = {'N', 'H', 'S', 'Y', 'K', 'S', 'P', 'C'};
inline constexpr std::uint32_t kVersion = 1;

#pragma pack(push, 1)
struct Header {
    char magic[8];
    std::uint32_t version;
    std::uint32_t n;
    double p;
    std::uint32_t mode;
    std::int32_t sector;
    std::uint64_t seed;
    std::uint64_t index;
    std::uint64_t length;
};
#pragma pack(pop)
static_assert(sizeof(Header) == 8 + 4 + 4 + 8 + 4 + 4 + 8 + 8 + 8);

}  // namespace record

inline void write_spectrum(const std::filesystem::path& path, const SingularSpectrum& s) {
    // Write to a sibling temp file and rename into place, so a crash or kill
    // mid-write can never leave a torn record that would poison a resume.
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open for writing: " + tmp.string());
        record::Header h{};
        std::memcpy(h.magic, record::kMagic, 8);
        h.version = record::kVersion;
        h.n = static_cast<std::uint32_t>(s.config.n);
        h.p = s.config.p;
        h.mode = static_cast<std::uint32_t>(s.config.mode);
        h.sector = static_cast<std::int32_t>(s.sector);
        h.seed = s.config.master_seed;
        h.index = s.config.realization_index;
        h.length = s.values.size();
        os.write(reinterpret_cast<const char*>(&h), sizeof(h));
        os.write(reinterpret_cast<const char*>(s.values.data()),
                 static_cast<std::streamsize>(s.values.size() * sizeof(double)));
        if (!os) throw IoError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline record::Header read_spectrum_header(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path.string());
    record::Header h{};
    is.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!is || std::memcmp(h.magic, record::kMagic, 8) != 0 || h.version != record::kVersion)
        throw CorruptRecord("bad spectrum header: " + path.string());
    return h;
}

inline SingularSpectrum read_spectrum(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path.string());
    record::Header h{};
    is.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!is || std::memcmp(h.magic, record::kMagic, 8) != 0 || h.version != record::kVersion)
        throw CorruptRecord("bad spectrum header: " + path.string());
    SingularSpectrum s;
    s.config.n = static_cast<int>(h.n);
    s.config.p = h.p;
    s.config.mode = static_cast<Mode>(h.mode);
    s.config.master_seed = h.seed;
    s.config.realization_index = h.index;
    s.sector = static_cast<Sector>(h.sector);
    s.values.resize(h.length);
    is.read(reinterpret_cast<char*>(s.values.data()),
            static_cast<std::streamsize>(h.length * sizeof(double)));
    if (!is) throw CorruptRecord("truncated spectrum record: " + path.string());
    for (std::size_t i = 0; i + 1 < s.values.size(); ++i)
        if (s.values[i] > s.values[i + 1])
            throw CorruptRecord("spectrum values not ascending: " + path.string());
    return s;
}

/// One-column CSV export of a spectrum.
inline void write_spectrum_csv(std::ostream& os, const SingularSpectrum& s) {
    os.precision(17);
    os << "# N=" << s.config.n << " p=" << s.config.p << " mode=" << to_string(s.config.mode)
       << " sector=" << to_string(s.sector) << " seed=" << s.config.master_seed
       << " index=" << s.config.realization_index << '\n';
    os << "sigma\n";
    for (double v : s.values) os << v << '\n';
}

}  // namespace nhsyk
