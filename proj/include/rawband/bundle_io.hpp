// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// Bundle layout: a granule is a directory holding metadata.txt plus one
// B<ID>.rawb file per band.  A .rawb file is a 16-byte header (magic "RAWB",
// then little-endian u32 width, height, bits-per-sample = 16) followed by
// width*height little-endian u16 samples in row-major order.

#ifndef RAWBAND_BUNDLE_IO_HPP
#define RAWBAND_BUNDLE_IO_HPP

#include <filesystem>

#include "rawband/granule.hpp"
#include "rawband/types.hpp"

namespace rawband {

RawImage read_rawb(const std::filesystem::path& file);
void write_rawb(const std::filesystem::path& file, const RawImage& img);

Granule load_granule_bundle(const std::filesystem::path& dir);
void save_granule_bundle(const Granule& g, const std::filesystem::path& dir);

}  // namespace rawband

#endif  // RAWBAND_BUNDLE_IO_HPP
