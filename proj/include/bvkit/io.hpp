#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "bvkit/atoms.hpp"
#include "bvkit/variation.hpp"

namespace bvkit {

using json = nlohmann::json;

json to_json(const DyadicCube& cube);
DyadicCube cube_from_json(const json& j);

json to_json(const Packing& pi);
Packing packing_from_json(const json& j);

json to_json(const NormReport& report);

json to_json(const Atom& atom);
json to_json(const Chain& chain);
json to_json(const Decomposition& dec);

/// Binary store: little-endian header (magic "BVKF", u32 version, u32 d,
/// u32 m, u64 count) followed by count doubles, plus a JSON sidecar at
/// path + ".json".
void save_grid(const GridFunction& f, const std::filesystem::path& path);
GridFunction load_grid(const std::filesystem::path& path);

/// One value per line (or comma separated); the count must be a power of
/// two, which fixes the resolution.
GridFunction load_csv_1d(const std::filesystem::path& path);

/// Write-to-temp then rename, so failures never leave partial files.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Minimal decorative SVG polyline chart (log-log when requested).
std::string svg_polyline(const std::vector<double>& x, const std::vector<double>& y,
                         const std::string& title, bool loglog);

}  // namespace bvkit
