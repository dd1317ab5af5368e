#pragma once

#include <filesystem>
#include <variant>

#include "sleuth/grid.hpp"

namespace sleuth {

enum class LayerKind { binary, slope, gray };
enum class GridFormat { ascii, pgm };

// ESRI ASCII grids: NODATA reads as 0 in binary and gray layers and as 100
// (undevelopable) in slope layers.
inline constexpr double kAsciiNodata = -9999.0;

// Raw cell values of an ASCII grid or P5 PGM, before any kind-specific mapping.
struct RasterData {
  GridDims dims;
  std::vector<double> values;
  std::vector<bool> nodata;
  GridFormat format = GridFormat::ascii;
};

// Sniffs the "P5" magic; anything else is parsed as an ESRI ASCII grid.
RasterData read_raster(const std::filesystem::path& path);

BinaryLayer read_binary_layer(const std::filesystem::path& path);
SlopeLayer read_slope_layer(const std::filesystem::path& path);
GrayLayer read_gray_layer(const std::filesystem::path& path);
// ASCII values are taken as-is; PGM bytes are scaled by 1/255.
RealGrid read_probability_map(const std::filesystem::path& path);

using AnyLayer = std::variant<BinaryLayer, SlopeLayer, GrayLayer>;
AnyLayer read_grid(const std::filesystem::path& path, LayerKind kind);

// Binary layers are written to PGM as 0/255; slope and gray values verbatim.
void write_grid(const BinaryLayer& layer, const std::filesystem::path& path, GridFormat format);
void write_grid(const SlopeLayer& layer, const std::filesystem::path& path, GridFormat format);
void write_grid(const GrayLayer& layer, const std::filesystem::path& path, GridFormat format);
void write_grid(const AnyLayer& layer, const std::filesystem::path& path, GridFormat format);
// Probabilities in [0,1]: PGM bytes are round(p * 255); ASCII carries the
// shortest round-trip decimal.
void write_probability_map(const RealGrid& map, const std::filesystem::path& path, GridFormat format);

// ".pgm" selects PGM, everything else ASCII.
GridFormat format_for_path(const std::filesystem::path& path);

}  // namespace sleuth
