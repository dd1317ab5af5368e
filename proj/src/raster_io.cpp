#include "sleuth/raster_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

#include "sleuth/error.hpp"

namespace sleuth {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string() + ": " + std::generic_category().message(errno));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string() + ": " + std::generic_category().message(errno));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string() + ": " + std::generic_category().message(errno));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

bool parse_number(std::string_view token, double& value) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

// Splits into whitespace-separated tokens, remembering each token's line.
struct Token {
  std::string_view text;
  int line;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else {
      const std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      tokens.push_back({text.substr(start, i - start), line});
    }
  }
  return tokens;
}

RasterData parse_ascii(const std::string& text, const fs::path& path) {
  const std::vector<Token> tokens = tokenize(text);
  auto fail = [&](int line, const std::string& what) -> ParseError {
    return ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
  };

  std::optional<long> ncols;
  std::optional<long> nrows;
  std::optional<double> nodata;
  std::size_t pos = 0;
  while (pos < tokens.size() && std::isalpha(static_cast<unsigned char>(tokens[pos].text.front()))) {
    const Token key = tokens[pos];
    if (pos + 1 >= tokens.size()) throw fail(key.line, "header key '" + std::string(key.text) + "' has no value");
    const Token val = tokens[pos + 1];
    double v = 0.0;
    if (val.line != key.line || !parse_number(val.text, v)) {
      throw fail(key.line, "header key '" + std::string(key.text) + "' needs a numeric value");
    }
    const std::string k = lower(std::string(key.text));
    if (k == "ncols" || k == "nrows") {
      if (v < 1 || v != std::floor(v) || v > 1e8) throw fail(key.line, k + " must be a positive integer");
      (k == "ncols" ? ncols : nrows) = static_cast<long>(v);
    } else if (k == "nodata_value") {
      nodata = v;
    } else if (k != "xllcorner" && k != "yllcorner" && k != "xllcenter" && k != "yllcenter" && k != "cellsize" &&
               k != "dx" && k != "dy") {
      throw fail(key.line, "unknown header key '" + std::string(key.text) + "'");
    }
    pos += 2;
  }
  const int header_end_line = pos < tokens.size() ? tokens[pos].line : (tokens.empty() ? 1 : tokens.back().line);
  if (!ncols) throw fail(header_end_line, "missing ncols in header");
  if (!nrows) throw fail(header_end_line, "missing nrows in header");

  RasterData data;
  data.format = GridFormat::ascii;
  data.dims = {static_cast<int>(*nrows), static_cast<int>(*ncols)};
  const std::size_t n = data.dims.size();
  data.values.resize(n);
  data.nodata.assign(n, false);
  for (std::size_t i = 0; i < n; ++i, ++pos) {
    if (pos >= tokens.size()) {
      throw fail(tokens.empty() ? 1 : tokens.back().line,
                 "expected " + std::to_string(n) + " values, found " + std::to_string(i));
    }
    double v = 0.0;
    if (!parse_number(tokens[pos].text, v)) {
      throw fail(tokens[pos].line, "invalid cell value '" + std::string(tokens[pos].text) + "'");
    }
    data.values[i] = v;
    data.nodata[i] = nodata && v == *nodata;
  }
  if (pos != tokens.size()) throw fail(tokens[pos].line, "more values than nrows x ncols");
  return data;
}

RasterData parse_pgm(const std::string& bytes, const fs::path& path) {
  std::size_t i = 2;
  int line = 1;
  auto fail = [&](const std::string& what) {
    return ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
  };
  auto next_int = [&]() -> long {
    for (;;) {
      while (i < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[i]))) {
        if (bytes[i] == '\n') ++line;
        ++i;
      }
      if (i < bytes.size() && bytes[i] == '#') {
        while (i < bytes.size() && bytes[i] != '\n') ++i;
        continue;
      }
      break;
    }
    const std::size_t start = i;
    while (i < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[i]))) ++i;
    if (start == i) throw fail("expected an integer in PGM header");
    long v = 0;
    std::from_chars(bytes.data() + start, bytes.data() + i, v);
    return v;
  };
  const long width = next_int();
  const long height = next_int();
  const long maxval = next_int();
  if (width < 1 || height < 1) throw fail("PGM dimensions must be positive");
  if (maxval < 1 || maxval > 255) throw fail("only 8-bit PGM (maxval <= 255) is supported");
  if (i >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[i]))) {
    throw fail("missing whitespace after PGM maxval");
  }
  ++i;
  RasterData data;
  data.format = GridFormat::pgm;
  data.dims = {static_cast<int>(height), static_cast<int>(width)};
  const std::size_t n = data.dims.size();
  if (bytes.size() - i < n) {
    throw fail("PGM raster truncated: expected " + std::to_string(n) + " bytes, found " +
               std::to_string(bytes.size() - i));
  }
  data.values.resize(n);
  data.nodata.assign(n, false);
  for (std::size_t k = 0; k < n; ++k) data.values[k] = static_cast<unsigned char>(bytes[i + k]);
  return data;
}

std::string ascii_header(const GridDims& dims) {
  std::ostringstream os;
  os << "ncols         " << dims.cols << '\n'
     << "nrows         " << dims.rows << '\n'
     << "xllcorner     0\n"
     << "yllcorner     0\n"
     << "cellsize      1\n"
     << "NODATA_value  " << kAsciiNodata << '\n';
  return os.str();
}

std::string pgm_header(const GridDims& dims) {
  return "P5\n" + std::to_string(dims.cols) + " " + std::to_string(dims.rows) + "\n255\n";
}

template <typename Layer, typename Map>
void write_bytes(const Layer& layer, const fs::path& path, GridFormat format, Map pgm_value) {
  std::string out;
  if (format == GridFormat::pgm) {
    out = pgm_header(layer.dims());
    out.reserve(out.size() + layer.size());
    for (std::size_t i = 0; i < layer.size(); ++i) out.push_back(static_cast<char>(pgm_value(layer[i])));
  } else {
    out = ascii_header(layer.dims());
    for (int r = 0; r < layer.rows(); ++r) {
      for (int c = 0; c < layer.cols(); ++c) {
        if (c) out.push_back(' ');
        out += std::to_string(static_cast<int>(layer.at(r, c)));
      }
      out.push_back('\n');
    }
  }
  write_file(path, out);
}

}  // namespace

RasterData read_raster(const fs::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return parse_pgm(bytes, path);
  return parse_ascii(bytes, path);
}

BinaryLayer read_binary_layer(const fs::path& path) {
  const RasterData data = read_raster(path);
  std::vector<std::uint8_t> cells(data.values.size());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = (!data.nodata[i] && data.values[i] > 0) ? 1 : 0;
  return BinaryLayer(data.dims, std::move(cells));
}

SlopeLayer read_slope_layer(const fs::path& path) {
  const RasterData data = read_raster(path);
  std::vector<std::uint8_t> cells(data.values.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (data.nodata[i]) {
      cells[i] = SlopeLayer::kMax;
      continue;
    }
    const double v = std::round(data.values[i]);
    if (!(v >= 0 && v <= SlopeLayer::kMax)) {
      throw ValidationError(path.string() + ": slope value " + std::to_string(data.values[i]) + " at cell " +
                            std::to_string(i) + " (row " + std::to_string(data.dims.row_of(i)) + ", col " +
                            std::to_string(data.dims.col_of(i)) + ") outside [0,100]");
    }
    cells[i] = static_cast<std::uint8_t>(v);
  }
  return SlopeLayer(data.dims, std::move(cells));
}

GrayLayer read_gray_layer(const fs::path& path) {
  const RasterData data = read_raster(path);
  std::vector<std::uint8_t> cells(data.values.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i] = data.nodata[i] ? 0 : static_cast<std::uint8_t>(std::clamp(std::round(data.values[i]), 0.0, 255.0));
  }
  return GrayLayer(data.dims, std::move(cells));
}

RealGrid read_probability_map(const fs::path& path) {
  const RasterData data = read_raster(path);
  std::vector<double> cells(data.values.size());
  const double scale = data.format == GridFormat::pgm ? 1.0 / 255.0 : 1.0;
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = data.nodata[i] ? 0.0 : data.values[i] * scale;
  return RealGrid(data.dims, std::move(cells));
}

AnyLayer read_grid(const fs::path& path, LayerKind kind) {
  switch (kind) {
    case LayerKind::binary:
      return read_binary_layer(path);
    case LayerKind::slope:
      return read_slope_layer(path);
    case LayerKind::gray:
      return read_gray_layer(path);
  }
  throw std::invalid_argument("read_grid: unknown layer kind");
}

void write_grid(const BinaryLayer& layer, const fs::path& path, GridFormat format) {
  write_bytes(layer, path, format, [](std::uint8_t v) { return v ? 255 : 0; });
}

void write_grid(const SlopeLayer& layer, const fs::path& path, GridFormat format) {
  write_bytes(layer, path, format, [](std::uint8_t v) { return v; });
}

void write_grid(const GrayLayer& layer, const fs::path& path, GridFormat format) {
  write_bytes(layer, path, format, [](std::uint8_t v) { return v; });
}

void write_grid(const AnyLayer& layer, const fs::path& path, GridFormat format) {
  std::visit([&](const auto& l) { write_grid(l, path, format); }, layer);
}

void write_probability_map(const RealGrid& map, const fs::path& path, GridFormat format) {
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!(map[i] >= 0.0 && map[i] <= 1.0)) {
      throw std::invalid_argument("probability " + std::to_string(map[i]) + " outside [0,1] at cell " +
                                  std::to_string(i));
    }
  }
  std::string out;
  if (format == GridFormat::pgm) {
    out = pgm_header(map.dims());
    for (std::size_t i = 0; i < map.size(); ++i) {
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(map[i] * 255.0))));
    }
  } else {
    out = ascii_header(map.dims());
    char buf[32];
    for (int r = 0; r < map.rows(); ++r) {
      for (int c = 0; c < map.cols(); ++c) {
        if (c) out.push_back(' ');
        const auto res = std::to_chars(buf, buf + sizeof buf, map.at(r, c));
        out.append(buf, res.ptr);
      }
      out.push_back('\n');
    }
  }
  write_file(path, out);
}

GridFormat format_for_path(const fs::path& path) {
  return lower(path.extension().string()) == ".pgm" ? GridFormat::pgm : GridFormat::ascii;
}

}  // namespace sleuth
