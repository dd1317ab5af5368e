#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sleuth/raster_io.hpp"

namespace sleuth::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsageError = 2, kRuntimeFailure = 3 };

// Thrown for user errors that map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int cmd_validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

struct CalibrateOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> phases;
  int jobs = 1;
  std::optional<std::filesystem::path> out_dir;
  bool quiet = false;
};

int cmd_calibrate(const std::filesystem::path& config, const CalibrateOptions& options, std::ostream& out,
                  std::ostream& err);

struct ForecastOptions {
  std::string scenario = "all";
  std::optional<int> years;
  std::optional<int> mc;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::optional<std::filesystem::path> out_dir;
};

int cmd_forecast(const std::filesystem::path& config, const ForecastOptions& options, std::ostream& out,
                 std::ostream& err);

struct MetricsOptions {
  std::vector<std::filesystem::path> modeled;
  std::vector<std::filesystem::path> actual;
  std::vector<int> years;  // optional labels for a series comparison
  std::optional<std::filesystem::path> slope;
  std::optional<std::filesystem::path> excluded;
};

int cmd_metrics(const MetricsOptions& options, std::ostream& out, std::ostream& err);

int cmd_convert(const std::filesystem::path& input, const std::filesystem::path& output, LayerKind kind,
                std::optional<GridFormat> format, std::ostream& out, std::ostream& err);

}  // namespace sleuth::cli
