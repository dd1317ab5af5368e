#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "sleuth/commands.hpp"

namespace cli = sleuth::cli;

int main(int argc, char** argv) {
  CLI::App app{"SLEUTH-style urban growth model: validate, calibrate, forecast"};
  app.require_subcommand(1);

  std::string config;

  auto* validate = app.add_subcommand("validate", "check a project's layers and print a summary");
  validate->add_option("config", config, "project .ini file")->required();

  cli::CalibrateOptions cal;
  auto* calibrate = app.add_subcommand("calibrate", "brute-force calibration over the configured phases");
  calibrate->add_option("config", config, "project .ini file")->required();
  calibrate->add_option("--seed", cal.seed, "base seed (default: config, else 20100101)");
  calibrate->add_option("--phases", cal.phases, "run only the first N phases");
  calibrate->add_option("--jobs", cal.jobs, "worker threads")->check(CLI::PositiveNumber);
  calibrate->add_option("--out", cal.out_dir, "output directory (default: [output] directory)");
  calibrate->add_flag("--quiet", cal.quiet, "no progress on stderr");

  cli::ForecastOptions fc;
  auto* forecast = app.add_subcommand("forecast", "annual urbanization probability maps per scenario");
  forecast->add_option("config", config, "project .ini file")->required();
  forecast->add_option("--scenario", fc.scenario, "scenario name or 'all'");
  forecast->add_option("--years", fc.years, "forecast horizon in years");
  forecast->add_option("--mc", fc.mc, "Monte Carlo runs");
  forecast->add_option("--seed", fc.seed, "base seed");
  forecast->add_option("--jobs", fc.jobs, "worker threads")->check(CLI::PositiveNumber);
  forecast->add_option("--out", fc.out_dir, "output directory");

  cli::MetricsOptions met;
  auto* metrics = app.add_subcommand("metrics", "score modeled layers against actual ones");
  metrics->add_option("--modeled", met.modeled, "modeled layers or probability maps")->required();
  metrics->add_option("--actual", met.actual, "actual urban layers, same order")->required();
  metrics->add_option("--years", met.years, "year of each pair (series only)");
  metrics->add_option("--slope", met.slope, "slope layer for the slope metric");
  metrics->add_option("--excluded", met.excluded, "exclusion layer for pct_urban");

  std::string input;
  std::string output;
  sleuth::LayerKind kind = sleuth::LayerKind::binary;
  std::optional<sleuth::GridFormat> format;
  const std::map<std::string, sleuth::LayerKind> kinds{
      {"binary", sleuth::LayerKind::binary}, {"slope", sleuth::LayerKind::slope}, {"gray", sleuth::LayerKind::gray}};
  const std::map<std::string, sleuth::GridFormat> formats{{"asc", sleuth::GridFormat::ascii},
                                                           {"pgm", sleuth::GridFormat::pgm}};
  auto* convert = app.add_subcommand("convert", "convert between ESRI ASCII grid and PGM");
  convert->add_option("input", input)->required();
  convert->add_option("output", output)->required();
  convert->add_option("--kind", kind, "binary|slope|gray")->transform(CLI::CheckedTransformer(kinds));
  convert->add_option("--format", format, "asc|pgm (default: from the output extension)")
      ->transform(CLI::CheckedTransformer(formats));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsageError;
  }

  if (*validate) return cli::cmd_validate(config, std::cout, std::cerr);
  if (*calibrate) return cli::cmd_calibrate(config, cal, std::cout, std::cerr);
  if (*forecast) return cli::cmd_forecast(config, fc, std::cout, std::cerr);
  if (*metrics) return cli::cmd_metrics(met, std::cout, std::cerr);
  return cli::cmd_convert(input, output, kind, format, std::cout, std::cerr);
}
