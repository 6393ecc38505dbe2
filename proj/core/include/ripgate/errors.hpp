#pragma once

#include <stdexcept>
#include <string>

namespace ripgate {

struct InvalidDimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Fock truncation too small for the requested state or evolution; carries the
// measured offending population.
struct TruncationError : std::runtime_error {
  TruncationError(const std::string& what, double pop)
      : std::runtime_error(what), population(pop) {}
  double population;
};

struct StepSizeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SectorError : std::domain_error {
  using std::domain_error::domain_error;
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AboveThresholdError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration schema violation; `path` names the offending field.
struct SchemaError : std::invalid_argument {
  SchemaError(const std::string& path, const std::string& what)
      : std::invalid_argument(path + ": " + what), field_path(path) {}
  std::string field_path;
};

}  // namespace ripgate
