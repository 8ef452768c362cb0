#pragma once

#include "cissa/diagnostics.hpp"
#include "cissa/embed.hpp"
#include "cissa/error.hpp"
#include "cissa/simulate.hpp"
#include "cissa/ssa.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cissa {

/// NonNumericCell with the offending position (1-based file line, 1-based column).
class CellError : public Error {
 public:
  CellError(std::size_t row, std::size_t column, const std::string& detail)
      : Error(ErrorCode::NonNumericCell,
              "row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + detail),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

struct SeriesFile {
  std::filesystem::path path;
  TimeSeries series;
  std::vector<std::string> dates;  // empty unless a date column was requested
};

/// Reads one numeric column of a comma-separated file.
/// `column` is a header name, a 0-based index written as digits, or empty for the first
/// non-date column holding numbers. A header row is recognised when the selected cell of the first row is
/// not numeric. Missing or non-numeric cells are errors, never imputed.
SeriesFile read_series(const std::filesystem::path& path, const std::string& column = {},
                       const std::string& date_column = {});

/// Writes several equal-length columns with a header row, values at 17 significant digits.
void write_columns(const std::filesystem::path& file, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns);

struct WriteOptions {
  std::vector<std::string> dates;  // optional date column for the combined file
  bool w_correlation = false;
  std::optional<SeasonalityReport> seasonality;
};

/// One CSV per component, components.csv (t, [date,] original, components...), shares.csv,
/// spectrum.csv for CiSSA and wcorrelation.csv / seasonality.csv on request.
/// Creates `dir` when missing. Returns the written paths.
std::vector<std::filesystem::path> write_decomposition(const Decomposition& d, const std::filesystem::path& dir,
                                                       const WriteOptions& options = {});

/// k, frequency, eigenvalue for bins k = 1..floor(L/2)+1.
void write_spectrum(const std::vector<SpectrumPoint>& spectrum, const std::filesystem::path& file);

/// Header: component,statistic,q5,q25,q50,q75,q95
void write_quantile_table(const VariantTable& table, const std::filesystem::path& file);

/// Flat "key = value" file; '#' starts a comment. Unknown keys are rejected by RunConfig.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

struct RunConfig {
  std::string input;
  std::string column;
  std::string date_column;
  Variant variant = Variant::Circulant;
  std::size_t window_length = 0;
  std::string bands;  // inline "name=lo:hi;..." or a path to a bands file; empty = default monthly
  bool demean = true;
  std::uint64_t seed = 20190901;
  std::size_t replications = 500;
  std::string model = "linear";
  std::string output_dir;

  /// Applies keys from a flat config map; throws InvalidConfig on unknown keys or bad values.
  void apply(const std::map<std::string, std::string>& values);

  /// Resolves `bands` (inline or file) into a GroupingSpec.
  GroupingSpec grouping() const;
};

std::string format_double(double value);

}  // namespace cissa
