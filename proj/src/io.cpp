#include "cissa/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cissa {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

std::optional<double> to_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Orders ISO-like dates (YYYY, YYYY-MM, YYYY-MM-DD, '/' also accepted) or plain numbers.
std::optional<std::array<double, 3>> date_key(const std::string& text) {
  if (auto n = to_number(text)) return std::array<double, 3>{*n, 0.0, 0.0};
  std::array<double, 3> key{0.0, 0.0, 0.0};
  std::size_t part = 0;
  std::string field;
  auto flush = [&]() -> bool {
    if (part >= 3 || !all_digits(field)) return false;
    key[part++] = std::stod(field);
    field.clear();
    return true;
  };
  for (char ch : text) {
    if (ch == '-' || ch == '/') {
      if (!flush()) return std::nullopt;
    } else {
      field += ch;
    }
  }
  if (!flush()) return std::nullopt;
  return key;
}

std::size_t resolve_column(const std::vector<std::string>& first_row, const std::string& column,
                           const std::optional<std::size_t>& date_index, bool has_header) {
  if (column.empty()) {
    for (std::size_t c = 0; c < first_row.size(); ++c) {
      if (!date_index || c != *date_index) return c;
    }
    throw Error(ErrorCode::ColumnMissing, "no value column besides the date column");
  }
  if (all_digits(column)) {
    const auto idx = static_cast<std::size_t>(std::stoul(column));
    if (idx >= first_row.size()) throw Error(ErrorCode::ColumnMissing, "column index " + column + " out of range");
    return idx;
  }
  if (has_header) {
    const auto it = std::find(first_row.begin(), first_row.end(), column);
    if (it != first_row.end()) return static_cast<std::size_t>(it - first_row.begin());
  }
  throw Error(ErrorCode::ColumnMissing, "column '" + column + "' not found");
}

std::ofstream open_for_write(const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + file.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& file) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to '" + file.string() + "' failed");
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", value);
  return buf.data();
}

SeriesFile read_series(const fs::path& path, const std::string& column, const std::string& date_column) {
  std::ifstream in(path, std::ios::binary);
  if (!fs::exists(path) || !in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");

  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
    if (trim(line).empty()) continue;
    rows.emplace_back(line_no, split_csv_line(line));
  }
  if (rows.empty()) throw Error(ErrorCode::InvalidParams, "'" + path.string() + "' contains no rows");

  const auto& first = rows.front().second;
  std::optional<std::size_t> date_index;
  if (!date_column.empty()) {
    if (all_digits(date_column)) {
      date_index = static_cast<std::size_t>(std::stoul(date_column));
    } else {
      const auto it = std::find(first.begin(), first.end(), date_column);
      if (it == first.end()) throw Error(ErrorCode::ColumnMissing, "date column '" + date_column + "' not found");
      date_index = static_cast<std::size_t>(it - first.begin());
    }
    if (*date_index >= first.size()) throw Error(ErrorCode::ColumnMissing, "date column index out of range");
  }

  // A header is present when the value cell of the first row is not a number; a
  // named column always implies one.
  bool has_header = !column.empty() && !all_digits(column);
  std::size_t value_index = resolve_column(first, column, date_index, has_header);
  if (column.empty() && rows.size() > 1) {
    // No column named: take the first one holding a number in the second row, which
    // skips an undeclared leading date or label column.
    const auto& probe = rows[1].second;
    for (std::size_t c = 0; c < std::min(first.size(), probe.size()); ++c) {
      if ((!date_index || c != *date_index) && to_number(probe[c])) {
        value_index = c;
        break;
      }
    }
  }
  if (!has_header && !to_number(first[value_index])) {
    has_header = true;
    if (!column.empty()) value_index = resolve_column(first, column, date_index, has_header);
  }

  SeriesFile result;
  result.path = path;
  result.series.label = has_header ? first[value_index] : std::string{};
  std::optional<std::array<double, 3>> previous;
  for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
    const auto& [row_no, cells] = rows[r];
    if (value_index >= cells.size()) throw CellError(row_no, value_index + 1, "missing value");
    const auto value = to_number(cells[value_index]);
    if (!value || !std::isfinite(*value)) {
      throw CellError(row_no, value_index + 1, "'" + cells[value_index] + "' is not a finite number");
    }
    result.series.values.push_back(*value);
    if (date_index) {
      if (*date_index >= cells.size()) throw CellError(row_no, *date_index + 1, "missing date");
      const auto key = date_key(cells[*date_index]);
      if (!key) throw CellError(row_no, *date_index + 1, "'" + cells[*date_index] + "' is not a date");
      if (previous && !(*previous < *key)) {
        throw Error(ErrorCode::NonMonotoneDates, "date on line " + std::to_string(row_no) + " does not increase");
      }
      previous = key;
      result.dates.push_back(cells[*date_index]);
    }
  }
  if (result.series.size() < 4) {
    throw Error(ErrorCode::InvalidParams, "series needs at least 4 observations, got " +
                                              std::to_string(result.series.size()));
  }
  return result;
}

void write_columns(const fs::path& file, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw Error(ErrorCode::LengthMismatch, "one header per column required");
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != n) throw Error(ErrorCode::LengthMismatch, "columns differ in length");
  }
  auto out = open_for_write(file);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << csv_escape(header[c]);
  out << '\n';
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_double(columns[c][r]);
    out << '\n';
  }
  finish(out, file);
}

void write_spectrum(const std::vector<SpectrumPoint>& spectrum, const fs::path& file) {
  auto out = open_for_write(file);
  out << "k,frequency,eigenvalue\n";
  const std::size_t bins = spectrum.size() / 2 + 1;
  for (std::size_t k = 0; k < bins && k < spectrum.size(); ++k) {
    out << (k + 1) << ',' << format_double(spectrum[k].frequency) << ',' << format_double(spectrum[k].eigenvalue)
        << '\n';
  }
  finish(out, file);
}

std::vector<fs::path> write_decomposition(const Decomposition& d, const fs::path& dir, const WriteOptions& options) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + dir.string() + "': " + ec.message());

  const std::size_t T = d.original.size();
  std::vector<double> t_index(T);
  for (std::size_t t = 0; t < T; ++t) t_index[t] = static_cast<double>(t + 1);

  std::vector<fs::path> written;
  for (const auto& c : d.components) {
    const auto file = dir / ("component_" + c.name + ".csv");
    write_columns(file, {"t", c.name}, {t_index, c.values});
    written.push_back(file);
  }

  {
    const auto file = dir / "components.csv";
    auto out = open_for_write(file);
    const bool with_dates = options.dates.size() == T;
    out << "t" << (with_dates ? ",date" : "") << ",original";
    for (const auto& c : d.components) out << ',' << csv_escape(c.name);
    out << '\n';
    for (std::size_t t = 0; t < T; ++t) {
      out << (t + 1);
      if (with_dates) out << ',' << csv_escape(options.dates[t]);
      out << ',' << format_double(d.original[t]);
      for (const auto& c : d.components) out << ',' << format_double(c.values[t]);
      out << '\n';
    }
    finish(out, file);
    written.push_back(file);
  }

  {
    const auto file = dir / "shares.csv";
    auto out = open_for_write(file);
    out << "component,contribution_pct\n";
    for (const auto& c : d.components) out << csv_escape(c.name) << ',' << format_double(c.share) << '\n';
    finish(out, file);
    written.push_back(file);
  }

  if (d.variant == Variant::Circulant && !d.eigenvalue_spectrum.empty()) {
    const auto file = dir / "spectrum.csv";
    write_spectrum(d.eigenvalue_spectrum, file);
    written.push_back(file);
  }

  if (options.w_correlation) {
    const auto wc = w_correlation_matrix(d);
    const auto file = dir / "wcorrelation.csv";
    auto out = open_for_write(file);
    out << "component";
    for (const auto& l : wc.labels) out << ',' << csv_escape(l);
    out << '\n';
    for (Eigen::Index a = 0; a < wc.entries.rows(); ++a) {
      out << csv_escape(wc.labels[static_cast<std::size_t>(a)]);
      for (Eigen::Index b = 0; b < wc.entries.cols(); ++b) out << ',' << format_double(wc.entries(a, b));
      out << '\n';
    }
    finish(out, file);
    written.push_back(file);
  }

  if (options.seasonality) {
    const auto file = dir / "seasonality.csv";
    auto out = open_for_write(file);
    out << "# " << options.seasonality->method << ", threshold " << format_double(options.seasonality->threshold)
        << '\n';
    out << "frequency,share,flagged\n";
    for (const auto& s : options.seasonality->shares) {
      out << format_double(s.frequency) << ',' << format_double(s.share) << ',' << (s.flagged ? 1 : 0) << '\n';
    }
    finish(out, file);
    written.push_back(file);
  }
  return written;
}

void write_quantile_table(const VariantTable& table, const fs::path& file) {
  auto out = open_for_write(file);
  out << "component,statistic,q5,q25,q50,q75,q95\n";
  for (const auto& row : table.rows) {
    out << row.component << ',' << row.statistic;
    for (double v : row.values) out << ',' << format_double(v);
    out << '\n';
  }
  finish(out, file);
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open config '" + path.string() + "'");
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const auto content = trim(std::string_view(line).substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + " is not 'key = value'");
    }
    values[trim(std::string_view(content).substr(0, eq))] = trim(std::string_view(content).substr(eq + 1));
  }
  return values;
}

void RunConfig::apply(const std::map<std::string, std::string>& values) {
  auto to_unsigned = [](const std::string& key, const std::string& v) {
    if (!all_digits(v)) throw Error(ErrorCode::InvalidConfig, key + " must be a non-negative integer");
    return std::stoull(v);
  };
  for (const auto& [key, value] : values) {
    if (key == "input") {
      input = value;
    } else if (key == "column") {
      column = value;
    } else if (key == "date_column") {
      date_column = value;
    } else if (key == "variant") {
      variant = parse_variant(value);
    } else if (key == "window") {
      window_length = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "bands") {
      bands = value;
    } else if (key == "demean") {
      if (value == "on" || value == "true" || value == "1") {
        demean = true;
      } else if (value == "off" || value == "false" || value == "0") {
        demean = false;
      } else {
        throw Error(ErrorCode::InvalidConfig, "demean must be on/off");
      }
    } else if (key == "seed") {
      seed = to_unsigned(key, value);
    } else if (key == "reps") {
      replications = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "model") {
      model = value;
    } else if (key == "out") {
      output_dir = value;
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
  }
}

GroupingSpec RunConfig::grouping() const {
  if (bands.empty()) return default_monthly_grouping(window_length);
  if (bands.find('=') == std::string::npos) {
    std::ifstream in(bands);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open bands file '" + bands + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bands(ss.str());
  }
  return parse_bands(bands);
}

}  // namespace cissa
