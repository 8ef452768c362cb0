#include "cissa/ssa.hpp"

#include "cissa/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace cissa {

namespace {

// Band edges are compared with a small absolute slack so that, e.g., 4/48 and 1/12
// computed along different paths still match.
constexpr double kFrequencyTolerance = 1e-9;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    // Allow simple fractions such as "1/12".
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const double num = parse_number(trim(text.substr(0, slash)));
      const double den = parse_number(trim(text.substr(slash + 1)));
      if (den == 0.0) throw Error(ErrorCode::InvalidConfig, "zero denominator in '" + text + "'");
      return num / den;
    }
    throw Error(ErrorCode::InvalidConfig, "cannot parse frequency '" + text + "'");
  }
  return value;
}

double band_floor(const Band& band) {
  double lo = 1.0;
  for (const auto& iv : band.intervals) lo = std::min(lo, iv.lo);
  return lo;
}

std::vector<double> shares_from(const std::vector<double>& group_mass) {
  const double total = std::accumulate(group_mass.begin(), group_mass.end(), 0.0);
  std::vector<double> out(group_mass.size(), 0.0);
  if (total <= 0.0) return out;
  for (std::size_t g = 0; g < group_mass.size(); ++g) out[g] = 100.0 * group_mass[g] / total;
  return out;
}

Decomposition empty_decomposition(Variant variant, std::span<const double> series, std::size_t window_length,
                                  const GroupingSpec& grouping) {
  Decomposition d;
  d.variant = variant;
  d.window_length = window_length;
  d.original.assign(series.begin(), series.end());
  for (const auto& band : grouping.bands) {
    d.components.push_back(Component{band.name, std::vector<double>(series.size(), 0.0), 0.0, {}});
  }
  d.components.push_back(Component{grouping.residual_name, std::vector<double>(series.size(), 0.0), 0.0, {}});
  return d;
}

void accumulate_into(std::vector<double>& target, const std::vector<double>& source) {
  for (std::size_t t = 0; t < target.size(); ++t) target[t] += source[t];
}

Decomposition eigenbasis_ssa(Variant variant, std::span<const double> series, std::size_t window_length,
                             const GroupingSpec& grouping, FrequencyAssigner assigner) {
  grouping.validate();
  const auto trajectory = embed(series, window_length);
  const auto moments =
      variant == Variant::Basic ? basic_matrix(trajectory) : toeplitz_matrix(series, window_length);
  const auto triples = symmetric_eigentriples(moments);

  auto d = empty_decomposition(variant, series, window_length, grouping);
  std::vector<double> mass(d.components.size(), 0.0);
  const std::size_t residual = d.components.size() - 1;

  // All L eigentriples are kept, including numerically null ones, so that the
  // projectors sum to the identity and the components add up to the input.
  for (const auto& triple : triples) {
    const Eigen::VectorXd row = trajectory.entries.transpose() * triple.eigenvector;
    const Periodogram p = assigner == FrequencyAssigner::Eigenvector
                              ? periodogram(std::span<const double>(triple.eigenvector.data(),
                                                                    static_cast<std::size_t>(triple.eigenvector.size())))
                              : periodogram(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
    const auto band = grouping.band_for(dominant_frequency(p));
    const std::size_t g = band ? *band : residual;
    accumulate_into(d.components[g].values, diagonal_average_outer(triple.eigenvector, row));
    d.components[g].indices.push_back(triple.index);
    mass[g] += std::max(triple.eigenvalue, 0.0);
  }
  const auto shares = shares_from(mass);
  for (std::size_t g = 0; g < shares.size(); ++g) d.components[g].share = shares[g];
  return d;
}

}  // namespace

std::vector<FrequencyGroup> frequency_groups(std::size_t window_length) {
  const std::size_t L = window_length;
  std::vector<FrequencyGroup> out;
  for (std::size_t k = 1; k <= L / 2 + 1 && k <= L; ++k) {
    FrequencyGroup g;
    g.bin = k;
    g.center_frequency = static_cast<double>(k - 1) / static_cast<double>(L);
    if (k == 1) {
      g.kind = FrequencyGroup::Kind::Zero;
      g.indices = {1};
    } else if (L % 2 == 0 && k == L / 2 + 1) {
      g.kind = FrequencyGroup::Kind::Nyquist;
      g.indices = {k};
    } else {
      g.kind = FrequencyGroup::Kind::Paired;
      g.indices = {k, L + 2 - k};
    }
    out.push_back(std::move(g));
  }
  return out;
}

bool FrequencyInterval::contains(double frequency) const noexcept {
  return frequency >= lo - kFrequencyTolerance && frequency <= hi + kFrequencyTolerance;
}

bool Band::contains(double frequency) const noexcept {
  return std::any_of(intervals.begin(), intervals.end(),
                     [frequency](const FrequencyInterval& iv) { return iv.contains(frequency); });
}

void GroupingSpec::validate() const {
  if (bands.empty() && residual_name.empty()) {
    throw Error(ErrorCode::EmptyGrouping, "grouping has neither bands nor a residual component");
  }
  if (residual_name.empty()) {
    throw Error(ErrorCode::InvalidGrouping, "a residual component name is required for ungrouped bins");
  }
  for (std::size_t a = 0; a < bands.size(); ++a) {
    const auto& band = bands[a];
    if (band.name.empty()) throw Error(ErrorCode::InvalidGrouping, "band with empty name");
    if (band.name == residual_name) {
      throw Error(ErrorCode::InvalidGrouping, "band '" + band.name + "' clashes with the residual name");
    }
    if (band.intervals.empty()) throw Error(ErrorCode::InvalidGrouping, "band '" + band.name + "' has no interval");
    for (const auto& iv : band.intervals) {
      if (!(iv.lo >= 0.0 && iv.lo <= iv.hi && iv.hi <= 0.5 + kFrequencyTolerance)) {
        throw Error(ErrorCode::InvalidGrouping, "band '" + band.name + "' interval must satisfy 0 <= lo <= hi <= 1/2");
      }
    }
    for (std::size_t b = a + 1; b < bands.size(); ++b) {
      if (bands[b].name == band.name) throw Error(ErrorCode::InvalidGrouping, "duplicate band '" + band.name + "'");
      for (const auto& x : band.intervals) {
        for (const auto& y : bands[b].intervals) {
          // Touching endpoints are allowed; the lower band owns the shared point.
          const bool overlap = x.lo < y.hi - kFrequencyTolerance && y.lo < x.hi - kFrequencyTolerance;
          const bool same_point = x.lo == x.hi && y.lo == y.hi && std::abs(x.lo - y.lo) <= kFrequencyTolerance;
          if (overlap || same_point) {
            throw Error(ErrorCode::InvalidGrouping,
                        "bands '" + band.name + "' and '" + bands[b].name + "' overlap");
          }
        }
      }
    }
  }
}

std::optional<std::size_t> GroupingSpec::band_for(double frequency) const {
  std::optional<std::size_t> best;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    if (!bands[b].contains(frequency)) continue;
    if (!best || band_floor(bands[b]) < band_floor(bands[*best])) best = b;
  }
  return best;
}

GroupingSpec parse_bands(std::string_view text, std::string residual_name) {
  GroupingSpec spec;
  spec.residual_name = std::move(residual_name);
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto stop = std::min(text.find_first_of(";\n", start), text.size());
    const auto item = trim(text.substr(start, stop - start));
    start = stop + 1;
    if (item.empty() || item.front() == '#') continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, "band '" + item + "' lacks '='");
    const auto name = trim(std::string_view(item).substr(0, eq));
    const auto range = trim(std::string_view(item).substr(eq + 1));
    FrequencyInterval iv;
    const auto colon = range.find(':');
    if (colon == std::string::npos) {
      iv.lo = iv.hi = parse_number(range);
    } else {
      iv.lo = parse_number(trim(std::string_view(range).substr(0, colon)));
      iv.hi = parse_number(trim(std::string_view(range).substr(colon + 1)));
    }
    auto it = std::find_if(spec.bands.begin(), spec.bands.end(), [&](const Band& b) { return b.name == name; });
    if (it == spec.bands.end()) {
      spec.bands.push_back(Band{name, {iv}});
    } else {
      it->intervals.push_back(iv);
    }
  }
  return spec;
}

GroupingSpec default_monthly_grouping(std::size_t window_length, double cycle_min_months, double cycle_max_months) {
  if (window_length == 0 || window_length % 12 != 0) {
    throw Error(ErrorCode::NotMonthlyCompatible,
                "window length " + std::to_string(window_length) + " is not a multiple of 12");
  }
  if (!(cycle_min_months > 2.0 && cycle_min_months < cycle_max_months)) {
    throw Error(ErrorCode::InvalidParams, "cycle period range must satisfy 2 < min < max");
  }
  const auto L = static_cast<double>(window_length);
  const double cycle_lo = 1.0 / cycle_max_months;
  const double cycle_hi = 1.0 / cycle_min_months;

  // Highest bin strictly below the cycle band: periods longer than the cycle range
  // belong to the trend.
  double steps = std::ceil(cycle_lo * L - kFrequencyTolerance) - 1.0;
  steps = std::max(steps, 0.0);

  GroupingSpec spec;
  spec.bands.push_back(Band{"trend", {{0.0, steps / L}}});
  spec.bands.push_back(Band{"cycle", {{cycle_lo, cycle_hi}}});
  Band seasonal{"seasonal", {}};
  for (int j = 1; j <= 6; ++j) {
    const double f = static_cast<double>(j) / 12.0;
    seasonal.intervals.push_back({f, f});
  }
  spec.bands.push_back(std::move(seasonal));
  spec.residual_name = "irregular";
  return spec;
}

GroupingSpec structural_model_grouping(double cycle_period, std::size_t seasonal_period) {
  if (!(cycle_period > 2.0) || seasonal_period < 2) {
    throw Error(ErrorCode::InvalidParams, "cycle period must exceed 2 and seasonal period be at least 2");
  }
  GroupingSpec spec;
  spec.bands.push_back(Band{"trend", {{0.0, 0.0}}});
  spec.bands.push_back(Band{"cycle", {{1.0 / cycle_period, 1.0 / cycle_period}}});
  Band seasonal{"seasonal", {}};
  for (std::size_t j = 1; j <= seasonal_period / 2; ++j) {
    const double f = static_cast<double>(j) / static_cast<double>(seasonal_period);
    seasonal.intervals.push_back({f, f});
  }
  spec.bands.push_back(std::move(seasonal));
  spec.residual_name = "irregular";
  return spec;
}

const Component* Decomposition::find(std::string_view name) const noexcept {
  for (const auto& c : components) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

std::vector<ElementarySeries> elementary_from(std::span<const double> series, std::size_t window_length,
                                              const std::vector<FrequencyEigentriple>& triples) {
  const auto trajectory = embed(series, window_length);
  const std::size_t L = window_length;
  const Eigen::MatrixXd& X = trajectory.entries;

  std::vector<ElementarySeries> out;
  for (const auto& group : frequency_groups(L)) {
    const auto& u = triples[group.bin - 1];
    ElementarySeries es;
    es.bin = group.bin;
    es.frequency = group.center_frequency;
    if (group.kind == FrequencyGroup::Kind::Paired) {
      // X_{B_k} = 2 (R R' + I I') X, split into its two real rank-one halves.
      const Eigen::VectorXd re = std::sqrt(2.0) * u.eigenvector.real();
      const Eigen::VectorXd im = std::sqrt(2.0) * u.eigenvector.imag();
      const Eigen::VectorXd re_row = X.transpose() * re;
      const Eigen::VectorXd im_row = X.transpose() * im;
      es.parts.push_back(diagonal_average_outer(re, re_row));
      es.parts.push_back(diagonal_average_outer(im, im_row));
      es.eigenvalue_sum = u.eigenvalue + triples[L + 1 - group.bin].eigenvalue;
    } else {
      // Singleton bins have real eigenvectors; the projector is u u' without the factor 2.
      const Eigen::VectorXd re = u.eigenvector.real();
      const Eigen::VectorXd row = X.transpose() * re;
      es.parts.push_back(diagonal_average_outer(re, row));
      es.eigenvalue_sum = u.eigenvalue;
    }
    es.values = es.parts.front();
    for (std::size_t p = 1; p < es.parts.size(); ++p) accumulate_into(es.values, es.parts[p]);
    out.push_back(std::move(es));
  }
  return out;
}

}  // namespace

std::vector<ElementarySeries> cissa_elementary(std::span<const double> series, std::size_t window_length) {
  require_window(series.size(), window_length);
  return elementary_from(series, window_length, circulant_eigentriples(circulant_matrix(series, window_length)));
}

Decomposition cissa(std::span<const double> series, std::size_t window_length, const GroupingSpec& grouping) {
  grouping.validate();
  require_window(series.size(), window_length);
  const auto triples = circulant_eigentriples(circulant_matrix(series, window_length));
  const auto elementary = elementary_from(series, window_length, triples);
  auto d = empty_decomposition(Variant::Circulant, series, window_length, grouping);
  std::vector<double> mass(d.components.size(), 0.0);
  const std::size_t residual = d.components.size() - 1;
  const auto groups = frequency_groups(window_length);

  for (std::size_t b = 0; b < elementary.size(); ++b) {
    const auto& es = elementary[b];
    const auto band = grouping.band_for(es.frequency);
    const std::size_t g = band ? *band : residual;
    accumulate_into(d.components[g].values, es.values);
    for (auto idx : groups[b].indices) d.components[g].indices.push_back(idx);
  }

  for (const auto& t : triples) {
    d.eigenvalue_spectrum.push_back({t.frequency, t.eigenvalue});
    // Index k and its mirror L+2-k share a bin; the bin's frequency is min(w, 1 - w).
    const double folded = std::min(t.frequency, 1.0 - t.frequency);
    const auto band = grouping.band_for(folded);
    mass[band ? *band : residual] += std::max(t.eigenvalue, 0.0);
  }
  const auto shares = shares_from(mass);
  for (std::size_t g = 0; g < shares.size(); ++g) d.components[g].share = shares[g];
  for (auto& c : d.components) std::sort(c.indices.begin(), c.indices.end());
  return d;
}

Decomposition basic_ssa(std::span<const double> series, std::size_t window_length, const GroupingSpec& grouping,
                        FrequencyAssigner assigner) {
  return eigenbasis_ssa(Variant::Basic, series, window_length, grouping, assigner);
}

Decomposition toeplitz_ssa(std::span<const double> series, std::size_t window_length, const GroupingSpec& grouping,
                           FrequencyAssigner assigner) {
  return eigenbasis_ssa(Variant::Toeplitz, series, window_length, grouping, assigner);
}

Decomposition decompose(Variant variant, std::span<const double> series, std::size_t window_length,
                        const GroupingSpec& grouping, FrequencyAssigner assigner) {
  switch (variant) {
    case Variant::Circulant: return cissa(series, window_length, grouping);
    case Variant::Basic: return basic_ssa(series, window_length, grouping, assigner);
    case Variant::Toeplitz: return toeplitz_ssa(series, window_length, grouping, assigner);
  }
  throw Error(ErrorCode::VariantMismatch, "unknown variant");
}

}  // namespace cissa
