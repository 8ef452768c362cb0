#include "cissa/diagnostics.hpp"
#include "cissa/error.hpp"
#include "cissa/io.hpp"
#include "cissa/moments.hpp"
#include "cissa/simulate.hpp"
#include "cissa/spectral.hpp"
#include "cissa/ssa.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <variant>

namespace py = pybind11;
using namespace cissa;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Bands = std::optional<std::variant<std::string, GroupingSpec>>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw Error(ErrorCode::InvalidParams, "expected a one-dimensional series");
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_numpy(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

GroupingSpec resolve_bands(const Bands& bands, std::size_t length, std::size_t window, const std::string& residual) {
  require_window(length, window);
  if (!bands) {
    auto g = default_monthly_grouping(window);
    g.residual_name = residual;
    return g;
  }
  if (const auto* text = std::get_if<std::string>(&*bands)) return parse_bands(*text, residual);
  return std::get<GroupingSpec>(*bands);
}

FrequencyAssigner parse_assigner(const std::string& name) {
  if (name == "eigenvector") return FrequencyAssigner::Eigenvector;
  if (name == "pc" || name == "principal_component") return FrequencyAssigner::PrincipalComponent;
  throw Error(ErrorCode::InvalidConfig, "assigner must be 'eigenvector' or 'pc'");
}

py::dict table_dict(const VariantTable& t) {
  py::dict rows;
  for (const auto& r : t.rows) {
    rows[py::make_tuple(r.component, r.statistic)] = py::array_t<double>(r.values.size(), r.values.data());
  }
  py::dict out;
  out["variant"] = std::string(variant_name(t.variant));
  out["replications"] = t.replications;
  out["failures"] = t.failures;
  out["failure_messages"] = t.failure_messages;
  out["levels"] = std::vector<double>(kQuantileLevels.begin(), kQuantileLevels.end());
  out["rows"] = rows;
  return out;
}

LinearModelParams linear_params(std::size_t length, std::size_t seasonal_period, double cycle_period, double rho_c,
                                double sigma_trend, double sigma_seasonal, double sigma_cycle, double sigma_irregular,
                                std::uint64_t seed) {
  LinearModelParams p;
  p.length = length;
  p.seasonal_period = seasonal_period;
  p.cycle_period = cycle_period;
  p.rho_c = rho_c;
  p.sigma_trend = sigma_trend;
  p.sigma_seasonal = sigma_seasonal;
  p.sigma_cycle = sigma_cycle;
  p.sigma_irregular = sigma_irregular;
  p.seed = seed;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Circulant singular spectrum analysis";

  static py::exception<Error> cissa_error(m, "CissaError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(cissa_error, e.what());
    }
  });

  py::class_<GroupingSpec>(m, "GroupingSpec")
      .def_property_readonly("bands",
                             [](const GroupingSpec& g) {
                               std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> out;
                               for (const auto& b : g.bands) {
                                 std::vector<std::pair<double, double>> iv;
                                 for (const auto& i : b.intervals) iv.emplace_back(i.lo, i.hi);
                                 out.emplace_back(b.name, iv);
                               }
                               return out;
                             })
      .def_readwrite("residual_name", &GroupingSpec::residual_name);

  py::class_<Component>(m, "Component")
      .def_readonly("name", &Component::name)
      .def_property_readonly("values", [](const Component& c) { return to_numpy(c.values); })
      .def_readonly("share", &Component::share)
      .def_readonly("indices", &Component::indices)
      .def("__repr__", [](const Component& c) {
        return "<Component " + c.name + " share=" + std::to_string(c.share) + ">";
      });

  py::class_<Decomposition>(m, "Decomposition")
      .def_property_readonly("variant", [](const Decomposition& d) { return std::string(variant_name(d.variant)); })
      .def_readonly("window_length", &Decomposition::window_length)
      .def_property_readonly("original", [](const Decomposition& d) { return to_numpy(d.original); })
      .def_readonly("components", &Decomposition::components)
      .def_property_readonly("names",
                             [](const Decomposition& d) {
                               std::vector<std::string> n;
                               for (const auto& c : d.components) n.push_back(c.name);
                               return n;
                             })
      .def_property_readonly("shares",
                             [](const Decomposition& d) {
                               py::dict s;
                               for (const auto& c : d.components) s[py::str(c.name)] = c.share;
                               return s;
                             })
      .def_property_readonly("spectrum",
                             [](const Decomposition& d) {
                               std::vector<double> f, l;
                               for (const auto& p : d.eigenvalue_spectrum) {
                                 f.push_back(p.frequency);
                                 l.push_back(p.eigenvalue);
                               }
                               return py::make_tuple(to_numpy(f), to_numpy(l));
                             })
      .def("__getitem__",
           [](const Decomposition& d, const std::string& name) {
             const auto* c = d.find(name);
             if (!c) throw py::key_error(name);
             return to_numpy(c->values);
           });

  py::class_<ElementarySeries>(m, "ElementarySeries")
      .def_readonly("bin", &ElementarySeries::bin)
      .def_readonly("frequency", &ElementarySeries::frequency)
      .def_property_readonly("values", [](const ElementarySeries& e) { return to_numpy(e.values); })
      .def_property_readonly("parts",
                             [](const ElementarySeries& e) {
                               py::list out;
                               for (const auto& p : e.parts) out.append(to_numpy(p));
                               return out;
                             })
      .def_readonly("eigenvalue_sum", &ElementarySeries::eigenvalue_sum);

  py::class_<RegressionCheck>(m, "RegressionCheck")
      .def_readonly("label", &RegressionCheck::label)
      .def_readonly("intercept", &RegressionCheck::intercept)
      .def_readonly("slope", &RegressionCheck::slope);

  py::class_<AR1Fit>(m, "AR1Fit")
      .def_readonly("mean", &AR1Fit::mean)
      .def_readonly("stddev", &AR1Fit::stddev)
      .def_readonly("ar_coefficient", &AR1Fit::ar_coefficient);

  py::class_<SeasonalityReport>(m, "SeasonalityReport")
      .def_readonly("method", &SeasonalityReport::method)
      .def_readonly("threshold", &SeasonalityReport::threshold)
      .def_property_readonly("shares",
                             [](const SeasonalityReport& r) {
                               std::vector<std::tuple<double, double, bool>> out;
                               for (const auto& s : r.shares) out.emplace_back(s.frequency, s.share, s.flagged);
                               return out;
                             })
      .def_property_readonly("flagged", &SeasonalityReport::any_flagged);

  py::class_<Realization>(m, "Realization")
      .def_property_readonly("observed", [](const Realization& r) { return to_numpy(r.observed); })
      .def_property_readonly("trend", [](const Realization& r) { return to_numpy(r.trend); })
      .def_property_readonly("cycle", [](const Realization& r) { return to_numpy(r.cycle); })
      .def_property_readonly("seasonal", [](const Realization& r) { return to_numpy(r.seasonal); })
      .def_property_readonly("irregular", [](const Realization& r) { return to_numpy(r.irregular); })
      .def_readonly("a0", &Realization::a0)
      .def_readonly("a1", &Realization::a1);

  m.def("default_monthly_grouping", &default_monthly_grouping, py::arg("window"), py::arg("cycle_min") = 18.0,
        py::arg("cycle_max") = 96.0);
  m.def("parse_bands", &parse_bands, py::arg("text"), py::arg("residual") = "irregular");

  m.def(
      "cissa",
      [](const Array& x, std::size_t window, const Bands& bands, const std::string& residual) {
        const auto v = to_vector(x);
        return cissa::cissa(v, window, resolve_bands(bands, v.size(), window, residual));
      },
      py::arg("series"), py::arg("window"), py::arg("bands") = py::none(), py::arg("residual") = "irregular",
      "Decompose with the circulant variant. `bands` is \"name=lo:hi;...\", a GroupingSpec, or None for the "
      "monthly trend/cycle/seasonal default.");
  m.def(
      "basic_ssa",
      [](const Array& x, std::size_t window, const Bands& bands, const std::string& residual,
         const std::string& assigner) {
        const auto v = to_vector(x);
        return basic_ssa(v, window, resolve_bands(bands, v.size(), window, residual), parse_assigner(assigner));
      },
      py::arg("series"), py::arg("window"), py::arg("bands") = py::none(), py::arg("residual") = "irregular",
      py::arg("assigner") = "eigenvector");
  m.def(
      "toeplitz_ssa",
      [](const Array& x, std::size_t window, const Bands& bands, const std::string& residual,
         const std::string& assigner) {
        const auto v = to_vector(x);
        return toeplitz_ssa(v, window, resolve_bands(bands, v.size(), window, residual), parse_assigner(assigner));
      },
      py::arg("series"), py::arg("window"), py::arg("bands") = py::none(), py::arg("residual") = "irregular",
      py::arg("assigner") = "eigenvector");
  m.def(
      "elementary", [](const Array& x, std::size_t window) { return cissa_elementary(to_vector(x), window); },
      py::arg("series"), py::arg("window"), "Per-frequency reconstructed series, bins 1..floor(L/2)+1.");
  m.def(
      "spectrum",
      [](const Array& x, std::size_t window) {
        const auto v = to_vector(x);
        const auto triples = circulant_eigentriples(circulant_matrix(v, window));
        std::vector<double> f, l;
        for (const auto& t : triples) {
          f.push_back(t.frequency);
          l.push_back(t.eigenvalue);
        }
        return py::make_tuple(to_numpy(f), to_numpy(l));
      },
      py::arg("series"), py::arg("window"), "Circulant eigenvalues at frequencies (k-1)/L, k = 1..L.");

  m.def(
      "w_correlation",
      [](const Array& a, const Array& b, std::size_t window) {
        return w_correlation(to_vector(a), to_vector(b), window);
      },
      py::arg("x1"), py::arg("x2"), py::arg("window"));
  m.def(
      "w_correlation_matrix",
      [](const std::vector<Array>& series, std::size_t window) {
        std::vector<std::vector<double>> s;
        std::vector<std::string> labels;
        for (const auto& a : series) {
          s.push_back(to_vector(a));
          labels.push_back(std::to_string(labels.size()));
        }
        return w_correlation_matrix(s, labels, window).entries;
      },
      py::arg("series"), py::arg("window"));
  m.def(
      "regression_check",
      [](const Array& truth, const Array& extracted) { return regression_check(to_vector(truth), to_vector(extracted)); },
      py::arg("true_component"), py::arg("extracted"));
  m.def(
      "ar1_fit", [](const Array& x) { return ar1_fit(to_vector(x)); }, py::arg("residuals"));
  m.def(
      "residual_seasonality_check",
      [](const Array& x, std::size_t period, double threshold) {
        const auto f = seasonal_frequencies(period);
        return residual_seasonality_check(to_vector(x), f, threshold);
      },
      py::arg("adjusted"), py::arg("period") = 12, py::arg("threshold") = 0.01);

  m.def(
      "simulate_linear",
      [](std::size_t length, std::size_t s, double cp, double rho, double st, double ss, double sc, double se,
         std::uint64_t seed) { return simulate_linear(linear_params(length, s, cp, rho, st, ss, sc, se, seed)); },
      py::arg("length") = 193, py::arg("seasonal_period") = 12, py::arg("cycle_period") = 48.0, py::arg("rho_c") = 1.0,
      py::arg("sigma_trend") = 0.0006, py::arg("sigma_seasonal") = 0.004, py::arg("sigma_cycle") = 0.008,
      py::arg("sigma_irregular") = 0.06, py::arg("seed") = 1);
  m.def(
      "simulate_nonlinear",
      [](double a0, double a1, std::size_t length, std::uint64_t seed) {
        NonlinearModelParams p;
        p.a0 = a0;
        p.a1 = a1;
        p.base.length = length;
        p.base.seed = seed;
        return simulate_nonlinear(p);
      },
      py::arg("a0") = 0.0, py::arg("a1") = 10.0, py::arg("length") = 193, py::arg("seed") = 1);

  m.def(
      "monte_carlo",
      [](const std::string& model, std::size_t reps, const std::vector<std::string>& variants, std::size_t window,
         std::uint64_t seed, std::size_t threads) {
        MonteCarloConfig mc;
        mc.model = parse_model(model);
        mc.replications = reps;
        mc.variants.clear();
        for (const auto& v : variants) mc.variants.push_back(parse_variant(v));
        mc.window_length = window;
        mc.master_seed = seed;
        mc.threads = threads;
        std::vector<VariantTable> tables;
        {
          py::gil_scoped_release release;
          tables = monte_carlo(mc);
        }
        py::list out;
        for (const auto& t : tables) out.append(table_dict(t));
        return out;
      },
      py::arg("model") = "linear", py::arg("reps") = 500, py::arg("variants") = std::vector<std::string>{"cissa"},
      py::arg("window") = 48, py::arg("seed") = 20190901, py::arg("threads") = 0,
      "Quantile tables keyed by (component, statistic); levels 5/25/50/75/95%.");

  m.def(
      "read_series",
      [](const std::string& path, const std::string& column, const std::string& date_column) {
        const auto f = read_series(path, column, date_column);
        return py::make_tuple(to_numpy(f.series.values), f.dates);
      },
      py::arg("path"), py::arg("column") = "", py::arg("date_column") = "");
}
