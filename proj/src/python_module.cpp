// Python bindings. Analyses return the same JSON payloads the CLI writes, as
// strings; the homtype package decodes them into dicts.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "homtype/cli.hpp"
#include "homtype/covering.hpp"
#include "homtype/error.hpp"
#include "homtype/examples.hpp"
#include "homtype/hausdorff.hpp"
#include "homtype/normalization.hpp"
#include "homtype/regularity.hpp"
#include "homtype/report_io.hpp"
#include "homtype/structure.hpp"

namespace py = pybind11;
using namespace homtype;

namespace {

std::vector<PointId> target_or_all(const MetricMeasureSpace& space, const std::optional<std::vector<PointId>>& F) {
  return F ? normalize_subset(space, *F) : all_points(space);
}

/// Full table when F covers X, rows for F otherwise.
DeltaTable table_for(const MetricMeasureSpace& space, std::span<const PointId> F, DeltaConvention convention) {
  return F.size() == space.size() ? DeltaTable::compute(space, convention)
                                  : DeltaTable::compute_rows(space, F, convention);
}

DeltaConvention parse_convention(const std::string& text) {
  if (text == "closed") return DeltaConvention::closed;
  if (text == "open") return DeltaConvention::open;
  throw PreconditionError("convention must be closed or open");
}

ExampleSpec make_spec(const std::string& family, const py::kwargs& kw) {
  ExampleSpec s;
  s.family = parse_example_family(family);
  for (const auto& [key, value] : kw) {
    const auto k = key.cast<std::string>();
    if (k == "level") s.level = value.cast<int>();
    else if (k == "ratio") s.ratio = value.cast<double>();
    else if (k == "host_level") s.host_level = value.cast<int>();
    else if (k == "n") s.n = value.cast<std::size_t>();
    else if (k == "dim") s.dim = value.cast<std::size_t>();
    else if (k == "spacing") s.spacing = value.cast<double>();
    else if (k == "total_mass") s.total_mass = value.cast<double>();
    else if (k == "beta") s.beta = value.cast<double>();
    else if (k == "a") s.a = value.cast<double>();
    else if (k == "extent") s.extent = value.cast<double>();
    else if (k == "resolution") s.resolution = value.cast<double>();
    else if (k == "f_end") s.f_end = value.cast<double>();
    else if (k == "height") s.height = value.cast<double>();
    else if (k == "seed") s.seed = value.cast<std::uint64_t>();
    else throw PreconditionError("unknown example parameter '" + k + "'");
  }
  return s;
}

}  // namespace

PYBIND11_MODULE(_homtype, m) {
  m.doc() = "Finite spaces of homogeneous type: quasi-distances, covers, dimensions, regularity.";
  m.attr("__version__") = tool_version();

  // Errors keep their exit-code category.
  static py::exception<Error> error(m, "Error");
  static py::exception<PreconditionError> refusal(m, "Refusal", error.ptr());
  static py::exception<InvariantViolation> violation(m, "InvariantViolation", error.ptr());
  static py::exception<SpaceError> schema(m, "SchemaError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SpaceError& e) {
      py::set_error(schema, e.what());
    } catch (const InvariantViolation& e) {
      py::set_error(violation, e.what());
    } catch (const PreconditionError& e) {
      py::set_error(refusal, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<MetricMeasureSpace>(m, "Space")
      .def_static(
          "from_coordinates",
          [](std::string name, py::array_t<double, py::array::c_style | py::array::forcecast> coords,
             std::vector<double> weights) {
            if (coords.ndim() != 2) throw PreconditionError("coords must be an (n, d) array");
            const std::vector<double> flat(coords.data(), coords.data() + coords.size());
            return MetricMeasureSpace::from_coordinates(std::move(name), std::size_t(coords.shape(1)), flat,
                                                        std::move(weights));
          },
          py::arg("name"), py::arg("coords"), py::arg("weights"))
      .def_static(
          "from_matrix",
          [](std::string name, py::array_t<double, py::array::c_style | py::array::forcecast> d,
             std::vector<double> weights) {
            if (d.ndim() != 2 || d.shape(0) != d.shape(1)) throw PreconditionError("distances must be square");
            return MetricMeasureSpace::from_matrix(std::move(name), std::vector<double>(d.data(), d.data() + d.size()),
                                                   std::move(weights));
          },
          py::arg("name"), py::arg("distances"), py::arg("weights"))
      .def_static("load", [](const std::string& path) { return parse_space_file(path); }, py::arg("path"))
      .def("save", [](const MetricMeasureSpace& s, const std::string& path) { write_space_file(s, path); },
           py::arg("path"))
      .def("__len__", &MetricMeasureSpace::size)
      .def_property_readonly("name", &MetricMeasureSpace::name)
      .def_property_readonly("total_mass", &MetricMeasureSpace::total_mass)
      .def("distance", &MetricMeasureSpace::distance, py::arg("x"), py::arg("y"))
      .def("weight", &MetricMeasureSpace::weight, py::arg("x"))
      .def("weights", [](const MetricMeasureSpace& s) {
        std::vector<double> w(s.size());
        for (PointId i = 0; i < s.size(); ++i) w[i] = s.weight(i);
        return w;
      });

  m.def(
      "generate",
      [](const std::string& family, const py::kwargs& kw) {
        auto ex = generate(make_spec(family, kw));
        py::dict measures;
        for (const auto& nm : ex.measures) measures[py::str(nm.name)] = nm.weights;
        return py::make_tuple(std::move(ex.space), ex.F, measures);
      },
      py::arg("family"), "Example space: returns (space, F, {measure name: weights}).");

  m.def(
      "delta_table",
      [](const MetricMeasureSpace& space, const std::string& convention) {
        const auto table = compute_delta(space, parse_convention(convention));
        const auto n = py::ssize_t(space.size());
        py::array_t<double> out({n, n});
        const auto dense = table.dense();
        std::copy(dense.begin(), dense.end(), out.mutable_data());
        return out;
      },
      py::arg("space"), py::arg("convention") = "closed");

  m.def(
      "delta_ball",
      [](const MetricMeasureSpace& space, PointId x, double r, const std::string& convention) {
        const std::vector<PointId> src{x};
        const auto table = DeltaTable::compute_rows(space, src, parse_convention(convention));
        const auto b = delta_ball(table, x, r);
        return py::make_tuple(b.members, b.mass);
      },
      py::arg("space"), py::arg("x"), py::arg("r"), py::arg("convention") = "closed",
      "Open delta ball {y : delta(x, y) < r}: returns (members, mass).");

  m.def(
      "structure_constants",
      [](const MetricMeasureSpace& space, std::uint64_t seed) {
        StructureOptions o;
        o.triangle.seed = seed;
        o.dimension.seed = seed;
        return to_json(estimate_structure_constants(space, o)).dump();
      },
      py::arg("space"), py::arg("seed") = 0);

  m.def(
      "normality_constants",
      [](const MetricMeasureSpace& space, std::optional<std::vector<PointId>> F, double r_lo, double r_hi) {
        const auto target = target_or_all(space, F);
        const auto table = table_for(space, target, DeltaConvention::closed);
        NormalityOptions o;
        o.r_lo = r_lo;
        o.r_hi = r_hi;
        return to_json(normality_constants(table, o)).dump();
      },
      py::arg("space"), py::arg("F") = py::none(), py::arg("r_lo") = 0.0, py::arg("r_hi") = 0.0);

  m.def(
      "dimension",
      [](const MetricMeasureSpace& space, std::optional<std::vector<PointId>> F, const std::string& flavor,
         const std::string& method, bool centers_in_target) {
        const auto target = target_or_all(space, F);
        const auto hf = parse_hausdorff_flavor(flavor);
        DimensionOptions o;
        o.method = method == "bisection" ? DimensionMethod::bisection : DimensionMethod::regression;
        if (method != "bisection" && method != "regression") throw PreconditionError("unknown method " + method);
        o.candidates.centers_in_target = centers_in_target;
        std::optional<DeltaTable> table;
        if (hf == HausdorffFlavor::delta)
          table = centers_in_target ? DeltaTable::compute_rows(space, target) : compute_delta(space);
        return to_json(dimension_estimate(space, table ? &*table : nullptr, target, hf, o)).dump();
      },
      py::arg("space"), py::arg("F") = py::none(), py::arg("flavor") = "metric", py::arg("method") = "regression",
      py::arg("centers_in_target") = false);

  m.def(
      "regularity",
      [](const MetricMeasureSpace& space, std::optional<std::vector<PointId>> F, std::vector<double> nu, double s,
         const std::string& flavor, bool exhaustive, double r_lo, double r_hi, bool local) {
        const auto target = target_or_all(space, F);
        const auto rf = parse_regularity_flavor(flavor);
        RegularityOptions o;
        o.exhaustive = exhaustive;
        o.r_lo = r_lo;
        o.r_hi = r_hi;
        o.local = local;
        o.keep_samples = false;
        std::optional<DeltaTable> table;
        if (rf == RegularityFlavor::delta) table = DeltaTable::compute_rows(space, target);
        return to_json(regularity_test(space, table ? &*table : nullptr, target, nu, s, rf, o)).dump();
      },
      py::arg("space"), py::arg("F"), py::arg("nu"), py::arg("s"), py::arg("flavor") = "metric",
      py::arg("exhaustive") = false, py::arg("r_lo") = 0.0, py::arg("r_hi") = 0.0, py::arg("local") = false);

  m.def(
      "small_measure_cover",
      [](const MetricMeasureSpace& space, std::optional<std::vector<PointId>> G, double rho) {
        const auto target = target_or_all(space, G);
        const auto table = compute_delta(space);
        SmallMeasureCoverOptions o;
        o.K_tilde = estimate_triangle_constant(table).K;
        o.N_tilde = estimate_metric_dimension(table).N;
        const auto out = small_measure_cover(table, estimate_structure_constants(space), target, rho, o);
        Json j = to_json(out.cover);
        j["certificate"] = to_json(out.certificate);
        return j.dump();
      },
      py::arg("space"), py::arg("G"), py::arg("rho"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"homtype"};
        for (const auto& a : args) argv.push_back(a.c_str());
        return run_cli(int(argv.size()), argv.data());
      },
      py::arg("args"), "Runs a homtype subcommand in-process and returns its exit code.");
}
