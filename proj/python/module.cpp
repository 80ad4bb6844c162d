#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polya/commands.hpp"
#include "polya/config.hpp"
#include "polya/error.hpp"
#include "polya/fluctuations.hpp"
#include "polya/numerics.hpp"
#include "polya/oracle.hpp"
#include "polya/simulate.hpp"
#include "polya/state.hpp"
#include "polya/stats.hpp"

namespace py = pybind11;
using namespace polya;

namespace {

using Array = py::array_t<double>;

Array table(const Trajectory& tr, int which) {
  const std::size_t rows = tr.rows(), n = tr.urns();
  Array out({rows, n});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < n; ++j)
      v(r, j) = which == 0 ? tr.fraction(r, j) : which == 1 ? tr.gap(r, j) : tr.compensator(r, j);
  return out;
}

// (M, N) array of one per-urn quantity at time t across an ensemble.
Array snapshot(const Ensemble& e, std::int64_t t, const std::string& what) {
  const std::size_t n = e.params.urn_count();
  Array out({e.size(), n});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < e.size(); ++r) {
    const auto& tr = e.trajectories[r];
    const std::size_t row = tr.row_of(t);
    for (std::size_t j = 0; j < n; ++j) {
      if (what == "Z") v(r, j) = tr.fraction(row, j);
      else if (what == "D") v(r, j) = tr.gap(row, j);
      else if (what == "L") v(r, j) = tr.compensator(row, j);
      else throw ArgumentError("quantity must be one of Z, D, L");
    }
  }
  return out;
}

py::dict moments_dict(const ExactMomentsAt& m) {
  py::dict d;
  d["t"] = m.t;
  d["E_Z"] = m.mean_z;
  d["E_Z2"] = m.mean_z_sq;
  d["E_D2"] = m.gap_sq;
  d["E_D4"] = m.gap_fourth;
  d["E_absD"] = m.gap_abs;
  d["mass"] = m.mass;
  return d;
}

PivotKind pivot_of(const std::string& name) {
  if (name == "S1") return PivotKind::S1;
  if (name == "S2") return PivotKind::S2;
  if (name == "S3") return PivotKind::S3;
  if (name == "S4") return PivotKind::S4;
  throw ArgumentError("pivot must be one of S1, S2, S3, S4");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Interacting Polya urns: simulation, exact moments and fluctuation statistics.";

  const auto base = py::register_exception<Error>(m, "PolyaError", PyExc_RuntimeError);
  const auto both = [&](PyObject* builtin) { return py::make_tuple(base, py::handle(builtin)); };
  py::register_exception<ArgumentError>(m, "ArgumentError", both(PyExc_ValueError));
  py::register_exception<PreconditionError>(m, "PreconditionError", both(PyExc_ValueError));
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base);
  py::register_exception<ResourceBoundError>(m, "ResourceBoundError", base);
  py::register_exception<ConfigError>(m, "ConfigError", both(PyExc_ValueError));
  py::register_exception<IoError>(m, "IoError", both(PyExc_OSError));

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<std::int64_t, std::int64_t, std::int64_t, double>(), py::arg("N"), py::arg("a"),
           py::arg("b"), py::arg("alpha"))
      .def_property_readonly("N", &ModelParams::urns)
      .def_property_readonly("a", &ModelParams::initial_red)
      .def_property_readonly("b", &ModelParams::initial_black)
      .def_property_readonly("m", &ModelParams::initial_total)
      .def_property_readonly("alpha", &ModelParams::alpha)
      .def("__eq__", [](const ModelParams& x, const ModelParams& y) { return x == y; })
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(N=" + std::to_string(p.urns()) + ", a=" + std::to_string(p.initial_red()) +
               ", b=" + std::to_string(p.initial_black()) + ", alpha=" + py::repr(py::float_(p.alpha())).cast<std::string>() + ")";
      });

  py::class_<UrnSystemState>(m, "UrnSystemState")
      .def(py::init([](std::int64_t t, std::vector<std::int64_t> red) { return UrnSystemState{t, std::move(red)}; }),
           py::arg("t"), py::arg("red"))
      .def_static("initial", &UrnSystemState::initial)
      .def_readonly("t", &UrnSystemState::t)
      .def_readonly("red", &UrnSystemState::red)
      .def("fraction", &UrnSystemState::fraction)
      .def("mean_fraction", &UrnSystemState::mean_fraction)
      .def("gap", &UrnSystemState::gap);

  m.def("reinforcement_probabilities", &reinforcement_probabilities, py::arg("state"), py::arg("params"));
  m.def("step", [](const UrnSystemState& s, const ModelParams& p, std::uint64_t seed) {
    Rng rng(seed);
    return step(s, p, rng);
  }, py::arg("state"), py::arg("params"), py::arg("seed"),
        "One synchronous update drawing from a fresh stream seeded with `seed`.");
  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("replica"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("params", &Trajectory::params)
      .def_property_readonly("seed", &Trajectory::seed)
      .def_property_readonly("record_times", &Trajectory::record_times)
      .def_property_readonly("Z", [](const Trajectory& t) { return table(t, 0); })
      .def_property_readonly("D", [](const Trajectory& t) { return table(t, 1); })
      .def_property_readonly("L", [](const Trajectory& t) { return table(t, 2); })
      .def_property_readonly("Zbar", [](const Trajectory& t) {
        Array out(t.rows());
        auto v = out.mutable_unchecked<1>();
        for (std::size_t r = 0; r < t.rows(); ++r) v(r) = t.mean_fraction(r);
        return out;
      })
      .def("row_of", &Trajectory::row_of)
      .def("__eq__", [](const Trajectory& x, const Trajectory& y) { return x == y; });

  py::class_<Ensemble>(m, "Ensemble")
      .def_readonly("params", &Ensemble::params)
      .def_readonly("master_seed", &Ensemble::master_seed)
      .def_readonly("trajectories", &Ensemble::trajectories)
      .def("__len__", &Ensemble::size)
      .def("snapshot", &snapshot, py::arg("t"), py::arg("quantity") = "Z",
           "(M, N) array of Z, D or L at recorded time t.");

  m.def("simulate", [](const ModelParams& p, std::int64_t horizon, std::vector<std::int64_t> times,
                       std::uint64_t seed) { return simulate(p, horizon, times, seed); },
        py::arg("params"), py::arg("horizon"), py::arg("record_times"), py::arg("seed"));
  m.def("simulate_ensemble",
        [](const ModelParams& p, std::size_t replicas, std::int64_t horizon, std::vector<std::int64_t> times,
           std::uint64_t master_seed, unsigned threads) {
          py::gil_scoped_release release;
          return simulate_ensemble(p, replicas, horizon, times, master_seed, {threads, 0});
        },
        py::arg("params"), py::arg("M"), py::arg("horizon"), py::arg("record_times"), py::arg("master_seed"),
        py::arg("threads") = 1);
  m.def("geometric_grid", [](std::int64_t horizon, int per_decade, std::vector<std::int64_t> extra) {
    return geometric_grid(horizon, per_decade, extra);
  }, py::arg("horizon"), py::arg("per_decade") = 40, py::arg("extra") = std::vector<std::int64_t>{});

  m.def("enumerate_exact", [](const ModelParams& p, std::int64_t t_max, double prune_below) {
    const ExactMoments ex = enumerate_exact(p, t_max, {prune_below});
    py::list rows;
    for (const auto& r : ex.by_time) rows.append(moments_dict(r));
    return rows;
  }, py::arg("params"), py::arg("t_max"), py::arg("prune_below") = 0.0);
  m.def("conditional_drift_check", [](const ModelParams& p, const UrnSystemState& s) {
    return conditional_drift_check(p, s).residual;
  }, py::arg("params"), py::arg("state"));
  m.def("scaled_gap_drift_residual", &scaled_gap_drift_residual, py::arg("params"), py::arg("state"),
        py::arg("urn") = 0);

  m.def("fit_scaling_exponent", [](const Ensemble& e, std::size_t urn, std::int64_t lo, std::int64_t hi) {
    const ScalingFit f = fit_scaling_exponent(e, urn, {lo, hi}, regime_of(e.params.alpha()));
    py::dict d;
    d["slope"] = f.slope;
    d["slope_stderr"] = f.slope_stderr;
    d["intercept"] = f.intercept;
    d["expected_slope"] = f.expected_slope;
    d["regime"] = std::string(to_string(f.regime));
    d["points"] = f.points;
    return d;
  }, py::arg("ensemble"), py::arg("urn"), py::arg("t_lo"), py::arg("t_hi"));
  m.def("clt_sample", [](const Ensemble& e, const std::string& kind, std::int64_t t, std::int64_t T,
                         std::size_t urn, bool omit_interaction_factor) {
    CltOptions opt;
    opt.omit_interaction_factor = omit_interaction_factor;
    return clt_sample(e, pivot_of(kind), t, T, urn, opt).values;
  }, py::arg("ensemble"), py::arg("kind"), py::arg("t"), py::arg("T") = 0, py::arg("urn") = 0,
        py::arg("omit_interaction_factor") = false);
  m.def("limit_diagnostics_sub", [](const Ensemble& e, std::size_t urn, std::int64_t t1, std::int64_t t2) {
    const auto d = limit_diagnostics_sub(e, urn, t1, t2);
    return py::dict(py::arg("corr") = d.corr, py::arg("var_hat") = d.var_hat, py::arg("mean_abs") = d.mean_abs);
  }, py::arg("ensemble"), py::arg("urn"), py::arg("t1"), py::arg("t2"));
  m.def("covariance_structure", [](const Ensemble& e, std::int64_t t, bool raw) {
    const SquareMatrix c = raw ? raw_gap_covariance(e, t) : covariance_structure(e, t);
    Array out({c.n, c.n});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < c.n; ++i)
      for (std::size_t j = 0; j < c.n; ++j) v(i, j) = c(i, j);
    return out;
  }, py::arg("ensemble"), py::arg("t"), py::arg("raw") = false);

  m.def("normal_cdf", &normal_cdf, py::arg("x"));
  m.def("normal_quantile", &normal_quantile, py::arg("p"));
  m.def("ks_test", [](std::vector<double> xs) {
    const KsResult r = ks_test(xs);
    return py::make_tuple(r.statistic, r.p_value);
  }, py::arg("sample"), "Returns (statistic, p_value) against the standard normal.");
  m.def("ols_loglog", [](std::vector<double> xs, std::vector<double> ys) {
    const LinearFit f = ols_loglog(xs, ys);
    return py::make_tuple(f.slope, f.intercept, f.slope_stderr);
  }, py::arg("xs"), py::arg("ys"));
  m.def("z_confidence_interval", [](const Trajectory& tr, std::int64_t t, double level) {
    const IntervalEstimate ci = z_confidence_interval(tr, t, level);
    return py::make_tuple(ci.center, ci.half_width);
  }, py::arg("trajectory"), py::arg("t"), py::arg("level") = 0.95);
  m.def("estimate_alpha", [](const Ensemble& e, std::int64_t t, std::size_t urn) {
    const AlphaEstimate a = estimate_alpha(e, t, urn);
    return py::make_tuple(a.alpha_hat, a.standard_error);
  }, py::arg("ensemble"), py::arg("t"), py::arg("urn") = 0);

  m.def("coefficients", [](double alpha, std::int64_t mm, std::int64_t t) {
    const CoefficientTable c = coefficients(alpha, mm, t);
    Array out(static_cast<py::ssize_t>(t + 1));
    auto v = out.mutable_unchecked<1>();
    for (std::int64_t k = 1; k <= t + 1; ++k) v(k - 1) = c(k);
    return out;
  }, py::arg("alpha"), py::arg("m"), py::arg("t"), "c_{k,t} for k = 1..t+1.");
  m.def("dyadic_ratio_deviation", &dyadic_ratio_deviation, py::arg("alpha"), py::arg("m"), py::arg("t"));
  m.def("solve_linear_recursion", &solve_linear_recursion, py::arg("f"), py::arg("g"), py::arg("t"));
  m.def("iterate_linear_recursion", &iterate_linear_recursion, py::arg("f"), py::arg("g"), py::arg("t"));

  m.def("parse_config", [](const std::string& text) { return emit_config(parse_config(text)); },
        py::arg("text"), "Validates config text and returns its canonical form.");
  m.def("config_hash", [](const std::string& text) { return config_hash(parse_config(text)); },
        py::arg("text"));
}
