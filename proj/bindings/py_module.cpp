#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fbmwalk/oracle.hpp"
#include "fbmwalk/special.hpp"
#include "fbmwalk/stats.hpp"
#include "fbmwalk/version.hpp"
#include "fbmwalk/walk.hpp"

namespace py = pybind11;
using namespace fbmwalk;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    // the (size, data) form copies; the size-only ctor is avoided since
    // some pybind11 releases leave its strides unusable
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

Engine parse_engine(const std::string& name) {
    if (name == "naive") return Engine::Naive;
    if (name == "convolution") return Engine::Convolution;
    if (name == "auto") return Engine::Auto;
    throw std::invalid_argument("engine must be naive, convolution or auto");
}

}  // namespace

PYBIND11_MODULE(_fbmwalk, m) {
    m.doc() = "Weighted-random-walk approximation to fractional Brownian "
              "motion";
    m.attr("__version__") = FBMWALK_VERSION;

    py::class_<HurstIndex>(m, "HurstIndex")
        .def(py::init<double>(), py::arg("h"))
        .def_property_readonly("value", &HurstIndex::value)
        .def_property_readonly("sub_diffusive", &HurstIndex::sub_diffusive)
        .def_property_readonly("super_diffusive",
                               &HurstIndex::super_diffusive)
        .def("__repr__", [](const HurstIndex& h) {
            return "HurstIndex(" + std::to_string(h.value()) + ")";
        });
    py::implicitly_convertible<py::float_, HurstIndex>();

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<long, double, long>(), py::arg("n_per_unit"),
             py::arg("horizon"), py::arg("past_steps"))
        .def_property_readonly("n_per_unit", &GridSpec::n_per_unit)
        .def_property_readonly("dt", &GridSpec::dt)
        .def_property_readonly("horizon", &GridSpec::horizon)
        .def_property_readonly("future_steps", &GridSpec::future_steps)
        .def_property_readonly("past_steps", &GridSpec::past_steps)
        .def("time_of", &GridSpec::time_of, py::arg("step"))
        .def("step_of", &GridSpec::step_of, py::arg("t"));

    py::class_<PathSample>(m, "PathSample")
        .def_readonly("grid", &PathSample::grid)
        .def_readonly("scaled", &PathSample::scaled)
        .def_property_readonly(
            "values", [](const PathSample& p) { return to_array(p.values); })
        .def_property_readonly("times",
                               [](const PathSample& p) {
                                   std::vector<double> t;
                                   for (size_t k = 0; k < p.values.size();
                                        ++k) {
                                       t.push_back(p.grid.time_of(
                                           static_cast<long>(k)));
                                   }
                                   return to_array(t);
                               })
        .def("at_time", &PathSample::at_time, py::arg("t"));

    py::class_<PathGenerator>(m, "PathGenerator")
        .def(py::init([](const HurstIndex& H, const GridSpec& g,
                         const std::string& engine) {
                 return PathGenerator(H, g, parse_engine(engine));
             }),
             py::arg("hurst"), py::arg("grid"), py::arg("engine") = "auto")
        .def("generate", &PathGenerator::generate, py::arg("seed"))
        .def_property_readonly("engine", [](const PathGenerator& g) {
            switch (g.engine()) {
                case Engine::Naive: return "naive";
                case Engine::Convolution: return "convolution";
                default: return "auto";
            }
        });

    // special functions and constants
    m.def("zeta", &zeta, py::arg("s"));
    m.def("zeta_tail", &zeta_tail, py::arg("s"), py::arg("k0"));
    m.def("gamma_fn", &gamma_fn, py::arg("x"));
    m.def("coefficient_K", &coefficient_K, py::arg("hurst"));
    m.def("scaling_constant_c", &scaling_constant_c, py::arg("hurst"));
    m.def(
        "constants",
        [](const HurstIndex& H) {
            const auto c = make_constants(H);
            py::dict d;
            d["H"] = c.H.value();
            d["K_H"] = c.K;
            d["c_H"] = c.c;
            return d;
        },
        py::arg("hurst"));

    // walk construction
    m.def(
        "path_incremental",
        [](const HurstIndex& H, const GridSpec& g, std::uint64_t seed) {
            return path_incremental(H, BernoulliStream(seed, g));
        },
        py::arg("hurst"), py::arg("grid"), py::arg("seed"));
    m.def(
        "path_coefficient",
        [](const HurstIndex& H, const GridSpec& g, std::uint64_t seed) {
            return path_coefficient(H, BernoulliStream(seed, g));
        },
        py::arg("hurst"), py::arg("grid"), py::arg("seed"));
    m.def(
        "path_kernel",
        [](const HurstIndex& H, const GridSpec& g, std::uint64_t seed) {
            return path_kernel(H, BernoulliStream(seed, g));
        },
        py::arg("hurst"), py::arg("grid"), py::arg("seed"));
    m.def("past_horizon_for_tolerance", &past_horizon_for_tolerance,
          py::arg("hurst"), py::arg("n_per_unit"), py::arg("horizon"),
          py::arg("rel_var_tol"));
    m.def("truncation_tail_variance", &truncation_tail_variance,
          py::arg("hurst"), py::arg("n_per_unit"), py::arg("past_steps"),
          py::arg("t"));

    // lemma checks
    m.def(
        "lemma2_variance_bounds",
        [](const HurstIndex& H, double t, const GridSpec& g) {
            const auto c = lemma2_variance_bounds(H, t, g);
            py::dict d;
            d["epsilon_variance"] = c.epsilon_variance;
            d["epsilon_bound"] = c.epsilon_bound;
            d["delta_variance"] = c.delta_variance;
            d["delta_bound"] = c.delta_bound;
            d["pass"] = c.pass();
            return d;
        },
        py::arg("hurst"), py::arg("t"), py::arg("grid"));
    m.def(
        "lemma3_pathwise_bound",
        [](const HurstIndex& H, const GridSpec& g, std::uint64_t seed) {
            const auto c = lemma3_pathwise_bound(H, BernoulliStream(seed, g));
            py::dict d;
            d["max_discrepancy"] = c.max_discrepancy;
            d["bound"] = c.bound;
            d["pass"] = c.pass;
            return d;
        },
        py::arg("hurst"), py::arg("grid"), py::arg("seed"));

    // exact Gaussian oracle
    m.def("fbm_covariance", &fbm_covariance, py::arg("hurst"), py::arg("s"),
          py::arg("t"));
    m.def(
        "build_covariance",
        [](const HurstIndex& H, const std::vector<double>& times) {
            const auto C = build_covariance(H, times);
            const py::ssize_t n = static_cast<py::ssize_t>(C.size());
            py::array_t<double> out({n, n});
            std::copy(C.entries.begin(), C.entries.end(), out.mutable_data());
            return out;
        },
        py::arg("hurst"), py::arg("times"));
    m.def(
        "exact_fbm_sample",
        [](const HurstIndex& H, const std::vector<double>& times,
           std::uint64_t seed) {
            return to_array(exact_fbm_sample(H, times, seed));
        },
        py::arg("hurst"), py::arg("times"), py::arg("seed"));

    // convergence statistics
    m.def(
        "compare_covariance_values",
        [](py::array_t<double, py::array::c_style | py::array::forcecast>
               rows,
           const std::vector<double>& probes, const HurstIndex& H) {
            if (rows.ndim() != 2) {
                throw std::invalid_argument("rows must be a 2-d array");
            }
            std::vector<std::vector<double>> data(
                static_cast<size_t>(rows.shape(0)));
            const auto r = rows.unchecked<2>();
            for (py::ssize_t i = 0; i < rows.shape(0); ++i) {
                data[static_cast<size_t>(i)].assign(
                    &r(i, 0), &r(i, 0) + rows.shape(1));
            }
            const auto cmp = compare_covariance_values(data, probes, H);
            py::list entries;
            for (const auto& e : cmp.entries) {
                py::dict d;
                d["estimator"] = e.estimator;
                d["value"] = e.value;
                d["target"] = e.target;
                d["std_error"] = e.std_error;
                d["z_score"] = e.z_score;
                entries.append(d);
            }
            py::dict out;
            out["entries"] = entries;
            out["max_abs_gap"] = cmp.max_abs_gap;
            out["max_abs_z"] = cmp.max_abs_z;
            return out;
        },
        py::arg("rows"), py::arg("probe_times"), py::arg("hurst"));
    m.def(
        "scaling_study",
        [](const HurstIndex& H, const std::vector<long>& grid_sizes,
           std::size_t seeds, std::uint64_t base_seed) {
            const auto rep = scaling_study(H, grid_sizes, seeds, base_seed);
            py::dict d;
            d["grid_sizes"] = rep.grid_sizes;
            d["discrepancies"] = rep.discrepancies;
            d["slope"] = rep.fit.slope;
            d["expected_slope"] = rep.expected_slope;
            d["slope_tolerance"] = rep.slope_tolerance;
            d["pass"] = rep.pass;
            return d;
        },
        py::arg("hurst"), py::arg("grid_sizes"), py::arg("seeds") = 25,
        py::arg("base_seed") = 20070811);
}
