// Python bindings for the main operations: state construction and gates,
// entropies, trajectory/ensemble runs, and the fitting pipeline.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mipt/analysis.hpp"
#include "mipt/entanglement.hpp"
#include "mipt/evolution.hpp"
#include "mipt/measurement.hpp"
#include "mipt/state.hpp"
#include "mipt/trajectory.hpp"
#include "mipt/version.hpp"

namespace py = pybind11;
using namespace mipt;

namespace {

py::array_t<std::complex<double>> amplitudes_array(const StateVector& s) {
    py::array_t<std::complex<double>> out(s.amplitudes.size());
    std::copy(s.amplitudes.begin(), s.amplitudes.end(), out.mutable_data());
    return out;
}

StateVector state_from_array(int num_sites, py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast> amps) {
    std::vector<cplx> v(amps.data(), amps.data() + amps.size());
    return StateVector(num_sites, std::move(v));
}

Gate4 gate_from_array(py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast> m) {
    if (m.ndim() != 2 || m.shape(0) != 4 || m.shape(1) != 4) throw std::invalid_argument("Gate4 expects a 4x4 matrix");
    Gate4 g;
    std::copy(m.data(), m.data() + 16, g.m.begin());
    return g;
}

py::dict record_to_dict(const TrajectoryRecord& rec) {
    py::dict d;
    d["times"] = py::array_t<double>(rec.times.size(), rec.times.data());
    d["entropy"] = py::array_t<double>(rec.entropy.size(), rec.entropy.data());
    if (rec.tmi) d["tmi"] = py::array_t<double>(rec.tmi->size(), rec.tmi->data());
    d["realization_seed"] = rec.realization_seed;
    return d;
}

py::dict ensemble_to_dict(const EnsembleResult& r) {
    py::dict d;
    d["L"] = r.params.L;
    d["lambda"] = r.params.lambda;
    d["xi_r"] = r.params.xi_r;
    d["xi_s"] = r.params.xi_s;
    d["mean_S"] = r.mean_S;
    d["stderr_S"] = r.stderr_S;
    d["var_S"] = r.var_S;
    d["stderr_var"] = r.stderr_var;
    if (r.mean_tmi) d["mean_tmi"] = *r.mean_tmi;
    if (r.stderr_tmi) d["stderr_tmi"] = *r.stderr_tmi;
    d["n_effective"] = r.n_effective;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantum-trajectory simulator for a monitored noisy, disordered Heisenberg chain";
    m.attr("__version__") = kVersion;

    py::class_<StateVector>(m, "StateVector")
        .def(py::init(&state_from_array), py::arg("num_sites"), py::arg("amplitudes"))
        .def_readonly("num_sites", &StateVector::num_sites)
        .def_property_readonly("amplitudes", &amplitudes_array)
        .def("norm", &StateVector::norm)
        .def("__len__", [](const StateVector& s) { return s.dim(); });

    py::class_<Gate4>(m, "Gate4")
        .def(py::init(&gate_from_array), py::arg("matrix"))
        .def_static("identity", &Gate4::identity)
        .def("is_unitary", &Gate4::is_unitary, py::arg("tol") = 1e-10);

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform01", &RngStream::uniform01)
        .def("uniform", &RngStream::uniform)
        .def("normal", &RngStream::normal);

    py::class_<SimParams>(m, "SimParams")
        .def(py::init<>())
        .def_readwrite("L", &SimParams::L)
        .def_readwrite("xi_r", &SimParams::xi_r)
        .def_readwrite("xi_s", &SimParams::xi_s)
        .def_readwrite("lambda_", &SimParams::lambda)
        .def_readwrite("dt", &SimParams::dt)
        .def_readwrite("t_max", &SimParams::t_max)
        .def_readwrite("t_burn", &SimParams::t_burn)
        .def_readwrite("sample_interval", &SimParams::sample_interval)
        .def_readwrite("n_steady_samples", &SimParams::n_steady_samples)
        .def_readwrite("master_seed", &SimParams::master_seed)
        .def_readwrite("n_realizations", &SimParams::n_realizations)
        .def_readwrite("record_tmi", &SimParams::record_tmi);

    m.def("make_neel", &make_neel, py::arg("L"));
    m.def("apply_two_site_gate", &apply_two_site_gate, py::arg("state"), py::arg("gate"), py::arg("site_left"),
          py::arg("site_right"));
    m.def("sigma_z_expectation", &sigma_z_expectation, py::arg("state"), py::arg("site"));
    m.def("up_probability", &up_probability, py::arg("state"), py::arg("site"));

    m.def("build_bond_gate", &build_bond_gate, py::arg("h_left"), py::arg("h_right"), py::arg("tau"));
    m.def(
        "weak_measure_site",
        [](StateVector state, int site, double lambda0, RngStream& rng) {
            auto [out, outcome] = weak_measure_site(std::move(state), site, lambda0, rng);
            return py::make_tuple(std::move(out), outcome.x);
        },
        py::arg("state"), py::arg("site"), py::arg("lambda0"), py::arg("rng"));

    m.def("entanglement_entropy", &entanglement_entropy, py::arg("state"), py::arg("subset_mask"));
    m.def("page_entropy", &page_entropy, py::arg("L"));
    m.def("tripartite_mutual_information", &tripartite_mutual_information, py::arg("state"));
    m.def("half_chain_mask", &half_chain_mask, py::arg("L"));

    m.def(
        "run_trajectory",
        [](const SimParams& p, int realization_index) {
            TrajectoryRecord rec;
            {
                py::gil_scoped_release release;
                rec = run_trajectory(p, realization_index);
            }
            return record_to_dict(rec);
        },
        py::arg("params"), py::arg("realization_index"));
    m.def(
        "run_ensemble",
        [](const SimParams& p, int threads) {
            EnsembleResult r;
            {
                py::gil_scoped_release release;
                r = run_ensemble(p, threads);
            }
            return ensemble_to_dict(r);
        },
        py::arg("params"), py::arg("threads") = 0);
    m.def(
        "sweep",
        [](const std::vector<SimParams>& grid, int threads) {
            std::vector<EnsembleResult> rs;
            {
                py::gil_scoped_release release;
                rs = sweep(grid, threads);
            }
            py::list out;
            for (const EnsembleResult& r : rs) out.append(ensemble_to_dict(r));
            return out;
        },
        py::arg("grid"), py::arg("threads") = 0);

    m.def(
        "fit_exp_poly",
        [](const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& yerrs, int sign) {
            const FitResult fit = fit_exp_poly(xs, ys, yerrs, sign);
            py::dict d;
            d["coefficients"] = std::vector<double>(fit.coefficients.data(), fit.coefficients.data() + fit.coefficients.size());
            d["reduced_chi2"] = fit.reduced_chi2;
            d["degree"] = fit.degree;
            return d;
        },
        py::arg("xs"), py::arg("ys"), py::arg("yerrs"), py::arg("sign"));

    m.def(
        "extrapolate_linear",
        [](const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& yerrs) {
            return extrapolate_linear(xs, ys, yerrs);
        },
        py::arg("xs"), py::arg("ys"), py::arg("yerrs"));

    m.def(
        "data_collapse",
        [](const std::vector<std::tuple<int, double, double, double>>& rows, double lambda_c) {
            std::vector<CollapsePoint> pts;
            for (const auto& [L, lambda, value, error] : rows) pts.push_back({L, lambda, value, error});
            const CollapseResult res = data_collapse(pts, lambda_c);
            py::dict d;
            d["nu"] = res.nu;
            d["nu_lo"] = res.nu_lo;
            d["nu_hi"] = res.nu_hi;
            d["chi2_profile"] = res.chi2_profile;
            return d;
        },
        py::arg("points"), py::arg("lambda_c"));
}
