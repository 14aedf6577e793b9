#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blindmix/experiments.hpp"
#include "blindmix/manifold.hpp"
#include "blindmix/metrics.hpp"
#include "blindmix/signal_chain.hpp"
#include "blindmix/solvers.hpp"

namespace py = pybind11;
using namespace blindmix;

namespace {

GroundTruth truth_from_pairs(const std::vector<std::pair<CVec, CVec>>& pairs) {
  GroundTruth truth;
  truth.reserve(pairs.size());
  for (const auto& [x, h] : pairs) truth.push_back({x, h});
  return truth;
}

ProductPoint point_from_list(const std::vector<CVec>& factors) {
  ProductPoint V;
  V.factors = factors;
  return V;
}

py::dict trace_to_dicts(const IterateTrace& trace) {
  py::list iters, fs, grads, errs, times;
  for (const auto& row : trace) {
    iters.append(row.iter);
    fs.append(row.f);
    grads.append(row.grad_norm);
    errs.append(row.err);
    times.append(row.time_ms);
  }
  py::dict d;
  d["iter"] = iters;
  d["f"] = fs;
  d["grad_norm"] = grads;
  d["err"] = errs;
  d["time_ms"] = times;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Blind demixing of rank-one lifted signals: measurement operators, "
            "quotient-manifold solvers and metrics";

  py::class_<MeasurementEnsemble>(m, "MeasurementEnsemble")
      .def(py::init([](const std::string& kind, int L, int N, int K, int s, std::uint64_t seed) {
             return MeasurementEnsemble(encoder_kind_from_string(kind), L, N, K, s, seed);
           }),
           py::arg("kind"), py::arg("L"), py::arg("N"), py::arg("K"), py::arg("s"),
           py::arg("seed"))
      .def_property_readonly("L", &MeasurementEnsemble::L)
      .def_property_readonly("N", &MeasurementEnsemble::N)
      .def_property_readonly("K", &MeasurementEnsemble::K)
      .def_property_readonly("s", &MeasurementEnsemble::num_users)
      .def("forward_A", &MeasurementEnsemble::forward_A)
      .def("adjoint_A", &MeasurementEnsemble::adjoint_A)
      .def("forward_J", &MeasurementEnsemble::forward_J)
      .def("dump_json", &MeasurementEnsemble::dump_json)
      .def_static("load_json", &MeasurementEnsemble::load_json);

  m.def("synthesize_observation",
        [](const MeasurementEnsemble& ens, const std::vector<std::pair<CVec, CVec>>& truth,
           double sigma, std::uint64_t noise_seed) {
          return synthesize_observation(ens, truth_from_pairs(truth), sigma, noise_seed).y;
        },
        py::arg("ensemble"), py::arg("truth"), py::arg("sigma") = 0.0, py::arg("noise_seed") = 0);

  m.def("spectral_init", [](const MeasurementEnsemble& ens, const CVec& y) {
    return spectral_init(ens, y).factors;
  });

  m.def("rgd_run",
        [](const MeasurementEnsemble& ens, const CVec& y, const std::vector<CVec>& init,
           double alpha, int max_iters, double grad_tol) {
          CostContext context(ens, y);
          auto res = rgd_run(context, point_from_list(init), {alpha, max_iters, grad_tol});
          return py::make_tuple(res.point.factors, trace_to_dicts(res.trace), res.converged);
        },
        py::arg("ensemble"), py::arg("y"), py::arg("init"), py::arg("alpha") = 0.0,
        py::arg("max_iters") = 500, py::arg("grad_tol") = 1e-8);

  m.def("rtr_run",
        [](const MeasurementEnsemble& ens, const CVec& y, const std::vector<CVec>& init,
           int max_iters, double grad_tol) {
          CostContext context(ens, y);
          TrustRegionConfig cfg;
          cfg.max_iters = max_iters;
          cfg.grad_tol = grad_tol;
          auto res = rtr_run(context, point_from_list(init), cfg);
          return py::make_tuple(res.point.factors, trace_to_dicts(res.trace), res.converged);
        },
        py::arg("ensemble"), py::arg("y"), py::arg("init"), py::arg("max_iters") = 500,
        py::arg("grad_tol") = 1e-8);

  m.def("fiht_run",
        [](const MeasurementEnsemble& ens, const CVec& y, int max_iters, double tol) {
          auto res = fiht_run(ens, y, max_iters, tol);
          return py::make_tuple(res.estimates, trace_to_dicts(res.trace), res.converged);
        },
        py::arg("ensemble"), py::arg("y"), py::arg("max_iters") = 500, py::arg("tol") = 1e-8);

  m.def("lifted_matrix", [](const CVec& x, const CVec& h) { return lifted_matrix(x, h); },
        "Rank-one lifted matrix x h̄^H");

  m.def("relative_error",
        [](const std::vector<CMat>& estimates, const std::vector<CMat>& truth) {
          return relative_error(estimates, truth);
        });

  m.def("aligned_distance",
        [](const std::vector<CVec>& factors, const std::vector<std::pair<CVec, CVec>>& truth,
           int N, int K) {
          return aligned_distance(point_from_list(factors), truth_from_pairs(truth), N, K);
        });

  m.def("incoherence_mu", [](const CVec& h, int L) {
    return incoherence_mu(h, build_partial_dft(L, static_cast<int>(h.size())));
  });

  m.def("qam16_modulate", [](const std::vector<int>& symbols) {
    return qam16_modulate(QamMessage{symbols});
  });
  m.def("qam16_demodulate", [](const CVec& x_hat) { return qam16_demodulate(x_hat).symbols; });
  m.def("ofdm_modulate", &ofdm_modulate);
  m.def("cyclic_convolve", &cyclic_convolve);

  m.def("make_ground_truth",
        [](int N, int K, int s, const std::string& signal, std::uint64_t seed, std::uint64_t trial) {
          const GroundTruth truth =
              make_ground_truth(N, K, s, signal_kind_from_string(signal), seed, trial);
          std::vector<std::pair<CVec, CVec>> pairs;
          for (const auto& p : truth) pairs.emplace_back(p.x, p.h);
          return pairs;
        },
        py::arg("N"), py::arg("K"), py::arg("s"), py::arg("signal") = "gaussian",
        py::arg("seed") = 1, py::arg("trial") = 0);
}
