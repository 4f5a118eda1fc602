#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "pfm/attack.hpp"
#include "pfm/errors.hpp"
#include "pfm/mcoracle.hpp"
#include "pfm/numkernel.hpp"
#include "pfm/optics.hpp"
#include "pfm/statespace.hpp"
#include "pfm/sweep.hpp"

namespace py = pybind11;
using namespace pfm;

namespace {

using CArray = py::array_t<complex, py::array::c_style | py::array::forcecast>;

py::array_t<complex> to_numpy(const ComplexMatrix& m) {
  py::array_t<complex> out({m.rows(), m.cols()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
  return out;
}

py::array_t<complex> to_numpy(const ComplexVector& v) {
  py::array_t<complex> out(v.dim());
  auto view = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < v.dim(); ++i) view(i) = v[i];
  return out;
}

ComplexMatrix matrix_from(const CArray& a) {
  if (a.ndim() != 2) throw DimensionMismatch("expected a 2-D array, got " + std::to_string(a.ndim()) + "-D");
  auto view = a.unchecked<2>();
  ComplexMatrix m(a.shape(0), a.shape(1));
  for (py::ssize_t r = 0; r < a.shape(0); ++r)
    for (py::ssize_t c = 0; c < a.shape(1); ++c) m(r, c) = view(r, c);
  return m;
}

template <std::size_t N, class T>
py::list to_list(const std::array<T, N>& items) {
  py::list out;
  for (const auto& item : items) out.append(to_numpy(item));
  return out;
}

AttackKind parse_kind(const std::string& s) {
  if (s == "pfm") return AttackKind::pfm;
  if (s == "remap" || s == "phase_remapping") return AttackKind::phase_remapping;
  throw DomainError("unknown attack kind '" + s + "' (expected 'pfm' or 'remap')");
}

py::dict report_dict(const AttackReport& r) {
  py::dict d;
  d["epsilon"] = r.epsilon;
  d["delta"] = r.delta;
  d["e_B"] = r.e_B;
  d["p_succ"] = r.p_succ;
  d["lambda_0"] = r.lambda_0;
  d["lambda_3"] = r.lambda_3;
  d["x"] = r.x;
  d["max_fiber_km"] = r.max_fiber_km;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Passive Faraday-mirror attack simulator for plug-and-play QKD";
  m.attr("__version__") = version();
  m.attr("FIBER_LOSS_DB_PER_KM") = kFiberLossDbPerKm;
  m.attr("MAX_MIRROR_DEVIATION") = kMaxMirrorDeviation;
  m.attr("MIN_ORACLE_TRIALS") = kMinOracleTrials;

  // Registered base-first: pybind11 tries the most recent translator first.
  auto& base = py::register_exception<Error>(m, "PfmError", PyExc_RuntimeError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<NonHermitian>(m, "NonHermitian", base.ptr());
  py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());
  py::register_exception<NegativeEigenvalue>(m, "NegativeEigenvalue", base.ptr());
  py::register_exception<NegativeProbability>(m, "NegativeProbability", base.ptr());
  // Domain errors surface as ValueError rather than PfmError.
  auto& domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedProbe>(m, "UnsupportedProbe", domain.ptr());
  py::register_exception<SingularEpsilon>(m, "SingularEpsilon", domain.ptr());
  py::register_exception<DegenerateSpan>(m, "DegenerateSpan", domain.ptr());

  // numkernel
  m.def(
      "hermitian_eig",
      [](const CArray& a) {
        const EigenDecomposition d = hermitian_eig(matrix_from(a));
        const std::size_t n = d.eigenvalues.size();
        py::array_t<complex> vecs({n, n});
        auto view = vecs.mutable_unchecked<2>();
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t i = 0; i < n; ++i) view(i, j) = d.eigenvectors[j][i];
        return py::make_tuple(d.eigenvalues, vecs);
      },
      py::arg("a"), "Eigenvalues ascending and eigenvectors as columns.");
  m.def("pinv_sqrt", [](const CArray& a, double tol) { return to_numpy(pinv_sqrt(matrix_from(a), tol)); },
        py::arg("a"), py::arg("rank_tol") = kDefaultRankTol);
  m.def("numerical_rank", [](const CArray& a, double tol) { return numerical_rank(matrix_from(a), tol); },
        py::arg("a"), py::arg("rank_tol") = kDefaultRankTol);

  // optics
  m.def("fm_matrix", [](double eps) { return to_numpy(fm_matrix(FaradayMirror(eps))); }, py::arg("epsilon"));
  m.def("channel_matrix",
        [](double theta_prime, double phi_o, double phi_e, bool backward) {
          return to_numpy(channel_matrix({theta_prime, phi_o, phi_e}, backward ? Direction::backward : Direction::forward));
        },
        py::arg("theta_prime"), py::arg("phi_o"), py::arg("phi_e"), py::arg("backward") = false);
  m.def("verify_compensation",
        [](double theta_prime, double phi_o, double phi_e) { return verify_compensation({theta_prime, phi_o, phi_e}); },
        py::arg("theta_prime"), py::arg("phi_o"), py::arg("phi_e"));
  m.def("compensation_residual",
        [](double theta_prime, double phi_o, double phi_e, double eps) {
          return compensation_residual({theta_prime, phi_o, phi_e}, fm_matrix(FaradayMirror(eps)));
        },
        py::arg("theta_prime"), py::arg("phi_o"), py::arg("phi_e"), py::arg("epsilon"));
  m.def("round_trip",
        [](double eps, int k, double delta) {
          const RoundTripOutput out = round_trip(FaradayMirror(eps), ProbeState{}, k, delta);
          return py::make_tuple(to_numpy(out.out_c), to_numpy(out.out_d));
        },
        py::arg("epsilon"), py::arg("k"), py::arg("delta"));

  // statespace
  py::class_<AttackEnsemble>(m, "AttackEnsemble")
      .def_readonly("epsilon", &AttackEnsemble::epsilon)
      .def_readonly("delta", &AttackEnsemble::delta)
      .def_property_readonly("dim", &AttackEnsemble::dim)
      .def_property_readonly("states", [](const AttackEnsemble& e) { return to_list(e.states); })
      .def_property_readonly("rho_k", [](const AttackEnsemble& e) { return to_list(e.rho_k); })
      .def_property_readonly("rho", [](const AttackEnsemble& e) { return to_numpy(e.rho); })
      .def_property_readonly("L", [](const AttackEnsemble& e) { return to_list(e.L); });
  m.def("build_ensemble", &build_ensemble, py::arg("epsilon"), py::arg("delta"));
  m.def("build_bb84_ensemble", &build_bb84_ensemble, py::arg("delta"));
  m.def("span_dimension", &span_dimension, py::arg("ensemble"), py::arg("tol") = kDefaultRankTol);

  // attack
  py::class_<PovmStrategy>(m, "PovmStrategy")
      .def_property_readonly("kind", [](const PovmStrategy& s) { return std::string(to_string(s.kind)); })
      .def_readonly("x", &PovmStrategy::x)
      .def_readonly("lambda_0", &PovmStrategy::lambda_0)
      .def_readonly("lambda_3", &PovmStrategy::lambda_3)
      .def_property_readonly("dim", &PovmStrategy::dim)
      .def_property_readonly("conclusive", [](const PovmStrategy& s) { return to_list(s.conclusive); })
      .def_property_readonly("vacuum", [](const PovmStrategy& s) { return to_numpy(s.vacuum); });
  m.def("build_suboptimal_povm", &build_suboptimal_povm, py::arg("ensemble"), py::arg("rank_tol") = kDefaultRankTol);
  m.def("build_phase_remapping_povm", &build_phase_remapping_povm, py::arg("delta"),
        py::arg("rank_tol") = kDefaultRankTol);
  m.def("build_intercept_resend_povm", &build_intercept_resend_povm);
  m.def("check_povm", [](const PovmStrategy& s) {
    const PovmCheck c = check_povm(s);
    py::dict d;
    d["min_eigenvalue"] = c.min_eigenvalue;
    d["vacuum_min_eigenvalue"] = c.vacuum_min_eigenvalue;
    d["completeness_residual"] = c.completeness_residual;
    return d;
  });
  m.def("evaluate", [](const AttackEnsemble& e, const PovmStrategy& s) { return report_dict(evaluate(e, s)); },
        py::arg("ensemble"), py::arg("strategy"));
  m.def("analyze",
        [](const std::string& kind, double eps, double delta) {
          return report_dict(analyze(parse_kind(kind), eps, delta).report);
        },
        py::arg("kind"), py::arg("epsilon"), py::arg("delta"));
  m.def("general_intercept_resend_qber", &general_intercept_resend_qber);
  m.def("fiber_length_for_transmittance", [](double t) { return fiber_length_for_transmittance(t); },
        py::arg("transmittance"));
  m.def("transmittance_for_length", [](double km) { return transmittance_for_length(km); }, py::arg("km"));

  // mcoracle
  m.def(
      "run_oracle",
      [](const AttackEnsemble& e, const PovmStrategy& s, std::uint64_t n, std::uint64_t seed) {
        OracleEstimate est;
        {
          py::gil_scoped_release release;
          est = run_oracle(e, s, n, seed);
        }
        py::dict d;
        d["n_trials"] = est.n_trials;
        d["conclusive"] = est.conclusive;
        d["sifted"] = est.sifted;
        d["errors"] = est.errors;
        d["e_B_hat"] = est.e_B_hat;
        d["p_succ_hat"] = est.p_succ_hat;
        d["stderr_e"] = est.stderr_e;
        d["stderr_p"] = est.stderr_p;
        d["rng_seed"] = est.rng_seed;
        return d;
      },
      py::arg("ensemble"), py::arg("strategy"), py::arg("n"), py::arg("seed") = kDefaultSeed);
}
