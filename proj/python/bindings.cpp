#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "erd/experiment.hpp"
#include "erd/gates.hpp"
#include "erd/noise.hpp"
#include "erd/offres.hpp"

namespace py = pybind11;
using namespace erd;

PYBIND11_MODULE(_core, m) {
  m.doc() = "encoded recoupling/decoupling simulator core";

  // --- operators -----------------------------------------------------------
  py::class_<PauliString>(m, "PauliString")
      .def(py::init<std::string_view, int>(), py::arg("factors"),
           py::arg("phase_quarter") = 0)
      .def("dense", &PauliString::dense)
      .def("adjoint", &PauliString::adjoint)
      .def("commutes_with", &PauliString::commutes_with)
      .def(py::self * py::self)
      .def("__str__", &PauliString::to_string)
      .def("__repr__", &PauliString::to_string);

  py::class_<OperatorSum>(m, "OperatorSum")
      .def(py::init<int, long>(), py::arg("num_qubits"), py::arg("bath_dim") = 1)
      .def("add",
           [](OperatorSum& s, cplx coeff, const std::string& factors) {
             s.add(coeff, PauliString(factors));
           },
           py::arg("coeff"), py::arg("factors"))
      .def("add",
           [](OperatorSum& s, cplx coeff, const std::string& factors,
              const Matrix& bath) { s.add(coeff, PauliString(factors), bath); },
           py::arg("coeff"), py::arg("factors"), py::arg("bath"))
      .def("add_bath_only", &OperatorSum::add_bath_only)
      .def("dense", &OperatorSum::dense)
      .def("system_dense", &OperatorSum::system_dense)
      .def("conjugated_by", &OperatorSum::conjugated_by)
      .def("is_hermitian", &OperatorSum::is_hermitian,
           py::arg("tol") = kDefaultTol)
      .def("coefficient_norm", &OperatorSum::coefficient_norm)
      .def_property_readonly("num_qubits", &OperatorSum::num_qubits)
      .def_property_readonly("bath_dim", &OperatorSum::bath_dim)
      .def_property_readonly("total_dim", &OperatorSum::total_dim)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def("__mul__",
           [](const OperatorSum& a, const OperatorSum& b) { return a * b; })
      .def("__mul__", [](const OperatorSum& a, cplx s) { return a * s; })
      .def("__rmul__", [](const OperatorSum& a, cplx s) { return a * s; });

  // --- codes and error classes ---------------------------------------------
  py::class_<DfsCode>(m, "DfsCode")
      .def_readonly("num_qubits", &DfsCode::num_qubits)
      .def_readonly("lambda_", &DfsCode::lambda)
      .def_readonly("basis", &DfsCode::basis)
      .def_property_readonly("dim", &DfsCode::dim)
      .def_property_readonly("space_dim", &DfsCode::space_dim)
      .def("basis_state", &DfsCode::basis_state)
      .def("basis_matrix", &DfsCode::basis_matrix)
      .def("projector", &DfsCode::projector);
  m.def("make_dfs", &make_dfs, py::arg("num_qubits"), py::arg("lambda_"));

  py::class_<LogicalOps>(m, "LogicalOps")
      .def_readonly("xbar", &LogicalOps::xbar)
      .def_readonly("ybar", &LogicalOps::ybar)
      .def_readonly("zbar", &LogicalOps::zbar)
      .def_readonly("xtilde", &LogicalOps::xtilde)
      .def_readonly("ytilde", &LogicalOps::ytilde);
  m.def("logical_ops", &logical_ops, py::arg("num_qubits"), py::arg("i"),
        py::arg("j"));

  m.def("classify",
        [](const Matrix& op) {
          return std::string(error_class_name(classify(op)));
        },
        "error class of a two-qubit operator: Dfs, Leak, Logi, or Mixed");
  m.def("class_norms", [](const OperatorSum& op) {
    ClassNorms n = class_norms(op);
    return py::make_tuple(n.dfs, n.leak, n.logi);
  });
  m.def("norm_along", &norm_along);
  m.def("dfs_fidelity", &dfs_fidelity);

  // --- gates -----------------------------------------------------------------
  m.def("u_ij",
        [](double theta, double phi_i, double phi_j) {
          return u_ij({theta, phi_i, phi_j});
        },
        py::arg("theta"), py::arg("phi_i"), py::arg("phi_j"));
  m.def("ubar_gate", &ubar_gate, py::arg("num_qubits"), py::arg("i"),
        py::arg("j"), py::arg("theta"), py::arg("dphi"));
  m.def("zbar_rotation_matrix", &zbar_rotation_matrix, py::arg("theta"),
        py::arg("phi") = 0.0);
  m.def("u4", [](double p1, double p2, double p3, double p4) {
    return u4({p1, p2, p3, p4});
  });
  m.def("conjugate_generator",
        [](const Matrix& a, const Matrix& b, double angle) {
          return conjugate_generator(a, b, angle);
        },
        py::arg("a"), py::arg("b"), py::arg("angle"));

  // --- noise -----------------------------------------------------------------
  m.def("gaussian_dephase", &gaussian_dephase, py::arg("a"), py::arg("b"),
        py::arg("alpha"));
  m.def("gaussian_dephase_quadrature", &gaussian_dephase_quadrature,
        py::arg("a"), py::arg("b"), py::arg("alpha"),
        py::arg("intervals") = 4096);
  m.def("random_bath_ops",
        [](int count, long bath_dim, double norm_bound, std::uint64_t seed,
           bool diagonal) {
          std::vector<std::string> names;
          for (int k = 0; k < count; ++k) names.push_back("B" + std::to_string(k));
          BathSpec spec{bath_dim, norm_bound, seed, diagonal, false};
          return random_bath(names, spec).ops;
        },
        py::arg("count"), py::arg("bath_dim") = 2, py::arg("norm_bound") = 1.0,
        py::arg("seed") = 0, py::arg("diagonal") = false);
  m.def("collective_dephasing", &collective_dephasing, py::arg("num_qubits"),
        py::arg("b_op"));

  // --- sequences ---------------------------------------------------------------
  py::class_<PulseSequence>(m, "PulseSequence")
      .def(py::init<>())
      .def("append_free", &PulseSequence::append_free, py::arg("tau"),
           py::arg("label") = "free")
      .def("append_free_driven", &PulseSequence::append_free_driven,
           py::arg("tau"), py::arg("drive"), py::arg("label") = "drive")
      .def("append_pulse", &PulseSequence::append_pulse, py::arg("unitary"),
           py::arg("label") = "pulse")
      .def("append", &PulseSequence::append)
      .def_property_readonly("pulse_count", &PulseSequence::pulse_count)
      .def_property_readonly("control_count", &PulseSequence::control_count)
      .def_property_readonly("total_free_time", &PulseSequence::total_free_time)
      .def("schedule", &PulseSequence::schedule);

  m.def("seq_parity_kick", &seq_parity_kick, py::arg("tau"));
  m.def("seq_leak4", &seq_leak4, py::arg("tau"));
  m.def("seq_full10", &seq_full10, py::arg("tau"));
  m.def("seq_block4", &seq_block4, py::arg("tau"));

  py::enum_<LogicalAxis>(m, "LogicalAxis")
      .value("XBAR", LogicalAxis::XBar)
      .value("YBAR", LogicalAxis::YBar);
  m.def("interleave_weak_gate",
        py::overload_cast<LogicalAxis, double, double, LogicalAxis>(
            &interleave_weak_gate),
        py::arg("axis"), py::arg("omega"), py::arg("t"), py::arg("family"));
  m.def("interleave_weak_gate",
        [](LogicalAxis axis, double omega, double t) {
          return interleave_weak_gate(axis, omega, t);
        },
        py::arg("axis"), py::arg("omega"), py::arg("t"));
  m.def("euler_rotation", &euler_rotation, py::arg("alpha"), py::arg("beta"),
        py::arg("gamma"), py::arg("cycle_time"));

  m.def("run_sequence", &run_sequence, py::arg("sequence"), py::arg("h"));
  m.def("first_order_residual", &first_order_residual, py::arg("sequence"),
        py::arg("h"));
  m.def("sequence_first_order_hamiltonian", &sequence_first_order_hamiltonian,
        py::arg("sequence"), py::arg("h"));
  m.def("first_order_average", &first_order_average, py::arg("frames"),
        py::arg("h"));
  m.def("toggled_frame_list", [](const PulseSequence& seq) {
    return toggled_frames(seq).frames;
  });

  // --- off-resonant leakage removal -------------------------------------------
  py::class_<LevelSystem>(m, "LevelSystem")
      .def(py::init([](const Eigen::VectorXd& energies, const Matrix& h) {
             return LevelSystem::make(energies, h);
           }),
           py::arg("energies"), py::arg("h_interaction"))
      .def_readonly("energies", &LevelSystem::energies)
      .def_readonly("h_interaction", &LevelSystem::h_interaction)
      .def("h0", &LevelSystem::h0)
      .def("u0", &LevelSystem::u0, py::arg("t"));

  py::class_<EliminationResult>(m, "EliminationResult")
      .def_readonly("h_final", &EliminationResult::h_final)
      .def_readonly("leakage_norm", &EliminationResult::leakage_norm)
      .def_property_readonly("steps", [](const EliminationResult& r) {
        py::list out;
        for (const auto& s : r.steps) out.append(py::make_tuple(s.i, s.j, s.duration));
        return out;
      });
  m.def("eliminate_all_leakage", &eliminate_all_leakage, py::arg("system"),
        py::arg("threshold") = 1e-12);
  m.def("leakage_block_norm", &leakage_block_norm);

  // --- numerics ----------------------------------------------------------------
  m.def("expm_hermitian", &expm_hermitian, py::arg("h"), py::arg("t") = 1.0);
  m.def("kron", &kron);
  m.def("operator_distance", &operator_distance);
  m.def("phase_free_distance", &phase_free_distance);
  m.def("spectral_norm", &spectral_norm);
  m.def("partial_trace_bath", &partial_trace_bath, py::arg("rho"),
        py::arg("sys_dim"), py::arg("bath_dim"));
  m.def("dim_cap", &dim_cap);
}
