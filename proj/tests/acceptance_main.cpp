// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Every tolerance is pinned here, next to the check that uses it.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "erd/experiment.hpp"
#include "erd/gates.hpp"
#include "erd/noise.hpp"
#include "erd/offres.hpp"
#include "erd/rng.hpp"

using namespace erd;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

OperatorSum random_system_bath(std::uint64_t seed, long bath_dim) {
  const std::vector<std::string> strings = {"XI", "IX", "YI", "IY", "XZ", "ZX",
                                            "YZ", "ZY", "ZI", "IZ", "ZZ", "XX",
                                            "YY", "XY", "YX"};
  BathSpec spec{bath_dim, 1.0, seed, false, false};
  BathSet bath = random_bath(strings, spec);
  OperatorSum h(2, bath_dim);
  for (size_t k = 0; k < strings.size(); ++k) {
    h.add(1.0 / strings.size(), PauliString(strings[k]), bath.ops[k]);
  }
  return h;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Gate {
  int failures = 0;
  void run(int num, const std::string& name,
           const std::function<std::pair<bool, std::string>()>& fn) {
    bool ok = false;
    std::string detail;
    try {
      auto [o, d] = fn();
      ok = o;
      detail = d;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", num,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

// 1. Closed-form Gaussian dephasing against the quadrature oracle.
std::pair<bool, std::string> crit_dephase() {
  const cplx a{0.6, 0.2};
  const cplx b{std::sqrt(0.6), 0.0};
  double worst_quad = 0.0, worst_form = 0.0;
  for (double alpha : {0.1, std::numbers::ln2, 1.0, 3.0}) {
    Matrix closed = gaussian_dephase(a, b, alpha);
    Matrix quad = gaussian_dephase_quadrature(a, b, alpha);
    worst_quad = std::max(worst_quad, (closed - quad).cwiseAbs().maxCoeff());
    double want = std::abs(a * std::conj(b)) * std::exp(-alpha);
    worst_form = std::max(worst_form, std::abs(std::abs(closed(0, 1)) - want));
  }
  bool ok = worst_quad <= 1e-8 && worst_form <= 1e-12;
  return {ok, "max quadrature gap " + sci(worst_quad) + " <= 1e-8, closed form " +
                  sci(worst_form) + " <= 1e-12"};
}

// 2. Code-state storage under collective dephasing with a random bath.
std::pair<bool, std::string> crit_storage() {
  const std::uint64_t seed = 2026;
  const long bath_dim = 2;
  double worst_infid = 0.0;
  for (auto [nq, lambda] : std::vector<std::pair<int, int>>{{2, 0}, {3, 1}, {3, -1}}) {
    DfsCode code = make_dfs(nq, lambda);
    BathSpec spec{bath_dim, 1.0, mix_seed(seed, static_cast<std::uint64_t>(nq * 8 + lambda + 4)),
                  false, false};
    BathSet bath = random_bath({"B", "HB"}, spec);
    OperatorSum h = collective_dephasing(nq, bath.ops[0]);
    h.add_bath_only(bath.ops[1]);
    Rng rng(mix_seed(spec.seed, 1));
    Vector amps(code.dim());
    for (long k = 0; k < code.dim(); ++k) amps(k) = rng.complex_normal();
    amps.normalize();
    Vector psi = Vector::Zero(code.space_dim());
    for (long k = 0; k < code.dim(); ++k) psi += amps(k) * code.basis_state(k);
    Matrix rho0 = kron(density_from_state(psi), maximally_mixed(bath_dim));
    HermitianPropagator prop(h.dense());
    for (double tau : {0.1, 1.0, 10.0}) {
      Matrix u = prop.at(tau);
      Matrix rho_s =
          partial_trace_bath(u * rho0 * u.adjoint(), code.space_dim(), bath_dim);
      worst_infid = std::max(worst_infid, std::abs(1.0 - state_fidelity(psi, rho_s)));
    }
  }
  // Control: a superposition straddling two imbalance sectors decoheres.
  BathSpec spec{bath_dim, 1.0, seed, false, false};
  BathSet bath = random_bath({"B", "HB"}, spec);
  OperatorSum h = collective_dephasing(2, bath.ops[0]);
  h.add_bath_only(bath.ops[1]);
  HermitianPropagator prop(h.dense());
  Vector cross = (basis_state(4, 0) + basis_state(4, 1)) / std::sqrt(2.0);
  Matrix rho0 = kron(density_from_state(cross), maximally_mixed(bath_dim));
  double max_drop = 0.0;
  for (double tau : {0.1, 1.0, 10.0}) {
    Matrix u = prop.at(tau);
    Matrix rho_s = partial_trace_bath(u * rho0 * u.adjoint(), 4, bath_dim);
    max_drop = std::max(max_drop, 1.0 - purity(rho_s));
  }
  bool ok = worst_infid <= 1e-10 && max_drop > 1e-3;
  return {ok, "max infidelity " + sci(worst_infid) + " <= 1e-10, cross-sector purity drop " +
                  sci(max_drop) + " > 1e-3"};
}

// 3. Encoded su(2) relations and the pulse identities built from them.
std::pair<bool, std::string> crit_algebra() {
  LogicalOps ops = logical_ops(2, 1, 2);
  Matrix xb = ops.xbar.system_dense(), yb = ops.ybar.system_dense();
  Matrix zb = ops.zbar.system_dense();
  double comm = operator_distance(commutator(xb, yb), 2.0 * kI * zb);
  Matrix b2 = make_dfs(2, 0).basis_matrix();
  double annih = std::max(spectral_norm(ops.xtilde.system_dense() * b2),
                          spectral_norm(ops.ytilde.system_dense() * b2));
  Matrix zz = PauliString("ZZ").dense();
  double pulse = std::max(operator_distance(expm_hermitian(xb, -kPi), zz),
                          operator_distance(expm_hermitian(xb, kPi), zz));
  Rng rng(617);
  double rot = 0.0;
  for (int k = 0; k < 10; ++k) {
    double theta = rng.uniform(-kPi, kPi);
    rot = std::max(rot, operator_distance(zbar_rotation_matrix(theta),
                                          expm_hermitian(zb, -theta)));
  }
  bool ok = comm <= 1e-12 && annih <= 1e-12 && pulse <= 1e-12 && rot <= 1e-10;
  return {ok, "commutator " + sci(comm) + ", code annihilation " + sci(annih) +
                  ", pi pulse vs ZZ " + sci(pulse) + " <= 1e-12; 3-gate rotation " +
                  sci(rot) + " <= 1e-10"};
}

// 4. Code blocks depend only on the phase difference; the four-body gate
// restricts to the product of encoded rotations.
std::pair<bool, std::string> crit_phase_blocks() {
  Matrix b2 = make_dfs(2, 0).basis_matrix();
  double worst = 0.0;
  for (double dphi : {0.0, 1.1}) {
    Matrix ref = restrict_to(u_ij({0.7, dphi, 0.0}), b2);
    for (int k = 0; k < 10; ++k) {
      double sum = -3.0 + 0.7 * k;
      PhaseGateSpec s{0.7, 0.5 * (sum + dphi), 0.5 * (sum - dphi)};
      worst = std::max(worst, operator_distance(restrict_to(u_ij(s), b2), ref));
    }
  }
  const std::array<double, 4> phis = {0.3, -1.2, 0.45, 2.0};
  Matrix u = u4(phis);
  Matrix basis = kron(b2, b2);
  double leak = subspace_leakage(u, basis);
  LogicalOps p12 = logical_ops(4, 1, 2);
  LogicalOps p34 = logical_ops(4, 3, 4);
  Matrix xx = ((p12.xbar * std::cos(phis[0] - phis[1]) +
                p12.ybar * std::sin(phis[0] - phis[1])) *
               (p34.xbar * std::cos(phis[2] - phis[3]) +
                p34.ybar * std::sin(phis[2] - phis[3])))
                  .system_dense();
  double four = operator_distance(restrict_to(u, basis),
                                  restrict_to(expm_hermitian(xx, kPi / 4), basis));
  bool ok = worst <= 1e-12 && leak <= 1e-12 && four <= 1e-10;
  return {ok, "block drift over phase-sum sweep " + sci(worst) + " <= 1e-12, four-body restriction " +
                  sci(four) + " <= 1e-10"};
}

// 5. The two-pulse echo reproduces pure collective dephasing exactly.
std::pair<bool, std::string> crit_echo() {
  BathSpec spec{3, 1.0, 424242, false, false};
  BathSet bath = random_bath({"B1", "B2"}, spec);
  double nc = spectral_norm(bath.ops[0] * bath.ops[1] - bath.ops[1] * bath.ops[0]);
  Deph2Split split = deph2_split(bath);
  OperatorSum h = split.total();
  HermitianPropagator coll(split.collective.dense());
  double worst = 0.0;
  for (double tau : {0.1, 1.0, 10.0}) {
    Matrix run = run_sequence(seq_parity_kick(tau), h);
    worst = std::max(worst, operator_distance(run, coll.at(2.0 * tau)));
  }
  bool ok = worst <= 1e-10 && nc > 1e-3;
  return {ok, "max distance " + sci(worst) + " <= 1e-10 with non-commuting baths (||[B1,B2]|| = " +
                  sci(nc) + ")"};
}

// 6. First-order frame averages kill exactly the advertised classes.
std::pair<bool, std::string> crit_first_order() {
  OperatorSum h = random_system_bath(9090, 2);
  LogicalOps ops = logical_ops(2, 1, 2);

  PulseSequence s4 = seq_leak4(0.3);
  OperatorSum avg4 = first_order_average(toggled_frames(s4).frames, h);
  ClassNorms n4 = class_norms(avg4);
  double ybar4 = norm_along(avg4, ops.ybar.system_dense());
  double zbar4 = norm_along(avg4, ops.zbar.system_dense());
  double xbar4 = norm_along(avg4, ops.xbar.system_dense());

  PulseSequence s10 = seq_full10(0.3);
  OperatorSum avg10 = first_order_average(toggled_frames(s10).frames, h);
  ClassNorms n10 = class_norms(avg10);

  double killed = std::max({n4.leak, ybar4, zbar4, n10.leak, n10.logi});
  bool ok = killed <= 1e-12 && xbar4 > 1e-6 && n10.dfs > 1e-6 &&
            s4.pulse_count() == 4 && s10.pulse_count() == 10;
  return {ok, "max killed-class norm " + sci(killed) + " <= 1e-12, surviving terms " +
                  sci(std::min(xbar4, n10.dfs)) + " > 1e-6, pulse counts " +
                  std::to_string(s4.pulse_count()) + "/" + std::to_string(s10.pulse_count())};
}

// 7. Residuals against the first-order prediction scale as tau^2.
std::pair<bool, std::string> crit_scaling() {
  OperatorSum h2 = random_system_bath(5151, 2);
  BathSpec spec4{2, 1.0, 6161, false, false};
  BathSet bath4 = random_bath({"B1", "B2", "B3", "B4"}, spec4);
  OperatorSum h4 = dephasing_coupling(4, bath4);

  struct Scan {
    const char* name;
    std::function<double(double)> residual;
    double lo, hi;
  };
  std::vector<Scan> scans;
  scans.push_back({"block4",
                   [&](double t) { return first_order_residual(seq_block4(t), h4); },
                   2e-3, 2e-2});
  scans.push_back({"leak4",
                   [&](double t) { return first_order_residual(seq_leak4(t), h2); },
                   1e-3, 1e-2});
  scans.push_back({"full10",
                   [&](double t) { return first_order_residual(seq_full10(t), h2); },
                   1e-3, 1e-2});
  scans.push_back({"weak-x",
                   [&](double t) {
                     return first_order_residual(
                         interleave_weak_gate(LogicalAxis::XBar, 1.2, t), h2);
                   },
                   1e-3, 1e-2});
  scans.push_back({"weak-y",
                   [&](double t) {
                     return first_order_residual(
                         interleave_weak_gate(LogicalAxis::YBar, 1.2, t), h2);
                   },
                   1e-3, 1e-2});
  bool ok = true;
  std::string detail = "slopes";
  for (auto& scan : scans) {
    ScalingFit fit = scaling_fit(scan.residual, scan.lo, scan.hi, 8);
    ok = ok && std::abs(fit.slope - 2.0) <= 0.1;
    char buf[64];
    std::snprintf(buf, sizeof(buf), " %s=%.3f", scan.name, fit.slope);
    detail += buf;
  }
  return {ok, detail + ", all within 2.0 +/- 0.1"};
}

// 8. The mismatched pulse family averages the drive itself to zero.
std::pair<bool, std::string> crit_mismatch() {
  OperatorSum zero(2);
  LogicalOps ops = logical_ops(2, 1, 2);
  double omega = 0.9, t = 0.37;
  // First-order gate amplitude: the drive-axis component of the average
  // Hamiltonian times the total free time.
  auto first_order_theta = [&](LogicalAxis axis, LogicalAxis family) {
    PulseSequence seq = interleave_weak_gate(axis, omega, t, family);
    OperatorSum heff = sequence_first_order_hamiltonian(seq, zero);
    const OperatorSum& along = axis == LogicalAxis::XBar ? ops.xbar : ops.ybar;
    return norm_along(heff, along.system_dense()) * t;
  };
  double mismatched = std::max(
      first_order_theta(LogicalAxis::YBar, LogicalAxis::XBar),
      first_order_theta(LogicalAxis::XBar, LogicalAxis::YBar));
  double matched_err =
      std::abs(first_order_theta(LogicalAxis::YBar, LogicalAxis::YBar) -
               omega * t);
  // Guard on the actual propagator too: the extracted angle sits at the
  // acos conditioning floor (~sqrt(eps)) when the gate is fully cancelled.
  Matrix b2 = make_dfs(2, 0).basis_matrix();
  auto run_theta = [&](const PulseSequence& seq) {
    Matrix ucode = restrict_to(run_sequence(seq, zero), b2);
    double c = std::clamp(0.5 * ucode.trace().real(), -1.0, 1.0);
    return std::acos(c);
  };
  double run_mismatch = std::max(
      run_theta(interleave_weak_gate(LogicalAxis::YBar, omega, t, LogicalAxis::XBar)),
      run_theta(interleave_weak_gate(LogicalAxis::XBar, omega, t, LogicalAxis::YBar)));
  bool ok = mismatched <= 1e-10 && matched_err <= 1e-10 && run_mismatch <= 1e-6;
  return {ok, "first-order mismatched |theta_eff| " + sci(mismatched) +
                  " <= 1e-10 (matched control err " + sci(matched_err) +
                  ", full-run mismatch " + sci(run_mismatch) + " <= 1e-6)"};
}

// 9. Diagonal bare-evolution pulses clear the off-resonant leakage block.
std::pair<bool, std::string> crit_offres() {
  Eigen::VectorXd e(4);
  e << 0.0, 1.0, 2.5, 4.1;
  Rng rng(71);
  Matrix hi(4, 4);
  for (long i = 0; i < 4; ++i) {
    hi(i, i) = rng.normal();
    for (long j = i + 1; j < 4; ++j) {
      cplx z = rng.complex_normal();
      hi(i, j) = z;
      hi(j, i) = std::conj(z);
    }
  }
  LevelSystem sys = LevelSystem::make(e, hi);
  EliminationResult res = eliminate_all_leakage(sys);
  double u0_offdiag = 0.0;
  for (const auto& step : res.steps) {
    Matrix u0 = sys.u0(step.duration);
    for (long i = 0; i < 4; ++i)
      for (long j = 0; j < 4; ++j)
        if (i != j) u0_offdiag = std::max(u0_offdiag, std::abs(u0(i, j)));
  }

  Eigen::VectorXd ed(4);
  ed << 0.0, 1.0, 2.5, 2.5;  // degenerate upper pair
  LevelSystem sysd = LevelSystem::make(ed, hi);
  EliminationResult resd = eliminate_all_leakage(sysd);

  bool ok = res.leakage_norm <= 1e-12 && res.steps.size() <= 4 &&
            u0_offdiag <= 1e-15 && resd.leakage_norm <= 1e-12 &&
            resd.steps.size() <= 2;
  return {ok, "leakage " + sci(res.leakage_norm) + " <= 1e-12 in " +
                  std::to_string(res.steps.size()) + " steps; degenerate pair in " +
                  std::to_string(resd.steps.size()) + " steps; pulses diagonal to " +
                  sci(u0_offdiag)};
}

// 10. Conjugation chain identities that re-route an XY coupling.
std::pair<bool, std::string> crit_recoupling() {
  VerificationReport rep = xy_universality_demo();
  double first = -1.0, second = -1.0;
  for (const auto& [name, v] : rep.metrics) {
    if (name == "first_conjugation") first = v;
    if (name == "second_conjugation") second = v;
  }
  bool ok = rep.passed && first >= 0 && second >= 0 && first <= 1e-12 &&
            second <= 1e-12;
  return {ok, "single step " + sci(first) + ", two-step chain " + sci(second) +
                  " <= 1e-12"};
}

// 11. Reruns of one config+seed produce byte-identical output files.
std::pair<bool, std::string> crit_determinism() {
  nlohmann::json j = {{"schema_version", 1},
                      {"experiment", "parity-kick"},
                      {"parameters", {{"taus", {0.25, 1.75}}, {"seed", 31}}}};
  ExperimentConfig cfg = parse_config(j);
  fs::path dir = fs::temp_directory_path() / "erd_acceptance_rerun";
  fs::remove_all(dir);
  fs::create_directories(dir);
  cfg.output_path = (dir / "a.csv").string();
  RunOutcome o1 = run_experiment(cfg);
  write_outputs(cfg, {}, o1);
  cfg.output_path = (dir / "b.csv").string();
  RunOutcome o2 = run_experiment(cfg);
  write_outputs(cfg, {}, o2);
  bool rows_same = slurp(dir / "a.csv") == slurp(dir / "b.csv");
  bool summaries_same =
      slurp(dir / "a.csv.summary.json") == slurp(dir / "b.csv.summary.json");
  bool ok = rows_same && summaries_same && o1.passed();
  return {ok, std::string("row files ") + (rows_same ? "identical" : "DIFFER") +
                  ", summaries " + (summaries_same ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  Gate gate;
  gate.run(1, "closed-form dephasing matches the quadrature oracle", crit_dephase);
  gate.run(2, "code states survive collective dephasing, cross-sector states do not",
           crit_storage);
  gate.run(3, "encoded su(2) algebra and pulse identities", crit_algebra);
  gate.run(4, "code blocks depend only on the relative phase", crit_phase_blocks);
  gate.run(5, "two-pulse echo is exact for two-qubit phase noise", crit_echo);
  gate.run(6, "frame averages kill leakage and the targeted logical terms",
           crit_first_order);
  gate.run(7, "first-order residuals scale quadratically in tau", crit_scaling);
  gate.run(8, "mismatched pulse family cancels the encoded drive", crit_mismatch);
  gate.run(9, "diagonal pulses eliminate off-resonant leakage", crit_offres);
  gate.run(10, "recoupling conjugation identities", crit_recoupling);
  gate.run(11, "identical config and seed give byte-identical outputs",
           crit_determinism);
  if (gate.failures > 0) {
    std::printf("%d of 11 criteria failed\n", gate.failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
