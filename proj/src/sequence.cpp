#include "erd/sequence.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "erd/gates.hpp"

namespace erd {

namespace {
constexpr double kPi = std::numbers::pi;
}

void PulseSequence::append_free(double tau, std::string label) {
  if (tau < 0.0) throw std::invalid_argument("append_free: negative duration");
  items_.push_back(FreeItem{tau, std::nullopt, std::move(label)});
}

void PulseSequence::append_free_driven(double tau, OperatorSum drive,
                                       std::string label) {
  if (tau < 0.0) throw std::invalid_argument("append_free_driven: negative duration");
  items_.push_back(FreeItem{tau, std::move(drive), std::move(label)});
}

void PulseSequence::append_pulse(Matrix unitary, std::string label) {
  if (!is_unitary(unitary, 1e-9)) {
    throw std::invalid_argument("append_pulse: matrix is not unitary");
  }
  items_.push_back(PulseItem{std::move(unitary), std::move(label)});
}

void PulseSequence::append(const PulseSequence& tail) {
  items_.insert(items_.end(), tail.items_.begin(), tail.items_.end());
}

int PulseSequence::pulse_count() const {
  int n = 0;
  for (const auto& it : items_)
    if (std::holds_alternative<PulseItem>(it)) ++n;
  return n;
}

int PulseSequence::control_count() const {
  int n = 0;
  for (const auto& it : items_) {
    if (std::holds_alternative<PulseItem>(it)) {
      ++n;
    } else if (std::get<FreeItem>(it).drive.has_value()) {
      ++n;
    }
  }
  return n;
}

double PulseSequence::total_free_time() const {
  double t = 0.0;
  for (const auto& it : items_) {
    if (const auto* f = std::get_if<FreeItem>(&it)) t += f->tau;
  }
  return t;
}

std::string PulseSequence::schedule() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& it : items_) {
    if (!first) os << " ";
    first = false;
    if (const auto* f = std::get_if<FreeItem>(&it)) {
      os << "[" << f->label << " " << f->tau << "]";
    } else {
      os << std::get<PulseItem>(it).label;
    }
  }
  return os.str();
}

Matrix run_sequence(const PulseSequence& seq, const OperatorSum& h) {
  long sys = h.system_dim();
  long bath = h.bath_dim();
  long total = h.total_dim();
  check_dim(total);
  Matrix bath_id = Matrix::Identity(bath, bath);
  // Cache propagator eigendecompositions per distinct generator content.
  std::unordered_map<std::uint64_t, HermitianPropagator> cache;
  Matrix h_dense = h.dense();
  auto propagator_for = [&](const std::optional<OperatorSum>& drive) -> HermitianPropagator& {
    Matrix gen = h_dense;
    std::uint64_t key = 0;
    if (drive.has_value()) {
      Matrix d = drive->num_qubits() == h.num_qubits() && drive->bath_dim() == 1
                     ? kron(drive->system_dense(), bath_id)
                     : throw std::invalid_argument(
                           "run_sequence: drive must be system-side with no bath");
      gen = h_dense + d;
      key = matrix_content_key(d);
    }
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, HermitianPropagator(gen)).first;
    return it->second;
  };
  Matrix u = Matrix::Identity(total, total);
  for (const auto& it : seq.items()) {
    if (const auto* f = std::get_if<FreeItem>(&it)) {
      u = u * propagator_for(f->drive).at(f->tau);
    } else {
      const Matrix& p = std::get<PulseItem>(it).unitary;
      if (p.rows() != sys) {
        throw std::invalid_argument("run_sequence: pulse dimension mismatch");
      }
      u = u * kron(p, bath_id);
    }
  }
  return u;
}

ToggledFrames toggled_frames(const PulseSequence& seq) {
  ToggledFrames out;
  Matrix g;  // product of pulses so far, left to right
  bool have_dim = false;
  for (const auto& it : seq.items()) {
    if (const auto* f = std::get_if<FreeItem>(&it)) {
      if (!have_dim) {
        out.frames.push_back(Matrix());  // dimension fixed below
      } else {
        out.frames.push_back(g.adjoint());
      }
      out.durations.push_back(f->tau);
      out.drives.push_back(f->drive);
    } else {
      const Matrix& p = std::get<PulseItem>(it).unitary;
      if (!have_dim) {
        g = Matrix::Identity(p.rows(), p.cols());
        have_dim = true;
        for (auto& fr : out.frames) {
          if (fr.size() == 0) fr = Matrix::Identity(p.rows(), p.cols());
        }
      }
      g = g * p;
    }
  }
  if (!have_dim) {
    throw std::invalid_argument("toggled_frames: sequence has no pulses");
  }
  for (auto& fr : out.frames) {
    if (fr.size() == 0) fr = Matrix::Identity(g.rows(), g.cols());
  }
  out.net = g;
  return out;
}

bool SymmetrizationGroup::check_closure(double tol) const {
  for (const Matrix& a : elements) {
    for (const Matrix& b : elements) {
      Matrix ab = a * b;
      bool found = false;
      for (const Matrix& c : elements) {
        if (phase_free_distance(ab, c) <= tol) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  }
  return true;
}

OperatorSum first_order_average(const std::vector<Matrix>& frames,
                                const OperatorSum& h) {
  if (frames.empty()) throw std::invalid_argument("first_order_average: no frames");
  OperatorSum acc = h.conjugated_by(frames[0]);
  for (size_t k = 1; k < frames.size(); ++k) {
    acc = acc + h.conjugated_by(frames[k]);
  }
  OperatorSum avg = acc * cplx(1.0 / static_cast<double>(frames.size()), 0.0);
  avg.drop_small_terms(1e-15);
  return avg;
}

OperatorSum sequence_first_order_hamiltonian(const PulseSequence& seq,
                                             const OperatorSum& h) {
  ToggledFrames tf = toggled_frames(seq);
  double total = 0.0;
  for (double t : tf.durations) total += t;
  if (total <= 0.0) {
    throw std::invalid_argument("sequence_first_order_hamiltonian: no free time");
  }
  OperatorSum acc(h.num_qubits(), h.bath_dim());
  for (size_t k = 0; k < tf.frames.size(); ++k) {
    OperatorSum seg = h;
    if (tf.drives[k].has_value()) {
      seg = seg + tf.drives[k]->lifted_to_bath(h.bath_dim());
    }
    acc = acc + seg.conjugated_by(tf.frames[k]) * cplx(tf.durations[k] / total, 0.0);
  }
  acc.drop_small_terms(1e-15);
  return acc;
}

double first_order_residual(const PulseSequence& seq, const OperatorSum& h) {
  ToggledFrames tf = toggled_frames(seq);
  double total = 0.0;
  for (double t : tf.durations) total += t;
  OperatorSum heff = sequence_first_order_hamiltonian(seq, h);
  Matrix bath_id = Matrix::Identity(h.bath_dim(), h.bath_dim());
  Matrix predicted = expm_hermitian(heff.dense(), total) * kron(tf.net, bath_id);
  return operator_distance(run_sequence(seq, h), predicted);
}

void VerificationReport::metric(const std::string& name, double value) {
  metrics.emplace_back(name, value);
}

void VerificationReport::check(const std::string& name, double value, double tol) {
  metrics.emplace_back(name, value);
  if (!(value <= tol)) {
    passed = false;
    notes.push_back(name + " exceeded tolerance");
  }
}

namespace {

Matrix pulse_p() { return ubar_gate(2, 1, 2, -kPi / 2, 0.0); }
Matrix pulse_pi() { return ubar_gate(2, 1, 2, -kPi, 0.0); }
Matrix pulse_q() { return ubar_gate(2, 1, 2, -kPi / 2, kPi / 2); }
Matrix pulse_lambda() { return ubar_gate(2, 1, 2, -kPi, kPi / 2); }

}  // namespace

PulseSequence seq_parity_kick(double tau) {
  PulseSequence s;
  Matrix p = pulse_p();
  s.append_free(tau);
  s.append_pulse(p, "P");
  s.append_free(tau);
  s.append_pulse(p.adjoint(), "P+");
  return s;
}

PulseSequence seq_leak4(double tau) {
  PulseSequence s;
  Matrix p = pulse_p(), pi = pulse_pi();
  s.append_free(tau);
  s.append_pulse(pi, "Pi");
  s.append_free(tau);
  s.append_pulse(p, "P");
  s.append_free(tau);
  s.append_pulse(pi, "Pi");
  s.append_free(tau);
  s.append_pulse(p.adjoint(), "P+");
  return s;
}

PulseSequence seq_full10(double tau) {
  PulseSequence s;
  Matrix q = pulse_q();
  PulseSequence inner = seq_leak4(tau);
  s.append(inner);
  s.append_pulse(q.adjoint(), "Q+");
  s.append(inner);
  s.append_pulse(q, "Q");
  return s;
}

PulseSequence seq_block4(double tau) {
  // Two code pairs (1,2) and (3,4). Nearest-neighbour kick on both pairs
  // nested inside a next-nearest kick on the cross pairs (1,3), (2,4).
  Matrix xnn = ubar_gate(4, 1, 2, kPi / 2, 0.0) * ubar_gate(4, 3, 4, kPi / 2, 0.0);
  Matrix xnnn =
      ubar_gate(4, 1, 3, -kPi / 2, 0.0) * ubar_gate(4, 2, 4, -kPi / 2, 0.0);
  PulseSequence inner;
  inner.append_free(tau);
  inner.append_pulse(xnn, "Xnn");
  inner.append_free(tau);
  inner.append_pulse(xnn.adjoint(), "Xnn+");
  PulseSequence s;
  s.append(inner);
  s.append_pulse(xnnn, "Xnnn");
  s.append(inner);
  s.append_pulse(xnnn.adjoint(), "Xnnn+");
  return s;
}

PulseSequence interleave_weak_gate(LogicalAxis axis, double omega, double t,
                                   LogicalAxis family) {
  if (t <= 0.0) throw std::invalid_argument("interleave_weak_gate: t <= 0");
  LogicalOps ops = logical_ops(2, 1, 2);
  OperatorSum drive = (axis == LogicalAxis::XBar ? ops.xbar : ops.ybar) * omega;
  Matrix half = family == LogicalAxis::XBar ? pulse_p() : pulse_q();
  Matrix full = family == LogicalAxis::XBar ? pulse_pi() : pulse_lambda();
  const char* half_name = family == LogicalAxis::XBar ? "P" : "Q";
  const char* full_name = family == LogicalAxis::XBar ? "Pi" : "Lambda";
  auto seg = [&](PulseSequence& s) {
    if (omega == 0.0) {
      s.append_free(t / 4);
    } else {
      s.append_free_driven(t / 4, drive, "drive");
    }
  };
  PulseSequence s;
  seg(s);
  s.append_pulse(full, full_name);
  seg(s);
  s.append_pulse(half, half_name);
  seg(s);
  s.append_pulse(full, full_name);
  seg(s);
  s.append_pulse(half.adjoint(), std::string(half_name) + "+");
  return s;
}

PulseSequence euler_rotation(double alpha, double beta, double gamma,
                             double cycle_time) {
  PulseSequence s;
  s.append(interleave_weak_gate(LogicalAxis::XBar, alpha / cycle_time, cycle_time,
                                LogicalAxis::XBar));
  s.append(interleave_weak_gate(LogicalAxis::YBar, beta / cycle_time, cycle_time,
                                LogicalAxis::YBar));
  s.append(interleave_weak_gate(LogicalAxis::XBar, gamma / cycle_time, cycle_time,
                                LogicalAxis::XBar));
  return s;
}

SymmetrizationGroup group_parity_kick() {
  // P squares to ZZ, not the identity, so the frame set {I, P+} only closes
  // once ZZ and P are included: the cyclic group of order four generated by P.
  Matrix p = pulse_p();
  return SymmetrizationGroup{
      {Matrix::Identity(4, 4), p, pulse_pi(), pulse_pi() * p}};
}

SymmetrizationGroup group_leak4() {
  Matrix p = pulse_p(), pi = pulse_pi();
  return SymmetrizationGroup{{Matrix::Identity(4, 4), pi, pi * p, pi * p * pi}};
}

SymmetrizationGroup group_full10() {
  SymmetrizationGroup g = group_leak4();
  Matrix qd = pulse_q().adjoint();
  std::vector<Matrix> all = g.elements;
  for (const Matrix& e : g.elements) all.push_back(qd * e);
  return SymmetrizationGroup{std::move(all)};
}

std::vector<double> geometric_grid(double lo, double hi, int points_per_decade) {
  if (lo <= 0.0 || hi <= lo) throw std::invalid_argument("geometric_grid: bad range");
  if (points_per_decade < 1) throw std::invalid_argument("geometric_grid: bad density");
  double decades = std::log10(hi / lo);
  int n = std::max(2, static_cast<int>(std::round(decades * points_per_decade)) + 1);
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
  }
  return out;
}

double fit_loglog_slope(const std::vector<double>& taus,
                        const std::vector<double>& residuals,
                        double floor_cut) {
  if (taus.size() != residuals.size() || taus.size() < 2) {
    throw std::invalid_argument("fit_loglog_slope: need matching lists, size >= 2");
  }
  std::vector<double> xs, ys;
  for (size_t k = 0; k < taus.size(); ++k) {
    if (residuals[k] > floor_cut) {
      xs.push_back(std::log(taus[k]));
      ys.push_back(std::log(residuals[k]));
    }
  }
  if (xs.size() < 2) {
    throw std::runtime_error("fit_loglog_slope: residuals are at numerical noise");
  }
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) throw std::runtime_error("fit_loglog_slope: degenerate fit");
  return (n * sxy - sx * sy) / denom;
}

ScalingFit scaling_fit(const std::function<double(double)>& residual_at_tau,
                       double tau_min, double tau_max, int points_per_decade) {
  ScalingFit fit;
  fit.taus = geometric_grid(tau_min, tau_max, points_per_decade);
  fit.residuals.reserve(fit.taus.size());
  for (double tau : fit.taus) fit.residuals.push_back(residual_at_tau(tau));
  fit.slope = fit_loglog_slope(fit.taus, fit.residuals);
  return fit;
}

}  // namespace erd
