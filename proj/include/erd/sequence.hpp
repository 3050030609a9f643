#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "erd/operator_sum.hpp"

namespace erd {

// One free-evolution segment: duration tau under the ambient Hamiltonian,
// optionally with a weak system-side drive added for the duration.
struct FreeItem {
  double tau = 0.0;
  std::optional<OperatorSum> drive;
  std::string label = "free";
};

// An instantaneous control unitary acting on the system factor only.
struct PulseItem {
  Matrix unitary;
  std::string label = "pulse";
};

using SequenceItem = std::variant<FreeItem, PulseItem>;

// A pulse sequence listed left to right in operator order: the product of a
// run is items[0] * items[1] * ..., so the rightmost item acts first in time.
class PulseSequence {
 public:
  void append_free(double tau, std::string label = "free");
  void append_free_driven(double tau, OperatorSum drive, std::string label = "drive");
  void append_pulse(Matrix unitary, std::string label = "pulse");
  void append(const PulseSequence& tail);

  const std::vector<SequenceItem>& items() const { return items_; }
  int pulse_count() const;    // instantaneous pulses only
  int control_count() const;  // pulses plus driven free segments
  double total_free_time() const;
  std::string schedule() const;

 private:
  std::vector<SequenceItem> items_;
};

// Total propagator of the sequence under ambient Hamiltonian h (system (x)
// bath). Pulses are lifted with an identity bath factor. Eigendecompositions
// are cached per distinct generator.
Matrix run_sequence(const PulseSequence& seq, const OperatorSum& h);

// Toggling-frame data: for free segment k (in listed order), frames[k] holds
// V_k = G_k^dag where G_k is the product of all pulses to the segment's left;
// the segment evolves under V_k^dag H V_k, and the full run equals
//   prod_k exp(-i V_k^dag (H + drive_k) V_k tau_k) * net
// with net the product of every pulse in listed order.
struct ToggledFrames {
  std::vector<Matrix> frames;
  std::vector<double> durations;
  std::vector<std::optional<OperatorSum>> drives;
  Matrix net;
};

ToggledFrames toggled_frames(const PulseSequence& seq);

// A finite set of system unitaries used for averaging; closure is checked up
// to global phase.
struct SymmetrizationGroup {
  std::vector<Matrix> elements;
  bool check_closure(double tol = 1e-9) const;
};

// (1/n) sum_j V_j^dag h V_j over the given frames.
OperatorSum first_order_average(const std::vector<Matrix>& frames,
                                const OperatorSum& h);

// Time-weighted first-order generator of a sequence, drives included.
OperatorSum sequence_first_order_hamiltonian(const PulseSequence& seq,
                                             const OperatorSum& h);

// Distance between the exact run and the first-order prediction
// exp(-i h_avg T) * net; the quantity whose tau scaling is quadratic when
// the first-order average is all that survives.
double first_order_residual(const PulseSequence& seq, const OperatorSum& h);

struct VerificationReport {
  double operator_distance = 0.0;
  double dfs_fidelity = 1.0;
  double leakage_norm = 0.0;
  std::optional<double> scaling_slope;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;
  bool passed = true;

  void metric(const std::string& name, double value);
  void check(const std::string& name, double value, double tol);
};

// --- sequence library (pair (1,2) of a 2-qubit register unless noted) ---

// [tau, P, tau, P^dag] with P = exp(-i pi/2 xbar): cancels the difference of
// the two phase couplings exactly, leaving the collective half.
PulseSequence seq_parity_kick(double tau);
// [tau, Pi, tau, P, tau, Pi, tau, P^dag]: first-order removal of leakage and
// of ybar/zbar logical noise; xbar and code-preserving parts survive.
PulseSequence seq_leak4(double tau);
// Two leak4 passes conjugated through Q = exp(-i pi/2 ybar): first-order
// removal of everything but code-preserving noise. Ten pulses.
PulseSequence seq_full10(double tau);
// Nearest-neighbour kick nested inside a next-nearest kick on pairs
// (1,2),(3,4) of a 4-qubit register; collapses phase noise onto the
// block-collective operator (exactly for commuting couplings).
PulseSequence seq_block4(double tau);

enum class LogicalAxis { XBar, YBar };

// One decoupling cycle of total time t with drive omega along `axis`
// interleaved into the free segments; `family` picks which pulse set wraps
// the cycle (the matched family preserves the drive, the other removes it).
PulseSequence interleave_weak_gate(LogicalAxis axis, double omega, double t,
                                   LogicalAxis family);
inline PulseSequence interleave_weak_gate(LogicalAxis axis, double omega, double t) {
  return interleave_weak_gate(axis, omega, t, axis);
}

// Three weak-gate cycles implementing exp(-i a xbar) exp(-i b ybar)
// exp(-i c xbar), each of duration cycle_time.
PulseSequence euler_rotation(double alpha, double beta, double gamma,
                             double cycle_time);

// Frames of the named storage sequences as explicit groups.
SymmetrizationGroup group_parity_kick();
SymmetrizationGroup group_leak4();
SymmetrizationGroup group_full10();

// --- scaling-law helpers ---

std::vector<double> geometric_grid(double lo, double hi, int points_per_decade);
// Least-squares slope of log(residual) vs log(tau); pairs with residual
// below `floor_cut` are excluded (they sit at numerical noise).
double fit_loglog_slope(const std::vector<double>& taus,
                        const std::vector<double>& residuals,
                        double floor_cut = 1e-13);

struct ScalingFit {
  std::vector<double> taus;
  std::vector<double> residuals;
  double slope = 0.0;
};

ScalingFit scaling_fit(const std::function<double(double)>& residual_at_tau,
                       double tau_min, double tau_max, int points_per_decade = 8);

}  // namespace erd
