#ifndef PDC_SUPERPOSED_STATE_HPP
#define PDC_SUPERPOSED_STATE_HPP

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdc/sector.hpp"

namespace pdc {

struct PoissonCutoffs {
  int low = 0;
  int high = 0;
  double mass = 1.0;  // sum of p_n over [low, high]
};

/// Smallest and largest n with Poisson(alpha0^2) probability above `threshold`.
PoissonCutoffs poisson_cutoffs(double alpha0, double threshold = 1e-16);

/// sum_{m,k} beta[m,k] |m>_p |k>_s |k>_i. Rows index pump photons, columns twin photons.
struct SuperposedState {
  double alpha0 = 0.0;
  double tau = 0.0;
  int n1 = 0;
  int n2 = 0;
  int pad = 0;
  double phi0 = 0.0;
  double theta = 0.0;
  /// True while beta[m,k] = 0 unless n1 <= m+k <= n2 (lost by frame_transform).
  bool banded = true;
  Eigen::MatrixXcd beta;

  Eigen::Index rows() const { return beta.rows(); }
  Eigen::Index cols() const { return beta.cols(); }
  double norm2() const { return beta.squaredNorm(); }
  /// Row range [first, last] of column k that may hold amplitude.
  std::pair<Eigen::Index, Eigen::Index> row_range(Eigen::Index k) const;
};

struct SimulationOptions {
  int jobs = 0;  // <= 0: hardware concurrency
  int pad = 0;   // extra pump rows kept in assembled states
  double cutoff_threshold = 1e-16;
};

/// The exact dynamics: one SectorPropagator per photon number in the Poisson window,
/// advanced together along an increasing time grid.
class ExactSimulation {
 public:
  explicit ExactSimulation(double alpha0, SimulationOptions opt = {});

  double alpha0() const { return alpha0_; }
  double time() const { return time_; }
  const PoissonCutoffs& cutoffs() const { return cut_; }
  void advance_to(double tau);
  /// Writes the current state into `out`, reusing its storage.
  void fill(SuperposedState& out) const;
  SuperposedState state() const;
  const SectorPropagator& sector(int total) const { return sectors_.at(static_cast<std::size_t>(total - cut_.low)); }
  ExpmStats stats() const;

 private:
  double alpha0_;
  SimulationOptions opt_;
  PoissonCutoffs cut_;
  std::vector<double> weight_;  // sqrt(p_n)
  std::vector<SectorPropagator> sectors_;
  double time_ = 0.0;
};

/// States at each grid time. Keeps every state in memory; use ExactSimulation to stream.
std::vector<SuperposedState> assemble(double alpha0, const std::vector<double>& grid, SimulationOptions opt = {});
/// Streaming form: calls visit(state) per grid time with a reused buffer.
void assemble(double alpha0, const std::vector<double>& grid, const std::function<void(const SuperposedState&)>& visit,
              SimulationOptions opt = {});

/// beta[m,k] *= exp(i phi0 m) exp(i (theta + phi0) k).
SuperposedState apply_gauge(const SuperposedState& s, double phi0, double theta);

struct FrameOptions {
  double edge_tolerance = 1e-8;  // allowed mass in the outermost rows/columns after the transform
  int max_retries = 4;
};

/// D(-alpha) S(-eta) applied to the state: pump displacement exp(alpha (a_p - a_p')) along
/// the rows and twin squeeze exp(-eta (a_s' a_i' - a_s a_i)) along the columns.
/// Pads rows by ceil(6 sqrt(n2) + 4 |alpha|); grows the pad while edge mass exceeds tolerance.
SuperposedState frame_transform(const SuperposedState& s, double alpha, double eta, const FrameOptions& opt = {});

/// Default pad rule of frame_transform.
int frame_pad(int n2, double alpha);

/// Binary checkpoint: "PDCSTAT1", f64 alpha0, f64 tau, f64 phi0, f64 theta, i64 n1, i64 n2,
/// i64 pad, i64 banded, i64 rows, i64 cols, then row-major (re, im) f64 pairs; little-endian.
void write_state(std::ostream& os, const SuperposedState& s);
SuperposedState read_state(std::istream& is);
void dump_state(const std::string& path, const SuperposedState& s);
SuperposedState load_state(const std::string& path);

}  // namespace pdc

#endif  // PDC_SUPERPOSED_STATE_HPP
