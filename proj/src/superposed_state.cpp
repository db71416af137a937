#include "pdc/superposed_state.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "pdc/parallel.hpp"

namespace pdc {

PoissonCutoffs poisson_cutoffs(double alpha0, double threshold) {
  const double mean = alpha0 * alpha0;
  if (!(alpha0 >= 0.0)) throw std::domain_error("poisson_cutoffs: alpha0 must be nonnegative");
  if (mean == 0.0) return {0, 0, 1.0};
  const double log_thr = std::log(threshold);
  auto logp = [&](int n) { return -mean + 2.0 * n * std::log(alpha0) - std::lgamma(n + 1.0); };
  const int mode = static_cast<int>(std::floor(mean));
  PoissonCutoffs c;
  c.low = mode;
  while (c.low > 0 && logp(c.low - 1) > log_thr) --c.low;
  c.high = mode;
  while (logp(c.high + 1) > log_thr) ++c.high;
  if (logp(mode) <= log_thr) throw std::domain_error("poisson_cutoffs: no photon number above threshold");
  double mass = 0.0;
  for (int n = c.low; n <= c.high; ++n) mass += std::exp(logp(n));
  c.mass = mass;
  return c;
}

std::pair<Eigen::Index, Eigen::Index> SuperposedState::row_range(Eigen::Index k) const {
  if (!banded) return {0, rows() - 1};
  const Eigen::Index lo = std::max<Eigen::Index>(0, n1 - k);
  const Eigen::Index hi = std::min<Eigen::Index>(rows() - 1, n2 - k);
  return {lo, hi};
}

ExactSimulation::ExactSimulation(double alpha0, SimulationOptions opt)
    : alpha0_(alpha0), opt_(opt), cut_(poisson_cutoffs(alpha0, opt.cutoff_threshold)) {
  const double mean = alpha0 * alpha0;
  for (int n = cut_.low; n <= cut_.high; ++n) {
    const double logp = mean == 0.0 ? 0.0 : -mean + 2.0 * n * std::log(alpha0) - std::lgamma(n + 1.0);
    weight_.push_back(std::exp(0.5 * logp));
    sectors_.emplace_back(n);
  }
}

void ExactSimulation::advance_to(double tau) {
  if (tau < time_) throw std::invalid_argument("ExactSimulation: time must not decrease");
  // large sectors first so the dynamic schedule balances
  const std::size_t count = sectors_.size();
  parallel_for(count, opt_.jobs, [&](std::size_t i) { sectors_[count - 1 - i].advance_to(tau); });
  time_ = tau;
}

void ExactSimulation::fill(SuperposedState& out) const {
  out.alpha0 = alpha0_;
  out.tau = time_;
  out.n1 = cut_.low;
  out.n2 = cut_.high;
  out.pad = opt_.pad;
  out.phi0 = 0.0;
  out.theta = 0.0;
  out.banded = true;
  const Eigen::Index rows = cut_.high + 1 + opt_.pad, cols = cut_.high + 1;
  if (out.beta.rows() != rows || out.beta.cols() != cols) out.beta.resize(rows, cols);
  out.beta.setZero();
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    const int n = cut_.low + static_cast<int>(s);
    const Eigen::VectorXd& c = sectors_[s].amplitudes();
    for (int k = 0; k <= n; ++k) out.beta(n - k, k) = weight_[s] * c[k];
  }
}

SuperposedState ExactSimulation::state() const {
  SuperposedState s;
  fill(s);
  return s;
}

ExpmStats ExactSimulation::stats() const {
  ExpmStats total;
  for (const auto& s : sectors_) {
    total.substeps += s.stats().substeps;
    total.matvecs += s.stats().matvecs;
  }
  return total;
}

std::vector<SuperposedState> assemble(double alpha0, const std::vector<double>& grid, SimulationOptions opt) {
  std::vector<SuperposedState> out;
  out.reserve(grid.size());
  assemble(alpha0, grid, [&](const SuperposedState& s) { out.push_back(s); }, opt);
  return out;
}

void assemble(double alpha0, const std::vector<double>& grid, const std::function<void(const SuperposedState&)>& visit,
              SimulationOptions opt) {
  ExactSimulation sim(alpha0, opt);
  SuperposedState buf;
  for (double t : grid) {
    sim.advance_to(t);
    sim.fill(buf);
    visit(buf);
  }
}

SuperposedState apply_gauge(const SuperposedState& s, double phi0, double theta) {
  SuperposedState out = s;
  out.phi0 += phi0;
  out.theta += theta;
  for (Eigen::Index k = 0; k < s.cols(); ++k)
    for (Eigen::Index m = 0; m < s.rows(); ++m)
      out.beta(m, k) *= std::polar(1.0, phi0 * static_cast<double>(m) + (theta + phi0) * static_cast<double>(k));
  return out;
}

int frame_pad(int n2, double alpha) {
  return static_cast<int>(std::ceil(6.0 * std::sqrt(static_cast<double>(n2)) + 4.0 * std::abs(alpha)));
}

SuperposedState frame_transform(const SuperposedState& s, double alpha, double eta, const FrameOptions& opt) {
  int row_pad = frame_pad(s.n2, alpha);
  int col_pad = 0;
  const double total = s.norm2();
  for (int attempt = 0;; ++attempt) {
    SuperposedState out = s;
    out.banded = false;
    const Eigen::Index rows = std::max<Eigen::Index>(s.rows(), s.n2 + 1 + row_pad);
    const Eigen::Index cols = s.cols() + col_pad;
    out.beta = Eigen::MatrixXcd::Zero(rows, cols);
    out.beta.topLeftCorner(s.rows(), s.cols()) = s.beta;
    out.pad = static_cast<int>(rows) - s.n2 - 1;

    if (eta != 0.0 && cols > 1) {
      SkewTridiagonal sq;
      sq.sub.resize(cols - 1);
      for (Eigen::Index k = 0; k + 1 < cols; ++k) sq.sub[k] = -eta * static_cast<double>(k + 1);
      Eigen::MatrixXd re = out.beta.real().transpose(), im = out.beta.imag().transpose();
      expm_action(sq, 1.0, re);
      expm_action(sq, 1.0, im);
      out.beta.real() = re.transpose();
      out.beta.imag() = im.transpose();
    }
    if (alpha != 0.0 && rows > 1) {
      SkewTridiagonal disp;
      disp.sub.resize(rows - 1);
      for (Eigen::Index m = 0; m + 1 < rows; ++m) disp.sub[m] = -alpha * std::sqrt(static_cast<double>(m + 1));
      Eigen::MatrixXd re = out.beta.real(), im = out.beta.imag();
      expm_action(disp, 1.0, re);
      expm_action(disp, 1.0, im);
      out.beta.real() = re;
      out.beta.imag() = im;
    }

    const Eigen::Index edge_rows = std::max<Eigen::Index>(2, row_pad / 8);
    const Eigen::Index edge_cols = std::max<Eigen::Index>(2, cols / 16);
    const double row_edge = out.beta.bottomRows(std::min(edge_rows, rows)).squaredNorm();
    const double col_edge = out.beta.rightCols(std::min(edge_cols, cols)).squaredNorm();
    const double tol = opt.edge_tolerance * std::max(total, 1e-300);
    if (row_edge <= tol && col_edge <= tol) return out;
    if (attempt >= opt.max_retries) throw std::runtime_error("frame_transform: truncation edge mass exceeds tolerance");
    if (row_edge > tol) row_pad *= 2;
    if (col_edge > tol) col_pad += static_cast<int>(std::max<Eigen::Index>(8, cols));
  }
}

namespace {

static_assert(std::endian::native == std::endian::little, "state dumps assume a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("read_state: truncated input");
  return v;
}

constexpr char kMagic[9] = "PDCSTAT1";

}  // namespace

void write_state(std::ostream& os, const SuperposedState& s) {
  os.write(kMagic, 8);
  put<double>(os, s.alpha0);
  put<double>(os, s.tau);
  put<double>(os, s.phi0);
  put<double>(os, s.theta);
  put<std::int64_t>(os, s.n1);
  put<std::int64_t>(os, s.n2);
  put<std::int64_t>(os, s.pad);
  put<std::int64_t>(os, s.banded ? 1 : 0);
  put<std::int64_t>(os, s.rows());
  put<std::int64_t>(os, s.cols());
  for (Eigen::Index m = 0; m < s.rows(); ++m)
    for (Eigen::Index k = 0; k < s.cols(); ++k) {
      put<double>(os, s.beta(m, k).real());
      put<double>(os, s.beta(m, k).imag());
    }
  if (!os) throw std::runtime_error("write_state: write failed");
}

SuperposedState read_state(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("read_state: bad magic");
  SuperposedState s;
  s.alpha0 = get<double>(is);
  s.tau = get<double>(is);
  s.phi0 = get<double>(is);
  s.theta = get<double>(is);
  s.n1 = static_cast<int>(get<std::int64_t>(is));
  s.n2 = static_cast<int>(get<std::int64_t>(is));
  s.pad = static_cast<int>(get<std::int64_t>(is));
  s.banded = get<std::int64_t>(is) != 0;
  const auto rows = get<std::int64_t>(is), cols = get<std::int64_t>(is);
  if (rows < 0 || cols < 0) throw std::runtime_error("read_state: bad dimensions");
  s.beta.resize(rows, cols);
  for (Eigen::Index m = 0; m < rows; ++m)
    for (Eigen::Index k = 0; k < cols; ++k) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      s.beta(m, k) = {re, im};
    }
  return s;
}

void dump_state(const std::string& path, const SuperposedState& s) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("dump_state: cannot open " + path);
  write_state(f, s);
}

SuperposedState load_state(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_state: cannot open " + path);
  return read_state(f);
}

}  // namespace pdc
