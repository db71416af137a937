#include "pdc/sector.hpp"

#include <stdexcept>

namespace pdc {

double SkewTridiagonal::norm_bound() const {
  double best = 0.0;
  const Eigen::Index n = sub.size();
  for (Eigen::Index j = 0; j <= n; ++j) {
    const double left = j > 0 ? std::abs(sub[j - 1]) : 0.0;
    const double right = j < n ? std::abs(sub[j]) : 0.0;
    best = std::max(best, left + right);
  }
  return best;
}

Eigen::MatrixXd SkewTridiagonal::dense() const {
  const Eigen::Index n = dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    g(j + 1, j) = sub[j];
    g(j, j + 1) = -sub[j];
  }
  return g;
}

SkewTridiagonal sector_generator(int total) {
  if (total < 0) throw std::invalid_argument("sector_generator: negative photon number");
  SkewTridiagonal g;
  g.sub.resize(total);
  for (int k = 0; k < total; ++k) g.sub[k] = (k + 1) * std::sqrt(static_cast<double>(total - k));
  return g;
}

int taylor_terms(double x, double bound) {
  if (x == 0.0) return 0;
  // tail after m terms: sum_{j>m} x^j/j! <= x^{m+1}/(m+1)! / (1 - x/(m+2))
  double term = 1.0;
  for (int m = 0; m < 200; ++m) {
    term *= x / (m + 1);
    const double ratio = x / (m + 2);
    if (ratio < 1.0 && term / (1.0 - ratio) <= bound) return m;
  }
  throw std::domain_error("taylor_terms: norm-time product too large");
}

std::vector<double> bessel_coefficients(double x, double bound) {
  const double ax = std::abs(x);
  if (ax == 0.0) return {1.0};
  // backward recurrence from well above the turning point k = |x|
  const int start = static_cast<int>(ax + 12.0 * std::cbrt(ax) + 60.0);
  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[static_cast<std::size_t>(start)] = 1e-300;
  for (int k = start; k > 0; --k) {
    const auto uk = static_cast<std::size_t>(k);
    j[uk - 1] = (2.0 * k / ax) * j[uk] - j[uk + 1];
    if (std::abs(j[uk - 1]) > 1e250)
      for (std::size_t i = uk - 1; i < j.size(); ++i) j[i] *= 1e-250;
  }
  double norm = j[0];
  for (std::size_t k = 2; k < j.size(); k += 2) norm += 2.0 * j[k];
  for (auto& v : j) v /= norm;
  double tail = 0.0;
  std::size_t keep = j.size();
  while (keep > 1 && tail + 2.0 * std::abs(j[keep - 1]) <= bound) {
    tail += 2.0 * std::abs(j[keep - 1]);
    --keep;
  }
  if (keep + 8 >= j.size()) throw std::runtime_error("bessel_coefficients: recurrence started too low");
  j.resize(keep);
  if (x < 0.0)
    for (std::size_t k = 1; k < j.size(); k += 2) j[k] = -j[k];
  return j;
}

SectorPropagator::SectorPropagator(int total, ExpmMethod method)
    : SectorPropagator(total, Eigen::VectorXd::Unit(total + 1, 0), method) {}

SectorPropagator::SectorPropagator(int total, Eigen::VectorXd c0, ExpmMethod method)
    : total_(total), gen_(sector_generator(total)), c_(std::move(c0)), method_(method) {
  if (c_.size() != total + 1) throw std::invalid_argument("SectorPropagator: amplitude length must be N+1");
}

void SectorPropagator::advance_to(double tau) {
  if (tau < time_) throw std::invalid_argument("SectorPropagator: time must not decrease");
  expm_action(gen_, tau - time_, c_, &stats_, method_);
  time_ = tau;
}

std::vector<Eigen::VectorXd> evolve_sector(int total, const Eigen::VectorXd& c0, const std::vector<double>& grid,
                                           ExpmMethod method) {
  SectorPropagator p(total, c0, method);
  std::vector<Eigen::VectorXd> out;
  out.reserve(grid.size());
  for (double t : grid) {
    p.advance_to(t);
    out.push_back(p.amplitudes());
  }
  return out;
}

}  // namespace pdc
