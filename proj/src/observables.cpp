#include "pdc/observables.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pdc {
namespace {

using cplx = std::complex<double>;

// <n - lower + raise| (a')^raise a^lower |n>
double ladder_weight(Eigen::Index n, int lower, int raise) {
  if (n < lower) return 0.0;
  double w = 1.0;
  for (int i = 0; i < lower; ++i) w *= static_cast<double>(n - i);
  const Eigen::Index base = n - lower;
  for (int i = 1; i <= raise; ++i) w *= static_cast<double>(base + i);
  return std::sqrt(w);
}

}  // namespace

cplx moment(const SuperposedState& s, const Monomial& req) {
  const auto& p = req.pow;
  if (p[2] - p[3] != p[4] - p[5]) return 0.0;
  const int shift_m = p[0] - p[1];
  const int shift_k = p[2] - p[3];
  const Eigen::Index rows = s.rows(), cols = s.cols();
  std::vector<double> wm(static_cast<std::size_t>(rows)), wk(static_cast<std::size_t>(cols));
  for (Eigen::Index m = 0; m < rows; ++m) wm[static_cast<std::size_t>(m)] = ladder_weight(m, p[1], p[0]);
  for (Eigen::Index k = 0; k < cols; ++k)
    wk[static_cast<std::size_t>(k)] = ladder_weight(k, p[3], p[2]) * ladder_weight(k, p[5], p[4]);

  cplx sum = 0.0;
  double lost = 0.0;
  for (Eigen::Index k = 0; k < cols; ++k) {
    const double wkk = wk[static_cast<std::size_t>(k)];
    if (wkk == 0.0) continue;
    const Eigen::Index k2 = k + shift_k;
    const auto [lo, hi] = s.row_range(k);
    for (Eigen::Index m = lo; m <= hi; ++m) {
      const double w = wm[static_cast<std::size_t>(m)];
      if (w == 0.0) continue;
      const Eigen::Index m2 = m + shift_m;
      const cplx b = s.beta(m, k);
      if (k2 >= cols || m2 >= rows) {
        lost += std::norm(b);
        continue;
      }
      sum += std::conj(s.beta(m2, k2)) * b * (w * wkk);
    }
  }
  if (!s.banded && lost > 1e-14 * std::max(s.norm2(), 1e-300))
    throw std::out_of_range("moment: shifted amplitude leaves the stored grid; pad the state");
  return sum;
}

CovarianceMatrix6 covariance(const SuperposedState& s) {
  const Mode modes[3] = {Mode::pump, Mode::signal, Mode::idler};
  cplx a[3], aa[3][3], nn[3][3];
  for (int x = 0; x < 3; ++x) {
    a[x] = moment(s, Monomial::lowering(modes[x]));
    for (int y = 0; y < 3; ++y) {
      if (x == y) {
        aa[x][y] = moment(s, Monomial::lowering(modes[x], 2));
        nn[x][y] = moment(s, Monomial::number(modes[x]));
      } else {
        aa[x][y] = moment(s, Monomial::lowering(modes[x]) * Monomial::lowering(modes[y]));
        nn[x][y] = moment(s, Monomial::raising(modes[x]) * Monomial::lowering(modes[y]));
      }
    }
  }
  const double r = 1.0 / std::numbers::sqrt2;
  const cplx u[2] = {cplx(r, 0.0), cplx(0.0, -r)};  // X, P as u a + conj(u) a'
  CovarianceMatrix6 c;
  for (int i = 0; i < 6; ++i) c.mean[i] = 2.0 * (u[i % 2] * a[i / 2]).real();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const int x = i / 2, y = j / 2;
      const cplx ui = u[i % 2], uj = u[j % 2];
      double v = 2.0 * (ui * uj * aa[x][y]).real() + 2.0 * (std::conj(ui) * uj * nn[x][y]).real();
      if (x == y) v += (ui * std::conj(uj)).real();
      c.v(i, j) = v - c.mean[i] * c.mean[j];
    }
  return c;
}

double uncertainty_margin(const CovarianceMatrix6& c) {
  Eigen::Matrix<cplx, 6, 6> h = c.v.cast<cplx>();
  for (int x = 0; x < 3; ++x) {
    h(2 * x, 2 * x + 1) += cplx(0.0, 0.5);
    h(2 * x + 1, 2 * x) -= cplx(0.0, 0.5);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, 6, 6>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double ReducedDensity::trace() const {
  return mode == Mode::pump ? matrix.trace().real() : diagonal.sum();
}

ReducedDensity reduced_density(const SuperposedState& s, Mode mode) {
  ReducedDensity r;
  r.mode = mode;
  if (mode == Mode::pump) {
    r.matrix = s.beta * s.beta.adjoint();
  } else {
    r.diagonal = s.beta.colwise().squaredNorm().transpose();
  }
  return r;
}

double purity(const ReducedDensity& rho) {
  return rho.mode == Mode::pump ? rho.matrix.squaredNorm() : rho.diagonal.squaredNorm();
}

double pump_purity(const SuperposedState& s, double column_floor) {
  const Eigen::VectorXd col = s.beta.colwise().squaredNorm().transpose();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < col.size(); ++k)
    if (col[k] > column_floor) keep.push_back(k);
  if (keep.empty()) return 0.0;
  // restrict to the rows any kept column can touch
  Eigen::Index lo = s.rows(), hi = -1;
  for (auto k : keep) {
    const auto [a, b] = s.row_range(k);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(keep.size()), r = hi - lo + 1;
  const bool real = s.beta.imag().cwiseAbs().maxCoeff() == 0.0;
  if (real) {
    Eigen::MatrixXd b(r, n);
    for (Eigen::Index j = 0; j < n; ++j) b.col(j) = s.beta.col(keep[static_cast<std::size_t>(j)]).segment(lo, r).real();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    g.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());
    const double diag = g.diagonal().squaredNorm();
    const double lower = g.triangularView<Eigen::StrictlyLower>().toDenseMatrix().squaredNorm();
    return diag + 2.0 * lower;
  }
  Eigen::MatrixXcd b(r, n);
  for (Eigen::Index j = 0; j < n; ++j) b.col(j) = s.beta.col(keep[static_cast<std::size_t>(j)]).segment(lo, r);
  const Eigen::MatrixXcd g = b.adjoint() * b;
  return g.squaredNorm();
}

double pump_impurity(const SuperposedState& s, double column_floor) {
  const Eigen::VectorXd col = s.beta.colwise().squaredNorm().transpose();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < col.size(); ++k)
    if (col[k] > column_floor) keep.push_back(k);
  // sum over ordered pairs of n_j n_k - |<v_j, v_k>|^2, each as n_j |v_k - proj_j v_k|^2
  double deficit = 0.0;
  for (std::size_t a = 0; a < keep.size(); ++a) {
    const Eigen::Index j = keep[a];
    const auto [jlo, jhi] = s.row_range(j);
    for (std::size_t b = a + 1; b < keep.size(); ++b) {
      const Eigen::Index k = keep[b];
      const auto [klo, khi] = s.row_range(k);
      const Eigen::Index lo = std::min(jlo, klo), len = std::max(jhi, khi) - lo + 1;
      const auto vj = s.beta.col(j).segment(lo, len);
      const auto vk = s.beta.col(k).segment(lo, len);
      const std::complex<double> c = vj.dot(vk) / col[j];
      deficit += 2.0 * col[j] * (vk - c * vj).squaredNorm();
    }
  }
  const double total = col.sum();
  return deficit / (total * total);
}

double signal_purity(const SuperposedState& s) { return s.beta.colwise().squaredNorm().squaredNorm(); }

std::vector<double> photon_statistics(const SuperposedState& s, Mode mode) {
  Eigen::VectorXd p;
  if (mode == Mode::pump)
    p = s.beta.rowwise().squaredNorm();
  else
    p = s.beta.colwise().squaredNorm().transpose();
  return {p.data(), p.data() + p.size()};
}

ParitySplit parity_split(const std::vector<double>& probabilities) {
  ParitySplit out;
  for (std::size_t n = 0; n < probabilities.size(); ++n) {
    if (n % 2 == 0) {
      out.even.push_back(probabilities[n]);
      out.even_mass += probabilities[n];
    } else {
      out.odd.push_back(probabilities[n]);
      out.odd_mass += probabilities[n];
    }
  }
  return out;
}

double variance_x(double n, cplx a2, cplx a) { return n + a2.real() + 0.5 - 2.0 * a.real() * a.real(); }
double variance_p(double n, cplx a2, cplx a) { return n - a2.real() + 0.5 - 2.0 * a.imag() * a.imag(); }

StandardRow standard_row(const SuperposedState& s, bool with_pump_purity) {
  StandardRow r;
  r.tau = s.tau;
  r.n_p = moment(s, Monomial::number(Mode::pump)).real();
  r.n_s = moment(s, Monomial::number(Mode::signal)).real();
  r.a_p = moment(s, Monomial::lowering(Mode::pump));
  r.a_p2 = moment(s, Monomial::lowering(Mode::pump, 2));
  r.a_s_a_i = moment(s, Monomial::lowering(Mode::signal) * Monomial::lowering(Mode::idler));
  r.var_x_p = variance_x(r.n_p, r.a_p2, r.a_p);
  r.var_p_p = variance_p(r.n_p, r.a_p2, r.a_p);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double pp = moment(s, Monomial(2, 2, 0, 0, 0, 0)).real();
  const double ss = moment(s, Monomial(0, 0, 2, 2, 0, 0)).real();
  r.g2_p = r.n_p < kPopulationFloor ? nan : pp / (r.n_p * r.n_p);
  r.g2_s = r.n_s < kPopulationFloor ? nan : ss / (r.n_s * r.n_s);
  r.purity_p = with_pump_purity ? pump_purity(s) : nan;
  if (r.purity_p > 1.0 - kImpurityRefine) r.purity_p = 1.0 - pump_impurity(s);
  r.purity_s = signal_purity(s);
  return r;
}

std::vector<StandardRow> standard_series(const std::vector<SuperposedState>& states, bool with_pump_purity) {
  std::vector<StandardRow> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(standard_row(s, with_pump_purity));
  return out;
}

std::vector<std::string> standard_columns() {
  return {"tau",       "n_p",       "n_s",     "re_a_p",  "im_a_p", "re_a_p2",  "im_a_p2",  "re_as_ai",
          "im_as_ai",  "var_x_p",   "var_p_p", "g2_p",    "g2_s",   "purity_p", "purity_s"};
}

std::vector<double> standard_values(const StandardRow& r) {
  return {r.tau,       r.n_p,       r.n_s,     r.a_p.real(), r.a_p.imag(), r.a_p2.real(), r.a_p2.imag(),
          r.a_s_a_i.real(), r.a_s_a_i.imag(), r.var_x_p, r.var_p_p, r.g2_p, r.g2_s, r.purity_p, r.purity_s};
}

std::vector<double> local_maxima(const std::vector<double>& t, const std::vector<double>& v, int count) {
  if (t.size() != v.size()) throw std::invalid_argument("local_maxima: size mismatch");
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < v.size() && static_cast<int>(out.size()) < count; ++i) {
    if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;
    // vertex of the parabola through the three samples
    const double x0 = t[i - 1], x1 = t[i], x2 = t[i + 1];
    const double d1 = (v[i] - v[i - 1]) / (x1 - x0), d2 = (v[i + 1] - v[i]) / (x2 - x1);
    const double curv = (d2 - d1) / (x2 - x0);
    double x = x1;
    if (curv < 0.0) x = 0.5 * (x0 + x1) - d1 / (2.0 * curv);
    out.push_back(std::clamp(x, x0, x2));
  }
  return out;
}

}  // namespace pdc
