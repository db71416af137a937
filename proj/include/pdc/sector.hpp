#ifndef PDC_SECTOR_HPP
#define PDC_SECTOR_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace pdc {

/// Real skew-symmetric tridiagonal generator G with G[j+1][j] = sub[j] and G[j][j+1] = -sub[j].
struct SkewTridiagonal {
  Eigen::VectorXd sub;

  Eigen::Index dim() const { return sub.size() + 1; }
  /// Infinity-norm bound on the spectral radius.
  double norm_bound() const;
  Eigen::MatrixXd dense() const;
};

/// Couplings of the fixed-photon-number sector N: |N-k>|k>|k>, sub[k] = (k+1) sqrt(N-k).
SkewTridiagonal sector_generator(int total);

struct ExpmStats {
  long substeps = 0;
  long matvecs = 0;
};

enum class ExpmMethod { chebyshev, taylor };

/// Bound on the discarded series tail per expansion: 1e-14 with a safety factor of 10.
inline constexpr double kSeriesTailBound = 1e-15;
/// Largest norm-time product per Taylor substep.
inline constexpr double kTaylorStepNorm = 4.0;

/// Smallest number of Taylor terms m with sum_{j>m} x^j/j! <= bound, for 0 <= x <= kTaylorStepNorm.
int taylor_terms(double x, double bound = kSeriesTailBound);

/// J_0(x) .. J_K(x) with K the smallest order such that 2 sum_{k>K} |J_k(x)| <= bound
/// (Miller backward recurrence normalised by J_0 + 2 sum J_2k = 1).
std::vector<double> bessel_coefficients(double x, double bound = kSeriesTailBound);

namespace detail {

template <class T>
inline void skew_apply(const double* sub, Eigen::Index n, const T* x, T* y) {
  if (n == 1) {
    y[0] = T(0);
    return;
  }
  y[0] = -sub[0] * x[1];
  for (Eigen::Index j = 1; j + 1 < n; ++j) y[j] = sub[j - 1] * x[j - 1] - sub[j] * x[j + 1];
  y[n - 1] = sub[n - 2] * x[n - 2];
}

}  // namespace detail

/// x <- exp(t G) x, columnwise.
///
/// Chebyshev: exp(tG) = J_0(t rho) + 2 sum_k J_k(t rho) u_k with u_0 = 1, u_1 = G/rho,
/// u_{k+1} = (2/rho) G u_k + u_{k-1}. The spectrum of G lies in i[-rho, rho], so every
/// ||u_k|| <= 1 and the discarded tail is bounded by the Bessel tail.
/// Taylor: substeps with |h| rho <= kTaylorStepNorm, each cut where the a-priori tail
/// bound falls below kSeriesTailBound.
template <class Derived>
void expm_action(const SkewTridiagonal& g, double t, Eigen::MatrixBase<Derived>& x, ExpmStats* stats = nullptr,
                 ExpmMethod method = ExpmMethod::chebyshev) {
  using T = typename Derived::Scalar;
  using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  const double rho = g.norm_bound();
  if (t == 0.0 || rho == 0.0) return;
  const Eigen::Index n = x.rows();
  const double* sub = g.sub.data();
  Vec a(n), b(n), c(n), acc(n);

  if (method == ExpmMethod::chebyshev) {
    const std::vector<double> jk = bessel_coefficients(t * rho);
    const double scale = 2.0 / rho;
    for (Eigen::Index col = 0; col < x.cols(); ++col) {
      a = x.col(col);
      acc = jk[0] * a;
      if (jk.size() > 1) {
        detail::skew_apply(sub, n, a.data(), b.data());
        b /= rho;
        acc += (2.0 * jk[1]) * b;
      }
      for (std::size_t k = 2; k < jk.size(); ++k) {
        detail::skew_apply(sub, n, b.data(), c.data());
        const double w = 2.0 * jk[k];
        T* cp = c.data();
        const T* ap = a.data();
        T* accp = acc.data();
        for (Eigen::Index j = 0; j < n; ++j) {
          cp[j] = scale * cp[j] + ap[j];
          accp[j] += w * cp[j];
        }
        std::swap(a, b);
        std::swap(b, c);
      }
      x.col(col) = acc;
    }
    if (stats) {
      stats->substeps += 1;
      stats->matvecs += static_cast<long>(jk.size() - 1) * static_cast<long>(x.cols());
    }
    return;
  }

  const double span = std::abs(t) * rho;
  const long steps = std::max(1L, static_cast<long>(std::ceil(span / kTaylorStepNorm)));
  const double h = t / static_cast<double>(steps);
  const int m = taylor_terms(std::abs(h) * rho);
  for (Eigen::Index col = 0; col < x.cols(); ++col) {
    acc = x.col(col);
    for (long s = 0; s < steps; ++s) {
      a = acc;
      for (int j = 1; j <= m; ++j) {
        detail::skew_apply(sub, n, a.data(), b.data());
        a = b * (h / j);
        acc += a;
      }
    }
    x.col(col) = acc;
  }
  if (stats) {
    stats->substeps += steps;
    stats->matvecs += steps * m * static_cast<long>(x.cols());
  }
}

/// Amplitudes c_k(tau) of one sector, advanced monotonically in time.
class SectorPropagator {
 public:
  /// Starts from |N>|0>|0> unless `c0` is given.
  explicit SectorPropagator(int total, ExpmMethod method = ExpmMethod::chebyshev);
  SectorPropagator(int total, Eigen::VectorXd c0, ExpmMethod method = ExpmMethod::chebyshev);

  int total() const { return total_; }
  double time() const { return time_; }
  const Eigen::VectorXd& amplitudes() const { return c_; }
  const ExpmStats& stats() const { return stats_; }
  /// Advances to tau >= time().
  void advance_to(double tau);

 private:
  int total_;
  SkewTridiagonal gen_;
  Eigen::VectorXd c_;
  double time_ = 0.0;
  ExpmStats stats_;
  ExpmMethod method_;
};

/// c(tau) for each grid time (grid nondecreasing, starting at or after 0), step-chained.
std::vector<Eigen::VectorXd> evolve_sector(int total, const Eigen::VectorXd& c0, const std::vector<double>& grid,
                                           ExpmMethod method = ExpmMethod::chebyshev);

}  // namespace pdc

#endif  // PDC_SECTOR_HPP
