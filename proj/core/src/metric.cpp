#include "toral/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "toral/errors.hpp"

namespace toral {

namespace {

constexpr double kFloatSlack = 1e-9;
constexpr double kMaxSamples = 4e7;

// d(x, H)^2 = min over w in Z^r of (y - w)^T G^{-1} (y - w), with y = Gamma x
// and G = Gamma Gamma^T for an annihilator basis Gamma.
class SubtorusDistance {
 public:
  explicit SubtorusDistance(const Subtorus& h) {
    const Lattice ann = annihilator(h);
    r_ = ann.rank();
    n_ = h.ambient_dim();
    for (const auto& row : ann.basis()) {
      std::vector<double> g;
      for (const auto& x : row) g.push_back(x.get_d());
      gamma_.push_back(std::move(g));
    }
    if (r_ == 0) return;
    std::vector<std::vector<double>> gram(r_, std::vector<double>(r_));
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < r_; ++j) {
        double s = 0;
        for (std::size_t k = 0; k < n_; ++k) s += gamma_[i][k] * gamma_[j][k];
        gram[i][j] = s;
      }
    gram_diag_.resize(r_);
    for (std::size_t i = 0; i < r_; ++i) gram_diag_[i] = gram[i][i];
    inv_ = invert(gram);
  }

  double operator()(const std::vector<double>& x) const {
    if (r_ == 0) return 0.0;
    std::vector<double> y(r_);
    for (std::size_t i = 0; i < r_; ++i) {
      double s = 0;
      for (std::size_t k = 0; k < n_; ++k) s += gamma_[i][k] * x[k];
      y[i] = s;
    }
    if (r_ == 1) {
      double f = y[0] - std::round(y[0]);
      return std::abs(f) / std::sqrt(gram_diag_[0]);
    }
    std::vector<double> w(r_), diff(r_);
    for (std::size_t i = 0; i < r_; ++i) w[i] = std::round(y[i]);
    double best = form(y, w, diff);
    std::vector<long> lo(r_), hi(r_);
    for (std::size_t i = 0; i < r_; ++i) {
      double rad = std::sqrt(best * gram_diag_[i]) + kFloatSlack;
      lo[i] = static_cast<long>(std::ceil(y[i] - rad));
      hi[i] = static_cast<long>(std::floor(y[i] + rad));
    }
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == r_) {
        best = std::min(best, form(y, w, diff));
        return;
      }
      for (long v = lo[i]; v <= hi[i]; ++v) {
        w[i] = static_cast<double>(v);
        rec(i + 1);
      }
    };
    rec(0);
    return std::sqrt(std::max(best, 0.0));
  }

 private:
  double form(const std::vector<double>& y, const std::vector<double>& w, std::vector<double>& diff) const {
    for (std::size_t i = 0; i < r_; ++i) diff[i] = y[i] - w[i];
    double s = 0;
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < r_; ++j) s += diff[i] * inv_[i][j] * diff[j];
    return s;
  }

  static std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      for (std::size_t i = c + 1; i < n; ++i)
        if (std::abs(a[i][c]) > std::abs(a[p][c])) p = i;
      std::swap(a[p], a[c]);
      std::swap(inv[p], inv[c]);
      double d = a[c][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[c][j] /= d;
        inv[c][j] /= d;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c) continue;
        double f = a[i][c];
        for (std::size_t j = 0; j < n; ++j) {
          a[i][j] -= f * a[c][j];
          inv[i][j] -= f * inv[c][j];
        }
      }
    }
    return inv;
  }

  std::size_t r_ = 0;
  std::size_t n_ = 0;
  std::vector<std::vector<double>> gamma_;
  std::vector<double> gram_diag_;
  std::vector<std::vector<double>> inv_;
};

struct DirectedSup {
  double value = 0.0;
  double error = 0.0;
};

// sup over x in `from` of d(x, to), sampled on a grid of the parameter torus.
DirectedSup directed_sup(const Subtorus& from, const Subtorus& to, double resolution) {
  if (contains(to, from)) return {};
  const auto& basis = from.lattice().basis();
  const std::size_t k = basis.size();
  const std::size_t n = from.ambient_dim();
  std::vector<std::vector<double>> b;
  std::vector<long> steps(k);
  double error = 0.0;
  double samples = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> row;
    for (const auto& x : basis[i]) row.push_back(x.get_d());
    double len = 0;
    for (double x : row) len += x * x;
    len = std::sqrt(len);
    // Each parameter is within 1/(2 N_i) of a grid value, moving the point by
    // at most |b_i| / (2 N_i); the budget res/k per direction sums to res.
    steps[i] = std::max(1L, static_cast<long>(std::ceil(static_cast<double>(k) * len / (2.0 * resolution))));
    error += len / (2.0 * static_cast<double>(steps[i]));
    samples *= static_cast<double>(steps[i]);
    b.push_back(std::move(row));
  }
  if (samples > kMaxSamples)
    throw InputError(InputError::Kind::Precondition, "resolution too fine for this subtorus (sample grid too large)");

  SubtorusDistance dist(to);
  DirectedSup out;
  out.error = error + kFloatSlack;
  std::vector<long> idx(k, 0);
  std::vector<double> x(n);
  for (;;) {
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      double t = static_cast<double>(idx[i]) / static_cast<double>(steps[i]);
      for (std::size_t j = 0; j < n; ++j) x[j] += t * b[i][j];
    }
    out.value = std::max(out.value, dist(x));
    std::size_t i = 0;
    while (i < k && ++idx[i] == steps[i]) idx[i++] = 0;
    if (i == k) break;
  }
  return out;
}

}  // namespace

double distance_to_subtorus(const std::vector<double>& x, const Subtorus& h) {
  if (x.size() != h.ambient_dim()) throw InputError(InputError::Kind::DimensionMismatch, "point dimension mismatch");
  return SubtorusDistance(h)(x);
}

MetricEstimate hausdorff_distance(const Subtorus& a, const Subtorus& b, double resolution) {
  if (!(resolution > 0.0)) throw InputError(InputError::Kind::Precondition, "resolution must be positive");
  if (a.ambient_dim() != b.ambient_dim()) throw InputError(InputError::Kind::DimensionMismatch, "subtori live in different tori");
  MetricEstimate est;
  est.resolution = resolution;
  if (a == b) return est;
  DirectedSup ab = directed_sup(a, b, resolution);
  DirectedSup ba = directed_sup(b, a, resolution);
  est.value = std::max(ab.value, ba.value);
  est.error_bound = std::max(ab.error, ba.error);
  return est;
}

IsolationReport isolation_radius_lower_bound(const Subtorus& h, const Integer& dual_norm_bound, double resolution) {
  const std::size_t n = h.ambient_dim();
  if (h.is_trivial() || h.is_full())
    throw InputError(InputError::Kind::Precondition, "isolation bound needs a proper nontrivial subtorus");
  if (dual_norm_bound < 1) throw InputError(InputError::Kind::Precondition, "dual norm bound must be >= 1");
  IsolationReport rep{h, dual_norm_bound, resolution, std::numeric_limits<double>::infinity(), 0.0, 0, std::nullopt};
  const Integer max_sq = dual_norm_bound * dual_norm_bound;

  auto consider = [&](const Subtorus& other) {
    if (other == h) return;
    MetricEstimate e = hausdorff_distance(h, other, resolution);
    ++rep.compared;
    rep.max_error = std::max(rep.max_error, e.error_bound);
    double margin = e.value - e.error_bound;
    if (margin < rep.lower_bound) {
      rep.lower_bound = margin;
      rep.nearest = other;
    }
  };
  for (std::size_t d = h.dim(); d < n; ++d)
    for (const auto& other : subtori_with_dual_norm(n, d, max_sq)) consider(other);
  consider(Subtorus::full(n));
  return rep;
}

}  // namespace toral
