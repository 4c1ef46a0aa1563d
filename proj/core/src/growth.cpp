#include "toral/growth.hpp"

#include <algorithm>
#include <map>

#include "toral/lattice.hpp"

namespace toral {

Rational quadratic_value(const RationalMatrix& q, const IntVector& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    Rational row = 0;
    for (std::size_t j = 0; j < v.size(); ++j) row += q[i][j] * Rational(v[j]);
    s += Rational(v[i]) * row;
  }
  return s;
}

Rational row_sum_bound(const RationalMatrix& q) {
  Rational best = 0;
  for (const auto& row : q) {
    Rational s = 0;
    for (const auto& x : row) s += abs(x);
    best = std::max(best, s);
  }
  return best;
}

bool is_positive_definite(const RationalMatrix& m) {
  // Leading principal minors via Gaussian elimination without pivoting: every
  // pivot must be positive.
  RationalMatrix a = m;
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Rational f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return true;
}

RationalMatrix lyapunov_residual(const IntMatrix& a, const RationalMatrix& q, const Rational& mu) {
  const std::size_t n = a.rows();
  RationalMatrix qa(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < n; ++k) s += q[i][k] * Rational(a(k, j));
      qa[i][j] = s;
    }
  RationalMatrix r(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < n; ++k) s += Rational(a(k, i)) * qa[k][j];
      r[i][j] = s - mu * q[i][j];
    }
  return r;
}

std::optional<RationalMatrix> solve_lyapunov(const IntMatrix& a, const Rational& mu) {
  const std::size_t n = a.rows();
  std::vector<std::pair<std::size_t, std::size_t>> vars;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) vars.emplace_back(i, j);
  const std::size_t m = vars.size();
  RationalMatrix sys(m, std::vector<Rational>(m + 1));
  for (std::size_t e = 0; e < m; ++e) {
    auto [i, j] = vars[e];
    for (std::size_t v = 0; v < m; ++v) {
      auto [k, l] = vars[v];
      Rational c = Rational(a(k, i) * a(l, j));
      if (k != l) c += Rational(a(l, i) * a(k, j));
      if (k == i && l == j) c -= mu;
      sys[e][v] = c;
    }
    sys[e][m] = (i == j) ? 1 : 0;
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    while (p < m && sys[p][c] == 0) ++p;
    if (p == m) return std::nullopt;
    std::swap(sys[p], sys[c]);
    Rational inv = 1 / sys[c][c];
    for (auto& x : sys[c]) x *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c || sys[r][c] == 0) continue;
      Rational f = sys[r][c];
      for (std::size_t k = c; k <= m; ++k) sys[r][k] -= f * sys[c][k];
    }
  }
  RationalMatrix q(n, std::vector<Rational>(n));
  for (std::size_t v = 0; v < m; ++v) {
    auto [k, l] = vars[v];
    q[k][l] = sys[v][m];
    q[l][k] = sys[v][m];
  }
  return q;
}

const std::vector<Rational>& lyapunov_rates() {
  static const std::vector<Rational> rates = [] {
    std::vector<Rational> r{Rational(4), Rational(2), Rational(3, 2)};
    for (unsigned long k = 2; k <= 8; ++k) {
      Rational x(1);
      x += Rational(1, 1UL << k);
      r.push_back(x);
    }
    return r;
  }();
  return rates;
}

namespace {

bool valid_lyapunov(const UnimodularMatrix& s, const LyapunovCertificate& c) {
  if (c.mu <= 1 || c.form.size() != s.dim()) return false;
  const IntMatrix a = c.direction == Direction::Forward ? s.matrix() : s.inverse().matrix();
  return is_positive_definite(lyapunov_residual(a, c.form, c.mu));
}

IntMatrix shifted_transpose(const UnimodularMatrix& s, int sign) {
  const IntMatrix id = IntMatrix::identity(s.dim());
  return sign > 0 ? s.matrix().transpose() - id : s.matrix().transpose() + id;
}

bool valid_linear(const UnimodularMatrix& s, const LinearCertificate& c) {
  if (c.functional.size() != s.dim() || is_zero(c.functional) || (c.sign != 1 && c.sign != -1)) return false;
  IntMatrix st = shifted_transpose(s, c.sign);
  return is_zero(st.apply(st.apply(c.functional)));
}

std::optional<Rational> linear_bound(const UnimodularMatrix& s, const IntVector& gamma, long window, const IntVector& f,
                                     int sign) {
  IntVector drift = s.apply(gamma);
  for (std::size_t i = 0; i < drift.size(); ++i) drift[i] = sign * drift[i] - gamma[i];
  Integer d = abs(dot(f, drift));
  if (d == 0) return std::nullopt;
  Integer lo = Integer(window + 1) * d - abs(dot(f, gamma));
  if (lo <= 0) return std::nullopt;
  return Rational(lo * lo, norm_sq(f));
}

std::optional<Rational> lyapunov_bound(const RationalMatrix& q, const IntVector& boundary_point) {
  Rational v = quadratic_value(q, boundary_point);
  if (v <= 0) return std::nullopt;
  Rational lam = row_sum_bound(q);
  if (lam <= 0) return std::nullopt;
  return v / lam;
}

IntVector iterate(const IntMatrix& a, IntVector v, long steps) {
  for (long i = 0; i < steps; ++i) v = a.apply(v);
  return v;
}

}  // namespace

std::optional<Rational> exterior_bound(const UnimodularMatrix& s, const IntVector& gamma, long window,
                                       const std::vector<GrowthCertificate>& certs) {
  std::optional<Rational> fwd, bwd;
  auto raise = [](std::optional<Rational>& slot, const std::optional<Rational>& b) {
    if (b && (!slot || *b > *slot)) slot = b;
  };
  const IntMatrix inv = s.inverse().matrix();
  for (const auto& c : certs) {
    if (const auto* lin = std::get_if<LinearCertificate>(&c)) {
      if (!valid_linear(s, *lin)) return std::nullopt;
      auto b = linear_bound(s, gamma, window, lin->functional, lin->sign);
      raise(fwd, b);
      raise(bwd, b);
    } else {
      const auto& ly = std::get<LyapunovCertificate>(c);
      if (!valid_lyapunov(s, ly)) return std::nullopt;
      if (ly.direction == Direction::Forward)
        raise(fwd, lyapunov_bound(ly.form, iterate(s.matrix(), gamma, window + 1)));
      else
        raise(bwd, lyapunov_bound(ly.form, iterate(inv, gamma, window + 1)));
    }
  }
  if (!fwd || !bwd) return std::nullopt;
  return std::min(*fwd, *bwd);
}

namespace {

struct Cone {
  LyapunovCertificate cert;
  Rational lam;
};

// Everything the window search needs that depends on S alone.
struct Toolkit {
  std::vector<Cone> fwd_cones, bwd_cones;
  std::vector<LinearCertificate> linear_funcs;
};

Toolkit build_toolkit(const UnimodularMatrix& s) {
  const std::size_t n = s.dim();
  const IntMatrix inv = s.inverse().matrix();
  Toolkit kit;
  for (const auto& mu : lyapunov_rates()) {
    if (auto q = solve_lyapunov(s.matrix(), mu)) {
      LyapunovCertificate c{Direction::Forward, mu, *q};
      Rational lam = row_sum_bound(c.form);
      if (lam > 0) kit.fwd_cones.push_back({std::move(c), lam});
    }
    if (auto q = solve_lyapunov(inv, mu)) {
      LyapunovCertificate c{Direction::Backward, mu, *q};
      Rational lam = row_sum_bound(c.form);
      if (lam > 0) kit.bwd_cones.push_back({std::move(c), lam});
    }
  }
  for (int sign : {1, -1}) {
    IntMatrix st = shifted_transpose(s, sign);
    const Lattice ker = integer_kernel((st * st).row_vectors(), n);
    for (const auto& f : ker.basis()) kit.linear_funcs.push_back({f, sign});
  }
  return kit;
}

const Toolkit& toolkit_for(const UnimodularMatrix& s) {
  thread_local std::map<IntMatrix, Toolkit> cache;
  auto it = cache.find(s.matrix());
  if (it != cache.end()) return it->second;
  if (cache.size() >= 32) cache.clear();
  return cache.emplace(s.matrix(), build_toolkit(s)).first->second;
}

}  // namespace

std::optional<GrowthSearch> find_growth_certificate(const UnimodularMatrix& s, const IntVector& gamma,
                                                    const Rational& target_norm_sq, long min_window,
                                                    long max_window) {
  const IntMatrix inv = s.inverse().matrix();
  const Toolkit& kit = toolkit_for(s);
  const auto& fwd_cones = kit.fwd_cones;
  const auto& bwd_cones = kit.bwd_cones;
  const auto& linear_funcs = kit.linear_funcs;

  long w = std::max(1L, min_window);
  IntVector fpt = iterate(s.matrix(), gamma, w + 1);
  IntVector bpt = iterate(inv, gamma, w + 1);
  for (; w <= max_window; ++w) {
    std::optional<Rational> fb, bb, lb;
    const LyapunovCertificate *fc = nullptr, *bc = nullptr;
    const LinearCertificate* lf = nullptr;
    for (const auto& c : fwd_cones) {
      Rational v = quadratic_value(c.cert.form, fpt);
      if (v <= 0) continue;
      Rational b = v / c.lam;
      if (!fb || b > *fb) {
        fb = b;
        fc = &c.cert;
      }
    }
    for (const auto& c : bwd_cones) {
      Rational v = quadratic_value(c.cert.form, bpt);
      if (v <= 0) continue;
      Rational b = v / c.lam;
      if (!bb || b > *bb) {
        bb = b;
        bc = &c.cert;
      }
    }
    for (const auto& f : linear_funcs) {
      auto b = linear_bound(s, gamma, w, f.functional, f.sign);
      if (b && (!lb || *b > *lb)) {
        lb = b;
        lf = &f;
      }
    }
    std::optional<Rational> fwd = fb, bwd = bb;
    bool use_fc = fb.has_value(), use_bc = bb.has_value(), use_lin = false;
    if (lb && (!fwd || *lb > *fwd)) {
      fwd = lb;
      use_fc = false;
      use_lin = true;
    }
    if (lb && (!bwd || *lb > *bwd)) {
      bwd = lb;
      use_bc = false;
      use_lin = true;
    }
    if (fwd && bwd && std::min(*fwd, *bwd) > target_norm_sq) {
      GrowthSearch out;
      out.window = w;
      out.bound = std::min(*fwd, *bwd);
      if (use_fc) out.certs.emplace_back(*fc);
      if (use_bc) out.certs.emplace_back(*bc);
      if (use_lin) out.certs.emplace_back(*lf);
      return out;
    }
    fpt = s.apply(fpt);
    bpt = inv.apply(bpt);
  }
  return std::nullopt;
}

}  // namespace toral
