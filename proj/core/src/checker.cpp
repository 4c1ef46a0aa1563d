#include "toral/checker.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace toral {

namespace {

// The checker keeps its own small matrix kit so that a bug in the producers'
// linear algebra cannot vouch for itself.
using Mat = std::vector<IntVector>;
using QMat = std::vector<std::vector<Rational>>;

Mat to_mat(const IntMatrix& m) { return m.row_vectors(); }

Mat mul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.front().size();
  Mat c(n, IntVector(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

IntVector mat_vec(const Mat& a, const IntVector& v) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

Mat ident(std::size_t n) {
  Mat m(n, IntVector(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat mat_pow(Mat base, Integer e) {
  Mat r = ident(base.size());
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mul(r, base);
    e /= 2;
    if (e > 0) base = mul(base, base);
  }
  return r;
}

Mat transpose(const Mat& a) {
  Mat t(a.front().size(), IntVector(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

// Laplace expansion along the first row.
Integer laplace(const Mat& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  Integer det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c] == 0) continue;
    Mat minor;
    for (std::size_t r = 1; r < n; ++r) {
      IntVector row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    Integer term = a[0][c] * laplace(minor);
    det += (c % 2 == 0) ? term : Integer(-term);
  }
  return det;
}

// (T^{-1})^T = cofactor matrix / det.
Mat dual_of(const Mat& t) {
  const std::size_t n = t.size();
  const Integer det = laplace(t);
  Mat s(n, IntVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Mat minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        IntVector row;
        for (std::size_t k = 0; k < n; ++k)
          if (k != j) row.push_back(t[r][k]);
        minor.push_back(std::move(row));
      }
      Integer c = n == 1 ? Integer(1) : laplace(minor);
      if ((i + j) % 2 == 1) c = -c;
      s[i][j] = c / det;
    }
  return s;
}

IntVector canon(IntVector v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g == 0) return v;
  bool flip = false;
  for (const auto& x : v)
    if (x != 0) {
      flip = x < 0;
      break;
    }
  for (auto& x : v) {
    x /= g;
    if (flip) x = -x;
  }
  return v;
}

Integer content_of(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

// Generalised cross product of the n-1 basis rows: the normal covector.
IntVector normal_of(const std::vector<IntVector>& rows, std::size_t n) {
  IntVector c(n);
  for (std::size_t k = 0; k < n; ++k) {
    Mat minor;
    for (const auto& r : rows) {
      IntVector row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) row.push_back(r[j]);
      minor.push_back(std::move(row));
    }
    Integer d = laplace(minor);
    c[k] = (k % 2 == 0) ? d : Integer(-d);
  }
  return c;
}

Integer sq(const IntVector& v) {
  Integer s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

Integer dotp(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

unsigned long phi(unsigned long m) {
  unsigned long r = m;
  for (unsigned long p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    r -= r / p;
  }
  if (m > 1) r -= r / m;
  return r;
}

// Every element of finite order in GL(n, Z) has order dividing this.
Integer order_bound(std::size_t n) {
  Integer l = 1;
  // phi(m) >= sqrt(m / 2), so m <= 2 n^2 suffices.
  for (unsigned long m = 1; m <= 2 * n * n + 2; ++m)
    if (phi(m) <= n) mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), m);
  return l;
}

bool is_id(const Mat& m) { return m == ident(m.size()); }

bool positive_definite(QMat a) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rational f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return true;
}

Rational qform(const QMat& q, const IntVector& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) s += Rational(v[i] * v[j]) * q[i][j];
  return s;
}

struct Context {
  std::size_t n;
  Mat t;
  Mat s;
  Mat s_inv;
  Integer bound;
};

Context make_context(const UnimodularMatrix& tm) {
  Context c;
  c.n = tm.dim();
  c.t = to_mat(tm.matrix());
  c.s = dual_of(c.t);
  c.s_inv = transpose(c.t);
  c.bound = order_bound(c.n);
  return c;
}

bool periodic(const Context& c, const IntVector& g) {
  return canon(mat_vec(mat_pow(c.s, c.bound), g)) == canon(g);
}

// Exact lower bound on |S^m g|^2 for all |m| > w from the listed certificates,
// or nullopt with a reason.
std::optional<Rational> exterior(const Context& c, const IntVector& g, long w,
                                 const std::vector<GrowthCertificate>& certs, std::string& why) {
  std::optional<Rational> fwd, bwd;
  auto raise = [](std::optional<Rational>& slot, const Rational& b) {
    if (!slot || b > *slot) slot = b;
  };
  for (const auto& cert : certs) {
    if (const auto* lin = std::get_if<LinearCertificate>(&cert)) {
      const IntVector& f = lin->functional;
      if (f.size() != c.n || sq(f) == 0 || (lin->sign != 1 && lin->sign != -1)) {
        why = "malformed linear certificate";
        return std::nullopt;
      }
      Mat a = c.s;
      for (auto& row : a)
        for (auto& x : row) x *= lin->sign;
      Mat at = transpose(a);
      for (std::size_t i = 0; i < c.n; ++i) at[i][i] -= 1;
      IntVector z = mat_vec(at, mat_vec(at, f));
      if (sq(z) != 0) {
        why = "linear certificate functional is not in the generalised eigenspace";
        return std::nullopt;
      }
      IntVector ag = mat_vec(a, g);
      for (std::size_t i = 0; i < c.n; ++i) ag[i] -= g[i];
      Integer d = abs(dotp(f, ag));
      Integer lo = Integer(w + 1) * d - abs(dotp(f, g));
      if (d == 0 || lo <= 0) continue;
      Rational b(lo * lo, sq(f));
      b.canonicalize();
      raise(fwd, b);
      raise(bwd, b);
      continue;
    }
    const auto& ly = std::get<LyapunovCertificate>(cert);
    bool square = ly.form.size() == c.n;
    for (const auto& row : ly.form) square = square && row.size() == c.n;
    if (!square) {
      why = "cone form has the wrong shape";
      return std::nullopt;
    }
    if (ly.mu <= 1) {
      why = "cone certificate needs mu > 1";
      return std::nullopt;
    }
    const Mat& a = ly.direction == Direction::Forward ? c.s : c.s_inv;
    QMat res(c.n, std::vector<Rational>(c.n));
    for (std::size_t i = 0; i < c.n; ++i)
      for (std::size_t j = 0; j < c.n; ++j) {
        if (ly.form[i][j] != ly.form[j][i]) {
          why = "cone form is not symmetric";
          return std::nullopt;
        }
        Rational s = 0;
        for (std::size_t k = 0; k < c.n; ++k)
          for (std::size_t l = 0; l < c.n; ++l) s += Rational(a[k][i] * a[l][j]) * ly.form[k][l];
        res[i][j] = s - ly.mu * ly.form[i][j];
      }
    if (!positive_definite(res)) {
      why = "cone residual is not positive definite";
      return std::nullopt;
    }
    Rational lam = 0;
    for (const auto& row : ly.form) {
      Rational s = 0;
      for (const auto& x : row) s += abs(x);
      lam = std::max(lam, s);
    }
    IntVector v = g;
    for (long k = 0; k <= w; ++k) v = mat_vec(a, v);
    Rational q = qform(ly.form, v);
    if (q <= 0 || lam <= 0) continue;
    raise(ly.direction == Direction::Forward ? fwd : bwd, q / lam);
  }
  if (!fwd || !bwd) {
    why = "growth certificates do not bound both time directions";
    return std::nullopt;
  }
  return std::min(*fwd, *bwd);
}

std::string pair_name(std::size_t i, std::size_t j) {
  return "pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
}

struct MemberFacts {
  bool valid = false;
  IntVector gamma;
  bool periodic = false;
  std::vector<IntVector> cycle;                // periodic: S^k gamma, 0 <= k < p
  std::map<long, IntVector> window;            // injective: k -> canonical S^k gamma
  std::optional<Rational> bound;               // recomputed exterior bound
};

void check_members(const Context& c, const DisjointFamilyCertificate& cert, std::vector<MemberFacts>& facts,
                   VerificationResult& out) {
  const std::size_t m = cert.family.size();
  facts.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::string who = "member " + std::to_string(i);
    const Subtorus& h = cert.family[i];
    if (h.ambient_dim() != c.n || h.dim() + 1 != c.n) {
      out.fail(who + ": not a codimension-1 subtorus");
      continue;
    }
    IntVector nv = normal_of(h.lattice().basis(), c.n);
    if (content_of(nv) != 1) out.fail(who + ": lattice is not saturated");
    IntVector g = canon(nv);
    if (g != cert.covectors[i].values()) out.fail(who + ": listed covector does not annihilate the subtorus");
    facts[i].gamma = g;
    facts[i].valid = true;
    facts[i].periodic = periodic(c, g);

    const OrbitReport& rep = cert.reports[i];
    if (facts[i].periodic) {
      IntVector cur = g;
      Integer p = 0;
      do {
        facts[i].cycle.push_back(cur);
        cur = canon(mat_vec(c.s, cur));
        ++p;
      } while (cur != g && p <= c.bound);
      if (rep.status != OrbitStatus::Periodic || rep.period != p)
        out.fail(who + ": orbit report disagrees with the recomputed period " + to_string(p));
      if (rep.window.size() != facts[i].cycle.size()) {
        out.fail(who + ": periodic orbit report does not list the whole cycle");
      } else {
        for (std::size_t k = 0; k < rep.window.size(); ++k) {
          const auto& e = rep.window[k];
          if (e.exponent != static_cast<long>(k) || e.subtorus.dim() + 1 != c.n ||
              canon(normal_of(e.subtorus.lattice().basis(), c.n)) != facts[i].cycle[k]) {
            out.fail(who + ": cycle entry " + std::to_string(k) + " is wrong");
            break;
          }
        }
      }
      continue;
    }
    if (rep.status != OrbitStatus::Injective) out.fail(who + ": orbit is injective but reported periodic");
    const long w = rep.window_radius;
    if (w < 0 || rep.window.size() != static_cast<std::size_t>(2 * w + 1)) {
      out.fail(who + ": window does not cover exponents -w..w");
      continue;
    }
    IntVector fwd = g, bwd = g;
    facts[i].window[0] = g;
    for (long k = 1; k <= w; ++k) {
      fwd = mat_vec(c.s, fwd);
      bwd = mat_vec(c.s_inv, bwd);
      facts[i].window[k] = canon(fwd);
      facts[i].window[-k] = canon(bwd);
    }
    for (std::size_t k = 0; k < rep.window.size(); ++k) {
      const auto& e = rep.window[k];
      long expect = static_cast<long>(k) - w;
      if (e.exponent != expect || e.subtorus.dim() + 1 != c.n ||
          canon(normal_of(e.subtorus.lattice().basis(), c.n)) != facts[i].window[expect]) {
        out.fail(who + ": window entry at exponent " + std::to_string(expect) + " is wrong");
        break;
      }
    }
    if (rep.min_exterior_norm_sq) {
      std::string why;
      facts[i].bound = exterior(c, g, w, rep.growth, why);
      if (!facts[i].bound)
        out.fail(who + ": growth certificate rejected: " + why);
      else if (*facts[i].bound < *rep.min_exterior_norm_sq)
        out.fail(who + ": claimed exterior bound " + to_string(*rep.min_exterior_norm_sq) +
                 " exceeds the certified " + to_string(*facts[i].bound));
    }
  }
}

bool in_window(const MemberFacts& f, const IntVector& g) {
  for (const auto& [k, v] : f.window)
    if (v == g) return true;
  return false;
}

void check_pair(const Context& c, const DisjointFamilyCertificate& cert, const std::vector<MemberFacts>& facts,
                const PairEvidence& e, VerificationResult& out) {
  const std::size_t i = e.first, j = e.second;
  const std::string who = pair_name(i, j);
  const MemberFacts& a = facts[i];
  const MemberFacts& b = facts[j];
  switch (e.kind) {
    case PairEvidence::Kind::Periodic: {
      if (!a.periodic || !b.periodic) {
        out.fail(who + ": periodic evidence for a non-periodic member");
        return;
      }
      if (std::find(a.cycle.begin(), a.cycle.end(), b.gamma) != a.cycle.end())
        out.fail(who + ": member " + std::to_string(j) + " lies on the orbit of member " + std::to_string(i));
      return;
    }
    case PairEvidence::Kind::Invariant: {
      if (e.power < 1 || e.power > c.bound || e.functional.size() != c.n || sq(e.functional) == 0) {
        out.fail(who + ": malformed invariant evidence");
        return;
      }
      Mat tp = mat_pow(c.t, e.power);
      if (mat_vec(tp, e.functional) != e.functional) {
        out.fail(who + ": functional is not fixed by T^" + to_string(e.power));
        return;
      }
      const Integer target = abs(dotp(e.functional, b.gamma));
      IntVector cur = a.gamma;
      for (Integer r = 0; r < e.power; ++r) {
        if (abs(dotp(e.functional, cur)) == target) {
          out.fail(who + ": invariant values coincide at shift " + to_string(r));
          return;
        }
        cur = mat_vec(c.s, cur);
      }
      return;
    }
    case PairEvidence::Kind::Growth:
    case PairEvidence::Kind::WindowOnly: {
      if (a.periodic) {
        if (std::find(a.cycle.begin(), a.cycle.end(), b.gamma) != a.cycle.end())
          out.fail(who + ": member " + std::to_string(j) + " lies on the orbit of member " + std::to_string(i));
        return;
      }
      if (in_window(a, b.gamma)) {
        out.fail(who + ": member " + std::to_string(j) + " lies in the orbit window of member " + std::to_string(i));
        return;
      }
      if (e.kind == PairEvidence::Kind::WindowOnly) {
        if (cert.rigorous) out.fail(who + ": window-only evidence in a certificate marked rigorous");
        return;
      }
      if (!a.bound) {
        out.fail(who + ": growth evidence without a certified exterior bound for member " + std::to_string(i));
        return;
      }
      if (!(*a.bound > Rational(sq(b.gamma))))
        out.fail(who + ": exterior bound of member " + std::to_string(i) + " does not exceed |gamma_" +
                 std::to_string(j) + "|^2");
      return;
    }
  }
}

}  // namespace

VerificationResult verify(const DisjointFamilyCertificate& cert) {
  VerificationResult out;
  const Context c = make_context(cert.automorphism);
  if (laplace(c.t) * laplace(c.t) != 1) {
    out.fail("automorphism is not unimodular");
    return out;
  }
  const std::size_t m = cert.family.size();
  if (cert.covectors.size() != m || cert.reports.size() != m) {
    out.fail("member, covector and report lists differ in length");
    return out;
  }
  if (cert.complete != (m == cert.requested) || m > cert.requested)
    out.fail("completeness flag disagrees with the member count");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (cert.family[i] == cert.family[j])
        out.fail("members " + std::to_string(i) + " and " + std::to_string(j) + " coincide");

  std::vector<MemberFacts> facts;
  check_members(c, cert, facts, out);

  if (cert.induction_lattice) {
    for (std::size_t i = 0; i < m; ++i)
      if (facts[i].valid && !cert.induction_lattice->contains(facts[i].gamma))
        out.fail("member " + std::to_string(i) + " is outside the recorded induction lattice");
  }

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : cert.pairs) {
    if (e.first >= e.second || e.second >= m) {
      out.fail(pair_name(e.first, e.second) + ": indices out of range");
      continue;
    }
    if (!seen.insert({e.first, e.second}).second) out.fail(pair_name(e.first, e.second) + ": listed twice");
    if (!facts[e.first].valid || !facts[e.second].valid) continue;
    check_pair(c, cert, facts, e, out);
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (!seen.count({i, j})) out.fail(pair_name(i, j) + ": no disjointness evidence");
  return out;
}

VerificationResult verify(const NonExpansivityCertificate& cert) {
  VerificationResult out;
  const Context c = make_context(cert.automorphism);
  if (laplace(c.t) * laplace(c.t) != 1) {
    out.fail("automorphism is not unimodular");
    return out;
  }
  using B = NonExpansivityCertificate::Branch;
  if (cert.branch == B::FiniteOrder) {
    if (cert.order < 1 || cert.order > c.bound || !is_id(mat_pow(c.t, cert.order))) {
      out.fail("T^order is not the identity");
      return out;
    }
    for (Integer d = 1; d < cert.order; ++d)
      if (mpz_divisible_p(cert.order.get_mpz_t(), d.get_mpz_t()) && is_id(mat_pow(c.t, d)))
        out.fail("order is not minimal: T^" + to_string(d) + " = Id");
    if (cert.fixed.size() < 2) out.fail("fewer than two fixed subtori");
    const Mat tp = mat_pow(c.t, cert.order);
    for (std::size_t i = 0; i < cert.fixed.size(); ++i) {
      const Subtorus& h = cert.fixed[i];
      if (h.ambient_dim() != c.n || h.is_trivial() || h.is_full()) {
        out.fail("fixed subtorus " + std::to_string(i) + " is not proper");
        continue;
      }
      for (const auto& b : h.lattice().basis())
        if (!h.lattice().contains(mat_vec(tp, b))) out.fail("fixed subtorus " + std::to_string(i) + " moves under T^order");
      for (std::size_t j = i + 1; j < cert.fixed.size(); ++j)
        if (h == cert.fixed[j]) out.fail("fixed subtori " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    }
    return out;
  }
  if (cert.branch == B::InfinitelyManyOrbits) {
    if (is_id(mat_pow(c.t, c.bound))) out.fail("automorphism has finite order");
    if (!cert.family) {
      out.fail("missing disjoint family");
      return out;
    }
    const auto& fam = *cert.family;
    if (!(fam.automorphism == cert.automorphism)) out.fail("family is for a different automorphism");
    if (!fam.complete) out.fail("family is incomplete");
    if (!fam.rigorous) out.fail("family evidence is not rigorous");
    if (fam.family.size() != cert.refuted_orbit_bound + 1) out.fail("refuted orbit bound does not match the family size");
    if (cert.converges.size() != fam.family.size()) out.fail("convergence flags do not match the family");
    for (std::size_t i = 0; i < fam.covectors.size(); ++i) {
      if (periodic(c, fam.covectors[i].values())) out.fail("member " + std::to_string(i) + " has a periodic orbit");
      if (i < cert.converges.size() && !cert.converges[i])
        out.fail("member " + std::to_string(i) + " is not marked convergent");
    }
    auto inner = verify(fam);
    for (auto& f : inner.failures) out.fail("family: " + f);
    return out;
  }
  if (cert.family) {
    auto inner = verify(*cert.family);
    for (auto& f : inner.failures) out.fail("family: " + f);
  }
  return out;
}

VerificationResult verify(const DistalityVerdict& v, const UnimodularMatrix& t) {
  VerificationResult out;
  const Context c = make_context(t);
  const bool finite = is_id(mat_pow(c.t, c.bound));
  if (v.distal != finite) {
    out.fail(finite ? "automorphism has finite order but is reported non-distal"
                    : "automorphism has infinite order but is reported distal");
    return out;
  }
  if (finite) {
    if (!v.order || *v.order < 1 || !is_id(mat_pow(c.t, *v.order))) {
      out.fail("reported order does not give the identity");
      return out;
    }
    for (Integer d = 1; d < *v.order; ++d)
      if (mpz_divisible_p(v.order->get_mpz_t(), d.get_mpz_t()) && is_id(mat_pow(c.t, d)))
        out.fail("order is not minimal: T^" + to_string(d) + " = Id");
    return out;
  }
  if (v.order) out.fail("infinite-order automorphism reported with a finite order");
  if (!v.witness || !v.witness_covector) {
    out.fail("non-distal verdict without a witness");
    return out;
  }
  if (v.witness->ambient_dim() != c.n || v.witness->dim() + 1 != c.n) {
    out.fail("witness is not a codimension-1 subtorus");
    return out;
  }
  IntVector g = canon(normal_of(v.witness->lattice().basis(), c.n));
  if (g != v.witness_covector->values()) out.fail("witness covector does not annihilate the witness");
  if (periodic(c, g)) out.fail("witness orbit is periodic");
  if (!v.witness_converges) out.fail("witness not marked convergent");
  return out;
}

}  // namespace toral
