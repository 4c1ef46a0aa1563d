#include "toral/polynomial.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>

#include "toral/errors.hpp"

namespace toral {

IntPolynomial::IntPolynomial(std::vector<Integer> ascending) : c_(std::move(ascending)) { trim(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> ascending) {
  for (long x : ascending) c_.emplace_back(x);
  trim();
}

IntPolynomial IntPolynomial::monomial(std::size_t degree, Integer coeff) {
  std::vector<Integer> c(degree + 1);
  c[degree] = std::move(coeff);
  return IntPolynomial(std::move(c));
}

void IntPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Integer IntPolynomial::evaluate(const Integer& x) const {
  Integer acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

IntMatrix IntPolynomial::evaluate(const IntMatrix& m) const {
  const std::size_t n = m.rows();
  IntMatrix acc(n, n);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * m;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += *it;
  }
  return acc;
}

IntPolynomial IntPolynomial::negated() const {
  auto c = c_;
  for (auto& x : c) x = -x;
  return IntPolynomial(std::move(c));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Integer> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return IntPolynomial(std::move(c));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Integer> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
  return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) { return a + b.negated(); }

bool operator<(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return std::lexicographical_compare(a.c_.rbegin(), a.c_.rend(), b.c_.rbegin(), b.c_.rend());
}

std::string IntPolynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (long i = degree(); i >= 0; --i) {
    const Integer& a = c_[static_cast<std::size_t>(i)];
    if (a == 0) continue;
    Integer mag = abs(a);
    s += s.empty() ? (a < 0 ? "-" : "") : (a < 0 ? " - " : " + ");
    if (mag != 1 || i == 0) s += mag.get_str();
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

std::optional<IntPolynomial> divide_exact(const IntPolynomial& p, const IntPolynomial& divisor) {
  if (divisor.is_zero()) return std::nullopt;
  if (divisor.leading() != 1 && divisor.leading() != -1) return std::nullopt;
  if (p.is_zero()) return IntPolynomial{};
  if (p.degree() < divisor.degree()) return std::nullopt;
  std::vector<Integer> rem = p.coefficients();
  const auto& d = divisor.coefficients();
  const std::size_t dd = d.size() - 1;
  std::vector<Integer> q(rem.size() - dd);
  for (std::size_t k = q.size(); k-- > 0;) {
    Integer c = rem[k + dd] * divisor.leading();  // leading is +-1
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) rem[k + j] -= c * d[j];
  }
  for (const auto& r : rem)
    if (r != 0) return std::nullopt;
  return IntPolynomial(std::move(q));
}

IntPolynomial char_poly(const IntMatrix& a) {
  if (!a.is_square()) throw InputError(InputError::Kind::DimensionMismatch, "characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  std::vector<Integer> c(n + 1);
  c[n] = 1;
  IntMatrix m(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    IntMatrix am = a * m;
    Integer tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    Integer kk = static_cast<unsigned long>(k);
    mpz_divexact(tr.get_mpz_t(), tr.get_mpz_t(), kk.get_mpz_t());
    c[n - k] = -tr;
  }
  return IntPolynomial(std::move(c));
}

IntPolynomial char_poly(const UnimodularMatrix& t) { return char_poly(t.matrix()); }

unsigned long euler_phi(unsigned long m) {
  unsigned long result = m;
  for (unsigned long p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

IntPolynomial cyclotomic(unsigned long m) {
  if (m == 0) throw InputError(InputError::Kind::Precondition, "cyclotomic order must be positive");
  static std::mutex mu;
  static std::map<unsigned long, IntPolynomial> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
  }
  IntPolynomial p = IntPolynomial::monomial(m) - IntPolynomial{1};
  for (unsigned long d = 1; d < m; ++d)
    if (m % d == 0) p = *divide_exact(p, cyclotomic(d));
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(m, p);
  return p;
}

std::vector<unsigned long> cyclotomic_orders_up_to_degree(std::size_t max_degree) {
  // phi(m) >= sqrt(m / 2), so m <= 2 D^2 covers every order of degree <= D.
  std::vector<unsigned long> out;
  const unsigned long bound = 2UL * max_degree * max_degree + 2;
  for (unsigned long m = 1; m <= bound; ++m)
    if (euler_phi(m) <= max_degree) out.push_back(m);
  return out;
}

std::optional<unsigned long> cyclotomic_order(const IntPolynomial& p) {
  if (p.degree() < 1) return std::nullopt;
  const auto d = static_cast<std::size_t>(p.degree());
  for (unsigned long m : cyclotomic_orders_up_to_degree(d))
    if (euler_phi(m) == d && cyclotomic(m) == p) return m;
  return std::nullopt;
}

namespace {

// --- integer factorisation for Kronecker's divisor enumeration ---

Integer pollard_brent(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 64;
    auto f = [&](const Integer& v) {
      Integer w = v * v + c;
      mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
      return w;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = q * abs(x - y);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        g = gcd(q, n);
        k += m;
      }
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(Integer n, std::map<Integer, unsigned>& out) {
  if (n < 2) return;
  for (unsigned long p = 2; p < 1000 && Integer(p) * p <= n; ++p) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++out[Integer(p)];
      n /= p;
    }
  }
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
    ++out[n];
    return;
  }
  Integer d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

std::vector<Integer> positive_divisors(const Integer& n) {
  std::map<Integer, unsigned> f;
  factor_into(abs(n), f);
  std::vector<Integer> divs{1};
  for (const auto& [p, e] : f) {
    const std::size_t base = divs.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Monic factor of exact degree d of the monic polynomial f, found by Kronecker
// interpolation; f must have no linear factors left.
std::optional<IntPolynomial> kronecker_factor(const IntPolynomial& f, std::size_t d) {
  struct Point {
    Integer a;
    Integer value;
    std::vector<Integer> divisors;
  };
  std::vector<Point> pts;
  for (long k = 0; pts.size() < 2 * d + 3; ++k) {
    for (long a : {k, -k}) {
      if (k == 0 && a != 0) continue;
      Integer v = f.evaluate(Integer(a));
      if (v == 0) continue;
      pts.push_back({Integer(a), v, {}});
      if (k == 0) break;
    }
  }
  for (auto& p : pts) p.divisors = positive_divisors(p.value);
  std::stable_sort(pts.begin(), pts.end(),
                   [](const Point& x, const Point& y) { return x.divisors.size() < y.divisors.size(); });
  std::vector<Point> interp(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(d));
  std::vector<Point> checks(pts.begin() + static_cast<std::ptrdiff_t>(d), pts.end());

  // Inverse Vandermonde for the d unknown lower coefficients of a monic g.
  std::vector<std::vector<Rational>> a(d, std::vector<Rational>(2 * d));
  for (std::size_t i = 0; i < d; ++i) {
    Rational pw = 1;
    for (std::size_t k = 0; k < d; ++k) {
      a[i][k] = pw;
      pw *= Rational(interp[i].a);
    }
    a[i][d + i] = 1;
  }
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (a[p][c] == 0) ++p;
    std::swap(a[p], a[c]);
    Rational inv = 1 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (std::size_t i = 0; i < d; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational fct = a[i][c];
      for (std::size_t j = 0; j < 2 * d; ++j) a[i][j] -= fct * a[c][j];
    }
  }
  std::vector<Integer> lead_term(d);
  for (std::size_t i = 0; i < d; ++i) {
    Integer pw;
    mpz_pow_ui(pw.get_mpz_t(), interp[i].a.get_mpz_t(), d);
    lead_term[i] = pw;
  }

  Integer fnorm2 = 0;
  for (const auto& c : f.coefficients()) fnorm2 += c * c;
  Integer fnorm;
  mpz_sqrt(fnorm.get_mpz_t(), fnorm2.get_mpz_t());
  fnorm += 1;

  std::vector<Integer> values(d);
  std::optional<IntPolynomial> found;
  std::function<void(std::size_t)> search = [&](std::size_t i) {
    if (found) return;
    if (i == d) {
      std::vector<Integer> coeffs(d + 1);
      coeffs[d] = 1;
      for (std::size_t k = 0; k < d; ++k) {
        Rational s = 0;
        for (std::size_t j = 0; j < d; ++j) s += a[k][d + j] * Rational(values[j] - lead_term[j]);
        if (s.get_den() != 1) return;
        // Mignotte bound on factor coefficients.
        if (abs(s.get_num()) > binomial(d, k) * fnorm) return;
        coeffs[k] = s.get_num();
      }
      IntPolynomial g(std::move(coeffs));
      for (const auto& c : checks) {
        Integer gv = g.evaluate(c.a);
        if (gv == 0 || !mpz_divisible_p(c.value.get_mpz_t(), gv.get_mpz_t())) return;
      }
      if (divide_exact(f, g)) found = g;
      return;
    }
    for (const auto& dv : interp[i].divisors) {
      for (int sgn : {1, -1}) {
        values[i] = sgn * dv;
        search(i + 1);
        if (found) return;
      }
    }
  };
  search(0);
  return found;
}

}  // namespace

std::vector<Factor> rational_factors(const IntPolynomial& p) {
  if (p.degree() < 1) throw InputError(InputError::Kind::Precondition, "factorisation needs degree >= 1");
  if (p.leading() != 1 && p.leading() != -1)
    throw InputError(InputError::Kind::Precondition, "factorisation expects a polynomial that is monic up to sign");
  IntPolynomial f = p.leading() == 1 ? p : p.negated();
  std::map<IntPolynomial, std::size_t> found;

  auto strip = [&](const IntPolynomial& g) {
    while (f.degree() >= g.degree()) {
      auto q = divide_exact(f, g);
      if (!q) break;
      f = std::move(*q);
      ++found[g];
    }
  };

  strip(IntPolynomial{0, 1});
  for (unsigned long m : cyclotomic_orders_up_to_degree(static_cast<std::size_t>(f.degree()))) {
    if (f.degree() < 1) break;
    strip(cyclotomic(m));
  }
  if (f.degree() >= 1) {
    for (const auto& r : positive_divisors(f.coeff(0))) {
      strip(IntPolynomial{std::vector<Integer>{-r, 1}});
      strip(IntPolynomial{std::vector<Integer>{r, 1}});
    }
  }
  for (std::size_t d = 2; f.degree() >= static_cast<long>(2 * d); ++d) {
    while (f.degree() >= static_cast<long>(2 * d)) {
      auto g = kronecker_factor(f, d);
      if (!g) break;
      strip(*g);
    }
  }
  if (f.degree() >= 1) ++found[f];

  std::vector<Factor> out;
  for (auto& [poly, mult] : found) out.push_back({poly, mult});
  return out;
}

CyclotomicVerdict is_product_of_cyclotomics(const IntPolynomial& p) {
  CyclotomicVerdict v;
  v.all_cyclotomic = true;
  for (const auto& f : rational_factors(p)) {
    auto m = cyclotomic_order(f.poly);
    if (!m) {
      v.all_cyclotomic = false;
      if (!v.refusal) v.refusal = f.poly;
      continue;
    }
    for (std::size_t i = 0; i < f.multiplicity; ++i) v.orders.push_back(*m);
  }
  std::sort(v.orders.begin(), v.orders.end());
  return v;
}

Integer cyclotomic_lcm(const IntPolynomial& p) {
  Integer l = 1;
  if (p.degree() < 1) return l;
  for (unsigned long m : cyclotomic_orders_up_to_degree(static_cast<std::size_t>(p.degree())))
    if (divide_exact(p, cyclotomic(m))) l = lcm(l, Integer(m));
  return l;
}

Integer finite_order_exponent_bound(std::size_t n) {
  Integer l = 1;
  for (unsigned long m : cyclotomic_orders_up_to_degree(n)) l = lcm(l, Integer(m));
  return l;
}

std::optional<Integer> matrix_order(const UnimodularMatrix& t) {
  IntPolynomial f = char_poly(t);
  Integer candidate = 1;
  for (unsigned long m : cyclotomic_orders_up_to_degree(t.dim())) {
    const IntPolynomial phi = cyclotomic(m);
    bool divides = false;
    while (f.degree() >= phi.degree()) {
      auto q = divide_exact(f, phi);
      if (!q) break;
      f = std::move(*q);
      divides = true;
    }
    if (divides) candidate = lcm(candidate, Integer(m));
  }
  if (f.degree() > 0) return std::nullopt;
  if (!power(t.matrix(), candidate).is_identity()) return std::nullopt;
  // Strip prime factors while the power stays the identity.
  std::map<Integer, unsigned> primes;
  factor_into(candidate, primes);
  for (const auto& [q, e] : primes) {
    for (unsigned k = 0; k < e; ++k) {
      if (!mpz_divisible_p(candidate.get_mpz_t(), q.get_mpz_t())) break;
      Integer smaller = candidate / q;
      if (!power(t.matrix(), smaller).is_identity()) break;
      candidate = smaller;
    }
  }
  return candidate;
}

}  // namespace toral
