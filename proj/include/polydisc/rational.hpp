#pragma once

// Exact arithmetic scalar types used throughout the library. Everything is
// GMP-backed; no floating point appears anywhere in the computational core.

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polydisc {

namespace mp = boost::multiprecision;

using Int = mp::number<mp::gmp_int, mp::et_off>;
using Rat = mp::number<mp::gmp_rational, mp::et_off>;

using Vec = std::vector<Rat>;     // point or covector, exact rational
using IntVec = std::vector<Int>;  // lattice vector

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

inline Int int_gcd(const Int& a, const Int& b) { return gcd(a, b); }
inline Int int_lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a * b) / gcd(a, b);
}

inline Int factorial(int n) {
  Int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int b = 1;
  for (int i = 0; i < k; ++i) { b *= (n - i); b /= (i + 1); }
  return b;
}

// "p/q" (or plain "p") with q > 0; used by all JSON codecs.
inline std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << rat_num(r);
  if (rat_den(r) != 1) os << '/' << rat_den(r);
  return os.str();
}

inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num) / Rat(den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
}

inline Rat dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
  Vec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline Vec vec_scale(const Vec& a, const Rat& c) {
  Vec r(a);
  for (auto& x : r) x *= c;
  return r;
}

inline bool is_zero(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; });
}

inline bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Primitive integer representative of the ray through a rational vector.
// Positive scaling only; the zero vector maps to itself.
inline IntVec primitive(const Vec& v) {
  Int l = 1;
  for (const auto& x : v) l = int_lcm(l == 0 ? Int(1) : l, rat_den(x));
  if (l == 0) l = 1;
  IntVec w(v.size());
  Int g = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    w[i] = rat_num(v[i]) * (l / rat_den(v[i]));
    g = int_gcd(g, w[i]);
  }
  if (g > 1)
    for (auto& x : w) x /= g;
  return w;
}

inline Vec to_rat(const IntVec& v) {
  Vec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

// Library errors ------------------------------------------------------------

// Violated mathematical precondition (bad input for the requested operation).
struct MathError : std::runtime_error {
  std::string code;
  MathError(std::string c, const std::string& msg)
      : std::runtime_error(msg), code(std::move(c)) {}
};

// Broken internal invariant; indicates a defect, not a user error.
struct InternalDefect : std::logic_error {
  using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& code, const std::string& msg) {
  if (!cond) throw MathError(code, msg);
}

inline void check_defect(bool cond, const std::string& msg) {
  if (!cond) throw InternalDefect(msg);
}

}  // namespace polydisc
