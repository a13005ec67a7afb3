#pragma once

// Exact rational scalar type used throughout: GMP's canonical mpq wrapped with
// the few helpers the algorithms need (parsing, printing, floor/ceil, lcm of
// denominators). All arithmetic results of mpq_class are already in lowest
// terms; only direct num/den construction needs an explicit canonicalize().

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace capkc {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int floor_rat(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Int ceil_rat(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

// "p/q" in lowest terms; plain "p" when the denominator is 1.
inline std::string rat_str(const Rat& r) {
  if (is_integer(r)) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// Accepts "p" or "p/q" with optional leading minus; rejects anything else
// (including q = 0) so callers can attach their own diagnostics.
inline std::optional<Rat> parse_rat(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::string num = s, den = "1";
  if (auto slash = s.find('/'); slash != std::string::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
    if (num.empty() || den.empty() || den.find('/') != std::string::npos)
      return std::nullopt;
  }
  auto digits_ok = [](const std::string& t, bool sign_ok) {
    std::size_t i = (sign_ok && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  if (!digits_ok(num, true) || !digits_ok(den, false)) return std::nullopt;
  if (num[0] == '+') num.erase(0, 1);  // mpz_class rejects an explicit plus sign
  Int n(num), d(den);
  if (d == 0) return std::nullopt;
  Rat r;
  mpq_set_num(r.get_mpq_t(), n.get_mpz_t());
  mpq_set_den(r.get_mpq_t(), d.get_mpz_t());
  r.canonicalize();
  return r;
}

inline Int lcm_int(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// Least common multiple of the denominators; 1 for an empty list. Used to
// scale rational supplies/demands to integers before max-flow.
inline Int lcm_denominators(const std::vector<Rat>& vals) {
  Int l = 1;
  for (const Rat& v : vals) l = lcm_int(l, v.get_den());
  return l;
}

// Exact product r * scale for an integer scale known to clear r's
// denominator; checked, so scaling bugs surface immediately.
inline Int scale_to_int(const Rat& r, const Int& scale) {
  Rat s = r * Rat(scale);
  if (s.get_den() != 1) throw std::invalid_argument("scale does not clear denominator");
  return s.get_num();
}

}  // namespace capkc
