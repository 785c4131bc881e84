#pragma once

// Verification layer over Weil spectra: the V element, the V_1 congruence,
// power moments, and the structure checks for three-valued spectra.

#include "weilsum/cyclotomic.hpp"
#include "weilsum/finite_field.hpp"
#include "weilsum/group_algebra.hpp"
#include "weilsum/weil_engine.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace weilsum {

struct CheckResult {
  bool pass = true;
  std::string witness;

  static CheckResult ok(std::string note = {}) { return {true, std::move(note)}; }
  static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

/// Named check outcomes; ordered so serialized output is deterministic.
using CheckMap = std::map<std::string, CheckResult>;

inline bool all_pass(const CheckMap& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second.pass; });
}

/// Raised when a statement the engine relies on as a theorem is contradicted.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// V element

/// counts[i] = #{v in F : v^d + (1-v)^d = (g^i)^d}.
struct VVector {
  FieldSpec field;
  std::uint64_t d = 1;
  std::vector<std::uint64_t> counts;

  std::uint64_t v1() const { return counts.at(0); }
  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (auto c : counts) s += c;
    return s;
  }
  BigInt sum_of_squares() const {
    BigInt s = 0;
    for (auto c : counts) s += BigInt(c) * c;
    return s;
  }
};

inline VVector v_vector(const FieldTables& f, std::int64_t d) {
  require_valid_exponent(f, d);
  const std::uint64_t m = f.group_order();
  const std::uint64_t dinv = inverse_exponent(d, m);
  VVector v{f.spec(), static_cast<std::uint64_t>(d), std::vector<std::uint64_t>(m, 0)};
  for (std::uint32_t code = 0; code < f.order(); ++code) {
    const FieldElement x{code};
    const FieldElement y = f.sub(f.one(), x);
    const FieldElement xd = code == 0 ? f.zero() : f.pow(x, d);
    const FieldElement yd = y.code == 0 ? f.zero() : f.pow(y, d);
    const FieldElement s = f.add(xd, yd);
    if (s.code == 0)
      throw InvariantViolation("v^d + (1-v)^d = 0 at v = " + std::to_string(code) + " for d = " +
                               std::to_string(d));
    ++v.counts[(std::uint64_t{f.log(s)} * dinv) % m];
  }
  return v;
}

inline GAElem lift(const FieldPtr& field, const VVector& v) {
  return GAElem::from_integers<std::uint64_t>(field, v.counts);
}

/// X = sum_u W_u^2 [u].
inline GAElem x_element(const GAElem& w) {
  GAElem x(w.field_ptr());
  for (std::size_t i = 0; i < w.size(); ++i) x[i] = w[i] * w[i];
  return x;
}

/// X == W V, coefficient by coefficient.
inline CheckResult check_ursula(const FieldPtr& field, const GAElem& w, const VVector& v) {
  const GAElem x = x_element(w);
  const GAElem wv = convolve(w, lift(field, v));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] == wv[i]))
      return CheckResult::fail("X != WV at index " + std::to_string(i) + ": X=" + x[i].to_string() +
                               " WV=" + wv[i].to_string());
  }
  return CheckResult::ok();
}

inline CheckResult check_ursula(const FieldPtr& field, std::int64_t d) {
  return check_ursula(field, GAElem(field, weil_values(field, d, Method::automatic)), v_vector(*field, d));
}

// ---------------------------------------------------------------------------
// V_1 congruence

struct CongruencePrediction {
  unsigned residue = 0;  // expected V_1 mod 6
  std::string branch;    // "i", "ii_a", "ii_b", "iii_a", "iii_b"
};

/// The residue of V_1 mod 6 predicted from q mod 3 and whether 2^(d-1) = 1 in F.
/// In characteristic 2 the element 2 is 0, so the "2^(d-1) != 1" branch applies.
inline CongruencePrediction v1_congruence_expected(const FieldTables& f, std::int64_t d) {
  require_valid_exponent(f, d);
  const std::uint64_t q = f.order();
  if (q % 3 == 0) return {3, "i"};
  bool two_pow_is_one = false;
  if (f.p() != 2) two_pow_is_one = f.pow(f.from_integer(2), d - 1) == f.one();
  if (q % 3 == 1) return two_pow_is_one ? CongruencePrediction{1, "ii_a"} : CongruencePrediction{4, "ii_b"};
  return two_pow_is_one ? CongruencePrediction{5, "iii_a"} : CongruencePrediction{2, "iii_b"};
}

inline CheckResult check_barbara(const FieldTables& f, std::int64_t d, const VVector& v) {
  const auto pred = v1_congruence_expected(f, d);
  const auto got = v.v1() % 6;
  if (got != pred.residue)
    return CheckResult::fail("V_1 = " + std::to_string(v.v1()) + " == " + std::to_string(got) +
                             " (mod 6), expected " + std::to_string(pred.residue) + " [branch " + pred.branch +
                             "]");
  return CheckResult::ok("V_1 = " + std::to_string(v.v1()) + ", branch " + pred.branch);
}

// ---------------------------------------------------------------------------
// Orbits of the roots of X^d + (1-X)^d - 1 under x -> 1-x and x -> 1/x

struct OrbitReport {
  std::vector<std::uint32_t> roots;                 // codes of roots in F \ {0, 1}
  std::vector<std::vector<std::uint32_t>> orbits;   // each sorted, ordered by smallest member
  std::map<std::string, std::vector<std::uint32_t>> special;  // "-1", "2", "1/2", "phi6" -> codes present
  CheckResult result;

  std::vector<std::size_t> orbit_sizes() const {
    std::vector<std::size_t> s;
    for (const auto& o : orbits) s.push_back(o.size());
    return s;
  }
};

inline OrbitReport orbit_decomposition(const FieldTables& f, std::int64_t d) {
  require_valid_exponent(f, d);
  const FieldElement zero = f.zero(), one = f.one();
  auto is_root = [&](FieldElement x) {
    const FieldElement y = f.sub(one, x);
    const FieldElement xd = x.code == 0 ? zero : f.pow(x, d);
    const FieldElement yd = y.code == 0 ? zero : f.pow(y, d);
    return f.sub(f.add(xd, yd), one) == zero;
  };
  auto sigma = [&](FieldElement x) { return f.sub(one, x); };
  auto tau = [&](FieldElement x) { return f.inv(x); };
  auto interior = [&](FieldElement x) { return x != zero && x != one; };

  OrbitReport r;
  std::set<std::uint32_t> root_set;
  for (std::uint32_t c = 2; c < f.order(); ++c)
    if (is_root({c})) root_set.insert(c);
  r.roots.assign(root_set.begin(), root_set.end());

  // Special points: the only elements of F \ {0,1} with a nontrivial stabilizer.
  std::set<std::uint32_t> special_set;
  auto note = [&](const std::string& name, FieldElement x) {
    if (!interior(x)) return;
    auto& v = r.special[name];
    if (std::find(v.begin(), v.end(), x.code) == v.end()) v.push_back(x.code);
    special_set.insert(x.code);
  };
  note("-1", f.neg(one));
  note("2", f.from_integer(2));
  if (f.p() != 2) note("1/2", f.inv(f.from_integer(2)));
  for (std::uint32_t c = 0; c < f.order(); ++c) {
    const FieldElement x{c};
    if (f.add(f.sub(f.mul(x, x), x), one) == zero) note("phi6", x);
  }

  std::set<std::uint32_t> seen;
  std::ostringstream problems;
  for (auto c : r.roots) {
    if (seen.count(c)) continue;
    std::vector<std::uint32_t> orbit{c}, frontier{c};
    seen.insert(c);
    while (!frontier.empty()) {
      const FieldElement x{frontier.back()};
      frontier.pop_back();
      for (FieldElement y : {sigma(x), tau(x)}) {
        if (!root_set.count(y.code)) problems << "image " << y.code << " of root " << x.code << " is not a root; ";
        if (seen.insert(y.code).second) {
          orbit.push_back(y.code);
          frontier.push_back(y.code);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    const auto size = orbit.size();
    if (6 % size != 0) problems << "orbit of size " << size << " at " << c << "; ";
    if (size != 6)
      for (auto e : orbit)
        if (!special_set.count(e)) problems << "non-special point " << e << " in orbit of size " << size << "; ";
    r.orbits.push_back(std::move(orbit));
  }

  // Special points that must be roots.
  if (f.p() == 3 && !root_set.count(f.neg(one).code)) problems << "-1 is not a root in characteristic 3; ";
  if (f.p() != 3 && f.order() % 3 == 1)
    for (auto c : r.special["phi6"])
      if (!root_set.count(c)) problems << "root " << c << " of X^2-X+1 is not a root of f; ";
  if (f.p() >= 5) {
    const bool two_pow_is_one = f.pow(f.from_integer(2), d - 1) == one;
    for (const char* name : {"-1", "2", "1/2"})
      for (auto c : r.special[name])
        if (root_set.count(c) != static_cast<std::size_t>(two_pow_is_one))
          problems << name << " root status disagrees with 2^(d-1) = 1; ";
  }

  const std::string text = problems.str();
  r.result = text.empty() ? CheckResult::ok(std::to_string(r.roots.size()) + " roots in " +
                                            std::to_string(r.orbits.size()) + " orbits")
                          : CheckResult::fail(text);
  return r;
}

// ---------------------------------------------------------------------------
// Moments and spectrum-level checks

inline BigInt big_pow(const BigInt& x, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) r *= x;
  return r;
}

/// sum_u W_u^k for a three-valued spectrum {0, a, b}:
/// (q^2 (a^(k-1) - b^(k-1)) - q a b (a^(k-2) - b^(k-2))) / (a - b).
inline BigInt predicted_moment(const BigInt& a, const BigInt& b, const BigInt& q, unsigned k) {
  if (k < 1) throw std::invalid_argument("predicted_moment: k must be positive");
  if (a == b) throw std::invalid_argument("predicted_moment: a == b");
  BigInt num;
  if (k == 1) {
    // a^(-1) - b^(-1) = (b - a) / (ab), so the second term is -q (b - a).
    num = q * (a - b);
  } else {
    num = q * q * (big_pow(a, k - 1) - big_pow(b, k - 1)) - q * a * b * (big_pow(a, k - 2) - big_pow(b, k - 2));
  }
  const BigInt den = a - b;
  if (num % den != 0) throw InvariantViolation("predicted_moment: inexact division by a - b");
  return num / den;
}

inline CheckResult check_gloria(const WeilSpectrum& s) {
  for (const auto& e : s.entries) {
    const auto v = valuation_p(e.value);
    if (v.compare(0, 1) != std::strong_ordering::greater)
      return CheckResult::fail("v_p(" + e.value.to_string() + ") = " + v.to_string());
  }
  return CheckResult::ok();
}

/// Nondegenerate spectra take at least three values; degenerate ones are {q x1, 0 x(q-2)}.
inline CheckResult check_value_count(const WeilSpectrum& s) {
  const std::uint64_t q = s.field.order();
  const std::uint32_t p = s.field.p;
  if (s.degenerate) {
    std::vector<CycInt> vals(q - 1, CycInt(p));
    vals[0] = CycInt(p, BigInt(q));
    const auto ref = make_spectrum(s.field, s.d, vals);
    if (ref.entries != s.entries) return CheckResult::fail("degenerate spectrum is not {q, 0}");
    return CheckResult::ok("degenerate");
  }
  if (s.value_count() < 3)
    return CheckResult::fail("nondegenerate spectrum with " + std::to_string(s.value_count()) + " values");
  return CheckResult::ok(std::to_string(s.value_count()) + "-valued");
}

/// The first four power moments: q, q^2, q^2 V_1, q^2 sum V_u^2.
inline CheckResult check_orestes(const WeilSpectrum& s, const VVector& v) {
  const std::uint32_t p = s.field.p;
  const BigInt q = s.field.order();
  const CycInt expected[4] = {CycInt(p, q), CycInt(p, q * q), CycInt(p, q * q * v.v1()),
                              CycInt(p, q * q * v.sum_of_squares())};
  for (unsigned k = 1; k <= 4; ++k) {
    const CycInt got = s.moment(k);
    if (!(got == expected[k - 1]))
      return CheckResult::fail("moment " + std::to_string(k) + " = " + got.to_string() + ", expected " +
                               expected[k - 1].to_string());
  }
  return CheckResult::ok();
}

// ---------------------------------------------------------------------------
// Three-valued spectra

enum class CelineCase { case_i, case_ii };

inline std::string to_string(CelineCase c) { return c == CelineCase::case_i ? "case_i" : "case_ii"; }

struct ThreeValuedReport {
  FieldSpec field;
  std::uint64_t d = 1;
  BigInt a, b;  // a > 0 > b
  std::uint64_t mult_a = 0, mult_b = 0, mult_zero = 0;
  ValuationQ val_a{2, std::nullopt}, val_b{2, std::nullopt};
  std::optional<CelineCase> celine_case;
  CheckMap checks;

  std::uint32_t p() const { return field.p; }
  unsigned n() const { return field.n; }
  BigInt q() const { return BigInt(field.order()); }
};

/// Integer values, one of them 0, and d == 1 (mod p - 1).
inline CheckResult check_imogene(const WeilSpectrum& s) {
  if (!s.three_valued()) return CheckResult::fail("spectrum is not three-valued");
  bool has_zero = false;
  for (const auto& e : s.entries) {
    const auto k = e.value.as_integer();
    if (!k) return CheckResult::fail("value " + e.value.to_string() + " is not a rational integer");
    if (k->is_zero()) has_zero = true;
  }
  if (!has_zero) return CheckResult::fail("no value equals 0");
  const std::uint64_t pm1 = s.field.p - 1;
  if (s.d % pm1 != 1 % pm1)
    return CheckResult::fail("d = " + std::to_string(s.d) + " is not 1 mod " + std::to_string(pm1));
  return CheckResult::ok();
}

/// Builds the (a, b) report. Throws if the spectrum does not have the shape
/// {0, a, b} with integer a > 0 > b.
inline ThreeValuedReport make_three_valued_report(const WeilSpectrum& s) {
  const auto imogene = check_imogene(s);
  if (!imogene.pass) throw std::invalid_argument("not a three-valued integer spectrum: " + imogene.witness);
  ThreeValuedReport r;
  r.field = s.field;
  r.d = s.d;
  std::optional<BigInt> pos, neg;
  for (const auto& e : s.entries) {
    const BigInt k = *e.value.as_integer();
    if (k > 0) {
      pos = k;
      r.mult_a = e.multiplicity;
    } else if (k < 0) {
      neg = k;
      r.mult_b = e.multiplicity;
    } else {
      r.mult_zero = e.multiplicity;
    }
  }
  if (!pos || !neg) throw std::invalid_argument("nonzero values do not have opposite signs");
  r.a = *pos;
  r.b = *neg;
  r.val_a = valuation_p(CycInt(s.field.p, r.a));
  r.val_b = valuation_p(CycInt(s.field.p, r.b));
  r.checks["imogene"] = imogene;
  return r;
}

/// Closed-form moments against the exact spectrum for k = 1..max_k.
inline CheckResult check_theresa(const ThreeValuedReport& r, const WeilSpectrum& s, unsigned max_k = 6) {
  for (unsigned k = 1; k <= max_k; ++k) {
    const CycInt got = s.moment(k);
    const BigInt want = predicted_moment(r.a, r.b, r.q(), k);
    if (!(got == CycInt(r.p(), want)))
      return CheckResult::fail("k=" + std::to_string(k) + ": moment " + got.to_string() + " vs closed form " +
                               want.str());
  }
  return CheckResult::ok("k=1.." + std::to_string(max_k));
}

/// V_1 = a + b - ab/q, and v_p(ab) >= v_p(q) (strict for p = 2, 3).
inline CheckResult victor_check(const ThreeValuedReport& r, std::uint64_t v1) {
  const BigInt q = r.q();
  const BigInt ab = r.a * r.b;
  if (ab % q != 0) return CheckResult::fail("ab/q not integral: ab = " + ab.str());
  const BigInt rhs = r.a + r.b - ab / q;
  if (rhs != v1) return CheckResult::fail("V_1 = " + std::to_string(v1) + " but a + b - ab/q = " + rhs.str());
  const auto vab = int_valuation(ab, r.p());
  if (vab < r.n()) return CheckResult::fail("v_p(ab) = " + std::to_string(vab) + " < n");
  if ((r.p() == 2 || r.p() == 3) && vab == r.n())
    return CheckResult::fail("v_p(ab) = n, strict inequality required for p = " + std::to_string(r.p()));
  return CheckResult::ok("V_1 = " + std::to_string(v1) + ", v_p(ab) = " + std::to_string(vab));
}

/// sum_{u != 1} V_u = (q-a)(q-b)/q and sum_{u != 1} V_u^2 = -ab(q-a)(q-b)/q^2, both positive.
inline CheckResult wilbur_check(const ThreeValuedReport& r, const VVector& v) {
  const BigInt q = r.q();
  if (!(abs(r.a) < q && abs(r.b) < q)) return CheckResult::fail("|a| or |b| is not below q");
  BigInt s1 = 0, s2 = 0;
  for (std::size_t i = 1; i < v.counts.size(); ++i) {
    s1 += v.counts[i];
    s2 += BigInt(v.counts[i]) * v.counts[i];
  }
  const BigInt prod = (q - r.a) * (q - r.b);
  if (s1 * q != prod) return CheckResult::fail("sum V_u = " + s1.str() + " but (q-a)(q-b)/q = " + prod.str() + "/q");
  if (s2 * q * q != -r.a * r.b * prod)
    return CheckResult::fail("sum V_u^2 = " + s2.str() + " but -ab(q-a)(q-b)/q^2 differs");
  if (s1 <= 0 || s2 <= 0) return CheckResult::fail("sums are not positive");
  return CheckResult::ok("sum V_u = " + s1.str() + ", sum V_u^2 = " + s2.str());
}

/// a_o, b_o, (a-b)_o pairwise coprime and a_o b_o (a-b)_o | V_u for u != 1.
inline CheckResult zachary_check(const ThreeValuedReport& r, const VVector& v) {
  const auto pa = p_decompose(r.a, r.p());
  const auto pb = p_decompose(r.b, r.p());
  const auto pd = p_decompose(r.a - r.b, r.p());
  if (gcd(pa.odd_part, pb.odd_part) != 1 || gcd(pa.odd_part, pd.odd_part) != 1 ||
      gcd(pb.odd_part, pd.odd_part) != 1)
    return CheckResult::fail("odd parts not pairwise coprime: a_o=" + pa.odd_part.str() + " b_o=" +
                             pb.odd_part.str() + " (a-b)_o=" + pd.odd_part.str());
  const BigInt divisor = pa.odd_part * pb.odd_part * pd.odd_part;
  if (v.counts.size() != r.field.order() - 1) return CheckResult::fail("V vector has wrong length");
  for (std::size_t i = 1; i < v.counts.size(); ++i)
    if (BigInt(v.counts[i]) % divisor != 0)
      return CheckResult::fail("V at index " + std::to_string(i) + " = " + std::to_string(v.counts[i]) +
                               " not divisible by " + divisor.str());
  return CheckResult::ok("divisor " + divisor.str());
}

/// a_p b_p >= q (a-b)_o.
inline CheckResult alexandra_check(const ThreeValuedReport& r) {
  const auto pa = p_decompose(r.a, r.p());
  const auto pb = p_decompose(r.b, r.p());
  const auto pd = p_decompose(r.a - r.b, r.p());
  const BigInt lhs = pa.p_part * pb.p_part;
  const BigInt rhs = r.q() * pd.odd_part;
  if (lhs < rhs) return CheckResult::fail("a_p b_p = " + lhs.str() + " < q (a-b)_o = " + rhs.str());
  return CheckResult::ok(lhs.str() + " >= " + rhs.str());
}

inline std::string dump(const ThreeValuedReport& r, const VVector* v = nullptr) {
  std::ostringstream os;
  os << "p=" << r.p() << " n=" << r.n() << " d=" << r.d << " a=" << r.a << " (x" << r.mult_a << ", v_p "
     << r.val_a.to_string() << ") b=" << r.b << " (x" << r.mult_b << ", v_p " << r.val_b.to_string()
     << ") zero x" << r.mult_zero;
  if (v) {
    os << " V=[";
    for (std::size_t i = 0; i < v->counts.size(); ++i) os << (i ? "," : "") << v->counts[i];
    os << "]";
  }
  return os.str();
}

struct CelineOutcome {
  std::optional<CelineCase> kind;
  CheckResult result;     // the case split holds (and case ii is absent for p = 2, 3)
  CheckResult alexandra;
  CheckResult remark;     // structure of V in case ii; trivially ok in case i
};

inline CelineOutcome celine_classify(const ThreeValuedReport& r, const VVector& v) {
  CelineOutcome out;
  out.alexandra = alexandra_check(r);
  out.remark = CheckResult::ok("not applicable");
  const unsigned n = r.n();
  const bool above_a = r.val_a.compare(n, 2) == std::strong_ordering::greater;
  const bool above_b = r.val_b.compare(n, 2) == std::strong_ordering::greater;
  const bool half_a = r.val_a.compare(n, 2) == std::strong_ordering::equal;
  const bool half_b = r.val_b.compare(n, 2) == std::strong_ordering::equal;
  if (above_a && above_b) {
    out.kind = CelineCase::case_i;
    out.result = CheckResult::ok("v_p(a), v_p(b) > n/2");
    return out;
  }
  const BigInt diff = abs(r.a - r.b);
  if (half_a && half_b && is_power_of(diff, r.p()) && diff * diff > r.q()) {
    out.kind = CelineCase::case_ii;
    const auto pa = p_decompose(r.a, r.p());
    const auto pb = p_decompose(r.b, r.p());
    const BigInt aobo = pa.odd_part * pb.odd_part;
    std::ostringstream bad;
    if (r.a + r.b + aobo != v.v1()) bad << "V_1 != a + b + a_o b_o; ";
    for (std::size_t i = 1; i < v.counts.size(); ++i)
      if (v.counts[i] != 0 && BigInt(v.counts[i]) != aobo) bad << "V[" << i << "] = " << v.counts[i] << "; ";
    out.remark = bad.str().empty() ? CheckResult::ok() : CheckResult::fail(bad.str());
    if (r.p() == 2 || r.p() == 3)
      out.result = CheckResult::fail("case_ii in characteristic " + std::to_string(r.p()) + ": " + dump(r, &v));
    else
      out.result = CheckResult::ok("v_p(a) = v_p(b) = n/2, |a-b| = " + diff.str());
    return out;
  }
  out.result = CheckResult::fail("neither case holds: " + dump(r, &v));
  return out;
}

/// Runs every check for a three-valued spectrum and records them on the report.
inline void run_three_valued_suite(ThreeValuedReport& r, const WeilSpectrum& s, const VVector& v) {
  r.checks["theresa"] = check_theresa(r, s);
  r.checks["victor"] = victor_check(r, v.v1());
  r.checks["wilbur"] = wilbur_check(r, v);
  r.checks["zachary"] = zachary_check(r, v);
  const auto c = celine_classify(r, v);
  r.celine_case = c.kind;
  r.checks["alexandra"] = c.alexandra;
  r.checks["celine"] = c.result;
  r.checks["celine_remark"] = c.remark;
}

// ---------------------------------------------------------------------------
// Valuations of spectra

/// Minimum v_p over the values of the spectrum (0 contributes infinity).
inline ValuationQ min_valuation(const WeilSpectrum& s) {
  ValuationQ best = ValuationQ::infinity(s.field.p);
  for (const auto& e : s.entries) best = std::min(best, valuation_p(e.value));
  return best;
}

inline ValuationQ min_valuation(const FieldPtr& field, std::int64_t d, Method method = Method::automatic) {
  return min_valuation(weil_spectrum(field, d, method));
}

}  // namespace weilsum
