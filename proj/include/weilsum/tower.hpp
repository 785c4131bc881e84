#pragma once

// Minimum valuations across a tower of subfields F_{p^k} of F_{p^n}.
//
// For K subset L with gcd(d, |L*|) = 1:
//   min_{L*} v_p(W_L) <= [L:K] * min_{K*} v_p(W_K)
// and, when [L:K] = 2 and d is degenerate over K but not over L,
//   min_{L*} v_p(W_L) = [K:F_p].
// Chaining these along F_p, F_{p^2}, F_{p^4}, ... bounds some |W_F(u)|_p by n/2
// whenever n is a power of two and d moves from degenerate to nondegenerate.

#include "weilsum/analysis.hpp"
#include "weilsum/finite_field.hpp"
#include "weilsum/weil_engine.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace weilsum {

/// A field embedding K -> L (K.n divides L.n) that sends the polynomial
/// generator x of K to the smallest root of K's modulus in L.
struct SubfieldEmbedding {
  std::vector<FieldElement> image;  // indexed by K code
  std::uint64_t ratio = 1;          // |L*| / |K*|
  std::uint64_t multiplier = 1;     // log_L(image(g_K)) = ratio * multiplier
};

inline SubfieldEmbedding embed_subfield(const FieldTables& K, const FieldTables& L) {
  if (K.p() != L.p() || L.n() % K.n() != 0) throw std::invalid_argument("embed_subfield: K is not a subfield of L");
  const std::uint64_t ratio = L.group_order() / K.group_order();
  const auto& mod = K.spec().modulus;
  auto eval = [&](FieldElement y) {
    FieldElement acc = L.zero();
    for (std::size_t i = mod.size(); i-- > 0;) acc = L.add(L.mul(acc, y), L.from_integer(mod[i]));
    return acc;
  };
  std::optional<FieldElement> theta;
  for (std::uint32_t c = 0; c < L.order() && !theta; ++c)
    if (eval({c}) == L.zero()) theta = FieldElement{c};
  if (!theta) throw std::logic_error("embed_subfield: modulus of K has no root in L");

  SubfieldEmbedding e;
  e.ratio = ratio;
  e.image.resize(K.order());
  for (std::uint32_t c = 0; c < K.order(); ++c) {
    FieldElement acc = L.zero(), power = L.one();
    std::uint32_t rest = c;
    for (unsigned i = 0; i < K.n(); ++i) {
      acc = L.add(acc, L.mul(L.from_integer(rest % K.p()), power));
      rest /= K.p();
      power = L.mul(power, *theta);
    }
    e.image[c] = acc;
  }
  const std::uint64_t lg = L.log(e.image[K.generator().code]);
  if (lg % ratio != 0) throw std::logic_error("embed_subfield: image of generator outside the subgroup");
  e.multiplier = lg / ratio;
  return e;
}

/// Tr_{L/F_p}(iota x) = [L:K] Tr_{K/F_p}(x) and iota(g_K^i) = iota(g_K)^i for all x, i.
inline CheckResult check_embedding(const FieldTables& K, const FieldTables& L, const SubfieldEmbedding& e) {
  const std::uint64_t degree = L.n() / K.n();
  for (std::uint32_t c = 0; c < K.order(); ++c) {
    const auto lhs = L.trace(e.image[c]);
    const auto rhs = (degree * K.trace({c})) % K.p();
    if (lhs != rhs) return CheckResult::fail("traces do not compose at K element " + std::to_string(c));
  }
  const std::uint64_t lg = L.log(e.image[K.generator().code]);
  for (std::uint32_t i = 0; i < K.group_order(); ++i) {
    const auto img = e.image[K.exp(i).code];
    if (L.log(img) != (lg * i) % L.group_order())
      return CheckResult::fail("embedding not multiplicative at g^" + std::to_string(i));
  }
  return CheckResult::ok("multiplier " + std::to_string(e.multiplier));
}

struct TowerLevel {
  unsigned degree = 1;
  std::uint64_t d_reduced = 1;  // d mod |K*|, in [1, |K*|]
  bool valid = false;           // gcd(d, |K*|) == 1
  bool degenerate = false;
  std::size_t value_count = 0;
  ValuationQ min_valuation{2, std::nullopt};
};

struct TowerPair {
  unsigned k = 1, l = 1;  // degrees of K and L over F_p
  CheckResult george;
  std::optional<CheckResult> henry;  // only on quadratic steps where it applies
  CheckResult embedding;
};

struct TowerReport {
  std::uint32_t p = 2;
  unsigned n = 1;
  std::uint64_t d = 1;
  std::vector<TowerLevel> levels;  // one per divisor of n, ascending
  std::vector<TowerPair> pairs;
  std::vector<std::string> skipped;
  bool n_power_of_two = false;
  std::optional<std::pair<unsigned, unsigned>> degenerate_step;  // (k, 2k) on the quadratic chain
  CheckResult dorothy;

  bool pass() const {
    if (!dorothy.pass) return false;
    for (const auto& pr : pairs) {
      if (!pr.george.pass || !pr.embedding.pass) return false;
      if (pr.henry && !pr.henry->pass) return false;
    }
    return true;
  }
  const TowerLevel* level(unsigned degree) const {
    for (const auto& lv : levels)
      if (lv.degree == degree) return &lv;
    return nullptr;
  }
};

inline TowerReport tower_checks(std::uint32_t p, unsigned n, std::uint64_t d, Method method = Method::automatic) {
  TowerReport rep;
  rep.p = p;
  rep.n = n;
  rep.d = d;
  rep.n_power_of_two = std::has_single_bit(n);
  auto top = build_field(p, n);
  require_valid_exponent(*top, static_cast<std::int64_t>(d));

  std::map<unsigned, FieldPtr> fields;
  std::map<unsigned, WeilSpectrum> spectra;
  for (unsigned k = 1; k <= n; ++k) {
    if (n % k != 0) continue;
    auto f = k == n ? top : build_field(p, k);
    TowerLevel lv;
    lv.degree = k;
    const std::uint64_t m = f->group_order();
    lv.d_reduced = (d - 1) % m + 1;
    lv.valid = std::gcd(d, m) == 1;
    if (!lv.valid) {
      rep.skipped.push_back("gcd(d, " + std::to_string(m) + ") != 1 at degree " + std::to_string(k));
    } else {
      auto s = weil_spectrum(f, static_cast<std::int64_t>(lv.d_reduced), method);
      lv.degenerate = s.degenerate;
      lv.value_count = s.value_count();
      lv.min_valuation = min_valuation(s);
      spectra.emplace(k, std::move(s));
    }
    fields.emplace(k, f);
    rep.levels.push_back(lv);
  }

  for (const auto& K : rep.levels) {
    for (const auto& L : rep.levels) {
      if (L.degree <= K.degree || L.degree % K.degree != 0) continue;
      TowerPair pr;
      pr.k = K.degree;
      pr.l = L.degree;
      pr.embedding = check_embedding(*fields[pr.k], *fields[pr.l], embed_subfield(*fields[pr.k], *fields[pr.l]));
      if (!K.valid || !L.valid) {
        pr.george = CheckResult::ok("skipped: exponent not valid at both levels");
        rep.pairs.push_back(pr);
        continue;
      }
      const std::uint64_t degree = pr.l / pr.k;
      const auto lhs = L.min_valuation.numerator();
      const auto rhs = degree * K.min_valuation.numerator();
      pr.george = lhs <= rhs ? CheckResult::ok(L.min_valuation.to_string() + " <= " + std::to_string(degree) + " * " +
                                               K.min_valuation.to_string())
                             : CheckResult::fail("min over L " + L.min_valuation.to_string() + " > " +
                                                 std::to_string(degree) + " * " + K.min_valuation.to_string());
      if (degree == 2 && K.degenerate && !L.degenerate) {
        const bool eq = L.min_valuation.compare(pr.k, 1) == std::strong_ordering::equal;
        pr.henry = eq ? CheckResult::ok("min = " + std::to_string(pr.k))
                      : CheckResult::fail("min over L = " + L.min_valuation.to_string() + ", expected " +
                                          std::to_string(pr.k));
      }
      rep.pairs.push_back(pr);
    }
  }

  rep.dorothy = CheckResult::ok("n is not a power of 2");
  if (rep.n_power_of_two) {
    const TowerLevel* base = rep.level(1);
    const TowerLevel* full = rep.level(n);
    std::string note;
    if (base->valid && base->degenerate && !full->degenerate) {
      for (unsigned k = 1; 2 * k <= n; k *= 2) {
        const TowerLevel* K = rep.level(k);
        const TowerLevel* L = rep.level(2 * k);
        if (K->degenerate && !L->degenerate) {
          rep.degenerate_step = std::make_pair(k, 2 * k);
          break;
        }
      }
      if (!rep.degenerate_step) {
        rep.dorothy = CheckResult::fail("no degenerate-to-nondegenerate quadratic step found");
        return rep;
      }
      if (full->min_valuation.compare(n, 2) == std::strong_ordering::greater) {
        rep.dorothy = CheckResult::fail("min valuation " + full->min_valuation.to_string() + " exceeds n/2");
        return rep;
      }
      note = "step F_{p^" + std::to_string(rep.degenerate_step->first) + "} < F_{p^" +
             std::to_string(rep.degenerate_step->second) + "}, min " + full->min_valuation.to_string() +
             " <= n/2";
    } else {
      note = "no degenerate-to-nondegenerate transition";
    }
    const auto& s = spectra.at(n);
    if (s.three_valued()) {
      // Exhibit a value with v_p <= n/2.
      bool found = false;
      for (const auto& e : s.entries)
        if (valuation_p(e.value).compare(n, 2) != std::strong_ordering::greater) {
          note += "; three-valued, witness value " + e.value.to_string();
          found = true;
          break;
        }
      if (!found) {
        rep.dorothy = CheckResult::fail("three-valued with every v_p > n/2");
        return rep;
      }
    } else {
      note += "; no three-valued instance found";
    }
    rep.dorothy = CheckResult::ok(note);
  }
  return rep;
}

}  // namespace weilsum
