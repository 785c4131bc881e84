#pragma once

// Scan orchestration behind the weilscan CLI: per-(field, exponent class)
// records as JSON Lines, resumable output, verification suites, tower reports.

#include "weilsum/analysis.hpp"
#include "weilsum/cyclotomic.hpp"
#include "weilsum/finite_field.hpp"
#include "weilsum/group_algebra.hpp"
#include "weilsum/tower.hpp"
#include "weilsum/weil_engine.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace weilsum::scan {

using json = nlohmann::json;

inline constexpr const char* kEngineVersion = "weilscan 1.0.0";
inline constexpr std::uint64_t kDefaultSeed = 0x5eed5eedULL;

/// WEILSCAN_SEED if set, otherwise the fixed default.
inline std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("WEILSCAN_SEED")) {
    try {
      return std::stoull(s, nullptr, 0);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("WEILSCAN_SEED is not an integer: ") + s);
    }
  }
  return kDefaultSeed;
}

enum class Filter { all, three_valued, nondegenerate };

inline Filter parse_filter(const std::string& s) {
  if (s == "all") return Filter::all;
  if (s == "three_valued") return Filter::three_valued;
  if (s == "nondegenerate") return Filter::nondegenerate;
  throw std::invalid_argument("unknown filter '" + s + "' (all | three_valued | nondegenerate)");
}

inline Method parse_method(const std::string& s) {
  if (s == "naive") return Method::naive;
  if (s == "fast") return Method::fast;
  if (s == "auto") return Method::automatic;
  throw std::invalid_argument("unknown method '" + s + "' (naive | fast | auto)");
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(static_cast<T>(std::stoull(item)));
  }
  return out;
}

struct ScanConfig {
  std::vector<std::uint32_t> primes{2};
  std::vector<unsigned> degrees;                             // applies to every prime; empty = all
  std::map<std::uint32_t, std::vector<unsigned>> per_prime;  // overrides `degrees` for a prime
  std::uint64_t qmax = 4096;
  Filter filter = Filter::all;
  Method method = Method::automatic;
  unsigned workers = 1;
  std::string output_path;
  std::string csv_path;
  unsigned audit = 0;
  std::uint64_t seed = kDefaultSeed;
};

/// Applies one key=value setting.
inline void apply_setting(ScanConfig& c, const std::string& key, const std::string& value) {
  if (key == "p") {
    c.primes = parse_list<std::uint32_t>(value);
  } else if (key == "n") {
    c.degrees = parse_list<unsigned>(value);
  } else if (key.rfind("n.", 0) == 0) {
    c.per_prime[static_cast<std::uint32_t>(std::stoul(key.substr(2)))] = parse_list<unsigned>(value);
  } else if (key == "qmax") {
    c.qmax = std::stoull(value);
  } else if (key == "filter") {
    c.filter = parse_filter(value);
  } else if (key == "method") {
    c.method = parse_method(value);
  } else if (key == "workers") {
    c.workers = static_cast<unsigned>(std::stoul(value));
  } else if (key == "out") {
    c.output_path = value;
  } else if (key == "csv") {
    c.csv_path = value;
  } else if (key == "audit") {
    c.audit = static_cast<unsigned>(std::stoul(value));
  } else if (key == "seed") {
    c.seed = std::stoull(value, nullptr, 0);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

/// Plain-text key=value file; '#' starts a comment.
inline void load_config_file(ScanConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

/// (p, n) pairs in scan order, all with p^n <= qmax.
inline std::vector<std::pair<std::uint32_t, unsigned>> field_list(const ScanConfig& c, std::ostream* log = nullptr) {
  std::vector<std::pair<std::uint32_t, unsigned>> out;
  std::vector<std::uint32_t> primes = c.primes;
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (auto p : primes) {
    if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
    std::vector<unsigned> ns;
    if (auto it = c.per_prime.find(p); it != c.per_prime.end()) {
      ns = it->second;
    } else if (!c.degrees.empty()) {
      ns = c.degrees;
    } else {
      for (unsigned n = 1; checked_power(p, n, c.qmax); ++n) ns.push_back(n);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    for (auto n : ns) {
      if (n == 0) throw std::invalid_argument("n must be positive");
      if (!checked_power(p, n, std::min(c.qmax, kMaxFieldOrder))) {
        if (log) *log << "skipping p=" << p << " n=" << n << ": exceeds qmax\n";
        continue;
      }
      out.emplace_back(p, n);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline json to_json(const CheckResult& r) { return json{{"pass", r.pass}, {"witness", r.witness}}; }

inline json to_json(const CheckMap& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = to_json(v);
  return j;
}

inline json field_json(const FieldTables& f) {
  return json{{"p", f.p()},
              {"n", f.n()},
              {"q", f.order()},
              {"modulus", f.spec().modulus},
              {"generator", f.coeffs(f.generator())}};
}

/// {p, n, modulus, d, class_orbit, degenerate, entries: [[value, multiplicity], ...]}
inline json spectrum_json(const WeilSpectrum& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back(json::array({e.value.to_string(), e.multiplicity}));
  return json{{"p", s.field.p},
              {"n", s.field.n},
              {"modulus", s.field.modulus},
              {"d", s.d},
              {"class_orbit", exponent_orbit(s.field.p, s.field.order(), s.d)},
              {"degenerate", s.degenerate},
              {"entries", entries}};
}

inline json tower_json(const TowerReport& r) {
  json levels = json::array();
  for (const auto& lv : r.levels) {
    json l{{"degree", lv.degree}, {"d_reduced", lv.d_reduced}, {"valid", lv.valid}};
    if (lv.valid) {
      l["degenerate"] = lv.degenerate;
      l["value_count"] = lv.value_count;
      l["min_valuation"] = lv.min_valuation.to_string();
    }
    levels.push_back(l);
  }
  json pairs = json::array();
  for (const auto& pr : r.pairs) {
    json j{{"k", pr.k}, {"l", pr.l}, {"george", to_json(pr.george)}, {"embedding", to_json(pr.embedding)}};
    if (pr.henry) j["henry"] = to_json(*pr.henry);
    pairs.push_back(j);
  }
  json out{{"type", "tower"},  {"p", r.p},          {"n", r.n},
           {"d", r.d},         {"levels", levels},  {"pairs", pairs},
           {"skipped", r.skipped}, {"n_power_of_two", r.n_power_of_two},
           {"dorothy", to_json(r.dorothy)}, {"pass", r.pass()}};
  if (r.degenerate_step) out["degenerate_step"] = {r.degenerate_step->first, r.degenerate_step->second};
  else out["degenerate_step"] = nullptr;
  return out;
}

// ---------------------------------------------------------------------------
// Records

struct RecordOptions {
  Method method = Method::automatic;
  unsigned audit = 0;
  std::uint64_t seed = kDefaultSeed;
};

/// Recomputes `count` randomly chosen u naively and compares with `values`.
inline CheckResult audit_values(const FieldTables& f, std::uint64_t d, const std::vector<CycInt>& values,
                                unsigned count, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ (std::uint64_t{f.p()} << 40) ^ (std::uint64_t{f.n()} << 32) ^ d);
  std::uniform_int_distribution<std::uint32_t> pick(0, f.group_order() - 1);
  for (unsigned i = 0; i < count; ++i) {
    const auto idx = pick(rng);
    const auto naive = weil_sum_naive(f, static_cast<std::int64_t>(d), f.exp(idx));
    if (!(naive == values[idx]))
      return CheckResult::fail("u = g^" + std::to_string(idx) + ": naive " + naive.to_string() + " vs engine " +
                               values[idx].to_string());
  }
  return CheckResult::ok(std::to_string(count) + " values audited");
}

/// All per-instance checks for one (field, d).
inline json build_record(const FieldPtr& field, std::uint64_t d, const RecordOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const FieldTables& f = *field;
  const Method method = resolve_method(opt.method, f.order());
  const auto values = weil_values(field, static_cast<std::int64_t>(d), method);
  const auto spectrum = make_spectrum(f.spec(), d, values);
  const auto v = v_vector(f, static_cast<std::int64_t>(d));
  const auto minval = min_valuation(spectrum);

  CheckMap checks;
  checks["gloria"] = check_gloria(spectrum);
  checks["value_count"] = check_value_count(spectrum);
  checks["barbara"] = check_barbara(f, static_cast<std::int64_t>(d), v);
  checks["orestes"] = check_orestes(spectrum, v);
  if (v.total() != f.order()) checks["v_weight"] = CheckResult::fail("|V| = " + std::to_string(v.total()));
  if (opt.audit > 0) checks["audit"] = audit_values(f, d, values, opt.audit, opt.seed);

  json rec = spectrum_json(spectrum);
  rec["type"] = "record";
  rec["q"] = f.order();
  rec["generator"] = f.coeffs(f.generator());
  rec["inverse_class"] = canonical_representative(f.p(), f.order(), inverse_exponent(static_cast<std::int64_t>(d), f.group_order()));
  rec["value_count"] = spectrum.value_count();
  rec["three_valued"] = spectrum.three_valued();
  rec["min_valuation"] = minval.to_string();
  rec["v1"] = v.v1();
  rec["method"] = to_string(method);
  rec["engine_version"] = kEngineVersion;

  if (spectrum.three_valued()) {
    const auto imogene = check_imogene(spectrum);
    checks["imogene"] = imogene;
    if (imogene.pass) {
      try {
        auto report = make_three_valued_report(spectrum);
        run_three_valued_suite(report, spectrum, v);
        for (auto& [k, c] : report.checks) checks[k] = c;
        rec["a"] = report.a.str();
        rec["b"] = report.b.str();
        rec["val_a"] = report.val_a.to_string();
        rec["val_b"] = report.val_b.to_string();
        rec["celine_case"] = report.celine_case ? json(to_string(*report.celine_case)) : json(nullptr);
        if (std::has_single_bit(f.n())) {
          const bool bounded = minval.compare(f.n(), 2) != std::strong_ordering::greater;
          checks["dorothy"] = bounded ? CheckResult::ok("min valuation " + minval.to_string() + " <= n/2")
                                      : CheckResult::fail("three-valued with min valuation " + minval.to_string() +
                                                          " > n/2: " + dump(report, &v));
        }
      } catch (const std::invalid_argument& e) {
        checks["three_valued_shape"] = CheckResult::fail(e.what());
      }
    }
  }
  rec["checks"] = to_json(checks);
  rec["pass"] = all_pass(checks);
  rec["elapsed_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

/// Runs compute(i) for i in [0, count) on `workers` threads and hands the
/// results to emit() strictly in index order, as soon as each prefix is ready.
template <typename Compute, typename Emit>
void ordered_parallel(std::size_t count, unsigned workers, Compute compute, Emit emit) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) emit(i, compute(i));
    return;
  }
  using Result = decltype(compute(std::size_t{}));
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        std::optional<Result> r;
        std::exception_ptr err;
        try {
          r.emplace(compute(i));
        } catch (...) {
          err = std::current_exception();
        }
        {
          std::lock_guard lk(mu);
          slots[i] = std::move(r);
          errors[i] = err;
          if (!slots[i]) slots[i].emplace();  // mark as done
        }
        cv.notify_all();
      }
    });
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::unique_lock lk(mu);
    cv.wait(lk, [&] { return slots[i].has_value(); });
    if (errors[i]) {
      next = count;
      lk.unlock();
      pool.clear();
      std::rethrow_exception(errors[i]);
    }
    Result r = std::move(*slots[i]);
    slots[i].reset();
    lk.unlock();
    emit(i, std::move(r));
  }
}

inline std::string record_key(std::uint64_t p, std::uint64_t n, std::uint64_t d) {
  return std::to_string(p) + ":" + std::to_string(n) + ":" + std::to_string(d);
}
inline std::string summary_key(std::uint64_t p, std::uint64_t n) {
  return "summary:" + std::to_string(p) + ":" + std::to_string(n);
}

/// Loads the complete lines of an existing JSONL file, truncating a partial
/// trailing line left by an interrupted run.
inline std::vector<json> load_existing(const std::string& path) {
  std::vector<json> out;
  if (path.empty() || !std::filesystem::exists(path)) return out;
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  std::size_t good = 0, pos = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    if (nl == std::string::npos) break;
    const std::string line = content.substr(pos, nl - pos);
    if (!line.empty()) {
      try {
        out.push_back(json::parse(line));
      } catch (const json::parse_error&) {
        break;
      }
    }
    pos = nl + 1;
    good = pos;
  }
  if (good != content.size()) std::filesystem::resize_file(path, good);
  return out;
}

struct ScanResult {
  std::size_t records_written = 0;
  std::size_t records_skipped = 0;
  std::size_t failures = 0;
  std::map<std::pair<std::uint32_t, unsigned>, std::vector<std::uint64_t>> three_valued;  // per field
};

inline bool passes_filter(const json& rec, Filter f) {
  switch (f) {
    case Filter::all: return true;
    case Filter::three_valued: return rec.at("three_valued").get<bool>();
    case Filter::nondegenerate: return !rec.at("degenerate").get<bool>();
  }
  return true;
}

inline void write_csv(const std::string& path, const std::vector<json>& lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "p,n,q,d,degenerate,value_count,three_valued,min_valuation,celine_case,pass\n";
  for (const auto& r : lines) {
    if (r.value("type", "") != "record") continue;
    out << r["p"] << ',' << r["n"] << ',' << r["q"] << ',' << r["d"] << ',' << r["degenerate"] << ','
        << r["value_count"] << ',' << r["three_valued"] << ',' << r["min_valuation"].get<std::string>() << ','
        << (r.contains("celine_case") && r["celine_case"].is_string() ? r["celine_case"].get<std::string>() : "")
        << ',' << r["pass"] << '\n';
  }
}

/// Runs a scan. Records go to config.output_path (appending and skipping keys
/// already present) or to `out` when no path is set. Progress goes to `log`.
inline ScanResult run_scan(const ScanConfig& config, std::ostream& out, std::ostream& log) {
  ScanResult result;
  const auto fields = field_list(config, &log);

  std::vector<json> existing = load_existing(config.output_path);
  std::set<std::string> done;
  for (const auto& r : existing) {
    if (r.value("type", "") == "record")
      done.insert(record_key(r["p"].get<std::uint64_t>(), r["n"].get<std::uint64_t>(), r["d"].get<std::uint64_t>()));
    else if (r.value("type", "") == "summary")
      done.insert(summary_key(r["p"].get<std::uint64_t>(), r["n"].get<std::uint64_t>()));
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!config.output_path.empty()) {
    file.open(config.output_path, std::ios::app);
    if (!file) throw std::runtime_error("cannot open " + config.output_path);
    sink = &file;
  }
  std::vector<json> all_lines = existing;
  auto write_line = [&](const json& j) {
    *sink << j.dump() << '\n';
    sink->flush();
    all_lines.push_back(j);
  };

  RecordOptions opt{config.method, config.audit, config.seed};
  for (const auto& [p, n] : fields) {
    if (done.count(summary_key(p, n))) {
      log << "p=" << p << " n=" << n << ": already complete\n";
      for (const auto& r : existing)
        if (r.value("type", "") == "record" && r["p"] == p && r["n"] == n && r["three_valued"].get<bool>())
          result.three_valued[{p, n}].push_back(r["d"].get<std::uint64_t>());
      continue;
    }
    const auto field = build_field(p, n);
    const auto classes = canonical_exponent_classes(p, field->order());
    std::vector<std::uint64_t> todo;
    auto& tv = result.three_valued[{p, n}];
    for (auto d : classes) {
      if (done.count(record_key(p, n, d))) {
        ++result.records_skipped;
        continue;
      }
      todo.push_back(d);
    }
    for (const auto& r : existing)
      if (r.value("type", "") == "record" && r["p"] == p && r["n"] == n && r["three_valued"].get<bool>())
        tv.push_back(r["d"].get<std::uint64_t>());
    log << "p=" << p << " n=" << n << " q=" << field->order() << ": " << classes.size() << " classes, "
        << todo.size() << " to compute\n";

    ordered_parallel(
        todo.size(), config.workers, [&](std::size_t i) { return build_record(field, todo[i], opt); },
        [&](std::size_t, json rec) {
          if (rec["three_valued"].get<bool>()) tv.push_back(rec["d"].get<std::uint64_t>());
          if (!rec["pass"].get<bool>()) {
            ++result.failures;
            log << "CHECK FAILURE p=" << p << " n=" << n << " d=" << rec["d"] << ": " << rec["checks"].dump() << '\n';
          }
          if (passes_filter(rec, config.filter)) {
            write_line(rec);
            ++result.records_written;
          }
        });

    std::sort(tv.begin(), tv.end());
    json summary{{"type", "summary"},       {"p", p},
                 {"n", n},                  {"q", field->order()},
                 {"modulus", field->spec().modulus},
                 {"classes", classes.size()}, {"three_valued", tv.size()},
                 {"three_valued_d", tv},    {"engine_version", kEngineVersion}};
    if (std::has_single_bit(n))
      summary["dorothy"] = tv.empty() ? "no instances found" : "three-valued instances present";
    write_line(summary);
  }
  if (!config.csv_path.empty()) write_csv(config.csv_path, all_lines);
  return result;
}

// ---------------------------------------------------------------------------
// Verification suites

struct VerifyOptions {
  std::string suite = "all";
  std::uint64_t qmax = 81;
  std::optional<std::uint32_t> p;
  std::optional<unsigned> n;
  std::uint64_t seed = kDefaultSeed;
  std::size_t property_pairs = 1000;
};

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s{"algebra", "moments", "congruence", "towers", "valuation", "all"};
  return s;
}

/// Tally of one named check across many cases; keeps the first counterexample.
class Tally {
 public:
  void add(const std::string& name, const CheckResult& r, const std::string& where) {
    auto& e = entries_[name];
    ++e.cases;
    if (!r.pass && !e.failure) e.failure = where + ": " + r.witness;
    if (!r.pass) ++e.failures;
  }
  void note(const std::string& line) { notes_.push_back(line); }
  bool pass() const {
    for (const auto& [k, e] : entries_)
      if (e.failures) return false;
    return true;
  }
  void print(std::ostream& os, const std::string& suite) const {
    for (const auto& [k, e] : entries_) {
      os << "[" << suite << "] " << k << ": " << (e.failures ? "FAIL" : "PASS") << " (" << e.cases << " cases";
      if (e.failures) os << ", " << e.failures << " failed";
      os << ")\n";
      if (e.failure) os << "    first counterexample: " << *e.failure << "\n";
    }
    for (const auto& n : notes_) os << "[" << suite << "] " << n << "\n";
  }

 private:
  struct Entry {
    std::size_t cases = 0, failures = 0;
    std::optional<std::string> failure;
  };
  std::map<std::string, Entry> entries_;
  std::vector<std::string> notes_;
};

/// Fields in scope: every prime power <= qmax, narrowed by p and n when given.
inline std::vector<std::pair<std::uint32_t, unsigned>> verify_fields(const VerifyOptions& o) {
  std::vector<std::pair<std::uint32_t, unsigned>> out;
  if (o.p && o.n) {
    if (!checked_power(*o.p, *o.n, kMaxFieldOrder)) throw std::invalid_argument("field too large");
    out.emplace_back(*o.p, *o.n);
    return out;
  }
  for (std::uint32_t p = 2; p <= o.qmax; ++p) {
    if (!is_prime(p) || (o.p && p != *o.p)) continue;
    for (unsigned n = 1; checked_power(p, n, o.qmax); ++n)
      if (!o.n || n == *o.n) out.emplace_back(p, n);
  }
  return out;
}

inline std::string where(std::uint32_t p, unsigned n, std::uint64_t d) {
  return "p=" + std::to_string(p) + " n=" + std::to_string(n) + " d=" + std::to_string(d);
}

inline void verify_algebra(const VerifyOptions& o, Tally& t) {
  for (const auto& [p, n] : verify_fields(o)) {
    const auto field = build_field(p, n);
    const auto m = field->group_order();
    const BigInt q = field->order();
    const GAElem psi = psi_element(field);
    t.add("eric_weight", weight(psi) == CycInt(p, BigInt(-1)) ? CheckResult::ok() : CheckResult::fail(weight(psi).to_string()),
          where(p, n, 0));
    const GAElem target = q * GAElem::unit(field) - GAElem::all_ones(field);
    for (std::uint64_t tt = 1; tt <= m; ++tt) {
      if (std::gcd(tt, std::uint64_t{m}) != 1) continue;
      const GAElem pt = reindex_power(psi, static_cast<std::int64_t>(tt));
      const bool ok = convolve_schoolbook(pt, conjugate(pt)) == target;
      t.add("bartholomew", ok ? CheckResult::ok() : CheckResult::fail("t=" + std::to_string(tt)), where(p, n, 0));
    }
    for (auto d : canonical_exponent_classes(p, field->order())) {
      const auto naive = weil_values(field, static_cast<std::int64_t>(d), Method::naive);
      const GAElem w_naive(field, naive);
      const GAElem w = weil_element(field, static_cast<std::int64_t>(d));
      t.add("aaron", w == w_naive ? CheckResult::ok() : CheckResult::fail("W != Psi Psi^(-1/d) + F*"), where(p, n, d));
      const bool william = convolve_schoolbook(w_naive, conjugate(w_naive)) == (q * q) * GAElem::unit(field);
      t.add("william", william ? CheckResult::ok() : CheckResult::fail("W conj(W) != q^2 [1]"), where(p, n, d));
      const auto v = v_vector(*field, static_cast<std::int64_t>(d));
      const GAElem x = x_element(w_naive);
      const bool ursula = convolve_schoolbook(w_naive, lift(field, v)) == x;
      t.add("ursula", ursula ? CheckResult::ok() : CheckResult::fail("X != W V"), where(p, n, d));
      t.add("fred", v.total() == field->order() ? CheckResult::ok() : CheckResult::fail("|V| != q"), where(p, n, d));
    }
  }
}

inline void verify_moments(const VerifyOptions& o, Tally& t) {
  for (const auto& [p, n] : verify_fields(o)) {
    const auto field = build_field(p, n);
    for (auto d : canonical_exponent_classes(p, field->order())) {
      const auto s = weil_spectrum(field, static_cast<std::int64_t>(d));
      const auto v = v_vector(*field, static_cast<std::int64_t>(d));
      t.add("orestes", check_orestes(s, v), where(p, n, d));
      if (s.three_valued() && check_imogene(s).pass) {
        const auto r = make_three_valued_report(s);
        t.add("theresa", check_theresa(r, s), where(p, n, d));
      }
    }
  }
}

inline void verify_congruence(const VerifyOptions& o, Tally& t) {
  std::set<std::string> branches;
  for (const auto& [p, n] : verify_fields(o)) {
    const auto field = build_field(p, n);
    for (auto d : canonical_exponent_classes(p, field->order())) {
      const auto v = v_vector(*field, static_cast<std::int64_t>(d));
      t.add("barbara", check_barbara(*field, static_cast<std::int64_t>(d), v), where(p, n, d));
      const auto orbits = orbit_decomposition(*field, static_cast<std::int64_t>(d));
      t.add("orbits", orbits.result, where(p, n, d));
      const bool count_ok = orbits.roots.size() + 2 == v.v1();
      t.add("orbit_root_count", count_ok ? CheckResult::ok() : CheckResult::fail("roots + 2 != V_1"), where(p, n, d));
      branches.insert(v1_congruence_expected(*field, static_cast<std::int64_t>(d)).branch + (p == 2 ? "/char2" : ""));
    }
  }
  std::string cover;
  for (const auto& b : branches) cover += (cover.empty() ? "" : " ") + b;
  t.note("branches exercised: " + cover);
}

inline void verify_towers(const VerifyOptions& o, Tally& t, std::ostream* detail = nullptr) {
  std::vector<std::pair<std::uint32_t, unsigned>> targets;
  if (o.p && o.n) {
    targets.emplace_back(*o.p, *o.n);
  } else {
    for (const auto& [p, n] : verify_fields(o))
      if (!is_prime(n) && n > 1) targets.emplace_back(p, n);
  }
  for (const auto& [p, n] : targets) {
    const auto q = *checked_power(p, n, kMaxFieldOrder);
    for (auto d : canonical_exponent_classes(p, q)) {
      const auto rep = tower_checks(p, n, d);
      for (const auto& pr : rep.pairs) {
        const auto w = where(p, n, d) + " K=F_{p^" + std::to_string(pr.k) + "} L=F_{p^" + std::to_string(pr.l) + "}";
        t.add("george", pr.george, w);
        t.add("embedding", pr.embedding, w);
        if (pr.henry) t.add("henry", *pr.henry, w);
      }
      t.add("dorothy", rep.dorothy, where(p, n, d));
      if (detail) *detail << tower_json(rep).dump() << '\n';
    }
  }
}

inline void verify_valuation(const VerifyOptions& o, Tally& t) {
  std::mt19937_64 rng(o.seed);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const CycInt pc(p, BigInt(p));
    t.add("v_p(p)=1", valuation_p(pc) == ValuationQ(p, p - 1) ? CheckResult::ok() : CheckResult::fail(valuation_p(pc).to_string()),
          "p=" + std::to_string(p));
    const CycInt pi = CycInt(p, BigInt(1)) - CycInt::zeta_power(p, 1);
    t.add("v_p(1-zeta)=1/(p-1)", valuation_p(pi) == ValuationQ(p, 1) ? CheckResult::ok() : CheckResult::fail(valuation_p(pi).to_string()),
          "p=" + std::to_string(p));
    std::uniform_int_distribution<int> coef(-20, 20);
    std::uniform_int_distribution<unsigned> pis(0, 6);
    auto random_element = [&] {
      std::vector<BigInt> c(p - 1);
      for (auto& x : c) x = coef(rng);
      CycInt x(p, std::move(c));
      for (unsigned k = pis(rng); k > 0; --k) x *= pi;
      return x;
    };
    for (std::size_t i = 0; i < o.property_pairs; ++i) {
      const CycInt x = random_element(), y = random_element();
      if (x.is_zero() || y.is_zero()) continue;
      const auto lhs = valuation_p(x * y);
      const auto rhs = valuation_p(x) + valuation_p(y);
      t.add("multiplicativity", lhs == rhs ? CheckResult::ok() : CheckResult::fail("x=" + x.to_string() + " y=" + y.to_string()),
            "p=" + std::to_string(p));
      if (auto quotient = divide_by_pi(x)) {
        t.add("division_remultiplies", *quotient * pi == x ? CheckResult::ok() : CheckResult::fail(x.to_string()),
              "p=" + std::to_string(p));
      }
    }
  }
  for (const auto& [p, n] : verify_fields(o)) {
    const auto field = build_field(p, n);
    for (auto d : canonical_exponent_classes(p, field->order())) {
      const auto s = weil_spectrum(field, static_cast<std::int64_t>(d));
      t.add("gloria", check_gloria(s), where(p, n, d));
      if (s.three_valued() && check_imogene(s).pass) {
        auto r = make_three_valued_report(s);
        const auto v = v_vector(*field, static_cast<std::int64_t>(d));
        run_three_valued_suite(r, s, v);
        for (const auto& [k, c] : r.checks) t.add(k, c, where(p, n, d));
      }
    }
  }
}

/// Runs one suite (or "all"); prints one line per check. Returns overall pass.
inline bool run_verify(const VerifyOptions& o, std::ostream& os) {
  const auto& known = verify_suites();
  if (std::find(known.begin(), known.end(), o.suite) == known.end())
    throw std::invalid_argument("unknown suite '" + o.suite + "'");
  bool ok = true;
  auto run = [&](const std::string& name, auto fn) {
    if (o.suite != "all" && o.suite != name) return;
    Tally t;
    fn(t);
    t.print(os, name);
    ok = ok && t.pass();
  };
  run("algebra", [&](Tally& t) { verify_algebra(o, t); });
  run("moments", [&](Tally& t) { verify_moments(o, t); });
  run("congruence", [&](Tally& t) { verify_congruence(o, t); });
  run("towers", [&](Tally& t) { verify_towers(o, t); });
  run("valuation", [&](Tally& t) { verify_valuation(o, t); });
  os << (ok ? "verify: PASS" : "verify: FAIL") << '\n';
  return ok;
}

}  // namespace weilsum::scan
