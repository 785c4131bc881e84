// weilscan: spectra, scans, verification suites and tower reports for
// binomial Weil sums over finite fields.

#include "weilsum/weilsum.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace weilsum;
using weilsum::scan::json;

constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;

std::uint32_t single(const std::vector<std::uint32_t>& v, const char* what) {
  if (v.size() != 1) throw std::invalid_argument(std::string("expected exactly one value for ") + what);
  return v.front();
}

int cmd_spectrum(std::uint32_t p, unsigned n, std::int64_t d, const std::string& method, unsigned audit) {
  const auto field = build_field(p, n);
  require_valid_exponent(*field, d);
  scan::RecordOptions opt{scan::parse_method(method), audit, scan::seed_from_env()};
  const auto m = static_cast<std::int64_t>(field->group_order());
  const auto rec = scan::build_record(field, static_cast<std::uint64_t>((d - 1) % m + 1), opt);
  std::cout << rec.dump() << '\n';
  return rec["pass"].get<bool>() ? kOk : kCheckFailure;
}

int cmd_tower(std::uint32_t p, unsigned n, std::optional<std::uint64_t> d, const std::string& method) {
  const auto q = checked_power(p, n, kMaxFieldOrder);
  if (!is_prime(p) || !q) throw std::invalid_argument("invalid field");
  std::vector<std::uint64_t> ds;
  if (d) ds.push_back(*d);
  else ds = canonical_exponent_classes(p, *q);
  bool ok = true;
  for (auto e : ds) {
    const auto rep = tower_checks(p, n, e, scan::parse_method(method));
    std::cout << scan::tower_json(rep).dump() << '\n';
    ok = ok && rep.pass();
  }
  return ok ? kOk : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Weil sum spectra of binomials over finite fields"};
  app.require_subcommand(1);

  std::vector<std::uint32_t> p_list;
  std::vector<unsigned> n_list;
  std::int64_t d = 0;
  std::uint64_t qmax = 0;
  std::string filter = "all", method = "auto", out, config, suite = "all", csv;
  unsigned workers = 1, audit = 0;

  auto* spectrum = app.add_subcommand("spectrum", "Compute one spectrum with all per-instance checks");
  spectrum->add_option("--p", p_list, "Characteristic")->required();
  spectrum->add_option("--n", n_list, "Extension degree")->required();
  spectrum->add_option("--d", d, "Exponent, gcd(d, q - 1) = 1")->required();
  spectrum->add_option("--method", method, "naive | fast | auto");
  spectrum->add_option("--audit", audit, "Recheck this many random u naively");

  auto* scan_cmd = app.add_subcommand("scan", "Scan every exponent class over a range of fields (JSON Lines)");
  auto* p_opt = scan_cmd->add_option("--p", p_list, "Primes, comma separated")->delimiter(',');
  auto* n_opt = scan_cmd->add_option("--n", n_list, "Degrees, comma separated")->delimiter(',');
  auto* qmax_opt = scan_cmd->add_option("--qmax", qmax, "Largest field order");
  auto* filter_opt = scan_cmd->add_option("--filter", filter, "all | three_valued | nondegenerate");
  auto* method_opt = scan_cmd->add_option("--method", method, "naive | fast | auto");
  auto* workers_opt = scan_cmd->add_option("--workers", workers, "Worker threads");
  auto* out_opt = scan_cmd->add_option("--out", out, "Output file; appended to and resumed");
  auto* audit_opt = scan_cmd->add_option("--audit", audit, "Naive spot checks per record");
  auto* csv_opt = scan_cmd->add_option("--csv", csv, "Also write a CSV summary table");
  scan_cmd->add_option("--config", config, "key=value config file; flags override it");

  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  verify->add_option("--suite", suite, "algebra | moments | congruence | towers | valuation | all");
  auto* vq = verify->add_option("--qmax", qmax, "Largest field order (default 81)");
  auto* vp = verify->add_option("--p", p_list, "Restrict to one prime");
  auto* vn = verify->add_option("--n", n_list, "Restrict to one degree");

  auto* tower = app.add_subcommand("tower", "Subfield tower report");
  tower->add_option("--p", p_list, "Characteristic")->required();
  tower->add_option("--n", n_list, "Extension degree")->required();
  auto* td = tower->add_option("--d", d, "Exponent (default: every class)");
  tower->add_option("--method", method, "naive | fast | auto");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*spectrum) return cmd_spectrum(single(p_list, "--p"), n_list.at(0), d, method, audit);

    if (*tower) {
      std::optional<std::uint64_t> dd;
      if (td->count()) {
        if (d <= 0) throw std::invalid_argument("d must be positive");
        dd = static_cast<std::uint64_t>(d);
      }
      return cmd_tower(single(p_list, "--p"), n_list.at(0), dd, method);
    }

    if (*verify) {
      scan::VerifyOptions o;
      o.suite = suite;
      if (vq->count()) o.qmax = qmax;
      if (vp->count()) o.p = single(p_list, "--p");
      if (vn->count()) o.n = n_list.at(0);
      o.seed = scan::seed_from_env();
      return scan::run_verify(o, std::cout) ? kOk : kCheckFailure;
    }

    scan::ScanConfig c;
    c.seed = scan::seed_from_env();
    if (!config.empty()) scan::load_config_file(c, config);
    if (p_opt->count()) c.primes = p_list;
    if (n_opt->count()) {
      c.degrees = n_list;
      c.per_prime.clear();
    }
    if (qmax_opt->count()) c.qmax = qmax;
    if (filter_opt->count()) c.filter = scan::parse_filter(filter);
    if (method_opt->count()) c.method = scan::parse_method(method);
    if (workers_opt->count()) c.workers = workers;
    if (out_opt->count()) c.output_path = out;
    if (audit_opt->count()) c.audit = audit;
    if (csv_opt->count()) c.csv_path = csv;
    const auto r = scan::run_scan(c, std::cout, std::cerr);
    std::size_t tv = 0;
    for (const auto& [k, v] : r.three_valued) tv += v.size();
    std::cerr << "records written: " << r.records_written << ", skipped: " << r.records_skipped
              << ", three-valued: " << tv << ", check failures: " << r.failures << '\n';
    return r.failures == 0 ? kOk : kCheckFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailure;
  }
}
