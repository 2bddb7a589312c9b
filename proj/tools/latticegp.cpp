// latticegp: generate, verify, analyze and benchmark lattice point sets with
// no d+2 points on a common sphere or hyperplane.
//
// Exit codes: 0 ok, 1 property violated, 2 usage error, 3 internal failure.

#include <lattice_gp/lattice_gp.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace lgp;

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
  std::string method;
  Coord n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  std::string order = "lex";
  double c_const = 0.0;
  std::size_t retries = 3;
  std::string out;
};

Construction construct(const std::string& method, Coord n, std::size_t d, std::uint64_t seed, const std::string& order,
                       double c_const, std::size_t retries) {
  if (method == "moment") return moment_curve(n, d);
  if (method == "pipeline") {
    PipelineOptions opt;
    opt.c_const = c_const;
    opt.retries = retries;
    return theorem1_pipeline(n, d, seed, opt);
  }
  if (method == "greedy") {
    if (order != "lex" && order != "random") throw UsageError("--order must be lex or random");
    return greedy_construct(n, d, seed, order == "lex" ? CandidateOrder::lex : CandidateOrder::random);
  }
  throw UsageError("unknown method '" + method + "' (expected moment, pipeline or greedy)");
}

// Re-checks a construction's guarantee independently of the flag it reports.
void verify_or_fail(const Construction& c) {
  const bool ok = c.report.method == Method::moment_curve ? moment_guarantee_holds(c.points)
                                                          : find_violations(c.points).empty();
  if (!ok || !c.report.verified || c.report.final_size != c.points.size())
    throw InternalError(std::string("construction failed verification: ") + to_string(c.report.method));
}

int run_gen(const GenOptions& o) {
  const auto c = construct(o.method, o.n, o.d, o.seed, o.order, o.c_const, o.retries);
  verify_or_fail(c);
  for (const auto& w : c.report.warnings) std::cerr << "warning: " << w << "\n";
  const std::string report = to_json(c.report).dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << dump_point_set(c.points);
    std::cerr << report;
  } else {
    write_text(o.out, dump_point_set(c.points));
    std::cout << report;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

int run_verify(const std::string& input, std::optional<std::size_t> threshold) {
  const PointSet ps = load_point_set(input);
  const std::size_t t = threshold.value_or(ps.dim() + 2);
  if (t < 1) throw UsageError("--threshold must be positive");
  const auto witnesses = find_violations(ps, t);
  if (witnesses.empty()) {
    std::cout << "OK\n";
    return kOk;
  }
  Json list = Json::array();
  for (const auto& w : witnesses) list.push_back(to_json(w));
  std::cout << list.dump(2) << "\n";
  return kViolated;
}

// ---------------------------------------------------------------------------
// stats

struct StatsOptions {
  std::string input;
  std::string which = "rich";
  std::size_t z = 5;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> arity;
};

Json rich_section(const PointSet& ps) {
  const auto h = rich_surface_histogram(ps);
  Json j;
  j["surfaces"] = h.surfaces.size();
  j["spheres"] = h.sphere_count;
  j["hyperplanes"] = h.hyperplane_count;
  j["max_incidence"] = h.max_incidence();
  Json cumulative = Json::array();
  for (std::size_t r = ps.dim() + 1; r <= h.max_incidence(); ++r) cumulative.push_back({{"r", r}, {"count", h.at_least(r)}});
  j["at_least"] = std::move(cumulative);
  auto dyadic = [](const std::map<unsigned, std::size_t>& m) {
    Json a = Json::array();
    for (auto [i, c] : m) a.push_back({{"i", i}, {"low", 1ull << i}, {"count", c}});
    return a;
  };
  j["dyadic"] = dyadic(h.dyadic());
  j["dyadic_spheres"] = dyadic(h.dyadic_spheres);
  j["dyadic_hyperplanes"] = dyadic(h.dyadic_hyperplanes);
  j["tuple_total"] = to_json(h.tuple_total());
  Json records = Json::array();
  for (const auto& s : h.surfaces)
    records.push_back({{"kind", s.surface.is_sphere() ? "sphere" : "hyperplane"},
                       {"coefficients", to_json(s.surface)},
                       {"k", s.incidences}});
  j["records"] = std::move(records);
  return j;
}

Json lines_section(const PointSet& ps) {
  Integer triples = 0;
  std::size_t lines = 0;
  std::size_t longest = 0;
  for (const auto& members : spanned_flats(ps, 1)) {
    if (members.size() < 3) continue;
    ++lines;
    longest = std::max(longest, members.size());
    triples += binomial(members.size(), 3);
  }
  return {{"collinear_triples", to_json(triples)}, {"lines_with_3_or_more", lines}, {"max_points_on_line", longest}};
}

Json cohyperplanar_section(const PointSet& ps, std::optional<std::size_t> arity) {
  const std::size_t a = arity.value_or(ps.dim() + 2);
  if (a < ps.dim() + 1) throw UsageError("--arity must be at least d+1");
  return {{"arity", a}, {"tuples", to_json(count_cohyperplanar_tuples(ps, a))}};
}

Json traces_section(const PointSet& ps, const StatsOptions& o) {
  if (o.z > ps.size()) throw UsageError("--z exceeds the number of points");
  if (o.z > 64) throw UsageError("--z must be at most 64");
  const auto r = count_traces(ps, o.z, o.trials, o.seed);
  Json j{{"z", r.z},
         {"max_traces", r.max_traces},
         {"sauer_shelah_bound", to_json(r.sauer_shelah_bound)},
         {"within_bound", Integer(r.max_traces) <= r.sauer_shelah_bound},
         {"exhaustive", r.exhaustive},
         {"subsets_examined", r.subsets_examined}};
  if (!r.exhaustive) j["seed"] = o.seed;
  return j;
}

int run_stats(const StatsOptions& o) {
  const PointSet ps = load_point_set(o.input);
  std::vector<std::string> sections;
  std::stringstream ss(o.which);
  for (std::string item; std::getline(ss, item, ',');) sections.push_back(item);
  const std::set<std::string> known{"rich", "lines", "cohyperplanar", "traces"};
  for (const auto& s : sections)
    if (!known.count(s)) throw UsageError("unknown stats section '" + s + "' (expected rich, lines, cohyperplanar, traces)");

  Json out;
  out["d"] = ps.dim();
  out["n"] = ps.side();
  out["size"] = ps.size();
  for (const auto& s : sections) {
    if (s == "rich") out["rich"] = rich_section(ps);
    if (s == "lines") out["lines"] = lines_section(ps);
    if (s == "cohyperplanar") out["cohyperplanar"] = cohyperplanar_section(ps, o.arity);
    if (s == "traces") out["traces"] = traces_section(ps, o);
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  std::size_t d = 0;
  std::vector<Coord> n_list;
  std::vector<std::string> methods{"moment", "greedy"};
  std::vector<std::uint64_t> seeds{0};
  std::string order = "random";
  double c_const = 0.0;
  std::size_t retries = 3;
  std::string csv;
  bool no_timing = false;
};

struct BenchRow {
  std::string method;
  std::size_t d;
  Coord n;
  std::uint64_t seed;
  std::size_t final_size;
  double runtime_ms;
  std::optional<double> exponent;
};

int run_bench(const BenchOptions& o) {
  if (o.n_list.empty()) throw UsageError("--n-list must not be empty");
  if (o.methods.empty()) throw UsageError("--methods must not be empty");
  if (o.seeds.empty()) throw UsageError("--seeds must not be empty");
  for (Coord n : o.n_list)
    if (n < 2) throw UsageError("every n must be at least 2");
  for (const auto& m : o.methods)
    if (m != "moment" && m != "pipeline" && m != "greedy") throw UsageError("unknown method '" + m + "'");
  if (std::find(o.methods.begin(), o.methods.end(), "pipeline") != o.methods.end() && o.d < 3)
    throw UsageError("pipeline requires d >= 3");

  std::vector<BenchRow> rows;
  for (const auto& method : o.methods)
    for (Coord n : o.n_list)
      for (std::uint64_t seed : o.seeds) {
        const auto start = std::chrono::steady_clock::now();
        const auto c = construct(method, n, o.d, seed, o.order, o.c_const, o.retries);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        verify_or_fail(c);
        BenchRow row{method, o.d, n, seed, c.points.size(), ms, std::nullopt};
        if (row.final_size >= 1)
          row.exponent = std::log(static_cast<double>(row.final_size)) / std::log(static_cast<double>(n));
        rows.push_back(row);
      }
  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.method, a.d, a.n, a.seed) < std::tie(b.method, b.d, b.n, b.seed);
  });

  std::ostringstream csv;
  csv << "method,d,n,seed,final_size,runtime_ms,exponent_estimate\n";
  for (const auto& r : rows)
    csv << r.method << ',' << r.d << ',' << r.n << ',' << r.seed << ',' << r.final_size << ','
        << (o.no_timing ? std::string() : fixed(r.runtime_ms, 3)) << ',' << (r.exponent ? fixed(*r.exponent) : "")
        << '\n';

  const double d = static_cast<double>(o.d);
  Json summary;
  summary["d"] = o.d;
  summary["reference_exponents"] = {{"pipeline_3_over_d_plus_1", 3.0 / (d + 1.0)},
                                    {"baseline_1_over_d_minus_1", 1.0 / (d - 1.0)},
                                    {"moment_curve_linear", 1.0}};
  Json per_method = Json::object();
  for (const auto& method : o.methods) {
    Json series = Json::array();
    for (Coord n : o.n_list) {
      double total = 0;
      std::size_t count = 0;
      std::size_t size_total = 0;
      for (const auto& r : rows)
        if (r.method == method && r.n == n) {
          size_total += r.final_size;
          if (r.exponent) {
            total += *r.exponent;
            ++count;
          }
        }
      series.push_back({{"n", n},
                        {"mean_final_size", static_cast<double>(size_total) / static_cast<double>(o.seeds.size())},
                        {"mean_exponent", count ? Json(total / static_cast<double>(count)) : Json(nullptr)}});
    }
    per_method[method] = std::move(series);
  }
  summary["methods"] = std::move(per_method);
  summary["generator"] = std::string(kGeneratorName);

  if (o.csv.empty()) {
    std::cout << csv.str();
    std::cerr << summary.dump(2) << "\n";
  } else {
    write_text(o.csv, csv.str());
    std::cout << summary.dump(2) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// vc-check

int run_vc_check(Coord n, std::size_t d, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw UsageError("--samples must be at least 1");
  if (d < 2 || n < 1) throw UsageError("need d >= 2 and n >= 1");
  const double cells = std::pow(static_cast<double>(n), static_cast<double>(d));
  if (cells < static_cast<double>(d + 2)) throw UsageError("[n]^d has fewer than d+2 points");

  Rng rng(seed, 0x76632d636865636bull);
  std::map<std::string, std::uint64_t> reasons;
  std::map<std::size_t, std::uint64_t> depths;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::set<LatticePoint> chosen;
    std::vector<LatticePoint> q;
    while (q.size() < d + 2) {
      std::vector<Coord> c(d);
      for (auto& x : c) x = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(n)));
      LatticePoint p(std::move(c));
      if (chosen.insert(p).second) q.push_back(std::move(p));
    }
    VcRefutation r;
    try {
      r = vc_refute(q);
    } catch (const InvalidCertificate& e) {
      throw InternalError(e.what());
    }
    ++reasons[to_string(r.reason)];
    ++depths[r.depth()];
  }
  Json out;
  out["d"] = d;
  out["n"] = n;
  out["samples"] = samples;
  out["seed"] = seed;
  out["valid"] = samples;
  Json rj = Json::object();
  for (const char* name : {"not_cospherical", "unique_sphere_forces_extra_point", "degenerate_recursed"})
    rj[name] = reasons.count(name) ? reasons[name] : 0;
  out["reasons"] = std::move(rj);
  Json dj = Json::object();
  for (auto [k, v] : depths) dj[std::to_string(k)] = v;
  out["recursion_depths"] = std::move(dj);
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice point sets with no d+2 points on a sphere or hyperplane"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Construct a point set");
  gen_cmd->add_option("--method", gen.method, "moment, pipeline or greedy")->required();
  gen_cmd->add_option("--n", gen.n, "Side of the grid [n]^d")->required();
  gen_cmd->add_option("--d", gen.d, "Dimension")->required();
  gen_cmd->add_option("--seed", gen.seed, "64-bit seed");
  gen_cmd->add_option("--order", gen.order, "Greedy candidate order: lex or random");
  gen_cmd->add_option("--c-const", gen.c_const, "Pipeline subsample constant c");
  gen_cmd->add_option("--retries", gen.retries, "Pipeline first-stage resampling limit");
  gen_cmd->add_option("--out", gen.out, "Point-set file (stdout if omitted)");

  std::string verify_input;
  std::optional<std::size_t> verify_threshold;
  auto* verify_cmd = app.add_subcommand("verify", "Check a point-set file for rich surfaces");
  verify_cmd->add_option("input", verify_input, "Point-set file")->required();
  verify_cmd->add_option("--threshold", verify_threshold, "Minimum points on a surface to report (default d+2)");

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Report incidence statistics of a point-set file");
  stats_cmd->add_option("input", stats.input, "Point-set file")->required();
  stats_cmd->add_option("--which", stats.which, "Comma-separated sections: rich, lines, cohyperplanar, traces");
  stats_cmd->add_option("--z", stats.z, "Subset size for traces");
  stats_cmd->add_option("--trials", stats.trials, "Sampled subsets when exhaustive trace counting is too large");
  stats_cmd->add_option("--seed", stats.seed, "Seed for sampled traces");
  stats_cmd->add_option("--arity", stats.arity, "Tuple size for cohyperplanar (default d+2)");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run constructions over a parameter grid and emit CSV");
  bench_cmd->add_option("--d", bench.d, "Dimension")->required();
  bench_cmd->add_option("--n-list", bench.n_list, "Grid sides")->delimiter(',')->expected(0, -1);
  bench_cmd->add_option("--methods", bench.methods, "Methods: moment, pipeline, greedy")->delimiter(',');
  bench_cmd->add_option("--seeds", bench.seeds, "Seeds")->delimiter(',');
  bench_cmd->add_option("--order", bench.order, "Greedy candidate order: lex or random");
  bench_cmd->add_option("--c-const", bench.c_const, "Pipeline subsample constant c");
  bench_cmd->add_option("--retries", bench.retries, "Pipeline first-stage resampling limit");
  bench_cmd->add_option("--csv", bench.csv, "CSV output file (stdout if omitted)");
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Leave runtime_ms empty so output is byte-reproducible");

  Coord vc_n = 0;
  std::size_t vc_d = 0;
  std::uint64_t vc_samples = 0;
  std::uint64_t vc_seed = 0;
  auto* vc_cmd = app.add_subcommand("vc-check", "Refute shattering for random (d+2)-subsets");
  vc_cmd->add_option("--n", vc_n, "Side of the grid")->required();
  vc_cmd->add_option("--d", vc_d, "Dimension")->required();
  vc_cmd->add_option("--samples", vc_samples, "Number of random subsets")->required();
  vc_cmd->add_option("--seed", vc_seed, "64-bit seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*verify_cmd) return run_verify(verify_input, verify_threshold);
    if (*stats_cmd) return run_stats(stats);
    if (*bench_cmd) return run_bench(bench);
    if (*vc_cmd) return run_vc_check(vc_n, vc_d, vc_samples, vc_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
