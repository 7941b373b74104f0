#include "grtl/cli.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "grtl/constructions.hpp"
#include "grtl/eulerian.hpp"
#include "grtl/graph.hpp"
#include "grtl/oracles.hpp"
#include "grtl/report.hpp"
#include "grtl/rip.hpp"
#include "grtl/rng.hpp"
#include "grtl/tokenize.hpp"

namespace grtl {
namespace {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

uint64_t parse_u64(const std::string& text, const char* what) {
  uint64_t v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument(std::string(what) + " must be an unsigned integer");
  return v;
}

uint64_t resolve_seed(bool seed_given, uint64_t seed_value) {
  if (seed_given) return seed_value;
  if (const char* env = std::getenv("GRTL_SEED")) return parse_u64(env, "GRTL_SEED");
  throw std::invalid_argument("this command is randomized: pass --seed or set GRTL_SEED");
}

std::string canonical_construction(const std::string& name) {
  if (name == "one-vs-two" || name == "one_vs_two") return "one_vs_two";
  if (name == "power") return "power";
  if (name == "sparse2cycle" || name == "sparse_two_cycle") return "sparse_two_cycle";
  if (name == "subgraph") return "subgraph";
  if (name == "eulerian") return "eulerian";
  throw std::invalid_argument("unknown construction: " + name);
}

std::string canonical_mode(const std::string& mode) {
  if (mode == "exact-map" || mode == "exact_map") return "exact_map";
  if (mode == "explicit-net" || mode == "explicit_net") return "explicit_net";
  throw std::invalid_argument("mode must be exact-map or explicit-net");
}

// Runs fn(0..count-1) with results in index order. The per-index work derives
// everything it needs from the index, so the thread count cannot change any
// output byte.
template <typename Fn>
std::vector<ConstructionReport> run_indexed(int count, int threads, Fn&& fn) {
  std::vector<ConstructionReport> rows(static_cast<size_t>(std::max(count, 0)));
  const int workers = std::max(1, std::min(threads, count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) rows[i] = fn(i);
    return rows;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error = nullptr;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) rows[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

// Certification failures inside a trial (bad rounding, broken invariants) are
// findings, not crashes: they become pass=false rows. Configuration mistakes
// keep propagating as invalid_argument.
ConstructionReport guarded_verify(const std::string& name, const Graph& g, json params,
                                  bool timing) {
  const auto start = std::chrono::steady_clock::now();
  ConstructionReport row;
  try {
    row = verify_construction(name, g, params);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    row.construction = name;
    row.n = g.n;
    row.params = std::move(params);
    row.params["error"] = e.what();
    row.pass = false;
    row.max_abs_error = 1.0;
  }
  if (timing)
    row.millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
  return row;
}

struct VerifyOptions {
  std::string construction;
  int n = 16;
  int L = 2;
  int d = 8;
  double alpha = 4.0;
  double eps = 1e-6;
  double temperature = 0.0;
  double p = 0.1;
  std::string pattern = "triangle";
  int trials = 10;
  int max_attempts = 5;
  std::string mode = "exact-map";
  int threads = 1;
  bool timing = false;
  uint64_t seed = 0;
  bool seed_given = false;
  int turnaround = 0;
  bool turnaround_given = false;
  std::string out;
  std::string in_path;
};

int summarize_and_write(const std::string& name, const VerifyOptions& opt,
                        const std::vector<ConstructionReport>& rows) {
  int passes = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].pass) {
      ++passes;
      continue;
    }
    std::cout << "  trial " << i << " FAIL";
    if (rows[i].params.contains("error"))
      std::cout << ": " << rows[i].params.at("error").get<std::string>();
    std::cout << "\n";
  }
  std::cout << "verify " << name << " n=" << opt.n << " trials=" << rows.size() << ": " << passes
            << "/" << rows.size() << (passes == static_cast<int>(rows.size()) ? " PASS" : " FAIL")
            << "\n";
  if (!opt.out.empty()) write_report_json(rows, opt.out);
  return passes == static_cast<int>(rows.size()) ? 0 : 1;
}

int cmd_verify(const VerifyOptions& opt) {
  const std::string name = canonical_construction(opt.construction);

  if (name == "eulerian" && !opt.in_path.empty()) {
    std::ifstream in(opt.in_path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open instance file: " + opt.in_path);
    const EulerianInstance inst = eulerian_from_json(json::parse(in));
    const bool ok = verify_eulerian(inst);
    std::cout << "tour " << (ok ? "valid" : "invalid") << "; cycle census [";
    const auto census = fragment_cycle_census(inst);
    for (size_t i = 0; i < census.size(); ++i) std::cout << (i ? "," : "") << census[i];
    std::cout << "]\n";
    return ok ? 0 : 1;
  }

  const uint64_t seed = resolve_seed(opt.seed_given, opt.seed);
  const std::string mode = canonical_mode(opt.mode);
  if (opt.trials < 1) throw std::invalid_argument("--trials must be positive");

  auto trial = [&](int t) -> ConstructionReport {
    json params{{"mode", mode}};
    Graph g;
    if (name == "one_vs_two") {
      const int parts = (opt.n % 2 == 0 && opt.n >= 6) ? (t % 2) + 1 : 1;
      g = gen_cycles(opt.n, parts, derive_seed(seed, t));
    } else if (name == "power") {
      params["L"] = opt.L;
      params["eps"] = opt.eps;
      g = gen_digraph(opt.n, 1, std::max(2, opt.n / 4), 3 * opt.n, 2, derive_seed(seed, t));
    } else if (name == "sparse_two_cycle") {
      params = json{{"d", opt.d},
                    {"alpha", opt.alpha},
                    {"temperature", opt.temperature},
                    {"seed", derive_seed(seed, 100000 + t)},
                    {"max_attempts", opt.max_attempts}};
      g = gen_digraph(opt.n, 1, opt.d, (opt.n * opt.d) / 3, t % 3, derive_seed(seed, t));
    } else if (name == "subgraph") {
      params["pattern"] = opt.pattern;
      g = gen_erdos_renyi(opt.n, opt.p, derive_seed(seed, t));
    } else {  // eulerian equivalence trials over random labelings
      params = json::object();
      if (opt.turnaround_given) params["turnaround"] = opt.turnaround;
      const int parts = (t % 2) + 1;
      g = gen_cycles(opt.n, parts, derive_seed(seed, t));
    }
    return guarded_verify(name, g, params, opt.timing);
  };

  const auto rows = run_indexed(opt.trials, opt.threads, trial);
  return summarize_and_write(name, opt, rows);
}

struct SweepOptions {
  std::string parameter;
  int n = 64;
  int d = 8;
  double alpha = 4.0;
  int k = 3;
  int trials = 20;
  int threads = 1;
  uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
};

// smallest integer r with r^k >= n
int ceil_root(int n, int k) {
  int r = 1;
  while (true) {
    long long v = 1;
    for (int i = 0; i < k; ++i) v *= r;
    if (v >= n) return r;
    ++r;
  }
}

// smallest integer B with B^k >= n^(2k-1), the sizing rule for the slotted
// token region; exact integer arithmetic, no floating-point roots.
long long slotted_width_target(int n, int k) {
  __int128 target = 1;
  for (int i = 0; i < 2 * k - 1; ++i) target *= n;
  long long lo = 1, hi = static_cast<long long>(n) * n;
  while (lo < hi) {
    const long long mid = lo + (hi - lo) / 2;
    __int128 p = 1;
    for (int i = 0; i < k; ++i) p *= mid;
    if (p >= target)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

int cmd_sweep(const SweepOptions& opt) {
  std::ostringstream csv;
  if (opt.parameter == "temperature") {
    const uint64_t seed = resolve_seed(opt.seed_given, opt.seed);
    const double base = sparse_two_cycle_default_temperature(opt.n);
    csv << "parameter,value,n,d,alpha,trials,passes,pass_rate\n";
    for (const double f : {0.25, 0.5, 0.75, 1.0, 1.25}) {
      const double c = f * base;
      const auto rows = run_indexed(opt.trials, opt.threads, [&](int t) {
        const Graph g =
            gen_digraph(opt.n, 1, opt.d, (opt.n * opt.d) / 3, t % 3, derive_seed(seed, t));
        const json params{{"d", opt.d},          {"alpha", opt.alpha},
                          {"temperature", c},    {"seed", derive_seed(seed, 100000 + t)},
                          {"max_attempts", 3}};
        return guarded_verify("sparse_two_cycle", g, params, false);
      });
      int passes = 0;
      for (const auto& row : rows) passes += row.pass ? 1 : 0;
      csv << "temperature," << format_double(c) << ',' << opt.n << ',' << opt.d << ','
          << format_double(opt.alpha) << ',' << opt.trials << ',' << passes << ','
          << format_double(static_cast<double>(passes) / opt.trials) << "\n";
    }
  } else if (opt.parameter == "rip-alpha") {
    const uint64_t seed = resolve_seed(opt.seed_given, opt.seed);
    csv << "parameter,value,rip_dim,n,d,trials,feasible,feasible_rate\n";
    for (const double alpha : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) {
      const RipSystem sys =
          sample_rip_vectors(opt.n, opt.d, alpha, derive_seed(seed, static_cast<uint64_t>(alpha)));
      int feasible = 0;
      Rng rng(derive_seed(seed, 1000 + static_cast<uint64_t>(alpha)));
      for (int t = 0; t < opt.trials; ++t) {
        std::vector<int> support;
        while (static_cast<int>(support.size()) < opt.d) {
          const int cand = static_cast<int>(rng.next_int(0, opt.n - 1));
          if (std::find(support.begin(), support.end(), cand) == support.end())
            support.push_back(cand);
        }
        std::sort(support.begin(), support.end());
        if (compute_phi(sys, support).feasible) ++feasible;
      }
      csv << "rip-alpha," << format_double(alpha) << ',' << sys.rip_dim << ',' << opt.n << ','
          << opt.d << ',' << opt.trials << ',' << feasible << ','
          << format_double(static_cast<double>(feasible) / opt.trials) << "\n";
    }
  } else if (opt.parameter == "width-accounting") {
    csv << "construction,n,param,width,bound,within\n";
    {
      const TransformerSpec spec = build_one_vs_two(opt.n, NetMode::exact_map);
      const int bound = 3 * opt.n;
      csv << "one_vs_two," << opt.n << ",," << spec.width() << ',' << bound << ','
          << (spec.width() <= bound ? 1 : 0) << "\n";
    }
    {
      const TransformerSpec spec = build_power_transformer(opt.n, 2, 1e-6, NetMode::exact_map);
      const int bound = 3 * opt.n;
      csv << "power," << opt.n << ",L=2," << spec.width() << ',' << bound << ','
          << (spec.width() <= bound ? 1 : 0) << "\n";
    }
    {
      const TransformerSpec spec = build_sparse_two_cycle(opt.n, opt.d, opt.alpha, 0.0, 1);
      const int bound =
          2 * static_cast<int>(std::ceil(opt.alpha * opt.d * std::log(opt.n))) + 2;
      csv << "sparse_two_cycle," << opt.n << ",d=" << opt.d << ',' << spec.width() << ',' << bound
          << ',' << (spec.width() <= bound ? 1 : 0) << "\n";
    }
    {
      const Graph pattern = opt.k == 2 ? make_edge() : make_cycle(opt.k);
      const TransformerSpec spec =
          build_subgraph_counter(opt.n, opt.k, pattern, NetMode::exact_map);
      const long long bound = slotted_width_target(opt.n, opt.k) + 2 * ceil_root(opt.n, opt.k) + 4;
      csv << "subgraph," << opt.n << ",k=" << opt.k << ',' << spec.width() << ',' << bound << ','
          << (spec.width() <= bound ? 1 : 0) << "\n";
    }
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + opt.parameter);
  }
  if (!opt.out.empty())
    write_file_atomic(opt.out, csv.str());
  else
    std::cout << csv.str();
  return 0;
}

struct GenOptions {
  std::vector<std::string> families{"er"};
  int n = 32;
  int count = 10;
  std::string label = "any";
  std::string task = "connectivity";
  std::string tokenizer = "adjacency";
  int m = 4;
  int pad = 0;
  bool with_index = false;
  double p = 0.0;
  bool p_given = false;
  double r = 0.0;
  bool r_given = false;
  int attach = 0;
  bool attach_given = false;
  uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
};

int cmd_gen(const GenOptions& opt) {
  if (opt.out.empty()) throw std::invalid_argument("gen: --out is required");
  const uint64_t seed = resolve_seed(opt.seed_given, opt.seed);

  CorpusSpec spec;
  spec.families = opt.families;
  spec.n = opt.n;
  spec.count = opt.count;
  spec.seed = seed;
  if (opt.p_given) spec.params["p"] = opt.p;
  if (opt.r_given) spec.params["r"] = opt.r;
  if (opt.attach_given) spec.params["m"] = static_cast<double>(opt.attach);

  CorpusLabel label = CorpusLabel::any;
  if (opt.label == "connected")
    label = CorpusLabel::connected;
  else if (opt.label == "disconnected")
    label = CorpusLabel::disconnected;
  else if (opt.label != "any")
    throw std::invalid_argument("--label must be any, connected, or disconnected");

  const auto graphs = gen_corpus(spec, label);
  const int pad = opt.pad > 0 ? opt.pad : opt.n;

  std::vector<TokenizedGraph> data;
  data.reserve(graphs.size());
  for (size_t i = 0; i < graphs.size(); ++i) {
    const Graph& g = graphs[i];
    TokenizedGraph t;
    if (opt.tokenizer == "adjacency")
      t = tokenize_adjacency(g, pad, opt.with_index);
    else if (opt.tokenizer == "edgelist")
      t = tokenize_edgelist(g, pad);
    else if (opt.tokenizer == "laplacian")
      t = tokenize_laplacian(g, opt.m);
    else
      throw std::invalid_argument("--tokenizer must be adjacency, edgelist, or laplacian");

    std::ostringstream id;
    id << opt.families[i % opt.families.size()] << '-';
    id.fill('0');
    id.width(5);
    id << i;
    t.graph_id = id.str();

    if (opt.task == "connectivity")
      t.label = oracle_connected(g) ? 1.0 : 0.0;
    else if (opt.task == "triangle-count")
      t.label = static_cast<double>(oracle_subgraph_count(g, make_cycle(3)));
    else if (opt.task == "cycle4-count")
      t.label = static_cast<double>(oracle_subgraph_count(g, make_cycle(4)));
    else
      throw std::invalid_argument("--task must be connectivity, triangle-count, or cycle4-count");
    data.push_back(std::move(t));
  }

  // keep the extension so the exporter picks the right format, then move into place
  const auto dot = opt.out.find_last_of('.');
  if (dot == std::string::npos)
    throw std::invalid_argument("gen: --out needs a .jsonl or .csv extension");
  const std::string tmp = opt.out.substr(0, dot) + ".tmp" + opt.out.substr(dot);
  export_dataset(data, tmp);
  if (std::rename(tmp.c_str(), opt.out.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + opt.out);
  }
  std::cout << "wrote " << data.size() << " tokenized graphs to " << opt.out << "\n";
  return 0;
}

struct ReduceOptions {
  int n = 18;
  int parts = 1;
  uint64_t seed = 0;
  bool seed_given = false;
  std::string turnaround = "auto";
  std::string out;
};

int cmd_reduce(const ReduceOptions& opt) {
  const uint64_t seed = resolve_seed(opt.seed_given, opt.seed);
  const Graph cycles = gen_cycles(opt.n, opt.parts, seed);
  std::optional<int> turnaround;
  if (opt.turnaround != "auto")
    turnaround = static_cast<int>(parse_u64(opt.turnaround, "--turnaround"));
  const EulerianInstance inst = reduce_cycles_to_eulerian(cycles, turnaround);
  const bool ok = verify_eulerian(inst);
  const auto census = fragment_cycle_census(inst);
  std::cout << "reduced " << opt.n << " nodes in " << opt.parts << " cycle(s) to " << inst.n
            << " nodes, " << inst.edges.size() << " doubled edges\n";
  std::cout << "tour " << (ok ? "valid" : "invalid") << "; cycle census [";
  for (size_t i = 0; i < census.size(); ++i) std::cout << (i ? "," : "") << census[i];
  std::cout << "]\n";
  if (!opt.out.empty()) write_file_atomic(opt.out, eulerian_to_json(inst).dump(2) + "\n");
  // a single cycle must verify, a split must not; anything else is a defect
  if (ok != (opt.parts == 1)) {
    std::cerr << "error: reduction verdict disagrees with the construction\n";
    return 1;
  }
  return 0;
}

struct ReportOptions {
  std::vector<std::string> inputs;
  std::string out_csv;
  std::string svg;
};

int cmd_report(const ReportOptions& opt) {
  std::vector<ConstructionReport> all;
  for (const std::string& path : opt.inputs) {
    const auto rows = read_report_json(path);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  if (!opt.out_csv.empty())
    write_report_csv(all, opt.out_csv);
  else
    std::cout << report_csv(all);
  if (!opt.svg.empty()) write_report_svg(all, opt.svg);
  int passes = 0;
  for (const auto& row : all) passes += row.pass ? 1 : 0;
  std::cerr << "merged " << all.size() << " rows from " << opt.inputs.size() << " file(s); "
            << passes << "/" << all.size() << " pass\n";
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  ensure_builtin_maps();
  CLI::App app{"transformer constructions for graph reasoning, with oracle certification"};
  app.name("grtl");
  app.require_subcommand(1);

  VerifyOptions vopt;
  SweepOptions sopt;
  GenOptions gopt;
  ReduceOptions dopt;
  ReportOptions ropt;

  CLI::App* verify = app.add_subcommand("verify", "build a construction and certify it");
  verify->add_option("--construction", vopt.construction,
                     "one-vs-two|power|sparse2cycle|subgraph|eulerian")
      ->required();
  verify->add_option("--n", vopt.n, "node count (default 16)");
  verify->add_option("--L", vopt.L, "power: exponent (default 2)");
  verify->add_option("--d", vopt.d, "sparse2cycle: out-degree bound (default 8)");
  verify->add_option("--alpha", vopt.alpha, "sparse2cycle: embedding multiplier (default 4)");
  verify->add_option("--eps", vopt.eps, "power: accuracy target (default 1e-6)");
  verify->add_option("--temperature", vopt.temperature,
                     "attention temperature, 0 picks the construction default");
  verify->add_option("--p", vopt.p, "subgraph: host edge probability (default 0.1)");
  verify->add_option("--pattern", vopt.pattern, "subgraph: edge|triangle|4-cycle|path3|k4");
  verify->add_option("--trials", vopt.trials, "number of sampled instances (default 10)");
  verify->add_option("--max-attempts", vopt.max_attempts,
                     "sparse2cycle: embedding resample budget (default 5)");
  verify->add_option("--mode", vopt.mode, "exact-map|explicit-net (default exact-map)");
  verify->add_option("--threads", vopt.threads, "worker threads; output is thread-count invariant");
  auto* vseed = verify->add_option("--seed", vopt.seed, "base seed (GRTL_SEED fallback)");
  verify->add_option("--out", vopt.out, "write the JSON report here");
  verify->add_option("--in", vopt.in_path,
                     "eulerian: verify one instance file (exit 0 valid, 1 invalid)");
  auto* vturn = verify->add_option("--turnaround", vopt.turnaround,
                                   "eulerian: fixed turnaround edge index");
  verify->add_flag("--timing", vopt.timing, "record wall time per row (breaks byte reproducibility)");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweeps rendered as CSV");
  sweep->add_option("--parameter", sopt.parameter, "temperature|rip-alpha|width-accounting")
      ->required();
  sweep->add_option("--n", sopt.n, "node count (default 64)");
  sweep->add_option("--d", sopt.d, "out-degree bound (default 8)");
  sweep->add_option("--alpha", sopt.alpha, "embedding multiplier (default 4)");
  sweep->add_option("--k", sopt.k, "pattern size for width accounting (default 3)");
  sweep->add_option("--trials", sopt.trials, "instances per grid point (default 20)");
  sweep->add_option("--threads", sopt.threads, "worker threads");
  auto* sseed = sweep->add_option("--seed", sopt.seed, "base seed (GRTL_SEED fallback)");
  sweep->add_option("--out", sopt.out, "CSV path (stdout if omitted)");

  CLI::App* gen = app.add_subcommand("gen", "generate a labeled, tokenized graph corpus");
  gen->add_option("--family", gopt.families, "er|rgg|ba|sbm, repeat or comma-separate")
      ->delimiter(',');
  gen->add_option("--n", gopt.n, "node count (default 32)");
  gen->add_option("--count", gopt.count, "number of graphs (default 10)");
  gen->add_option("--label", gopt.label, "any|connected|disconnected (default any)");
  gen->add_option("--task", gopt.task, "connectivity|triangle-count|cycle4-count");
  gen->add_option("--tokenizer", gopt.tokenizer, "adjacency|edgelist|laplacian");
  gen->add_option("--m", gopt.m, "laplacian: eigenvalue count (default 4)");
  gen->add_option("--pad", gopt.pad, "pad node slots to this size (default n)");
  gen->add_flag("--with-index", gopt.with_index, "adjacency: append the node index");
  auto* gp = gen->add_option("--p", gopt.p, "er: edge probability override");
  auto* gr = gen->add_option("--r", gopt.r, "rgg: radius override");
  auto* gattach = gen->add_option("--attach", gopt.attach, "ba: edges per new node override");
  auto* gseed = gen->add_option("--seed", gopt.seed, "base seed (GRTL_SEED fallback)");
  gen->add_option("--out", gopt.out, "output path, .jsonl or .csv")->required();

  CLI::App* reduce = app.add_subcommand(
      "reduce", "turn a union of cycles into a doubled-edge tour instance");
  reduce->add_option("--n", dopt.n, "cycle-union node count; must be m*m/2 for an even m >= 4");
  reduce->add_option("--parts", dopt.parts, "1 = one cycle, 2 = two cycles (default 1)");
  auto* dseed = reduce->add_option("--seed", dopt.seed, "labeling seed (GRTL_SEED fallback)");
  reduce->add_option("--turnaround", dopt.turnaround, "auto or an explicit edge index");
  reduce->add_option("--out", dopt.out, "write the instance JSON here");

  CLI::App* report = app.add_subcommand("report", "merge JSON reports into CSV and a chart");
  report->add_option("--in", ropt.inputs, "JSON report files")->required()->delimiter(',');
  report->add_option("--out", ropt.out_csv, "merged CSV path (stdout if omitted)");
  report->add_option("--svg", ropt.svg, "also render a pass-rate chart");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  vopt.seed_given = vseed->count() > 0;
  vopt.turnaround_given = vturn->count() > 0;
  sopt.seed_given = sseed->count() > 0;
  gopt.seed_given = gseed->count() > 0;
  gopt.p_given = gp->count() > 0;
  gopt.r_given = gr->count() > 0;
  gopt.attach_given = gattach->count() > 0;
  dopt.seed_given = dseed->count() > 0;

  try {
    if (verify->parsed()) return cmd_verify(vopt);
    if (sweep->parsed()) return cmd_sweep(sopt);
    if (gen->parsed()) return cmd_gen(gopt);
    if (reduce->parsed()) return cmd_reduce(dopt);
    if (report->parsed()) return cmd_report(ropt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace grtl
