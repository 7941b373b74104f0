// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Run all criteria by default or a single one with --criterion N.
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "grtl/cli.hpp"
#include "grtl/constructions.hpp"
#include "grtl/eulerian.hpp"
#include "grtl/graph.hpp"
#include "grtl/nn.hpp"
#include "grtl/oracles.hpp"
#include "grtl/rng.hpp"
#include "grtl/tokenize.hpp"

using namespace grtl;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Failure details are collected here and printed after the verdict line.
std::string g_detail;

bool fail(const std::string& why) {
  g_detail = why;
  return false;
}

// ---------------------------------------------------------------------------
// 1. single cycle vs two half cycles: exact classification, all even sizes

bool criterion_one_vs_two() {
  const Clock::time_point start = Clock::now();
  int instances = 0;
  for (int n = 6; n <= 64; n += 2) {
    const TransformerSpec spec = build_one_vs_two(n, NetMode::exact_map);
    std::optional<TransformerSpec> net;
    if (n <= 32) net = build_one_vs_two(n, NetMode::explicit_net);
    for (int parts = 1; parts <= 2; ++parts) {
      for (int rep = 0; rep < 10; ++rep) {
        const Graph g = gen_cycles(n, parts, derive_seed(101, n * 1000 + parts * 100 + rep));
        const int want = parts == 1 ? 1 : 0;
        if (run_one_vs_two(spec, g) != want)
          return fail("misclassified n=" + std::to_string(n) + " parts=" + std::to_string(parts) +
                      " rep=" + std::to_string(rep));
        if (net && run_one_vs_two(*net, g) != want)
          return fail("relu-net variant misclassified n=" + std::to_string(n) +
                      " parts=" + std::to_string(parts));
        ++instances;
      }
    }
  }
  const double secs = seconds_since(start);
  if (instances != 600) return fail("expected 600 instances, ran " + std::to_string(instances));
  if (secs >= 60.0) return fail("runtime " + std::to_string(secs) + "s exceeds the 60s budget");
  return true;
}

// ---------------------------------------------------------------------------
// 2. adjacency powers: exact after rounding, small residual before

bool criterion_power() {
  const Clock::time_point start = Clock::now();
  const int n = 64;
  for (int t = 0; t < 50; ++t) {
    const Graph g = gen_digraph(n, 1, 16, 3 * n, t % 4, derive_seed(202, t));
    for (int L = 2; L <= 4; ++L) {
      const TransformerSpec spec = build_power_transformer(n, L, 1e-6, NetMode::exact_map);
      const PowerRun run = run_power(spec, g);
      if (run.max_pre_round_residual >= 1e-6)
        return fail("pre-round residual " + std::to_string(run.max_pre_round_residual) +
                    " at graph " + std::to_string(t) + " L=" + std::to_string(L));
      const IntMatrix expect = oracle_matrix_power(g, L);
      if (run.result != expect)
        return fail("post-round mismatch at graph " + std::to_string(t) +
                    " L=" + std::to_string(L));
    }
  }
  const double secs = seconds_since(start);
  if (secs >= 120.0) return fail("runtime " + std::to_string(secs) + "s exceeds the 120s budget");
  return true;
}

// ---------------------------------------------------------------------------
// 3. sparse two-cycle detection at n=256, d=8, alpha=4

bool criterion_sparse_two_cycle() {
  const int n = 256, d = 8;
  const double alpha = 4.0;
  const int width_cap = 2 * static_cast<int>(std::ceil(alpha * d * std::log(n))) + 2;  // 358
  const TransformerSpec probe = build_sparse_two_cycle(n, d, alpha, 0.0, derive_seed(303, 0));
  if (probe.width() > width_cap)
    return fail("width " + std::to_string(probe.width()) + " exceeds " +
                std::to_string(width_cap));
  int passes = 0;
  for (int t = 0; t < 100; ++t) {
    const Graph g = gen_digraph(n, 1, d, (n * d) / 3, t % 3, derive_seed(304, t));
    const SparseVerify v =
        verify_sparse_two_cycle(g, d, alpha, 0.0, derive_seed(305, t), /*max_attempts=*/5);
    if (v.pass) ++passes;
  }
  if (passes < 99)
    return fail("indicator agreed on only " + std::to_string(passes) + "/100 graphs");
  g_detail = std::to_string(passes) + "/100 graphs agreed";
  return true;
}

// ---------------------------------------------------------------------------
// 4. subgraph counting: triangles and 4-cycles exact, widths within bound

long long width_cap_for(int n, int k) {
  return static_cast<long long>(std::ceil(std::pow(n, 2.0 - 1.0 / k))) +
         2 * static_cast<long long>(std::ceil(std::pow(n, 1.0 / k))) + 4;
}

bool criterion_subgraph() {
  for (int t = 0; t < 30; ++t) {
    const int n = 30 + t;
    const Graph host = gen_erdos_renyi(n, 0.1, derive_seed(404, t));
    for (const int k : {3, 4}) {
      const Graph pattern = make_cycle(k);
      const TransformerSpec spec = build_subgraph_counter(n, k, pattern, NetMode::exact_map);
      if (spec.width() > width_cap_for(n, k))
        return fail("width " + std::to_string(spec.width()) + " over bound at n=" +
                    std::to_string(n) + " k=" + std::to_string(k));
      if (run_subgraph_count(spec, host) != oracle_subgraph_count(host, pattern))
        return fail("count mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
  }
  // planted 4-cliques against a sparse background
  for (int t = 0; t < 5; ++t) {
    const int n = 16;
    const Graph base = gen_erdos_renyi(n, 0.15, derive_seed(405, t));
    Rng rng(derive_seed(406, t));
    std::set<int> picked;
    while (picked.size() < 4) picked.insert(static_cast<int>(rng.next_int(0, n - 1)));
    std::set<std::pair<int, int>> edges(base.edges.begin(), base.edges.end());
    for (int a : picked)
      for (int b : picked)
        if (a < b) edges.insert({a, b});
    const Graph host = graph_from_edges(n, false, {edges.begin(), edges.end()});
    const Graph pattern = make_complete(4);
    const TransformerSpec spec = build_subgraph_counter(n, 4, pattern, NetMode::exact_map);
    if (spec.width() > width_cap_for(n, 4)) return fail("clique instance width over bound");
    const long long got = run_subgraph_count(spec, host);
    if (got != oracle_subgraph_count(host, pattern) || got < 1)
      return fail("planted-clique count wrong at instance " + std::to_string(t));
  }
  return true;
}

// ---------------------------------------------------------------------------
// 5. tour reduction equivalence with the cycle-census shape

bool criterion_eulerian() {
  for (const int m : {4, 6, 8, 10}) {
    const int cycle_nodes = m * m / 2;
    for (int parts = 1; parts <= 2; ++parts) {
      for (int rep = 0; rep < 20; ++rep) {
        const Graph g = gen_cycles(cycle_nodes, parts, derive_seed(505, m * 100 + parts * 10 + rep));
        const EulerianInstance inst = reduce_cycles_to_eulerian(g, std::nullopt);
        if (verify_eulerian(inst) != oracle_connected(g))
          return fail("verdict disagreed with connectivity at m=" + std::to_string(m) +
                      " parts=" + std::to_string(parts));
        const std::vector<long long> census = fragment_cycle_census(inst);
        const long long mm = static_cast<long long>(m) * m;
        const std::vector<long long> want =
            parts == 1 ? std::vector<long long>{mm}
                       : std::vector<long long>{mm / 2, mm / 4, mm / 4};
        if (census != want)
          return fail("cycle census shape wrong at m=" + std::to_string(m) +
                      " parts=" + std::to_string(parts));
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 6. gate nets: interval indicators, table memorizers, shape regression

bool criterion_gadgets() {
  Rng rng(606);
  for (int t = 0; t < 100; ++t) {
    const long long r = rng.next_int(-40, 40);
    const long long s = r + rng.next_int(0, 30);
    const ReluStack gate = build_indicator_net(r, s);
    for (long long z = r - 3; z <= s + 3; ++z) {
      Vector in(1);
      in << static_cast<double>(z);
      const double want = (z >= r && z <= s) ? 1.0 : 0.0;
      if (relu_stack_eval(gate, in)(0) != want)
        return fail("window gate wrong at z=" + std::to_string(z) + " for [" +
                    std::to_string(r) + "," + std::to_string(s) + "]");
    }
  }
  for (int t = 0; t < 100; ++t) {
    const int size = 1 + static_cast<int>(rng.next_int(0, 63));
    std::set<long long> grid;  // dyadic anchors: distinct multiples of 1/8
    while (static_cast<int>(grid.size()) < size) grid.insert(rng.next_int(-256, 256));
    std::vector<double> anchors, values;
    for (long long g : grid) {
      anchors.push_back(static_cast<double>(g) / 8.0);
      values.push_back(static_cast<double>(rng.next_int(-256, 256)) / 4.0);
    }
    const ReluStack net = build_bump_memorizer(anchors, values);
    for (size_t i = 0; i < anchors.size(); ++i) {
      Vector in(1);
      in << anchors[i];
      if (std::abs(relu_stack_eval(net, in)(0) - values[i]) > 1e-12)
        return fail("memorizer missed an anchor in table " + std::to_string(t));
    }
  }
  // Regression: the tempting mirrored-shoulder bump evaluates to 2 at its own
  // anchor and tends to 1 far away, so it cannot memorize a table; the
  // trapezoid form used by build_bump_memorizer localizes exactly.
  const auto relu = [](double v) { return v > 0 ? v : 0.0; };
  const auto mirrored = [&](double x, double a, double dl) {
    return (relu(x - (a - 2 * dl)) - relu(x - (a - dl)) + relu(a + 2 * dl - x) -
            relu(a + dl - x)) /
           dl;
  };
  if (mirrored(1.0, 1.0, 0.25) != 2.0 || mirrored(101.0, 1.0, 0.25) != 1.0)
    return fail("mirrored-shoulder shape regression changed");
  const ReluStack single = build_bump_memorizer({5.0}, {3.0});
  Vector probe(1);
  probe << 5.0;
  if (relu_stack_eval(single, probe)(0) != 3.0) return fail("trapezoid misses its anchor");
  probe << 7.0;
  if (relu_stack_eval(single, probe)(0) != 0.0) return fail("trapezoid leaks outside 2*delta");
  probe << 3.0;
  if (relu_stack_eval(single, probe)(0) != 0.0) return fail("trapezoid leaks outside 2*delta");
  return true;
}

// ---------------------------------------------------------------------------
// 7. tokenizers: spectral residuals, degree blindness, lossless files

bool criterion_tokenizers() {
  // eigen residual on random graphs up to n=128
  Rng rng(707);
  for (int t = 0; t < 100; ++t) {
    const int n = 8 + static_cast<int>(rng.next_int(0, 120));
    const double p = 0.1 + 0.1 * static_cast<double>(rng.next_int(0, 4));
    const Graph g = gen_erdos_renyi(n, p, derive_seed(708, t));
    Matrix lap = Matrix::Zero(n, n);
    for (const auto& [u, v] : g.edges) {
      lap(u, v) -= 1.0;
      lap(v, u) -= 1.0;
      lap(u, u) += 1.0;
      lap(v, v) += 1.0;
    }
    const EigenDecomposition eig = jacobi_eigen_symmetric(lap);
    const Matrix residual = lap * eig.vectors - eig.vectors * eig.values.asDiagonal();
    if (residual.cwiseAbs().maxCoeff() > 1e-8 * n)
      return fail("eigen residual too large at n=" + std::to_string(n));
    const Matrix gram = eig.vectors.transpose() * eig.vectors - Matrix::Identity(n, n);
    if (gram.cwiseAbs().maxCoeff() > 1e-8)
      return fail("eigenvectors lost orthonormality at n=" + std::to_string(n));
  }

  // kernel coordinates cannot separate degrees on unions of 3-node paths
  const int paths = 4, pn = 12;
  std::vector<std::pair<int, int>> base_edges;
  for (int p = 0; p < paths; ++p) {
    base_edges.emplace_back(3 * p, 3 * p + 1);
    base_edges.emplace_back(3 * p + 1, 3 * p + 2);
  }
  const Graph base = graph_from_edges(pn, false, base_edges);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng shuffle(seed);
    std::vector<int> perm(pn);
    for (int i = 0; i < pn; ++i) perm[i] = i;
    for (int i = pn - 1; i > 0; --i)
      std::swap(perm[i], perm[shuffle.next_below(static_cast<uint64_t>(i) + 1)]);
    const Graph g = relabel(base, perm);
    const TokenizedGraph t = tokenize_laplacian(g, paths);
    for (int p = 0; p < paths; ++p) {
      const Vector endpoint = t.tokens.col(1 + perm[3 * p]);
      const Vector middle = t.tokens.col(1 + perm[3 * p + 1]);
      if ((endpoint - middle).lpNorm<Eigen::Infinity>() > 1e-8)
        return fail("degree-1 and degree-2 tokens separated at seed " + std::to_string(seed));
    }
  }

  // adjacency tokens reconstruct the exact edge set
  for (int t = 0; t < 25; ++t) {
    const Graph g = gen_erdos_renyi(20, 0.2, derive_seed(709, t));
    const TokenizedGraph tok = tokenize_adjacency(g, 20, false);
    std::vector<std::pair<int, int>> got;
    for (int i = 0; i < 20; ++i)
      for (int j = i + 1; j < 20; ++j)
        if (tok.tokens(j, i) == 1.0) got.emplace_back(i, j);
    if (got != g.edges) return fail("adjacency round trip lost edges at t=" + std::to_string(t));
  }

  // dataset files survive an export/import/export cycle byte-for-byte
  CorpusSpec spec;
  spec.families = {"er", "rgg", "ba", "sbm"};
  spec.n = 12;
  spec.count = 5000;
  spec.seed = 710;
  const std::vector<Graph> corpus = gen_corpus(spec, CorpusLabel::any);
  std::vector<TokenizedGraph> data;
  data.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    TokenizedGraph t = tokenize_adjacency(corpus[i], 12, true);
    t.graph_id = "corpus-" + std::to_string(i);
    if (i % 3 != 2) t.label = oracle_connected(corpus[i]) ? 1.0 : 0.0;
    data.push_back(std::move(t));
  }
  const fs::path dir = fs::temp_directory_path() / "grtl_acceptance";
  fs::create_directories(dir);
  for (const char* ext : {".jsonl", ".csv"}) {
    const fs::path first = dir / (std::string("corpus_a") + ext);
    const fs::path second = dir / (std::string("corpus_b") + ext);
    export_dataset(data, first.string());
    const std::vector<TokenizedGraph> loaded = import_dataset(first.string());
    if (loaded.size() != data.size()) return fail(std::string("import lost records for ") + ext);
    export_dataset(loaded, second.string());
    std::ifstream fa(first, std::ios::binary), fb(second, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str() || sa.str().empty())
      return fail(std::string("export/import not byte-identical for ") + ext);
  }
  return true;
}

// ---------------------------------------------------------------------------
// 8. CLI byte-reproducibility across worker-thread counts

std::string slurp_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion_cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "grtl_acceptance";
  fs::create_directories(dir);
  const std::vector<std::vector<std::string>> commands = {
      {"verify", "--construction", "one-vs-two", "--n", "16", "--trials", "8", "--seed", "11"},
      {"verify", "--construction", "power", "--n", "16", "--L", "3", "--trials", "6", "--seed",
       "12"},
      {"verify", "--construction", "sparse2cycle", "--n", "48", "--d", "5", "--trials", "4",
       "--seed", "13"},
      {"verify", "--construction", "subgraph", "--n", "20", "--pattern", "triangle", "--trials",
       "4", "--seed", "14"},
      {"verify", "--construction", "eulerian", "--n", "18", "--trials", "4", "--seed", "15"},
      {"sweep", "--parameter", "temperature", "--n", "48", "--d", "5", "--trials", "4", "--seed",
       "16"},
  };
  for (size_t c = 0; c < commands.size(); ++c) {
    std::string bytes[2];
    for (int round = 0; round < 2; ++round) {
      const fs::path out = dir / ("det_" + std::to_string(c) + "_" + std::to_string(round));
      std::vector<std::string> args = commands[c];
      args.push_back("--out");
      args.push_back(out.string());
      args.push_back("--threads");
      args.push_back(round == 0 ? "1" : "8");
      std::ostringstream sink;
      std::streambuf* saved = std::cout.rdbuf(sink.rdbuf());
      const int code = run_command(args);
      std::cout.rdbuf(saved);
      if (code != 0)
        return fail("command " + std::to_string(c) + " exited " + std::to_string(code));
      bytes[round] = slurp_file(out) + "\n--stdout--\n" + sink.str();
    }
    if (bytes[0] != bytes[1])
      return fail("command " + std::to_string(c) + " differed between 1 and 8 threads");
  }
  return true;
}

struct Criterion {
  int index;
  const char* name;
  bool (*run)();
};

const Criterion kCriteria[] = {
    {1, "one cycle vs two half cycles, 600 instances", criterion_one_vs_two},
    {2, "adjacency powers exact at n=64, L in {2,3,4}", criterion_power},
    {3, "sparse two-cycle indicator at n=256, d=8", criterion_sparse_two_cycle},
    {4, "triangle/4-cycle/clique counts exact, widths bounded", criterion_subgraph},
    {5, "tour reduction equivalence and cycle census", criterion_eulerian},
    {6, "interval gates, table memorizers, shape regression", criterion_gadgets},
    {7, "spectral tokens, degree blindness, lossless files", criterion_tokenizers},
    {8, "CLI byte-reproducible across 1 and 8 threads", criterion_cli_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (only < 0 || only > 8) {
    std::cerr << "criterion must be between 1 and 8\n";
    return 2;
  }
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.index != only) continue;
    g_detail.clear();
    const Clock::time_point start = Clock::now();
    const bool ok = c.run();
    std::ostringstream line;
    line << "criterion " << c.index << ": " << (ok ? "PASS" : "FAIL") << " - " << c.name << " ("
         << std::fixed << std::setprecision(1) << seconds_since(start) << "s)";
    if (!g_detail.empty()) line << " [" << g_detail << "]";
    std::cout << line.str() << std::endl;
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
