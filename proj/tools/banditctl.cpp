#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cobandit/clustering.hpp"
#include "cobandit/errors.hpp"
#include "cobandit/io.hpp"
#include "cobandit/policies.hpp"
#include "cobandit/replay.hpp"
#include "cobandit/similarity.hpp"
#include "cobandit/synth.hpp"

namespace {

using namespace cobandit;

constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumeric = 4;

struct EnvFlags {
  std::size_t clusters = 10;
  std::size_t dim = 5;
  std::size_t latent_dim = 0;
  std::size_t pool = 10;
  std::size_t arms = 30;
  std::size_t user_dim = 6;
  double noise_std = 0.1;
  std::string model = "bernoulli";
  std::uint64_t env_seed = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--clusters", clusters, "Number of user clusters M");
    cmd->add_option("--dim", dim, "Observed arm feature dimension d");
    cmd->add_option("--latent-dim", latent_dim, "Hidden latent factor dimension");
    cmd->add_option("--pool", pool, "Candidates per event K");
    cmd->add_option("--arms", arms, "Size of the arm universe");
    cmd->add_option("--user-dim", user_dim, "User feature dimension");
    cmd->add_option("--noise-std", noise_std, "Gaussian reward noise");
    cmd->add_option("--model", model, "Reward model: bernoulli|gaussian")
        ->check(CLI::IsMember({"bernoulli", "gaussian"}));
    cmd->add_option("--env-seed", env_seed, "Environment generation seed");
  }

  EnvSpec spec() const {
    EnvSpec s;
    s.num_clusters = clusters;
    s.feature_dim = dim;
    s.latent_dim = latent_dim;
    s.pool_size = pool;
    s.num_arms = arms;
    s.user_dim = user_dim;
    s.noise_std = noise_std;
    s.reward_model = model == "gaussian" ? RewardModel::Gaussian : RewardModel::Bernoulli;
    s.seed = env_seed;
    return s;
  }
};

void write_metrics_csv(const std::string& path, const MetricsSeries& s, bool drop_warmup) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open for write: " + path);
  os << "bucket_index,matched,clicks,bucket_ctr,rolling_ctr,cumulative_ctr\n";
  const auto bc = s.bucket_ctr();
  const auto rc = s.rolling_ctr();
  const auto cc = s.cumulative_ctr();
  const std::size_t start = drop_warmup && s.window > 0 ? std::min(bc.size(), s.window - 1) : 0;
  for (std::size_t i = start; i < bc.size(); ++i) {
    os << i << "," << s.bucket_matched[i] << "," << s.bucket_clicks[i] << ","
       << format_double(bc[i]) << "," << format_double(rc[i]) << "," << format_double(cc[i])
       << "\n";
  }
}

struct MetricsFile {
  std::vector<long long> bucket_index, matched, clicks;
  std::vector<double> bucket_ctr, rolling_ctr, cumulative_ctr;
};

MetricsFile read_metrics_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line)) throw ParseError("metrics csv: empty file " + path);
  MetricsFile f;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw ParseError("metrics csv: bad row in " + path);
    f.bucket_index.push_back(std::stoll(cells[0]));
    f.matched.push_back(std::stoll(cells[1]));
    f.clicks.push_back(std::stoll(cells[2]));
    f.bucket_ctr.push_back(std::stod(cells[3]));
    f.rolling_ctr.push_back(std::stod(cells[4]));
    f.cumulative_ctr.push_back(std::stod(cells[5]));
  }
  return f;
}

int cmd_genlog(const EnvFlags& env, std::size_t events, std::uint64_t seed,
               const std::string& out) {
  const Environment e = Environment::generate(env.spec());
  const std::vector<EventRecord> log = e.gen_log(events, seed);
  std::ofstream os(out);
  if (!os) throw ParseError("cannot open for write: " + out);
  for (const EventRecord& ev : log) write_event(os, ev);
  std::cerr << "wrote " << log.size() << " events to " << out << "\n";
  return 0;
}

int cmd_cluster(const std::string& log_path, std::size_t k, std::uint64_t seed,
                std::size_t max_iters, bool standardize, const std::string& out) {
  EventLogReader reader(log_path);
  std::vector<Vec> points;
  EventRecord e;
  while (reader.next(e)) points.push_back(e.user_features);
  if (reader.skipped())
    std::cerr << "skipped " << reader.skipped() << " malformed lines\n";
  if (points.empty()) throw ParseError("cluster: no usable events in " + log_path);

  Vec mean, inv_std;
  if (standardize) {
    const std::size_t d = points[0].size();
    mean.assign(d, 0.0);
    Vec var(d, 0.0);
    for (const Vec& p : points) axpy(1.0, p, mean);
    for (double& m : mean) m /= static_cast<double>(points.size());
    for (const Vec& p : points)
      for (std::size_t j = 0; j < d; ++j) var[j] += (p[j] - mean[j]) * (p[j] - mean[j]);
    inv_std.assign(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
      const double sd = std::sqrt(var[j] / static_cast<double>(points.size()));
      if (sd > 0.0) inv_std[j] = 1.0 / sd;
    }
    for (Vec& p : points)
      for (std::size_t j = 0; j < d; ++j) p[j] = (p[j] - mean[j]) * inv_std[j];
  }

  ClusterModel model = fit_kmeans(points, k, seed, max_iters);
  if (standardize) {
    // map centroids back to raw feature space so assignment stays consistent
    for (std::size_t i = 0; i < model.k(); ++i)
      for (std::size_t j = 0; j < model.dim(); ++j)
        model.centroids(i, j) = model.centroids(i, j) / inv_std[j] + mean[j];
  }
  write_matrix_csv(out, model.centroids);
  return 0;
}

int cmd_buildw(const std::string& centroid_path, double sparsity_pct, const std::string& out) {
  const ClusterModel model{read_matrix_csv(centroid_path)};
  SimilarityMatrix w = build_w(model);
  if (sparsity_pct < 100.0) w = sparsify(w, sparsity_pct);
  write_matrix_csv(out, w.entries());
  return 0;
}

int cmd_validatew(const std::string& w_path) {
  const Matrix m = read_matrix_csv(w_path);
  SimilarityMatrix::from_matrix(m);  // throws on violation
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) sum += m(i, j);
    if (std::abs(sum - 1.0) > 1e-12)
      throw ConfigError("column " + std::to_string(j) + " sums to " + format_double(sum));
  }
  std::cout << "ok: " << m.rows() << "x" << m.cols() << " column-stochastic\n";
  return 0;
}

struct ReplayFlags {
  std::string algo;
  std::string log_path, centroid_path, w_path, out;
  std::string save_state, load_state;
  double alpha = 0.5, alpha1 = 0.375, alpha2 = 0.375;
  std::size_t latent_dim = 5;
  std::uint64_t seed = 1;
  std::size_t bucket = 2000, window = 500;
  bool bucket_raw = false, drop_warmup = false;
};

int cmd_replay(const ReplayFlags& f) {
  const ClusterModel clusters{read_matrix_csv(f.centroid_path)};

  PolicyConfig cfg;
  cfg.alpha = f.alpha;
  cfg.alpha1 = f.alpha1;
  cfg.alpha2 = f.alpha2;
  cfg.num_clusters = clusters.k();
  cfg.latent_dim = f.algo == "factorucb" ? f.latent_dim : 0;
  cfg.seed = f.seed;

  if (f.algo == "colin" || f.algo == "factorucb") {
    if (f.w_path.empty()) throw ConfigError(f.algo + " requires --w");
    cfg.w = SimilarityMatrix::from_matrix(read_matrix_csv(f.w_path));
    if (cfg.w->size() != clusters.k())
      throw ConfigError("W size does not match centroid count");
  }

  // feature dim comes from the first event
  EventLogReader probe(f.log_path);
  EventRecord first;
  const bool has_events = probe.next(first);
  cfg.feature_dim = has_events ? first.pool.front().features.size() : 1;

  std::unique_ptr<Policy> policy;
  if (!f.load_state.empty()) {
    std::ifstream is(f.load_state);
    if (!is) throw ParseError("cannot open snapshot: " + f.load_state);
    policy = load_policy_snapshot(is, cfg);
    if (policy->name() != f.algo)
      throw ConfigError("snapshot algo '" + policy->name() + "' does not match --algo " + f.algo);
  } else {
    policy = make_policy(f.algo, cfg);
  }

  ReplayOptions opts;
  opts.bucket_size = f.bucket;
  opts.window = f.window;
  opts.bucket_raw = f.bucket_raw;
  opts.progress_every = 1000000;
  opts.on_progress = [](long long n) { std::cerr << "processed " << n << " events\n"; };

  class FileStream final : public EventStream {
   public:
    explicit FileStream(const std::string& path) : reader_(path) {}
    bool next(EventRecord& out) override { return reader_.next(out); }
    EventLogReader reader_;
  } stream(f.log_path);

  const MetricsSeries series = replay(*policy, clusters, stream, opts);
  write_metrics_csv(f.out, series, f.drop_warmup);
  if (series.skipped + stream.reader_.skipped() > 0)
    std::cerr << "skipped " << series.skipped + stream.reader_.skipped()
              << " malformed events\n";

  if (!f.save_state.empty()) {
    std::ofstream os(f.save_state);
    if (!os) throw ParseError("cannot open snapshot for write: " + f.save_state);
    policy->save(os);
  }
  std::cerr << "matched " << series.total_matched << "/" << series.total_events
            << " events, ctr " << format_double(series.overall_ctr()) << "\n";
  return 0;
}

int cmd_simulate(const EnvFlags& env_flags, const std::string& algo, std::size_t horizon,
                 std::uint64_t seed, double alpha, double alpha1, double alpha2,
                 double sparsity_pct, const std::string& out) {
  const Environment env = Environment::generate(env_flags.spec());

  std::unique_ptr<Policy> policy;
  if (algo == "oracle") {
    policy = std::make_unique<OraclePolicy>(env);
  } else {
    PolicyConfig cfg;
    cfg.alpha = alpha;
    cfg.alpha1 = alpha1;
    cfg.alpha2 = alpha2;
    cfg.num_clusters = env.spec().num_clusters;
    cfg.feature_dim = env.spec().feature_dim;
    cfg.latent_dim = algo == "factorucb" ? std::max<std::size_t>(1, env.spec().latent_dim) : 0;
    cfg.seed = seed;
    SimilarityMatrix w = env.w_star();
    if (sparsity_pct < 100.0) w = sparsify(w, sparsity_pct);
    cfg.w = std::move(w);
    policy = make_policy(algo, cfg);
  }

  const SimResult res = simulate(env, *policy, horizon, seed);
  std::ofstream os(out);
  if (!os) throw ParseError("cannot open for write: " + out);
  os << "step,inst_regret,cum_regret,cum_reward\n";
  for (std::size_t t = 0; t < res.inst_regret.size(); ++t)
    os << t << "," << format_double(res.inst_regret[t]) << ","
       << format_double(res.cum_regret[t]) << "," << format_double(res.cum_reward[t]) << "\n";
  std::cerr << "total reward " << format_double(res.total_reward) << ", total regret "
            << format_double(res.total_regret) << "\n";
  return 0;
}

struct GridFlags {
  std::string log_path, out_dir;
  std::size_t jobs = 1;
  std::vector<std::string> algos{"mlinucb", "colin", "factorucb"};
  std::vector<std::size_t> clusters{80, 160};
  std::vector<double> sparsity{25.0, 50.0, 100.0};
  std::vector<double> alphas{0.5, 1.0};
  std::size_t latent_dim = 5;
  std::uint64_t seed = 1;
  std::size_t bucket = 2000, window = 500;
};

std::string num_label(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

int cmd_grid(const GridFlags& g) {
  if (g.jobs < 1) throw ConfigError("grid: --jobs must be >= 1");
  std::filesystem::create_directories(g.out_dir);

  // shared inputs first: centroids per cluster count, W per (clusters, sparsity)
  std::map<std::size_t, std::string> centroid_paths;
  std::map<std::pair<std::size_t, double>, std::string> w_paths;
  for (std::size_t k : g.clusters) {
    const std::string cpath = g.out_dir + "/centroids_k" + std::to_string(k) + ".csv";
    cmd_cluster(g.log_path, k, g.seed, 100, false, cpath);
    centroid_paths[k] = cpath;
    for (double s : g.sparsity) {
      const std::string wpath =
          g.out_dir + "/w_k" + std::to_string(k) + "_s" + num_label(s) + ".csv";
      cmd_buildw(cpath, s, wpath);
      w_paths[{k, s}] = wpath;
    }
  }

  // one independent replay job per grid cell; W-free algorithms ignore sparsity
  std::vector<ReplayFlags> cells;
  for (const std::string& algo : g.algos) {
    const bool needs_w = algo == "colin" || algo == "factorucb";
    for (std::size_t k : g.clusters)
      for (double s : g.sparsity) {
        if (!needs_w && s != g.sparsity.front()) continue;
        for (double a : g.alphas) {
          ReplayFlags f;
          f.algo = algo;
          f.log_path = g.log_path;
          f.centroid_path = centroid_paths[k];
          if (needs_w) f.w_path = w_paths[{k, s}];
          f.alpha = a;
          f.latent_dim = g.latent_dim;
          f.seed = g.seed;
          f.bucket = g.bucket;
          f.window = g.window;
          f.out = g.out_dir + "/" + algo + "_k" + std::to_string(k) + "_s" +
                  num_label(needs_w ? s : 100.0) + "_a" + num_label(a) + ".csv";
          cells.push_back(std::move(f));
        }
      }
  }

  std::atomic<std::size_t> next{0};
  std::mutex fail_mu;
  std::exception_ptr first_failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        cmd_replay(cells[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (!first_failure) first_failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < std::min(g.jobs, cells.size()); ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_failure) std::rethrow_exception(first_failure);
  std::cerr << "grid: " << cells.size() << " runs written to " << g.out_dir << "\n";
  return 0;
}

int cmd_report(const std::string& random_path, const std::vector<std::string>& runs,
               const std::string& out, const std::string& summary_path) {
  const MetricsFile rnd = read_metrics_csv(random_path);

  struct Run {
    std::string label;
    MetricsFile m;
  };
  std::vector<Run> parsed;
  for (const std::string& spec : runs) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--run expects label=path, got '" + spec + "'");
    parsed.push_back({spec.substr(0, eq), read_metrics_csv(spec.substr(eq + 1))});
  }

  std::ofstream os(out);
  if (!os) throw ParseError("cannot open for write: " + out);
  os << "bucket_index";
  for (const Run& r : parsed) os << "," << r.label << ":cum_ratio," << r.label << ":rolling_ratio";
  os << "\n";
  std::size_t n = rnd.bucket_index.size();
  for (const Run& r : parsed) n = std::min(n, r.m.bucket_index.size());
  for (std::size_t i = 0; i < n; ++i) {
    os << rnd.bucket_index[i];
    for (const Run& r : parsed) {
      os << ",";
      if (rnd.cumulative_ctr[i] != 0.0)
        os << format_double(r.m.cumulative_ctr[i] / rnd.cumulative_ctr[i]);
      os << ",";
      if (rnd.rolling_ctr[i] != 0.0) os << format_double(r.m.rolling_ctr[i] / rnd.rolling_ctr[i]);
    }
    os << "\n";
  }

  std::ostream* sum = &std::cout;
  std::ofstream sum_file;
  if (!summary_path.empty()) {
    sum_file.open(summary_path);
    if (!sum_file) throw ParseError("cannot open for write: " + summary_path);
    sum = &sum_file;
  }
  *sum << "algo,clusters,sparsity,alpha,pct_over_random\n";
  const double rnd_final = rnd.cumulative_ctr.empty() ? 0.0 : rnd.cumulative_ctr.back();
  for (const Run& r : parsed) {
    const double fin = r.m.cumulative_ctr.empty() ? 0.0 : r.m.cumulative_ctr.back();
    *sum << r.label << ",";
    if (rnd_final != 0.0) *sum << format_double((fin / rnd_final - 1.0) * 100.0);
    *sum << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative contextual bandit toolkit"};
  app.require_subcommand(1);

  // genlog
  auto* genlog = app.add_subcommand("genlog", "Generate a synthetic uniform-logged event file");
  EnvFlags genlog_env;
  genlog_env.attach(genlog);
  std::size_t genlog_events = 10000;
  std::uint64_t genlog_seed = 1;
  std::string genlog_out;
  genlog->add_option("--events", genlog_events, "Number of events");
  genlog->add_option("--seed", genlog_seed, "Logging seed");
  genlog->add_option("--out", genlog_out, "Output event log path")->required();
  genlog->set_config("--config");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "k-means over the log's user features");
  std::string cluster_log, cluster_out;
  std::size_t cluster_k = 80, cluster_iters = 100;
  std::uint64_t cluster_seed = 1;
  bool cluster_standardize = false;
  cluster->add_option("--log", cluster_log, "Event log path")->required();
  cluster->add_option("--k", cluster_k, "Number of clusters");
  cluster->add_option("--seed", cluster_seed, "Seeding RNG seed");
  cluster->add_option("--max-iters", cluster_iters, "Lloyd iteration cap");
  cluster->add_flag("--standardize", cluster_standardize, "z-score features before clustering");
  cluster->add_option("--out", cluster_out, "Centroid CSV path")->required();
  cluster->set_config("--config");

  // build-w
  auto* buildw = app.add_subcommand("build-w", "Similarity matrix from centroids");
  std::string buildw_centroids, buildw_out;
  double buildw_sparsity = 100.0;
  buildw->add_option("--centroids", buildw_centroids, "Centroid CSV path")->required();
  buildw->add_option("--sparsity", buildw_sparsity, "Keep top x% of weights per column")
      ->check(CLI::Range(1e-9, 100.0));
  buildw->add_option("--out", buildw_out, "W CSV path")->required();
  buildw->set_config("--config");

  // validate-w
  auto* validatew = app.add_subcommand("validate-w", "Check a W file's invariants");
  std::string validatew_path;
  validatew->add_option("--w", validatew_path, "W CSV path")->required();

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "Offline replay evaluation of a policy");
  ReplayFlags rf;
  replay_cmd->add_option("--algo", rf.algo, "random|linucb|mlinucb|colin|factorucb")
      ->required()
      ->check(CLI::IsMember({"random", "linucb", "mlinucb", "colin", "factorucb"}));
  replay_cmd->add_option("--log", rf.log_path, "Event log path")->required();
  replay_cmd->add_option("--centroids", rf.centroid_path, "Centroid CSV path")->required();
  replay_cmd->add_option("--w", rf.w_path, "W CSV path (colin/factorucb)");
  replay_cmd->add_option("--alpha", rf.alpha, "Exploration weight");
  replay_cmd->add_option("--alpha1", rf.alpha1, "factorucb exploration weight 1");
  replay_cmd->add_option("--alpha2", rf.alpha2, "factorucb exploration weight 2");
  replay_cmd->add_option("--latent-dim", rf.latent_dim, "factorucb latent dimension");
  replay_cmd->add_option("--seed", rf.seed, "Policy seed");
  replay_cmd->add_option("--bucket", rf.bucket, "Matched events per CTR bucket");
  replay_cmd->add_option("--window", rf.window, "Rolling window in buckets");
  replay_cmd->add_flag("--bucket-raw", rf.bucket_raw, "Bucket by raw events instead of matched");
  replay_cmd->add_flag("--drop-warmup", rf.drop_warmup, "Drop the rolling warmup rows");
  replay_cmd->add_option("--save-state", rf.save_state, "Write a policy snapshot after the run");
  replay_cmd->add_option("--load-state", rf.load_state, "Resume from a policy snapshot");
  replay_cmd->add_option("--out", rf.out, "Metrics CSV path")->required();
  replay_cmd->set_config("--config");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Live run against a synthetic environment");
  EnvFlags sim_env;
  sim_env.attach(simulate_cmd);
  std::string sim_algo, sim_out;
  std::size_t sim_horizon = 10000;
  std::uint64_t sim_seed = 1;
  double sim_alpha = 0.5, sim_alpha1 = 0.375, sim_alpha2 = 0.375, sim_sparsity = 100.0;
  simulate_cmd->add_option("--algo", sim_algo, "random|linucb|mlinucb|colin|factorucb|oracle")
      ->required()
      ->check(CLI::IsMember({"random", "linucb", "mlinucb", "colin", "factorucb", "oracle"}));
  simulate_cmd->add_option("--horizon", sim_horizon, "Number of steps");
  simulate_cmd->add_option("--seed", sim_seed, "Run seed (policy + environment stream)");
  simulate_cmd->add_option("--alpha", sim_alpha, "Exploration weight");
  simulate_cmd->add_option("--alpha1", sim_alpha1, "factorucb exploration weight 1");
  simulate_cmd->add_option("--alpha2", sim_alpha2, "factorucb exploration weight 2");
  simulate_cmd->add_option("--sparsity", sim_sparsity, "Sparsify the policy's W to top x%");
  simulate_cmd->add_option("--out", sim_out, "Regret CSV path")->required();
  simulate_cmd->set_config("--config");

  // grid
  auto* grid = app.add_subcommand("grid", "Run a replay grid as independent parallel jobs");
  GridFlags gf;
  grid->add_option("--log", gf.log_path, "Event log path")->required();
  grid->add_option("--out-dir", gf.out_dir, "Directory for all grid outputs")->required();
  grid->add_option("--jobs", gf.jobs, "Parallel job count");
  grid->add_option("--algos", gf.algos, "Algorithms to run")->delimiter(',');
  grid->add_option("--clusters", gf.clusters, "Cluster counts")->delimiter(',');
  grid->add_option("--sparsity", gf.sparsity, "Sparsity percentages")->delimiter(',');
  grid->add_option("--alpha", gf.alphas, "Exploration weights")->delimiter(',');
  grid->add_option("--latent-dim", gf.latent_dim, "factorucb latent dimension");
  grid->add_option("--seed", gf.seed, "Clustering and policy seed");
  grid->add_option("--bucket", gf.bucket, "Matched events per CTR bucket");
  grid->add_option("--window", gf.window, "Rolling window in buckets");
  grid->set_config("--config");

  // report
  auto* report = app.add_subcommand("report", "Normalize runs by the random baseline");
  std::string report_random, report_out, report_summary;
  std::vector<std::string> report_runs;
  report->add_option("--random", report_random, "Random-policy metrics CSV")->required();
  report->add_option("--run", report_runs, "label=path, label is algo,clusters,sparsity,alpha")
      ->required();
  report->add_option("--out", report_out, "Ratio table CSV path")->required();
  report->add_option("--summary", report_summary, "Summary CSV path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*genlog) return cmd_genlog(genlog_env, genlog_events, genlog_seed, genlog_out);
    if (*cluster)
      return cmd_cluster(cluster_log, cluster_k, cluster_seed, cluster_iters,
                         cluster_standardize, cluster_out);
    if (*buildw) return cmd_buildw(buildw_centroids, buildw_sparsity, buildw_out);
    if (*validatew) return cmd_validatew(validatew_path);
    if (*replay_cmd) return cmd_replay(rf);
    if (*simulate_cmd)
      return cmd_simulate(sim_env, sim_algo, sim_horizon, sim_seed, sim_alpha, sim_alpha1,
                          sim_alpha2, sim_sparsity, sim_out);
    if (*grid) return cmd_grid(gf);
    if (*report) return cmd_report(report_random, report_runs, report_out, report_summary);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionMismatch& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TooFewPoints& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EmptyPool& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ZeroColumn& e) {
    std::cerr << "degenerate similarity: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DegenerateUpdate& e) {
    std::cerr << "numeric degeneracy: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
