#include "cobandit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace cobandit {

namespace {

Vec sample_sphere(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(dim);
  double s;
  do {
    for (double& x : v) x = n(rng);
    s = norm2(v);
  } while (s == 0.0);
  for (double& x : v) x /= s;
  return v;
}

Vec sample_ball(std::size_t dim, std::mt19937_64& rng) {
  Vec v = sample_sphere(dim, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::pow(u(rng), 1.0 / static_cast<double>(dim));
  for (double& x : v) x *= r;
  return v;
}

SimilarityMatrix ring_similarity(std::size_t m) {
  Matrix raw(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t fwd = (i >= j) ? i - j : j - i;
      const std::size_t ring = std::min(fwd, m - fwd);
      raw(i, j) = std::exp(-static_cast<double>(ring) / 2.0);
    }
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += raw(i, j);
    for (std::size_t i = 0; i < m; ++i) raw(i, j) /= sum;
  }
  return SimilarityMatrix::from_matrix(std::move(raw));
}

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace

void Environment::finish_init() {
  effective_.clear();
  effective_.reserve(spec_.num_clusters);
  for (std::size_t i = 0; i < spec_.num_clusters; ++i)
    effective_.push_back(theta_star_.mul(w_.column(i)));
}

Environment Environment::generate(const EnvSpec& spec) {
  Environment env;
  env.spec_ = spec;
  std::mt19937_64 rng(spec.seed);

  env.w_ = spec.w_star ? *spec.w_star : ring_similarity(spec.num_clusters);
  if (env.w_.size() != spec.num_clusters)
    throw ConfigError("Environment: w_star size must equal num_clusters");

  const std::size_t dz = spec.feature_dim + spec.latent_dim;
  // Columns on the unit ball, shrunk so that every squashed bernoulli mean
  // stays inside [0,1] for unit-sphere contexts and latent entries in
  // [-0.5, 0.5].
  const double shrink = 1.0 / std::sqrt(1.0 + 0.25 * static_cast<double>(spec.latent_dim));
  env.theta_star_ = Matrix(dz, spec.num_clusters);
  for (std::size_t j = 0; j < spec.num_clusters; ++j) {
    const Vec col = sample_ball(dz, rng);
    for (std::size_t i = 0; i < dz; ++i) env.theta_star_(i, j) = shrink * col[i];
  }

  env.centroids_ = Matrix(spec.num_clusters, spec.user_dim);
  for (std::size_t i = 0; i < spec.num_clusters; ++i) {
    const Vec c = sample_sphere(spec.user_dim, rng);
    for (std::size_t j = 0; j < spec.user_dim; ++j) env.centroids_(i, j) = c[j];
  }

  std::uniform_real_distribution<double> lat(-0.5, 0.5);
  env.arms_.reserve(spec.num_arms);
  for (std::size_t a = 0; a < spec.num_arms; ++a) {
    Candidate c;
    c.arm_id = "a" + std::to_string(a);
    c.features = sample_sphere(spec.feature_dim, rng);
    Vec v(spec.latent_dim);
    for (double& x : v) x = lat(rng);
    env.v_star_.emplace(c.arm_id, std::move(v));
    env.arms_.push_back(std::move(c));
  }

  env.finish_init();
  return env;
}

Environment Environment::from_parts(EnvSpec spec, SimilarityMatrix w, Matrix theta_star,
                                    Matrix user_centroids, std::vector<Candidate> arms,
                                    std::map<std::string, Vec> v_star) {
  Environment env;
  env.spec_ = std::move(spec);
  env.w_ = std::move(w);
  env.theta_star_ = std::move(theta_star);
  env.centroids_ = std::move(user_centroids);
  env.arms_ = std::move(arms);
  env.v_star_ = std::move(v_star);
  env.finish_init();
  return env;
}

Vec Environment::augmented(const Candidate& cand) const {
  Vec z = cand.features;
  if (spec_.latent_dim > 0) {
    auto it = v_star_.find(cand.arm_id);
    if (it != v_star_.end())
      z.insert(z.end(), it->second.begin(), it->second.end());
    else
      z.resize(z.size() + spec_.latent_dim, 0.0);
  }
  return z;
}

double Environment::expected_payoff(std::size_t cluster, const Candidate& cand) const {
  const double mu = dot(augmented(cand), effective_.at(cluster));
  if (spec_.reward_model == RewardModel::Bernoulli) return clamp01((mu + 1.0) / 2.0);
  return mu;
}

double Environment::step(std::size_t cluster, const Candidate& cand, std::mt19937_64& rng) const {
  if (spec_.reward_model == RewardModel::Bernoulli) {
    const double p = expected_payoff(cluster, cand);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < p ? 1.0 : 0.0;
  }
  const double mu = dot(augmented(cand), effective_.at(cluster));
  if (spec_.noise_std == 0.0) return mu;
  std::normal_distribution<double> n(0.0, spec_.noise_std);
  return mu + n(rng);
}

double Environment::expected_regret(std::size_t cluster, std::size_t chosen_idx,
                                    const std::vector<Candidate>& pool) const {
  if (pool.empty() || chosen_idx >= pool.size())
    throw EmptyPool("expected_regret: bad pool / chosen index");
  double best = -std::numeric_limits<double>::infinity();
  for (const Candidate& c : pool) best = std::max(best, expected_payoff(cluster, c));
  return best - expected_payoff(cluster, pool[chosen_idx]);
}

std::vector<Candidate> Environment::sample_pool(std::mt19937_64& rng) const {
  const std::size_t k = std::min(spec_.pool_size, arms_.size());
  std::vector<std::size_t> idx(arms_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // partial Fisher-Yates for the first k slots
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> u(i, idx.size() - 1);
    std::swap(idx[i], idx[u(rng)]);
  }
  std::vector<Candidate> pool;
  pool.reserve(k);
  for (std::size_t i = 0; i < k; ++i) pool.push_back(arms_[idx[i]]);
  return pool;
}

std::vector<EventRecord> Environment::gen_log(std::size_t T, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> cluster_u(0, spec_.num_clusters - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<EventRecord> log;
  log.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    EventRecord e;
    e.timestamp = static_cast<std::int64_t>(t);
    const std::size_t cluster = cluster_u(rng);
    e.user_features = centroids_.row(cluster);
    e.pool = sample_pool(rng);
    std::uniform_int_distribution<std::size_t> disp(0, e.pool.size() - 1);
    const std::size_t shown = disp(rng);
    e.displayed_arm = e.pool[shown].arm_id;
    const double mu = dot(augmented(e.pool[shown]), effective_[cluster]);
    e.click = unit(rng) < clamp01((mu + 1.0) / 2.0) ? 1 : 0;
    log.push_back(std::move(e));
  }
  return log;
}

std::size_t OraclePolicy::select(std::size_t cluster, const std::vector<Candidate>& pool) {
  if (pool.empty()) throw EmptyPool("oracle: empty candidate pool");
  std::size_t best = 0;
  double best_p = env_.expected_payoff(cluster, pool[0]);
  for (std::size_t i = 1; i < pool.size(); ++i) {
    const double p = env_.expected_payoff(cluster, pool[i]);
    if (p > best_p) {
      best_p = p;
      best = i;
    }
  }
  return best;
}

void OraclePolicy::save(std::ostream& os) const { os << "cobandit-state 1\nalgo oracle\n"; }
void OraclePolicy::load(std::istream&) {}

SimResult simulate(const Environment& env, Policy& policy, std::size_t horizon,
                   std::uint64_t seed, const SimOptions& opts) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> cluster_u(0, env.spec().num_clusters - 1);
  SimResult res;
  if (opts.record_steps) {
    res.inst_regret.reserve(horizon);
    res.cum_regret.reserve(horizon);
    res.cum_reward.reserve(horizon);
  }
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::size_t cluster = cluster_u(rng);
    std::vector<Candidate> sampled;
    if (!opts.fixed_pool) sampled = env.sample_pool(rng);
    const std::vector<Candidate>& pool = opts.fixed_pool ? *opts.fixed_pool : sampled;
    const std::size_t idx = policy.select(cluster, pool);
    const double reward = env.step(cluster, pool[idx], rng);
    policy.update(cluster, pool[idx], reward);
    const double regret = env.expected_regret(cluster, idx, pool);
    res.total_reward += reward;
    res.total_regret += regret;
    if (opts.record_steps) {
      res.inst_regret.push_back(regret);
      res.cum_regret.push_back(res.total_regret);
      res.cum_reward.push_back(res.total_reward);
    }
  }
  return res;
}

}  // namespace cobandit
