#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "cobandit/events.hpp"
#include "cobandit/policies.hpp"
#include "cobandit/similarity.hpp"

namespace cobandit {

enum class RewardModel { Bernoulli, Gaussian };

struct EnvSpec {
  std::size_t num_clusters = 10;  // M
  std::size_t feature_dim = 5;    // d, observed arm features
  std::size_t latent_dim = 0;     // d_l, hidden arm factors
  std::size_t pool_size = 10;     // K, candidates per event
  std::size_t num_arms = 30;      // fixed arm universe the pools are drawn from
  std::size_t user_dim = 6;       // d_u, user feature dimension
  double noise_std = 0.1;         // gaussian model only
  RewardModel reward_model = RewardModel::Bernoulli;
  std::uint64_t seed = 0;
  /// Ground-truth influence matrix; generated (ring-structured, strong
  /// off-diagonal) when absent.
  std::optional<SimilarityMatrix> w_star;
};

/// Synthetic world with known ground truth: per-cluster effective parameters
/// are collaborative mixes of the hidden parameter columns, arm payoffs are
/// linear in (observed features, hidden latent factors).
class Environment {
 public:
  static Environment generate(const EnvSpec& spec);

  /// Fully explicit construction, used by tests that pin ground truth by hand.
  static Environment from_parts(EnvSpec spec, SimilarityMatrix w, Matrix theta_star,
                                Matrix user_centroids, std::vector<Candidate> arms,
                                std::map<std::string, Vec> v_star);

  const EnvSpec& spec() const { return spec_; }
  const SimilarityMatrix& w_star() const { return w_; }
  const Matrix& theta_star() const { return theta_star_; }      // (d+d_l) x M
  const Matrix& user_centroids() const { return centroids_; }   // M x d_u
  const std::vector<Candidate>& arms() const { return arms_; }

  /// True expected payoff: squashed into [0,1] for the bernoulli model.
  double expected_payoff(std::size_t cluster, const Candidate& cand) const;

  double step(std::size_t cluster, const Candidate& cand, std::mt19937_64& rng) const;

  /// Best-in-pool expected payoff minus the chosen arm's; always >= 0.
  double expected_regret(std::size_t cluster, std::size_t chosen_idx,
                         const std::vector<Candidate>& pool) const;

  std::vector<Candidate> sample_pool(std::mt19937_64& rng) const;

  /// Uniform logging: uniform cluster, uniform pool subset, uniform displayed
  /// arm, bernoulli click from the true squashed mean. Deterministic per seed.
  std::vector<EventRecord> gen_log(std::size_t T, std::uint64_t seed) const;

 private:
  EnvSpec spec_;
  SimilarityMatrix w_ = SimilarityMatrix::identity(1);
  Matrix theta_star_;
  Matrix centroids_;
  std::vector<Candidate> arms_;
  std::map<std::string, Vec> v_star_;
  std::vector<Vec> effective_;  // theta_star * w column, per cluster

  Environment() = default;
  void finish_init();
  Vec augmented(const Candidate& cand) const;
};

/// Always picks the arm with the highest true expected payoff.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const Environment& env) : env_(env) {}
  std::string name() const override { return "oracle"; }
  std::size_t select(std::size_t cluster, const std::vector<Candidate>& pool) override;
  void update(std::size_t, const Candidate&, double) override {}
  void save(std::ostream&) const override;
  void load(std::istream&) override;

 private:
  const Environment& env_;
};

struct SimResult {
  std::vector<double> inst_regret;
  std::vector<double> cum_regret;
  std::vector<double> cum_reward;
  double total_reward = 0.0;
  double total_regret = 0.0;
};

struct SimOptions {
  bool record_steps = true;
  /// When set, every step draws from this fixed pool instead of sampling one.
  std::optional<std::vector<Candidate>> fixed_pool;
};

/// Live run of a policy against the environment.
SimResult simulate(const Environment& env, Policy& policy, std::size_t horizon,
                   std::uint64_t seed, const SimOptions& opts = {});

}  // namespace cobandit
