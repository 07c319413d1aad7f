#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cobandit/events.hpp"
#include "cobandit/linalg.hpp"
#include "cobandit/similarity.hpp"

namespace cobandit {

struct PolicyConfig {
  double alpha = 0.5;
  double alpha1 = 0.375;
  double alpha2 = 0.375;
  std::size_t num_clusters = 1;
  std::size_t feature_dim = 0;
  std::size_t latent_dim = 0;
  std::optional<SimilarityMatrix> w;  // required by colin / factorucb
  std::uint64_t seed = 0;
};

/// Select-then-update interface shared by all decision policies. One event at
/// a time; a single instance is not safe for concurrent use.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  virtual std::size_t select(std::size_t cluster, const std::vector<Candidate>& pool) = 0;
  virtual void update(std::size_t cluster, const Candidate& chosen, double reward) = 0;

  virtual void save(std::ostream& os) const = 0;
  virtual void load(std::istream& is) = 0;
};

/// Deterministic UCB policies: score every candidate, pick the argmax,
/// first candidate wins ties.
class UcbPolicy : public Policy {
 public:
  virtual std::vector<double> scores(std::size_t cluster,
                                     const std::vector<Candidate>& pool) = 0;
  std::size_t select(std::size_t cluster, const std::vector<Candidate>& pool) override;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "random"; }
  std::size_t select(std::size_t cluster, const std::vector<Candidate>& pool) override;
  void update(std::size_t, const Candidate&, double) override {}
  void save(std::ostream& os) const override;
  void load(std::istream& is) override;

 private:
  std::mt19937_64 rng_;
};

/// Disjoint per-arm linear UCB. Arms are initialized lazily on first sight.
class LinUcbPolicy final : public UcbPolicy {
 public:
  explicit LinUcbPolicy(PolicyConfig cfg);
  std::string name() const override { return "linucb"; }
  std::vector<double> scores(std::size_t cluster, const std::vector<Candidate>& pool) override;
  void update(std::size_t cluster, const Candidate& chosen, double reward) override;
  void save(std::ostream& os) const override;
  void load(std::istream& is) override;

  double score_one(const Candidate& cand);

 private:
  struct Arm {
    InverseState inv;
    Vec b;
  };
  Arm& arm(const std::string& id);

  PolicyConfig cfg_;
  std::map<std::string, Arm> arms_;
};

/// One independent linear UCB per user cluster; no cross-cluster propagation.
class MLinUcbPolicy final : public UcbPolicy {
 public:
  explicit MLinUcbPolicy(PolicyConfig cfg);
  std::string name() const override { return "mlinucb"; }
  std::vector<double> scores(std::size_t cluster, const std::vector<Candidate>& pool) override;
  void update(std::size_t cluster, const Candidate& chosen, double reward) override;
  void save(std::ostream& os) const override;
  void load(std::istream& is) override;

  /// Current estimate for one cluster's bandit parameter.
  Vec theta_hat(std::size_t cluster) const;

 private:
  struct Block {
    InverseState inv;
    Vec b;
  };
  PolicyConfig cfg_;
  std::vector<Block> blocks_;
};

/// Collaborative linear UCB: a single dM-dimensional model whose clusters are
/// coupled through the column-stochastic similarity matrix W.
class CoLinPolicy final : public UcbPolicy {
 public:
  explicit CoLinPolicy(PolicyConfig cfg);
  std::string name() const override { return "colin"; }
  std::vector<double> scores(std::size_t cluster, const std::vector<Candidate>& pool) override;
  void update(std::size_t cluster, const Candidate& chosen, double reward) override;
  void save(std::ostream& os) const override;
  void load(std::istream& is) override;

  const Matrix& theta_hat() const { return theta_hat_; }
  const InverseState& inverse() const { return a_inv_; }

 private:
  PolicyConfig cfg_;
  InverseState a_inv_;
  Vec b_;
  Matrix theta_hat_;  // d x M, kept equal to mat(a_inv * b)
};

/// CoLin with learned per-arm latent factors augmenting the observed features.
class FactorUcbPolicy final : public UcbPolicy {
 public:
  explicit FactorUcbPolicy(PolicyConfig cfg);
  std::string name() const override { return "factorucb"; }
  std::vector<double> scores(std::size_t cluster, const std::vector<Candidate>& pool) override;
  void update(std::size_t cluster, const Candidate& chosen, double reward) override;
  void save(std::ostream& os) const override;
  void load(std::istream& is) override;

  const Matrix& theta_hat() const { return theta_hat_; }
  Vec latent(const std::string& arm_id) const;

 private:
  struct ArmLatent {
    InverseState e_inv;
    Vec d_vec;
    Vec v_hat;
  };
  ArmLatent& arm(const std::string& id);

  PolicyConfig cfg_;
  std::size_t aug_dim_;  // d + d_l
  InverseState a_inv_;
  Vec b_;
  Matrix theta_hat_;  // (d + d_l) x M
  std::map<std::string, ArmLatent> arms_;
};

struct SelectOutcome {
  std::string chosen_arm;
  bool matched = false;
};

/// Replay contract: update only when the policy's choice matches the logged
/// display, using the logged click as the reward.
SelectOutcome policy_select_update(Policy& policy, std::size_t cluster, const EventRecord& event);

/// algo in {random, linucb, mlinucb, colin, factorucb}.
std::unique_ptr<Policy> make_policy(const std::string& algo, const PolicyConfig& cfg);

/// Reads a snapshot written by Policy::save into a fresh policy; the snapshot
/// header names the algorithm and the config must be dimension-compatible.
std::unique_ptr<Policy> load_policy_snapshot(std::istream& is, const PolicyConfig& cfg);

}  // namespace cobandit
