#include "cobandit/policies.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "cobandit/io.hpp"

namespace cobandit {

namespace {

constexpr const char* kStateMagic = "cobandit-state 1";

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

std::string expect_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(std::string("snapshot: missing ") + what);
  return line;
}

void expect_exact(std::istream& is, const std::string& want) {
  const std::string got = expect_line(is, want.c_str());
  if (got != want) throw ParseError("snapshot: expected '" + want + "', got '" + got + "'");
}

InverseState matrix_to_inverse(const Matrix& m) { return InverseState::from_matrix(m); }

}  // namespace

std::size_t UcbPolicy::select(std::size_t cluster, const std::vector<Candidate>& pool) {
  if (pool.empty()) throw EmptyPool("select: empty candidate pool");
  const std::vector<double> p = scores(cluster, pool);
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[best]) best = i;
  return best;
}

// ---------------------------------------------------------------------------
// Random

std::size_t RandomPolicy::select(std::size_t, const std::vector<Candidate>& pool) {
  if (pool.empty()) throw EmptyPool("random: empty candidate pool");
  std::uniform_int_distribution<std::size_t> u(0, pool.size() - 1);
  return u(rng_);
}

void RandomPolicy::save(std::ostream& os) const {
  os << kStateMagic << "\nalgo random\nrng " << rng_ << "\n";
}

void RandomPolicy::load(std::istream& is) {
  expect_exact(is, kStateMagic);
  expect_exact(is, "algo random");
  std::string tag;
  is >> tag;
  if (tag != "rng") throw ParseError("snapshot: expected rng state");
  is >> rng_;
}

// ---------------------------------------------------------------------------
// LinUCB

LinUcbPolicy::LinUcbPolicy(PolicyConfig cfg) : cfg_(std::move(cfg)) {
  require(cfg_.feature_dim > 0, "linucb: feature_dim must be positive");
}

LinUcbPolicy::Arm& LinUcbPolicy::arm(const std::string& id) {
  auto it = arms_.find(id);
  if (it == arms_.end())
    it = arms_.emplace(id, Arm{InverseState(cfg_.feature_dim), Vec(cfg_.feature_dim, 0.0)}).first;
  return it->second;
}

double LinUcbPolicy::score_one(const Candidate& cand) {
  Arm& a = arm(cand.arm_id);
  const Vec theta = a.inv.apply(a.b);
  return dot(theta, cand.features) + cfg_.alpha * std::sqrt(a.inv.quad_form(cand.features));
}

std::vector<double> LinUcbPolicy::scores(std::size_t, const std::vector<Candidate>& pool) {
  std::vector<double> out;
  out.reserve(pool.size());
  for (const Candidate& c : pool) out.push_back(score_one(c));
  return out;
}

void LinUcbPolicy::update(std::size_t, const Candidate& chosen, double reward) {
  Arm& a = arm(chosen.arm_id);
  a.inv.sm_update(chosen.features, chosen.features);
  axpy(reward, chosen.features, a.b);
}

void LinUcbPolicy::save(std::ostream& os) const {
  os << kStateMagic << "\nalgo linucb\narms " << arms_.size() << "\n";
  for (const auto& [id, a] : arms_) {
    os << "arm " << id << "\n";
    write_matrix_csv(os, a.inv.inv());
    write_vec_line(os, a.b);
  }
}

void LinUcbPolicy::load(std::istream& is) {
  expect_exact(is, kStateMagic);
  expect_exact(is, "algo linucb");
  std::size_t n = 0;
  {
    std::istringstream hdr(expect_line(is, "arm count"));
    std::string tag;
    hdr >> tag >> n;
    if (tag != "arms") throw ParseError("snapshot: expected arms count");
  }
  arms_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const std::string line = expect_line(is, "arm id");
    if (line.rfind("arm ", 0) != 0) throw ParseError("snapshot: expected arm entry");
    const std::string id = line.substr(4);
    const Matrix inv = read_matrix_csv(is);
    Vec b = read_vec_line(is);
    require(inv.rows() == cfg_.feature_dim && b.size() == cfg_.feature_dim,
            "snapshot: arm dimension mismatch");
    arms_.emplace(id, Arm{matrix_to_inverse(inv), std::move(b)});
  }
}

// ---------------------------------------------------------------------------
// M-LinUCB

MLinUcbPolicy::MLinUcbPolicy(PolicyConfig cfg) : cfg_(std::move(cfg)) {
  require(cfg_.feature_dim > 0, "mlinucb: feature_dim must be positive");
  require(cfg_.num_clusters > 0, "mlinucb: num_clusters must be positive");
  blocks_.reserve(cfg_.num_clusters);
  for (std::size_t i = 0; i < cfg_.num_clusters; ++i)
    blocks_.push_back(Block{InverseState(cfg_.feature_dim), Vec(cfg_.feature_dim, 0.0)});
}

Vec MLinUcbPolicy::theta_hat(std::size_t cluster) const {
  return blocks_.at(cluster).inv.apply(blocks_.at(cluster).b);
}

std::vector<double> MLinUcbPolicy::scores(std::size_t cluster, const std::vector<Candidate>& pool) {
  const Block& blk = blocks_.at(cluster);
  const Vec theta = blk.inv.apply(blk.b);
  std::vector<double> out;
  out.reserve(pool.size());
  for (const Candidate& c : pool)
    out.push_back(dot(theta, c.features) + cfg_.alpha * std::sqrt(blk.inv.quad_form(c.features)));
  return out;
}

void MLinUcbPolicy::update(std::size_t cluster, const Candidate& chosen, double reward) {
  Block& blk = blocks_.at(cluster);
  blk.inv.sm_update(chosen.features, chosen.features);
  axpy(reward, chosen.features, blk.b);
}

void MLinUcbPolicy::save(std::ostream& os) const {
  os << kStateMagic << "\nalgo mlinucb\nblocks " << blocks_.size() << "\n";
  for (const Block& blk : blocks_) {
    write_matrix_csv(os, blk.inv.inv());
    write_vec_line(os, blk.b);
  }
}

void MLinUcbPolicy::load(std::istream& is) {
  expect_exact(is, kStateMagic);
  expect_exact(is, "algo mlinucb");
  std::size_t n = 0;
  {
    std::istringstream hdr(expect_line(is, "block count"));
    std::string tag;
    hdr >> tag >> n;
    if (tag != "blocks") throw ParseError("snapshot: expected blocks count");
  }
  require(n == cfg_.num_clusters, "snapshot: cluster count mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix inv = read_matrix_csv(is);
    Vec b = read_vec_line(is);
    require(inv.rows() == cfg_.feature_dim && b.size() == cfg_.feature_dim,
            "snapshot: block dimension mismatch");
    blocks_[i] = Block{matrix_to_inverse(inv), std::move(b)};
  }
}

// ---------------------------------------------------------------------------
// CoLin

CoLinPolicy::CoLinPolicy(PolicyConfig cfg)
    : cfg_(std::move(cfg)),
      a_inv_(cfg_.feature_dim * cfg_.num_clusters),
      b_(cfg_.feature_dim * cfg_.num_clusters, 0.0),
      theta_hat_(cfg_.feature_dim, cfg_.num_clusters) {
  require(cfg_.feature_dim > 0, "colin: feature_dim must be positive");
  require(cfg_.w.has_value(), "colin: similarity matrix required");
  require(cfg_.w->size() == cfg_.num_clusters, "colin: W size must equal num_clusters");
}

std::vector<double> CoLinPolicy::scores(std::size_t cluster, const std::vector<Candidate>& pool) {
  const Vec wi = cfg_.w->column(cluster);
  const Vec theta_eff = theta_hat_.mul(wi);
  std::vector<double> out;
  out.reserve(pool.size());
  for (const Candidate& c : pool) {
    const double mean = dot(theta_eff, c.features);
    const double var = a_inv_.quad_form(kron_vec(wi, c.features));
    out.push_back(mean + cfg_.alpha * std::sqrt(var));
  }
  return out;
}

void CoLinPolicy::update(std::size_t cluster, const Candidate& chosen, double reward) {
  const Vec u = kron_vec(cfg_.w->column(cluster), chosen.features);
  a_inv_.sm_update(u, u);
  axpy(reward, u, b_);
  theta_hat_ = reshape_mat(a_inv_.apply(b_), cfg_.feature_dim, cfg_.num_clusters);
}

void CoLinPolicy::save(std::ostream& os) const {
  os << kStateMagic << "\nalgo colin\n";
  write_matrix_csv(os, a_inv_.inv());
  write_vec_line(os, b_);
}

void CoLinPolicy::load(std::istream& is) {
  expect_exact(is, kStateMagic);
  expect_exact(is, "algo colin");
  const Matrix inv = read_matrix_csv(is);
  Vec b = read_vec_line(is);
  const std::size_t dm = cfg_.feature_dim * cfg_.num_clusters;
  require(inv.rows() == dm && b.size() == dm, "snapshot: colin dimension mismatch");
  a_inv_ = matrix_to_inverse(inv);
  b_ = std::move(b);
  theta_hat_ = reshape_mat(a_inv_.apply(b_), cfg_.feature_dim, cfg_.num_clusters);
}

// ---------------------------------------------------------------------------
// FactorUCB

FactorUcbPolicy::FactorUcbPolicy(PolicyConfig cfg)
    : cfg_(std::move(cfg)),
      aug_dim_(cfg_.feature_dim + cfg_.latent_dim),
      a_inv_(aug_dim_ * cfg_.num_clusters),
      b_(aug_dim_ * cfg_.num_clusters, 0.0),
      theta_hat_(aug_dim_, cfg_.num_clusters) {
  require(cfg_.feature_dim > 0, "factorucb: feature_dim must be positive");
  require(cfg_.w.has_value(), "factorucb: similarity matrix required");
  require(cfg_.w->size() == cfg_.num_clusters, "factorucb: W size must equal num_clusters");
}

FactorUcbPolicy::ArmLatent& FactorUcbPolicy::arm(const std::string& id) {
  auto it = arms_.find(id);
  if (it == arms_.end()) {
    // Latent factors start at small random values rather than zero: with an
    // all-zero start the update vectors carry zero latent coordinates, the
    // latent rows of theta never leave zero, and no latent learning can begin.
    // Seeded by (policy seed, arm id) so the draw is independent of insertion
    // order.
    std::mt19937_64 rng(cfg_.seed ^ (std::hash<std::string>{}(id) * 0x9e3779b97f4a7c15ULL));
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Vec v0(cfg_.latent_dim);
    for (double& x : v0) x = u(rng);
    // v0 doubles as the prior mean: with E starting at I, seeding d with v0
    // keeps v_hat = E^-1 d at v0 until real evidence accumulates, then decays
    // the prior's weight naturally.
    it = arms_.emplace(id, ArmLatent{InverseState(cfg_.latent_dim), v0, v0}).first;
  }
  return it->second;
}

Vec FactorUcbPolicy::latent(const std::string& arm_id) const {
  auto it = arms_.find(arm_id);
  if (it != arms_.end()) return it->second.v_hat;
  // unseen arm: report the same draw lazy initialization would produce
  std::mt19937_64 rng(cfg_.seed ^ (std::hash<std::string>{}(arm_id) * 0x9e3779b97f4a7c15ULL));
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Vec v0(cfg_.latent_dim);
  for (double& x : v0) x = u(rng);
  return v0;
}

std::vector<double> FactorUcbPolicy::scores(std::size_t cluster, const std::vector<Candidate>& pool) {
  const std::size_t d = cfg_.feature_dim;
  const std::size_t dl = cfg_.latent_dim;
  const Vec wi = cfg_.w->column(cluster);
  const Vec theta_eff = theta_hat_.mul(wi);  // (d + d_l)-vector
  Vec g(dl);                                 // latent rows of the effective parameter
  for (std::size_t i = 0; i < dl; ++i) g[i] = theta_eff[d + i];

  std::vector<double> out;
  out.reserve(pool.size());
  for (const Candidate& c : pool) {
    ArmLatent* al = dl > 0 ? &arm(c.arm_id) : nullptr;
    Vec z = c.features;
    if (dl > 0) z.insert(z.end(), al->v_hat.begin(), al->v_hat.end());
    const double mean = dot(theta_eff, z);
    const double var1 = a_inv_.quad_form(kron_vec(wi, z));
    double p = mean + cfg_.alpha1 * std::sqrt(var1);
    if (dl > 0) p += cfg_.alpha2 * std::sqrt(al->e_inv.quad_form(g));
    out.push_back(p);
  }
  return out;
}

void FactorUcbPolicy::update(std::size_t cluster, const Candidate& chosen, double reward) {
  const std::size_t d = cfg_.feature_dim;
  const std::size_t dl = cfg_.latent_dim;
  const Vec wi = cfg_.w->column(cluster);

  // pre-update effective parameter, split into observed and latent rows
  const Vec theta_eff_pre = theta_hat_.mul(wi);
  Vec mx_pre(d), g_pre(dl);
  for (std::size_t i = 0; i < d; ++i) mx_pre[i] = theta_eff_pre[i];
  for (std::size_t i = 0; i < dl; ++i) g_pre[i] = theta_eff_pre[d + i];

  ArmLatent* al = dl > 0 ? &arm(chosen.arm_id) : nullptr;
  Vec z = chosen.features;
  if (dl > 0) z.insert(z.end(), al->v_hat.begin(), al->v_hat.end());

  const Vec u = kron_vec(wi, z);
  a_inv_.sm_update(u, u);
  axpy(reward, u, b_);
  theta_hat_ = reshape_mat(a_inv_.apply(b_), aug_dim_, cfg_.num_clusters);

  if (dl > 0) {
    al->e_inv.sm_update(g_pre, g_pre);
    const double residual = reward - dot(chosen.features, mx_pre);
    axpy(residual, g_pre, al->d_vec);
    al->v_hat = al->e_inv.apply(al->d_vec);
  }
}

void FactorUcbPolicy::save(std::ostream& os) const {
  os << kStateMagic << "\nalgo factorucb\n";
  write_matrix_csv(os, a_inv_.inv());
  write_vec_line(os, b_);
  os << "arms " << arms_.size() << "\n";
  for (const auto& [id, al] : arms_) {
    os << "arm " << id << "\n";
    write_matrix_csv(os, al.e_inv.inv());
    write_vec_line(os, al.d_vec);
    write_vec_line(os, al.v_hat);
  }
}

void FactorUcbPolicy::load(std::istream& is) {
  expect_exact(is, kStateMagic);
  expect_exact(is, "algo factorucb");
  const Matrix inv = read_matrix_csv(is);
  Vec b = read_vec_line(is);
  const std::size_t n = aug_dim_ * cfg_.num_clusters;
  require(inv.rows() == n && b.size() == n, "snapshot: factorucb dimension mismatch");
  a_inv_ = matrix_to_inverse(inv);
  b_ = std::move(b);
  theta_hat_ = reshape_mat(a_inv_.apply(b_), aug_dim_, cfg_.num_clusters);

  std::size_t arms = 0;
  {
    std::istringstream hdr(expect_line(is, "arm count"));
    std::string tag;
    hdr >> tag >> arms;
    if (tag != "arms") throw ParseError("snapshot: expected arms count");
  }
  arms_.clear();
  for (std::size_t i = 0; i < arms; ++i) {
    const std::string line = expect_line(is, "arm id");
    if (line.rfind("arm ", 0) != 0) throw ParseError("snapshot: expected arm entry");
    const std::string id = line.substr(4);
    const Matrix e_inv = read_matrix_csv(is);
    Vec d_vec = read_vec_line(is);
    Vec v_hat = read_vec_line(is);
    require(e_inv.rows() == cfg_.latent_dim && d_vec.size() == cfg_.latent_dim &&
                v_hat.size() == cfg_.latent_dim,
            "snapshot: latent dimension mismatch");
    arms_.emplace(id, ArmLatent{matrix_to_inverse(e_inv), std::move(d_vec), std::move(v_hat)});
  }
}

// ---------------------------------------------------------------------------

SelectOutcome policy_select_update(Policy& policy, std::size_t cluster, const EventRecord& event) {
  const std::size_t idx = policy.select(cluster, event.pool);
  SelectOutcome out;
  out.chosen_arm = event.pool[idx].arm_id;
  if (out.chosen_arm == event.displayed_arm) {
    policy.update(cluster, event.pool[idx], static_cast<double>(event.click));
    out.matched = true;
  }
  return out;
}

std::unique_ptr<Policy> make_policy(const std::string& algo, const PolicyConfig& cfg) {
  if (algo == "random") return std::make_unique<RandomPolicy>(cfg.seed);
  if (algo == "linucb") return std::make_unique<LinUcbPolicy>(cfg);
  if (algo == "mlinucb") return std::make_unique<MLinUcbPolicy>(cfg);
  if (algo == "colin") return std::make_unique<CoLinPolicy>(cfg);
  if (algo == "factorucb") {
    require(cfg.latent_dim >= 1, "factorucb: latent_dim must be >= 1");
    return std::make_unique<FactorUcbPolicy>(cfg);
  }
  throw ConfigError("unknown algorithm: " + algo);
}

std::unique_ptr<Policy> load_policy_snapshot(std::istream& is, const PolicyConfig& cfg) {
  std::string magic, algo_line;
  if (!std::getline(is, magic) || magic != kStateMagic)
    throw ParseError("snapshot: bad header");
  if (!std::getline(is, algo_line) || algo_line.rfind("algo ", 0) != 0)
    throw ParseError("snapshot: missing algo line");
  const std::string algo = algo_line.substr(5);
  auto policy = make_policy(algo, cfg);
  is.seekg(0);
  policy->load(is);
  return policy;
}

}  // namespace cobandit
