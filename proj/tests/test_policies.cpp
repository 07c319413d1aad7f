#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cobandit/policies.hpp"
#include "oracles.hpp"

using namespace cobandit;

namespace {

PolicyConfig base_cfg(std::size_t d, std::size_t m, double alpha = 0.5) {
  PolicyConfig cfg;
  cfg.alpha = alpha;
  cfg.num_clusters = m;
  cfg.feature_dim = d;
  return cfg;
}

std::vector<Candidate> pool2() {
  return {{"a", {1, 0}}, {"b", {0, 1}}};
}

SimilarityMatrix w_from(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return SimilarityMatrix::from_matrix(m);
}

}  // namespace

TEST_CASE("random: single candidate, determinism, and uniformity") {
  RandomPolicy p(123);
  const std::vector<Candidate> one{{"only", {1.0}}};
  CHECK(p.select(0, one) == 0);
  CHECK_THROWS_AS(p.select(0, {}), EmptyPool);

  RandomPolicy a(5), b(5);
  const std::vector<Candidate> five{
      {"0", {1.}}, {"1", {1.}}, {"2", {1.}}, {"3", {1.}}, {"4", {1.}}};
  std::vector<int> counts(5, 0);
  for (int t = 0; t < 100000; ++t) {
    const std::size_t ia = a.select(0, five);
    CHECK(ia == b.select(0, five));
    ++counts[ia];
  }
  // binomial 3 sigma around 0.2
  const double sigma = std::sqrt(0.2 * 0.8 / 100000.0);
  for (int c : counts) CHECK(std::abs(c / 100000.0 - 0.2) < 3.0 * sigma);
}

TEST_CASE("linucb: fresh-arm scores") {
  LinUcbPolicy p0(base_cfg(2, 1, 0.0));
  CHECK(p0.score_one({"x", {3, 4}}) == 0.0);

  LinUcbPolicy p1(base_cfg(2, 1, 1.0));
  CHECK(p1.score_one({"x", {3, 4}}) == doctest::Approx(5.0));
}

TEST_CASE("linucb: one update then exploit score") {
  LinUcbPolicy p(base_cfg(2, 1, 0.0));
  p.update(0, {"x", {1, 0}}, 1.0);
  // A = I + e1 e1^T, b = e1, theta = (0.5, 0)
  CHECK(p.score_one({"x", {1, 0}}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mlinucb: tie rule, identity-covariance exploration, and learning") {
  MLinUcbPolicy fresh(base_cfg(2, 3, 0.0));
  CHECK(fresh.select(1, pool2()) == 0);  // all zero scores, first wins

  MLinUcbPolicy explore(base_cfg(2, 3, 1.0));
  const std::vector<Candidate> uneven{{"small", {0.1, 0.0}}, {"big", {0.0, 2.0}}};
  CHECK(explore.select(0, uneven) == 1);  // max norm wins on a fresh state

  MLinUcbPolicy p(base_cfg(2, 2, 0.0));
  for (int t = 0; t < 20; ++t) p.update(0, {"a", {1, 0}}, 1.0);
  CHECK(p.select(0, pool2()) == 0);
  // only cluster 0 learned anything
  CHECK(p.theta_hat(1) == Vec{0, 0});
}

TEST_CASE("mlinucb: reward zero still shrinks exploration") {
  MLinUcbPolicy p(base_cfg(2, 1, 1.0));
  const std::vector<double> before = p.scores(0, pool2());
  p.update(0, {"a", {1, 0}}, 0.0);
  const std::vector<double> after = p.scores(0, pool2());
  CHECK(after[0] < before[0]);       // variance for (1,0) shrank
  CHECK(after[1] == doctest::Approx(before[1]));  // orthogonal direction untouched
  CHECK(p.theta_hat(0) == Vec{0, 0});             // b unchanged
}

TEST_CASE("mlinucb: inverse matches the direct inversion oracle after updates") {
  MLinUcbPolicy p(base_cfg(3, 1, 0.0));
  oracles::Mat a = oracles::identity(3);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> b_acc(3, 0.0);
  for (int t = 0; t < 5; ++t) {
    Vec x{u(rng), u(rng), u(rng)};
    const double r = u(rng);
    p.update(0, {"arm", x}, r);
    oracles::add_outer(a, x);
    for (int i = 0; i < 3; ++i) b_acc[i] += r * x[i];
  }
  const auto want = oracles::matvec(oracles::invert(a), b_acc);
  const Vec got = p.theta_hat(0);
  for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("colin: fresh-state score is alpha * |w_i| * |x|") {
  auto cfg = base_cfg(2, 2, 0.7);
  cfg.w = w_from({{0.6, 0.3}, {0.4, 0.7}});
  CoLinPolicy p(cfg);
  const auto s = p.scores(0, pool2());
  const double wnorm = std::sqrt(0.6 * 0.6 + 0.4 * 0.4);
  CHECK(s[0] == doctest::Approx(0.7 * wnorm).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(0.7 * wnorm).epsilon(1e-12));
}

TEST_CASE("colin with identity W reduces to mlinucb exactly") {
  const std::size_t d = 3, m = 4;
  auto cfg = base_cfg(d, m, 0.8);
  auto colin_cfg = cfg;
  colin_cfg.w = SimilarityMatrix::identity(m);
  MLinUcbPolicy ml(cfg);
  CoLinPolicy co(colin_cfg);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> cluster_u(0, m - 1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t cluster = cluster_u(rng);
    std::vector<Candidate> pool;
    for (int a = 0; a < 5; ++a)
      pool.push_back({"a" + std::to_string(a), {u(rng), u(rng), u(rng)}});
    const auto s_ml = ml.scores(cluster, pool);
    const auto s_co = co.scores(cluster, pool);
    for (std::size_t i = 0; i < pool.size(); ++i)
      CHECK(s_co[i] == doctest::Approx(s_ml[i]).epsilon(1e-9));
    CHECK(ml.select(cluster, pool) == co.select(cluster, pool));
    const std::size_t pick = ml.select(cluster, pool);
    const double r = u(rng) > 0 ? 1.0 : 0.0;
    ml.update(cluster, pool[pick], r);
    co.update(cluster, pool[pick], r);
    // per-cluster theta agreement
    for (std::size_t c = 0; c < m; ++c) {
      const Vec want = ml.theta_hat(c);
      for (std::size_t i = 0; i < d; ++i)
        CHECK(co.theta_hat()(i, c) == doctest::Approx(want[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("colin: hand-traced single update at d=1, M=2") {
  auto cfg = base_cfg(1, 2, 0.0);
  cfg.w = w_from({{0.6, 0.4}, {0.4, 0.6}});
  CoLinPolicy p(cfg);
  p.update(0, {"a", {1.0}}, 1.0);
  // u = (0.6, 0.4); A = I + u u^T; theta = A^-1 b with b = u
  oracles::Mat a = oracles::identity(2);
  oracles::add_outer(a, {0.6, 0.4});
  const auto inv = oracles::invert(a);
  const auto theta = oracles::matvec(inv, {0.6, 0.4});
  CHECK(p.theta_hat()(0, 0) == doctest::Approx(theta[0]).epsilon(1e-12));
  CHECK(p.theta_hat()(0, 1) == doctest::Approx(theta[1]).epsilon(1e-12));
  // numerically: ~0.3949 and ~0.2633
  CHECK(p.theta_hat()(0, 0) == doctest::Approx(0.3949).epsilon(1e-3));
  CHECK(p.theta_hat()(0, 1) == doctest::Approx(0.2633).epsilon(1e-3));
}

TEST_CASE("colin: information propagates to an untrained cluster") {
  auto cfg = base_cfg(1, 2, 0.0);
  cfg.w = w_from({{0.5, 0.5}, {0.5, 0.5}});
  CoLinPolicy p(cfg);
  for (int t = 0; t < 10; ++t) p.update(0, {"a", {1.0}}, 1.0);
  // cluster 1 was never updated but its effective mean is nonzero
  const auto s = p.scores(1, {{"a", {1.0}}});
  CHECK(s[0] > 0.1);
}

TEST_CASE("colin: reward zero leaves b (and the mean term) unchanged") {
  auto cfg = base_cfg(2, 2, 0.0);
  cfg.w = w_from({{0.7, 0.2}, {0.3, 0.8}});
  CoLinPolicy p(cfg);
  p.update(0, {"a", {1, 0}}, 0.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t c = 0; c < 2; ++c) CHECK(p.theta_hat()(i, c) == 0.0);
}

TEST_CASE("factorucb: fresh-state score and the d_l=0 reduction to colin") {
  const std::size_t d = 2, m = 2;
  auto cfg = base_cfg(d, m);
  cfg.alpha = 0.9;
  cfg.alpha1 = 0.9;
  cfg.alpha2 = 0.375;
  cfg.latent_dim = 0;
  cfg.w = w_from({{0.6, 0.3}, {0.4, 0.7}});

  FactorUcbPolicy f(cfg);
  const auto s = f.scores(0, pool2());
  const double wnorm = std::sqrt(0.6 * 0.6 + 0.4 * 0.4);
  CHECK(s[0] == doctest::Approx(0.9 * wnorm).epsilon(1e-12));

  CoLinPolicy c(cfg);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> cluster_u(0, m - 1);
  for (int t = 0; t < 150; ++t) {
    const std::size_t cluster = cluster_u(rng);
    std::vector<Candidate> pool;
    for (int a = 0; a < 4; ++a) pool.push_back({"a" + std::to_string(a), {u(rng), u(rng)}});
    const auto sf = f.scores(cluster, pool);
    const auto sc = c.scores(cluster, pool);
    for (std::size_t i = 0; i < pool.size(); ++i)
      CHECK(sf[i] == doctest::Approx(sc[i]).epsilon(1e-9));
    CHECK(f.select(cluster, pool) == c.select(cluster, pool));
    const std::size_t pick = f.select(cluster, pool);
    const double r = u(rng) > 0 ? 1.0 : 0.0;
    f.update(cluster, pool[pick], r);
    c.update(cluster, pool[pick], r);
  }
}

TEST_CASE("factorucb: first update with zero reward changes no learned state") {
  auto cfg = base_cfg(2, 1);
  cfg.latent_dim = 2;
  cfg.w = SimilarityMatrix::identity(1);
  FactorUcbPolicy f(cfg);
  const Vec v_before = f.latent("a");
  f.update(0, {"a", {1, 0}}, 0.0);
  // r=0 keeps b at zero, so theta stays zero, g stays zero, and the latent
  // estimate is untouched
  CHECK(f.latent("a") == v_before);
  for (std::size_t i = 0; i < 4; ++i) CHECK(f.theta_hat()(i, 0) == 0.0);
}

TEST_CASE("factorucb: hand trace at d=1, d_l=1, M=1, W=[1]") {
  auto cfg = base_cfg(1, 1);
  cfg.latent_dim = 1;
  cfg.w = SimilarityMatrix::identity(1);
  FactorUcbPolicy f(cfg);
  const double v0 = f.latent("a")[0];
  f.update(0, {"a", {1.0}}, 1.0);

  // independent trace: z = (1, v0); u = z; A = I2 + u u^T; b = u
  oracles::Mat a = oracles::identity(2);
  oracles::add_outer(a, {1.0, v0});
  const auto theta = oracles::matvec(oracles::invert(a), {1.0, v0});
  CHECK(f.theta_hat()(0, 0) == doctest::Approx(theta[0]).epsilon(1e-12));
  CHECK(f.theta_hat()(1, 0) == doctest::Approx(theta[1]).epsilon(1e-12));
  // pre-update theta was zero, so g = 0 and the latent estimate is untouched
  CHECK(f.latent("a")[0] == v0);

  // second update: g = theta_v pre-update, E = 1 + g^2, and d starts at the
  // prior mean v0 before accumulating g * (r - x theta_x)
  f.update(0, {"a", {1.0}}, 1.0);
  const double g = theta[1];
  const double e = 1.0 + g * g;
  const double d_acc = v0 + g * (1.0 - theta[0]);
  CHECK(f.latent("a")[0] == doctest::Approx(d_acc / e).epsilon(1e-12));
}

TEST_CASE("factorucb: alpha2 bonus is positive once theta_v is informative") {
  auto cfg = base_cfg(1, 1);
  cfg.alpha1 = 0.0;
  cfg.alpha2 = 1.0;
  cfg.latent_dim = 1;
  cfg.w = SimilarityMatrix::identity(1);
  FactorUcbPolicy f(cfg);
  f.update(0, {"a", {1.0}}, 1.0);
  // theta_v != 0 now (latent coordinate of the update vector was nonzero),
  // so the alpha2 radius must be strictly positive
  CHECK(f.theta_hat()(1, 0) != 0.0);
  const auto exploit = f.scores(0, {{"a", {1.0}}});
  cfg.alpha2 = 0.0;
  FactorUcbPolicy g2(cfg);
  g2.update(0, {"a", {1.0}}, 1.0);
  const auto no_bonus = g2.scores(0, {{"a", {1.0}}});
  CHECK(exploit[0] > no_bonus[0]);
}

TEST_CASE("argmax scale covariance on fresh states") {
  auto cfg = base_cfg(2, 2, 0.6);
  cfg.w = w_from({{0.8, 0.1}, {0.2, 0.9}});
  const std::vector<Candidate> pool{{"a", {0.3, 1.1}}, {"b", {0.9, 0.2}}, {"c", {-0.5, 0.4}}};
  std::vector<Candidate> scaled = pool;
  for (Candidate& c : scaled)
    for (double& v : c.features) v *= 3.5;

  CoLinPolicy p1(cfg), p2(cfg);
  const auto s = p1.scores(0, pool);
  const auto ss = p2.scores(0, scaled);
  for (std::size_t i = 0; i < pool.size(); ++i)
    CHECK(ss[i] == doctest::Approx(3.5 * s[i]).epsilon(1e-12));
  CHECK(p1.select(0, pool) == p2.select(0, scaled));
}

TEST_CASE("policy_select_update honors the replay match rule") {
  auto cfg = base_cfg(2, 1, 0.0);
  MLinUcbPolicy p(cfg);

  EventRecord e;
  e.displayed_arm = "b";
  e.user_features = {0.0};
  e.pool = pool2();
  e.click = 1;

  // fresh state with alpha=0 picks the first candidate "a" != displayed "b"
  const SelectOutcome miss = policy_select_update(p, 0, e);
  CHECK_FALSE(miss.matched);
  CHECK(miss.chosen_arm == "a");
  CHECK(p.theta_hat(0) == Vec{0, 0});  // no state change

  e.displayed_arm = "a";
  const SelectOutcome hit = policy_select_update(p, 0, e);
  CHECK(hit.matched);
  CHECK(p.theta_hat(0) != Vec{0, 0});
}

TEST_CASE("random policy match rate on synthetic events is ~1/K") {
  RandomPolicy p(99);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> disp(0, 4);
  int matched = 0;
  const int n = 20000;
  for (int t = 0; t < n; ++t) {
    EventRecord e;
    for (int a = 0; a < 5; ++a) e.pool.push_back({"a" + std::to_string(a), {1.0}});
    e.displayed_arm = "a" + std::to_string(disp(rng));
    e.click = 0;
    if (policy_select_update(p, 0, e).matched) ++matched;
  }
  const double sigma = std::sqrt(0.2 * 0.8 / n);
  CHECK(std::abs(matched / static_cast<double>(n) - 0.2) < 3.0 * sigma);
}

TEST_CASE("policy snapshots round-trip behavior") {
  auto cfg = base_cfg(2, 2, 0.4);
  cfg.w = w_from({{0.7, 0.2}, {0.3, 0.8}});
  cfg.latent_dim = 2;
  FactorUcbPolicy p(cfg);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 30; ++t)
    p.update(t % 2, {"a" + std::to_string(t % 3), {u(rng), u(rng)}}, u(rng) > 0 ? 1.0 : 0.0);

  std::stringstream snap;
  p.save(snap);
  auto restored = load_policy_snapshot(snap, cfg);

  const std::vector<Candidate> pool{{"a0", {0.4, -0.2}}, {"a1", {-0.9, 0.3}}, {"new", {0.1, 1.0}}};
  for (std::size_t cluster = 0; cluster < 2; ++cluster)
    CHECK(p.select(cluster, pool) == restored->select(cluster, pool));
}

TEST_CASE("make_policy validates its configuration") {
  auto cfg = base_cfg(2, 2);
  CHECK_THROWS_AS(make_policy("colin", cfg), ConfigError);  // no W
  CHECK_THROWS_AS(make_policy("nope", cfg), ConfigError);
  cfg.w = SimilarityMatrix::identity(2);
  cfg.latent_dim = 0;
  CHECK_THROWS_AS(make_policy("factorucb", cfg), ConfigError);  // latent_dim < 1
}
