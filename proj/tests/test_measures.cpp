#include <doctest.h>

#include <vector>

#include "ddp/measures.hpp"
#include "ddp/stats.hpp"

using namespace ddp;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("sample_dirichlet: degenerate and invalid inputs") {
  RngStream rng(1);
  CHECK(sample_dirichlet(vec({3.7}), rng).probs[0] == 1.0);
  CHECK_THROWS_AS(sample_dirichlet(vec({1.0, 0.0}), rng), InvalidArgument);
  CHECK_THROWS_AS(sample_dirichlet(vec({1.0, -2.0}), rng), InvalidArgument);
}

TEST_CASE("sample_dirichlet: moments") {
  RngStream rng(2);
  const int M = 50000;
  std::vector<double> a(M), b(M);
  for (int i = 0; i < M; ++i) {
    a[i] = sample_dirichlet(vec({2, 2}), rng)[0];
    b[i] = sample_dirichlet(vec({1, 1, 1}), rng)[0];
  }
  CHECK(mean_estimate(a).agrees_with(0.5));
  // alpha_k (A - alpha_k) / (A^2 (A + 1)) = 1 * 2 / (9 * 4)
  CHECK(variance_estimate(b).agrees_with(2.0 / 36.0));
}

TEST_CASE("sample_dirichlet: tiny parameters stay on the simplex") {
  RngStream rng(3);
  Eigen::VectorXd alpha = Eigen::VectorXd::Constant(50, 0.002);
  for (int i = 0; i < 2000; ++i) {
    const auto p = sample_dirichlet(alpha, rng);
    REQUIRE(p.valid());
  }
}

TEST_CASE("sample_multinomial") {
  RngStream rng(4);
  const SimplexMeasure p(vec({0.3, 0.7}));
  const auto zero = sample_multinomial(0, p, rng);
  CHECK(zero.counts.sum() == 0);
  CHECK(zero.valid());

  const auto all = sample_multinomial(5, SimplexMeasure(vec({1.0, 0.0})), rng);
  CHECK(all.counts[0] == 5);
  CHECK(all.counts[1] == 0);

  const int M = 50000;
  std::vector<double> first(M);
  for (int i = 0; i < M; ++i) {
    const auto n = sample_multinomial(10, p, rng);
    REQUIRE(n.valid());
    first[i] = n[0];
  }
  CHECK(mean_estimate(first).agrees_with(3.0));
}

TEST_CASE("sample_dirichlet_multinomial") {
  RngStream rng(5);
  const Eigen::VectorXd base = vec({0.2, 0.5, 0.3});
  CHECK(sample_dirichlet_multinomial(0, 1.0, base, rng).counts.sum() == 0);
  CHECK_THROWS_AS(sample_dirichlet_multinomial(3, 0.0, base, rng), InvalidArgument);

  const int M = 50000;
  std::vector<std::vector<double>> one_ball(3, std::vector<double>(M));
  for (int i = 0; i < M; ++i) {
    const auto n = sample_dirichlet_multinomial(1, 2.0, base, rng);
    for (int k = 0; k < 3; ++k) one_ball[k][i] = n[k];
  }
  for (int k = 0; k < 3; ++k) CHECK(mean_estimate(one_ball[k]).agrees_with(base[k]));

  std::vector<double> counts(M);
  for (int i = 0; i < M; ++i) counts[i] = sample_dirichlet_multinomial(5, 2.0, vec({0.5, 0.5}), rng)[0];
  // c b (1 - b) (c0 + c) / (c0 + 1)
  CHECK(variance_estimate(counts).agrees_with(5 * 0.25 * 7.0 / 3.0));
  CHECK(mean_estimate(counts).agrees_with(2.5));
}

TEST_CASE("two-stage Dirichlet then multinomial matches the direct sampler") {
  RngStream rng(6);
  const Eigen::VectorXd base = vec({0.1, 0.6, 0.3});
  const double c0 = 1.5;
  const int c = 7, M = 40000;
  std::vector<double> direct(M), staged(M), direct_sq(M), staged_sq(M);
  for (int i = 0; i < M; ++i) {
    const double d = sample_dirichlet_multinomial(c, c0, base, rng)[0];
    const auto G = sample_dirichlet(c0 * base, rng);
    const double s = sample_multinomial(c, G, rng)[0];
    direct[i] = d;
    staged[i] = s;
    direct_sq[i] = d * d;
    staged_sq[i] = s * s;
  }
  CHECK(agree(mean_estimate(direct), mean_estimate(staged)));
  CHECK(agree(mean_estimate(direct_sq), mean_estimate(staged_sq)));
}

TEST_CASE("sample_stick_breaking: identities") {
  RngStream rng(7);
  auto identity = [](double u) { return u; };
  const auto one = sample_stick_breaking(2.0, identity, 1, rng);
  CHECK(one.weights.size() == 1);
  CHECK(one.residual == doctest::Approx(1.0 - one.weights[0]).epsilon(1e-15));

  for (int i = 0; i < 1000; ++i) {
    const auto d = sample_stick_breaking(0.5 + 3 * rng.uniform(), identity, 1 + rng.below(40), rng);
    CHECK(std::abs(d.weights.sum() + d.residual - 1.0) < 1e-12);
    CHECK((d.weights.array() >= 0).all());
  }
  CHECK_THROWS_AS(sample_stick_breaking(0.0, identity, 3, rng), InvalidArgument);
  CHECK_THROWS_AS(sample_stick_breaking(1.0, identity, 0, rng), InvalidArgument);
}

TEST_CASE("sample_stick_breaking: expected residual") {
  RngStream rng(8);
  const int M = 200000;
  std::vector<double> residual(M);
  for (int i = 0; i < M; ++i) residual[i] = sample_stick_breaking(1.0, [](double u) { return u; }, 20, rng).residual;
  // E(1 - v) = c0 / (c0 + 1) per stick
  CHECK(mean_estimate(residual).agrees_with(std::pow(0.5, 20)));
}

TEST_CASE("stick-breaking projected on a partition is Dirichlet(c0 F0(B_k))") {
  // F0 uniform on (0, 1); bins of unequal width
  const Eigen::VectorXd edges = vec({0.0, 0.1, 0.35, 0.7, 1.0});
  const Eigen::VectorXd widths = edges.tail(4) - edges.head(4);
  const double c0 = 2.0;
  const int M = 20000;
  RngStream rng(9);
  std::vector<std::vector<double>> sb(4, std::vector<double>(M)), dir(4, std::vector<double>(M));
  std::vector<std::vector<double>> sb_sq(4, std::vector<double>(M)), dir_sq(4, std::vector<double>(M));
  for (int i = 0; i < M; ++i) {
    const auto draw = sample_stick_breaking(c0, [](double u) { return u; }, 120, rng);
    Eigen::VectorXd binned = Eigen::VectorXd::Zero(4);
    for (Eigen::Index j = 0; j < draw.atoms.size(); ++j) {
      Eigen::Index k = 0;
      while (k < 3 && draw.atoms[j] > edges[k + 1]) ++k;
      binned[k] += draw.weights[j];
    }
    const auto p = sample_dirichlet(c0 * widths, rng);
    for (int k = 0; k < 4; ++k) {
      sb[k][i] = binned[k];
      dir[k][i] = p[k];
      sb_sq[k][i] = binned[k] * binned[k];
      dir_sq[k][i] = p[k] * p[k];
    }
  }
  for (int k = 0; k < 4; ++k) {
    CHECK(agree(mean_estimate(sb[k]), mean_estimate(dir[k])));
    CHECK(agree(mean_estimate(sb_sq[k]), mean_estimate(dir_sq[k])));
  }
}

TEST_CASE("same seed gives identical draws; split streams differ") {
  RngStream a(42), b(42);
  const Eigen::VectorXd alpha = vec({0.5, 1.0, 2.0});
  for (int i = 0; i < 100; ++i) {
    CHECK(sample_dirichlet(alpha, a).probs == sample_dirichlet(alpha, b).probs);
    CHECK(sample_dirichlet_multinomial(9, 1.0, alpha / alpha.sum(), a).counts ==
          sample_dirichlet_multinomial(9, 1.0, alpha / alpha.sum(), b).counts);
  }
  RngStream root(42);
  auto s1 = root.split(1), s1b = root.split(1), s2 = root.split(2);
  const auto x = s1.engine()();
  CHECK(x == s1b.engine()());
  CHECK(x != s2.engine()());
}
