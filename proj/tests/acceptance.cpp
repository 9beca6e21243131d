// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "ddp/cli/commands.hpp"
#include "ddp/inference.hpp"
#include "ddp/prior.hpp"
#include "ddp/stats.hpp"
#include "oracles.hpp"

using namespace ddp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt_est(const Estimate& e) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.5f (SE %.5f)", e.value, e.se);
  return buf;
}

std::string fmt_num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Eigen::VectorXd uniform_base(int K) { return Eigen::VectorXd::Constant(K, 1.0 / K); }

Outcome marginal_law() {
  RngStream rng(101);
  const double c0 = 2.0;
  const DdpModel model(PrecisionParams(c0, {3, 2, 4}), moving_average(3, 1), vec({0.3, 0.7}));
  const int M = 20000;
  std::vector<double> x(M);
  for (int r = 0; r < M; ++r) x[r] = sample_prior(model, rng).F[1][0];
  const auto exact = marginal_moments(0.3, c0);
  const auto mean = mean_estimate(x), var = variance_estimate(x);
  return {mean.agrees_with(exact.mean) && var.agrees_with(exact.variance),
          "mean " + fmt_est(mean) + " vs 0.3, variance " + fmt_est(var) + " vs " + fmt_num(exact.variance)};
}

Outcome correlations() {
  RngStream rng(102);
  const int M = 50000;
  const DdpModel wm(PrecisionParams(1.0, {1, 1}), custom({{0}, {0, 1}}), uniform_base(2));
  const DdpModel ma(PrecisionParams::constant(1.0, 1, 4), moving_average(4, 1), uniform_base(2));
  const DdpModel circ(PrecisionParams(1.0, {2, 3}), circular(2), uniform_base(2));
  const auto a = mc_correlation(wm, 0, 1, 0, 0, M, rng);
  const auto b = mc_correlation(ma, 1, 2, 0, 0, M, rng);
  const auto c = mc_correlation(circ, 0, 1, 0, 0, M, rng);
  const bool analytic = std::abs(corr_same_set(0, 1, wm.params, wm.structure) - 0.5) < 1e-15 &&
                        std::abs(corr_same_set(1, 2, ma.params, ma.structure) - 5.0 / 9.0) < 1e-15 &&
                        std::abs(corr_same_set(0, 1, circ.params, circ.structure) - 5.0 / 6.0) < 1e-15;
  return {analytic && a.agrees_with(0.5) && b.agrees_with(5.0 / 9.0) && c.agrees_with(5.0 / 6.0),
          "bivariate " + fmt_est(a) + " vs 0.5, MA(1) " + fmt_est(b) + " vs 0.55556, circular " + fmt_est(c) +
              " vs 0.83333"};
}

Outcome cross_bin() {
  RngStream rng(103);
  const DdpModel model(PrecisionParams(1.0, {1, 1}), custom({{0}, {0, 1}}), uniform_base(4));
  const double same = corr_same_set(0, 1, model.params, model.structure);
  const double target = -same / 3.0;
  const double analytic = corr_cross_sets(0, 1, 0.25, 0.25, model.params, model.structure);
  const auto est = mc_correlation(model, 0, 1, 0, 2, 50000, rng);
  return {std::abs(analytic - target) < 1e-15 && est.agrees_with(target),
          "Monte Carlo " + fmt_est(est) + " vs " + fmt_num(target)};
}

Outcome independence() {
  RngStream rng(104);
  const DdpModel model(PrecisionParams(1.0, {0, 0, 0, 0, 0}), moving_average(5, 2), uniform_base(3));
  bool pass = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    const int t = static_cast<int>(rng.below(5));
    int t2 = static_cast<int>(rng.below(4));
    if (t2 >= t) ++t2;
    const auto est = mc_correlation(model, t, t2, 0, 0, 20000, rng);
    pass = pass && est.agrees_with(0.0);
    detail += "(" + std::to_string(t + 1) + "," + std::to_string(t2 + 1) + ") " + fmt_est(est) + "  ";
  }
  return {pass, detail};
}

Outcome gibbs_vs_oracle() {
  const DdpModel model(PrecisionParams(1.0, {1, 1}), moving_average(2, 1), uniform_base(2));
  const auto data = ObservedData::from_counts((Eigen::MatrixXi(2, 2) << 2, 0, 1, 1).finished());
  const auto exact = exact_posterior_small(data, model);
  GibbsConfig cfg;
  cfg.iterations = 51000;
  cfg.burn_in = 1000;
  cfg.thin = 1;
  cfg.seed = 105;
  const auto chain = run_gibbs(data, model, cfg);
  bool pass = chain.size() == 50000;
  std::string detail;
  for (int t = 0; t < 2; ++t) {
    double mean = 0;
    for (const auto& d : chain.draws) mean += d.F[t][0];
    mean /= static_cast<double>(chain.size());
    pass = pass && std::abs(mean - exact.mean(t, 0)) < 0.01;
    detail += "F_" + std::to_string(t + 1) + "(B_1) chain " + fmt_num(mean) + " exact " + fmt_num(exact.mean(t, 0)) + "  ";
  }
  return {pass, detail};
}

Outcome mh_kernel() {
  RngStream rng(106);
  const Eigen::VectorXd base = vec({0.4, 0.6});
  bool pass = true;
  std::string detail;
  for (int c = 1; c <= 3; ++c) {
    const DdpModel model(PrecisionParams(1.0, {c, 2}), moving_average(2, 1), base);
    ChainState s;
    s.G = SimplexMeasure(vec({0.4, 0.6}));
    s.F = {SimplexMeasure(vec({0.55, 0.45})), SimplexMeasure(vec({0.3, 0.7}))};
    s.N = {CountMeasure(Eigen::VectorXi::Zero(2), 0), CountMeasure((Eigen::VectorXi(2) << 1, 1).finished(), 2)};
    s.N[0].counts[0] = c;
    s.N[0].total = c;
    const auto support = oracle::all_compositions(c, 2);
    const auto exact = oracle::latent_conditional(0, {{0}, {0, 1}}, {s.N[0].counts, s.N[1].counts},
                                                  {s.F[0].probs, s.F[1].probs}, s.G.probs, 1.0, base, support);
    const int sweeps = 200000;
    std::vector<std::vector<double>> hits(support.size(), std::vector<double>(sweeps));
    for (int i = 0; i < sweeps; ++i) {
      update_N_mh(s, 0, model, rng);
      for (std::size_t j = 0; j < support.size(); ++j) hits[j][i] = s.N[0].counts == support[j] ? 1.0 : 0.0;
    }
    double worst = 0;
    for (std::size_t j = 0; j < support.size(); ++j) {
      const auto est = batch_means_estimate(hits[j]);
      pass = pass && est.agrees_with(exact[j]);
      worst = std::max(worst, std::abs(est.value - exact[j]) / est.se);
    }
    detail += "c=" + std::to_string(c) + " max |z| " + fmt_num(worst) + "  ";
  }
  return {pass, detail};
}

Outcome getting_it_right() {
  const DdpModel model(PrecisionParams(1.5, {2, 1, 3}), moving_average(3, 1), vec({0.2, 0.3, 0.5}));
  const std::vector<int> m{2, 2, 2};
  const int T = 3, K = 3;
  auto record = [&](const ChainState& s, std::vector<std::vector<double>>& out, std::size_t i) {
    std::size_t col = 0;
    for (int t = 0; t < T; ++t)
      for (int k = 0; k < K; ++k) {
        out[col++][i] = s.F[t][k];
        out[col++][i] = s.N[t][k];
      }
    for (int k = 0; k < K; ++k) out[col++][i] = s.G[k];
  };
  const std::size_t stats = 2 * T * K + K;

  RngStream rng(107);
  const int M = 60000;
  std::vector<std::vector<double>> marginal(stats, std::vector<double>(M));
  for (int i = 0; i < M; ++i) {
    const auto d = sample_prior(model, rng);
    ChainState s{d.F, d.N, d.G};
    record(s, marginal, static_cast<std::size_t>(i));
  }

  const int S = 200000;
  std::vector<std::vector<double>> successive(stats, std::vector<double>(S));
  const auto start = sample_prior(model, rng);
  ChainState s{start.F, start.N, start.G};
  Eigen::MatrixXi h(T, K);
  for (int i = 0; i < S; ++i) {
    for (int t = 0; t < T; ++t) h.row(t) = sample_multinomial(m[t], s.F[t], rng).counts.transpose();
    gibbs_sweep(s, ObservedData::from_counts(h), model, rng);
    record(s, successive, static_cast<std::size_t>(i));
  }

  bool pass = true;
  double worst = 0;
  for (std::size_t j = 0; j < stats; ++j) {
    const auto a = mean_estimate(marginal[j]);
    const auto b = batch_means_estimate(successive[j]);
    pass = pass && agree(a, b);
    worst = std::max(worst, std::abs(a.value - b.value) / std::hypot(a.se, b.se));
  }
  return {pass, std::to_string(stats) + " moments of F, N, G; max |z| " + fmt_num(worst)};
}

Outcome classical_reduction() {
  const auto partition = build_partition(0.0, 5.0, 5);
  const auto base = base_masses(NormalBase<double>{2.5, 5.0 / 7}, partition);
  const double c0 = 1.0;
  const DdpModel model(PrecisionParams(c0, {0, 0}), moving_average(2, 1), base);
  const Eigen::MatrixXi h = (Eigen::MatrixXi(2, 5) << 5, 1, 0, 2, 2, 0, 3, 3, 0, 4).finished();
  const auto data = ObservedData::from_counts(h);
  GibbsConfig cfg;
  cfg.iterations = 21000;
  cfg.burn_in = 1000;
  cfg.thin = 1;
  cfg.seed = 108;
  const auto chain = run_gibbs(data, model, cfg);
  bool pass = true;
  double worst = 0;
  for (int t = 0; t < 2; ++t)
    for (int k = 0; k < 5; ++k) {
      std::vector<double> x;
      x.reserve(chain.size());
      for (const auto& d : chain.draws) x.push_back(d.F[t][k]);
      const auto est = batch_means_estimate(x);
      const double exact = (c0 * base[k] + h(t, k)) / (c0 + h.row(t).sum());
      pass = pass && est.agrees_with(exact);
      worst = std::max(worst, std::abs(est.value - exact) / est.se);
    }
  return {pass, "10 cells, max |z| " + fmt_num(worst)};
}

Outcome urn_predictive_check() {
  RngStream rng(109);
  const DdpModel model(PrecisionParams(0.5, {3, 2, 4}), moving_average(3, 1), vec({0.1, 0.2, 0.3, 0.4}));
  const auto urn = seed_urns(model, rng);
  const int t = 1;
  // (c0 base + sum_{j in d_t} c_j Ghat_j) / (c0 + sum c_j), written out from the latent balls
  Eigen::VectorXd expected = model.c0() * model.base;
  double total = model.c0();
  for (int j : model.structure.forward(t)) {
    for (auto ball : urn.latent[j]) expected[ball] += 1.0;
    total += model.c(j);
  }
  expected /= total;

  const int M = 50000;
  std::vector<std::vector<double>> hit(4, std::vector<double>(M));
  for (int i = 0; i < M; ++i) {
    auto copy = urn;
    hit[urn_next(copy, model.structure, t, rng)][i] = 1.0;
  }
  bool pass = true;
  double worst = 0;
  for (int k = 0; k < 4; ++k) {
    const auto est = mean_estimate(hit[k]);
    pass = pass && est.agrees_with(expected[k]);
    worst = std::max(worst, std::abs(est.value - expected[k]) / est.se);
  }

  // urn one-step predictive against the posterior predictive mean with N_j = c_j Ghat_j
  double max_diff = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const int T = 1 + static_cast<int>(rng.below(4));
    const int K = 2 + static_cast<int>(rng.below(5));
    std::vector<int> c(T);
    for (auto& v : c) v = static_cast<int>(rng.below(6));
    const DdpModel m(PrecisionParams(0.1 + 3 * rng.uniform(), c), moving_average(T, rng.below(3)), uniform_base(K));
    auto u = seed_urns(m, rng);
    const int tt = static_cast<int>(rng.below(T));
    for (int i = 0, n = static_cast<int>(rng.below(7)); i < n; ++i) urn_next(u, m.structure, tt, rng);
    ChainState s;
    Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(T, K);
    for (int j = 0; j < T; ++j) {
      Eigen::VectorXi n = Eigen::VectorXi::Zero(K);
      for (auto ball : u.latent[j]) ++n[ball];
      s.N.emplace_back(n, c[j]);
      s.F.emplace_back(m.base);
      for (auto ball : u.drawn[j]) ++counts(j, ball);
    }
    s.G = SimplexMeasure(m.base);
    const Eigen::VectorXd diff =
        urn_predictive(u, m.structure, tt) - predictive_mean(s, ObservedData::from_counts(counts), tt, m);
    max_diff = std::max(max_diff, diff.cwiseAbs().maxCoeff());
  }
  pass = pass && max_diff <= 1e-15;
  return {pass, "first-draw max |z| " + fmt_num(worst) + ", identity max |diff| " + fmt_num(max_diff)};
}

Outcome model_selection() {
  using namespace ddp::cli;
  const int K = 10, T = 12, reps = 10;
  const auto partition = build_partition(-3.0, 3.0, K);
  const auto base = base_masses(NormalBase<double>{0.0, 1.0}, partition);
  const DdpModel truth(PrecisionParams::constant(1.0, 10, T), moving_average(T, 2), base);
  RunConfig cfg;
  cfg.c0 = 1.0;
  cfg.K = K;
  cfg.x_min = -3.0;
  cfg.x_max = 3.0;
  cfg.mu0 = 0.0;
  cfg.sigma0 = 1.0;
  cfg.iterations = 10000;
  cfg.burn_in = 1000;
  cfg.thin = 10;
  cfg.mh_partner = "uniform";
  cfg.q_list = {1, 2, 3};
  cfg.c_list = {5, 10, 20};

  const RngStream root(110);
  int hits = 0;
  std::string picks;
  double additivity = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng = root.split(static_cast<std::uint64_t>(r));
    Dataset data;
    data.series = simulate_sequences(truth, std::vector<int>(T, 30), partition, rng).values;
    const auto rows = grid(cfg, data, 1000 + static_cast<std::uint64_t>(r));
    const GridRow* best = nullptr;
    for (const auto& row : rows)
      if (row.error.empty() && (!best || row.lpml_log > best->lpml_log)) best = &row;
    if (best && best->q == 2 && best->c == 10) ++hits;
    picks += best ? "(" + std::to_string(best->q) + "," + std::to_string(best->c) + ")" : "(none)";

    if (r == 0) {
      auto one = cfg;
      one.structure.q = 2;
      one.c = {10};
      const auto fitted = fit(one, data, 7);
      const double l0 = lmeasure(fitted.chain, fitted.data, 0.0), l1 = lmeasure(fitted.chain, fitted.data, 1.0);
      for (double nu : {0.1, 0.25, 0.5, 0.75, 0.9})
        additivity = std::max(additivity, std::abs(lmeasure(fitted.chain, fitted.data, nu) - (l0 + nu * (l1 - l0))));
    }
  }
  const bool pass = hits >= 6 && additivity <= 1e-15;
  return {pass, "selected (2,10) in " + std::to_string(hits) + "/10, picks " + picks + "; additivity max |diff| " +
                    fmt_num(additivity)};
}

Outcome determinism() {
  using namespace ddp::cli;
  const fs::path dir = fs::temp_directory_path() / "ddp_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "data.csv");
    out << "t,value\n";
    RngStream rng(111);
    for (int t = 1; t <= 4; ++t)
      for (int i = 0; i < 20; ++i) out << t << "," << format_number(3.0 * rng.uniform() + t * 0.2) << "\n";
  }
  RunConfig cfg;
  cfg.data = (dir / "data.csv").string();
  cfg.out = (dir / "out").string();
  cfg.K = 8;
  cfg.c = {5};
  cfg.iterations = 2000;
  cfg.burn_in = 200;
  cfg.thin = 5;
  cfg.seed = 42;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::ostringstream log;
  cmd_fit(cfg, log);
  const auto summary = slurp(dir / "out" / "summary.csv"), stats = slurp(dir / "out" / "stats.json");
  cmd_fit(cfg, log);
  const bool pass = !summary.empty() && !stats.empty() && summary == slurp(dir / "out" / "summary.csv") &&
                    stats == slurp(dir / "out" / "stats.json");
  return {pass, "summary.csv " + std::to_string(summary.size()) + " bytes, stats.json " + std::to_string(stats.size()) +
                    " bytes"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 marginal law", marginal_law},
      {"2 same-set correlation", correlations},
      {"3 cross-bin correlation", cross_bin},
      {"4 independence", independence},
      {"5 Gibbs vs exact enumeration", gibbs_vs_oracle},
      {"6 MH kernel frequencies", mh_kernel},
      {"7 joint consistency (getting it right)", getting_it_right},
      {"8 classical DP reduction", classical_reduction},
      {"9 urn predictive", urn_predictive_check},
      {"10 model selection workflow", model_selection},
      {"11 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
