// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pmlda/fcm.hpp"
#include "pmlda/features.hpp"
#include "pmlda/generative.hpp"
#include "pmlda/io.hpp"
#include "pmlda/model.hpp"
#include "pmlda/sampler.hpp"
#include "pmlda/segmentation.hpp"

using namespace pmlda;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double linf(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// 1. Blend normalization over random diagonal-covariance topics, plus the distinct-covariance figure case.
Outcome blend_correctness() {
  std::mt19937_64 gen(101);
  std::normal_distribution<double> nd(0.0, 3.0);
  std::uniform_real_distribution<double> var(0.1, 6.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t K = 2 + trial % 4;
    const std::size_t dim = 1 + trial % 4;
    std::vector<DiagGaussian> topics(K);
    for (auto& t : topics)
      for (std::size_t i = 0; i < dim; ++i) {
        t.mean.push_back(nd(gen));
        t.cov_diag.push_back(var(gen));
      }
    const Vec z = oracle::random_simplex(K, gen);
    const DiagGaussian g = blend_topics(z, topics);
    double ref = 0.0;
    for (int probe = 0; probe < 100; ++probe) {
      Vec x(dim);
      for (auto& v : x) v = nd(gen);
      double log_product = 0.0;
      for (std::size_t k = 0; k < K; ++k) log_product += z[k] * oracle::diag_gaussian(x, topics[k].mean, topics[k].cov_diag);
      const double log_ratio = log_product - oracle::diag_gaussian(x, g.mean, g.cov_diag);
      if (probe == 0) ref = log_ratio;
      worst = std::max(worst, std::abs(std::expm1(log_ratio - ref)));
    }
  }
  const DiagGaussian fig = blend_topics(Vec{0.5, 0.5}, std::vector<DiagGaussian>{{{-4, -4}, {4, 1}}, {{6, 6}, {1, 4}}});
  const double fig_err = std::max(linf(fig.mean, Vec{4, -2}), linf(fig.cov_diag, Vec{1.6, 1.6}));
  return {worst < 1e-8 && fig_err < 1e-12,
          "max relative deviation " + fmt("%.2e", worst) + ", two-covariance blend error " + fmt("%.1e", fig_err)};
}

struct TinyInstance {
  Corpus corpus;
  ModelState state;
  Hyperparams hp;
};

TinyInstance tiny_instance(std::mt19937_64& gen, std::size_t D, std::size_t N) {
  std::normal_distribution<double> nd(0.0, 3.0);
  std::uniform_real_distribution<double> pos(0.3, 3.0);
  TinyInstance t;
  t.hp.alpha = {pos(gen), pos(gen)};
  t.hp.lambda = pos(gen);
  t.hp.f = pos(gen);
  t.state.topics = {{{nd(gen), nd(gen)}, {nd(gen), nd(gen)}}, pos(gen)};
  for (std::size_t d = 0; d < D; ++d) {
    Document doc;
    DocState st{oracle::random_simplex(2, gen, 0.05), pos(gen), {}};
    for (std::size_t n = 0; n < N; ++n) {
      doc.words.push_back({nd(gen), nd(gen)});
      st.z.push_back(oracle::random_simplex(2, gen, 0.05));
    }
    t.corpus.push_back(doc);
    t.state.docs.push_back(st);
  }
  return t;
}

// 2. Log joint against the term-by-term oracle.
Outcome joint_oracle() {
  std::mt19937_64 gen(202);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    TinyInstance t = tiny_instance(gen, 1 + trial % 3, 1 + trial % 5);
    for (std::size_t d = 0; d < t.corpus.size(); ++d)
      worst = std::max(worst, std::abs(doc_log_joint(t.corpus[d], t.state.docs[d], t.hp, t.state.topics) -
                                       oracle::doc_joint(t.corpus[d], t.state.docs[d], t.hp, t.state.topics)));
    worst = std::max(worst, std::abs(corpus_log_posterior(t.state, t.corpus, t.hp) -
                                     oracle::corpus_joint(t.corpus, t.state.docs, t.hp, t.state.topics)));
  }
  return {worst < 1e-9, "max abs error " + fmt("%.2e", worst)};
}

// 3. Each full step, replaying its proposal draw, against a full-joint recompute.
Outcome acceptance_ratios() {
  std::mt19937_64 gen(303);
  std::array<double, kBlockCount> worst{};
  auto record = [&](Block b, double got_log, double oracle_log_ratio) {
    auto& w = worst[static_cast<std::size_t>(b)];
    w = std::max(w, std::abs(std::exp(got_log) - oracle::accept_prob(oracle_log_ratio)));
  };
  for (int trial = 0; trial < 100; ++trial) {
    TinyInstance t = tiny_instance(gen, 1 + trial % 2, 2 + trial % 4);
    const std::size_t d = t.corpus.size() - 1;
    const auto joint = [&](const std::vector<DocState>& docs, const TopicParams& tp) {
      return oracle::corpus_joint(t.corpus, docs, t.hp, tp);
    };
    const double current = joint(t.state.docs, t.state.topics);
    Rng rng = make_stream(trial, StreamTag::test);

    {
      Rng replay = rng;
      const Vec cand = sample_dirichlet(t.hp.alpha, replay);
      DocState st = t.state.docs[d];
      const StepResult r = step_pi(t.corpus[d], st, t.hp, t.state.topics, rng);
      auto docs = t.state.docs;
      docs[d].pi = cand;
      record(Block::pi, r.log_accept,
             joint(docs, t.state.topics) + oracle::dirichlet(t.state.docs[d].pi, t.hp.alpha) - current -
                 oracle::dirichlet(cand, t.hp.alpha));
    }
    {
      Rng replay = rng;
      const double cand = replay.exponential(t.hp.lambda);
      DocState st = t.state.docs[d];
      const StepResult r = step_s(t.corpus[d], st, t.hp, t.state.topics, rng);
      auto docs = t.state.docs;
      docs[d].s = cand;
      const double q_cur = std::log(t.hp.lambda) - t.hp.lambda * t.state.docs[d].s;
      const double q_cand = std::log(t.hp.lambda) - t.hp.lambda * cand;
      record(Block::s, r.log_accept, joint(docs, t.state.topics) + q_cur - current - q_cand);
    }
    {
      const std::size_t n = trial % t.corpus[d].size();
      Rng replay = rng;
      const Vec cand = sample_dirichlet(Vec{1, 1}, replay);
      DocState st = t.state.docs[d];
      const StepResult r = step_z(t.corpus[d], n, st, t.hp, t.state.topics, rng);
      auto docs = t.state.docs;
      docs[d].z[n] = cand;
      record(Block::z, r.log_accept, joint(docs, t.state.topics) - current);
    }
    {
      // data moments computed independently of the library
      Vec mean(2, 0.0), var(2, 0.0);
      double count = 0.0;
      for (const auto& doc : t.corpus)
        for (const auto& w : doc.words) {
          mean[0] += w[0];
          mean[1] += w[1];
          count += 1.0;
        }
      mean[0] /= count;
      mean[1] /= count;
      for (const auto& doc : t.corpus)
        for (const auto& w : doc.words)
          for (int i = 0; i < 2; ++i) var[i] += (w[i] - mean[i]) * (w[i] - mean[i]) / count;
      const Vec cov{t.hp.f * var[0], t.hp.f * var[1]};
      const std::size_t k = trial % 2;
      Rng replay = rng;
      Vec cand(2);
      for (int i = 0; i < 2; ++i) cand[i] = mean[i] + std::sqrt(cov[i]) * replay.normal();
      ModelState st = t.state;
      const StepResult r = step_mu(k, st, t.corpus, compute_data_stats(t.corpus), t.hp, rng);
      TopicParams tp = t.state.topics;
      tp.means[k] = cand;
      record(Block::mu, r.log_accept,
             joint(t.state.docs, tp) + oracle::diag_gaussian(t.state.topics.means[k], mean, cov) - current -
                 oracle::diag_gaussian(cand, mean, cov));
    }
    {
      const double floor = 1e-6, bound = 8.0;
      Rng replay = rng;
      const double cand = floor + (bound - floor) * replay.uniform_open_zero();
      ModelState st = t.state;
      const StepResult r = step_sigma(st, t.corpus, bound, rng);
      TopicParams tp = t.state.topics;
      tp.sigma2 = cand;
      record(Block::sigma, r.log_accept, joint(t.state.docs, tp) - current);
    }
  }
  const double overall = *std::max_element(worst.begin(), worst.end());
  std::string detail = "max |p - oracle| pi " + fmt("%.1e", worst[0]) + ", s " + fmt("%.1e", worst[1]) + ", z " +
                       fmt("%.1e", worst[2]) + ", mu " + fmt("%.1e", worst[3]) + ", sigma2 " + fmt("%.1e", worst[4]);
  return {overall < 1e-10, detail};
}

// 4. Recovery of the two-topic figure parameters, 10 seeds.
Outcome parameter_recovery() {
  int good = 0;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenSpec g;
    g.alpha = {1, 1};
    g.lambda = 1.0;
    g.topics = {{{-4, -4}, {1, 1}}, {{6, 6}, {1, 1}}};
    g.D = 20;
    g.N = 200;
    g.seed = 1000 + seed;
    const GeneratedCorpus gc = sample_corpus(g);
    SamplerConfig c;
    c.hp.alpha = {1, 1};
    c.hp.lambda = 1.0;
    c.hp.K = 2;
    c.hp.T = 2000;
    c.hp.seed = seed;
    const Trace tr = run_inference(gc.corpus, c);
    const auto& m = tr.best_state.topics.means;
    const double direct = std::max(linf(m[0], g.topics[0].mean), linf(m[1], g.topics[1].mean));
    const double swapped = std::max(linf(m[1], g.topics[0].mean), linf(m[0], g.topics[1].mean));
    const double err = std::min(direct, swapped);
    const double s2 = tr.best_state.topics.sigma2;
    const bool ok = err <= 0.5 && s2 >= 0.5 && s2 <= 2.0;
    good += ok;
    per_seed += (seed ? " " : "") + fmt("%.2f", err) + "/" + fmt("%.2f", s2) + (ok ? "" : "x");
  }
  return {good >= 8, std::to_string(good) + "/10 seeds within tolerance (L-inf mean error/sigma2: " + per_seed + ")"};
}

// 5. Fixed-pi scaling study on a three-region synthetic image.
Outcome scaling_factor() {
  const int H = 30, W = 30;
  FeatureImage img(H, W, 2);
  LabelMap labels{H, W, std::vector<int>(H * W)};
  const Vec centres[3] = {{0, 0}, {8, 0}, {4, 7}};
  Rng rng = make_stream(55, StreamTag::test);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c) {
      const int region = c < 10 ? 0 : (c < 20 ? 1 : 2);
      labels.labels[r * W + c] = region;
      for (int ch = 0; ch < 2; ++ch) img.at(r, c, ch) = centres[region][ch] + rng.normal();
    }
  const TiledCorpus tc = group_by_labels(img, labels);
  const Vec pi{1.0 / 3, 1.0 / 3, 1.0 / 3};
  Vec dev;
  double close_at_max = 0.0;
  std::string detail = "mean |z - pi|_inf:";
  for (double s : {3.0, 10.0, 300.0, 30000.0}) {
    SamplerConfig c;
    c.hp.alpha = {1, 1, 1};
    c.hp.K = 3;
    c.hp.T = 500;
    c.hp.seed = 5;
    c.fixed_pi = pi;
    c.fixed_s = s;
    const Trace tr = run_inference(tc.corpus, c);
    double total = 0.0;
    std::size_t words = 0, close = 0;
    for (const auto& d : tr.best_state.docs)
      for (const auto& z : d.z) {
        const double e = linf(z, pi);
        total += e;
        close += e <= 0.05;
        ++words;
      }
    dev.push_back(total / static_cast<double>(words));
    close_at_max = static_cast<double>(close) / static_cast<double>(words);
    detail += " s=" + fmt("%g", s) + " " + fmt("%.4f", dev.back());
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < dev.size(); ++i) decreasing &= dev[i] < dev[i - 1];
  detail += "; within 0.05 at s=30000: " + fmt("%.1f%%", 100.0 * close_at_max);
  return {decreasing && close_at_max >= 0.95, detail};
}

// 6. Small-s membership draws.
Outcome lda_degradation() {
  Rng rng = make_stream(66, StreamTag::test);
  int sparse = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec z = sample_membership(Vec{0.5, 0.5}, 0.01, rng);
    sparse += *std::max_element(z.begin(), z.end()) >= 0.99;
  }
  const double frac = sparse / 10000.0;
  // exact value for Dir(0.005, 0.005): 2 * I_0.01(0.005, 0.005)
  return {frac >= 0.99, "max component >= 0.99 in " + fmt("%.2f%%", 100.0 * frac) +
                            " of draws (exact Dirichlet probability 97.73%)"};
}

struct Scratch {
  fs::path dir;
  Scratch() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("pmlda_accept_" + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& n) const { return (dir / n).string(); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + PMLDA_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 7. Byte-identical fit outputs across repeated runs and thread counts.
Outcome determinism() {
  Scratch tmp;
  if (run_cli("generate --out " + tmp / "c.csv" + " --D 20 --N 50 --seed 7") != 0) return {false, "generate failed"};
  std::vector<std::pair<std::string, std::string>> outputs;
  for (const char* threads : {"1", "8", "1", "8"}) {
    const std::string tag = std::to_string(outputs.size());
    const int rc = run_cli(std::string("--threads ") + threads + " fit --corpus " + tmp / "c.csv" +
                           " --T 300 --seed 11 --trace " + tmp / ("t" + tag + ".csv") + " --memberships " +
                           tmp / ("m" + tag + ".csv"));
    if (rc != 0) return {false, "fit exited with " + std::to_string(rc)};
    outputs.emplace_back(slurp(tmp / ("t" + tag + ".csv")), slurp(tmp / ("m" + tag + ".csv")));
  }
  bool same = !outputs[0].first.empty() && !outputs[0].second.empty();
  for (const auto& o : outputs) same &= o == outputs[0];
  return {same, same ? "trace and membership CSVs identical over 4 runs (threads 1, 8, 1, 8)"
                     : "outputs differ between runs"};
}

// 8. Feature extractor oracle cases.
Outcome feature_oracles() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  const FeatureImage ie = extract_intensity_entropy(GrayImage(40, 40, 128));
  bool flat = true;
  for (int r = 0; r < 40; ++r)
    for (int c = 0; c < 40; ++c) flat &= ie.at(r, c, 1) == 0.0 && std::abs(ie.at(r, c, 0) - 128.0 / 255.0 * 10.0) < 1e-15;
  expect(flat, "constant intensity/entropy");
  std::vector<std::uint8_t> half(242, 0);
  std::fill(half.begin() + 121, half.end(), 255);
  expect(shannon_entropy_bits(half) == 1.0, "half/half entropy");
  std::vector<std::uint8_t> quarter(440, 17);
  std::fill(quarter.begin(), quarter.begin() + 110, 230);
  const double h = shannon_entropy_bits(quarter);
  expect(std::abs(h - 0.811278) < 1e-6, "75/25 entropy");

  RgbImage rgb(30, 30);
  for (int p = 0; p < 900; ++p) {
    rgb.data[p * 3] = 77;
    rgb.data[p * 3 + 1] = 12;
    rgb.data[p * 3 + 2] = 140;
  }
  const FeatureImage gc = extract_gradient_color(rgb);
  bool gflat = true;
  for (int p = 0; p < 900; ++p) gflat &= gc.values[p * 3] == 0.0;
  expect(gflat, "constant gradient");
  RgbImage red(10, 10);
  for (int p = 0; p < 100; ++p) red.data[p * 3] = 255;
  const FeatureImage rf = extract_gradient_color(red);
  bool passthrough = true;
  for (int p = 0; p < 100; ++p) passthrough &= rf.values[p * 3] == 0.0 && rf.values[p * 3 + 1] == 1.0 && rf.values[p * 3 + 2] == 0.0;
  expect(passthrough, "pure red");
  RgbImage ramp(80, 16);
  for (int r = 0; r < 80; ++r)
    for (int c = 0; c < 16; ++c)
      for (int ch = 0; ch < 3; ++ch) ramp.at(r, c, ch) = static_cast<std::uint8_t>(2 * r + 50);
  const FeatureImage rg = extract_gradient_color(ramp, 2.0);
  double ramp_err = 0.0;
  for (int r = 6; r < 74; ++r)
    for (int c = 0; c < 16; ++c) ramp_err = std::max(ramp_err, std::abs(rg.at(r, c, 0) - 2.0 / 255.0));
  expect(ramp_err < 1e-6, "ramp slope");

  const FeatureImage fb = extract_filter_bank(GrayImage(25, 25, 200));
  bool dc = fb.dim == 11;
  for (int p = 0; dc && p < 625; ++p)
    for (int ch = 0; ch < 11; ++ch) dc &= fb.values[p * 11 + ch] == (ch < 3 ? 200.0 / 255.0 : 0.0);
  expect(dc, "constant filter bank");
  GrayImage impulse(41, 41, 0);
  impulse.at(20, 20) = 255;
  const FeatureImage fi = extract_filter_bank(impulse);
  const auto kernels = filter_bank_kernels();
  bool identity = true;
  for (int ch = 0; ch < 11; ++ch)
    for (int dr = -7; dr <= 7; ++dr)
      for (int dc2 = -7; dc2 <= 7; ++dc2) identity &= fi.at(20 + dr, 20 + dc2, ch) == kernels[ch].at(dr, dc2);
  expect(identity, "impulse response");
  expect(extract_filter_bank(GrayImage(7, 9, 3)).dim == 11, "channel count");

  std::string detail = failures.empty() ? "all constant/impulse/ramp cases exact" : "failed:";
  for (const auto& f : failures) detail += " [" + f + "]";
  detail += "; 75/25 entropy " + fmt("%.9f", h) + ", ramp error " + fmt("%.1e", ramp_err);
  return {failures.empty(), detail};
}

// 9. FCM monotonicity, separable data, equidistant point.
Outcome fcm_checks() {
  std::size_t violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(9000 + seed);
    std::normal_distribution<double> nd(0.0, 2.0);
    std::vector<Vec> data(80, Vec(2));
    for (auto& x : data)
      for (auto& v : x) v = nd(gen);
    FcmOptions o;
    o.clusters = 2 + seed % 4;
    o.seed = seed;
    const FcmResult r = fcm(data, o);
    for (std::size_t t = 1; t < r.objective_series.size(); ++t)
      violations += r.objective_series[t] > r.objective_series[t - 1] * (1.0 + 1e-12);
  }
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd(0.0, 0.5);
  std::vector<Vec> blobs;
  for (int i = 0; i < 100; ++i) blobs.push_back({(i < 50 ? -10.0 : 10.0) + nd(gen), nd(gen)});
  FcmOptions o;
  o.m = 1.5;
  const FcmResult r = fcm(blobs, o);
  const std::size_t left = r.centers[0][0] < r.centers[1][0] ? 0 : 1;
  double weakest = 1.0;
  for (int i = 0; i < 100; ++i) weakest = std::min(weakest, r.memberships[i][i < 50 ? left : 1 - left]);
  const Vec eq = fcm_membership(Vec{0, 3}, std::vector<Vec>{{-2, 0}, {2, 0}}, 1.5);
  const bool ok = violations == 0 && weakest >= 0.99 && eq == Vec{0.5, 0.5};
  return {ok, std::to_string(violations) + " objective increases over 100 datasets; weakest own-cluster membership " +
                  fmt("%.4f", weakest) + "; equidistant point [" + fmt("%g", eq[0]) + ", " + fmt("%g", eq[1]) + "]"};
}

// 10. ROC against pair counting, and a separable two-region segmentation.
Outcome roc_checks() {
  std::mt19937_64 gen(1010);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 200;
    std::uniform_int_distribution<int> level(0, trial % 3 == 0 ? 4 : 1 << 30);
    Vec scores(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(level(gen));
      labels[i] = static_cast<std::uint8_t>(gen() & 1);
    }
    labels[0] = 1;
    labels[1] = 0;
    worst = std::max(worst, std::abs(roc_curve(scores, labels).auc - oracle::pair_count_auc(scores, labels)));
  }
  const double hand = roc_curve(Vec{0.9, 0.8, 0.4, 0.3}, std::vector<std::uint8_t>{1, 0, 1, 0}).auc;

  // dark left half, bright right half; the bright half is the positive class
  const int H = 32, W = 32;
  GrayImage img(H, W);
  std::vector<std::uint8_t> truth(H * W);
  Rng rng = make_stream(10, StreamTag::test);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c) {
      const bool bright = c >= W / 2;
      img.at(r, c) = static_cast<std::uint8_t>((bright ? 200 : 50) + static_cast<int>(rng.uniform() * 8));
      truth[r * W + c] = bright;
    }
  const TiledCorpus tc = tile_documents(extract_intensity_entropy(img, 3, 10.0), 8, 4);
  SamplerConfig c;
  c.hp.alpha = {1, 1};
  c.hp.K = 2;
  c.hp.T = 300;
  c.hp.seed = 3;
  const Trace tr = run_inference(tc.corpus, c);
  const MembershipMap map = assemble_maps(memberships_of(tr.best_state), tc.layout, H, W);
  const std::size_t k = pick_topic_for_class(map, truth);
  const double seg_auc = roc_curve(map.plane(k), truth, map.covered).auc;
  return {worst < 1e-12 && hand == 0.75 && seg_auc == 1.0,
          "max |AUC - pair count| " + fmt("%.1e", worst) + ", hand case " + fmt("%g", hand) + ", segmentation AUC " +
              fmt("%.6f", seg_auc)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "blend correctness", 10, blend_correctness},
      {2, "log joint oracle", 5, joint_oracle},
      {3, "acceptance ratios", 30, acceptance_ratios},
      {4, "parameter recovery", 300, parameter_recovery},
      {5, "scaling factor", 180, scaling_factor},
      {6, "degradation to LDA", 1, lda_degradation},
      {7, "determinism", 120, determinism},
      {8, "feature extractors", 5, feature_oracles},
      {9, "fuzzy c-means", 10, fcm_checks},
      {10, "ROC", 10, roc_checks},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("[%s] %2d %-20s %7.2fs / %gs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                o.detail.c_str(), in_time ? "" : " (over time budget)");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
