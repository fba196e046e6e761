// pmlda: command-line front end for simulation, feature extraction, inference,
// segmentation, the FCM baseline and ROC evaluation.
//
// Exit codes: 0 success, 1 input error, 2 numerical failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "pmlda/errors.hpp"
#include "pmlda/fcm.hpp"
#include "pmlda/features.hpp"
#include "pmlda/generative.hpp"
#include "pmlda/image.hpp"
#include "pmlda/io.hpp"
#include "pmlda/sampler.hpp"
#include "pmlda/segmentation.hpp"

namespace fs = std::filesystem;
using namespace pmlda;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

// Flag values that override keys of the key-value config file.
struct Overrides {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    options[key] = app->add_option(flag, values[key], help);
  }

  KeyValueConfig apply(const std::string& config_path) const {
    KeyValueConfig cfg = config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(config_path);
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) cfg.set(key, values.at(key));
    return cfg;
  }
};

Vec broadcast(const Vec& v, std::size_t K, const std::string& what) {
  if (v.size() == 1) return Vec(K, v.front());
  require(v.size() == K, what + " must have 1 or K components");
  return v;
}

// "a,b;c,d" -> {{a,b},{c,d}}
std::vector<Vec> parse_vector_list(const std::string& text) {
  std::vector<Vec> out;
  std::string part;
  for (char c : text + ";") {
    if (c == ';') {
      if (part.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_real_list(part));
      part.clear();
    } else {
      part.push_back(c);
    }
  }
  return out;
}

Hyperparams hyperparams_from(const KeyValueConfig& cfg) {
  Hyperparams hp;
  hp.K = static_cast<std::size_t>(cfg.get_int("K", 2));
  hp.alpha = broadcast(cfg.get_reals("alpha", {1.0}), hp.K, "alpha");
  hp.lambda = cfg.get_real("lambda", 1.0);
  hp.f = cfg.get_real("f", 1.0);
  hp.T = static_cast<std::size_t>(cfg.get_int("T", 1000));
  hp.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  hp.validate();
  return hp;
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

GrayImage gray_u8(std::span<const double> values, int height, int width, double scale) {
  GrayImage img(height, width);
  for (std::size_t p = 0; p < values.size(); ++p) {
    const double v = std::clamp(std::round(scale * values[p]), 0.0, 255.0);
    img.pixels[p] = static_cast<std::uint8_t>(v);
  }
  return img;
}

int cmd_generate(const KeyValueConfig& cfg, const std::string& out, const std::string& truth,
                 const std::string& state_out) {
  GenSpec spec;
  const auto means = parse_vector_list(cfg.get_string("means", "-4,-4;6,6"));
  require(means.size() >= 2, "generate: need at least two topic means");
  const std::size_t K = means.size();
  const double sigma2 = cfg.get_real("sigma2", 1.0);
  std::vector<Vec> covs;
  if (cfg.has("covs")) {
    covs = parse_vector_list(*cfg.get("covs"));
    require(covs.size() == K, "generate: covs must list one covariance diagonal per topic");
  }
  for (std::size_t k = 0; k < K; ++k) {
    DiagGaussian g{means[k], covs.empty() ? Vec(means[k].size(), sigma2) : covs[k]};
    spec.topics.push_back(std::move(g));
  }
  spec.alpha = broadcast(cfg.get_reals("alpha", {1.0}), K, "alpha");
  spec.lambda = cfg.get_real("lambda", 1.0);
  if (cfg.has("fixed_pi")) spec.fixed_pi = cfg.get_reals("fixed_pi", {});
  if (cfg.has("fixed_s")) spec.fixed_s = cfg.get_real("fixed_s", 1.0);
  spec.D = static_cast<std::size_t>(cfg.get_int("D", 20));
  spec.N = static_cast<std::size_t>(cfg.get_int("N", 200));
  spec.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));

  const GeneratedCorpus gen = sample_corpus(spec);
  write_corpus_csv(out, gen.corpus);
  if (!truth.empty()) write_truth_csv(truth, gen.truth);
  if (!state_out.empty()) {
    if (covs.empty()) {
      ModelState st = gen.as_model_state();
      write_state_file(state_out, st);
    } else {
      std::cerr << "pmlda generate: per-topic covariances cannot be written as a shared-variance state; skipping "
                << state_out << '\n';
    }
  }
  std::cout << "wrote " << gen.corpus.size() << " documents to " << out << '\n';
  return 0;
}

int cmd_features(const KeyValueConfig& cfg, const std::string& image, const std::string& extractor,
                 const std::string& labels, const std::string& out, const std::string& layout_out) {
  FeatureImage fimg;
  const fs::path path(image);
  if (extractor == "intensity-entropy") {
    fimg = extract_intensity_entropy(read_pgm(path), static_cast<int>(cfg.get_int("feature_window", 21)),
                                     cfg.get_real("intensity_scale", 10.0));
  } else if (extractor == "gradient-color") {
    require(path.extension() == ".ppm", "gradient-color needs an RGB (.ppm) image");
    fimg = extract_gradient_color(read_ppm(path), cfg.get_real("sigma", 2.0));
  } else if (extractor == "filter-bank") {
    const GrayImage gray = path.extension() == ".ppm" ? to_gray(read_ppm(path)) : read_pgm(path);
    fimg = extract_filter_bank(gray);
  } else {
    throw InputError("unknown extractor '" + extractor + "'");
  }
  const TiledCorpus tiled = labels.empty()
                                ? tile_documents(fimg, static_cast<int>(cfg.get_int("window", 64)),
                                                 static_cast<int>(cfg.get_int("stride", 32)))
                                : group_by_labels(fimg, read_label_map(labels));
  write_corpus_csv(out, tiled.corpus);
  write_layout_csv(layout_out, tiled.layout);
  std::cout << "wrote " << tiled.corpus.size() << " documents (" << fimg.dim << " features per word) to " << out
            << '\n';
  return 0;
}

int cmd_fit(const KeyValueConfig& cfg, const std::string& corpus_path, const std::string& trace_out,
            const std::string& state_out, const std::string& memberships_out, int threads) {
  SamplerConfig config;
  config.hp = hyperparams_from(cfg);
  config.thin = static_cast<std::size_t>(cfg.get_int("thin", 0));
  config.sigma_floor = cfg.get_real("sigma_floor", 1e-6);
  if (cfg.has("fixed_pi")) config.fixed_pi = broadcast(cfg.get_reals("fixed_pi", {}), config.hp.K, "fixed_pi");
  if (cfg.has("fixed_s")) config.fixed_s = cfg.get_real("fixed_s", 1.0);
  config.threads = threads;

  const Corpus corpus = read_corpus_csv(corpus_path);
  const Trace trace = run_inference(corpus, config);
  if (!trace_out.empty()) write_trace_csv(trace_out, trace);
  if (!state_out.empty())
    write_state_file(state_out, trace.best_state,
                     {{"sigma_bound", format_real(trace.sigma_bound)}, {"best_sweep", std::to_string(trace.best_sweep)}});
  if (!memberships_out.empty()) write_memberships_csv(memberships_out, memberships_of(trace.best_state));
  std::cout << "MAP log joint " << format_real(trace.best_log_joint) << " at sweep " << trace.best_sweep << " of "
            << config.hp.T << '\n';
  return 0;
}

int cmd_segment(const std::string& memberships_path, const std::string& layout_path, const std::string& prefix,
                double lo, double hi) {
  const WordMemberships memb = read_memberships_csv(memberships_path);
  const DocLayout layout = read_layout_csv(layout_path);
  const MembershipMap map = assemble_maps(memb, layout, layout.height, layout.width);
  for (std::size_t k = 0; k < map.K; ++k) {
    const std::string base = prefix + "_topic" + std::to_string(k);
    write_matrix_csv(base + ".csv", map.plane(k), map.height, map.width);
    write_pgm(base + ".pgm", gray_u8(map.plane(k), map.height, map.width, 255.0));
  }
  const auto crisp = crisp_map(map);
  std::vector<double> crisp_values(crisp.begin(), crisp.end());
  write_matrix_csv(prefix + "_crisp.csv", crisp_values, map.height, map.width);
  GrayImage crisp_img(map.height, map.width);
  for (std::size_t p = 0; p < crisp.size(); ++p)
    crisp_img.pixels[p] = crisp[p] < 0 ? 255 : static_cast<std::uint8_t>(std::min(crisp[p], 254));
  write_pgm(prefix + "_crisp.pgm", crisp_img);
  const auto trans = transition_map(map, lo, hi);
  GrayImage trans_img(map.height, map.width);
  for (std::size_t p = 0; p < trans.size(); ++p) trans_img.pixels[p] = trans[p] ? 255 : 0;
  write_pgm(prefix + "_transition.pgm", trans_img);
  std::cout << "wrote " << map.K << " membership maps with prefix " << prefix << '\n';
  return 0;
}

int cmd_fcm(const KeyValueConfig& cfg, const std::string& corpus_path, const std::string& out) {
  const Corpus corpus = read_corpus_csv(corpus_path);
  FcmOptions opts;
  opts.clusters = static_cast<std::size_t>(cfg.get_int("C", cfg.get_int("K", 2)));
  opts.m = cfg.get_real("m", 1.5);
  opts.tol = cfg.get_real("tol", 1e-6);
  opts.max_iter = static_cast<std::size_t>(cfg.get_int("max_iter", 300));
  opts.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  const auto words = flatten_words(corpus);
  const FcmResult res = fcm(words, opts);
  WordMemberships memb(corpus.size());
  std::size_t i = 0;
  for (std::size_t d = 0; d < corpus.size(); ++d)
    for (std::size_t n = 0; n < corpus[d].size(); ++n) memb[d].push_back(res.memberships[i++]);
  write_memberships_csv(out, memb);
  std::cout << "FCM " << (res.converged ? "converged" : "stopped") << " after " << res.iterations
            << " iterations, objective " << format_real(res.objective_series.back()) << '\n';
  return 0;
}

int cmd_eval_roc(const std::string& scores_path, const std::string& memberships_path, const std::string& layout_path,
                 int topic, const std::string& truth_path, const std::string& out) {
  int th = 0, tw = 0;
  const auto truth = read_mask(truth_path, th, tw);
  std::vector<double> scores;
  std::vector<std::uint8_t> mask;
  if (!scores_path.empty()) {
    int sh = 0, sw = 0;
    scores = read_matrix_csv(scores_path, sh, sw);
    require(sh == th && sw == tw, "eval-roc: score map and truth mask differ in size");
  } else {
    require(!memberships_path.empty() && !layout_path.empty(), "eval-roc: need --scores or --memberships with --layout");
    const DocLayout layout = read_layout_csv(layout_path);
    require(layout.height == th && layout.width == tw, "eval-roc: layout and truth mask differ in size");
    const MembershipMap map = assemble_maps(read_memberships_csv(memberships_path), layout, th, tw);
    const std::size_t k = pick_topic_for_class(
        map, truth, topic >= 0 ? std::optional<std::size_t>(static_cast<std::size_t>(topic)) : std::nullopt);
    std::cout << "topic " << k << '\n';
    const auto plane = map.plane(k);
    scores.assign(plane.begin(), plane.end());
    mask = map.covered;
  }
  const RocCurve roc = roc_curve(scores, truth, mask);
  if (!out.empty()) write_roc_csv(out, roc);
  std::cout << "AUC " << format_real(roc.auc) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-membership LDA: simulation, features, inference and evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  int threads = 0;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--threads", threads, "worker threads (0 = OpenMP default)");

  auto* gen = app.add_subcommand("generate", "simulate a corpus from the generative model");
  Overrides gen_o;
  std::string gen_out, gen_truth, gen_state;
  gen->add_option("--out", gen_out, "corpus CSV")->required();
  gen->add_option("--truth", gen_truth, "per-word truth CSV");
  gen->add_option("--truth-state", gen_state, "truth topics and pi/s as a state file");
  gen_o.add(gen, "--means", "means", "topic means, e.g. \"-4,-4;6,6\"");
  gen_o.add(gen, "--sigma2", "sigma2", "shared isotropic variance");
  gen_o.add(gen, "--covs", "covs", "per-topic covariance diagonals, e.g. \"4,1;1,4\"");
  gen_o.add(gen, "--alpha", "alpha", "Dirichlet concentration (scalar or K values)");
  gen_o.add(gen, "--lambda", "lambda", "exponential rate of s");
  gen_o.add(gen, "--fixed-pi", "fixed_pi", "pin pi for every document");
  gen_o.add(gen, "--fixed-s", "fixed_s", "pin s for every document");
  gen_o.add(gen, "--D", "D", "documents");
  gen_o.add(gen, "--N", "N", "words per document");
  gen_o.add(gen, "--seed", "seed", "random seed");

  auto* feat = app.add_subcommand("features", "extract per-pixel features and cut the image into documents");
  Overrides feat_o;
  std::string feat_image, feat_extractor = "intensity-entropy", feat_labels, feat_out, feat_layout;
  feat->add_option("--image", feat_image, "input PGM or PPM")->required()->check(CLI::ExistingFile);
  feat->add_option("--extractor", feat_extractor, "intensity-entropy | gradient-color | filter-bank");
  feat->add_option("--labels", feat_labels, "label map (PGM or CSV); one document per label")
      ->check(CLI::ExistingFile);
  feat->add_option("--out", feat_out, "corpus CSV")->required();
  feat->add_option("--layout", feat_layout, "layout CSV")->required();
  feat_o.add(feat, "--window", "window", "sliding document window");
  feat_o.add(feat, "--stride", "stride", "sliding document stride");
  feat_o.add(feat, "--feature-window", "feature_window", "intensity/entropy window");
  feat_o.add(feat, "--intensity-scale", "intensity_scale", "multiplier on the [0,1] mean intensity");
  feat_o.add(feat, "--sigma", "sigma", "Gaussian gradient sigma");

  auto* fit = app.add_subcommand("fit", "MAP inference by Metropolis-within-Gibbs");
  Overrides fit_o;
  std::string fit_corpus, fit_trace, fit_state, fit_memb;
  fit->add_option("--corpus", fit_corpus, "corpus CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--trace", fit_trace, "per-sweep trace CSV");
  fit->add_option("--state", fit_state, "MAP state file");
  fit->add_option("--memberships", fit_memb, "MAP per-word memberships CSV");
  fit_o.add(fit, "--alpha", "alpha", "Dirichlet concentration (scalar or K values)");
  fit_o.add(fit, "--lambda", "lambda", "exponential rate of s");
  fit_o.add(fit, "--K", "K", "topics");
  fit_o.add(fit, "--T", "T", "sweeps");
  fit_o.add(fit, "--seed", "seed", "random seed");
  fit_o.add(fit, "--f", "f", "topic-mean proposal covariance scale");
  fit_o.add(fit, "--thin", "thin", "trace thinning");
  fit_o.add(fit, "--sigma-floor", "sigma_floor", "lower end of the variance proposal");
  fit_o.add(fit, "--fixed-pi", "fixed_pi", "pin pi for every document");
  fit_o.add(fit, "--fixed-s", "fixed_s", "pin s for every document");

  auto* seg = app.add_subcommand("segment", "membership maps, crisp map and transition mask");
  std::string seg_memb, seg_layout, seg_prefix = "segment";
  double seg_lo = 0.4, seg_hi = 0.6;
  seg->add_option("--memberships", seg_memb, "per-word memberships CSV")->required()->check(CLI::ExistingFile);
  seg->add_option("--layout", seg_layout, "layout CSV")->required()->check(CLI::ExistingFile);
  seg->add_option("--out-prefix", seg_prefix, "output path prefix");
  seg->add_option("--lo", seg_lo, "transition band lower edge");
  seg->add_option("--hi", seg_hi, "transition band upper edge");

  auto* fcm_cmd = app.add_subcommand("fcm", "fuzzy C-means baseline");
  Overrides fcm_o;
  std::string fcm_corpus, fcm_out;
  fcm_cmd->add_option("--corpus", fcm_corpus, "corpus CSV")->required()->check(CLI::ExistingFile);
  fcm_cmd->add_option("--out", fcm_out, "per-word memberships CSV")->required();
  fcm_o.add(fcm_cmd, "--C", "C", "clusters");
  fcm_o.add(fcm_cmd, "--m", "m", "fuzzifier");
  fcm_o.add(fcm_cmd, "--tol", "tol", "centre-shift tolerance");
  fcm_o.add(fcm_cmd, "--max-iter", "max_iter", "iteration cap");
  fcm_o.add(fcm_cmd, "--seed", "seed", "random seed");

  auto* roc = app.add_subcommand("eval-roc", "pixel-level ROC curve and AUC");
  std::string roc_scores, roc_memb, roc_layout, roc_truth, roc_out;
  int roc_topic = -1;
  roc->add_option("--scores", roc_scores, "score map CSV")->check(CLI::ExistingFile);
  roc->add_option("--memberships", roc_memb, "per-word memberships CSV")->check(CLI::ExistingFile);
  roc->add_option("--layout", roc_layout, "layout CSV")->check(CLI::ExistingFile);
  roc->add_option("--topic", roc_topic, "topic to score (default: best AUC)");
  roc->add_option("--truth", roc_truth, "truth mask (PGM or CSV)")->required()->check(CLI::ExistingFile);
  roc->add_option("--out", roc_out, "ROC CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    set_threads(threads);
    if (*gen) return cmd_generate(gen_o.apply(config_path), gen_out, gen_truth, gen_state);
    if (*feat) return cmd_features(feat_o.apply(config_path), feat_image, feat_extractor, feat_labels, feat_out,
                                   feat_layout);
    if (*fit) return cmd_fit(fit_o.apply(config_path), fit_corpus, fit_trace, fit_state, fit_memb, threads);
    if (*seg) return cmd_segment(seg_memb, seg_layout, seg_prefix, seg_lo, seg_hi);
    if (*fcm_cmd) return cmd_fcm(fcm_o.apply(config_path), fcm_corpus, fcm_out);
    if (*roc) return cmd_eval_roc(roc_scores, roc_memb, roc_layout, roc_topic, roc_truth, roc_out);
  } catch (const NumericalError& e) {
    std::cerr << "pmlda: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "pmlda: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
