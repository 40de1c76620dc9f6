// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixguard/classifier_expert.hpp"
#include "mixguard/fusion.hpp"
#include "mixguard/gmm.hpp"
#include "mixguard/gmr_expert.hpp"
#include "mixguard/metrics.hpp"
#include "mixguard/scenario.hpp"

using namespace mixguard;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects the first few failures of a criterion.
class Checker {
 public:
  void expect(bool cond, const std::string& what) {
    ++checks_;
    if (cond) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary + ", " + std::to_string(checks_) + " checks"};
    return {false, std::to_string(failures_) + "/" + std::to_string(checks_) + " checks failed: " + messages_};
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::string messages_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Eigen::MatrixXd random_spd(std::mt19937_64& rng, int n, double min_eig = 0.1) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = z(rng);
  Eigen::MatrixXd s = a * a.transpose() / n;
  s.diagonal().array() += min_eig;
  return 0.5 * (s + s.transpose());
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = z(rng);
  return v;
}

FeatureSchema schema_for(int in, int out) {
  FeatureSchema s;
  for (int i = 0; i < in; ++i) s.input_names.push_back("x" + std::to_string(i));
  std::vector<std::string> names;
  for (int j = 0; j < out; ++j) names.push_back("y" + std::to_string(j));
  s.output_groups.emplace_back("y", names);
  return s;
}

double dense_gaussian(const Eigen::VectorXd& x, const Eigen::VectorXd& mu, const Eigen::MatrixXd& cov) {
  const Eigen::VectorXd d = x - mu;
  return std::exp(-0.5 * d.dot(cov.inverse() * d)) /
         std::sqrt(std::pow(2.0 * std::numbers::pi, static_cast<double>(x.size())) * cov.determinant());
}

// ---------------------------------------------------------------------------

Outcome conditioning_oracle() {
  Checker c;
  std::mt19937_64 rng(101);
  for (int t = 0; t < 100; ++t) {
    const int dim = 2 + t % 5;
    const int in = 1 + t % (dim - 1);
    const int out = dim - in;
    GaussianComponent comp{1.0, random_vector(rng, dim, 2.0), random_spd(rng, dim)};
    const GmmModel model(schema_for(in, out), {comp}, 1e-9);
    const Eigen::VectorXd x = random_vector(rng, in, 2.0);
    const Eigen::MatrixXd sii = comp.covariance.topLeftCorner(in, in);
    const Eigen::MatrixXd soi = comp.covariance.bottomLeftCorner(out, in);
    const Eigen::VectorXd mean = comp.mean.tail(out) + soi * sii.inverse() * (x - comp.mean.head(in));
    const Eigen::MatrixXd cov = comp.covariance.bottomRightCorner(out, out) - soi * sii.inverse() * soi.transpose();
    const auto got = model.condition(x);
    const double err = std::max((got.mean - mean).cwiseAbs().maxCoeff(), (got.covariance - cov).cwiseAbs().maxCoeff());
    c.expect(err <= 1e-10, "K=1 model " + std::to_string(t) + fmt(" error %.3g", err));
  }
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int in = 1 + t % 3;
    std::uniform_real_distribution<double> uw(0.2, 0.8);
    const double w = uw(rng);
    std::vector<GaussianComponent> comps{{w, random_vector(rng, in + 1, 1.5), random_spd(rng, in + 1)},
                                         {1.0 - w, random_vector(rng, in + 1, 1.5), random_spd(rng, in + 1)}};
    const GmmModel model(schema_for(in, 1), comps, 1e-9);
    const Eigen::VectorXd x = random_vector(rng, in);
    double z0 = 0.0, z1 = 0.0, z2 = 0.0;
    const int n = 40001;
    const double lo = -40.0, h = 80.0 / (n - 1);
    Eigen::VectorXd joint(in + 1);
    joint.head(in) = x;
    for (int i = 0; i < n; ++i) {
      const double y = lo + h * i;
      joint[in] = y;
      double p = 0.0;
      for (const auto& k : comps) p += k.weight * dense_gaussian(joint, k.mean, k.covariance);
      const double wt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      z0 += wt * p;
      z1 += wt * p * y;
      z2 += wt * p * y * y;
    }
    const double mean = z1 / z0, var = z2 / z0 - mean * mean;
    const auto got = model.condition(x);
    const double err = std::max(std::abs(got.mean[0] - mean), std::abs(got.covariance(0, 0) - var));
    worst = std::max(worst, err);
    c.expect(err <= 1e-4, "K=2 model " + std::to_string(t) + fmt(" error %.3g", err));
  }
  return c.outcome("100 K=1 models, 20 K=2 models" + fmt(" (worst quadrature error %.2g)", worst));
}

Outcome em_monotonicity() {
  Checker c;
  std::size_t iterations = 0;
  for (int t = 0; t < 50; ++t) {
    const auto seed = static_cast<std::uint64_t>(1000 + t);
    Eigen::MatrixXd x;
    FeatureSchema schema;
    std::size_t k = 0;
    if (t % 2 == 0) {
      ScenarioSpec spec;
      spec.skill = t % 4 == 0 ? SkillKind::kPouring : SkillKind::kBoxGrasping;
      spec.duration_s = spec.skill == SkillKind::kPouring ? 20.0 : 15.0;
      spec.seed = seed;
      SkillDataset ds;
      ds.schema = scenario_schema(spec.skill);
      ds.runs = {generate_run(spec).run};
      x = stack_joint_features(ds);
      schema = ds.schema;
      k = spec.skill == SkillKind::kPouring ? 2 + static_cast<std::size_t>(t % 9) : 2;
    } else {
      std::mt19937_64 rng(seed);
      const int dim = 2 + t % 5;
      k = 1 + static_cast<std::size_t>(t % 5);
      std::vector<Eigen::VectorXd> centers;
      for (std::size_t j = 0; j < k; ++j) centers.push_back(random_vector(rng, dim, 4.0));
      x.resize(300, dim);
      for (int i = 0; i < 300; ++i) {
        const Eigen::MatrixXd l = random_spd(rng, dim, 0.2).llt().matrixL();
        x.row(i) = (centers[static_cast<std::size_t>(i) % k] + l * random_vector(rng, dim)).transpose();
      }
      schema = schema_for(1, dim - 1);
    }
    EmConfig cfg;
    cfg.seed = seed;
    const auto a = fit_em(x, schema, k, cfg);
    const auto b = fit_em(x, schema, k, cfg);
    const auto& ll = a.trace().log_likelihood;
    iterations += ll.size() - 1;
    for (std::size_t i = 1; i < ll.size(); ++i)
      c.expect(ll[i] >= ll[i - 1] - 1e-9,
               "dataset " + std::to_string(t) + " iteration " + std::to_string(i) + fmt(" drop %.3g", ll[i - 1] - ll[i]));
    c.expect(serialize_model(a) == serialize_model(b), "dataset " + std::to_string(t) + " not reproducible");
  }
  return c.outcome("50 datasets, " + std::to_string(iterations) + " EM iterations");
}

Outcome calibration_soundness() {
  Checker c;
  std::size_t frames = 0;
  for (int t = 0; t < 6; ++t) {
    ScenarioSpec spec;
    spec.skill = t % 2 == 0 ? SkillKind::kPouring : SkillKind::kBoxGrasping;
    spec.duration_s = spec.skill == SkillKind::kPouring ? 20.0 : 15.0;
    std::vector<ScenarioSpec> specs;
    for (int r = 0; r < 4; ++r) {
      spec.seed = static_cast<std::uint64_t>(500 + 10 * t + r);
      specs.push_back(spec);
    }
    const auto suite = generate_suite(specs);
    EmConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(t);
    const std::size_t k = spec.skill == SkillKind::kPouring ? 10 : 2 + static_cast<std::size_t>(t);
    const auto model = calibrate_thresholds(fit_em(suite.dataset, k, cfg), suite.dataset);
    for (const auto& run : suite.dataset.runs)
      for (const auto& f : run.frames) {
        ++frames;
        c.expect(gmr_verdict(model, f).prediction == Prediction::kNoAnomaly,
                 "model " + std::to_string(t) + " frame " + std::to_string(f.index) + " flagged");
      }
  }
  return c.outcome(std::to_string(frames) + " calibration frames replayed");
}

Outcome confidence_law() {
  Checker c;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ue(0.0, 3.0), ua(0.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const double eps = ue(rng), alpha = ua(rng);
    const double conf = gmr_confidence(eps, alpha).second;
    c.expect(conf > 0.0 && conf < 1.0, fmt2("confidence out of range at eps=%g alpha=%g", eps, alpha));
    c.expect(std::abs(gmr_confidence(1.0, alpha).second - 0.5) <= 1e-12, fmt("eps=1 at alpha=%g", alpha));
    c.expect(std::abs(gmr_confidence(eps, 0.0).second - 0.5) <= 1e-12, fmt("alpha=0 at eps=%g", eps));
    if (alpha > 0.0 && eps > 1.0) {
      const double e2 = 1.0 + (eps - 1.0) * 0.5;  // strictly between 1 and eps
      if (e2 < eps)
        c.expect(gmr_confidence(eps, alpha).second > gmr_confidence(e2, alpha).second,
                 fmt2("not increasing at eps=%g alpha=%g", eps, alpha));
    }
  }
  return c.outcome("10^4 (eps, alpha) pairs");
}

Outcome classifier_expert() {
  Checker c;
  // 100-point grid on the probability simplex (step 1/12 gives 91 points)
  // plus 9 off-grid points with ties.
  std::vector<ClassProbs> grid;
  for (int i = 0; i <= 12; ++i)
    for (int j = 0; i + j <= 12; ++j) grid.push_back({i / 12.0, j / 12.0, (12 - i - j) / 12.0});
  for (const ClassProbs& p : std::vector<ClassProbs>{{0.5, 0.5, 0.0},
                                                     {0.0, 0.5, 0.5},
                                                     {0.5, 0.0, 0.5},
                                                     {0.4, 0.4, 0.2},
                                                     {0.2, 0.4, 0.4},
                                                     {0.4, 0.2, 0.4},
                                                     {0.7, 0.2, 0.1},
                                                     {0.5, 0.3, 0.2},
                                                     {0.6, 0.3, 0.1}})
    grid.push_back(p);
  std::size_t subsets = 0;
  for (unsigned mask = 1; mask < 8; ++mask) {
    LabelSet g;
    for (unsigned b = 0; b < 3; ++b)
      if (mask & (1u << b)) g.insert(static_cast<ClassLabel>(b));
    ++subsets;
    for (const auto& p : grid) {
      std::size_t top = 0;
      for (std::size_t i = 1; i < 3; ++i)
        if (p[i] > p[top]) top = i;
      const bool in = (mask >> top) & 1u;
      double expected = 0.0;
      if (in) {
        expected = std::max({p[0], p[1], p[2]}) / static_cast<double>(g.size());
      } else {
        for (std::size_t i = 0; i < 3; ++i)
          if (!((mask >> i) & 1u)) expected += p[i];
      }
      const auto v = classifier_verdict(p, g);
      c.expect((v.prediction == Prediction::kNoAnomaly) == in, "branch mismatch");
      c.expect(std::abs(v.confidence - expected) <= 1e-12, fmt("confidence error %.3g", v.confidence - expected));
    }
  }
  return c.outcome(std::to_string(subsets) + " label subsets x " + std::to_string(grid.size()) + " distributions");
}

ExpertVerdict verdict(ExpertKind who, Prediction p, double conf) {
  ExpertVerdict v;
  v.expert = who;
  v.prediction = p;
  v.confidence = conf;
  return v;
}

Outcome fusion_table() {
  Checker c;
  const Prediction preds[] = {Prediction::kNoAnomaly, Prediction::kAnomaly};
  const std::pair<double, double> orderings[] = {{0.3, 0.7}, {0.5, 0.5}, {0.7, 0.3}, {0.0, 0.0}, {0.0, 1.0},
                                                 {1.0, 0.0}, {1.0, 1.0}, {0.2, 0.0}};
  for (Prediction pg : preds)
    for (Prediction pc : preds)
      for (const auto& [cg, cc] : orderings) {
        const auto out = fuse(verdict(ExpertKind::kGmr, pg, cg), verdict(ExpertKind::kClassifier, pc, cc));
        const bool gmr = cg > cc;
        c.expect(out.prediction == (gmr ? pg : pc), fmt2("prediction at c_gmr=%g c_vlm=%g", cg, cc));
        c.expect(out.expert == (gmr ? ExpertKind::kGmr : ExpertKind::kClassifier), fmt2("winner at %g/%g", cg, cc));
        c.expect(out.confidence == (gmr ? cg : cc), "confidence");
      }
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 10000; ++i) {
    const Prediction p = coin(rng) ? Prediction::kAnomaly : Prediction::kNoAnomaly;
    const double cg = coin(rng) ? u(rng) : 0.5, cc = coin(rng) ? u(rng) : 0.5;
    c.expect(fuse(verdict(ExpertKind::kGmr, p, cg), verdict(ExpertKind::kClassifier, p, cc)).prediction == p,
             "agreement not passed through");
  }
  return c.outcome("32-row truth table, 10^4 agreeing pairs");
}

// Brute-force segment F1: maximum one-to-one matching by enumeration.
std::optional<double> brute_force_f1(const Labels& gt, const Labels& pred, double thr) {
  const auto gs = extract_segments(gt), ps = extract_segments(pred);
  if (gs.empty() && ps.empty()) return std::nullopt;
  std::size_t best = 0;
  std::vector<int> assign(ps.size(), -1);
  std::function<void(std::size_t, std::vector<bool>&, std::size_t)> rec = [&](std::size_t i, std::vector<bool>& used,
                                                                               std::size_t tp) {
    if (i == ps.size()) {
      best = std::max(best, tp);
      return;
    }
    rec(i + 1, used, tp);
    for (std::size_t g = 0; g < gs.size(); ++g) {
      if (used[g]) continue;
      const double inter = std::max<double>(
          0.0, static_cast<double>(std::min(gs[g].end, ps[i].end)) - static_cast<double>(std::max(gs[g].begin, ps[i].begin)));
      const double uni = static_cast<double>(gs[g].length() + ps[i].length()) - inter;
      if (!(inter / uni > thr)) continue;
      used[g] = true;
      rec(i + 1, used, tp + 1);
      used[g] = false;
    }
  };
  std::vector<bool> used(gs.size(), false);
  rec(0, used, 0);
  const double tp = static_cast<double>(best);
  return 2.0 * tp / (2.0 * tp + static_cast<double>(ps.size() - best) + static_cast<double>(gs.size() - best));
}

Labels segments_labels(std::mt19937_64& rng, std::size_t n, int max_segments) {
  Labels out(n, false);
  std::uniform_int_distribution<int> count(0, max_segments);
  const int k = count(rng);
  for (int s = 0; s < k; ++s) {
    std::uniform_int_distribution<std::size_t> start(0, n - 1), len(1, std::max<std::size_t>(1, n / 4));
    const std::size_t b = start(rng);
    const std::size_t e = std::min(n, b + len(rng));
    for (std::size_t i = b; i < e; ++i) out[i] = true;
  }
  // Merging can only reduce the count, so the bound holds.
  return out;
}

Outcome metrics_oracle() {
  Checker c;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> len(1, 500);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = len(rng);
    const Labels gt = segments_labels(rng, n, 3), pred = segments_labels(rng, n, 3);
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      tp += gt[i] && pred[i];
      fp += !gt[i] && pred[i];
      fn += gt[i] && !pred[i];
      tn += !gt[i] && !pred[i];
    }
    const auto m = frame_metrics(gt, pred);
    c.expect(std::abs(m.accuracy - static_cast<double>(tp + tn) / static_cast<double>(n)) <= 1e-12, "accuracy");
    if (tp + fp > 0)
      c.expect(m.precision && std::abs(*m.precision - static_cast<double>(tp) / static_cast<double>(tp + fp)) <= 1e-12,
               "precision");
    else
      c.expect(!m.precision, "precision should be undefined");
    if (tp + fn > 0)
      c.expect(m.recall && std::abs(*m.recall - static_cast<double>(tp) / static_cast<double>(tp + fn)) <= 1e-12,
               "recall");
    else
      c.expect(!m.recall, "recall should be undefined");
    if (tp + fp > 0 && tp + fn > 0) {
      const double f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
      c.expect(m.f1 && std::abs(*m.f1 - f1) <= 1e-12, "f1");
    }
    const auto got = f1_at_overlap(gt, pred, 0.5);
    const auto want = brute_force_f1(gt, pred, 0.5);
    c.expect(got.has_value() == want.has_value() && (!got || *got == *want), "segment f1 differs from brute force");
  }
  return c.outcome("1000 random (gt, pred) pairs");
}

Outcome filter_contract() {
  Checker c;
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> len(0, 64);
  std::bernoulli_distribution coin(0.5);
  std::size_t ties = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t w = t % 4 == 0 ? 1 + static_cast<std::size_t>(t % 13) : 8;
    std::vector<Prediction> raw(len(rng));
    for (auto& p : raw) p = coin(rng) ? Prediction::kAnomaly : Prediction::kNoAnomaly;
    const auto out = majority_filter(raw, w);
    c.expect(out.size() == raw.size(), "length");
    Prediction prev = Prediction::kNoAnomaly;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const std::size_t n = std::min(i + 1, w);
      std::size_t a = 0;
      for (std::size_t j = i + 1 - n; j <= i; ++j) a += raw[j] == Prediction::kAnomaly;
      Prediction want = prev;
      if (2 * a > n) want = Prediction::kAnomaly;
      if (2 * a < n) want = Prediction::kNoAnomaly;
      ties += 2 * a == n;
      c.expect(out[i] == want, "frame " + std::to_string(i) + " of stream " + std::to_string(t));
      prev = want;
    }
  }
  return c.outcome("10^4 streams, " + std::to_string(ties) + " tie frames");
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> first_anomaly(const std::vector<Prediction>& p) {
  const auto it = std::find(p.begin(), p.end(), Prediction::kAnomaly);
  if (it == p.end()) return std::nullopt;
  return static_cast<std::size_t>(it - p.begin());
}

Labels labels_of(const std::vector<Prediction>& p) {
  Labels out;
  for (auto x : p) out.push_back(x == Prediction::kAnomaly);
  return out;
}

Outcome complementarity() {
  Checker c;
  const auto file = load_suite_file(std::string(MIXGUARD_DATA_DIR) + "/pouring_suite.json");
  const auto suite = generate_suite(file.specs);
  EmConfig cfg;
  cfg.seed = file.train_seed;
  auto model = calibrate_thresholds(fit_em(suite.train_split(), file.k, cfg), suite.train_split());
  model.set_alpha(file.alpha);
  const auto schedule = reference_schedule(file.skill);

  std::vector<EvalRun> gmr_runs, vlm_runs, moe_runs;
  std::size_t dripping = 0, perturbation = 0;
  for (std::size_t i = 0; i < suite.dataset.runs.size(); ++i) {
    const auto& run = suite.dataset.runs[i];
    const auto& entry = suite.manifest[i];
    const auto r = run_pipeline(model, schedule, run, &suite.probs[i]);
    Labels gt;
    for (const auto& f : run.frames) gt.push_back(*f.gt_anomaly);
    const std::string name = "run " + std::to_string(i);
    gmr_runs.push_back({gt, labels_of(r.gmr.filtered), run.dt_s, name, archetype_name(entry.archetype)});
    vlm_runs.push_back({gt, labels_of(r.classifier.filtered), run.dt_s, name, archetype_name(entry.archetype)});
    moe_runs.push_back({gt, labels_of(r.moe.filtered), run.dt_s, name, archetype_name(entry.archetype)});

    const auto moe = first_anomaly(r.moe.filtered);
    const auto gmr = first_anomaly(r.gmr.filtered);
    const auto vlm = first_anomaly(r.classifier.filtered);
    if (entry.archetype == Archetype::kDripping) {
      ++dripping;
      c.expect(!gmr, name + ": GMR triggered on dripping");
      c.expect(moe.has_value(), name + ": MoE missed dripping");
      if (moe) {
        c.expect(run.frames[*moe].time_s >= entry.onset_s, name + ": MoE fired before the dripping onset");
        c.expect(r.frames[*moe].fused.expert == ExpertKind::kClassifier, name + ": dripping winner is not the classifier");
      }
    }
    if (entry.archetype == Archetype::kPerturbation) {
      ++perturbation;
      c.expect(moe.has_value(), name + ": MoE missed perturbation");
      if (moe) {
        c.expect(r.frames[*moe].fused.expert == ExpertKind::kGmr, name + ": perturbation winner is not GMR");
        c.expect(!vlm || *moe < *vlm, name + ": MoE did not fire before the classifier");
      }
    }
  }
  c.expect(dripping == 2 && perturbation == 2, "suite does not contain two dripping and two perturbation runs");

  const auto gmr = evaluate(gmr_runs), vlm = evaluate(vlm_runs), moe = evaluate(moe_runs);
  const double frame = file.specs.front().dt_s;
  const bool delays = gmr.mean_delay_s && vlm.mean_delay_s && moe.mean_delay_s;
  c.expect(delays, "a track has no defined mean delay");
  c.expect(gmr.frame.f1 && vlm.frame.f1 && moe.frame.f1, "a track has undefined F1");
  if (!delays || !gmr.frame.f1 || !vlm.frame.f1 || !moe.frame.f1) return c.outcome("");
  c.expect(*moe.mean_delay_s <= std::min(*gmr.mean_delay_s, *vlm.mean_delay_s) + frame + 1e-12,
           fmt2("MoE delay %.3f s vs best single %.3f s", *moe.mean_delay_s, std::min(*gmr.mean_delay_s, *vlm.mean_delay_s)));
  c.expect(*moe.frame.f1 >= std::max(*gmr.frame.f1, *vlm.frame.f1) - 0.02,
           fmt2("MoE F1 %.3f vs best single %.3f", *moe.frame.f1, std::max(*gmr.frame.f1, *vlm.frame.f1)));
  char summary[256];
  std::snprintf(summary, sizeof summary,
                "F1 gmr %.3f vlm %.3f moe %.3f; delay gmr %.2f s vlm %.2f s moe %.2f s", *gmr.frame.f1,
                *vlm.frame.f1, *moe.frame.f1, *gmr.mean_delay_s, *vlm.mean_delay_s, *moe.mean_delay_s);
  return c.outcome(summary);
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  Outcome (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "GMR conditioning oracle", 10.0, conditioning_oracle},
      {2, "EM monotonicity and determinism", 30.0, em_monotonicity},
      {3, "calibration soundness", 5.0, calibration_soundness},
      {4, "confidence law", 1.0, confidence_law},
      {5, "classifier expert", 1.0, classifier_expert},
      {6, "fusion", 1.0, fusion_table},
      {7, "metrics oracle", 30.0, metrics_oracle},
      {8, "complementarity on the pouring suite", 120.0, complementarity},
      {9, "filter contract", 5.0, filter_contract},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > cr.limit_s) {
      o.ok = false;
      o.detail += fmt2(" (runtime %.2f s exceeds %.0f s)", secs, cr.limit_s);
    }
    failed += !o.ok;
    std::printf("%s criterion %d: %s: %s [%.2f s]\n", o.ok ? "PASS" : "FAIL", cr.id, cr.name, o.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
