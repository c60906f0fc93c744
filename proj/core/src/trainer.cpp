#include "umt/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "umt/errors.hpp"

namespace umt {

namespace {

constexpr double kMaxCondition = 1e12;

double condition_of(const Matrix& gram) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double lo = ev(0), hi = ev(ev.size() - 1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

Matrix with_ones(const Matrix& x) {
  Matrix w(x.rows() + 1, x.cols());
  w.topRows(x.rows()) = x;
  w.bottomRows(1).setOnes();
  return w;
}

double mean_squared(const Matrix& residual) {
  if (residual.cols() == 0) return 0.0;
  return residual.colwise().squaredNorm().sum() / static_cast<double>(residual.cols());
}

}  // namespace

const AffineMap& EncoderEstimate::encoder(const LanguageId& l) const {
  auto it = encoders.find(l);
  if (it == encoders.end()) throw ArgumentError("encoder estimate has no language " + l);
  return it->second;
}

void EncoderEstimate::validate() const {
  for (const auto& [l, e] : encoders) {
    if (e.min_singular_value() < kMinEncoderSingularValue) {
      throw ConditioningError("encoder for " + l + " is not invertible (sigma_min < 1e-8)");
    }
  }
  if (anchor && !encoders.contains(*anchor)) throw ArgumentError("anchor " + *anchor + " has no encoder");
}

EdgeRegressionResult fit_edge(const AlignedCorpus& corpus, double ridge) {
  if (!(ridge >= 0.0)) throw ArgumentError("fit_edge: ridge must be >= 0");
  const Eigen::Index d = corpus.x.rows();
  const Eigen::Index n = corpus.x.cols();
  if (corpus.x_prime.rows() != d || corpus.x_prime.cols() != n) throw ArgumentError("fit_edge: corpus shape mismatch");
  if (n < d + 1) {
    throw InsufficientDataError("fit_edge: " + corpus.source + "-" + corpus.target + " has n=" + std::to_string(n) +
                                " < d+1=" + std::to_string(d + 1));
  }
  const Matrix w = with_ones(corpus.x);
  Matrix gram = w * w.transpose();
  const Matrix cross = corpus.x_prime * w.transpose();

  EdgeRegressionResult out;
  out.source = corpus.source;
  out.target = corpus.target;
  out.samples = n;
  out.condition_number = condition_of(gram);
  if (!(out.condition_number <= kMaxCondition)) {
    gram += ridge * Matrix::Identity(d + 1, d + 1);
    out.ridge_applied = true;
    if (!(condition_of(gram) <= 1.0 / std::numeric_limits<double>::epsilon())) {
      throw ConditioningError("fit_edge: design for " + corpus.source + "-" + corpus.target +
                              " is singular even with ridge");
    }
  }
  const Matrix p = gram.ldlt().solve(cross.transpose()).transpose();  // d x (d+1)
  out.map = AffineMap(p.leftCols(d), p.col(d));
  out.empirical_loss = mean_squared(p * w - corpus.x_prime);
  return out;
}

EncoderEstimate anchor_spanning_tree(const TranslationGraph& graph, const std::vector<EdgeRegressionResult>& fits,
                                     const LanguageId& anchor) {
  graph.require_connected();
  const int root = graph.index_of(anchor);
  if (fits.empty()) throw ArgumentError("anchor_spanning_tree: no edge fits");
  const auto dim = fits.front().map.dim();

  auto map_between = [&](const LanguageId& from, const LanguageId& to) -> AffineMap {
    for (const auto& f : fits) {
      if (f.source == from && f.target == to) return f.map;
    }
    for (const auto& f : fits) {
      if (f.source == to && f.target == from) return f.map.inverse();
    }
    throw ArgumentError("anchor_spanning_tree: no fitted map for tree edge " + from + "-" + to);
  };

  const auto parent = graph.bfs_parents(root);
  const auto& langs = graph.languages();
  // Breadth-first order guarantees parents are placed before children.
  std::vector<int> order{root};
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int v : graph.neighbors(order[k])) {
      if (parent[static_cast<std::size_t>(v)] == order[k] && v != root) order.push_back(v);
    }
  }
  EncoderEstimate est;
  est.anchor = anchor;
  est.encoders.emplace(anchor, AffineMap::identity(dim));
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& child = langs[static_cast<std::size_t>(order[k])];
    const auto& par = langs[static_cast<std::size_t>(parent[static_cast<std::size_t>(order[k])])];
    est.encoders.emplace(child, compose(est.encoders.at(par), map_between(child, par)));
  }
  est.validate();
  return est;
}

double empirical_edge_loss(const EncoderEstimate& estimate, const AlignedCorpus& corpus) {
  const AffineMap t = compose(estimate.encoder(corpus.target).inverse(), estimate.encoder(corpus.source));
  return mean_squared(t.apply_columns(corpus.x) - corpus.x_prime);
}

double total_objective(const EncoderEstimate& estimate, const std::vector<AlignedCorpus>& corpora) {
  double total = 0.0;
  for (const auto& c : corpora) total += empirical_edge_loss(estimate, c);
  return total;
}

namespace {

// Gauss-Newton system for the parameters P = [A c] (column-major vec) of one
// encoder, holding the others fixed. Each residual r_i has Jacobian
// kron(w_i^T, M) with (w, M) = ([x; 1], A_t^{-1}) in the source role and
// ([prediction; 1], -A_l^{-1}) in the target role.
struct NormalSystem {
  Matrix h;
  Vector g;
};

NormalSystem normal_system(const EncoderEstimate& est, const std::vector<AlignedCorpus>& corpora,
                           const LanguageId& lang) {
  const Eigen::Index d = est.encoder(lang).dim();
  const Eigen::Index p = d * (d + 1);
  NormalSystem sys{Matrix::Zero(p, p), Vector::Zero(p)};
  for (const auto& c : corpora) {
    const bool is_source = c.source == lang;
    const bool is_target = c.target == lang;
    if (!is_source && !is_target) continue;
    const AffineMap dec = est.encoder(c.target).inverse();
    const Matrix pred = dec.apply_columns(est.encoder(c.source).apply_columns(c.x));
    const Matrix r = pred - c.x_prime;
    const double scale = 1.0 / static_cast<double>(c.size());
    auto accumulate = [&](const Matrix& w, const Matrix& m) {
      const Matrix gw = w * w.transpose();
      const Matrix mm = m.transpose() * m;
      for (Eigen::Index a = 0; a <= d; ++a) {
        for (Eigen::Index b = 0; b <= d; ++b) sys.h.block(a * d, b * d, d, d) += scale * gw(a, b) * mm;
      }
      const Matrix grad = m.transpose() * r * w.transpose();  // d x (d+1)
      sys.g += scale * Eigen::Map<const Vector>(grad.data(), p);
    };
    if (is_source) accumulate(with_ones(c.x), dec.linear());
    if (is_target) accumulate(with_ones(pred), -dec.linear());
  }
  return sys;
}

AffineMap step(const AffineMap& e, const Vector& delta) {
  const Eigen::Index d = e.dim();
  Matrix p(d, d + 1);
  p.leftCols(d) = e.linear();
  p.col(d) = e.offset();
  p += Eigen::Map<const Matrix>(delta.data(), d, d + 1);
  return {p.leftCols(d), p.col(d)};
}

void refine_language(EncoderEstimate& est, const std::vector<AlignedCorpus>& corpora, const LanguageId& lang) {
  double current = total_objective(est, corpora);
  for (int iter = 0; iter < 20 && current > 0.0; ++iter) {
    const NormalSystem sys = normal_system(est, corpora, lang);
    if (sys.g.norm() == 0.0) return;
    bool improved = false;
    for (double lambda = 1e-12; lambda <= 1e4; lambda *= 100.0) {
      Matrix h = sys.h;
      h.diagonal() += lambda * (sys.h.diagonal().array() + 1e-12).matrix();
      const Vector delta = h.ldlt().solve(-sys.g);
      if (!delta.allFinite()) continue;
      AffineMap candidate = step(est.encoder(lang), delta);
      if (candidate.min_singular_value() < kMinEncoderSingularValue) continue;
      const AffineMap saved = est.encoders.at(lang);
      est.encoders.at(lang) = candidate;
      const double value = total_objective(est, corpora);
      if (value < current) {
        improved = current - value > 1e-15 * std::max(1.0, current);
        current = value;
        break;
      }
      est.encoders.at(lang) = saved;
    }
    if (!improved) return;
  }
}

}  // namespace

EncoderEstimate joint_refine(const EncoderEstimate& estimate, const std::vector<AlignedCorpus>& corpora,
                             const TrainConfig& config, RefineReport* report) {
  if (config.sweeps < 0) throw ArgumentError("joint_refine: sweeps must be >= 0");
  estimate.validate();
  EncoderEstimate est = estimate;
  double before = total_objective(est, corpora);
  if (report) report->objective = {before};
  for (int s = 0; s < config.sweeps; ++s) {
    for (const auto& [lang, e] : estimate.encoders) {
      if (est.anchor && lang == *est.anchor) continue;
      refine_language(est, corpora, lang);
    }
    const double after = total_objective(est, corpora);
    if (after > before + 1e-9) {
      throw ConsistencyError("joint_refine: objective increased from " + std::to_string(before) + " to " +
                             std::to_string(after));
    }
    if (report) report->objective.push_back(after);
    before = after;
  }
  return est;
}

AffineMap project_to_class(const AffineMap& map, const FunctionClassSpec& spec) {
  spec.validate();
  Matrix linear = clip_singular_values(map.linear(), 1.0 / spec.rho, spec.rho);
  Vector offset = map.offset();
  const double norm = offset.norm();
  if (norm > spec.offset_bound) offset *= spec.offset_bound / norm;
  return {std::move(linear), std::move(offset)};
}

FunctionClassSpec composite_class(const FunctionClassSpec& spec) {
  return {spec.dim, spec.ball_radius, spec.rho * spec.rho, (1.0 + spec.rho * spec.rho) * spec.offset_bound};
}

EncoderEstimate gauge_transform(const EncoderEstimate& estimate, const AffineMap& f) {
  EncoderEstimate out;
  for (const auto& [l, e] : estimate.encoders) out.encoders.emplace(l, compose(f, e));
  return out;
}

TrainResult train(const TranslationGraph& graph, const std::vector<AlignedCorpus>& corpora,
                  const TrainConfig& config) {
  if (!(config.ridge >= 0.0)) throw ArgumentError("train: ridge must be >= 0");
  graph.require_connected();
  TrainResult out;
  for (const auto& c : corpora) {
    auto fit = fit_edge(c, config.ridge);
    if (config.project) {
      fit.map = project_to_class(fit.map, composite_class(config.spec));
      fit.empirical_loss = mean_squared(fit.map.apply_columns(c.x) - c.x_prime);
    }
    out.fits.push_back(std::move(fit));
  }
  const LanguageId anchor = config.anchor.value_or(graph.languages().front());
  out.estimate = anchor_spanning_tree(graph, out.fits, anchor);
  out.estimate = joint_refine(out.estimate, corpora, config, &out.refine);
  return out;
}

}  // namespace umt
