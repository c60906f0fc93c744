#pragma once

// Least-squares training over a translation graph: one affine fit per edge,
// spanning-tree anchoring into per-language encoders, and optional joint
// refinement of the summed edge objective.

#include <map>
#include <optional>
#include <vector>

#include "umt/affine.hpp"
#include "umt/generative.hpp"
#include "umt/graph.hpp"

namespace umt {

struct EdgeRegressionResult {
  LanguageId source;
  LanguageId target;
  AffineMap map;  // source sentence -> target sentence
  double empirical_loss = 0.0;
  Eigen::Index samples = 0;
  double condition_number = 0.0;  // of the [x; 1] Gram matrix
  bool ridge_applied = false;
};

inline constexpr double kMinEncoderSingularValue = 1e-8;

struct EncoderEstimate {
  std::map<LanguageId, AffineMap> encoders;
  // Language whose encoder is the identity; cleared by a gauge transform.
  std::optional<LanguageId> anchor;

  const AffineMap& encoder(const LanguageId& l) const;  // throws ArgumentError
  // Throws ConditioningError if an encoder is not invertible enough.
  void validate() const;
};

struct TrainConfig {
  std::optional<LanguageId> anchor;  // default: first language
  int sweeps = 0;
  double ridge = 1e-10;
  // Project each fitted edge map into composite_class(spec).
  bool project = false;
  FunctionClassSpec spec;
};

// Ordinary least squares for x' ~ A x + c, with `ridge` added to the Gram
// matrix only if its condition number exceeds 1e12.
EdgeRegressionResult fit_edge(const AlignedCorpus& corpus, double ridge = 1e-10);

// Anchor gets the identity; walking a breadth-first tree from the anchor,
// E_child = E_parent o T(child -> parent).
EncoderEstimate anchor_spanning_tree(const TranslationGraph& graph, const std::vector<EdgeRegressionResult>& fits,
                                     const LanguageId& anchor);

// (1/n) sum ||E_target^{-1}(E_source(x_i)) - x'_i||^2.
double empirical_edge_loss(const EncoderEstimate& estimate, const AlignedCorpus& corpus);

// Sum of empirical_edge_loss over all corpora.
double total_objective(const EncoderEstimate& estimate, const std::vector<AlignedCorpus>& corpora);

struct RefineReport {
  std::vector<double> objective;  // before the first sweep, then after each
};

// Cyclic block updates of every non-anchor encoder (ascending language order),
// each a damped Gauss-Newton solve of the total objective accepted only when
// it lowers the objective. Throws ConsistencyError if a sweep increases it.
EncoderEstimate joint_refine(const EncoderEstimate& estimate, const std::vector<AlignedCorpus>& corpora,
                             const TrainConfig& config, RefineReport* report = nullptr);

// Singular values clipped into [1/rho, rho], offset clipped into the offset ball.
AffineMap project_to_class(const AffineMap& map, const FunctionClassSpec& spec);

// Class containing every composite E_b^{-1} o E_a of two class members:
// singular values in [1/rho^2, rho^2], offsets up to (1 + rho^2) * offset_bound.
FunctionClassSpec composite_class(const FunctionClassSpec& spec);

// Replaces every encoder E_L by f o E_L.
EncoderEstimate gauge_transform(const EncoderEstimate& estimate, const AffineMap& f);

struct TrainResult {
  std::vector<EdgeRegressionResult> fits;
  EncoderEstimate estimate;
  RefineReport refine;
};

// fit_edge on every corpus, anchoring, then joint_refine with config.sweeps.
TrainResult train(const TranslationGraph& graph, const std::vector<AlignedCorpus>& corpora,
                  const TrainConfig& config);

}  // namespace umt
