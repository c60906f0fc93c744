#pragma once

// Lower bounds on the translation error of any decoder that reads only a
// (near) language-invariant representation, plus an exhaustive oracle that
// finds the best such encoder/decoder pair on small instances.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "umt/discrete.hpp"
#include "umt/instances.hpp"

namespace umt {

using Encoder = Translator<Sentence, RepPoint>;
using Decoder = Translator<RepPoint, Sentence>;

// A representation space of `z_size` points, each assigned to the block of
// one target language, and an encoder into it. The assignment makes the
// blocks disjoint and covering by construction.
struct PartitionedRepresentation {
  int z_size = 0;
  std::vector<LanguageId> block_of;  // block_of[z] = target language owning z
  Encoder encoder;

  bool in_block(RepPoint z, const LanguageId& target) const;
};

// Pairwise pushforward TV <= epsilon (inclusive, with 1e-12 slack).
bool check_epsilon_universal(const Encoder& g, const std::vector<SentenceDistribution>& marginals, double epsilon);

// Every task into L_k is pushed inside block k and those pushforwards are
// pairwise epsilon-close. Leaking support is reported as false.
bool check_epsilon_universal_partitioned(const PartitionedRepresentation& rep, const ManyToManyInstance& inst,
                                         double epsilon);

// max(0, TV(target marginals) - epsilon).
double two_to_one_bound(const TwoToOneInstance& inst, double epsilon);

struct ManyToManyBounds {
  double max_bound = 0.0;
  double avg_bound = 0.0;
};

ManyToManyBounds many_to_many_bounds(const ManyToManyInstance& inst, double epsilon);

// TV between the target marginals of two tasks into the same language.
struct PairTv {
  LanguageId target;
  LanguageId source_a;
  LanguageId source_b;
  double tv = 0.0;
};

std::vector<PairTv> target_marginal_tvs(const ManyToManyInstance& inst);

enum class Objective { kSum, kMax, kAvg };

std::string to_string(Objective o);
Objective parse_objective(const std::string& s);

struct BruteForceOptions {
  Objective objective = Objective::kSum;
  // Hard cap on enumerated (partition, g, h) candidates.
  std::uint64_t max_candidates = 2'000'000'000ULL;
  // Also verify TV((h o g)#D_i, (h o g)#D_j) <= epsilon for every feasible pair.
  bool check_decoder_contraction = true;
};

struct BruteForceResult {
  bool feasible = false;
  double value = 0.0;
  Objective objective = Objective::kSum;
  std::optional<PartitionedRepresentation> best_representation;
  std::optional<Decoder> best_decoder;
  std::vector<double> best_task_errors;  // Err per task at the minimiser
  std::uint64_t feasible_encoders = 0;
  std::uint64_t evaluated_pairs = 0;
  std::uint64_t contraction_violations = 0;
};

inline constexpr int kMaxBruteForceSentences = 8;
inline constexpr int kMaxBruteForceZ = 4;

// Exhaustive minimum of the objective over every epsilon-universal encoder g
// into a z_size-point space and every decoder h. Candidates are visited in
// lexicographic order of their tables (partition, then g, then h); the first
// minimiser wins. Throws ResourceError beyond the enumeration budget.
BruteForceResult brute_force_min_error(const ManyToManyInstance& inst, int z_size, double epsilon,
                                       const BruteForceOptions& options = {});

// Two-to-one convenience: the block structure is trivial (one target).
BruteForceResult brute_force_min_error(const TwoToOneInstance& inst, int z_size, double epsilon,
                                       const BruteForceOptions& options = {});

// Two sentences per language; target marginals ((1+delta)/2, (1-delta)/2) and
// the mirror image, so that two_to_one_bound(., 0) == delta.
TwoToOneInstance make_worst_case(double delta);

struct BoundReport {
  std::string instance_id;
  double epsilon = 0.0;
  std::vector<PairTv> pair_tvs;
  double tv_max = 0.0;
  double bound_sum = 0.0;
  double bound_max = 0.0;
  double bound_avg = 0.0;
  std::optional<BruteForceResult> brute_force;

  // True unless a brute-force minimum falls below its bound.
  bool holds() const;
  double bound_for(Objective o) const;
};

BoundReport make_bound_report(const ManyToManyInstance& inst, double epsilon);
BoundReport make_bound_report(const TwoToOneInstance& inst, double epsilon);

}  // namespace umt
