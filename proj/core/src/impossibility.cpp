#include "umt/impossibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace umt {

bool PartitionedRepresentation::in_block(RepPoint z, const LanguageId& target) const {
  return z.index >= 0 && z.index < z_size && static_cast<std::size_t>(z.index) < block_of.size() &&
         block_of[static_cast<std::size_t>(z.index)] == target;
}

bool check_epsilon_universal(const Encoder& g, const std::vector<SentenceDistribution>& marginals, double epsilon) {
  if (marginals.size() < 2) throw ArgumentError("epsilon-universal check needs at least two marginals");
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be non-negative");
  std::vector<FiniteDistribution<RepPoint>> pushed;
  pushed.reserve(marginals.size());
  for (const auto& d : marginals) pushed.push_back(pushforward(d, g));
  for (std::size_t i = 0; i < pushed.size(); ++i) {
    for (std::size_t j = i + 1; j < pushed.size(); ++j) {
      if (tv_distance(pushed[i], pushed[j]) > epsilon + kProbabilityTolerance) return false;
    }
  }
  return true;
}

bool check_epsilon_universal_partitioned(const PartitionedRepresentation& rep, const ManyToManyInstance& inst,
                                         double epsilon) {
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be non-negative");
  for (const auto& target : inst.languages) {
    auto tasks = inst.tasks_into(target);
    std::vector<FiniteDistribution<RepPoint>> pushed;
    for (const auto* t : tasks) {
      auto p = pushforward(t->inputs, rep.encoder);
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.weights()[i] > 0.0 && !rep.in_block(p.support()[i], target)) return false;
      }
      pushed.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < pushed.size(); ++i) {
      for (std::size_t j = i + 1; j < pushed.size(); ++j) {
        if (tv_distance(pushed[i], pushed[j]) > epsilon + kProbabilityTolerance) return false;
      }
    }
  }
  return true;
}

double two_to_one_bound(const TwoToOneInstance& inst, double epsilon) {
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be non-negative");
  return std::max(0.0, tv_distance(inst.target_marginal0(), inst.target_marginal1()) - epsilon);
}

std::vector<PairTv> target_marginal_tvs(const ManyToManyInstance& inst) {
  std::vector<PairTv> out;
  for (const auto& target : inst.languages) {
    auto tasks = inst.tasks_into(target);
    std::vector<SentenceDistribution> marginals;
    for (const auto* t : tasks) marginals.push_back(t->target_marginal());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      for (std::size_t j = i + 1; j < tasks.size(); ++j) {
        out.push_back({target, tasks[i]->source, tasks[j]->source, tv_distance(marginals[i], marginals[j])});
      }
    }
  }
  return out;
}

ManyToManyBounds many_to_many_bounds(const ManyToManyInstance& inst, double epsilon) {
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be non-negative");
  const auto k = static_cast<double>(inst.language_count());
  if (inst.language_count() < 2) throw ArgumentError("many-to-many bounds need K >= 2");
  double max_tv = 0.0;
  double sum_tv = 0.0;
  for (const auto& p : target_marginal_tvs(inst)) {
    max_tv = std::max(max_tv, p.tv);
    sum_tv += p.tv;
  }
  return {std::max(0.0, 0.5 * max_tv - 0.5 * epsilon), std::max(0.0, sum_tv / (k * k * (k - 1.0)) - 0.5 * epsilon)};
}

std::string to_string(Objective o) {
  switch (o) {
    case Objective::kSum: return "sum";
    case Objective::kMax: return "max";
    case Objective::kAvg: return "avg";
  }
  return "?";
}

Objective parse_objective(const std::string& s) {
  if (s == "sum") return Objective::kSum;
  if (s == "max") return Objective::kMax;
  if (s == "avg") return Objective::kAvg;
  throw ArgumentError("objective must be one of sum|max|avg, got '" + s + "'");
}

namespace {

// Dense re-indexing of an instance for enumeration.
struct FlatInstance {
  struct Input {
    Sentence sentence;
    int task = 0;
    int block = 0;  // index of the task's target language
    int truth = 0;  // index into outputs
    double weight = 0.0;
  };
  std::vector<Input> inputs;
  std::vector<Sentence> outputs;
  std::vector<LanguageId> targets;            // languages that receive at least one task
  std::vector<int> task_block;                // per task
  std::vector<std::pair<int, int>> rivals;    // task pairs sharing a target
  int task_count = 0;
};

FlatInstance flatten(const ManyToManyInstance& inst) {
  FlatInstance f;
  f.task_count = static_cast<int>(inst.tasks.size());
  std::map<LanguageId, int> block_index;
  for (const auto& lang : inst.languages) {
    if (!inst.tasks_into(lang).empty()) {
      block_index.emplace(lang, static_cast<int>(f.targets.size()));
      f.targets.push_back(lang);
    }
  }
  std::map<Sentence, int> out_index;
  auto add_output = [&](const Sentence& s) {
    auto [it, inserted] = out_index.emplace(s, static_cast<int>(f.outputs.size()));
    if (inserted) f.outputs.push_back(s);
    return it->second;
  };
  for (const auto& lang : f.targets) {
    auto it = inst.sentences.find(lang);
    if (it != inst.sentences.end()) {
      for (const auto& s : it->second) add_output(s);
    }
  }
  for (int t = 0; t < f.task_count; ++t) {
    const auto& task = inst.tasks[static_cast<std::size_t>(t)];
    f.task_block.push_back(block_index.at(task.target));
    for (std::size_t i = 0; i < task.inputs.size(); ++i) {
      const Sentence& x = task.inputs.support()[i];
      f.inputs.push_back({x, t, f.task_block.back(), add_output(task.truth(x)), task.inputs.weights()[i]});
    }
  }
  for (int a = 0; a < f.task_count; ++a) {
    for (int b = a + 1; b < f.task_count; ++b) {
      if (f.task_block[static_cast<std::size_t>(a)] == f.task_block[static_cast<std::size_t>(b)]) {
        f.rivals.emplace_back(a, b);
      }
    }
  }
  return f;
}

double saturating_pow(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Odometer over per-position value lists; position 0 is most significant.
class Odometer {
 public:
  explicit Odometer(std::vector<int> radices) : radices_(std::move(radices)), digits_(radices_.size(), 0) {}
  const std::vector<int>& digits() const { return digits_; }
  bool next() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (++digits_[i] < radices_[i]) return true;
      digits_[i] = 0;
    }
    return false;
  }

 private:
  std::vector<int> radices_;
  std::vector<int> digits_;
};

double objective_value(Objective o, const std::vector<double>& errs, double k) {
  switch (o) {
    case Objective::kSum: {
      double s = 0.0;
      for (double e : errs) s += e;
      return s;
    }
    case Objective::kMax: return errs.empty() ? 0.0 : *std::max_element(errs.begin(), errs.end());
    case Objective::kAvg: {
      double s = 0.0;
      for (double e : errs) s += e;
      return s / (k * k);
    }
  }
  return 0.0;
}

}  // namespace

BruteForceResult brute_force_min_error(const ManyToManyInstance& inst, int z_size, double epsilon,
                                       const BruteForceOptions& options) {
  inst.validate();
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be non-negative");
  if (z_size < 1) throw ArgumentError("z_size must be at least 1");
  const FlatInstance flat = flatten(inst);
  const int n_inputs = static_cast<int>(flat.inputs.size());
  const int n_out = static_cast<int>(flat.outputs.size());
  const int n_blocks = static_cast<int>(flat.targets.size());
  if (n_inputs > kMaxBruteForceSentences || z_size > kMaxBruteForceZ) {
    throw ResourceError("brute force budget exceeded: |Sigma*| = " + std::to_string(n_inputs) +
                        " (max " + std::to_string(kMaxBruteForceSentences) + "), |Z| = " + std::to_string(z_size) +
                        " (max " + std::to_string(kMaxBruteForceZ) + ")");
  }
  const double worst = saturating_pow(n_blocks, z_size) * saturating_pow(z_size, n_inputs) *
                       saturating_pow(n_out, z_size);
  if (worst > static_cast<double>(options.max_candidates)) {
    throw ResourceError("brute force budget exceeded: up to " + std::to_string(worst) + " candidates (max " +
                        std::to_string(options.max_candidates) + ")");
  }

  const auto k = static_cast<double>(inst.language_count());
  const std::size_t nt = static_cast<std::size_t>(flat.task_count);
  const std::size_t nz = static_cast<std::size_t>(z_size);
  const std::size_t no = static_cast<std::size_t>(n_out);

  BruteForceResult result;
  result.objective = options.objective;
  result.value = std::numeric_limits<double>::infinity();
  std::vector<int> best_blocks, best_g, best_h;

  std::vector<double> push(nt * nz);
  std::vector<double> cost(nt * nz * no);
  std::vector<double> errs(nt);
  std::vector<double> mix(no);

  Odometer partitions(std::vector<int>(nz, n_blocks));
  do {
    const auto& blocks = partitions.digits();
    // Allowed representation points per input, ascending.
    std::vector<std::vector<int>> allowed(static_cast<std::size_t>(n_inputs));
    bool any_empty = false;
    for (int s = 0; s < n_inputs; ++s) {
      const auto& in = flat.inputs[static_cast<std::size_t>(s)];
      for (int z = 0; z < z_size; ++z) {
        if (in.weight == 0.0 || blocks[static_cast<std::size_t>(z)] == in.block) {
          allowed[static_cast<std::size_t>(s)].push_back(z);
        }
      }
      any_empty = any_empty || allowed[static_cast<std::size_t>(s)].empty();
    }
    if (any_empty) continue;

    std::vector<int> radices;
    for (const auto& a : allowed) radices.push_back(static_cast<int>(a.size()));
    Odometer encoders(radices);
    std::vector<int> g(static_cast<std::size_t>(n_inputs));
    do {
      for (int s = 0; s < n_inputs; ++s) {
        g[static_cast<std::size_t>(s)] =
            allowed[static_cast<std::size_t>(s)][static_cast<std::size_t>(encoders.digits()[static_cast<std::size_t>(s)])];
      }
      std::fill(push.begin(), push.end(), 0.0);
      std::fill(cost.begin(), cost.end(), 0.0);
      for (int s = 0; s < n_inputs; ++s) {
        const auto& in = flat.inputs[static_cast<std::size_t>(s)];
        const std::size_t z = static_cast<std::size_t>(g[static_cast<std::size_t>(s)]);
        const std::size_t t = static_cast<std::size_t>(in.task);
        push[t * nz + z] += in.weight;
        // cost[t][z][y] accumulates the mass at z whose truth differs from y.
        for (std::size_t y = 0; y < no; ++y) {
          if (static_cast<int>(y) != in.truth) cost[(t * nz + z) * no + y] += in.weight;
        }
      }
      bool feasible = true;
      for (const auto& [a, b] : flat.rivals) {
        double l1 = 0.0;
        for (std::size_t z = 0; z < nz; ++z) {
          l1 += std::abs(push[static_cast<std::size_t>(a) * nz + z] - push[static_cast<std::size_t>(b) * nz + z]);
        }
        if (0.5 * l1 > epsilon + kProbabilityTolerance) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      ++result.feasible_encoders;

      Odometer decoders(std::vector<int>(nz, n_out));
      do {
        const auto& h = decoders.digits();
        ++result.evaluated_pairs;
        for (std::size_t t = 0; t < nt; ++t) {
          double e = 0.0;
          for (std::size_t z = 0; z < nz; ++z) e += cost[(t * nz + z) * no + static_cast<std::size_t>(h[z])];
          errs[t] = std::min(e, 1.0);
        }
        const double v = objective_value(options.objective, errs, k);
        if (v < result.value) {
          result.value = v;
          result.best_task_errors = errs;
          best_blocks = blocks;
          best_g = g;
          best_h = h;
        }
        if (options.check_decoder_contraction) {
          for (const auto& [a, b] : flat.rivals) {
            std::fill(mix.begin(), mix.end(), 0.0);
            for (std::size_t z = 0; z < nz; ++z) {
              mix[static_cast<std::size_t>(h[z])] +=
                  push[static_cast<std::size_t>(a) * nz + z] - push[static_cast<std::size_t>(b) * nz + z];
            }
            double l1 = 0.0;
            for (double m : mix) l1 += std::abs(m);
            if (0.5 * l1 > epsilon + kProbabilityTolerance) ++result.contraction_violations;
          }
        }
      } while (decoders.next());
    } while (encoders.next());
  } while (partitions.next());

  result.feasible = result.feasible_encoders > 0;
  if (!result.feasible) {
    result.value = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  PartitionedRepresentation rep;
  rep.z_size = z_size;
  for (int b : best_blocks) rep.block_of.push_back(flat.targets[static_cast<std::size_t>(b)]);
  std::map<Sentence, RepPoint> gt;
  for (int s = 0; s < n_inputs; ++s) {
    gt.emplace(flat.inputs[static_cast<std::size_t>(s)].sentence, RepPoint{best_g[static_cast<std::size_t>(s)]});
  }
  rep.encoder = Encoder(std::move(gt));
  std::map<RepPoint, Sentence> ht;
  for (int z = 0; z < z_size; ++z) {
    ht.emplace(RepPoint{z}, flat.outputs[static_cast<std::size_t>(best_h[static_cast<std::size_t>(z)])]);
  }
  result.best_representation = std::move(rep);
  result.best_decoder = Decoder(std::move(ht));
  return result;
}

BruteForceResult brute_force_min_error(const TwoToOneInstance& inst, int z_size, double epsilon,
                                       const BruteForceOptions& options) {
  inst.validate();
  auto result = brute_force_min_error(as_many_to_many(inst), z_size, epsilon, options);
  if (result.best_representation) {
    // Report g on the untagged source sentences of the two-to-one setting.
    std::map<Sentence, RepPoint> plain;
    for (const auto& [x, z] : result.best_representation->encoder.table()) {
      plain.emplace(plain_sentence(x.source, x.body), z);
    }
    result.best_representation->encoder = Encoder(std::move(plain));
  }
  return result;
}

TwoToOneInstance make_worst_case(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ArgumentError("delta must lie in [0, 1]");
  const double hi = (1.0 + delta) / 2.0;
  const double lo = (1.0 - delta) / 2.0;
  const Sentence a0 = plain_sentence("L0", "a"), b0 = plain_sentence("L0", "b");
  const Sentence a1 = plain_sentence("L1", "a"), b1 = plain_sentence("L1", "b");
  const Sentence ta = plain_sentence("L", "a"), tb = plain_sentence("L", "b");
  return TwoToOneInstance{
      .id = "worst_case",
      .source0 = "L0",
      .source1 = "L1",
      .target = "L",
      .marginal0 = SentenceDistribution({a0, b0}, {hi, lo}),
      .marginal1 = SentenceDistribution({a1, b1}, {lo, hi}),
      .truth0 = SentenceTranslator({{a0, ta}, {b0, tb}}),
      .truth1 = SentenceTranslator({{a1, ta}, {b1, tb}}),
      .target_sentences = {ta, tb},
  };
}

bool BoundReport::holds() const {
  if (!brute_force || !brute_force->feasible) return true;
  return brute_force->value >= bound_for(brute_force->objective) - 1e-9 && brute_force->contraction_violations == 0;
}

double BoundReport::bound_for(Objective o) const {
  switch (o) {
    case Objective::kSum: return bound_sum;
    case Objective::kMax: return bound_max;
    case Objective::kAvg: return bound_avg;
  }
  return 0.0;
}

BoundReport make_bound_report(const ManyToManyInstance& inst, double epsilon) {
  inst.validate();
  BoundReport r;
  r.instance_id = inst.id;
  r.epsilon = epsilon;
  r.pair_tvs = target_marginal_tvs(inst);
  for (const auto& p : r.pair_tvs) r.tv_max = std::max(r.tv_max, p.tv);
  // The two-to-one bound applied to the worst pair of tasks.
  r.bound_sum = std::max(0.0, r.tv_max - epsilon);
  const auto mm = many_to_many_bounds(inst, epsilon);
  r.bound_max = mm.max_bound;
  r.bound_avg = mm.avg_bound;
  return r;
}

BoundReport make_bound_report(const TwoToOneInstance& inst, double epsilon) {
  inst.validate();
  BoundReport r = make_bound_report(as_many_to_many(inst), epsilon);
  r.bound_sum = two_to_one_bound(inst, epsilon);
  return r;
}

}  // namespace umt
