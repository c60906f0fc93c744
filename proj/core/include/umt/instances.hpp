#pragma once

// Finite translation instances: languages, source marginals and the
// deterministic ground-truth translators that generate parallel corpora.

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "umt/discrete.hpp"

namespace umt {

using SentenceDistribution = FiniteDistribution<Sentence>;
using SentenceTranslator = Translator<Sentence, Sentence>;

// Two source languages translated into one target language.
struct TwoToOneInstance {
  std::string id;
  LanguageId source0;
  LanguageId source1;
  LanguageId target;
  SentenceDistribution marginal0;
  SentenceDistribution marginal1;
  SentenceTranslator truth0;  // source0 -> target
  SentenceTranslator truth1;  // source1 -> target
  std::vector<Sentence> target_sentences;  // all of Sigma*_target

  // Throws ArgumentError/DomainError when an invariant is violated.
  void validate() const;

  SentenceDistribution target_marginal0() const { return pushforward(marginal0, truth0); }
  SentenceDistribution target_marginal1() const { return pushforward(marginal1, truth1); }
};

// One translation task L_i -> L_k. Inputs carry the <L_k><L_i> prefix; the
// ground truth maps them to plain sentences of L_k.
struct TranslationTask {
  LanguageId source;
  LanguageId target;
  SentenceDistribution inputs;
  SentenceTranslator truth;

  SentenceDistribution target_marginal() const { return pushforward(inputs, truth); }

  // The parallel corpus as weighted (source, target) pairs.
  std::vector<std::tuple<Sentence, Sentence, double>> joint() const;
};

struct ManyToManyInstance {
  std::string id;
  std::vector<LanguageId> languages;
  std::map<LanguageId, std::vector<Sentence>> sentences;  // plain sentences per language
  std::vector<TranslationTask> tasks;

  std::size_t language_count() const { return languages.size(); }
  void validate() const;

  const TranslationTask& task(const LanguageId& source, const LanguageId& target) const;
  // Tasks translating into `target`, in task order.
  std::vector<const TranslationTask*> tasks_into(const LanguageId& target) const;
};

// Re-expresses a two-to-one instance with tagged inputs (K = 3 languages,
// two tasks into the target).
ManyToManyInstance as_many_to_many(const TwoToOneInstance& inst);

// The translator that dispatches on the source tag and applies the matching
// ground truth for the task into `target`. Domain: every input of those tasks.
SentenceTranslator perfect_universal_translator(const ManyToManyInstance& inst, const LanguageId& target);

}  // namespace umt
