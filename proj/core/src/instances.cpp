#include "umt/instances.hpp"

#include <algorithm>
#include <set>

namespace umt {
namespace {

void require_total(const SentenceDistribution& d, const SentenceTranslator& f, const std::string& what) {
  for (const auto& x : d.support()) {
    if (!f.defined_on(x)) throw DomainError(what + ": ground truth undefined on " + to_string(x));
  }
}

void require_language(const SentenceDistribution& d, const LanguageId& lang, const std::string& what) {
  for (const auto& x : d.support()) {
    if (x.source != lang) throw ArgumentError(what + ": sentence " + to_string(x) + " is not in " + lang);
  }
}

}  // namespace

void TwoToOneInstance::validate() const {
  if (source0 == source1) throw ArgumentError("two-to-one: source languages must differ");
  require_language(marginal0, source0, "two-to-one marginal0");
  require_language(marginal1, source1, "two-to-one marginal1");
  require_total(marginal0, truth0, "two-to-one truth0");
  require_total(marginal1, truth1, "two-to-one truth1");
  std::set<Sentence> targets(target_sentences.begin(), target_sentences.end());
  for (const auto* pair : {&truth0, &truth1}) {
    for (const auto& [x, y] : pair->table()) {
      if (y.source != target || !targets.contains(y)) {
        throw ArgumentError("two-to-one: image " + to_string(y) + " is not a target sentence");
      }
    }
  }
}

std::vector<std::tuple<Sentence, Sentence, double>> TranslationTask::joint() const {
  std::vector<std::tuple<Sentence, Sentence, double>> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out.emplace_back(inputs.support()[i], truth(inputs.support()[i]), inputs.weights()[i]);
  }
  return out;
}

void ManyToManyInstance::validate() const {
  if (languages.size() < 2) throw ArgumentError("many-to-many: K must be at least 2");
  std::set<LanguageId> langs(languages.begin(), languages.end());
  if (langs.size() != languages.size()) throw ArgumentError("many-to-many: duplicate language");
  std::set<std::pair<LanguageId, LanguageId>> seen;
  for (const auto& t : tasks) {
    if (!langs.contains(t.source) || !langs.contains(t.target)) {
      throw ArgumentError("many-to-many: task " + t.source + "->" + t.target + " uses unknown language");
    }
    if (!seen.emplace(t.source, t.target).second) {
      throw ArgumentError("many-to-many: duplicate task " + t.source + "->" + t.target);
    }
    for (const auto& x : t.inputs.support()) {
      if (x.source != t.source || x.target != t.target) {
        throw ArgumentError("many-to-many: input " + to_string(x) + " lacks the <" + t.target + "><" + t.source +
                            "> prefix");
      }
    }
    require_total(t.inputs, t.truth, "many-to-many " + t.source + "->" + t.target);
    for (const auto& [x, y] : t.truth.table()) {
      if (y.source != t.target || y.target.has_value()) {
        throw ArgumentError("many-to-many: image " + to_string(y) + " is not a plain " + t.target + " sentence");
      }
    }
  }
}

const TranslationTask& ManyToManyInstance::task(const LanguageId& source, const LanguageId& target) const {
  for (const auto& t : tasks) {
    if (t.source == source && t.target == target) return t;
  }
  throw ArgumentError("many-to-many: no task " + source + "->" + target);
}

std::vector<const TranslationTask*> ManyToManyInstance::tasks_into(const LanguageId& target) const {
  std::vector<const TranslationTask*> out;
  for (const auto& t : tasks) {
    if (t.target == target) out.push_back(&t);
  }
  return out;
}

ManyToManyInstance as_many_to_many(const TwoToOneInstance& inst) {
  ManyToManyInstance m;
  m.id = inst.id;
  m.languages = {inst.source0, inst.source1, inst.target};
  m.sentences[inst.target] = inst.target_sentences;

  auto lift = [&](const SentenceDistribution& d, const SentenceTranslator& f, const LanguageId& src) {
    std::vector<Sentence> atoms;
    std::vector<double> weights;
    std::map<Sentence, Sentence> table;
    auto& plain = m.sentences[src];
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Sentence& x = d.support()[i];
      plain.push_back(x);
      Sentence tagged = tagged_sentence(inst.target, x.source, x.body);
      table.emplace(tagged, f(x));
      atoms.push_back(std::move(tagged));
      weights.push_back(d.weights()[i]);
    }
    return TranslationTask{src, inst.target, SentenceDistribution(std::move(atoms), std::move(weights)),
                           SentenceTranslator(std::move(table))};
  };
  m.tasks.push_back(lift(inst.marginal0, inst.truth0, inst.source0));
  m.tasks.push_back(lift(inst.marginal1, inst.truth1, inst.source1));
  return m;
}

SentenceTranslator perfect_universal_translator(const ManyToManyInstance& inst, const LanguageId& target) {
  std::map<Sentence, Sentence> table;
  for (const auto* t : inst.tasks_into(target)) {
    for (const auto& [x, y] : t->truth.table()) table.emplace(x, y);
  }
  if (table.empty()) throw DomainError("perfect translator: no task translates into " + target);
  return SentenceTranslator(std::move(table));
}

}  // namespace umt
