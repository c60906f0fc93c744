#include "umt/discrete.hpp"

namespace umt {

Sentence plain_sentence(LanguageId language, std::string body) {
  return Sentence{std::move(language), std::nullopt, std::move(body)};
}

Sentence tagged_sentence(LanguageId target, LanguageId source, std::string body) {
  return Sentence{std::move(source), std::move(target), std::move(body)};
}

std::string to_string(const Sentence& s) {
  std::string out;
  if (s.target) out += "<" + *s.target + ">";
  out += "<" + s.source + ">" + s.body;
  return out;
}

std::string to_string(const RepPoint& z) { return "z" + std::to_string(z.index); }

}  // namespace umt
