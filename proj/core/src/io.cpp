#include "umt/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "umt/errors.hpp"

namespace umt {

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write " + path.string());
  out << text;
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

std::string hex64(std::uint64_t x) { return fmt::format("{:016x}", x); }

std::uint64_t parse_hex64(const std::string& s, const std::string& field) {
  if (s.empty() || s.size() > 16 || s.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
    throw SchemaError(field + ": expected a hexadecimal string");
  }
  return std::stoull(s, nullptr, 16);
}

namespace {

class Violations {
 public:
  void add(std::string msg) { items_.push_back(std::move(msg)); }
  bool empty() const { return items_.empty(); }
  void throw_if_any(const std::string& what) const {
    if (items_.empty()) return;
    std::string msg = what + ": " + std::to_string(items_.size()) + " schema violation(s)";
    for (const auto& s : items_) msg += "\n  " + s;
    throw SchemaError(msg);
  }

 private:
  std::vector<std::string> items_;
};

bool is_string_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& x : j) {
    if (!x.is_string()) return false;
  }
  return true;
}

std::vector<double> number_array(const Json& j, const std::string& field, Violations& v) {
  std::vector<double> out;
  if (!j.is_array()) {
    v.add(field + ": expected an array of numbers");
    return out;
  }
  for (const auto& x : j) {
    if (!x.is_number()) {
      v.add(field + ": expected an array of numbers");
      return {};
    }
    out.push_back(x.get<double>());
  }
  return out;
}

std::pair<std::string, std::string> split_task_key(const std::string& key) {
  const auto pos = key.find("->");
  if (pos == std::string::npos) return {};
  return {key.substr(0, pos), key.substr(pos + 2)};
}

template <class Fn>
auto guarded(Violations& v, const std::string& field, Fn&& fn) -> std::optional<decltype(fn())> {
  try {
    return fn();
  } catch (const Error& e) {
    v.add(field + ": " + e.what());
  }
  return std::nullopt;
}

}  // namespace

InstanceFile instance_from_json(const Json& j) {
  Violations v;
  if (!j.is_object()) throw SchemaError("instance: expected a JSON object");
  const std::string id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : "instance";
  const std::string kind = j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "many_to_many";
  if (kind != "two_to_one" && kind != "many_to_many") v.add("kind: expected two_to_one or many_to_many");

  std::vector<LanguageId> languages;
  if (!j.contains("languages") || !is_string_array(j["languages"])) {
    v.add("languages: expected an array of strings");
  } else {
    languages = j["languages"].get<std::vector<LanguageId>>();
  }
  const std::set<LanguageId> lang_set(languages.begin(), languages.end());
  if (lang_set.size() != languages.size()) v.add("languages: duplicate language");

  std::map<LanguageId, std::vector<std::string>> ids;
  if (!j.contains("sentences") || !j["sentences"].is_object()) {
    v.add("sentences: expected an object mapping language to sentence ids");
  } else {
    for (const auto& [lang, arr] : j["sentences"].items()) {
      if (!lang_set.contains(lang)) v.add("sentences." + lang + ": unknown language");
      if (!is_string_array(arr)) {
        v.add("sentences." + lang + ": expected an array of strings");
        continue;
      }
      ids[lang] = arr.get<std::vector<std::string>>();
      if (std::set<std::string>(ids[lang].begin(), ids[lang].end()).size() != ids[lang].size()) {
        v.add("sentences." + lang + ": duplicate sentence id");
      }
    }
    for (const auto& l : languages) {
      if (!ids.contains(l)) v.add("sentences." + l + ": missing");
    }
  }

  auto weights_for = [&](const Json& arr, const LanguageId& lang, const std::string& field) -> std::vector<double> {
    auto w = number_array(arr, field, v);
    if (!w.empty() && ids.contains(lang) && w.size() != ids[lang].size()) {
      v.add(field + ": has " + std::to_string(w.size()) + " weights for " + std::to_string(ids[lang].size()) +
            " sentences");
      return {};
    }
    double total = 0.0;
    for (double x : w) {
      if (!(x >= 0.0)) {
        v.add(field + ": weights must be non-negative");
        return {};
      }
      total += x;
    }
    if (!w.empty() && std::abs(total - 1.0) > kProbabilityTolerance) {
      v.add(field + ": weights sum to " + format_number(total) + ", expected 1");
      return {};
    }
    return w;
  };

  std::map<LanguageId, std::vector<double>> marginals;
  if (j.contains("marginals") && !j["marginals"].is_object()) {
    v.add("marginals: expected an object mapping language to weights");
  } else if (j.contains("marginals")) {
    for (const auto& [lang, arr] : j["marginals"].items()) {
      if (!lang_set.contains(lang)) v.add("marginals." + lang + ": unknown language");
      marginals[lang] = weights_for(arr, lang, "marginals." + lang);
    }
  }

  std::map<std::string, std::vector<double>> distributions;
  if (j.contains("distributions")) {
    if (!j["distributions"].is_object()) {
      v.add("distributions: expected an object mapping \"src->dst\" to weights");
    } else {
      for (const auto& [key, arr] : j["distributions"].items()) {
        const auto [src, dst] = split_task_key(key);
        if (src.empty()) {
          v.add("distributions." + key + ": key must look like \"src->dst\"");
          continue;
        }
        distributions[key] = weights_for(arr, src, "distributions." + key);
      }
    }
  }

  struct RawTask {
    LanguageId src, dst;
    std::map<std::string, std::string> table;
  };
  std::vector<RawTask> raw;
  if (!j.contains("translators") || !j["translators"].is_object()) {
    v.add("translators: expected an object mapping \"src->dst\" to id maps");
  } else {
    for (const auto& [key, table] : j["translators"].items()) {
      const std::string field = "translators." + key;
      const auto [src, dst] = split_task_key(key);
      if (src.empty() || !lang_set.contains(src) || !lang_set.contains(dst)) {
        v.add(field + ": key must be \"src->dst\" over known languages");
        continue;
      }
      if (!table.is_object()) {
        v.add(field + ": expected an object mapping sentence id to sentence id");
        continue;
      }
      RawTask t{src, dst, {}};
      for (const auto& [from, to] : table.items()) {
        if (!to.is_string()) {
          v.add(field + "." + from + ": expected a sentence id");
          continue;
        }
        const auto& src_ids = ids[src];
        const auto& dst_ids = ids[dst];
        if (std::find(src_ids.begin(), src_ids.end(), from) == src_ids.end()) {
          v.add(field + ": " + from + " is not a sentence of " + src);
        }
        if (std::find(dst_ids.begin(), dst_ids.end(), to.get<std::string>()) == dst_ids.end()) {
          v.add(field + "." + from + ": " + to.get<std::string>() + " is not a sentence of " + dst);
        }
        t.table[from] = to.get<std::string>();
      }
      for (const auto& s : ids[src]) {
        if (!t.table.contains(s)) v.add(field + ": no image for sentence " + s);
      }
      raw.push_back(std::move(t));
    }
  }
  for (const auto& t : raw) {
    const std::string key = t.src + "->" + t.dst;
    if (!distributions.contains(key) && (!marginals.contains(t.src) || marginals[t.src].empty())) {
      v.add("marginals." + t.src + ": required by task " + key);
    }
  }
  std::optional<LanguageId> target;
  if (j.contains("target")) {
    if (!j["target"].is_string() || !lang_set.contains(j["target"].get<std::string>())) {
      v.add("target: expected one of the listed languages");
    } else {
      target = j["target"].get<std::string>();
    }
  }
  if (kind == "two_to_one") {
    if (!target) v.add("target: required for kind two_to_one");
    if (languages.size() != 3) v.add("languages: kind two_to_one needs exactly three languages");
    if (raw.size() != 2) v.add("translators: kind two_to_one needs exactly two translators");
    for (const auto& t : raw) {
      if (target && t.dst != *target) v.add("translators." + t.src + "->" + t.dst + ": must translate into the target");
    }
  }
  v.throw_if_any("instance");

  InstanceFile out;
  out.many.id = id;
  out.many.languages = languages;
  for (const auto& l : languages) {
    auto& list = out.many.sentences[l];
    for (const auto& s : ids[l]) list.push_back(plain_sentence(l, s));
  }
  for (const auto& t : raw) {
    const std::string key = t.src + "->" + t.dst;
    const auto& w = distributions.contains(key) ? distributions[key] : marginals[t.src];
    std::vector<Sentence> inputs;
    std::map<Sentence, Sentence> table;
    for (const auto& s : ids[t.src]) {
      inputs.push_back(tagged_sentence(t.dst, t.src, s));
      table.emplace(tagged_sentence(t.dst, t.src, s), plain_sentence(t.dst, t.table.at(s)));
    }
    auto dist = guarded(v, distributions.contains(key) ? "distributions." + key : "marginals." + t.src,
                        [&] { return SentenceDistribution(inputs, w); });
    if (dist) out.many.tasks.push_back({t.src, t.dst, *dist, SentenceTranslator(std::move(table))});
  }
  v.throw_if_any("instance");
  guarded(v, "instance", [&] {
    out.many.validate();
    return 0;
  });

  if (kind == "two_to_one") {
    std::vector<LanguageId> sources;
    for (const auto& l : languages) {
      if (l != *target) sources.push_back(l);
    }
    auto make = [&](const LanguageId& src) -> std::pair<SentenceDistribution, SentenceTranslator> {
      std::vector<Sentence> support;
      std::map<Sentence, Sentence> table;
      const RawTask* task = nullptr;
      for (const auto& t : raw) {
        if (t.src == src) task = &t;
      }
      if (!task) throw SchemaError("translators: no task from " + src);
      for (const auto& s : ids[src]) {
        support.push_back(plain_sentence(src, s));
        table.emplace(plain_sentence(src, s), plain_sentence(*target, task->table.at(s)));
      }
      const std::string key = src + "->" + *target;
      const auto& w = distributions.contains(key) ? distributions[key] : marginals[src];
      return {SentenceDistribution(support, w), SentenceTranslator(std::move(table))};
    };
    auto built = guarded(v, "instance", [&] {
      auto [m0, t0] = make(sources[0]);
      auto [m1, t1] = make(sources[1]);
      TwoToOneInstance inst{id, sources[0], sources[1], *target, m0, m1, t0, t1, out.many.sentences[*target]};
      inst.validate();
      return inst;
    });
    if (built) out.two_to_one = std::move(*built);
  }
  v.throw_if_any("instance");
  return out;
}

namespace {

void put_language(Json& j, const LanguageId& lang, const std::vector<Sentence>& sentences) {
  Json ids = Json::array();
  for (const auto& s : sentences) ids.push_back(s.body);
  j["sentences"][lang] = ids;
}

Json weights_json(const SentenceDistribution& d) {
  Json w = Json::array();
  for (double x : d.weights()) w.push_back(x);
  return w;
}

}  // namespace

Json to_json(const TwoToOneInstance& inst) {
  Json j;
  j["id"] = inst.id;
  j["kind"] = "two_to_one";
  j["languages"] = {inst.source0, inst.source1, inst.target};
  j["target"] = inst.target;
  j["sentences"] = Json::object();
  put_language(j, inst.source0, {inst.marginal0.support().begin(), inst.marginal0.support().end()});
  put_language(j, inst.source1, {inst.marginal1.support().begin(), inst.marginal1.support().end()});
  put_language(j, inst.target, inst.target_sentences);
  j["marginals"] = Json::object();
  j["marginals"][inst.source0] = weights_json(inst.marginal0);
  j["marginals"][inst.source1] = weights_json(inst.marginal1);
  j["translators"] = Json::object();
  for (const auto* pair : {&inst.truth0, &inst.truth1}) {
    const bool first = pair == &inst.truth0;
    const auto& src = first ? inst.source0 : inst.source1;
    Json table = Json::object();
    const auto& support = first ? inst.marginal0.support() : inst.marginal1.support();
    for (const auto& s : support) table[s.body] = (*pair)(s).body;
    j["translators"][src + "->" + inst.target] = table;
  }
  return j;
}

Json to_json(const ManyToManyInstance& inst) {
  Json j;
  j["id"] = inst.id;
  j["kind"] = "many_to_many";
  j["languages"] = inst.languages;
  j["sentences"] = Json::object();
  for (const auto& l : inst.languages) put_language(j, l, inst.sentences.at(l));
  j["distributions"] = Json::object();
  j["translators"] = Json::object();
  for (const auto& t : inst.tasks) {
    const std::string key = t.source + "->" + t.target;
    // Task inputs follow the language's sentence order.
    Json w = Json::array();
    Json table = Json::object();
    for (const auto& s : inst.sentences.at(t.source)) {
      const Sentence tagged = tagged_sentence(t.target, t.source, s.body);
      w.push_back(t.inputs.mass(tagged));
      table[s.body] = t.truth.defined_on(tagged) ? t.truth(tagged).body : s.body;
    }
    j["distributions"][key] = w;
    j["translators"][key] = table;
  }
  return j;
}

TranslationGraph graph_from_json(const Json& j) {
  Violations v;
  std::vector<LanguageId> languages;
  std::vector<GraphEdge> edges;
  if (!j.is_object()) throw SchemaError("graph: expected a JSON object");
  if (!j.contains("languages") || !is_string_array(j["languages"])) {
    v.add("languages: expected an array of strings");
  } else {
    languages = j["languages"].get<std::vector<LanguageId>>();
  }
  if (!j.contains("edges") || !j["edges"].is_array()) {
    v.add("edges: expected an array of {a, b, n}");
  } else {
    for (std::size_t i = 0; i < j["edges"].size(); ++i) {
      const auto& e = j["edges"][i];
      const std::string field = "edges[" + std::to_string(i) + "]";
      if (!e.is_object() || !e.contains("a") || !e["a"].is_string() || !e.contains("b") || !e["b"].is_string()) {
        v.add(field + ": expected string fields a and b");
        continue;
      }
      int n = 0;
      if (e.contains("n")) {
        if (!e["n"].is_number_integer() || e["n"].get<long long>() < 0) {
          v.add(field + ".n: expected a non-negative integer");
          continue;
        }
        n = e["n"].get<int>();
      }
      edges.push_back({e["a"].get<std::string>(), e["b"].get<std::string>(), n});
    }
  }
  v.throw_if_any("graph");
  try {
    return TranslationGraph(languages, edges);
  } catch (const GraphError& e) {
    throw SchemaError(std::string("graph: ") + e.what());
  }
}

Json to_json(const TranslationGraph& g) {
  Json j;
  j["languages"] = g.languages();
  j["edges"] = Json::array();
  for (const auto& e : g.edges()) j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"n", e.samples}});
  return j;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw SchemaError(field + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError(field + ": rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) throw SchemaError(field + ": expected numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw SchemaError(field + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(field + ": expected numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

namespace {

Json spec_json(const FunctionClassSpec& s) {
  return {{"d", s.dim}, {"B", s.ball_radius}, {"rho", s.rho}, {"offset_bound", s.offset_bound}, {"M", s.sup_bound()}};
}

FunctionClassSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("spec: expected an object");
  FunctionClassSpec s;
  try {
    s.dim = j.at("d").get<int>();
    s.ball_radius = j.at("B").get<double>();
    s.rho = j.at("rho").get<double>();
    s.offset_bound = j.at("offset_bound").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("spec: ") + e.what());
  }
  try {
    s.validate();
  } catch (const ArgumentError& e) {
    throw SchemaError(std::string("spec: ") + e.what());
  }
  return s;
}

template <class T>
T field_of(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + "." + key + ": missing");
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(where + "." + key + ": wrong type");
  }
}

}  // namespace

CodecFile codecs_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("codecs: expected a JSON object");
  CodecFile out;
  out.spec = spec_from_json(j.contains("spec") ? j["spec"] : Json());
  out.noise_scale = field_of<double>(j, "sigma", "codecs");
  out.nuisance_dim = field_of<int>(j, "k", "codecs");
  out.seed = j.contains("seed") ? field_of<std::uint64_t>(j, "seed", "codecs") : 0;
  if (!j.contains("languages") || !j["languages"].is_object()) throw SchemaError("codecs.languages: expected an object");
  for (const auto& [lang, c] : j["languages"].items()) {
    const std::string where = "codecs.languages." + lang;
    Matrix w = matrix_from_json(c.contains("W") ? c["W"] : Json(), where + ".W");
    Vector b = vector_from_json(c.contains("b") ? c["b"] : Json(), where + ".b");
    if (w.rows() != out.spec.dim + out.nuisance_dim) throw SchemaError(where + ".W: expected d+k rows");
    try {
      out.codecs.emplace(lang, RandomizedCodec(std::move(w), std::move(b), out.spec.dim, out.noise_scale));
    } catch (const Error& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  return out;
}

Json to_json(const CodecFile& c) {
  Json j;
  j["spec"] = spec_json(c.spec);
  j["sigma"] = c.noise_scale;
  j["k"] = c.nuisance_dim;
  j["seed"] = c.seed;
  j["languages"] = Json::object();
  for (const auto& [lang, codec] : c.codecs) {
    j["languages"][lang] = {{"W", matrix_to_json(codec.w())}, {"b", vector_to_json(codec.b())}};
  }
  return j;
}

AlignedCorpus corpus_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("corpus: expected a JSON object");
  AlignedCorpus c;
  c.source = field_of<std::string>(j, "source", "corpus");
  c.target = field_of<std::string>(j, "target", "corpus");
  const auto shape = field_of<std::vector<long long>>(j, "shape", "corpus");
  if (shape.size() != 3 || shape[1] != 2 || shape[0] < 0 || shape[2] < 1) {
    throw SchemaError("corpus.shape: expected [n, 2, dim]");
  }
  const Json meta = j.contains("metadata") ? j["metadata"] : Json::object();
  c.meta.seed = field_of<std::uint64_t>(meta, "seed", "corpus.metadata");
  c.meta.noise_scale = field_of<double>(meta, "sigma", "corpus.metadata");
  c.meta.nuisance_dim = field_of<int>(meta, "k", "corpus.metadata");
  c.meta.codec_hash = parse_hex64(field_of<std::string>(meta, "codec_hash", "corpus.metadata"), "corpus.metadata.codec_hash");
  if (!j.contains("pairs") || !j["pairs"].is_array() || static_cast<long long>(j["pairs"].size()) != shape[0]) {
    throw SchemaError("corpus.pairs: expected shape[0] pairs");
  }
  c.x.resize(shape[2], shape[0]);
  c.x_prime.resize(shape[2], shape[0]);
  for (std::size_t i = 0; i < j["pairs"].size(); ++i) {
    const auto& p = j["pairs"][i];
    const std::string field = "corpus.pairs[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 2) throw SchemaError(field + ": expected [x, x']");
    const Vector x = vector_from_json(p[0], field);
    const Vector y = vector_from_json(p[1], field);
    if (x.size() != shape[2] || y.size() != shape[2]) throw SchemaError(field + ": wrong dimension");
    c.x.col(static_cast<Eigen::Index>(i)) = x;
    c.x_prime.col(static_cast<Eigen::Index>(i)) = y;
  }
  return c;
}

Json to_json(const AlignedCorpus& c) {
  Json j;
  j["source"] = c.source;
  j["target"] = c.target;
  j["shape"] = {c.size(), 2, c.dim()};
  j["metadata"] = {{"seed", c.meta.seed},
                   {"sigma", c.meta.noise_scale},
                   {"k", c.meta.nuisance_dim},
                   {"codec_hash", hex64(c.meta.codec_hash)}};
  Json pairs = Json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    pairs.push_back({vector_to_json(c.x.col(i)), vector_to_json(c.x_prime.col(i))});
  }
  j["pairs"] = std::move(pairs);
  return j;
}

EncoderEstimate encoders_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("encoders: expected a JSON object");
  EncoderEstimate e;
  if (j.contains("anchor") && !j["anchor"].is_null()) e.anchor = field_of<std::string>(j, "anchor", "encoders");
  if (!j.contains("encoders") || !j["encoders"].is_object()) throw SchemaError("encoders.encoders: expected an object");
  for (const auto& [lang, m] : j["encoders"].items()) {
    const std::string where = "encoders.encoders." + lang;
    try {
      e.encoders.emplace(lang, AffineMap(matrix_from_json(m.contains("W") ? m["W"] : Json(), where + ".W"),
                                         vector_from_json(m.contains("b") ? m["b"] : Json(), where + ".b")));
    } catch (const ArgumentError& err) {
      throw SchemaError(where + ": " + err.what());
    }
  }
  try {
    e.validate();
  } catch (const Error& err) {
    throw SchemaError(std::string("encoders: ") + err.what());
  }
  return e;
}

Json to_json(const EncoderEstimate& e, const FunctionClassSpec& spec) {
  Json j;
  j["anchor"] = e.anchor ? Json(*e.anchor) : Json(nullptr);
  j["encoders"] = Json::object();
  for (const auto& [lang, m] : e.encoders) {
    j["encoders"][lang] = {{"W", matrix_to_json(m.linear())}, {"b", vector_to_json(m.offset())}};
  }
  j["spec"] = spec_json(spec);
  return j;
}

void write_bound_csv(std::ostream& os, const std::vector<BoundReport>& reports) {
  os << "instance_id,epsilon,tv_max,bound_sum,bound_max,bound_avg,bf_value,holds\n";
  for (const auto& r : reports) {
    os << r.instance_id << ',' << format_number(r.epsilon) << ',' << format_number(r.tv_max) << ','
       << format_number(r.bound_sum) << ',' << format_number(r.bound_max) << ',' << format_number(r.bound_avg) << ','
       << (r.brute_force ? format_number(r.brute_force->value) : std::string()) << ','
       << (r.holds() ? "true" : "false") << '\n';
  }
}

void write_edge_loss_csv(std::ostream& os, const std::vector<EdgeRegressionResult>& fits) {
  os << "edge_a,edge_b,n,empirical_loss\n";
  for (const auto& f : fits) {
    os << f.source << ',' << f.target << ',' << f.samples << ',' << format_number(f.empirical_loss) << '\n';
  }
}

void write_pair_eval_csv(std::ostream& os, const std::vector<PairEvalRecord>& records) {
  os << "src,dst,path_len,path,measured_loss,mc_stderr,rho_hat,bound,holds\n";
  for (const auto& r : records) {
    std::string path;
    for (std::size_t i = 0; i < r.path.size(); ++i) path += (i ? ">" : "") + r.path[i];
    os << r.source << ',' << r.target << ',' << r.path_length << ',' << path << ',' << format_number(r.measured_loss)
       << ',' << format_number(r.mc_stderr) << ',' << format_number(r.rho_hat) << ',' << format_number(r.bound) << ','
       << (r.holds ? "true" : "false") << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << "n,trial,empirical_loss,population_loss,gap\n";
  for (const auto& r : sweep.rows) {
    os << r.n << ',' << r.trial << ',' << format_number(r.empirical_loss) << ',' << format_number(r.population_loss)
       << ',' << format_number(r.gap) << '\n';
  }
}

}  // namespace umt
