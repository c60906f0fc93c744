#pragma once

// JSON and CSV serialisation for instances, graphs, codecs, corpora, encoder
// estimates and result tables. Numbers are written in shortest round-trip
// form so that reruns produce byte-identical files.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umt/evaluation.hpp"
#include "umt/generative.hpp"
#include "umt/graph.hpp"
#include "umt/impossibility.hpp"
#include "umt/instances.hpp"
#include "umt/trainer.hpp"

namespace umt {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// A parsed instance file. Two-to-one files (kind "two_to_one", three languages
// with a named target) also populate `two_to_one`.
struct InstanceFile {
  ManyToManyInstance many;
  std::optional<TwoToOneInstance> two_to_one;
};

// Collects every schema violation and throws one SchemaError listing them all.
InstanceFile instance_from_json(const Json& j);
Json to_json(const TwoToOneInstance& inst);
Json to_json(const ManyToManyInstance& inst);

TranslationGraph graph_from_json(const Json& j);
Json to_json(const TranslationGraph& g);

struct CodecFile {
  FunctionClassSpec spec;
  double noise_scale = 0.0;
  int nuisance_dim = 0;
  std::uint64_t seed = 0;
  RandomizedCodecSet codecs;

  LatentDistribution latent() const { return {spec.dim, spec.ball_radius}; }
};

CodecFile codecs_from_json(const Json& j);
Json to_json(const CodecFile& c);

AlignedCorpus corpus_from_json(const Json& j);
Json to_json(const AlignedCorpus& c);

EncoderEstimate encoders_from_json(const Json& j);
Json to_json(const EncoderEstimate& e, const FunctionClassSpec& spec);

Json matrix_to_json(const Matrix& m);  // row-major nested arrays
Matrix matrix_from_json(const Json& j, const std::string& field);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& field);

// Shortest decimal that round-trips (and "nan", "inf", "-inf").
std::string format_number(double x);
std::string hex64(std::uint64_t x);
std::uint64_t parse_hex64(const std::string& s, const std::string& field);

void write_bound_csv(std::ostream& os, const std::vector<BoundReport>& reports);
void write_edge_loss_csv(std::ostream& os, const std::vector<EdgeRegressionResult>& fits);
void write_pair_eval_csv(std::ostream& os, const std::vector<PairEvalRecord>& records);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

}  // namespace umt
