#pragma once

// Finite probability distributions, deterministic maps between finite sets,
// pushforwards, total variation and 0-1 translation error.

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "umt/errors.hpp"

namespace umt {

using LanguageId = std::string;

inline constexpr double kProbabilityTolerance = 1e-12;

// A sentence is an opaque body tagged with the language it belongs to and,
// in the many-to-many setting, the language it should be translated into.
struct Sentence {
  LanguageId source;
  std::optional<LanguageId> target;
  std::string body;

  friend auto operator<=>(const Sentence&, const Sentence&) = default;
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

Sentence plain_sentence(LanguageId language, std::string body);
Sentence tagged_sentence(LanguageId target, LanguageId source, std::string body);

// "<fr><en>hello" / "<en>hello".
std::string to_string(const Sentence& s);

// A point of a finite representation space Z = {0, ..., |Z|-1}.
struct RepPoint {
  int index = 0;

  friend auto operator<=>(const RepPoint&, const RepPoint&) = default;
  friend bool operator==(const RepPoint&, const RepPoint&) = default;
};

std::string to_string(const RepPoint& z);
inline std::string to_string(int v) { return std::to_string(v); }
inline const std::string& to_string(const std::string& s) { return s; }

template <class Atom>
class FiniteDistribution {
 public:
  FiniteDistribution(std::vector<Atom> support, std::vector<double> weights)
      : support_(std::move(support)), weights_(std::move(weights)) {
    if (support_.size() != weights_.size()) {
      throw ArgumentError("distribution: support and weights differ in length");
    }
    if (support_.empty()) throw ArgumentError("distribution: empty support");
    double total = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
        throw ArgumentError("distribution: negative or non-finite weight");
      }
      total += weights_[i];
      if (!index_.emplace(support_[i], i).second) {
        throw ArgumentError("distribution: duplicate atom " + to_string(support_[i]));
      }
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      throw ArgumentError("distribution: weights sum to " + std::to_string(total));
    }
  }

  static FiniteDistribution point_mass(Atom atom) { return FiniteDistribution({std::move(atom)}, {1.0}); }

  static FiniteDistribution uniform(std::vector<Atom> atoms) {
    std::vector<double> w(atoms.size(), atoms.empty() ? 0.0 : 1.0 / static_cast<double>(atoms.size()));
    return FiniteDistribution(std::move(atoms), std::move(w));
  }

  std::span<const Atom> support() const { return support_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }

  bool contains(const Atom& a) const { return index_.contains(a); }

  // Zero for atoms outside the support.
  double mass(const Atom& a) const {
    auto it = index_.find(a);
    return it == index_.end() ? 0.0 : weights_[it->second];
  }

  double total_mass() const {
    double t = 0.0;
    for (double w : weights_) t += w;
    return t;
  }

  friend bool operator==(const FiniteDistribution& a, const FiniteDistribution& b) {
    return a.support_ == b.support_ && a.weights_ == b.weights_;
  }

 private:
  std::vector<Atom> support_;
  std::vector<double> weights_;
  std::map<Atom, std::size_t> index_;
};

// A total map from a finite domain into some codomain.
template <class From, class To>
class Translator {
 public:
  Translator() = default;
  explicit Translator(std::map<From, To> table) : table_(std::move(table)) {}

  static Translator constant(std::span<const From> domain, const To& value) {
    std::map<From, To> t;
    for (const auto& x : domain) t.emplace(x, value);
    return Translator(std::move(t));
  }

  const To& operator()(const From& x) const {
    auto it = table_.find(x);
    if (it == table_.end()) throw DomainError("translator: not defined on " + to_string(x));
    return it->second;
  }

  bool defined_on(const From& x) const { return table_.contains(x); }
  const std::map<From, To>& table() const { return table_; }

  friend bool operator==(const Translator&, const Translator&) = default;

 private:
  std::map<From, To> table_;
};

template <class A>
using Endomorphism = Translator<A, A>;

// Half-L1 distance over the union of both supports.
template <class Atom>
double tv_distance(const FiniteDistribution<Atom>& p, const FiniteDistribution<Atom>& q) {
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    l1 += std::abs(p.weights()[i] - q.mass(p.support()[i]));
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!p.contains(q.support()[i])) l1 += q.weights()[i];
  }
  return std::clamp(0.5 * l1, 0.0, 1.0);
}

// Output atoms appear in order of first preimage in the support of d.
template <class From, class To>
FiniteDistribution<To> pushforward(const FiniteDistribution<From>& d, const Translator<From, To>& f) {
  std::vector<To> atoms;
  std::vector<double> weights;
  std::map<To, std::size_t> slot;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const To& y = f(d.support()[i]);
    auto [it, inserted] = slot.emplace(y, atoms.size());
    if (inserted) {
      atoms.push_back(y);
      weights.push_back(0.0);
    }
    weights[it->second] += d.weights()[i];
  }
  return FiniteDistribution<To>(std::move(atoms), std::move(weights));
}

// Total D-mass on which f and f_star disagree.
template <class From, class To>
double zero_one_error(const FiniteDistribution<From>& d, const Translator<From, To>& f,
                      const Translator<From, To>& f_star) {
  double err = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (f(d.support()[i]) != f_star(d.support()[i])) err += d.weights()[i];
  }
  return std::min(err, 1.0);
}

struct DisagreementCheck {
  double tv = 0.0;
  double disagreement = 0.0;
  bool holds = true;
};

// TV between two pushforwards never exceeds the mass where the maps disagree.
template <class From, class To>
DisagreementCheck disagreement_bound_check(const FiniteDistribution<From>& d, const Translator<From, To>& f,
                                           const Translator<From, To>& f_prime) {
  DisagreementCheck c;
  c.tv = tv_distance(pushforward(d, f), pushforward(d, f_prime));
  c.disagreement = zero_one_error(d, f, f_prime);
  c.holds = c.tv <= c.disagreement + kProbabilityTolerance;
  return c;
}

struct DataProcessingCheck {
  double before = 0.0;
  double after = 0.0;
  bool holds = true;
};

template <class From, class To>
DataProcessingCheck data_processing_check(const FiniteDistribution<From>& d, const FiniteDistribution<From>& d_prime,
                                          const Translator<From, To>& h) {
  DataProcessingCheck c;
  c.before = tv_distance(d, d_prime);
  c.after = tv_distance(pushforward(d, h), pushforward(d_prime, h));
  c.holds = c.after <= c.before + kProbabilityTolerance;
  return c;
}

// h o g as a table over the domain of g.
template <class A, class B, class C>
Translator<A, C> compose(const Translator<B, C>& h, const Translator<A, B>& g) {
  std::map<A, C> t;
  for (const auto& [x, z] : g.table()) t.emplace(x, h(z));
  return Translator<A, C>(std::move(t));
}

}  // namespace umt
