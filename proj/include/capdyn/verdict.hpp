#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "capdyn/point.hpp"

namespace capdyn {

enum class Status { certified, refuted, inconclusive };

const char* to_string(Status status);
/// Throws std::invalid_argument on an unknown name.
Status status_from_string(const std::string& name);

/// A block of `length` consecutive iterates starting at `start` in which
/// every sampled displacement is >= epsilon; `min_displacement` is the
/// smallest of them.
struct WindowWitness {
  long start = 0;
  long length = 0;
  double epsilon = 0;
  double min_displacement = 0;
};

/// Two points at distance about `delta` whose n-th iterates are `distance`
/// >= epsilon apart.
struct PairWitness {
  Point x;
  Point y;
  long n = 0;
  double delta = 0;
  double distance = 0;
  double epsilon = 0;
};

/// A cluster representative of an enumerated orbit that the membership
/// oracle rejects.
struct EscapeWitness {
  Point representative;
  std::size_t cluster_size = 0;
};

using Witness = std::variant<WindowWitness, PairWitness, EscapeWitness>;

struct BudgetReport {
  long iterates = 0;
  long samples = 0;
};

/// Outcome of a detector over an infinite quantifier. Certifications are
/// relative to the sample and budget; refutations carry a replayable witness.
struct Verdict {
  std::string detector;
  Status status = Status::inconclusive;
  std::map<std::string, double> certificate;
  std::optional<Witness> witness;
  BudgetReport budget;
  /// Sub-detector responsible for a composite verdict, empty otherwise.
  std::string cause;

  bool certified() const { return status == Status::certified; }
  bool refuted() const { return status == Status::refuted; }
};

}  // namespace capdyn
