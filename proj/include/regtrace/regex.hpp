#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace regtrace {

/// An observable event, drawn from a program's declared alphabet.
class Event {
 public:
  Event() = default;
  explicit Event(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  friend auto operator<=>(const Event&, const Event&) = default;
  friend bool operator==(const Event&, const Event&) = default;

 private:
  std::string name_;
};

using Trace = std::vector<Event>;
using Alphabet = std::set<Event>;

std::string trace_to_string(const Trace& trace);

/// Plain regular expression over events, always kept in canonical form:
///
///   - concatenation is right-nested and never has an empty-language or
///     empty-word operand,
///   - choice is a flattened, sorted, duplicate-free set with at least two
///     alternatives and no empty-language member,
///   - star never wraps another star, the empty word or the empty language.
///
/// Under this form the empty language is represented only by `Regex::empty()`,
/// so emptiness is a constant-time check, and two expressions that differ only
/// by reordering or duplication of alternatives compare equal. Values are
/// immutable and cheap to copy.
class Regex {
 public:
  enum class Kind : std::uint8_t { kEmpty, kEpsilon, kSymbol, kConcat, kChoice, kStar };

  /// The empty language.
  Regex();

  static Regex empty();
  static Regex epsilon();
  static Regex symbol(Event event);

  Kind kind() const;
  bool nullable() const;
  bool is_empty() const { return kind() == Kind::kEmpty; }

  /// Number of nodes; used as a size metric by generators and tests.
  std::size_t size() const;
  std::size_t hash() const;

  // Accessors; each requires the matching kind.
  const Event& event() const;
  const Regex& head() const;  // kConcat
  const Regex& tail() const;  // kConcat
  std::span<const Regex> alternatives() const;  // kChoice
  const Regex& body() const;  // kStar

  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Regex& a, const Regex& b);
  friend bool operator==(const Regex& a, const Regex& b);

 private:
  struct Node;
  explicit Regex(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  friend Regex mk_concat(Regex u, Regex v);
  friend Regex mk_choice(std::vector<Regex> us);
  friend Regex mk_star(Regex u);

  std::shared_ptr<const Node> node_;
};

Regex mk_concat(Regex u, Regex v);
Regex mk_choice(std::vector<Regex> us);
Regex mk_choice(Regex u, Regex v);
Regex mk_star(Regex u);
/// Surface `u+`, desugared to u·u*.
Regex mk_plus(Regex u);
/// Left-to-right concatenation of a sequence; epsilon for an empty sequence.
Regex mk_sequence(std::span<const Regex> parts);
Regex mk_word(const Trace& trace);

inline bool nullable(const Regex& u) { return u.nullable(); }
inline bool is_empty(const Regex& u) { return u.is_empty(); }

/// Brzozowski derivative: L(derive(a, u)) = { t | a·t in L(u) }.
Regex derive(const Event& a, const Regex& u);
/// Derivative by a whole word, left to right.
Regex derive(const Trace& word, const Regex& u);

/// Exact set of events that start some word of L(u).
std::set<Event> first(const Regex& u);

/// Events occurring anywhere in u.
Alphabet events_of(const Regex& u);

bool member(const Trace& trace, const Regex& u);

/// One shortest word of L(u), or nullopt if L(u) is empty.
std::optional<Trace> shortest_word(const Regex& u);

struct InclusionResult {
  bool holds = false;
  /// A word in L(u) \ L(v) when the inclusion fails.
  std::optional<Trace> witness;
  /// Number of expression pairs added to the simulation relation.
  std::size_t explored_pairs = 0;

  explicit operator bool() const { return holds; }
};

/// Decides L(u) ⊆ L(v) by building a simulation relation over derivative
/// pairs. Pairs are explored breadth first, so a reported witness is the
/// shortest one reachable through the failing pair.
InclusionResult included(const Regex& u, const Regex& v);

bool equivalent(const Regex& u, const Regex& v);

struct RegexHash {
  std::size_t operator()(const Regex& r) const { return r.hash(); }
};

}  // namespace regtrace
