#include "regtrace/regex.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace regtrace {

std::string trace_to_string(const Trace& trace) {
  std::string out = "<";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i) out += ", ";
    out += trace[i].name();
  }
  out += ">";
  return out;
}

struct Regex::Node {
  Kind kind;
  bool nullable = false;
  std::size_t hash = 0;
  std::size_t size = 1;
  Event event;
  // kConcat: {head, tail}; kChoice: alternatives; kStar: {body}.
  std::vector<Regex> children;
};

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Regex::Regex() : Regex(empty()) {}

Regex Regex::empty() {
  static const std::shared_ptr<const Node> node = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kEmpty;
    n->hash = 0x51ed27;
    return n;
  }();
  return Regex(node);
}

Regex Regex::epsilon() {
  static const std::shared_ptr<const Node> node = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kEpsilon;
    n->nullable = true;
    n->hash = 0xe9511;
    return n;
  }();
  return Regex(node);
}

Regex Regex::symbol(Event event) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kSymbol;
  n->hash = hash_combine(0x5f3, std::hash<std::string>{}(event.name()));
  n->event = std::move(event);
  return Regex(std::move(n));
}

Regex::Kind Regex::kind() const { return node_->kind; }
bool Regex::nullable() const { return node_->nullable; }
std::size_t Regex::size() const { return node_->size; }
std::size_t Regex::hash() const { return node_->hash; }

const Event& Regex::event() const {
  assert(kind() == Kind::kSymbol);
  return node_->event;
}
const Regex& Regex::head() const {
  assert(kind() == Kind::kConcat);
  return node_->children[0];
}
const Regex& Regex::tail() const {
  assert(kind() == Kind::kConcat);
  return node_->children[1];
}
std::span<const Regex> Regex::alternatives() const {
  assert(kind() == Kind::kChoice);
  return node_->children;
}
const Regex& Regex::body() const {
  assert(kind() == Kind::kStar);
  return node_->children[0];
}

std::strong_ordering operator<=>(const Regex& a, const Regex& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.kind() != b.kind()) return a.kind() <=> b.kind();
  switch (a.kind()) {
    case Regex::Kind::kEmpty:
    case Regex::Kind::kEpsilon:
      return std::strong_ordering::equal;
    case Regex::Kind::kSymbol:
      return a.event() <=> b.event();
    default:
      break;
  }
  const auto& ac = a.node_->children;
  const auto& bc = b.node_->children;
  return std::lexicographical_compare_three_way(ac.begin(), ac.end(), bc.begin(), bc.end());
}

bool operator==(const Regex& a, const Regex& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

Regex mk_concat(Regex u, Regex v) {
  using Kind = Regex::Kind;
  if (u.is_empty() || v.is_empty()) return Regex::empty();
  if (u.kind() == Kind::kEpsilon) return v;
  if (v.kind() == Kind::kEpsilon) return u;
  if (u.kind() == Kind::kConcat) {
    // Right-nest so that associativity does not produce distinct memo keys.
    return mk_concat(u.head(), mk_concat(u.tail(), std::move(v)));
  }
  auto n = std::make_shared<Regex::Node>();
  n->kind = Kind::kConcat;
  n->nullable = u.nullable() && v.nullable();
  n->size = 1 + u.size() + v.size();
  n->hash = hash_combine(hash_combine(0xc0c, u.hash()), v.hash());
  n->children = {std::move(u), std::move(v)};
  return Regex(std::move(n));
}

Regex mk_choice(std::vector<Regex> us) {
  using Kind = Regex::Kind;
  std::vector<Regex> flat;
  flat.reserve(us.size());
  for (auto& u : us) {
    if (u.is_empty()) continue;
    if (u.kind() == Kind::kChoice) {
      for (const auto& alt : u.alternatives()) flat.push_back(alt);
    } else {
      flat.push_back(std::move(u));
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return Regex::empty();
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Regex::Node>();
  n->kind = Kind::kChoice;
  std::size_t h = 0xc401;
  for (const auto& alt : flat) {
    n->nullable = n->nullable || alt.nullable();
    n->size += alt.size();
    h = hash_combine(h, alt.hash());
  }
  n->hash = h;
  n->children = std::move(flat);
  return Regex(std::move(n));
}

Regex mk_choice(Regex u, Regex v) { return mk_choice(std::vector<Regex>{std::move(u), std::move(v)}); }

Regex mk_star(Regex u) {
  using Kind = Regex::Kind;
  if (u.is_empty() || u.kind() == Kind::kEpsilon) return Regex::epsilon();
  if (u.kind() == Kind::kStar) return u;
  auto n = std::make_shared<Regex::Node>();
  n->kind = Kind::kStar;
  n->nullable = true;
  n->size = 1 + u.size();
  n->hash = hash_combine(0x57a, u.hash());
  n->children = {std::move(u)};
  return Regex(std::move(n));
}

Regex mk_plus(Regex u) {
  Regex star = mk_star(u);
  return mk_concat(std::move(u), std::move(star));
}

Regex mk_sequence(std::span<const Regex> parts) {
  Regex out = Regex::epsilon();
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) out = mk_concat(*it, out);
  return out;
}

Regex mk_word(const Trace& trace) {
  std::vector<Regex> parts;
  parts.reserve(trace.size());
  for (const auto& e : trace) parts.push_back(Regex::symbol(e));
  return mk_sequence(parts);
}

Regex derive(const Event& a, const Regex& u) {
  using Kind = Regex::Kind;
  switch (u.kind()) {
    case Kind::kEmpty:
    case Kind::kEpsilon:
      return Regex::empty();
    case Kind::kSymbol:
      return u.event() == a ? Regex::epsilon() : Regex::empty();
    case Kind::kConcat: {
      Regex left = mk_concat(derive(a, u.head()), u.tail());
      if (!u.head().nullable()) return left;
      return mk_choice(std::move(left), derive(a, u.tail()));
    }
    case Kind::kChoice: {
      std::vector<Regex> parts;
      parts.reserve(u.alternatives().size());
      for (const auto& alt : u.alternatives()) parts.push_back(derive(a, alt));
      return mk_choice(std::move(parts));
    }
    case Kind::kStar:
      return mk_concat(derive(a, u.body()), u);
  }
  throw std::logic_error("derive: unknown regex kind");
}

Regex derive(const Trace& word, const Regex& u) {
  Regex r = u;
  for (const auto& a : word) {
    if (r.is_empty()) break;
    r = derive(a, r);
  }
  return r;
}

namespace {

void collect_first(const Regex& u, std::set<Event>& out) {
  using Kind = Regex::Kind;
  switch (u.kind()) {
    case Kind::kEmpty:
    case Kind::kEpsilon:
      return;
    case Kind::kSymbol:
      out.insert(u.event());
      return;
    case Kind::kConcat:
      collect_first(u.head(), out);
      if (u.head().nullable()) collect_first(u.tail(), out);
      return;
    case Kind::kChoice:
      for (const auto& alt : u.alternatives()) collect_first(alt, out);
      return;
    case Kind::kStar:
      collect_first(u.body(), out);
      return;
  }
}

void collect_events(const Regex& u, Alphabet& out) {
  using Kind = Regex::Kind;
  switch (u.kind()) {
    case Kind::kEmpty:
    case Kind::kEpsilon:
      return;
    case Kind::kSymbol:
      out.insert(u.event());
      return;
    case Kind::kConcat:
      collect_events(u.head(), out);
      collect_events(u.tail(), out);
      return;
    case Kind::kChoice:
      for (const auto& alt : u.alternatives()) collect_events(alt, out);
      return;
    case Kind::kStar:
      collect_events(u.body(), out);
      return;
  }
}

}  // namespace

std::set<Event> first(const Regex& u) {
  // Exact because canonical non-empty expressions have no empty-language
  // subterms.
  std::set<Event> out;
  collect_first(u, out);
  return out;
}

Alphabet events_of(const Regex& u) {
  Alphabet out;
  collect_events(u, out);
  return out;
}

bool member(const Trace& trace, const Regex& u) { return derive(trace, u).nullable(); }

std::optional<Trace> shortest_word(const Regex& u) {
  using Kind = Regex::Kind;
  switch (u.kind()) {
    case Kind::kEmpty:
      return std::nullopt;
    case Kind::kEpsilon:
    case Kind::kStar:
      return Trace{};
    case Kind::kSymbol:
      return Trace{u.event()};
    case Kind::kConcat: {
      auto h = shortest_word(u.head());
      auto t = shortest_word(u.tail());
      if (!h || !t) return std::nullopt;
      h->insert(h->end(), t->begin(), t->end());
      return h;
    }
    case Kind::kChoice: {
      std::optional<Trace> best;
      for (const auto& alt : u.alternatives()) {
        auto w = shortest_word(alt);
        if (w && (!best || w->size() < best->size())) best = std::move(w);
      }
      return best;
    }
  }
  return std::nullopt;
}

namespace {

struct PairKey {
  Regex u;
  Regex v;
  friend bool operator==(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const { return hash_combine(k.u.hash(), k.v.hash()); }
};

}  // namespace

InclusionResult included(const Regex& u, const Regex& v) {
  struct Entry {
    PairKey pair;
    std::ptrdiff_t parent;
    Event via;
  };
  std::vector<Entry> entries;
  std::unordered_set<PairKey, PairKeyHash> gamma;
  std::deque<std::size_t> queue;

  auto path_to = [&](std::size_t index) {
    Trace word;
    for (auto i = static_cast<std::ptrdiff_t>(index); entries[i].parent >= 0; i = entries[i].parent) {
      word.push_back(entries[i].via);
    }
    std::reverse(word.begin(), word.end());
    return word;
  };

  gamma.insert(PairKey{u, v});
  entries.push_back({PairKey{u, v}, -1, Event{}});
  queue.push_back(0);

  InclusionResult result;
  while (!queue.empty()) {
    const std::size_t index = queue.front();
    queue.pop_front();
    const Regex lhs = entries[index].pair.u;
    const Regex rhs = entries[index].pair.v;

    if (rhs.is_empty()) {
      if (lhs.is_empty()) continue;
      Trace word = path_to(index);
      auto rest = shortest_word(lhs);
      word.insert(word.end(), rest->begin(), rest->end());
      result.witness = std::move(word);
      result.explored_pairs = gamma.size();
      return result;
    }
    if (lhs.nullable() && !rhs.nullable()) {
      result.witness = path_to(index);
      result.explored_pairs = gamma.size();
      return result;
    }
    for (const auto& a : first(lhs)) {
      PairKey next{derive(a, lhs), derive(a, rhs)};
      if (!gamma.insert(next).second) continue;
      entries.push_back({std::move(next), static_cast<std::ptrdiff_t>(index), a});
      queue.push_back(entries.size() - 1);
    }
  }
  result.holds = true;
  result.explored_pairs = gamma.size();
  return result;
}

bool equivalent(const Regex& u, const Regex& v) { return included(u, v).holds && included(v, u).holds; }

// ---------------------------------------------------------------------------
// Printing

namespace {

enum class Prec { kChoice = 0, kConcat = 1, kPostfix = 2 };

void print(const Regex& u, Prec context, std::string& out);

void flatten_concat(const Regex& u, std::vector<Regex>& out) {
  if (u.kind() == Regex::Kind::kConcat) {
    out.push_back(u.head());
    flatten_concat(u.tail(), out);
  } else {
    out.push_back(u);
  }
}

void print_postfix(const Regex& body, char op, std::string& out) {
  print(body, Prec::kPostfix, out);
  out += op;
}

void print(const Regex& u, Prec context, std::string& out) {
  using Kind = Regex::Kind;
  switch (u.kind()) {
    case Kind::kEmpty:
      out += "{}";
      return;
    case Kind::kEpsilon:
      out += "()";
      return;
    case Kind::kSymbol:
      out += u.event().name();
      return;
    case Kind::kStar:
      print_postfix(u.body(), '*', out);
      return;
    case Kind::kChoice: {
      const bool parens = context > Prec::kChoice;
      if (parens) out += '(';
      bool first_alt = true;
      for (const auto& alt : u.alternatives()) {
        if (!first_alt) out += " | ";
        first_alt = false;
        print(alt, Prec::kConcat, out);
      }
      if (parens) out += ')';
      return;
    }
    case Kind::kConcat: {
      std::vector<Regex> factors;
      flatten_concat(u, factors);
      // Fold x x* back into x+ so printed text re-parses to the same term.
      std::vector<std::pair<Regex, bool>> items;  // (regex, is_plus)
      for (const auto& f : factors) {
        if (f.kind() == Kind::kStar) {
          std::vector<Regex> body;
          flatten_concat(f.body(), body);
          if (items.size() >= body.size()) {
            bool match = true;
            for (std::size_t i = 0; i < body.size(); ++i) {
              const auto& item = items[items.size() - body.size() + i];
              if (item.second || !(item.first == body[i])) {
                match = false;
                break;
              }
            }
            if (match) {
              items.resize(items.size() - body.size());
              items.emplace_back(f.body(), true);
              continue;
            }
          }
        }
        items.emplace_back(f, false);
      }
      const bool parens = context > Prec::kConcat && (items.size() > 1 || items.front().second);
      if (parens) out += '(';
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ' ';
        if (items[i].second) {
          print_postfix(items[i].first, '+', out);
        } else {
          print(items[i].first, items.size() > 1 ? Prec::kPostfix : context, out);
        }
      }
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string Regex::to_string() const {
  std::string out;
  print(*this, Prec::kChoice, out);
  return out;
}

}  // namespace regtrace
