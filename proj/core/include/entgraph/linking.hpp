#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace entgraph {

class Corpus;

// Canonical knowledge-base page identifier in underscored form, e.g. "Donald_Trump".
class EntityId {
 public:
  // Throws ParameterError for empty ids or ids containing whitespace.
  explicit EntityId(std::string value);
  static std::optional<EntityId> parse(std::string_view value);

  const std::string& str() const { return value_; }

  friend auto operator<=>(const EntityId&, const EntityId&) = default;
  friend bool operator==(const EntityId&, const EntityId&) = default;

 private:
  struct Unchecked {};
  EntityId(std::string value, Unchecked) : value_(std::move(value)) {}
  std::string value_;
};

// The entities linked in one comment: sorted, deduplicated.
// Ordering is lexicographic over the member list.
class EntitySet {
 public:
  EntitySet() = default;
  explicit EntitySet(std::vector<EntityId> members);
  EntitySet(std::initializer_list<std::string_view> members);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  const EntityId& operator[](std::size_t i) const { return members_[i]; }
  std::span<const EntityId> members() const { return members_; }

  bool contains(const EntityId& e) const;
  bool intersects(const EntitySet& other) const;
  // Space-joined member list; unambiguous because ids carry no whitespace.
  std::string joined() const;

  friend auto operator<=>(const EntitySet&, const EntitySet&) = default;
  friend bool operator==(const EntitySet&, const EntitySet&) = default;

 private:
  std::vector<EntityId> members_;
};

// comment id -> linked entity set
using EntitySetMap = std::map<std::string, EntitySet, std::less<>>;

struct Mention {
  std::size_t start = 0;  // byte offsets into the comment text, [start, end)
  std::size_t end = 0;
  std::string surface;
  EntityId entity;
  double confidence = 0.0;
};

struct Token {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string folded;
};

// Splits on anything that is not an ASCII letter/digit; bytes >= 0x80 are kept
// inside tokens so UTF-8 words stay whole. ASCII letters are lower-cased.
std::vector<Token> tokenize(std::string_view text);

struct Candidate {
  EntityId entity;
  double prior = 0.0;
};

// Case-folded surface form -> candidate entities. Surfaces are matched as token
// sequences, so "New  York" and "new york" are the same key.
class Gazetteer {
 public:
  // Throws ParameterError for empty surfaces or priors outside [0, 1].
  void add(std::string_view surface, EntityId entity, double prior);
  // Checks that priors per surface sum to at most 1; throws SchemaError otherwise.
  void validate() const;

  // Candidates ordered by descending prior, then entity id.
  std::span<const Candidate> lookup(std::string_view folded_key) const;
  std::size_t max_tokens() const { return max_tokens_; }
  std::size_t size() const { return entries_.size(); }

  // surface<TAB>entity_id<TAB>prior per line. Blank lines and '#' comments are ignored.
  static Gazetteer load_tsv(std::istream& in);

 private:
  std::unordered_map<std::string, std::vector<Candidate>> entries_;
  std::size_t max_tokens_ = 0;
};

inline constexpr double kDefaultMinPrior = 0.5;

// Greedy longest-match-first, left to right, non-overlapping. The longest surface
// starting at a token claims its span; it yields a mention only when its best
// candidate's prior reaches min_prior.
std::vector<Mention> link_text(std::string_view text, const Gazetteer& gazetteer,
                               double min_prior = kDefaultMinPrior);

EntitySet to_entity_set(std::span<const Mention> mentions);

// Links every retained comment; comments without mentions are omitted.
EntitySetMap link_corpus(const Corpus& corpus, const Gazetteer& gazetteer,
                         double min_prior = kDefaultMinPrior);

struct PrelinkedResult {
  EntitySetMap sets;
  std::vector<std::string> unknown_ids;  // retained, but not present in `known`
  std::size_t records_skipped = 0;
  std::vector<std::string> warnings;
};

// Line-delimited {"comment_id": ..., "entities": [...]} records. Duplicate records
// for one comment are unioned. When `known` is given, ids outside it are flagged.
PrelinkedResult load_prelinked(std::istream& in,
                               const std::set<std::string, std::less<>>* known = nullptr);

void write_annotations(std::ostream& out, const EntitySetMap& sets);

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 0) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  // Throws ParameterError on dimension mismatch or non-finite values.
  void insert(const EntityId& id, std::vector<double> vector);
  const std::vector<double>* find(const EntityId& id) const;

 private:
  std::size_t dimension_;
  std::map<EntityId, std::vector<double>> vectors_;
};

struct EmbeddingLoad {
  EmbeddingTable table;
  std::vector<EntityId> missing;  // expected ids without a vector, sorted
};

// "entity_id v1 ... vd" per line; an optional leading "<count> <dim>" header line
// is skipped. Inconsistent dimensions or non-finite values throw ParseError.
EmbeddingLoad load_embeddings(std::istream& in, const std::set<EntityId>& expected = {});

}  // namespace entgraph

template <>
struct std::hash<entgraph::EntityId> {
  std::size_t operator()(const entgraph::EntityId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
