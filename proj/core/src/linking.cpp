#include "entgraph/linking.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entgraph/corpus.hpp"
#include "entgraph/error.hpp"

namespace entgraph {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

std::string fold_key(std::string_view surface) {
  std::string key;
  for (const auto& tok : tokenize(surface)) {
    if (!key.empty()) key += ' ';
    key += tok.folded;
  }
  return key;
}

}  // namespace

EntityId::EntityId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw ParameterError("entity id must not be empty");
  if (std::any_of(value_.begin(), value_.end(), is_space)) {
    throw ParameterError("entity id '" + value_ + "' contains whitespace");
  }
}

std::optional<EntityId> EntityId::parse(std::string_view value) {
  if (value.empty() || std::any_of(value.begin(), value.end(), is_space)) return std::nullopt;
  return EntityId(std::string(value), Unchecked{});
}

EntitySet::EntitySet(std::vector<EntityId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

EntitySet::EntitySet(std::initializer_list<std::string_view> members) {
  std::vector<EntityId> ids;
  ids.reserve(members.size());
  for (auto m : members) ids.emplace_back(std::string(m));
  *this = EntitySet(std::move(ids));
}

bool EntitySet::contains(const EntityId& e) const {
  return std::binary_search(members_.begin(), members_.end(), e);
}

bool EntitySet::intersects(const EntitySet& other) const {
  auto a = members_.begin();
  auto b = other.members_.begin();
  while (a != members_.end() && b != other.members_.end()) {
    if (*a == *b) return true;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return false;
}

std::string EntitySet::joined() const {
  std::string out;
  for (const auto& m : members_) {
    if (!out.empty()) out += ' ';
    out += m.str();
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    Token tok;
    tok.start = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) {
      char c = text[i];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      tok.folded += c;
      ++i;
    }
    tok.end = i;
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

void Gazetteer::add(std::string_view surface, EntityId entity, double prior) {
  if (!(prior >= 0.0 && prior <= 1.0)) {
    throw ParameterError("prior for '" + std::string(surface) + "' must lie in [0, 1]");
  }
  const auto tokens = tokenize(surface);
  if (tokens.empty()) throw ParameterError("gazetteer surface '" + std::string(surface) + "' is empty");
  auto key = fold_key(surface);
  auto& candidates = entries_[key];
  for (const auto& c : candidates) {
    if (c.entity == entity) {
      throw ParameterError("duplicate gazetteer entry '" + key + "' -> " + entity.str());
    }
  }
  Candidate cand{std::move(entity), prior};
  auto pos = std::lower_bound(candidates.begin(), candidates.end(), cand,
                              [](const Candidate& a, const Candidate& b) {
                                if (a.prior != b.prior) return a.prior > b.prior;
                                return a.entity < b.entity;
                              });
  candidates.insert(pos, std::move(cand));
  max_tokens_ = std::max(max_tokens_, tokens.size());
}

void Gazetteer::validate() const {
  for (const auto& [key, candidates] : entries_) {
    double total = 0.0;
    for (const auto& c : candidates) total += c.prior;
    if (total > 1.0 + 1e-9) {
      throw SchemaError("priors for surface '" + key + "' sum to " + std::to_string(total) + " > 1");
    }
  }
}

std::span<const Candidate> Gazetteer::lookup(std::string_view folded_key) const {
  auto it = entries_.find(std::string(folded_key));
  if (it == entries_.end()) return {};
  return it->second;
}

Gazetteer Gazetteer::load_tsv(std::istream& in) {
  Gazetteer g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    const auto where = "gazetteer line " + std::to_string(line_no) + ": ";
    if (fields.size() != 3) throw ParseError(where + "expected surface<TAB>entity<TAB>prior");
    auto entity = EntityId::parse(fields[1]);
    if (!entity) throw ParseError(where + "invalid entity id '" + fields[1] + "'");
    double prior = 0.0;
    try {
      std::size_t used = 0;
      prior = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw ParseError("trailing characters");
    } catch (const std::exception&) {
      throw ParseError(where + "invalid prior '" + fields[2] + "'");
    }
    try {
      g.add(fields[0], std::move(*entity), prior);
    } catch (const ParameterError& e) {
      throw ParseError(where + e.what());
    }
  }
  g.validate();
  return g;
}

std::vector<Mention> link_text(std::string_view text, const Gazetteer& gazetteer, double min_prior) {
  std::vector<Mention> mentions;
  const auto tokens = tokenize(text);
  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto longest = std::min(gazetteer.max_tokens(), tokens.size() - i);
    std::size_t consumed = 1;
    for (std::size_t len = longest; len >= 1; --len) {
      std::string key = tokens[i].folded;
      for (std::size_t k = 1; k < len; ++k) key += ' ' + tokens[i + k].folded;
      const auto candidates = gazetteer.lookup(key);
      if (candidates.empty()) continue;
      consumed = len;
      const auto& best = candidates.front();
      if (best.prior >= min_prior) {
        const auto start = tokens[i].start;
        const auto end = tokens[i + len - 1].end;
        mentions.push_back(Mention{start, end, std::string(text.substr(start, end - start)),
                                   best.entity, best.prior});
      }
      break;
    }
    i += consumed;
  }
  return mentions;
}

EntitySet to_entity_set(std::span<const Mention> mentions) {
  std::vector<EntityId> ids;
  ids.reserve(mentions.size());
  for (const auto& m : mentions) ids.push_back(m.entity);
  return EntitySet(std::move(ids));
}

EntitySetMap link_corpus(const Corpus& corpus, const Gazetteer& gazetteer, double min_prior) {
  EntitySetMap out;
  for (const auto& thread : corpus.threads()) {
    for (const auto& c : thread.comments()) {
      auto set = to_entity_set(link_text(c.text, gazetteer, min_prior));
      if (!set.empty()) out.insert_or_assign(c.id, std::move(set));
    }
  }
  return out;
}

PrelinkedResult load_prelinked(std::istream& in, const std::set<std::string, std::less<>>* known) {
  using nlohmann::json;
  PrelinkedResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "annotation line " + std::to_string(line_no) + ": ";
    try {
      const auto j = json::parse(line);
      if (!j.is_object()) throw ParseError("record is not an object");
      auto id_it = j.find("comment_id");
      if (id_it == j.end() || !id_it->is_string()) throw ParseError("missing 'comment_id'");
      auto ents_it = j.find("entities");
      if (ents_it == j.end() || !ents_it->is_array()) throw ParseError("missing 'entities' array");
      std::vector<EntityId> ids;
      for (const auto& e : *ents_it) {
        if (!e.is_string()) throw ParseError("entity is not a string");
        auto id = EntityId::parse(e.get_ref<const std::string&>());
        if (!id) throw ParseError("malformed entity id '" + e.get<std::string>() + "'");
        ids.push_back(std::move(*id));
      }
      const auto comment_id = id_it->get<std::string>();
      auto& slot = result.sets[comment_id];
      std::vector<EntityId> merged(slot.begin(), slot.end());
      merged.insert(merged.end(), ids.begin(), ids.end());
      slot = EntitySet(std::move(merged));
    } catch (const std::exception& e) {
      ++result.records_skipped;
      if (result.warnings.size() < 200) result.warnings.push_back(where + e.what());
    }
  }
  if (known != nullptr) {
    for (const auto& [id, set] : result.sets) {
      if (!known->contains(id)) result.unknown_ids.push_back(id);
    }
  }
  return result;
}

void write_annotations(std::ostream& out, const EntitySetMap& sets) {
  using nlohmann::json;
  for (const auto& [id, set] : sets) {
    json ents = json::array();
    for (const auto& e : set) ents.push_back(e.str());
    out << json{{"comment_id", id}, {"entities", std::move(ents)}}.dump() << '\n';
  }
}

void EmbeddingTable::insert(const EntityId& id, std::vector<double> vector) {
  if (vector.empty()) throw ParameterError("embedding for " + id.str() + " is empty");
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw ParameterError("embedding for " + id.str() + " has dimension " +
                         std::to_string(vector.size()) + ", expected " + std::to_string(dimension_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) throw ParameterError("embedding for " + id.str() + " is not finite");
  }
  if (!vectors_.emplace(id, std::move(vector)).second) {
    throw ParameterError("duplicate embedding for " + id.str());
  }
}

const std::vector<double>* EmbeddingTable::find(const EntityId& id) const {
  auto it = vectors_.find(id);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingLoad load_embeddings(std::istream& in, const std::set<EntityId>& expected) {
  EmbeddingLoad load;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(std::move(tok));
    if (tokens.empty()) continue;
    const auto where = "embedding line " + std::to_string(line_no) + ": ";
    if (first) {
      first = false;
      const auto is_count = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
      };
      if (tokens.size() == 2 && is_count(tokens[0]) && is_count(tokens[1])) continue;
    }
    if (tokens.size() < 2) throw ParseError(where + "no vector components");
    std::vector<double> values;
    values.reserve(tokens.size() - 1);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const char* begin = tokens[i].c_str();
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end != begin + tokens[i].size()) throw ParseError(where + "bad number '" + tokens[i] + "'");
      values.push_back(v);
    }
    try {
      load.table.insert(EntityId(tokens[0]), std::move(values));
    } catch (const ParameterError& e) {
      throw ParseError(where + e.what());
    }
  }
  for (const auto& id : expected) {
    if (load.table.find(id) == nullptr) load.missing.push_back(id);
  }
  return load;
}

}  // namespace entgraph
