#include "entgraph/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "entgraph/error.hpp"

namespace entgraph {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxStoredWarnings = 200;

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings != nullptr && warnings->size() < kMaxStoredWarnings) {
    warnings->push_back(std::move(message));
  }
}

auto comment_key(const Comment& c) {
  return std::tie(c.parent_id, c.author, c.text, c.created_at);
}

// Collapses records sharing an id. Identical copies are silent; conflicting copies
// keep the smallest (parent, author, text, time) tuple so the choice is order-free.
std::vector<Comment> collapse_duplicates(std::vector<Comment> comments, const std::string& thread_id,
                                         std::vector<std::string>* warnings) {
  std::sort(comments.begin(), comments.end(), [](const Comment& a, const Comment& b) {
    if (a.id != b.id) return a.id < b.id;
    return comment_key(a) < comment_key(b);
  });
  std::vector<Comment> unique;
  unique.reserve(comments.size());
  for (auto& c : comments) {
    if (!unique.empty() && unique.back().id == c.id) {
      if (comment_key(unique.back()) != comment_key(c)) {
        warn(warnings, "thread " + thread_id + ": conflicting records for comment " + c.id);
      }
      continue;
    }
    unique.push_back(std::move(c));
  }
  return unique;
}

}  // namespace

Thread Thread::assemble(std::string thread_id, std::vector<Comment> comments,
                        std::vector<std::string>* warnings) {
  comments = collapse_duplicates(std::move(comments), thread_id, warnings);

  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < comments.size(); ++i) {
    comments[i].thread_id = thread_id;
    comments[i].is_root = !comments[i].parent_id.has_value();
    if (comments[i].is_root) roots.push_back(i);
  }
  if (roots.empty()) throw ParseError("thread " + thread_id + " has no root post");
  if (roots.size() > 1) throw ParseError("thread " + thread_id + " has more than one root post");

  std::map<std::string_view, std::size_t> by_id;
  for (std::size_t i = 0; i < comments.size(); ++i) by_id.emplace(comments[i].id, i);

  std::vector<std::vector<std::size_t>> kids(comments.size());
  for (std::size_t i = 0; i < comments.size(); ++i) {
    if (!comments[i].parent_id) continue;
    auto it = by_id.find(*comments[i].parent_id);
    if (it != by_id.end() && it->second != i) kids[it->second].push_back(i);
  }

  // Breadth-first from the root; anything not reached is an orphan.
  std::vector<int> depth(comments.size(), -1);
  std::deque<std::size_t> queue{roots.front()};
  depth[roots.front()] = 0;
  while (!queue.empty()) {
    const auto at = queue.front();
    queue.pop_front();
    for (auto child : kids[at]) {
      if (depth[child] >= 0) continue;
      depth[child] = depth[at] + 1;
      queue.push_back(child);
    }
  }

  Thread thread;
  thread.id_ = std::move(thread_id);
  std::vector<std::size_t> remap(comments.size(), SIZE_MAX);
  for (std::size_t i = 0; i < comments.size(); ++i) {
    if (depth[i] < 0) continue;
    remap[i] = thread.depth_.size();
    thread.depth_.push_back(depth[i]);
  }
  thread.children_.resize(thread.depth_.size());
  for (std::size_t i = 0; i < comments.size(); ++i) {
    if (depth[i] < 0) continue;
    for (auto child : kids[i]) {
      if (remap[child] != SIZE_MAX) thread.children_[remap[i]].push_back(remap[child]);
    }
  }
  for (auto& list : thread.children_) std::sort(list.begin(), list.end());
  thread.root_ = remap[roots.front()];
  for (std::size_t i = 0; i < comments.size(); ++i) {
    if (depth[i] < 0) {
      thread.orphans_.push_back(std::move(comments[i]));
    } else {
      thread.comments_.push_back(std::move(comments[i]));
    }
  }
  return thread;
}

std::size_t Thread::index_of(std::string_view comment_id) const {
  auto it = std::lower_bound(comments_.begin(), comments_.end(), comment_id,
                             [](const Comment& c, std::string_view id) { return c.id < id; });
  if (it == comments_.end() || it->id != comment_id) return SIZE_MAX;
  return static_cast<std::size_t>(it - comments_.begin());
}

const Comment* Thread::find(std::string_view comment_id) const {
  const auto i = index_of(comment_id);
  return i == SIZE_MAX ? nullptr : &comments_[i];
}

int Thread::depth_of(std::string_view comment_id) const {
  const auto i = index_of(comment_id);
  if (i == SIZE_MAX) {
    throw NotFoundError("comment " + std::string(comment_id) + " is not in thread " + id_);
  }
  return depth_[i];
}

std::vector<const Comment*> Thread::children_of(std::string_view comment_id) const {
  const auto i = index_of(comment_id);
  if (i == SIZE_MAX) {
    throw NotFoundError("comment " + std::string(comment_id) + " is not in thread " + id_);
  }
  std::vector<const Comment*> out;
  out.reserve(children_[i].size());
  for (auto child : children_[i]) out.push_back(&comments_[child]);
  return out;
}

int Thread::max_depth() const {
  return depth_.empty() ? 0 : *std::max_element(depth_.begin(), depth_.end());
}

std::optional<Thread> Thread::prune(const std::function<bool(const Comment&)>& drop) const {
  if (drop(root())) return std::nullopt;
  std::vector<Comment> kept;
  std::vector<std::size_t> stack{root_};
  while (!stack.empty()) {
    const auto at = stack.back();
    stack.pop_back();
    kept.push_back(comments_[at]);
    for (auto child : children_[at]) {
      if (!drop(comments_[child])) stack.push_back(child);
    }
  }
  Thread pruned = assemble(id_, std::move(kept));
  pruned.orphans_ = orphans_;
  return pruned;
}

Corpus::Corpus(std::string label, std::vector<Thread> threads)
    : label_(std::move(label)), threads_(std::move(threads)) {
  std::sort(threads_.begin(), threads_.end(),
            [](const Thread& a, const Thread& b) { return a.id() < b.id(); });
  for (std::size_t i = 1; i < threads_.size(); ++i) {
    if (threads_[i - 1].id() == threads_[i].id()) {
      throw ParseError("duplicate thread id " + threads_[i].id() + " in corpus " + label_);
    }
  }
}

const Thread* Corpus::find(std::string_view thread_id) const {
  auto it = std::lower_bound(threads_.begin(), threads_.end(), thread_id,
                             [](const Thread& t, std::string_view id) { return t.id() < id; });
  if (it == threads_.end() || it->id() != thread_id) return nullptr;
  return &*it;
}

std::size_t Corpus::comment_count() const {
  std::size_t total = 0;
  for (const auto& t : threads_) total += t.size();
  return total;
}

std::vector<std::string> Corpus::thread_ids() const {
  std::vector<std::string> ids;
  ids.reserve(threads_.size());
  for (const auto& t : threads_) ids.push_back(t.id());
  return ids;
}

DumpFormat parse_dump_format(std::string_view name) {
  if (name == "reddit-jsonl") return DumpFormat::reddit_jsonl;
  if (name == "canonical-json") return DumpFormat::canonical_json;
  throw ParameterError("unknown dump format '" + std::string(name) +
                       "' (expected reddit-jsonl or canonical-json)");
}

namespace {

// "t1_abc" / "t3_abc" -> "abc"
std::string strip_fullname(std::string_view s) {
  if (s.size() > 3 && s[0] == 't' && std::isdigit(static_cast<unsigned char>(s[1])) && s[2] == '_') {
    s.remove_prefix(3);
  }
  return std::string(s);
}

std::string required_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string() || it->get_ref<const std::string&>().empty()) {
    throw ParseError(std::string("missing or non-string field '") + key + "'");
  }
  return it->get<std::string>();
}

std::string optional_string(const json& j, const char* key, std::string fallback = {}) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_string()) throw ParseError(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

std::int64_t epoch_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return 0;
  if (it->is_number_integer()) return it->get<std::int64_t>();
  if (it->is_number_float()) return static_cast<std::int64_t>(std::floor(it->get<double>()));
  if (it->is_string()) {
    const auto& s = it->get_ref<const std::string&>();
    try {
      std::size_t used = 0;
      const auto value = std::stoll(s, &used);
      if (used == s.size()) return value;
    } catch (const std::exception&) {
    }
  }
  throw ParseError(std::string("field '") + key + "' is not an epoch timestamp");
}

Comment reddit_record(const json& j) {
  Comment c;
  c.id = strip_fullname(required_string(j, "id"));
  c.author = optional_string(j, "author", "[deleted]");
  c.created_at = epoch_field(j, "created_utc");

  std::string parent = strip_fullname(optional_string(j, "parent_id"));
  const bool is_post = parent.empty() || parent == c.id;
  if (is_post) {
    c.thread_id = c.id;
    c.text = optional_string(j, "title");
    const auto self = optional_string(j, "selftext");
    if (!self.empty()) c.text += (c.text.empty() ? "" : "\n\n") + self;
    if (c.text.empty()) c.text = optional_string(j, "body");
    return c;
  }

  auto link = strip_fullname(optional_string(j, "link_id"));
  if (link.empty()) {
    const auto raw_parent = optional_string(j, "parent_id");
    if (raw_parent.rfind("t3_", 0) != 0) throw ParseError("comment has no link_id");
    link = parent;
  }
  c.thread_id = std::move(link);
  c.parent_id = std::move(parent);
  c.text = optional_string(j, "body");
  return c;
}

std::vector<Comment> canonical_record(const json& j) {
  const auto thread_id = required_string(j, "thread_id");
  auto it = j.find("comments");
  if (it == j.end() || !it->is_array()) throw ParseError("missing 'comments' array");
  std::vector<Comment> out;
  for (const auto& entry : *it) {
    if (!entry.is_object()) throw ParseError("comment entry is not an object");
    Comment c;
    c.id = required_string(entry, "id");
    const auto parent = optional_string(entry, "parent_id");
    if (!parent.empty()) c.parent_id = parent;
    c.author = optional_string(entry, "author");
    c.text = optional_string(entry, "text");
    c.created_at = epoch_field(entry, "created_at");
    c.thread_id = thread_id;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

ParseReport parse_dump(std::istream& in, DumpFormat format, std::string label) {
  ParseReport report;
  std::map<std::string, std::vector<Comment>> grouped;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++report.records_read;
    try {
      const auto j = json::parse(line);
      if (!j.is_object()) throw ParseError("record is not a JSON object");
      if (format == DumpFormat::reddit_jsonl) {
        auto c = reddit_record(j);
        grouped[c.thread_id].push_back(std::move(c));
      } else {
        auto comments = canonical_record(j);
        auto& bucket = grouped[required_string(j, "thread_id")];
        for (auto& c : comments) bucket.push_back(std::move(c));
      }
    } catch (const std::exception& e) {
      ++report.records_skipped;
      warn(&report.warnings, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  std::vector<Thread> threads;
  for (auto& [thread_id, comments] : grouped) {
    try {
      auto thread = Thread::assemble(thread_id, std::move(comments), &report.warnings);
      report.orphans += thread.orphans().size();
      threads.push_back(std::move(thread));
    } catch (const ParseError& e) {
      ++report.threads_dropped;
      warn(&report.warnings, e.what());
    }
  }
  if (threads.empty()) {
    throw EmptyCorpusError("dump contains no valid thread (" + std::to_string(report.records_read) +
                           " records read, " + std::to_string(report.records_skipped) + " skipped)");
  }
  report.corpus = Corpus(std::move(label), std::move(threads));
  return report;
}

void write_canonical(std::ostream& out, const Corpus& corpus) {
  for (const auto& thread : corpus.threads()) {
    json comments = json::array();
    for (const auto& c : thread.comments()) {
      comments.push_back({{"id", c.id},
                          {"parent_id", c.parent_id ? json(*c.parent_id) : json(nullptr)},
                          {"author", c.author},
                          {"text", c.text},
                          {"created_at", c.created_at}});
    }
    json record = {{"thread_id", thread.id()}, {"comments", std::move(comments)}};
    out << record.dump() << '\n';
  }
}

Corpus filter_top_fraction(const Corpus& corpus, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ParameterError("top fraction must lie in (0, 1], got " + std::to_string(fraction));
  }
  if (corpus.empty()) throw EmptyCorpusError("cannot filter an empty corpus");

  const auto n = corpus.size();
  // The small slack keeps products like 0.7 * 10 = 7.000000000000001 from rounding up.
  auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  keep = std::clamp<std::size_t>(keep, 1, n);

  std::vector<const Thread*> order;
  for (const auto& t : corpus.threads()) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](const Thread* a, const Thread* b) {
    if (a->size() != b->size()) return a->size() > b->size();
    return a->id() < b->id();
  });
  std::vector<Thread> kept;
  kept.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) kept.push_back(*order[i]);
  return Corpus(corpus.label(), std::move(kept));
}

Corpus filter_bots(const Corpus& corpus, const std::set<std::string, std::less<>>& botlist) {
  if (botlist.empty()) return corpus;
  std::vector<Thread> kept;
  for (const auto& t : corpus.threads()) {
    auto pruned = t.prune([&](const Comment& c) { return botlist.contains(c.author); });
    if (pruned) kept.push_back(std::move(*pruned));
  }
  return Corpus(corpus.label(), std::move(kept));
}

std::set<std::string, std::less<>> read_botlist(std::istream& in) {
  std::set<std::string, std::less<>> names;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    names.insert(line.substr(first, last - first + 1));
  }
  return names;
}

}  // namespace entgraph
