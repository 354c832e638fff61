#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace entgraph {

struct Comment {
  std::string id;
  std::optional<std::string> parent_id;  // empty for the root post
  std::string thread_id;
  std::string author;
  std::string text;
  std::int64_t created_at = 0;
  bool is_root = false;

  friend bool operator==(const Comment&, const Comment&) = default;
};

// One threaded conversation: a root post and the replies reachable from it.
// Comments are stored sorted by id; replies whose ancestry does not reach the
// root (deleted or missing parents, cycles) are kept aside as orphans.
class Thread {
 public:
  // Builds the reply tree from an unordered bag of comments. Throws ParseError when
  // the bag has no root or more than one. Duplicate ids are collapsed deterministically;
  // each collapse appends a note to `warnings` when given.
  static Thread assemble(std::string thread_id, std::vector<Comment> comments,
                         std::vector<std::string>* warnings = nullptr);

  const std::string& id() const { return id_; }
  const Comment& root() const { return comments_[root_]; }
  std::span<const Comment> comments() const { return comments_; }
  std::span<const Comment> orphans() const { return orphans_; }
  std::size_t size() const { return comments_.size(); }

  const Comment* find(std::string_view comment_id) const;
  // Throws NotFoundError for ids that are not part of the tree.
  int depth_of(std::string_view comment_id) const;
  // Children sorted by id.
  std::vector<const Comment*> children_of(std::string_view comment_id) const;
  int max_depth() const;

  // Returns a copy without every comment matching `drop` and the subtrees under them,
  // or nullopt when the root itself is dropped.
  std::optional<Thread> prune(const std::function<bool(const Comment&)>& drop) const;

  friend bool operator==(const Thread&, const Thread&) = default;

 private:
  std::size_t index_of(std::string_view comment_id) const;

  std::string id_;
  std::vector<Comment> comments_;
  std::vector<Comment> orphans_;
  std::vector<int> depth_;
  std::vector<std::vector<std::size_t>> children_;
  std::size_t root_ = 0;
};

class Corpus {
 public:
  Corpus() = default;
  // Threads are re-sorted by id; duplicate thread ids throw ParseError.
  Corpus(std::string label, std::vector<Thread> threads);

  const std::string& label() const { return label_; }
  std::span<const Thread> threads() const { return threads_; }
  std::size_t size() const { return threads_.size(); }
  bool empty() const { return threads_.empty(); }
  const Thread* find(std::string_view thread_id) const;
  std::size_t comment_count() const;
  std::vector<std::string> thread_ids() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::string label_;
  std::vector<Thread> threads_;
};

enum class DumpFormat { reddit_jsonl, canonical_json };

DumpFormat parse_dump_format(std::string_view name);

struct ParseReport {
  Corpus corpus;
  std::size_t records_read = 0;
  std::size_t records_skipped = 0;
  std::size_t orphans = 0;
  std::size_t threads_dropped = 0;
  std::vector<std::string> warnings;
};

// Reads line-delimited records into a Corpus. Malformed lines are skipped and
// counted; a dump that yields no valid thread throws EmptyCorpusError.
// The result does not depend on the order of the input lines.
ParseReport parse_dump(std::istream& in, DumpFormat format, std::string label = {});

// Writes the corpus in the canonical one-thread-per-line form read back by
// parse_dump(..., DumpFormat::canonical_json). Orphans are not written.
void write_canonical(std::ostream& out, const Corpus& corpus);

// Keeps the ceil(fraction * N) threads with the most comments; ties go to the
// smaller thread id.
Corpus filter_top_fraction(const Corpus& corpus, double fraction);

// Drops every comment written by a listed author, together with its replies.
Corpus filter_bots(const Corpus& corpus, const std::set<std::string, std::less<>>& botlist);

// Newline-delimited author names; blank lines and '#' comments are ignored.
std::set<std::string, std::less<>> read_botlist(std::istream& in);

}  // namespace entgraph
