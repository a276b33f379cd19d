#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "apc/util.hpp"

namespace apc {

struct EventRecord {
  std::string user;
  std::string item;
  std::int64_t timestamp = 0;
};

struct EventLog {
  std::vector<EventRecord> records;
  std::size_t skipped = 0;  // malformed lines dropped during parsing
};

enum class LogFormat { Ml, Csv };

LogFormat parse_log_format(const std::string& tag);

// Supported layouts:
//   ml  : user::item::rating::timestamp
//   csv : header "user,item,timestamp" (a rating column is ignored)
EventLog load_events(const std::string& path, LogFormat format);

// Drops users and items with fewer than k interactions. By default iterates
// until a fixed point, since removing an item can push a user below k;
// single_pass does one user pass then one item pass.
EventLog k_core_filter(const EventLog& log, int k, bool single_pass = false);

// Dense id maps over a filtered log. Item index 0 is the pad token and never
// maps to a real item; dense item ids run 1..|V|.
struct Catalog {
  std::vector<std::string> users;            // dense user id -> raw id
  std::vector<std::string> items;            // dense item id - 1 -> raw id
  std::unordered_map<std::string, int> user_index;
  std::unordered_map<std::string, int> item_index;

  int num_users() const { return static_cast<int>(users.size()); }
  int num_items() const { return static_cast<int>(items.size()); }
  int user_id(const std::string& raw) const;
  int item_id(const std::string& raw) const;  // in [1, |V|]
  std::uint64_t hash() const;
};

struct InteractionSequence {
  int user = -1;
  std::vector<int> items;   // exactly T slots, pad = 0, real span contiguous
  int valid_target = 0;     // 0 = absent
  int test_target = 0;      // 0 = absent
  std::vector<int> seen;    // every item the user interacted with (sorted)

  int real_count() const;
  // Real items oldest-first, pads stripped.
  std::vector<int> real_items() const;
};

enum class Direction { Forward, Reversed };

struct SequenceDataset {
  std::vector<InteractionSequence> sequences;
  int max_len = 0;
  Direction direction = Direction::Forward;
};

// Leave-one-out split: per user the last interaction becomes the test target,
// the second-to-last the validation target, the rest the training sequence
// truncated to the most recent T and left-padded. Users with fewer than three
// interactions are excluded with a warning. Ties in timestamps keep input
// file order.
std::pair<SequenceDataset, Catalog> build_split_sequences(const EventLog& log, int T);

// Element-wise reversal of each real-item span; padding stays on the left.
// User ids, split targets and seen sets are preserved.
SequenceDataset reverse_dataset(const SequenceDataset& ds);

// On-disk layout (schema apc-dataset-v1): a directory with catalog.json,
// train.bin, valid.json, test.json. See README for the byte-level format.
void save_dataset(const std::string& dir, const SequenceDataset& ds, const Catalog& catalog);
std::pair<SequenceDataset, Catalog> load_dataset(const std::string& dir);

}  // namespace apc
