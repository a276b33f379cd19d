#include "apc/data.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <unordered_set>

#include "json.hpp"

namespace apc {

namespace fs = std::filesystem;
using nlohmann::json;

LogFormat parse_log_format(const std::string& tag) {
  if (tag == "ml") return LogFormat::Ml;
  if (tag == "csv") return LogFormat::Csv;
  throw std::runtime_error("unknown input format tag: " + tag);
}

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool parse_timestamp(const std::string& s, std::int64_t* out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end == nullptr || *end != '\0') return false;
  *out = v;
  return true;
}

bool parse_ml_line(const std::string& line, EventRecord* rec) {
  // user::item::rating::timestamp
  auto parts = split(line, "::");
  if (parts.size() != 4) return false;
  if (parts[0].empty() || parts[1].empty()) return false;
  if (!parse_timestamp(parts[3], &rec->timestamp)) return false;
  rec->user = parts[0];
  rec->item = parts[1];
  return true;
}

bool parse_csv_line(const std::string& line, int user_col, int item_col, int ts_col,
                    EventRecord* rec) {
  auto parts = split(line, ",");
  int need = std::max(user_col, std::max(item_col, ts_col));
  if (static_cast<int>(parts.size()) <= need) return false;
  if (parts[user_col].empty() || parts[item_col].empty()) return false;
  if (!parse_timestamp(parts[ts_col], &rec->timestamp)) return false;
  rec->user = parts[user_col];
  rec->item = parts[item_col];
  return true;
}

}  // namespace

EventLog load_events(const std::string& path, LogFormat format) {
  std::ifstream in(path, std::ios::binary);
  APC_REQUIRE(in.good(), "cannot open interaction log: " + path);
  EventLog log;
  std::string line;
  bool header_done = false;
  int user_col = 0, item_col = 1, ts_col = 2;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    if (format == LogFormat::Csv && !header_done) {
      header_done = true;
      auto cols = split(line, ",");
      user_col = item_col = ts_col = -1;
      for (int i = 0; i < static_cast<int>(cols.size()); ++i) {
        if (cols[i] == "user") user_col = i;
        else if (cols[i] == "item") item_col = i;
        else if (cols[i] == "timestamp") ts_col = i;
      }
      APC_REQUIRE(user_col >= 0 && item_col >= 0 && ts_col >= 0,
                  "csv header must name user,item,timestamp columns: " + path);
      continue;
    }
    EventRecord rec;
    bool ok = format == LogFormat::Ml ? parse_ml_line(line, &rec)
                                      : parse_csv_line(line, user_col, item_col, ts_col, &rec);
    if (ok) {
      log.records.push_back(std::move(rec));
    } else {
      ++log.skipped;
    }
  }
  if (log.skipped > 0)
    warn("load_events: skipped " + std::to_string(log.skipped) + " malformed line(s) in " + path);
  return log;
}

EventLog k_core_filter(const EventLog& log, int k, bool single_pass) {
  APC_CHECK(k >= 1, "k_core_filter: k must be >= 1");
  std::vector<char> keep(log.records.size(), 1);
  auto count_pass = [&](bool by_user) {
    std::unordered_map<std::string, int> counts;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
      if (!keep[i]) continue;
      counts[by_user ? log.records[i].user : log.records[i].item]++;
    }
    bool changed = false;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
      if (!keep[i]) continue;
      const auto& key = by_user ? log.records[i].user : log.records[i].item;
      if (counts[key] < k) {
        keep[i] = 0;
        changed = true;
      }
    }
    return changed;
  };

  if (single_pass) {
    count_pass(true);
    count_pass(false);
  } else {
    bool changed = true;
    while (changed) {
      changed = count_pass(true);
      changed = count_pass(false) || changed;
    }
  }

  EventLog out;
  out.skipped = log.skipped;
  for (std::size_t i = 0; i < log.records.size(); ++i)
    if (keep[i]) out.records.push_back(log.records[i]);
  if (out.records.empty()) warn("k_core_filter: result is empty at k=" + std::to_string(k));
  return out;
}

int Catalog::user_id(const std::string& raw) const {
  auto it = user_index.find(raw);
  APC_CHECK(it != user_index.end(), "unknown user id: " + raw);
  return it->second;
}

int Catalog::item_id(const std::string& raw) const {
  auto it = item_index.find(raw);
  APC_CHECK(it != item_index.end(), "unknown item id: " + raw);
  return it->second;
}

std::uint64_t Catalog::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& u : users) h = fnv1a64(u.data(), u.size(), fnv1a64("u", 1, h));
  for (const auto& v : items) h = fnv1a64(v.data(), v.size(), fnv1a64("i", 1, h));
  return h;
}

int InteractionSequence::real_count() const {
  int n = 0;
  for (int v : items)
    if (v != 0) ++n;
  return n;
}

std::vector<int> InteractionSequence::real_items() const {
  std::vector<int> out;
  out.reserve(items.size());
  for (int v : items)
    if (v != 0) out.push_back(v);
  return out;
}

std::pair<SequenceDataset, Catalog> build_split_sequences(const EventLog& log, int T) {
  APC_CHECK(T >= 1, "build_split_sequences: T must be positive");

  // Stable sort by (user, timestamp) keeps input file order on ties.
  std::vector<std::size_t> order(log.records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = log.records[a];
    const auto& rb = log.records[b];
    if (ra.user != rb.user) return ra.user < rb.user;
    return ra.timestamp < rb.timestamp;
  });

  Catalog catalog;
  for (std::size_t idx : order) {
    const auto& r = log.records[idx];
    if (!catalog.user_index.count(r.user)) {
      catalog.user_index.emplace(r.user, catalog.num_users());
      catalog.users.push_back(r.user);
    }
    if (!catalog.item_index.count(r.item)) {
      catalog.item_index.emplace(r.item, catalog.num_items() + 1);
      catalog.items.push_back(r.item);
    }
  }

  SequenceDataset ds;
  ds.max_len = T;
  ds.direction = Direction::Forward;

  std::size_t excluded = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    const std::string& user = log.records[order[i]].user;
    std::vector<int> history;
    while (j < order.size() && log.records[order[j]].user == user) {
      history.push_back(catalog.item_id(log.records[order[j]].item));
      ++j;
    }
    i = j;
    if (history.size() < 3) {
      ++excluded;
      continue;
    }
    InteractionSequence seq;
    seq.user = catalog.user_id(user);
    seq.test_target = history.back();
    seq.valid_target = history[history.size() - 2];
    std::vector<int> train(history.begin(), history.end() - 2);
    if (static_cast<int>(train.size()) > T)
      train.erase(train.begin(), train.end() - T);  // keep the most recent T
    seq.items.assign(static_cast<std::size_t>(T), 0);
    std::copy(train.begin(), train.end(), seq.items.end() - static_cast<long>(train.size()));
    seq.seen = history;
    std::sort(seq.seen.begin(), seq.seen.end());
    seq.seen.erase(std::unique(seq.seen.begin(), seq.seen.end()), seq.seen.end());
    ds.sequences.push_back(std::move(seq));
  }
  std::sort(ds.sequences.begin(), ds.sequences.end(),
            [](const InteractionSequence& a, const InteractionSequence& b) { return a.user < b.user; });
  if (excluded > 0)
    warn("build_split_sequences: excluded " + std::to_string(excluded) +
         " user(s) with fewer than 3 interactions");
  return {std::move(ds), std::move(catalog)};
}

SequenceDataset reverse_dataset(const SequenceDataset& ds) {
  APC_CHECK(ds.direction == Direction::Forward,
            "reverse_dataset: input must be a forward dataset");
  SequenceDataset out;
  out.max_len = ds.max_len;
  out.direction = Direction::Reversed;
  out.sequences.reserve(ds.sequences.size());
  for (const auto& seq : ds.sequences) {
    InteractionSequence rev = seq;
    auto first = std::find_if(rev.items.begin(), rev.items.end(), [](int v) { return v != 0; });
    std::reverse(first, rev.items.end());
    out.sequences.push_back(std::move(rev));
  }
  return out;
}

namespace {

constexpr std::uint32_t kDatasetMagic = 0x41504344u;  // "APCD"
constexpr std::uint32_t kDatasetVersion = 1;
constexpr const char* kDatasetSchema = "apc-dataset-v1";

void put_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  APC_REQUIRE(in.good(), "truncated dataset file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

json targets_json(const SequenceDataset& ds, bool test) {
  json obj = json::object();
  for (const auto& seq : ds.sequences) {
    int t = test ? seq.test_target : seq.valid_target;
    if (t != 0) obj[std::to_string(seq.user)] = t;
  }
  return obj;
}

}  // namespace

void save_dataset(const std::string& dir, const SequenceDataset& ds, const Catalog& catalog) {
  fs::create_directories(dir);

  json cat;
  cat["schema"] = kDatasetSchema;
  cat["users"] = catalog.users;
  cat["items"] = catalog.items;
  cat["max_len"] = ds.max_len;
  cat["direction"] = ds.direction == Direction::Forward ? "forward" : "reversed";
  cat["num_users"] = catalog.num_users();
  cat["num_items"] = catalog.num_items();
  write_text_file(dir + "/catalog.json", cat.dump(2) + "\n");

  std::ofstream out(dir + "/train.bin", std::ios::binary);
  APC_REQUIRE(out.good(), "cannot write " + dir + "/train.bin");
  put_u32(out, kDatasetMagic);
  put_u32(out, kDatasetVersion);
  put_u32(out, ds.direction == Direction::Forward ? 0u : 1u);
  put_u32(out, static_cast<std::uint32_t>(ds.sequences.size()));
  put_u32(out, static_cast<std::uint32_t>(ds.max_len));
  for (const auto& seq : ds.sequences) {
    put_u32(out, static_cast<std::uint32_t>(seq.user));
    for (int v : seq.items) put_u32(out, static_cast<std::uint32_t>(v));
    put_u32(out, static_cast<std::uint32_t>(seq.seen.size()));
    for (int v : seq.seen) put_u32(out, static_cast<std::uint32_t>(v));
  }
  APC_REQUIRE(out.good(), "short write: " + dir + "/train.bin");
  out.close();

  write_text_file(dir + "/valid.json", targets_json(ds, false).dump(2) + "\n");
  write_text_file(dir + "/test.json", targets_json(ds, true).dump(2) + "\n");
}

std::pair<SequenceDataset, Catalog> load_dataset(const std::string& dir) {
  json cat = json::parse(read_text_file(dir + "/catalog.json"));
  APC_REQUIRE(cat.value("schema", "") == kDatasetSchema,
              "unsupported dataset schema in " + dir + "/catalog.json");
  Catalog catalog;
  catalog.users = cat.at("users").get<std::vector<std::string>>();
  catalog.items = cat.at("items").get<std::vector<std::string>>();
  for (int i = 0; i < catalog.num_users(); ++i) catalog.user_index.emplace(catalog.users[i], i);
  for (int i = 0; i < catalog.num_items(); ++i) catalog.item_index.emplace(catalog.items[i], i + 1);

  SequenceDataset ds;
  std::ifstream in(dir + "/train.bin", std::ios::binary);
  APC_REQUIRE(in.good(), "cannot open " + dir + "/train.bin");
  APC_REQUIRE(get_u32(in) == kDatasetMagic, "bad magic in train.bin");
  APC_REQUIRE(get_u32(in) == kDatasetVersion, "unsupported train.bin version");
  ds.direction = get_u32(in) == 0 ? Direction::Forward : Direction::Reversed;
  std::uint32_t n = get_u32(in);
  ds.max_len = static_cast<int>(get_u32(in));
  ds.sequences.resize(n);
  for (auto& seq : ds.sequences) {
    seq.user = static_cast<int>(get_u32(in));
    seq.items.resize(static_cast<std::size_t>(ds.max_len));
    for (auto& v : seq.items) v = static_cast<int>(get_u32(in));
    seq.seen.resize(get_u32(in));
    for (auto& v : seq.seen) v = static_cast<int>(get_u32(in));
  }

  auto apply_targets = [&](const std::string& path, bool test) {
    json obj = json::parse(read_text_file(path));
    std::unordered_map<int, int> by_user;
    for (auto it = obj.begin(); it != obj.end(); ++it)
      by_user[std::stoi(it.key())] = it.value().get<int>();
    for (auto& seq : ds.sequences) {
      auto hit = by_user.find(seq.user);
      if (hit == by_user.end()) continue;
      (test ? seq.test_target : seq.valid_target) = hit->second;
    }
  };
  apply_targets(dir + "/valid.json", false);
  apply_targets(dir + "/test.json", true);
  return {std::move(ds), std::move(catalog)};
}

}  // namespace apc
