#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace apc {

// Contract violations throw invalid_argument; runtime failures (I/O,
// configuration) throw runtime_error. The CLI maps both to exit code 1.
#define APC_CHECK(cond, msg)                         \
  do {                                               \
    if (!(cond)) throw std::invalid_argument((msg)); \
  } while (0)

#define APC_REQUIRE(cond, msg)                     \
  do {                                             \
    if (!(cond)) throw std::runtime_error((msg)); \
  } while (0)

void warn(const std::string& msg);
void info(const std::string& msg);
void set_quiet(bool quiet);

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull);
std::uint64_t hash_file(const std::string& path);
std::string hex64(std::uint64_t v);

std::uint64_t splitmix64(std::uint64_t x);
// Stable per-subtask seed derivation (seed = hash(global seed, index)).
std::uint64_t derive_seed(std::uint64_t global, std::uint64_t index);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to pre-allocated slots; aggregation stays with the caller so
// reductions are deterministic.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Locale-independent float formatting used for every report we write, so
// identical runs produce byte-identical files.
std::string fmt_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

std::vector<std::string> split(const std::string& s, const std::string& sep);
std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace apc
