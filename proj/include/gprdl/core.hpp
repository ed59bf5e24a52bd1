#ifndef GPRDL_CORE_HPP
#define GPRDL_CORE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gprdl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error hierarchy. Every error carries a human-readable message naming the
// offending input; the CLI maps these onto process exit codes.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};
struct InputError : Error {
  using Error::Error;
};
struct FormatError : Error {
  FormatError(const std::string& msg, std::uint64_t offset)
      : Error(msg + " (byte offset " + std::to_string(offset) + ")"),
        byte_offset(offset) {}
  std::uint64_t byte_offset;
};
struct ConvergenceError : Error {
  using Error::Error;
};
struct AnalysisError : Error {
  using Error::Error;
};

// splitmix64: seed scrambler used to derive independent substreams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Stage seeds are hash(global seed, stage name) so every pipeline stage gets
// a reproducible stream without manual seed bookkeeping.
inline std::uint64_t stage_seed(std::uint64_t global_seed, const std::string& stage) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : stage) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return splitmix64(global_seed ^ h);
}

}  // namespace gprdl

#endif
