#ifndef HYLEAR_IO_UTIL_HPP_
#define HYLEAR_IO_UTIL_HPP_

#include <stdexcept>
#include <string>

namespace hylear {

// Error categories map to CLI exit codes.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PolicyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal representation; deterministic across runs.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
void ensure_dir(const std::string& path);

}  // namespace hylear

#endif  // HYLEAR_IO_UTIL_HPP_
