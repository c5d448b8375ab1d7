#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace onebit {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat string key/value store behind the experiment configs. Keys are
// dotted paths (sim.nt, eta.realizations); values are scalars or
// comma-separated lists. Typed getters fall back to a default when the key
// is absent and throw ConfigError when a present value fails to parse.
class KeyValues {
 public:
  // Parses `key = value` lines; blank lines and '#' comments are skipped.
  static KeyValues from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool contains(const std::string& key) const;
  std::optional<std::string> raw(const std::string& key) const;

  std::int64_t get_int(const std::string& key, std::int64_t def) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t def) const;
  double get_real(const std::string& key, double def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::string get_string(const std::string& key,
                         const std::string& def) const;
  std::vector<double> get_real_list(const std::string& key,
                                    const std::vector<double>& def) const;
  std::vector<std::string> get_string_list(
      const std::string& key, const std::vector<std::string>& def) const;

  // FNV-1a over the sorted key=value pairs; stable run identifier.
  std::uint64_t hash() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace onebit
