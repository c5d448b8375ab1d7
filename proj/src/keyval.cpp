#include "onebit/io/keyval.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace onebit {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* kind) {
  throw ConfigError("config key '" + key + "': cannot parse '" + value +
                    "' as " + kind);
}

}  // namespace

KeyValues KeyValues::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config syntax error at " + path + ":" +
                        std::to_string(lineno) + " (expected key = value)");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw ConfigError("config syntax error at " + path + ":" +
                        std::to_string(lineno) + " (empty key)");
    kv.set(key, trim(t.substr(eq + 1)));
  }
  return kv;
}

void KeyValues::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

bool KeyValues::contains(const std::string& key) const {
  return kv_.count(key) > 0;
}

std::optional<std::string> KeyValues::raw(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return std::nullopt;
  return it->second;
}

std::int64_t KeyValues::get_int(const std::string& key,
                                std::int64_t def) const {
  const auto v = raw(key);
  if (!v) return def;
  std::int64_t out = 0;
  const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size())
    bad_value(key, *v, "integer");
  return out;
}

std::uint64_t KeyValues::get_uint(const std::string& key,
                                  std::uint64_t def) const {
  const auto v = raw(key);
  if (!v) return def;
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size())
    bad_value(key, *v, "unsigned integer");
  return out;
}

double KeyValues::get_real(const std::string& key, double def) const {
  const auto v = raw(key);
  if (!v) return def;
  try {
    std::size_t pos = 0;
    const double out = std::stod(*v, &pos);
    if (pos != v->size()) bad_value(key, *v, "real");
    return out;
  } catch (const std::logic_error&) {
    bad_value(key, *v, "real");
  }
}

bool KeyValues::get_bool(const std::string& key, bool def) const {
  const auto v = raw(key);
  if (!v) return def;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  bad_value(key, *v, "boolean");
}

std::string KeyValues::get_string(const std::string& key,
                                  const std::string& def) const {
  return raw(key).value_or(def);
}

std::vector<double> KeyValues::get_real_list(
    const std::string& key, const std::vector<double>& def) const {
  const auto v = raw(key);
  if (!v) return def;
  std::vector<double> out;
  for (const auto& item : split_list(*v)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) bad_value(key, item, "real list element");
    } catch (const std::logic_error&) {
      bad_value(key, item, "real list element");
    }
  }
  if (out.empty()) bad_value(key, *v, "nonempty list");
  return out;
}

std::vector<std::string> KeyValues::get_string_list(
    const std::string& key, const std::vector<std::string>& def) const {
  const auto v = raw(key);
  if (!v) return def;
  const auto out = split_list(*v);
  if (out.empty()) bad_value(key, *v, "nonempty list");
  return out;
}

std::uint64_t KeyValues::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&h](const std::string& s) {
    for (const unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [key, value] : kv_) {
    mix(key);
    h ^= static_cast<unsigned char>('=');
    h *= 1099511628211ULL;
    mix(value);
    h ^= static_cast<unsigned char>('\n');
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace onebit
