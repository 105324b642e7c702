#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace rwt {

/// Flat `key = value` text config. `#` starts a comment; blank lines are ignored.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig load(const std::filesystem::path& path);

  void save(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void set(const std::string& key, double value);

  /// Copies every key of `other` over this config.
  void merge(const KeyValueConfig& other);

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rwt
