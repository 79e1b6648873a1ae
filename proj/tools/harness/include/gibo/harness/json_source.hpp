#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gibo::harness {

/// A configuration file could not be used. what() is "<origin>:<line>: <pointer>: <message>".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Whole file as a string; throws ConfigError when it cannot be read.
std::string read_text_file(const std::filesystem::path& path);

/// Parsed JSON document that remembers the line every value started on, so
/// diagnostics can point into the file.
class JsonSource {
 public:
  /// Throws ConfigError with line and column on syntax errors.
  JsonSource(std::string text, std::string origin);

  const nlohmann::json& root() const { return root_; }
  const std::string& origin() const { return origin_; }
  /// Line of the value at `pointer`, or 0 when unknown.
  int line_of(const std::string& pointer) const;

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const;

 private:
  std::string text_;
  std::string origin_;
  nlohmann::json root_;
  std::map<std::string, int> lines_;
};

/// Typed, pointer-aware access to one JSON value of a JsonSource.
class Node {
 public:
  Node(const JsonSource& source, const nlohmann::json& value, std::string pointer)
      : source_(&source), value_(&value), pointer_(std::move(pointer)) {}

  const nlohmann::json& json() const { return *value_; }
  const std::string& pointer() const { return pointer_; }
  [[noreturn]] void fail(const std::string& message) const { source_->fail(pointer_, message); }

  bool is_object() const { return value_->is_object(); }
  bool is_array() const { return value_->is_array(); }
  bool is_string() const { return value_->is_string(); }
  bool is_number() const { return value_->is_number(); }

  bool has(const std::string& key) const { return value_->is_object() && value_->contains(key); }
  Node at(const std::string& key) const;  // fails when missing
  Node at(std::size_t index) const;
  std::size_t size() const { return value_->size(); }
  /// Members in key order.
  std::vector<std::pair<std::string, Node>> members() const;

  Node& expect_object();
  void allow_keys(const std::vector<std::string>& keys) const;

  double number() const;
  double positive() const;
  long long integer() const;
  bool boolean() const;
  std::string string() const;

  double number_or(const std::string& key, double fallback) const;
  double positive_or(const std::string& key, double fallback) const;
  long long integer_or(const std::string& key, long long fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;

 private:
  const JsonSource* source_;
  const nlohmann::json* value_;
  std::string pointer_;
};

}  // namespace gibo::harness
