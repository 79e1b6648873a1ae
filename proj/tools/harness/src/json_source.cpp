#include "gibo/harness/json_source.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace gibo::harness {

namespace {

using nlohmann::json;

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

// Walks text that is already known to be valid JSON and records where each value
// starts. Only the structure matters here, so string escapes are decoded loosely.
class LineScanner {
 public:
  LineScanner(std::string_view text, std::map<std::string, int>& lines) : text_(text), lines_(lines) {}

  void run() { value(""); }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        ++pos_;
        switch (text_[pos_]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'u': pos_ += 4; out += '?'; break;
          default: out += text_[pos_]; break;
        }
      } else {
        out += text_[pos_];
      }
      ++pos_;
    }
    ++pos_;  // closing quote
    return out;
  }

  void value(const std::string& pointer) {
    skip_ws();
    if (pos_ >= text_.size()) return;
    lines_.emplace(pointer, line_);
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        value(pointer + "/" + escape_token(key));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      std::size_t index = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(pointer + "/" + std::to_string(index++));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '}' && text_[pos_] != ']' &&
             !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    }
  }

  std::string_view text_;
  std::map<std::string, int>& lines_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

const char* type_name(const json& j) { return j.type_name(); }

}  // namespace

JsonSource::JsonSource(std::string text, std::string origin) : text_(std::move(text)), origin_(std::move(origin)) {
  try {
    root_ = json::parse(text_);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; count lines up to it.
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text_.size());
    int line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < end; ++i) {
      if (text_[i] == '\n') {
        ++line;
        line_start = i + 1;
      }
    }
    throw ConfigError(origin_ + ":" + std::to_string(line) + ":" + std::to_string(end - line_start + 1) +
                      ": JSON syntax error: " + e.what());
  }
  LineScanner(text_, lines_).run();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int JsonSource::line_of(const std::string& pointer) const {
  // Missing members are reported at their closest existing parent.
  std::string p = pointer;
  while (true) {
    if (auto it = lines_.find(p); it != lines_.end()) return it->second;
    if (p.empty()) return 0;
    p.erase(p.rfind('/'));
  }
}

void JsonSource::fail(const std::string& pointer, const std::string& message) const {
  const int line = line_of(pointer);
  std::string where = origin_;
  if (line > 0) where += ":" + std::to_string(line);
  throw ConfigError(where + ": " + (pointer.empty() ? std::string("/") : pointer) + ": " + message);
}

Node Node::at(const std::string& key) const {
  if (!value_->is_object()) fail("expected an object");
  auto it = value_->find(key);
  const std::string child = pointer_ + "/" + escape_token(key);
  if (it == value_->end()) source_->fail(child, "missing required member '" + key + "'");
  return Node(*source_, *it, child);
}

Node Node::at(std::size_t index) const {
  if (!value_->is_array() || index >= value_->size()) fail("index " + std::to_string(index) + " out of range");
  return Node(*source_, (*value_)[index], pointer_ + "/" + std::to_string(index));
}

std::vector<std::pair<std::string, Node>> Node::members() const {
  if (!value_->is_object()) fail("expected an object");
  std::vector<std::pair<std::string, Node>> out;
  for (auto it = value_->begin(); it != value_->end(); ++it) {
    out.emplace_back(it.key(), Node(*source_, it.value(), pointer_ + "/" + escape_token(it.key())));
  }
  return out;
}

Node& Node::expect_object() {
  if (!value_->is_object()) fail(std::string("expected an object, found ") + type_name(*value_));
  return *this;
}

void Node::allow_keys(const std::vector<std::string>& keys) const {
  if (!value_->is_object()) fail(std::string("expected an object, found ") + type_name(*value_));
  for (auto it = value_->begin(); it != value_->end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      std::string allowed;
      for (const auto& k : keys) allowed += (allowed.empty() ? "" : ", ") + k;
      source_->fail(pointer_ + "/" + escape_token(it.key()),
                    "unknown member '" + it.key() + "' (allowed: " + allowed + ")");
    }
  }
}

double Node::number() const {
  if (!value_->is_number()) fail(std::string("expected a number, found ") + type_name(*value_));
  const double v = value_->get<double>();
  if (!std::isfinite(v)) fail("expected a finite number");
  return v;
}

double Node::positive() const {
  const double v = number();
  if (!(v > 0.0)) fail("must be > 0, got " + value_->dump());
  return v;
}

long long Node::integer() const {
  if (!value_->is_number_integer()) fail(std::string("expected an integer, found ") + value_->dump());
  return value_->get<long long>();
}

bool Node::boolean() const {
  if (!value_->is_boolean()) fail(std::string("expected true or false, found ") + type_name(*value_));
  return value_->get<bool>();
}

std::string Node::string() const {
  if (!value_->is_string()) fail(std::string("expected a string, found ") + type_name(*value_));
  return value_->get<std::string>();
}

double Node::number_or(const std::string& key, double fallback) const {
  return has(key) ? at(key).number() : fallback;
}
double Node::positive_or(const std::string& key, double fallback) const {
  return has(key) ? at(key).positive() : fallback;
}
long long Node::integer_or(const std::string& key, long long fallback) const {
  return has(key) ? at(key).integer() : fallback;
}
bool Node::boolean_or(const std::string& key, bool fallback) const {
  return has(key) ? at(key).boolean() : fallback;
}
std::string Node::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key).string() : fallback;
}

}  // namespace gibo::harness
