#pragma once

// Minimal TOML-style configuration: [section] headers, key = value lines,
// '#' comments. Values are kept as strings and converted on access.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hsl {

using ParamMap = std::map<std::string, std::string>;

class Config {
public:
  /// ParseError with the offending line on malformed input.
  static Config parse(std::istream& in);
  static Config parse_string(const std::string& text);
  static Config load(const std::string& path);

  /// Keys before the first header live in section "".
  const ParamMap& section(const std::string& name) const;
  bool has_section(const std::string& name) const { return sections_.count(name) != 0; }
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);
  std::vector<std::string> section_names() const;

private:
  std::map<std::string, ParamMap> sections_;
};

/// Typed view over a key-value map. Every key read is recorded so reports can
/// echo the parameters actually used.
class Params {
public:
  Params() = default;
  explicit Params(ParamMap raw) : raw_(std::move(raw)) {}

  double real(const std::string& key, double fallback);
  int integer(const std::string& key, int fallback);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback);

  const ParamMap& used() const { return used_; }
  const ParamMap& raw() const { return raw_; }

private:
  ParamMap raw_;
  ParamMap used_;
};

/// Comma or whitespace separated list.
std::vector<std::string> split_list(const std::string& text);
double parse_real(const std::string& text);
bool parse_bool(const std::string& text);

}  // namespace hsl
