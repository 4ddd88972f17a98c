#include "hsl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "hsl/errors.hpp"

namespace hsl {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) return s.substr(1, s.size() - 2);
  return s;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

// strips a trailing comment that is not inside quotes
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string current;
  std::string line;
  int lineno = 0;
  cfg.sections_[""];
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError("config: unterminated section header", lineno);
      current = trim(body.substr(1, body.size() - 2));
      if (!valid_name(current)) throw ParseError("config: bad section name '" + current + "'", lineno);
      cfg.sections_[current];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("config: expected key = value", lineno);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = unquote(trim(body.substr(eq + 1)));
    if (!valid_name(key)) throw ParseError("config: bad key '" + key + "'", lineno);
    if (value.empty()) throw ParseError("config: empty value for '" + key + "'", lineno);
    auto& sec = cfg.sections_[current];
    if (sec.count(key)) throw ParseError("config: duplicate key '" + key + "'", lineno);
    sec[key] = value;
  }
  return cfg;
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path, 0);
  return parse(in);
}

const ParamMap& Config::section(const std::string& name) const {
  static const ParamMap empty;
  auto it = sections_.find(name);
  return it == sections_.end() ? empty : it->second;
}

std::optional<std::string> Config::get(const std::string& sec, const std::string& key) const {
  const auto& s = section(sec);
  auto it = s.find(key);
  if (it == s.end()) return std::nullopt;
  return it->second;
}

void Config::set(const std::string& sec, const std::string& key, const std::string& value) {
  sections_[sec][key] = value;
}

std::vector<std::string> Config::section_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : sections_) out.push_back(k);
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c)) || c == '[' || c == ']') {
      if (!cur.empty()) out.push_back(unquote(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(unquote(cur));
  return out;
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) throw ParameterError("not a number: '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ParameterError("not a boolean: '" + text + "'");
}

double Params::real(const std::string& key, double fallback) {
  auto it = raw_.find(key);
  const double v = it == raw_.end() ? fallback : parse_real(it->second);
  std::ostringstream os;
  os.precision(17);
  os << v;
  used_[key] = os.str();
  return v;
}

int Params::integer(const std::string& key, int fallback) {
  auto it = raw_.find(key);
  int v = fallback;
  if (it != raw_.end()) {
    const double d = parse_real(it->second);
    if (d != std::floor(d) || std::abs(d) > 1e9) throw ParameterError("not an integer: '" + it->second + "'");
    v = static_cast<int>(d);
  }
  used_[key] = std::to_string(v);
  return v;
}

bool Params::flag(const std::string& key, bool fallback) {
  auto it = raw_.find(key);
  const bool v = it == raw_.end() ? fallback : parse_bool(it->second);
  used_[key] = v ? "true" : "false";
  return v;
}

std::string Params::text(const std::string& key, const std::string& fallback) {
  auto it = raw_.find(key);
  const std::string v = it == raw_.end() ? fallback : it->second;
  used_[key] = v;
  return v;
}

std::vector<double> Params::reals(const std::string& key, const std::vector<double>& fallback) {
  auto it = raw_.find(key);
  std::vector<double> v = fallback;
  if (it != raw_.end()) {
    v.clear();
    for (const auto& s : split_list(it->second)) v.push_back(parse_real(s));
  }
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  used_[key] = os.str();
  return v;
}

}  // namespace hsl
