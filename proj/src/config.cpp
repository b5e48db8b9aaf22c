#include "ctshift/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ctshift {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_number(const std::string& token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

// Scalar token -> typed value; bare words become strings.
ConfigValue parse_scalar(const std::string& token, int line, int col) {
  ConfigValue v;
  v.line = line;
  v.col = col;
  if (token == "true" || token == "false") {
    v.type = ConfigValue::Type::Bool;
    v.boolean = (token == "true");
    return v;
  }
  if (token.size() >= 2 && token.front() == '"' && token.back() == '"') {
    v.type = ConfigValue::Type::String;
    v.str = token.substr(1, token.size() - 2);
    return v;
  }
  double num = 0.0;
  if (parse_number(token, num)) {
    v.type = ConfigValue::Type::Number;
    v.number = num;
    return v;
  }
  // Bare word: allow identifier-ish strings, reject stray punctuation.
  for (char c : token) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
          c == '/')) {
      throw ConfigError("invalid value '" + token + "'", line, col);
    }
  }
  if (token.empty()) throw ConfigError("missing value", line, col);
  v.type = ConfigValue::Type::String;
  v.str = token;
  return v;
}

ConfigValue parse_value(const std::string& raw, int line, int col) {
  std::string token = trim(raw);
  if (token.empty()) throw ConfigError("missing value", line, col);

  if (token.front() == '[') {
    if (token.back() != ']') throw ConfigError("unterminated list", line, col);
    ConfigValue v;
    v.line = line;
    v.col = col;
    std::string body = token.substr(1, token.size() - 2);
    std::vector<ConfigValue> elements;
    if (!trim(body).empty()) {
      std::stringstream ss(body);
      std::string piece;
      while (std::getline(ss, piece, ',')) {
        elements.push_back(parse_scalar(trim(piece), line, col));
      }
    }
    bool all_numbers = true;
    for (const auto& e : elements) {
      if (e.type != ConfigValue::Type::Number) all_numbers = false;
      if (e.type == ConfigValue::Type::Bool) {
        throw ConfigError("booleans are not allowed in lists", line, col);
      }
    }
    if (all_numbers) {
      v.type = ConfigValue::Type::NumberList;
      for (const auto& e : elements) v.numbers.push_back(e.number);
    } else {
      v.type = ConfigValue::Type::StringList;
      for (const auto& e : elements) {
        if (e.type != ConfigValue::Type::String) {
          throw ConfigError("lists must be all numbers or all strings", line, col);
        }
        v.strings.push_back(e.str);
      }
    }
    return v;
  }
  return parse_scalar(token, line, col);
}

}  // namespace

std::string ConfigValue::type_name() const {
  switch (type) {
    case Type::Bool: return "boolean";
    case Type::Number: return "number";
    case Type::String: return "string";
    case Type::NumberList: return "number list";
    case Type::StringList: return "string list";
  }
  return "?";
}

ConfigDoc ConfigDoc::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path.string());
}

ConfigDoc ConfigDoc::parse_string(const std::string& text, const std::string& source_name) {
  ConfigDoc doc;
  doc.source_name_ = source_name;

  std::stringstream ss(text);
  std::string raw_line;
  std::string current_section;
  int line_no = 0;
  while (std::getline(ss, raw_line)) {
    ++line_no;
    std::string line = raw_line;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;

    int col = static_cast<int>(raw_line.find_first_not_of(" \t")) + 1;
    if (stripped.front() == '[' && stripped.back() == ']' &&
        stripped.find(',') == std::string::npos && stripped.find('=') == std::string::npos) {
      current_section = trim(stripped.substr(1, stripped.size() - 2));
      if (current_section.empty()) throw ConfigError("empty section name", line_no, col);
      doc.sections_[current_section];
      continue;
    }

    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value' or '[section]'", line_no, col);
    }
    std::string key = trim(stripped.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", line_no, col);
    if (current_section.empty()) {
      throw ConfigError("key '" + key + "' appears before any [section]", line_no, col);
    }
    int value_col = static_cast<int>(raw_line.find('=')) + 2;
    ConfigValue value = parse_value(stripped.substr(eq + 1), line_no, value_col);
    auto [it, inserted] = doc.sections_[current_section].emplace(key, std::move(value));
    if (!inserted) {
      throw ConfigError("duplicate key '" + key + "' in [" + current_section + "]", line_no, col);
    }
  }
  return doc;
}

const ConfigValue* ConfigDoc::find(const std::string& section, const std::string& key) const {
  auto sit = sections_.find(section);
  if (sit == sections_.end()) return nullptr;
  auto kit = sit->second.find(key);
  return kit == sit->second.end() ? nullptr : &kit->second;
}

bool ConfigDoc::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const ConfigValue& ConfigDoc::fetch(const std::string& section, const std::string& key,
                                    ConfigValue::Type want) const {
  const ConfigValue* v = find(section, key);
  if (!v) throw UsageError("config: missing required key '" + key + "' in [" + section + "]");
  if (v->type != want) {
    ConfigValue expected;
    expected.type = want;
    throw ConfigError("key '" + key + "' in [" + section + "] has type " + v->type_name() +
                          ", expected " + expected.type_name(),
                      v->line, v->col);
  }
  return *v;
}

double ConfigDoc::get_number(const std::string& section, const std::string& key) const {
  return fetch(section, key, ConfigValue::Type::Number).number;
}

double ConfigDoc::get_number_or(const std::string& section, const std::string& key,
                                double fallback) const {
  return has(section, key) ? get_number(section, key) : fallback;
}

long ConfigDoc::get_integer(const std::string& section, const std::string& key) const {
  const ConfigValue& v = fetch(section, key, ConfigValue::Type::Number);
  if (v.number != std::floor(v.number)) {
    throw ConfigError("key '" + key + "' in [" + section + "] must be an integer", v.line, v.col);
  }
  return static_cast<long>(v.number);
}

long ConfigDoc::get_integer_or(const std::string& section, const std::string& key,
                               long fallback) const {
  return has(section, key) ? get_integer(section, key) : fallback;
}

bool ConfigDoc::get_bool_or(const std::string& section, const std::string& key,
                            bool fallback) const {
  if (!has(section, key)) return fallback;
  return fetch(section, key, ConfigValue::Type::Bool).boolean;
}

std::string ConfigDoc::get_string(const std::string& section, const std::string& key) const {
  return fetch(section, key, ConfigValue::Type::String).str;
}

std::string ConfigDoc::get_string_or(const std::string& section, const std::string& key,
                                     const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

std::vector<double> ConfigDoc::get_numbers(const std::string& section,
                                           const std::string& key) const {
  return fetch(section, key, ConfigValue::Type::NumberList).numbers;
}

std::vector<double> ConfigDoc::get_numbers_or(const std::string& section, const std::string& key,
                                              const std::vector<double>& fallback) const {
  return has(section, key) ? get_numbers(section, key) : fallback;
}

std::vector<std::string> ConfigDoc::get_strings_or(
    const std::string& section, const std::string& key,
    const std::vector<std::string>& fallback) const {
  if (!has(section, key)) return fallback;
  return fetch(section, key, ConfigValue::Type::StringList).strings;
}

void ConfigDoc::check_known(const std::map<std::string, std::set<std::string>>& schema) const {
  for (const auto& [section, keys] : sections_) {
    auto sit = schema.find(section);
    if (sit == schema.end()) {
      int line = keys.empty() ? 0 : keys.begin()->second.line;
      throw ConfigError("unknown section [" + section + "]", line, 1);
    }
    for (const auto& [key, value] : keys) {
      if (!sit->second.count(key)) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]", value.line,
                          value.col);
      }
    }
  }
}

void ConfigDoc::set_number(const std::string& section, const std::string& key, double value) {
  ConfigValue v;
  v.type = ConfigValue::Type::Number;
  v.number = value;
  sections_[section][key] = v;
}

void ConfigDoc::set_string(const std::string& section, const std::string& key,
                           const std::string& value) {
  ConfigValue v;
  v.type = ConfigValue::Type::String;
  v.str = value;
  sections_[section][key] = v;
}

}  // namespace ctshift
