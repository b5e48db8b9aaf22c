#pragma once

#include "ctshift/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ctshift {

// Parse/validation failure with document position; the CLI maps this to
// exit code 2.
struct ConfigError : UsageError {
  ConfigError(const std::string& msg, int line, int col)
      : UsageError(msg + " (line " + std::to_string(line) + ", column " + std::to_string(col) +
                   ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

struct ConfigValue {
  enum class Type { Bool, Number, String, NumberList, StringList };
  Type type = Type::Number;
  bool boolean = false;
  double number = 0.0;
  std::string str;
  std::vector<double> numbers;
  std::vector<std::string> strings;
  int line = 0;
  int col = 0;

  std::string type_name() const;
};

// Config documents are flat sections of `key = value` lines:
//
//   [section]
//   key = 1.5            # number
//   flag = true          # boolean
//   name = reptile       # string (bare or "quoted")
//   grid = [1, 2, 3]     # list of numbers or strings
//
// '#' starts a comment. Keys are unique per section.
class ConfigDoc {
 public:
  using Section = std::map<std::string, ConfigValue>;

  static ConfigDoc parse_file(const std::filesystem::path& path);
  static ConfigDoc parse_string(const std::string& text, const std::string& source_name);

  bool has(const std::string& section, const std::string& key) const;

  double get_number(const std::string& section, const std::string& key) const;
  double get_number_or(const std::string& section, const std::string& key, double fallback) const;
  long get_integer(const std::string& section, const std::string& key) const;
  long get_integer_or(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  std::vector<double> get_numbers(const std::string& section, const std::string& key) const;
  std::vector<double> get_numbers_or(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings_or(const std::string& section, const std::string& key,
                                          const std::vector<std::string>& fallback) const;

  /// Rejects sections/keys not present in the schema.
  void check_known(const std::map<std::string, std::set<std::string>>& schema) const;

  const std::map<std::string, Section>& sections() const { return sections_; }
  const std::string& source_name() const { return source_name_; }

  /// Overwrite (or insert) a value, e.g. for CLI flag overrides.
  void set_number(const std::string& section, const std::string& key, double value);
  void set_string(const std::string& section, const std::string& key, const std::string& value);

 private:
  const ConfigValue& fetch(const std::string& section, const std::string& key,
                           ConfigValue::Type want) const;
  const ConfigValue* find(const std::string& section, const std::string& key) const;

  std::map<std::string, Section> sections_;
  std::string source_name_;
};

}  // namespace ctshift
