#pragma once

#include <map>
#include <string>
#include <vector>

#include "dpplab/core/common.hpp"

namespace dpplab {

// Sections of key = value pairs; '#' and ';' start comments.
class Config {
 public:
  static Config parse_string(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& sec, const std::string& key) const;
  std::string get(const std::string& sec, const std::string& key,
                  const std::string& dflt = "") const;
  double get_double(const std::string& sec, const std::string& key, double dflt) const;
  int get_int(const std::string& sec, const std::string& key, int dflt) const;
  std::vector<double> get_doubles(const std::string& sec, const std::string& key) const;
  std::vector<int> get_ints(const std::string& sec, const std::string& key) const;
  // all keys of a section in file order
  std::vector<std::string> keys(const std::string& sec) const;

 private:
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

}  // namespace dpplab
