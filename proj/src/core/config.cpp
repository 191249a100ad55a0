#include "dpplab/core/config.hpp"

#include <fstream>
#include <sstream>

namespace dpplab {
namespace {

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']', "config line " + std::to_string(lineno) +
                                      ": unterminated section header");
      section = strip(line.substr(1, line.size() - 2));
      c.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos,
            "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    require(!key.empty(), "config line " + std::to_string(lineno) + ": empty key");
    c.sections_[section].emplace_back(key, val);
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw range_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_string(ss.str());
}

bool Config::has(const std::string& sec, const std::string& key) const {
  const auto it = sections_.find(sec);
  if (it == sections_.end()) return false;
  for (const auto& [k, v] : it->second)
    if (k == key) return true;
  return false;
}

std::string Config::get(const std::string& sec, const std::string& key,
                        const std::string& dflt) const {
  const auto it = sections_.find(sec);
  if (it == sections_.end()) return dflt;
  for (const auto& [k, v] : it->second)
    if (k == key) return v;
  return dflt;
}

double Config::get_double(const std::string& sec, const std::string& key,
                          double dflt) const {
  const std::string v = get(sec, key);
  if (v.empty()) return dflt;
  std::size_t pos = 0;
  const double d = std::stod(v, &pos);
  require(pos == v.size(), "config value " + sec + "." + key + ": not a number");
  return d;
}

int Config::get_int(const std::string& sec, const std::string& key, int dflt) const {
  const std::string v = get(sec, key);
  if (v.empty()) return dflt;
  return static_cast<int>(std::stol(v));
}

std::vector<double> Config::get_doubles(const std::string& sec,
                                        const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(get(sec, key));
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

std::vector<int> Config::get_ints(const std::string& sec,
                                  const std::string& key) const {
  std::vector<int> out;
  std::istringstream in(get(sec, key));
  int v;
  while (in >> v) out.push_back(v);
  return out;
}

std::vector<std::string> Config::keys(const std::string& sec) const {
  std::vector<std::string> out;
  const auto it = sections_.find(sec);
  if (it == sections_.end()) return out;
  for (const auto& [k, v] : it->second) out.push_back(k);
  return out;
}

}  // namespace dpplab
