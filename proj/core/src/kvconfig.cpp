#include "epicenter/kvconfig.hpp"

#include <fstream>
#include <stdexcept>

namespace epicenter {

namespace {
std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}
}  // namespace

std::optional<std::string> KvSection::get(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string KvSection::get_or(const std::string& key, const std::string& fallback) const {
  auto v = get(key);
  return v ? *v : fallback;
}

std::string KvSection::require(const std::string& key) const {
  auto v = get(key);
  if (!v) throw std::runtime_error("section [" + name + "] is missing key '" + key + "'");
  return *v;
}

std::vector<std::string> KvSection::get_all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries) {
    if (k == key) out.push_back(v);
  }
  return out;
}

std::vector<KvSection> parse_kv_sections(std::istream& in) {
  std::vector<KvSection> sections;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    if (body.front() == '[') {
      if (body.back() != ']') {
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": unterminated section header");
      }
      sections.push_back({trim(body.substr(1, body.size() - 2)), {}});
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key=value");
    }
    if (sections.empty()) sections.push_back({"", {}});
    sections.back().entries.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  return sections;
}

std::vector<KvSection> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_kv_sections(in);
}

}  // namespace epicenter
