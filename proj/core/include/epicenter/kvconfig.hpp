#pragma once

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace epicenter {

/// Flat key=value configuration with '[section]' headers and '#' comments.
/// Sections may repeat and keys inside a section may repeat; order is kept.
struct KvSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;
  std::vector<std::string> get_all(const std::string& key) const;
};

std::vector<KvSection> parse_kv_sections(std::istream& in);
std::vector<KvSection> parse_kv_file(const std::string& path);

}  // namespace epicenter
