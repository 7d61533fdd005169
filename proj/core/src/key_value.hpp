#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace tkz::detail {

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// `key = value` lines; blank lines and lines starting with '#' are skipped.
std::vector<KeyValue> parse_key_values(std::istream& in, const std::string& source);

std::string trim(const std::string& s);

std::size_t parse_size(const KeyValue& kv);
std::uint64_t parse_u64(const KeyValue& kv);
double parse_double(const KeyValue& kv);
bool parse_bool(const KeyValue& kv);
std::vector<double> parse_doubles(const KeyValue& kv);
/// Whitespace separated indices or inclusive ranges "a-b".
std::vector<std::size_t> parse_index_list(const KeyValue& kv);
std::string format_index_list(const std::vector<std::size_t>& idx);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace tkz::detail
