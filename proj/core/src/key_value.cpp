#include "key_value.hpp"

#include "tkz/error.hpp"

#include <charconv>
#include <sstream>

namespace tkz::detail {

namespace {

[[noreturn]] void bad_value(const KeyValue& kv, const char* expected) {
  throw ParseError("line " + std::to_string(kv.line) + ": key '" + kv.key + "' expects " +
                   expected + ", got '" + kv.value + "'");
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

}  // namespace

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<KeyValue> parse_key_values(std::istream& in, const std::string& source) {
  std::vector<KeyValue> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    KeyValue kv{trim(t.substr(0, eq)), trim(t.substr(eq + 1)), number};
    if (kv.key.empty()) throw ParseError(source + ":" + std::to_string(number) + ": empty key");
    out.push_back(std::move(kv));
  }
  return out;
}

std::size_t parse_size(const KeyValue& kv) {
  std::size_t v = 0;
  if (!parse_number(kv.value, v)) bad_value(kv, "a nonnegative integer");
  return v;
}

std::uint64_t parse_u64(const KeyValue& kv) {
  std::uint64_t v = 0;
  if (!parse_number(kv.value, v)) bad_value(kv, "an unsigned 64-bit integer");
  return v;
}

double parse_double(const KeyValue& kv) {
  double v = 0.0;
  if (!parse_number(kv.value, v)) bad_value(kv, "a number");
  return v;
}

bool parse_bool(const KeyValue& kv) {
  if (kv.value == "true" || kv.value == "1" || kv.value == "yes") return true;
  if (kv.value == "false" || kv.value == "0" || kv.value == "no") return false;
  bad_value(kv, "true or false");
}

std::vector<double> parse_doubles(const KeyValue& kv) {
  std::istringstream in(kv.value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    if (!parse_number(tok, v)) bad_value(kv, "a list of numbers");
    out.push_back(v);
  }
  if (out.empty()) bad_value(kv, "a list of numbers");
  return out;
}

std::vector<std::size_t> parse_index_list(const KeyValue& kv) {
  std::istringstream in(kv.value);
  std::vector<std::size_t> out;
  std::string tok;
  while (in >> tok) {
    const auto dash = tok.find('-');
    std::size_t a = 0, b = 0;
    if (dash == std::string::npos) {
      if (!parse_number(tok, a)) bad_value(kv, "indices or ranges a-b");
      b = a;
    } else if (!parse_number(tok.substr(0, dash), a) ||
               !parse_number(tok.substr(dash + 1), b) || b < a) {
      bad_value(kv, "indices or ranges a-b");
    }
    for (std::size_t i = a; i <= b; ++i) out.push_back(i);
  }
  return out;
}

std::string format_index_list(const std::vector<std::size_t>& idx) {
  std::string out;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && idx[j + 1] == idx[j] + 1) ++j;
    if (!out.empty()) out += ' ';
    out += std::to_string(idx[i]);
    if (j > i) out += '-' + std::to_string(idx[j]);
    i = j + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace tkz::detail
