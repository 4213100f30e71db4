#include "toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "hord/errors.hpp"

namespace hord::detail {

namespace {

using nlohmann::json;

[[noreturn]] void bad(int line, const std::string& what) {
  raise(Errc::ConfigInvalid, "config line " + std::to_string(line) + ": " + what);
}

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Removes a trailing comment, honouring '#' inside quoted strings.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

std::string parse_basic_string(const std::string& s, std::size_t& i, int line) {
  // s[i] == '"'
  std::string out;
  for (++i; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '"') {
      ++i;
      return out;
    }
    if (c == '\\') {
      if (++i >= s.size()) break;
      switch (s[i]) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        default: bad(line, std::string("unsupported escape '\\") + s[i] + "'");
      }
    } else {
      out += c;
    }
  }
  bad(line, "unterminated string");
}

json parse_scalar(const std::string& token, int line) {
  if (token.empty()) bad(line, "missing value");
  if (token == "true") return true;
  if (token == "false") return false;
  const bool looks_float = token.find_first_of(".eE") != std::string::npos ||
                           token == "inf" || token == "-inf" || token == "nan";
  errno = 0;
  char* end = nullptr;
  if (!looks_float) {
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (errno == 0 && end == token.c_str() + token.size()) return v;
  }
  errno = 0;
  const double d = std::strtod(token.c_str(), &end);
  if (errno == 0 && end == token.c_str() + token.size()) return d;
  bad(line, "cannot parse value '" + token + "'");
}

json parse_value(const std::string& raw, int line);

json parse_array(const std::string& raw, int line) {
  // raw starts with '[' and ends with ']'
  json arr = json::array();
  std::string body = strip(raw.substr(1, raw.size() - 2));
  if (body.empty()) return arr;
  std::vector<std::string> items;
  std::string current;
  bool in_string = false;
  bool escaped = false;
  for (const char c : body) {
    if (in_string) {
      current += c;
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
      current += c;
    } else if (c == '[' || c == ']') {
      bad(line, "nested arrays are not supported");
    } else if (c == ',') {
      items.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (in_string) bad(line, "unterminated string");
  items.push_back(current);
  for (const std::string& item : items) {
    const std::string trimmed = strip(item);
    if (trimmed.empty()) bad(line, "empty array element");
    arr.push_back(parse_value(trimmed, line));
  }
  return arr;
}

json parse_value(const std::string& raw, int line) {
  if (raw.front() == '"') {
    std::size_t i = 0;
    const std::string s = parse_basic_string(raw, i, line);
    if (strip(raw.substr(i)).size() != 0) bad(line, "trailing text after string");
    return s;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') bad(line, "arrays must close on the same line");
    return parse_array(raw, line);
  }
  return parse_scalar(raw, line);
}

// A key is either bare ([A-Za-z0-9_-]+) or a quoted string.
std::string parse_key(const std::string& s, std::size_t& i, int line) {
  if (i < s.size() && s[i] == '"') return parse_basic_string(s, i, line);
  std::size_t start = i;
  while (i < s.size() && is_bare_key_char(s[i])) ++i;
  if (i == start) bad(line, "expected a key");
  return s.substr(start, i - start);
}

std::vector<std::string> parse_header_path(const std::string& inner, int line) {
  std::vector<std::string> path;
  std::size_t i = 0;
  while (true) {
    while (i < inner.size() && (inner[i] == ' ' || inner[i] == '\t')) ++i;
    path.push_back(parse_key(inner, i, line));
    while (i < inner.size() && (inner[i] == ' ' || inner[i] == '\t')) ++i;
    if (i == inner.size()) break;
    if (inner[i] != '.') bad(line, "malformed table header");
    ++i;
  }
  return path;
}

json* descend(json& root, const std::vector<std::string>& path, int line) {
  json* cursor = &root;
  for (const std::string& key : path) {
    json& slot = (*cursor)[key];
    if (slot.is_null()) slot = json::object();
    if (slot.is_array()) {
      if (slot.empty()) bad(line, "table array '" + key + "' is empty");
      cursor = &slot.back();
    } else if (slot.is_object()) {
      cursor = &slot;
    } else {
      bad(line, "'" + key + "' is already a value");
    }
  }
  return cursor;
}

}  // namespace

json parse_toml_lite(const std::string& text) {
  json root = json::object();
  json* table = &root;

  std::istringstream in(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string line = strip(strip_comment(raw_line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool is_array = line.size() > 1 && line[1] == '[';
      const std::string closer = is_array ? "]]" : "]";
      if (line.size() < 2 * closer.size() + 1 ||
          line.substr(line.size() - closer.size()) != closer) {
        bad(line_no, "malformed table header");
      }
      const std::string inner = strip(line.substr(
          closer.size(), line.size() - 2 * closer.size()));
      if (inner.empty()) bad(line_no, "empty table header");
      const std::vector<std::string> path = parse_header_path(inner, line_no);

      if (is_array) {
        json* parent = &root;
        if (path.size() > 1) {
          parent = descend(root, {path.begin(), path.end() - 1}, line_no);
        }
        json& slot = (*parent)[path.back()];
        if (slot.is_null()) slot = json::array();
        if (!slot.is_array()) bad(line_no, "'" + path.back() + "' is not a table array");
        slot.push_back(json::object());
        table = &slot.back();
      } else {
        table = descend(root, path, line_no);
      }
      continue;
    }

    std::size_t i = 0;
    const std::string key = parse_key(line, i, line_no);
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size() || line[i] != '=') bad(line_no, "expected '=' after key");
    ++i;
    const std::string value_text = strip(line.substr(i));
    if (value_text.empty()) bad(line_no, "missing value for key '" + key + "'");
    if (table->contains(key)) bad(line_no, "duplicate key '" + key + "'");
    (*table)[key] = parse_value(value_text, line_no);
  }
  return root;
}

}  // namespace hord::detail
