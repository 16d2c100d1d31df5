#include "vclose/spec_format.hpp"

#include <fstream>
#include <regex>
#include <sstream>

namespace vclose {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

struct Statement {
  std::string text;
  std::size_t line;
};

// Splits on newlines and on ';' outside quotes, dropping comments.
std::vector<Statement> statements(const std::string& text) {
  std::vector<Statement> out;
  std::string current;
  std::size_t line = 1, start_line = 1;
  bool quoted = false, comment = false;
  auto flush = [&] {
    std::string t = trim(current);
    if (!t.empty()) out.push_back({t, start_line});
    current.clear();
    start_line = line;
  };
  for (char ch : text) {
    if (ch == '\n') {
      if (quoted) throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": unterminated string");
      comment = false;
      flush();
      start_line = ++line;
      continue;
    }
    if (comment) continue;
    if (ch == '"') quoted = !quoted;
    if (!quoted && ch == '#') {
      comment = true;
      continue;
    }
    if (!quoted && ch == ';') {
      flush();
      continue;
    }
    current += ch;
  }
  if (quoted) throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": unterminated string");
  flush();
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::vector<Factor> parse_factors(const std::string& value, std::size_t line) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') fail(line, "factors must be a [...] list");
  std::vector<Factor> out;
  static const std::regex zmod(R"(ZedMod\s*\(\s*(\d+)\s*\))");
  std::stringstream items(value.substr(1, value.size() - 2));
  std::string item;
  while (std::getline(items, item, ',')) {
    item = trim(item);
    std::smatch match;
    if (item == "DInf") {
      out.push_back(Factor::dinf());
    } else if (item == "Zed") {
      out.push_back(Factor::zed());
    } else if (std::regex_match(item, match, zmod)) {
      Integer k(match[1].str());
      if (k < 1) fail(line, "ZedMod modulus must be at least 1");
      out.push_back(Factor::zed_mod(k));
    } else {
      fail(line, "unknown factor '" + item + "'");
    }
  }
  if (out.empty()) fail(line, "no factors");
  return out;
}

std::string parse_string(const std::string& value, std::size_t line) {
  if (value.size() < 2 || value.front() != '"' || value.back() != '"') fail(line, "expected a quoted word");
  return value.substr(1, value.size() - 2);
}

}  // namespace

GroupSpec parse_spec(const std::string& text) {
  const auto stmts = statements(text);
  if (stmts.empty() || stmts[0].text != kSpecHeader)
    throw Error(ErrorCode::ParseError, std::string("missing header line '") + kSpecHeader + "'");

  GroupSpec spec;
  bool have_factors = false, have_a = false, have_b = false;
  std::size_t a_line = 0, b_line = 0;
  for (std::size_t i = 1; i < stmts.size(); ++i) {
    const auto& [s, line] = stmts[i];
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    bool* seen = nullptr;
    if (key == "factors") {
      seen = &have_factors;
      spec.factors = parse_factors(value, line);
    } else if (key == "a") {
      seen = &have_a;
      spec.h_a = parse_string(value, line);
      a_line = line;
    } else if (key == "b") {
      seen = &have_b;
      spec.h_b = parse_string(value, line);
      b_line = line;
    } else {
      fail(line, "unknown key '" + key + "'");
    }
    if (*seen) fail(line, "duplicate key '" + key + "'");
    *seen = true;
  }
  if (!have_factors) throw Error(ErrorCode::ParseError, "missing 'factors'");
  if (!have_a) throw Error(ErrorCode::ParseError, "missing 'a'");
  if (!have_b) throw Error(ErrorCode::ParseError, "missing 'b'");

  const AmbientGroup group(spec.factors);
  try {
    parse_word(spec.h_b, group);
  } catch (const Error& e) {
    fail(b_line, e.what());
  }
  try {
    parse_word(spec.h_a, group);
  } catch (const Error& e) {
    fail(a_line, e.what());
  }
  return spec;
}

GroupSpec read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str());
}

std::string format_spec(const GroupSpec& spec) {
  std::string out = std::string(kSpecHeader) + "\nfactors = [";
  for (std::size_t i = 0; i < spec.factors.size(); ++i) out += (i ? ", " : "") + spec.factors[i].to_string();
  out += "]\nb = \"" + spec.h_b + "\"\na = \"" + spec.h_a + "\"\n";
  return out;
}

}  // namespace vclose
