#include "stacked/io.hpp"

#include <cctype>
#include <sstream>

namespace stacked {

namespace {

// split at the given separator, respecting parentheses
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

RingMatrix parse_matrix(const RingPtr& ring, const std::string& text) {
  std::string body = strip(text);
  if (body.empty()) throw ParseError("empty matrix literal");
  std::vector<std::string> row_strs = split_top(body, ';');
  std::vector<std::vector<Element>> rows;
  for (const std::string& rs : row_strs) {
    std::vector<Element> row;
    for (const std::string& es : split_top(rs, ','))
      row.push_back(ring->element_parse(strip(es)));
    rows.push_back(std::move(row));
  }
  std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw ParseError("ragged matrix literal");
  RingMatrix m(ring, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
  return m;
}

std::string print_matrix(const RingMatrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ",";
      s += m.ring()->element_to_string(m.at(i, j));
    }
  }
  return s;
}

FinGenIdeal parse_ideal(const RingPtr& ring, const std::string& text) {
  std::string body = strip(text);
  if (body.rfind("ideal(", 0) != 0 || body.back() != ')')
    throw ParseError("ideal literal must be ideal(...)");
  body = body.substr(6, body.size() - 7);
  std::vector<Element> gens;
  for (const std::string& es : split_top(body, ','))
    gens.push_back(ring->element_parse(strip(es)));
  return FinGenIdeal::normalize(ring, std::move(gens));
}

std::string print_vector(const RingPtr& ring, const std::vector<Element>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += ring->element_to_string(v[i]);
  }
  return s;
}

void Report::kv(const std::string& key, const std::string& value) {
  fields_.emplace_back(key, value);
}

std::string Report::machine() const {
  std::ostringstream os;
  os << "stacked-bases-report v1\n";
  os << "command: " << command_ << "\n";
  for (const auto& [k, v] : fields_) os << k << ": " << v << "\n";
  return os.str();
}

std::string Report::text() const {
  std::ostringstream os;
  os << "== " << command_ << " ==\n";
  for (const auto& [k, v] : fields_) os << "  " << k << ": " << v << "\n";
  return os.str();
}

}  // namespace stacked
