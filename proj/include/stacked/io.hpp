#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stacked/ideal.hpp"
#include "stacked/matrix.hpp"
#include "stacked/ring.hpp"

namespace stacked {

// Matrix text format: rows separated by ';', entries by ',' (at paren depth
// zero, so product tuples stay intact), whitespace-insensitive.
RingMatrix parse_matrix(const RingPtr& ring, const std::string& text);
std::string print_matrix(const RingMatrix& m);

// Ideal literal: ideal(g1, g2, ...) with element literals.
FinGenIdeal parse_ideal(const RingPtr& ring, const std::string& text);

std::string print_vector(const RingPtr& ring, const std::vector<Element>& v);

// Line-oriented key-value report with a versioned header; identical inputs
// produce byte-identical output.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}
  void kv(const std::string& key, const std::string& value);
  std::string machine() const;
  std::string text() const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> fields_;
};

}  // namespace stacked
