#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace pcirc {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* circuit construction */

struct cycle_error : error {
  using error::error;
};

struct dangling_child_error : error {
  using error::error;
};

struct polarity_error : error {
  using error::error;
};

struct empty_children_error : error {
  using error::error;
};

struct division_not_allowed : error {
  using error::error;
};

/* evaluation */

struct divide_by_zero : error {
  explicit divide_by_zero(uint32_t node_id)
      : error("division by zero at node n" + std::to_string(node_id)), node(node_id) {}
  uint32_t node;
};

struct non_invertible_weight : error {
  using error::error;
};

/* oracle */

struct term_blowup_error : error {
  explicit term_blowup_error(std::size_t cap_)
      : error("polynomial expansion exceeded term cap " + std::to_string(cap_)), cap(cap_) {}
  std::size_t cap;
};

struct not_a_distribution : error {
  not_a_distribution(const std::string& what, std::optional<uint64_t> subset)
      : error(what), witness_subset(subset) {}
  std::optional<uint64_t> witness_subset;  // assignment mask, bit i-1 <-> variable i
};

/* transformations */

struct semantics_mismatch : error {
  using error::error;
};

struct not_decomposable : error {
  not_decomposable(uint32_t node_id, int var)
      : error("product node n" + std::to_string(node_id) +
              " has children with overlapping scopes (variable x" + std::to_string(var) + ")"),
        node(node_id), variable(var) {}
  uint32_t node;
  int variable;
};

struct not_smooth : error {
  explicit not_smooth(uint32_t node_id)
      : error("sum node n" + std::to_string(node_id) + " has children with unequal scopes"),
        node(node_id) {}
  uint32_t node;
};

struct unscoped_constant : error {
  explicit unscoped_constant(uint32_t node_id)
      : error("constant node n" + std::to_string(node_id) +
              " cannot be assigned a singleton scope"),
        node(node_id) {}
  uint32_t node;
};

struct singular_shift : error {
  using error::error;
};

struct degree_overflow : error {
  using error::error;
};

struct degree_violation : error {
  using error::error;
};

/* io */

struct parse_error : error {
  parse_error(int line_, const std::string& what)
      : error("line " + std::to_string(line_) + ": " + what), line(line_) {}
  int line;
};

}  // namespace pcirc
