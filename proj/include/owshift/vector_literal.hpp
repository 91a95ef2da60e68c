#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "owshift/weights.hpp"

// Grammar (whitespace allowed between tokens):
//
//   literal := "[" [ entry { "," entry } ] "]"
//   entry   := slot ":" sum
//   slot    := digits
//   sum     := [ sign ] term { sign term }
//   term    := coeff "*" basis | coeff | basis
//   coeff   := real [ "i" ] | "(" [ sign ] real [ "i" ] [ sign real [ "i" ] ] ")"
//   basis   := "e" digits | "e(" [ "-" ] digits ")"
//   sign    := "+" | "-"
//   real    := digits [ "." digits ] [ "E" [ sign ] digits ]
//
// The exponent marker is upper-case only, since "e" starts a basis vector.
// A term without a basis vector multiplies e0. Examples: "[0: e0]",
// "[0: 1, 2: (0.5-2i)*e1 + e0]", "[0: e(-3) - 2*e4]".

namespace ows {

class VectorLiteralError : public Error {
 public:
  VectorLiteralError(std::size_t pos, const std::string& what)
      : Error("vector literal, column " + std::to_string(pos + 1) + ": " + what), pos_(pos) {}
  std::size_t position() const noexcept { return pos_; }

 private:
  std::size_t pos_;
};

struct LiteralTerm {
  Index basis = 0;
  Complex coeff = 1.0;
};

struct LiteralSlot {
  Index slot = 0;
  std::vector<LiteralTerm> terms;
};

/// Syntax only; slots come back sorted.
std::vector<LiteralSlot> parse_vector_literal(std::string_view text);

/// Builds the EmbeddedVector for `spec` (basis indices checked against dim).
EmbeddedVector embed_literal(const std::vector<LiteralSlot>& slots, const WeightSpec& spec);
EmbeddedVector parse_embedded_vector(std::string_view text, const WeightSpec& spec);

}  // namespace ows
