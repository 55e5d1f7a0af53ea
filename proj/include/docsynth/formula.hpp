#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "random.hpp"

namespace docsynth {

/// Linear formula grammar:
///   expr := atom | expr op expr | ( expr ) | atom ^ digit
///   atom := variable | integer in digitRange
/// depth(atom) = 1; every other production adds one level.
struct FormulaGrammar {
  int maxDepth = 4;
  std::vector<std::string> operators{"+", "−", "×", "/", "="};
  std::vector<std::string> variableSymbols{"x", "y", "z", "a", "b", "c", "n", "k", "α", "β", "θ", "λ"};
  std::pair<int, int> digitRange{0, 99};
  /// Render exponents as U+2070-style superscript digits instead of "^d".
  bool unicodeSuperscripts = true;

  bool valid() const {
    return maxDepth >= 1 && !operators.empty() && !variableSymbols.empty() && digitRange.first <= digitRange.second &&
           digitRange.first >= 0;
  }
};

inline const char* superscript_digit(int d) {
  static constexpr const char* kSup[] = {"⁰", "¹", "²", "³", "⁴",
                                         "⁵", "⁶", "⁷", "⁸", "⁹"};
  return kSup[d];
}

namespace detail {

inline std::string formula_atom(const FormulaGrammar& g, Rng& rng) {
  if (rng.bernoulli(0.6)) return g.variableSymbols[rng.index(g.variableSymbols.size())];
  return std::to_string(rng.uniform_int(g.digitRange.first, g.digitRange.second));
}

inline std::string formula_expr(const FormulaGrammar& g, Rng& rng, int depth, bool top) {
  if (depth <= 1) return formula_atom(g, rng);
  static constexpr double kTopWeights[] = {0.0, 0.8, 0.05, 0.15};
  static constexpr double kWeights[] = {0.3, 0.4, 0.15, 0.15};
  switch (rng.weighted(top ? kTopWeights : kWeights)) {
    case 0:
      return formula_atom(g, rng);
    case 1: {
      auto lhs = formula_expr(g, rng, depth - 1, false);
      const auto& op = g.operators[rng.index(g.operators.size())];
      auto rhs = formula_expr(g, rng, depth - 1, false);
      return lhs + " " + op + " " + rhs;
    }
    case 2:
      return "(" + formula_expr(g, rng, depth - 1, false) + ")";
    default: {
      auto base = formula_atom(g, rng);
      const int exponent = rng.uniform_int(2, 9);
      return g.unicodeSuperscripts ? base + superscript_digit(exponent) : base + "^" + std::to_string(exponent);
    }
  }
}

}  // namespace detail

inline std::string generate_formula(const FormulaGrammar& grammar, Rng& rng) {
  if (!grammar.valid()) throw std::invalid_argument("invalid formula grammar");
  return detail::formula_expr(grammar, rng, grammar.maxDepth, true);
}

}  // namespace docsynth
