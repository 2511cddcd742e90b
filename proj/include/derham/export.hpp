// Basis export grammar.
//
// One basis function per line. A scalar term is `c * x^a y^b z^c [/ F^m ...]`
// with the coefficient printed as `p/q`; pure constants print as `c` alone.
// Terms of a sum are joined by ` + `, vector components by ` | `.

#ifndef DERHAM_EXPORT_HPP
#define DERHAM_EXPORT_HPP

#include <sstream>
#include <string>

#include "derham/ratfun.hpp"

namespace derham {

inline std::string grammar_term(const Exps& e, const Rational& c, int dim,
                                const std::string& den_suffix) {
  static const char* names[3] = {"x", "y", "z"};
  std::ostringstream os;
  os << to_string(c);
  bool any = false;
  std::ostringstream mono;
  for (int a = 0; a < dim; ++a)
    if (e[a] > 0) {
      if (any) mono << " ";
      mono << names[a] << "^" << e[a];
      any = true;
    }
  if (any) os << " * " << mono.str();
  os << den_suffix;
  return os.str();
}

inline std::string to_grammar(const RationalFunction& f) {
  if (f.is_zero()) return "0";
  std::string den;
  for (const auto& [fac, pow] : f.den())
    den += " / " + fac->name + "^" + std::to_string(pow);
  std::string out;
  for (const auto& [e, c] : f.num().terms()) {
    if (!out.empty()) out += " + ";
    out += grammar_term(e, c, f.dim(), den);
  }
  return out;
}

inline std::string to_grammar(const FieldFn& f) {
  std::string out;
  for (int i = 0; i < f.ncomp(); ++i) {
    if (i) out += " | ";
    out += to_grammar(f.comps[i]);
  }
  return out;
}

}  // namespace derham

#endif
