// Deterministic seeded generation of random rational polynomials for the
// property and commuting sweeps.

#ifndef DERHAM_RNG_HPP
#define DERHAM_RNG_HPP

#include <cstdint>

#include "derham/ratfun.hpp"

namespace derham {

// splitmix64; fixed seed -> fixed stream on every platform
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  long below(long n) { return static_cast<long>(next() % static_cast<std::uint64_t>(n)); }

  // small nonzero-biased rational with numerator in [-9,9], denominator in [1,5]
  Rational rational() {
    long num = below(19) - 9;
    long den = 1 + below(5);
    return rat(num, den);
  }

  Polynomial polynomial(int dim, int degree) {
    Polynomial p(dim);
    for (const auto& e : poly_monos(dim, degree)) p.add_term(e, rational());
    return p;
  }

  FieldFn scalar_field(int dim, int degree) {
    return FieldFn(RationalFunction(polynomial(dim, degree)));
  }

  FieldFn vector_field(int dim, int degree) {
    FieldFn f;
    for (int i = 0; i < dim; ++i) f.comps.emplace_back(polynomial(dim, degree));
    return f;
  }

 private:
  static std::vector<Exps> poly_monos(int dim, int degree) {
    std::vector<Exps> out;
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        if (dim == 1 && b > 0) break;
        for (int c = 0; a + b + c <= degree; ++c) {
          if (dim <= 2 && c > 0) break;
          out.push_back({a, b, c});
        }
      }
    return out;
  }

  std::uint64_t state_;
};

}  // namespace derham

#endif
