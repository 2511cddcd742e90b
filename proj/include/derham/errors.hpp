// Error types shared across the library. Each one corresponds to a named
// failure mode of some operation; verification *verdicts* are never thrown,
// they are recorded in reports.

#ifndef DERHAM_ERRORS_HPP
#define DERHAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace derham {

struct Inconsistent : std::runtime_error {
  explicit Inconsistent(const std::string& m) : std::runtime_error(m) {}
};

struct UnsupportedFactor : std::runtime_error {
  explicit UnsupportedFactor(const std::string& m) : std::runtime_error(m) {}
};

struct DenominatorVanishes : std::runtime_error {
  explicit DenominatorVanishes(const std::string& m) : std::runtime_error(m) {}
};

struct DivergentIntegral : std::runtime_error {
  explicit DivergentIntegral(const std::string& m) : std::runtime_error(m) {}
};

struct SingularMap : std::runtime_error {
  explicit SingularMap(const std::string& m) : std::runtime_error(m) {}
};

struct NonConvex : std::runtime_error {
  explicit NonConvex(const std::string& m) : std::runtime_error(m) {}
};

struct CollinearVertices : std::runtime_error {
  explicit CollinearVertices(const std::string& m) : std::runtime_error(m) {}
};

struct BadSpec : std::runtime_error {
  explicit BadSpec(const std::string& m) : std::runtime_error(m) {}
};

struct IncompatibleElement : std::runtime_error {
  explicit IncompatibleElement(const std::string& m) : std::runtime_error(m) {}
};

struct UnknownFamily : std::runtime_error {
  explicit UnknownFamily(const std::string& m) : std::runtime_error(m) {}
};

struct OverlapNotTrivial : std::runtime_error {
  explicit OverlapNotTrivial(const std::string& m) : std::runtime_error(m) {}
};

struct AdmissibilityViolated : std::runtime_error {
  explicit AdmissibilityViolated(const std::string& m) : std::runtime_error(m) {}
};

struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& m) : std::runtime_error(m) {}
};

struct FacesDoNotMatch : std::runtime_error {
  explicit FacesDoNotMatch(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace derham

#endif
