#ifndef ENTMEAS_ERRORS_HPP
#define ENTMEAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace entmeas {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define ENTMEAS_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                             \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

ENTMEAS_DEFINE_ERROR(NotSquare);
ENTMEAS_DEFINE_ERROR(NotHermitian);
ENTMEAS_DEFINE_ERROR(NegativeEigenvalue);
ENTMEAS_DEFINE_ERROR(DimensionMismatch);
ENTMEAS_DEFINE_ERROR(NotBipartite);
ENTMEAS_DEFINE_ERROR(NotTwoQubits);
ENTMEAS_DEFINE_ERROR(InvalidWeights);
ENTMEAS_DEFINE_ERROR(OutOfRange);
ENTMEAS_DEFINE_ERROR(NotNormalized);
ENTMEAS_DEFINE_ERROR(InvalidState);
ENTMEAS_DEFINE_ERROR(IncompletePOVM);
ENTMEAS_DEFINE_ERROR(InvalidChannel);
ENTMEAS_DEFINE_ERROR(DimensionTooLarge);
ENTMEAS_DEFINE_ERROR(InvalidEnsemble);

#undef ENTMEAS_DEFINE_ERROR

}  // namespace entmeas

#endif
