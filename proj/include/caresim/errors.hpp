#pragma once

#include <stdexcept>
#include <string>

namespace caresim {

// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define CARESIM_DEFINE_ERROR(Name)                              \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& msg) : Error(msg) {}       \
  }

// Kernel
CARESIM_DEFINE_ERROR(TimeInPast);
CARESIM_DEFINE_ERROR(UnknownEventKind);

// Population
CARESIM_DEFINE_ERROR(InvalidSpec);
CARESIM_DEFINE_ERROR(NoClinicians);

// Care pathway
CARESIM_DEFINE_ERROR(MissingPdf);

// Intervention
CARESIM_DEFINE_ERROR(NegativeTrainings);

// Analysis
CARESIM_DEFINE_ERROR(EmptyDenominator);
CARESIM_DEFINE_ERROR(InsufficientRuns);
CARESIM_DEFINE_ERROR(MissingCluster);
CARESIM_DEFINE_ERROR(SingularDesign);
CARESIM_DEFINE_ERROR(MalformedInterval);
CARESIM_DEFINE_ERROR(MissingEstimate);

// Experiment / IO
CARESIM_DEFINE_ERROR(ConfigError);
CARESIM_DEFINE_ERROR(SchemaError);
CARESIM_DEFINE_ERROR(MissingRuns);

#undef CARESIM_DEFINE_ERROR

}  // namespace caresim
