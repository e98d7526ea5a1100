#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wassmap {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// measure
struct AllZeroImage : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct AxisOutOfRange : Error { using Error::Error; };

// transport
struct NonConvergence : Error { using Error::Error; };
struct UnsupportedInstance : Error { using Error::Error; };
struct MaxIterExceeded : Error { using Error::Error; };

// embedding
struct DimensionTooLarge : Error { using Error::Error; };

// baseline isomap
struct DisconnectedGraph : Error {
  DisconnectedGraph(std::string msg, std::vector<int> sizes)
      : Error(std::move(msg)), component_sizes(std::move(sizes)) {}
  std::vector<int> component_sizes;  // one entry per component, descending
};

// synth
struct EmptyShape : Error { using Error::Error; };
struct NonPositiveDilation : Error { using Error::Error; };

// evalign
struct ShapeMismatch : Error { using Error::Error; };
struct DegenerateLabels : Error { using Error::Error; };

// ingest
struct BadMagic : Error { using Error::Error; };
struct TruncatedFile : Error { using Error::Error; };
struct CountMismatch : Error { using Error::Error; };
struct InsufficientClassSamples : Error { using Error::Error; };

// cli / io
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct MissingArtifacts : Error { using Error::Error; };

}  // namespace wassmap
