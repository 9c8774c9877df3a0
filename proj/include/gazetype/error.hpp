#pragma once

#include <stdexcept>
#include <string>

namespace gazetype {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known.
struct ParseError : Error {
    explicit ParseError(const std::string& what, long line_no = -1)
        : Error(line_no >= 0 ? what + " (line " + std::to_string(line_no) + ")" : what),
          line(line_no) {}
    long line;
};

struct NonMonotonicTimestamps : Error { using Error::Error; };
struct GazeAwayFromPlane : Error { using Error::Error; };
struct SegmentTooShort : Error { using Error::Error; };
struct InsufficientDips : Error { using Error::Error; };
struct UnlabeledData : Error { using Error::Error; };
struct DegenerateFeatures : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct DegenerateGaze : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct InsufficientSpread : Error { using Error::Error; };
struct EmptyFixation : Error { using Error::Error; };
struct UnmappableCharacter : Error { using Error::Error; };
struct MissingGroundTruth : Error { using Error::Error; };
struct CheckpointError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace gazetype
