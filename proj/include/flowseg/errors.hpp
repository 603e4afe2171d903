#pragma once

#include <stdexcept>

namespace flowseg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A record, node index, or primitive lies outside the grid.
struct OutOfBounds : Error { using Error::Error; };
// Two records cover the same cell in a frame, or two primitives the same node.
struct OverlapError : Error { using Error::Error; };
// Malformed file content; the message carries the line number.
struct ParseError : Error { using Error::Error; };
struct HeaderError : Error { using Error::Error; };
// Declared and actual cell or record counts disagree.
struct CountMismatch : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
// Circular mean requested for perfectly opposed orientations.
struct DegenerateMean : Error { using Error::Error; };
// Fine stage requested but no coarse segment clears the size threshold.
struct NoQualifyingSegments : Error { using Error::Error; };
// Brute-force enumeration would exceed its hard cap.
struct TooLarge : Error { using Error::Error; };
struct MalformedNetwork : Error { using Error::Error; };
// Pairwise term violates the triangle inequality expansion moves rely on.
struct NonMetricPairwise : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace flowseg
