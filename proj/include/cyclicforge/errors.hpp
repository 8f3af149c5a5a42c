#pragma once

#include <stdexcept>
#include <string>

namespace cyclicforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateVector : Error { using Error::Error; };
struct DegenerateSide : Error { using Error::Error; };
struct OddVertexCount : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct ParallelSides : Error { using Error::Error; };
struct InvalidPairing : Error { using Error::Error; };
struct SizeLimit : Error { using Error::Error; };
struct InconsistentSystem : Error { using Error::Error; };
struct PlacementExhausted : Error { using Error::Error; };
struct MergeDegenerate : Error { using Error::Error; };
struct AugmentationExhausted : Error { using Error::Error; };

}  // namespace cyclicforge
