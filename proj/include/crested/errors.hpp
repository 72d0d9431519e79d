#pragma once

#include <stdexcept>
#include <string>

namespace crested {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// poset layer
struct CycleError : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct NotAncestralError : Error { using Error::Error; };
struct SizeLimitError : Error { using Error::Error; };

// markov / kron layer
struct DimensionMismatchError : Error { using Error::Error; };
struct NotIrreducibleError : Error { using Error::Error; };
struct NotReversibleError : Error { using Error::Error; };
struct IsolatedVertexError : Error { using Error::Error; };
struct InvalidMeasureError : Error { using Error::Error; };
struct SizeCapError : Error { using Error::Error; };

// crested / insect layer
struct InvalidSpecError : Error { using Error::Error; };
struct DegenerateError : Error { using Error::Error; };

// document parsing (structural problems; math problems use the types above)
struct SchemaError : Error { using Error::Error; };

}  // namespace crested
