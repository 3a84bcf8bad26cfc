#pragma once

#include <stdexcept>
#include <string>

namespace nullrig {

// Every failure mode gets its own type so tests can assert on the exact
// condition instead of parsing message text.

struct DomainError : std::runtime_error { using std::runtime_error::runtime_error; };
struct DimensionMismatch : std::runtime_error { using std::runtime_error::runtime_error; };
struct SingularMatrix : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegenerateTwistedMetric : std::runtime_error { using std::runtime_error::runtime_error; };
struct SamplingExhausted : std::runtime_error { using std::runtime_error::runtime_error; };
struct RiggingUndefined : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegenerateScreen : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegenerateAssocMetric : std::runtime_error { using std::runtime_error::runtime_error; };
struct AlphaNotLeafConstant : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegeneratePlane : std::runtime_error { using std::runtime_error::runtime_error; };
struct StencilOutOfDomain : std::runtime_error { using std::runtime_error::runtime_error; };
struct ConfigError : std::runtime_error { using std::runtime_error::runtime_error; };

inline std::string point_str(const double* p, int n) {
    std::string s = "(";
    for (int i = 0; i < n; ++i) {
        if (i) s += ", ";
        s += std::to_string(p[i]);
    }
    return s + ")";
}

}  // namespace nullrig
