#pragma once

#include <string>

namespace patrol {

enum class SolveMethod { closed_m2, closed_odd, closed_m4, numeric };

inline const char* to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::closed_m2: return "closed_m2";
        case SolveMethod::closed_odd: return "closed_odd";
        case SolveMethod::closed_m4: return "closed_m4";
        case SolveMethod::numeric: return "numeric";
    }
    return "unknown";
}

struct SolveDiagnostics {
    int iterations = 0;
    double bracket_width = 0.0;
    // closed-form routes run the numeric optimizer as a cross-check
    double residual_p = 0.0;
    double residual_value = 0.0;
};

struct SolveResult {
    double p_hat = 0.0;
    double r_hat = 0.0;
    double value = 0.0;
    SolveMethod method = SolveMethod::numeric;
    SolveDiagnostics diagnostics;
};

}  // namespace patrol
