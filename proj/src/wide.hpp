// Internal wide-precision helpers shared by the density and moment
// evaluators.  Lives next to the sources on purpose; not part of the
// installed API.
#pragma once

#include <quadmath.h>

#include <vector>

#include "levy/common.hpp"

namespace levy {
namespace wide {

using quad = __float128;

inline quad qabs(quad x) { return x < 0 ? -x : x; }

// Generalized hypergeometric series in quad precision.  Alternating
// arguments cancel like e^{2|x|}; the 1e-34 noise floor keeps the
// combination meaningful up to |x| of roughly 35 per series member.
// Stops once the terms fall below peak * 1e-34 for `window` consecutive
// terms, measured against the largest term seen, not the running sum.
inline quad phyper_q(const std::vector<quad>& up, const std::vector<quad>& low,
                     quad x, int max_terms = 4000, int window = 3) {
    quad sum = 1, term = 1, peak = 1;
    int below = 0;
    for (int n = 0; n < max_terms; ++n) {
        quad ratio = 1;
        bool terminated = false;
        for (quad a : up) {
            quad f = a + n;
            if (f == 0) { terminated = true; break; }
            ratio *= f;
        }
        if (terminated) return sum;
        for (quad b : low) ratio /= (b + n);
        term *= ratio * x / (n + 1);
        sum += term;
        quad mag = qabs(term);
        if (mag > peak) peak = mag;
        if (mag <= peak * quad(1e-34)) {
            if (++below >= window) return sum;
        } else {
            below = 0;
        }
    }
    throw NumericError("phyper_q: series did not settle");
}

}  // namespace wide
}  // namespace levy
