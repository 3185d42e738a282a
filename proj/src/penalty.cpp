#include "rstrade/penalty.hpp"

#include <string>

namespace rstrade {

PenaltyFn build_penalty(double eps, const ModelParams& params) {
    if (!(eps > 0.0)) throw DomainError("penalty scale eps must be positive");
    if (!(eps < params.K))
        throw DomainError("penalty scale eps must be below the fee K ("
                          + std::to_string(params.K) + "), got " + std::to_string(eps));
    const double base = (params.mu1 - params.mu2) * (1.0 + params.K) + 1.0;
    PenaltyFn pen;
    pen.eps = eps;
    pen.c1 = base;
    pen.c0 = 2.0 * base;
    return pen;
}

}  // namespace rstrade
