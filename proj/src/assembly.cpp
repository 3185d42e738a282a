#include "rstrade/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rstrade {

TridiagonalOperator assemble_generator(const ModelParams& params, const Grid& grid) {
    const Index n = grid.n_p;
    const double h = grid.h;

    TridiagonalOperator op;
    op.lower = ArrayXd::Zero(n);
    op.diag = ArrayXd::Zero(n);
    op.upper = ArrayXd::Zero(n);

    double max_c = 0.0;
    for (Index i = 0; i < n; ++i) {
        const auto [a, b, c] = operator_coeffs(params, grid.node(i));
        max_c = std::max(max_c, c);

        if (i == 0 || i == n - 1) {
            if (grid.eps > 0.0) {
                // Reflecting closure: ghost node mirrors the interior neighbor,
                // the drift term vanishes under the zero-slope condition.
                const double d2 = 2.0 * a / (h * h);
                if (i == 0) {
                    op.upper(i) = d2;
                } else {
                    op.lower(i) = d2;
                }
                op.diag(i) = -d2 + c;
            } else {
                // Degenerate endpoint: a = 0, no boundary data; one-sided
                // transport row along the inflow direction of b.
                if (i == 0) {
                    op.upper(i) = b / h;          // b(0) = lambda2 > 0
                    op.diag(i) = -b / h + c;
                } else {
                    op.lower(i) = -b / h;         // b(1) = -lambda1 < 0
                    op.diag(i) = b / h + c;
                }
            }
            continue;
        }

        const double d2 = a / (h * h);
        if (a > 0.0 && std::abs(b) * h <= 2.0 * a) {
            const double d1 = b / (2.0 * h);
            op.lower(i) = d2 - d1;
            op.diag(i) = -2.0 * d2 + c;
            op.upper(i) = d2 + d1;
        } else if (b >= 0.0) {
            op.lower(i) = d2;
            op.diag(i) = -2.0 * d2 - b / h + c;
            op.upper(i) = d2 + b / h;
        } else {
            op.lower(i) = d2 - b / h;
            op.diag(i) = -2.0 * d2 + b / h + c;
            op.upper(i) = d2;
        }
    }

    op.monotone_dt_limit = max_c > 0.0 ? 1.0 / max_c : std::numeric_limits<double>::infinity();
    return op;
}

TridiagonalMatrix make_step_matrix(const TridiagonalOperator& op, double dt) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (!(dt < op.monotone_dt_limit))
        throw DomainError("time step " + std::to_string(dt)
                          + " exceeds the monotonicity limit "
                          + std::to_string(op.monotone_dt_limit));
    TridiagonalMatrix m;
    m.lower = -dt * op.lower;
    m.diag = 1.0 - dt * op.diag;
    m.upper = -dt * op.upper;
    return m;
}

}  // namespace rstrade
