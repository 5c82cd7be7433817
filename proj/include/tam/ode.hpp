#pragma once

#include <functional>

#include "tam/types.hpp"

namespace tam {

/// Adaptive Dormand-Prince 5(4) step controller for matrix-valued ODEs
/// Y'(t) = f(t, Y).  Local error per step is kept below `tol`; throws
/// IntegrationError if the step size underflows.
Matrix integrate_matrix_ode(
    const std::function<Matrix(double, const Matrix&)>& f, double t0,
    double t1, Matrix y0, double tol = 1e-10);

}  // namespace tam
