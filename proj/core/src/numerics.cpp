#include "filband/numerics.hpp"

#include <cmath>

namespace filband {

Eigen::MatrixXd fd_jacobian(const VecFunction& f, const std::vector<double>& x,
                            const std::vector<double>& fx0) {
    const int n = static_cast<int>(x.size());
    const int m = static_cast<int>(fx0.size());
    const double sqrt_eps = std::sqrt(2.220446049250313e-16);

    Eigen::MatrixXd jac(m, n);
    std::vector<double> xp = x, fp(m);
    for (int j = 0; j < n; ++j) {
        const double dx = sqrt_eps * std::max(std::abs(x[j]), 1e-2);
        xp[j] = x[j] + dx;
        const double dx_actual = xp[j] - x[j];
        f(xp, fp);
        for (int i = 0; i < m; ++i) jac(i, j) = (fp[i] - fx0[i]) / dx_actual;
        xp[j] = x[j];
    }
    return jac;
}

} // namespace filband
