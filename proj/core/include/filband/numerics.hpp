#ifndef FILBAND_NUMERICS_HPP
#define FILBAND_NUMERICS_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace filband {

using VecFunction =
    std::function<void(const std::vector<double>& x, std::vector<double>& fx)>;

// Dense Jacobian by forward differences with step sqrt(eps) * per-component
// scale. fx0 is f(x), reused to save one evaluation.
Eigen::MatrixXd fd_jacobian(const VecFunction& f, const std::vector<double>& x,
                            const std::vector<double>& fx0);

} // namespace filband

#endif
