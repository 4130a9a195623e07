#include "tailmoment/grid.hpp"

#include <cmath>
#include <string>

#include "tailmoment/errors.hpp"

namespace tailmoment {

Eigen::ArrayXd geometric_grid(double lo, double hi, Eigen::Index count) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi) || count < 1) {
        throw DomainError("geometric_grid: need 0 < lo <= hi and count >= 1");
    }
    if (count == 1) return Eigen::ArrayXd::Constant(1, lo);
    Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(count, std::log(lo), std::log(hi)).exp();
    grid(0) = lo;
    grid(count - 1) = hi;
    return grid;
}

Eigen::ArrayXd linear_grid(double lo, double hi, Eigen::Index count) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo || count < 1) {
        throw DomainError("linear_grid: need finite lo <= hi and count >= 1");
    }
    if (count == 1) return Eigen::ArrayXd::Constant(1, lo);
    return Eigen::ArrayXd::LinSpaced(count, lo, hi);
}

}  // namespace tailmoment
