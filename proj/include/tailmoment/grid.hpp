#pragma once

#include <Eigen/Core>

namespace tailmoment {

/// count points from lo to hi inclusive, equal ratios between neighbours.
Eigen::ArrayXd geometric_grid(double lo, double hi, Eigen::Index count);

/// count points from lo to hi inclusive, equal spacing.
Eigen::ArrayXd linear_grid(double lo, double hi, Eigen::Index count);

struct GridSpec {
    double min = 1.0;
    double max = 10.0;
    Eigen::Index count = 10;
    bool geometric = false;

    Eigen::ArrayXd points() const {
        return geometric ? geometric_grid(min, max, count) : linear_grid(min, max, count);
    }
};

}  // namespace tailmoment
