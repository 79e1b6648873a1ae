#include "gibo/acquisition/normal.hpp"

#include <cmath>
#include <numbers>

namespace gibo::acq {

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace gibo::acq
