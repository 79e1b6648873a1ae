#pragma once

namespace gibo::acq {

double std_normal_cdf(double z);
double std_normal_pdf(double z);

}  // namespace gibo::acq
