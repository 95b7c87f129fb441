#pragma once

namespace icct {

// ln(x / (1 - x)); throws std::domain_error outside the open unit interval.
double logit(double x);

double inverse_logit(double v);

}  // namespace icct
