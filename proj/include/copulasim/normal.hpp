#pragma once

namespace csim {

/// Standard normal CDF via erfc.
double normal_cdf(double z);

/// Standard normal quantile function. Rational initial estimate refined by
/// one Halley step against the erfc-based CDF; absolute error well below
/// 1e-9 on (0,1). Throws DomainError for u <= 0 or u >= 1.
double standard_normal_ppf(double u);

} // namespace csim
