#pragma once

namespace pf {

// Airy function Ai. Maclaurin series in extended precision on [-9, 7],
// asymptotic expansions outside.
double airy(double x);
// Ai(x) exp(2/3 x^{3/2}) for x > 0, plain Ai(x) otherwise.
double airy_scaled(double x);

inline constexpr double airy_zero1 = -2.338107410459767;
inline constexpr double airy_zero2 = -4.087949444130971;

} // namespace pf
