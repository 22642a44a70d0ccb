#pragma once
// Overload set letting numeric templates run identically on plain doubles
// (fast, non-rigorous) and on IScalar (enclosure) arguments.

#include <cmath>

#include "stripwave/interval.hpp"

namespace stripwave::scal {

inline double abs_val(double x) { return std::fabs(x); }
inline IScalar abs_val(const IScalar& x) { return iabs(x); }
inline double sqrt_val(double x) { return std::sqrt(x); }
inline IScalar sqrt_val(const IScalar& x) { return sqrt(x); }
inline double sqr_val(double x) { return x * x; }
inline IScalar sqr_val(const IScalar& x) { return pow_k(x, 2); }
inline double cos_val(double x) { return std::cos(x); }
inline IScalar cos_val(const IScalar& x) { return cos(x); }
inline double sin_val(double x) { return std::sin(x); }
inline IScalar sin_val(const IScalar& x) { return sin(x); }
inline double exp_val(double x) { return std::exp(x); }
inline IScalar exp_val(const IScalar& x) { return exp(x); }
inline double upper(double x) { return x; }
inline double upper(const IScalar& x) { return x.hi(); }
inline double lower(double x) { return x; }
inline double lower(const IScalar& x) { return x.lo(); }
template <class S> S pi_val();
template <> inline double pi_val<double>() { return 3.141592653589793238462643383279502884; }
template <> inline IScalar pi_val<IScalar>() { return pi_enclosure(); }

} // namespace stripwave::scal
