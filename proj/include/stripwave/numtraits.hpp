#pragma once
// Minimal Eigen scalar-type glue for IScalar so Matrix<IScalar,...> works as
// storage.  Reductions that need rounding control are written as explicit
// loops in blocks.hpp rather than Eigen expressions.

#include <Eigen/Core>
#include "stripwave/interval.hpp"

namespace Eigen {

template <>
struct NumTraits<stripwave::IScalar> {
    typedef stripwave::IScalar Real;
    typedef stripwave::IScalar NonInteger;
    typedef stripwave::IScalar Literal;
    typedef stripwave::IScalar Nested;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 4,
        MulCost = 16
    };
    static inline Real epsilon() { return Real(0.0); }
    static inline Real dummy_precision() { return Real(0.0); }
    static inline Real highest() { return Real(std::numeric_limits<double>::max()); }
    static inline Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
    static inline int digits10() { return 15; }
};

} // namespace Eigen
