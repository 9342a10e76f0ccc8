#pragma once

#include <Eigen/Core>

#include "zalg/cyclotomic.hpp"

namespace Eigen {

template <>
struct NumTraits<zalg::Cyclotomic> {
    using Real = zalg::Cyclotomic;
    using NonInteger = zalg::Cyclotomic;
    using Nested = zalg::Cyclotomic;
    using Literal = long;

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 32,
        MulCost = 64,
    };

    static inline Real epsilon() { return zalg::Cyclotomic(0); }
    static inline Real dummy_precision() { return zalg::Cyclotomic(0); }
    static inline int digits10() { return 0; }
};

} // namespace Eigen

namespace zalg {

using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using CMat = Eigen::Matrix<Cyclotomic, Eigen::Dynamic, Eigen::Dynamic>;
using CVec = Eigen::Matrix<Cyclotomic, Eigen::Dynamic, 1>;

// Row-reduces in place over Q(w); returns the rank. Column order is left to
// right, pivots normalized to 1, entries above and below cleared.
int row_reduce(CMat& mat);

inline int exact_rank(CMat mat)
{
    return row_reduce(mat);
}

// Basis of the right kernel, one column per basis vector.
CMat kernel_basis(const CMat& mat);

} // namespace zalg
