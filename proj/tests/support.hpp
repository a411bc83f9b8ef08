#pragma once

#include "lrsc/linalg.hpp"
#include "lrsc/oracle.hpp"

#include <initializer_list>

namespace lrsc::test {

inline Matrix diag(std::initializer_list<double> d) {
    Vector v(static_cast<Index>(d.size()));
    Index i = 0;
    for (double x : d)
        v(i++) = x;
    return v.asDiagonal();
}

inline Matrix mat(Index rows, Index cols, std::initializer_list<double> row_major) {
    Matrix m(rows, cols);
    auto it = row_major.begin();
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = *it++;
    return m;
}

inline double max_abs(const Matrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

} // namespace lrsc::test
