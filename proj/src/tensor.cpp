#include "naspred/tensor.hpp"

#include <cmath>

#include "naspred/errors.hpp"

namespace naspred {

std::vector<double> matvec(const DenseMatrix& m, std::span<const double> x) {
    if (x.size() != m.cols)
        throw ShapeError("matvec: vector length " + std::to_string(x.size()) +
                         " does not match matrix cols " + std::to_string(m.cols));
    std::vector<double> y(m.rows, 0.0);
    const double* p = m.data.data();
    for (std::size_t r = 0; r < m.rows; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) acc += p[c] * x[c];
        y[r] = acc;
        p += m.cols;
    }
    return y;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw ShapeError("axpy: length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

bool all_finite(std::span<const double> v) {
    for (double d : v)
        if (!std::isfinite(d)) return false;
    return true;
}

} // namespace naspred
