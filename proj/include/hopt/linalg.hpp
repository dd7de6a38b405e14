#pragma once

#include "hopt/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace hopt::linalg {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>; // row-major, all rows equal length

/// Reduced row-echelon form; zero rows are dropped.
struct Echelon {
    Matrix rows;
    std::vector<std::size_t> pivots;
};

Echelon rref(Matrix m);
std::size_t rank(const Matrix& m);
/// Gauss-Jordan inverse of a square matrix; nullopt when singular.
std::optional<Matrix> inverse(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, const Vector& v);
Matrix transpose(const Matrix& m);
Matrix identity(std::size_t n);

} // namespace hopt::linalg
