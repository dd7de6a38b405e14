#include "hopt/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace hopt::linalg {

Echelon rref(Matrix m)
{
    Echelon out;
    if (m.empty())
        return out;
    const std::size_t cols = m.front().size();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.size() && m[pivot][col].is_zero())
            ++pivot;
        if (pivot == m.size())
            continue;
        std::swap(m[row], m[pivot]);
        const Rational lead = m[row][col];
        for (auto& x : m[row])
            x /= lead;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col].is_zero())
                continue;
            const Rational factor = m[r][col];
            for (std::size_t c = col; c < cols; ++c)
                if (!m[row][c].is_zero())
                    m[r][c] -= factor * m[row][c];
        }
        out.pivots.push_back(col);
        ++row;
    }
    m.resize(row);
    out.rows = std::move(m);
    return out;
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::optional<Matrix> inverse(const Matrix& m)
{
    const std::size_t n = m.size();
    Matrix aug(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n)
            throw std::invalid_argument("inverse of non-square matrix");
        aug[i] = m[i];
        aug[i].resize(2 * n);
        aug[i][n + i] = Rational(1);
    }
    const Echelon e = rref(std::move(aug));
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1)
        return std::nullopt;
    Matrix inv(n);
    for (std::size_t i = 0; i < n; ++i)
        inv[i].assign(e.rows[i].begin() + static_cast<std::ptrdiff_t>(n), e.rows[i].end());
    return inv;
}

Matrix multiply(const Matrix& a, const Matrix& b)
{
    const std::size_t inner = b.size();
    const std::size_t cols = inner == 0 ? 0 : b.front().size();
    Matrix out(a.size(), Vector(cols));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k].is_zero())
                continue;
            for (std::size_t j = 0; j < cols; ++j)
                if (!b[k][j].is_zero())
                    out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

Vector multiply(const Matrix& a, const Vector& v)
{
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < v.size(); ++k)
            if (!a[i][k].is_zero() && !v[k].is_zero())
                out[i] += a[i][k] * v[k];
    return out;
}

Matrix transpose(const Matrix& m)
{
    if (m.empty())
        return {};
    Matrix out(m.front().size(), Vector(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            out[j][i] = m[i][j];
    return out;
}

Matrix identity(std::size_t n)
{
    Matrix out(n, Vector(n));
    for (std::size_t i = 0; i < n; ++i)
        out[i][i] = Rational(1);
    return out;
}

} // namespace hopt::linalg
