#pragma once

#include "gv/kernel.hpp"

#include <optional>
#include <vector>

namespace gv {

/// Square matrix with polynomial entries over a common chart.
class PolyMatrix {
  public:
    PolyMatrix() = default;
    PolyMatrix(ChartPtr chart, std::size_t n) : chart_(std::move(chart)), n_(n), e_(n * n, Poly(chart_)) {}

    static PolyMatrix identity(const ChartPtr& chart, std::size_t n) {
        PolyMatrix m(chart, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Poly::constant(chart, 1);
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    const ChartPtr& chart() const noexcept { return chart_; }
    Poly& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const Poly& operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
        PolyMatrix r(a.chart_, a.n_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t k = 0; k < a.n_; ++k) {
                if (a(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < a.n_; ++j)
                    if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
            }
        return r;
    }
    friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) {
        for (std::size_t k = 0; k < a.e_.size(); ++k) a.e_[k] += b.e_[k];
        return a;
    }
    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) { return a.e_ == b.e_; }

    PolyMatrix transpose() const {
        PolyMatrix r(chart_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    PolyMatrix truncate(const std::vector<bool>& mask, unsigned degree) const {
        PolyMatrix r = *this;
        for (auto& p : r.e_) p = p.truncate(mask, degree);
        return r;
    }

  private:
    ChartPtr chart_;
    std::size_t n_ = 0;
    std::vector<Poly> e_;
};

/// Inverse of a rational matrix by Gauss-Jordan elimination; nullopt when singular.
inline std::optional<std::vector<std::vector<Scalar>>> invert(std::vector<std::vector<Scalar>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<Scalar>> inv(n, std::vector<Scalar>(n, Scalar(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const Scalar p = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Scalar f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

/// Inverse of M = M0 + N by the Neumann series sum_k (-M0^{-1} N)^k M0^{-1},
/// truncated at `degree` in the masked variables. Throws when M0 is singular.
inline PolyMatrix neumann_inverse(const PolyMatrix& m, const std::vector<bool>& mask, unsigned degree) {
    const std::size_t n = m.size();
    const ChartPtr& ch = m.chart();
    std::vector<std::vector<Scalar>> m0(n, std::vector<Scalar>(n));
    PolyMatrix nil(ch, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m0[i][j] = m(i, j).constant_term();
            nil(i, j) = m(i, j) - Poly::constant(ch, m0[i][j]);
        }
    auto inv0 = invert(m0);
    if (!inv0) throw Error("transition block is not invertible: constant term is singular");
    PolyMatrix a(ch, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = Poly::constant(ch, (*inv0)[i][j]);
    PolyMatrix step = a * nil;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) step(i, j) = -step(i, j);
    PolyMatrix term = a;
    PolyMatrix sum = a;
    for (unsigned k = 1; k <= degree; ++k) {
        term = (step * term).truncate(mask, degree);
        sum = sum + term;
    }
    return sum.truncate(mask, degree);
}

} // namespace gv
