#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "upslope/padic.hpp"

namespace upslope {

// Dense matrix of CycloElt over one context. Row-major.
class Mat {
  public:
    Mat() = default;
    Mat(const PadicContext* ctx, int rows, int cols)
        : ctx_(ctx), r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, CycloElt::zero(ctx)) {}

    static Mat identity(const PadicContext* ctx, int n) {
        Mat m(ctx, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = CycloElt::one(ctx);
        return m;
    }

    const PadicContext* ctx() const { return ctx_; }
    int rows() const { return r_; }
    int cols() const { return c_; }

    CycloElt& at(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    const CycloElt& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

    friend Mat operator+(const Mat& x, const Mat& y) {
        check_dims(x, y);
        Mat z(x.ctx_, x.r_, x.c_);
        for (std::size_t i = 0; i < x.a_.size(); ++i) z.a_[i] = x.a_[i] + y.a_[i];
        return z;
    }
    friend Mat operator-(const Mat& x, const Mat& y) {
        check_dims(x, y);
        Mat z(x.ctx_, x.r_, x.c_);
        for (std::size_t i = 0; i < x.a_.size(); ++i) z.a_[i] = x.a_[i] - y.a_[i];
        return z;
    }
    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.c_ != y.r_) throw std::invalid_argument("Mat: dimension mismatch");
        Mat z(x.ctx_, x.r_, y.c_);
        for (int i = 0; i < x.r_; ++i)
            for (int k = 0; k < x.c_; ++k) {
                const CycloElt& xik = x.at(i, k);
                if (xik.is_zero()) continue;
                for (int j = 0; j < y.c_; ++j) {
                    if (y.at(k, j).is_zero()) continue;
                    z.at(i, j) += xik * y.at(k, j);
                }
            }
        return z;
    }
    Mat& operator+=(const Mat& o) { *this = *this + o; return *this; }

    Mat transpose() const {
        Mat t(ctx_, c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    Mat conj_entrywise() const {
        Mat t(ctx_, r_, c_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) t.at(i, j) = at(i, j).conj();
        return t;
    }

    Mat scaled(const CycloElt& s) const {
        Mat t(ctx_, r_, c_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) t.at(i, j) = at(i, j) * s;
        return t;
    }

    Mat pow_u64(std::uint64_t n) const {
        if (r_ != c_) throw std::invalid_argument("Mat: pow of non-square");
        Mat acc = identity(ctx_, r_);
        Mat b = *this;
        while (n) {
            if (n & 1) acc = acc * b;
            b = b * b;
            n >>= 1;
        }
        return acc;
    }

    bool equal_at_min_prec(const Mat& o) const {
        if (r_ != o.r_ || c_ != o.c_) return false;
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (!a_[i].equal_at_min_prec(o.a_[i])) return false;
        return true;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    Mat submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
        Mat t(ctx_, static_cast<int>(rows.size()), static_cast<int>(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) t.at(static_cast<int>(i), static_cast<int>(j)) = at(rows[i], cols[j]);
        return t;
    }

  private:
    static void check_dims(const Mat& x, const Mat& y) {
        if (x.r_ != y.r_ || x.c_ != y.c_) throw std::invalid_argument("Mat: dimension mismatch");
    }
    const PadicContext* ctx_ = nullptr;
    int r_ = 0, c_ = 0;
    std::vector<CycloElt> a_;
};

}  // namespace upslope
