// Copyright 2026 The tgbs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TGBS_DOUBLE_DOUBLE_H
#define TGBS_DOUBLE_DOUBLE_H

#include <cmath>
#include <limits>

namespace tgbs {

/// Unevaluated sum hi + lo of two doubles with |lo| <= ulp(hi) / 2, giving a
/// 106-bit significand. Only the operations the probability kernels need are
/// provided. Algorithms follow the classic error-free transformations
/// (Dekker, Knuth, Shewchuk).
class DoubleDouble {
   public:
    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double x) : hi_(x), lo_(0.0) {}  // NOLINT(google-explicit-constructor)
    constexpr DoubleDouble(double hi, double lo) : hi_(hi), lo_(lo) {}

    constexpr double hi() const { return hi_; }
    constexpr double lo() const { return lo_; }
    explicit constexpr operator double() const { return hi_ + lo_; }

    static DoubleDouble two_sum(double a, double b) {
        double s = a + b;
        double bb = s - a;
        return {s, (a - (s - bb)) + (b - bb)};
    }

    static DoubleDouble quick_two_sum(double a, double b) {
        double s = a + b;
        return {s, b - (s - a)};
    }

    static DoubleDouble two_prod(double a, double b) {
        double p = a * b;
#ifdef __FMA__
        return {p, std::fma(a, b, -p)};
#else
        double a_hi, a_lo, b_hi, b_lo;
        split(a, a_hi, a_lo);
        split(b, b_hi, b_lo);
        return {p, ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo};
#endif
    }

    friend DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
        DoubleDouble s = two_sum(a.hi_, b.hi_);
        DoubleDouble t = two_sum(a.lo_, b.lo_);
        double lo = s.lo_ + t.hi_;
        s = quick_two_sum(s.hi_, lo);
        lo = s.lo_ + t.lo_;
        return quick_two_sum(s.hi_, lo);
    }

    friend DoubleDouble operator-(DoubleDouble a) { return {-a.hi_, -a.lo_}; }
    friend DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

    friend DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
        DoubleDouble p = two_prod(a.hi_, b.hi_);
        double lo = p.lo_ + (a.hi_ * b.lo_ + a.lo_ * b.hi_);
        return quick_two_sum(p.hi_, lo);
    }

    friend DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
        double q1 = a.hi_ / b.hi_;
        DoubleDouble r = a - b * DoubleDouble(q1);
        double q2 = r.hi_ / b.hi_;
        r = r - b * DoubleDouble(q2);
        double q3 = r.hi_ / b.hi_;
        return quick_two_sum(q1, q2) + DoubleDouble(q3);
    }

    DoubleDouble &operator+=(DoubleDouble o) { return *this = *this + o; }
    DoubleDouble &operator-=(DoubleDouble o) { return *this = *this - o; }
    DoubleDouble &operator*=(DoubleDouble o) { return *this = *this * o; }
    DoubleDouble &operator/=(DoubleDouble o) { return *this = *this / o; }

    friend bool operator==(DoubleDouble a, DoubleDouble b) { return a.hi_ == b.hi_ && a.lo_ == b.lo_; }
    friend bool operator<(DoubleDouble a, DoubleDouble b) {
        return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
    }
    friend bool operator>(DoubleDouble a, DoubleDouble b) { return b < a; }
    friend bool operator<=(DoubleDouble a, DoubleDouble b) { return !(b < a); }
    friend bool operator>=(DoubleDouble a, DoubleDouble b) { return !(a < b); }

    friend DoubleDouble sqrt(DoubleDouble a) {
        if (a.hi_ <= 0.0) {
            return a.hi_ == 0.0 ? DoubleDouble(0.0) : DoubleDouble(std::numeric_limits<double>::quiet_NaN());
        }
        double x = 1.0 / std::sqrt(a.hi_);
        double ax = a.hi_ * x;
        DoubleDouble correction = a - two_prod(ax, ax);
        return two_sum(ax, correction.hi_ * (x * 0.5));
    }

    friend DoubleDouble abs(DoubleDouble a) { return a.hi_ < 0.0 ? -a : a; }
    friend bool isfinite(DoubleDouble a) { return std::isfinite(a.hi_) && std::isfinite(a.lo_); }

   private:
#ifndef __FMA__
    static void split(double a, double &hi, double &lo) {
        constexpr double kSplitter = 134217729.0;  // 2^27 + 1
        double t = kSplitter * a;
        hi = t - (t - a);
        lo = a - hi;
    }
#endif

    double hi_ = 0.0;
    double lo_ = 0.0;
};

inline double to_double(double x) { return x; }
inline double to_double(DoubleDouble x) { return static_cast<double>(x); }

}  // namespace tgbs

#endif
