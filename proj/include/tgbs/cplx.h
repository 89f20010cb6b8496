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

#ifndef TGBS_CPLX_H
#define TGBS_CPLX_H

#include <complex>

#include "tgbs/double_double.h"

namespace tgbs {

/// Minimal complex number over an arbitrary real field. std::complex is only
/// specified for the built-in floating types, and its multiplication carries
/// inf/nan recovery we do not want in inner loops.
template <typename R>
struct Cplx {
    R re{};
    R im{};

    constexpr Cplx() = default;
    constexpr Cplx(R r) : re(r), im(R(0.0)) {}  // NOLINT(google-explicit-constructor)
    constexpr Cplx(R r, R i) : re(r), im(i) {}
    explicit Cplx(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> to_std() const { return {to_double(re), to_double(im)}; }

    friend Cplx operator+(const Cplx &a, const Cplx &b) { return {a.re + b.re, a.im + b.im}; }
    friend Cplx operator-(const Cplx &a, const Cplx &b) { return {a.re - b.re, a.im - b.im}; }
    friend Cplx operator-(const Cplx &a) { return {-a.re, -a.im}; }
    friend Cplx operator*(const Cplx &a, const Cplx &b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cplx operator*(const Cplx &a, const R &s) { return {a.re * s, a.im * s}; }
    friend Cplx operator/(const Cplx &a, const R &s) { return {a.re / s, a.im / s}; }
    Cplx &operator+=(const Cplx &o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Cplx &operator-=(const Cplx &o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
};

template <typename R>
Cplx<R> conj(const Cplx<R> &z) {
    return {z.re, -z.im};
}

/// |z|^2
template <typename R>
R norm(const Cplx<R> &z) {
    return z.re * z.re + z.im * z.im;
}

/// a * conj(b)
template <typename R>
Cplx<R> mul_conj(const Cplx<R> &a, const Cplx<R> &b) {
    return {a.re * b.re + a.im * b.im, a.im * b.re - a.re * b.im};
}

}  // namespace tgbs

#endif
