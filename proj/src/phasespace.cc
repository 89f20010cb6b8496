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

#include "tgbs/phasespace.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "tgbs/cplx.h"
#include "tgbs/double_double.h"
#include "tgbs/error.h"

namespace tgbs {

namespace {

// Draws are processed in slices of this many columns to bound memory.
constexpr std::size_t kSliceSize = 1024;

// Products are renormalized once the leading magnitude leaves [2^-kScaleBits, 2^kScaleBits].
constexpr int kScaleBits = 256;

double ldexp_r(double x, int e) { return std::ldexp(x, e); }
DoubleDouble ldexp_r(DoubleDouble x, int e) {
    // Exact unless the low word underflows, which only loses bits below 2^-1074.
    const double hi = static_cast<double>(x);
    const double lo = static_cast<double>(x - DoubleDouble(hi));
    return {std::ldexp(hi, e), std::ldexp(lo, e)};
}

double lead(double x) { return std::abs(x); }
double lead(DoubleDouble x) { return std::abs(static_cast<double>(x)); }

// exp(z) - 1 without cancellation for small |z|.
std::complex<double> expm1_complex(std::complex<double> z) {
    const double a = z.real();
    const double b = z.imag();
    const double s = std::sin(0.5 * b);
    const double re = std::expm1(a) * std::cos(b) - 2.0 * s * s;
    const double im = std::exp(a) * std::sin(b);
    return {re, im};
}

template <typename R>
std::vector<Cplx<R>> unit_roots(std::size_t n);

template <>
std::vector<Cplx<double>> unit_roots<double>(std::size_t n) {
    std::vector<Cplx<double>> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        w[k] = {std::cos(t), std::sin(t)};
    }
    return w;
}

template <>
std::vector<Cplx<DoubleDouble>> unit_roots<DoubleDouble>(std::size_t n) {
    using Quad = boost::multiprecision::cpp_bin_float_quad;
    auto split = [](const Quad &v) {
        const double hi = static_cast<double>(v);
        const double lo = static_cast<double>(Quad(v - hi));
        return DoubleDouble(hi, lo);
    };
    std::vector<Cplx<DoubleDouble>> w(n);
    const Quad two_pi = 2 * boost::math::constants::pi<Quad>();
    for (std::size_t k = 0; k < n; ++k) {
        const Quad t = two_pi * Quad(k) / Quad(n);
        w[k] = {split(cos(t)), split(sin(t))};
    }
    return w;
}

// Accumulates sum_k Gtilde(alpha_bar_k, beta_bar_k; C) over the columns of
// one slice into acc[C].
template <typename R>
void accumulate_slice(const ComplexMatrix &ab, const ComplexMatrix &bb, const std::vector<Cplx<R>> &roots,
                      std::vector<Cplx<R>> &acc) {
    const std::size_t m = static_cast<std::size_t>(ab.rows());
    const std::size_t n_angles = m + 1;
    std::vector<std::complex<double>> q(m), p(m);
    std::vector<Cplx<R>> g(n_angles);
    std::vector<int> ex(n_angles);
    const R inv_angles = R(1.0) / R(static_cast<double>(n_angles));
    const double upper = std::ldexp(1.0, kScaleBits);
    const double lower = std::ldexp(1.0, -kScaleBits);

    for (Eigen::Index k = 0; k < ab.cols(); ++k) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::complex<double> x = ab(static_cast<Eigen::Index>(j), k) * bb(static_cast<Eigen::Index>(j), k);
            q[j] = std::exp(-x);
            p[j] = -expm1_complex(-x);
        }
        for (std::size_t l = 0; l < n_angles; ++l) {
            Cplx<R> prod(R(1.0));
            int e = 0;
            const Cplx<R> &z = roots[l];
            for (std::size_t j = 0; j < m; ++j) {
                const Cplx<R> pj(p[j]);
                const Cplx<R> factor = Cplx<R>(q[j]) + z * pj;
                prod = prod * factor;
                const double mag = std::max(lead(prod.re), lead(prod.im));
                if (mag > upper || (mag < lower && mag > 0.0)) {
                    int k2 = 0;
                    std::frexp(mag, &k2);
                    prod = {ldexp_r(prod.re, -k2), ldexp_r(prod.im, -k2)};
                    e += k2;
                }
            }
            g[l] = prod;
            ex[l] = e;
        }
        int e_max = std::numeric_limits<int>::min();
        for (std::size_t l = 0; l < n_angles; ++l) {
            if (g[l].re != R(0.0) || g[l].im != R(0.0)) {
                e_max = std::max(e_max, ex[l]);
            }
        }
        if (e_max == std::numeric_limits<int>::min()) {
            continue;
        }
        for (std::size_t l = 0; l < n_angles; ++l) {
            const int shift = ex[l] - e_max;
            g[l] = shift < -1100 ? Cplx<R>() : Cplx<R>{ldexp_r(g[l].re, shift), ldexp_r(g[l].im, shift)};
        }
        for (std::size_t c = 0; c < n_angles; ++c) {
            Cplx<R> s;
            for (std::size_t l = 0; l < n_angles; ++l) {
                s += mul_conj(g[l], roots[(l * c) % n_angles]);
            }
            s = s * inv_angles;
            acc[c] += Cplx<R>{ldexp_r(s.re, e_max), ldexp_r(s.im, e_max)};
        }
    }
}

template <typename Slicer>
GroupedClickDistribution reduce_groups(std::size_t m, std::size_t samples, std::size_t groups, Precision precision,
                                       const Slicer &for_each_slice) {
    const std::size_t per_group = samples / groups;
    std::vector<std::vector<Cplx<DoubleDouble>>> sums(groups, std::vector<Cplx<DoubleDouble>>(m + 1));
    const auto roots_d = unit_roots<double>(m + 1);
    const auto roots_x = precision == Precision::kExtended ? unit_roots<DoubleDouble>(m + 1)
                                                           : std::vector<Cplx<DoubleDouble>>{};
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) if (groups > 1)
    for (std::int64_t gi = 0; gi < static_cast<std::int64_t>(groups); ++gi) {
        const auto g = static_cast<std::size_t>(gi);
        try {
            if (precision == Precision::kExtended) {
                std::vector<Cplx<DoubleDouble>> acc(m + 1);
                for_each_slice(g, [&](const ComplexMatrix &ab, const ComplexMatrix &bb) {
                    accumulate_slice<DoubleDouble>(ab, bb, roots_x, acc);
                });
                sums[g] = acc;
            } else {
                // Slice partial sums in double, slices combined in double-double.
                for_each_slice(g, [&](const ComplexMatrix &ab, const ComplexMatrix &bb) {
                    std::vector<Cplx<double>> acc(m + 1);
                    accumulate_slice<double>(ab, bb, roots_d, acc);
                    for (std::size_t c = 0; c <= m; ++c) {
                        sums[g][c] += Cplx<DoubleDouble>(DoubleDouble(acc[c].re), DoubleDouble(acc[c].im));
                    }
                });
            }
        } catch (...) {
#pragma omp critical(tgbs_grouped_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    GroupedClickDistribution out;
    out.precision = precision;
    out.samples = samples;
    out.groups = groups;
    out.probability.assign(m + 1, 0.0);
    out.uncertainty.assign(m + 1, 0.0);
    const DoubleDouble inv_per_group = DoubleDouble(1.0) / DoubleDouble(static_cast<double>(per_group));
    for (std::size_t c = 0; c <= m; ++c) {
        std::vector<double> group_means(groups);
        DoubleDouble re_total(0.0), im_total(0.0);
        for (std::size_t g = 0; g < groups; ++g) {
            const DoubleDouble re = sums[g][c].re * inv_per_group;
            const DoubleDouble im = sums[g][c].im * inv_per_group;
            if (!isfinite(re) || !isfinite(im)) {
                throw NumericError("grouped click estimator overflowed at C = " + std::to_string(c));
            }
            group_means[g] = static_cast<double>(re);
            re_total += re;
            im_total += im;
        }
        const DoubleDouble gd(static_cast<double>(groups));
        const double mean = static_cast<double>(re_total / gd);
        out.probability[c] = mean;
        out.max_imaginary = std::max(out.max_imaginary, std::abs(static_cast<double>(im_total / gd)));
        double ss = 0.0;
        for (double v : group_means) {
            ss += (v - mean) * (v - mean);
        }
        out.uncertainty[c] = std::sqrt(ss / static_cast<double>(groups - 1));
    }
    return out;
}

void check_groups(std::size_t samples, std::size_t groups) {
    if (groups < 2) {
        throw InputError("the grouped estimator needs at least 2 groups, got " + std::to_string(groups));
    }
    if (samples == 0 || samples % groups != 0) {
        throw InputError("sample count " + std::to_string(samples) + " is not a positive multiple of the group count " +
                         std::to_string(groups));
    }
}

}  // namespace

AmplitudeCoefficients amplitude_coefficients(const SqueezeSpec &spec, Hypothesis kind) {
    const std::vector<double> e = spec.expanded();
    AmplitudeCoefficients c;
    c.a.resize(e.size());
    c.b.resize(e.size());
    c.mean_photons.resize(e.size());
    c.coherence.resize(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
        const double sh = std::sinh(e[j]);
        const double n = sh * sh;
        double m = 0.0;
        if (kind == Hypothesis::kSqueezed) {
            m = -0.5 * std::sinh(2.0 * e[j]);
        } else {
            m = e[j] < 0.0 ? n : (e[j] > 0.0 ? -n : 0.0);
        }
        c.mean_photons[j] = n;
        c.coherence[j] = m;
        c.a[j] = std::sqrt(std::complex<double>(0.5 * (n + m), 0.0));
        c.b[j] = std::sqrt(std::complex<double>(0.5 * (n - m), 0.0));
    }
    return c;
}

AmplitudeBatch sample_amplitudes(const SqueezeSpec &spec, Hypothesis kind, std::size_t count, Rng &rng) {
    if (count == 0) {
        throw InputError("amplitude batch size must be at least 1");
    }
    const AmplitudeCoefficients c = amplitude_coefficients(spec, kind);
    const auto k = static_cast<Eigen::Index>(c.a.size());
    AmplitudeBatch batch;
    batch.kind = kind;
    batch.alpha.resize(k, static_cast<Eigen::Index>(count));
    batch.beta.resize(k, static_cast<Eigen::Index>(count));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::complex<double> i(0.0, 1.0);
    for (Eigen::Index s = 0; s < static_cast<Eigen::Index>(count); ++s) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const double u = normal(rng);
            const double v = normal(rng);
            const std::complex<double> first = u * c.a[static_cast<std::size_t>(j)];
            const std::complex<double> second = i * v * c.b[static_cast<std::size_t>(j)];
            batch.alpha(j, s) = first + second;
            batch.beta(j, s) = first - second;
        }
    }
    return batch;
}

AmplitudeBatch sample_amplitudes(const SqueezeSpec &spec, Hypothesis kind, std::size_t count, std::uint64_t seed,
                                 std::uint64_t stream_index) {
    Rng rng = make_rng(seed, Stream::kAmplitudes, stream_index);
    AmplitudeBatch batch = sample_amplitudes(spec, kind, count, rng);
    batch.seed = seed;
    batch.stream_index = stream_index;
    return batch;
}

ComplexMatrix composed_transmission(const TransmissionMatrix &t) {
    const RealMatrix b = pairwise_beamsplitter_modes(t.input_modes());
    return t.matrix() * b.cast<std::complex<double>>();
}

AmplitudeBatch transform_amplitudes(const AmplitudeBatch &batch, const ComplexMatrix &t_prime) {
    if (t_prime.cols() != batch.alpha.rows()) {
        throw InputError("transfer matrix has " + std::to_string(t_prime.cols()) + " columns but the batch has " +
                         std::to_string(batch.alpha.rows()) + " modes");
    }
    AmplitudeBatch out;
    out.kind = batch.kind;
    out.seed = batch.seed;
    out.stream_index = batch.stream_index;
    out.alpha.noalias() = t_prime * batch.alpha;
    out.beta.noalias() = t_prime.conjugate() * batch.beta;
    return out;
}

AmplitudeBatch transform_amplitudes(const AmplitudeBatch &batch, const TransmissionMatrix &t, const RealMatrix &b) {
    if (b.rows() != b.cols() || static_cast<std::size_t>(b.rows()) != t.input_modes()) {
        throw InputError("beamsplitter matrix must be " + std::to_string(t.input_modes()) + " x " +
                         std::to_string(t.input_modes()));
    }
    return transform_amplitudes(batch, ComplexMatrix(t.matrix() * b.cast<std::complex<double>>()));
}

double GroupedClickDistribution::std_error_of_mean(std::size_t c) const {
    return groups == 0 ? 0.0 : uncertainty.at(c) / std::sqrt(static_cast<double>(groups));
}

double GroupedClickDistribution::total() const {
    DoubleDouble s(0.0);
    for (double p : probability) {
        s += p;
    }
    return static_cast<double>(s);
}

double GroupedClickDistribution::total_uncertainty() const {
    double s = 0.0;
    for (double u : uncertainty) {
        s += u * u;
    }
    return std::sqrt(s);
}

GroupedClickDistribution grouped_click_probabilities(const AmplitudeBatch &transformed, std::size_t groups,
                                                     Precision precision) {
    const std::size_t samples = transformed.size();
    check_groups(samples, groups);
    const std::size_t per_group = samples / groups;
    auto slices = [&](std::size_t g, const auto &fn) {
        for (std::size_t start = 0; start < per_group; start += kSliceSize) {
            const auto col = static_cast<Eigen::Index>(g * per_group + start);
            const auto n = static_cast<Eigen::Index>(std::min(kSliceSize, per_group - start));
            fn(ComplexMatrix(transformed.alpha.middleCols(col, n)), ComplexMatrix(transformed.beta.middleCols(col, n)));
        }
    };
    GroupedClickDistribution out = reduce_groups(transformed.modes(), samples, groups, precision, slices);
    out.kind = transformed.kind;
    return out;
}

GroupedClickDistribution estimate_grouped_clicks(Hypothesis kind, const SqueezeSpec &spec,
                                                 const TransmissionMatrix &t, std::size_t samples,
                                                 std::size_t groups, std::uint64_t seed, Precision precision) {
    check_groups(samples, groups);
    if (t.input_modes() != spec.input_modes()) {
        throw InputError("transmission matrix has " + std::to_string(t.input_modes()) +
                         " input modes but the squeezing list expands to " + std::to_string(spec.input_modes()));
    }
    const ComplexMatrix t_prime = composed_transmission(t);
    const ComplexMatrix t_conj = t_prime.conjugate();
    const std::size_t per_group = samples / groups;
    auto slices = [&](std::size_t g, const auto &fn) {
        Rng rng = make_rng(seed, Stream::kAmplitudes, g);
        for (std::size_t start = 0; start < per_group; start += kSliceSize) {
            const std::size_t n = std::min(kSliceSize, per_group - start);
            const AmplitudeBatch raw = sample_amplitudes(spec, kind, n, rng);
            const ComplexMatrix ab = t_prime * raw.alpha;
            const ComplexMatrix bb = t_conj * raw.beta;
            fn(ab, bb);
        }
    };
    GroupedClickDistribution out = reduce_groups(t.output_modes(), samples, groups, precision, slices);
    out.kind = kind;
    return out;
}

ClickSummary summarize(const GroupedClickDistribution &dist) {
    ClickSummary s = summarize(dist.probability);
    const std::size_t n = dist.probability.size();
    double var_mean = 0.0, var_var = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        const double cd = static_cast<double>(c);
        const double u = dist.uncertainty[c];
        var_mean += cd * cd * u * u;
        const double dvar = cd * cd - 2.0 * s.mean * cd;
        var_var += dvar * dvar * u * u;
    }
    s.mean_uncertainty = std::sqrt(var_mean);
    const double u_var = std::sqrt(var_var);
    // d sigma = d var / (2 sigma); at sigma = 0 fall back to sqrt(u_var).
    s.stddev_uncertainty = s.stddev > 0.0 ? u_var / (2.0 * s.stddev) : std::sqrt(u_var);
    return s;
}

ClickSummary summarize(const std::vector<double> &probability) {
    DoubleDouble m1(0.0), m2(0.0);
    for (std::size_t c = 0; c < probability.size(); ++c) {
        const double cd = static_cast<double>(c);
        m1 += DoubleDouble(cd) * DoubleDouble(probability[c]);
        m2 += DoubleDouble(cd * cd) * DoubleDouble(probability[c]);
    }
    ClickSummary s;
    s.mean = static_cast<double>(m1);
    s.stddev = std::sqrt(std::max(0.0, static_cast<double>(m2 - m1 * m1)));
    return s;
}

}  // namespace tgbs
