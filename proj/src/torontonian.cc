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

#include "tgbs/torontonian.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <sstream>

#include "tgbs/cplx.h"
#include "tgbs/double_double.h"
#include "tgbs/error.h"
#include "tgbs/log.h"

namespace tgbs {

namespace {

// Subsets per chunk. Each chunk starts from a fresh factorization, which also
// bounds the drift of the updated factor.
constexpr std::uint64_t kChunkSubsets = std::uint64_t{1} << 10;

constexpr double kProbabilitySlack = 1e-9;

// Cholesky factor L (L L^H = Q restricted to rows_) of a Hermitian matrix,
// with rows appended or deleted one at a time in O(n^2).
template <typename R>
class IncrementalCholesky {
   public:
    IncrementalCholesky(const std::vector<Cplx<R>> &q, std::size_t dim) : q_(q), dim_(dim), l_(dim * dim) {
        rows_.reserve(dim);
    }

    std::size_t size() const { return rows_.size(); }

    // Appends row/column `index` of Q. False if the result is not positive
    // definite.
    bool push(std::size_t index) {
        const std::size_t n = rows_.size();
        Cplx<R> *row = &l_[n * dim_];
        const Cplx<R> *q_row = &q_[index * dim_];
        R diag = q_row[index].re;
        for (std::size_t k = 0; k < n; ++k) {
            const Cplx<R> *lk = &l_[k * dim_];
            Cplx<R> acc = q_row[rows_[k]];
            for (std::size_t m = 0; m < k; ++m) {
                acc -= mul_conj(row[m], lk[m]);
            }
            row[k] = acc / lk[k].re;
            diag -= norm(row[k]);
        }
        if (!(diag > R(0.0))) {
            return false;
        }
        row[n] = Cplx<R>(sqrt(diag));
        rows_.push_back(index);
        return true;
    }

    // Removes Q row/column `index` and restores triangular form with Givens
    // rotations from the right.
    void erase(std::size_t index) {
        const auto it = std::find(rows_.begin(), rows_.end(), index);
        const auto p = static_cast<std::size_t>(it - rows_.begin());
        const std::size_t n = rows_.size();
        rows_.erase(it);
        for (std::size_t i = p; i + 1 < n; ++i) {
            std::copy_n(&l_[(i + 1) * dim_], i + 2, &l_[i * dim_]);
        }
        for (std::size_t i = p; i + 1 < n; ++i) {
            Cplx<R> *li = &l_[i * dim_];
            const Cplx<R> a = li[i];
            const Cplx<R> b = li[i + 1];
            const R r = sqrt(norm(a) + norm(b));
            const Cplx<R> ca = conj(a) / r;
            const Cplx<R> cb = conj(b) / r;
            const Cplx<R> a_r = a / r;
            const Cplx<R> b_r = b / r;
            li[i] = Cplx<R>(r);
            li[i + 1] = Cplx<R>();
            for (std::size_t j = i + 1; j + 1 < n; ++j) {
                Cplx<R> *lj = &l_[j * dim_];
                const Cplx<R> x = lj[i];
                const Cplx<R> y = lj[i + 1];
                lj[i] = x * ca + y * cb;
                lj[i + 1] = y * a_r - x * b_r;
            }
        }
    }

    // 1 / sqrt(det) = 1 / prod(L_ii).
    R inverse_sqrt_det() const {
        R prod(1.0);
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            prod *= l_[k * dim_ + k].re;
        }
        return R(1.0) / prod;
    }

   private:
    const std::vector<Cplx<R>> &q_;
    std::size_t dim_;
    std::vector<Cplx<R>> l_;
    std::vector<std::size_t> rows_;
};

[[noreturn]] void throw_unphysical() {
    throw NumericError("Torontonian: det(I - A)_(Z) <= 0 for some subset Z (unphysical input)");
}

template <typename R>
DoubleDouble chunk_sum(const std::vector<Cplx<R>> &q, std::size_t n, std::uint64_t begin, std::uint64_t end) {
    IncrementalCholesky<R> chol(q, 2 * n);
    std::uint64_t gray = begin ^ (begin >> 1);
    for (std::size_t j = 0; j < n; ++j) {
        if ((gray >> j) & 1U) {
            if (!chol.push(j) || !chol.push(j + n)) {
                throw_unphysical();
            }
        }
    }
    DoubleDouble acc(0.0);
    for (std::uint64_t k = begin; k < end; ++k) {
        if (k != begin) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(k));
            gray ^= std::uint64_t{1} << bit;
            if ((gray >> bit) & 1U) {
                if (!chol.push(bit) || !chol.push(bit + n)) {
                    throw_unphysical();
                }
            } else {
                chol.erase(bit + n);
                chol.erase(bit);
            }
        }
        const DoubleDouble term(chol.inverse_sqrt_det());
        const bool negative = ((n - static_cast<std::size_t>(std::popcount(gray))) & 1U) != 0;
        acc += negative ? -term : term;
    }
    return acc;
}

template <typename R>
double torontonian_impl(const ComplexMatrix &qm, std::size_t n) {
    const std::size_t dim = 2 * n;
    std::vector<Cplx<R>> q(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            q[i * dim + j] = Cplx<R>(qm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::uint64_t chunk = std::min(total, kChunkSubsets);
    const auto chunks = static_cast<std::int64_t>(total / chunk);
    std::vector<DoubleDouble> sums(static_cast<std::size_t>(chunks));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (chunks > 1)
    for (std::int64_t c = 0; c < chunks; ++c) {
        try {
            const auto begin = static_cast<std::uint64_t>(c) * chunk;
            sums[static_cast<std::size_t>(c)] = chunk_sum<R>(q, n, begin, begin + chunk);
        } catch (...) {
#pragma omp critical(tgbs_tor_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    DoubleDouble total_sum(0.0);
    for (const DoubleDouble &s : sums) {
        total_sum += s;
    }
    return static_cast<double>(total_sum);
}

// Returns I - A after shape and Hermiticity checks; n receives N.
ComplexMatrix prepare(const ComplexMatrix &a, std::size_t &n) {
    if (a.rows() != a.cols() || a.rows() % 2 != 0) {
        std::ostringstream msg;
        msg << "Torontonian argument must be 2N x 2N, got " << a.rows() << "x" << a.cols();
        throw InputError(msg.str());
    }
    n = static_cast<std::size_t>(a.rows() / 2);
    ComplexMatrix q = ComplexMatrix::Identity(a.rows(), a.cols()) - a;
    if (n == 0) {
        return q;
    }
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw InputError("Torontonian argument is not Hermitian");
    }
    return 0.5 * (q + q.adjoint());
}

double finish_probability(double tor, double log_sqrt_det, const ClickPattern &s) {
    double p = tor * std::exp(-log_sqrt_det);
    if (!std::isfinite(p) || p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "click probability " << p << " for pattern " << s.to_string() << " is outside [0, 1]";
        throw NumericError(msg.str());
    }
    if (p < 0.0 || p > 1.0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "clamping click probability " << p << " for pattern " << s.to_string();
        warn(msg.str());
        p = std::clamp(p, 0.0, 1.0);
    }
    return p;
}

void check_modes(std::span<const std::size_t> modes, std::size_t total) {
    std::vector<bool> seen(total, false);
    for (std::size_t j : modes) {
        if (j >= total) {
            throw InputError("mode index " + std::to_string(j) + " out of range for " + std::to_string(total) +
                             " modes");
        }
        if (seen[j]) {
            throw InputError("duplicate mode index " + std::to_string(j));
        }
        seen[j] = true;
    }
}

}  // namespace

std::string_view to_string(Precision p) { return p == Precision::kDouble ? "double" : "extended"; }

Precision parse_precision(std::string_view s) {
    if (s == "double") {
        return Precision::kDouble;
    }
    if (s == "extended") {
        return Precision::kExtended;
    }
    throw InputError("unknown precision '" + std::string(s) + "' (expected double or extended)");
}

double HusimiPair::sqrt_det() const { return std::exp(log_sqrt_det); }

HusimiPair husimi_from_sigma(ComplexMatrix sigma) {
    const Eigen::Index dim = sigma.rows();
    Eigen::LLT<ComplexMatrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw NumericError("Husimi matrix Sigma is not positive definite (singular or unphysical state)");
    }
    HusimiPair h;
    h.modes = static_cast<std::size_t>(dim / 2);
    double log_det = 0.0;
    const ComplexMatrix &l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < dim; ++i) {
        log_det += std::log(l(i, i).real());
    }
    h.log_sqrt_det = log_det;
    ComplexMatrix inv = llt.solve(ComplexMatrix::Identity(dim, dim));
    ComplexMatrix o = ComplexMatrix::Identity(dim, dim) - inv;
    h.o = 0.5 * (o + o.adjoint());
    h.sigma = std::move(sigma);
    return h;
}

HusimiPair husimi_from_covariance(const CovarianceMatrix &sigma, double hbar) {
    const auto m = static_cast<Eigen::Index>(sigma.modes());
    const double s = 1.0 / std::sqrt(2.0);
    const std::complex<double> i1(0.0, 1.0);
    ComplexMatrix r = ComplexMatrix::Zero(2 * m, 2 * m);
    for (Eigen::Index k = 0; k < m; ++k) {
        r(k, k) = s;
        r(k, m + k) = s * i1;
        r(m + k, k) = s;
        r(m + k, m + k) = -s * i1;
    }
    ComplexMatrix big_sigma = ComplexMatrix::Identity(2 * m, 2 * m) * 0.5 +
                              r * sigma.matrix().cast<std::complex<double>>() * r.adjoint() / hbar;
    big_sigma = 0.5 * (big_sigma + big_sigma.adjoint()).eval();
    return husimi_from_sigma(std::move(big_sigma));
}

ComplexMatrix keep_modes(const ComplexMatrix &a, std::span<const std::size_t> modes) {
    const Eigen::Index n = a.rows() / 2;
    const auto c = static_cast<Eigen::Index>(modes.size());
    std::vector<Eigen::Index> keep(2 * modes.size());
    for (Eigen::Index k = 0; k < c; ++k) {
        keep[k] = static_cast<Eigen::Index>(modes[k]);
        keep[c + k] = static_cast<Eigen::Index>(modes[k]) + n;
    }
    ComplexMatrix out(2 * c, 2 * c);
    for (Eigen::Index i = 0; i < 2 * c; ++i) {
        for (Eigen::Index j = 0; j < 2 * c; ++j) {
            out(i, j) = a(keep[i], keep[j]);
        }
    }
    return out;
}

double torontonian(const ComplexMatrix &a, Precision precision, std::size_t max_modes) {
    std::size_t n = 0;
    const ComplexMatrix q = prepare(a, n);
    if (n == 0) {
        return 1.0;
    }
    if (n > max_modes) {
        std::ostringstream msg;
        msg << "exact Torontonian of size " << n << " exceeds the cap of " << max_modes
            << " (2^" << n << " subsets); use the grouped phase-space estimator for click-number quantities";
        throw InputError(msg.str());
    }
    return precision == Precision::kExtended ? torontonian_impl<DoubleDouble>(q, n) : torontonian_impl<double>(q, n);
}

double torontonian_naive(const ComplexMatrix &a) {
    std::size_t n = 0;
    const ComplexMatrix q = prepare(a, n);
    if (n > 24) {
        throw InputError("naive Torontonian is limited to 24 modes");
    }
    double sum = 0.0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t z = 0; z < total; ++z) {
        std::vector<std::size_t> modes;
        for (std::size_t j = 0; j < n; ++j) {
            if ((z >> j) & 1U) {
                modes.push_back(j);
            }
        }
        double term = 1.0;
        if (!modes.empty()) {
            const ComplexMatrix sub = keep_modes(q, modes);
            Eigen::LLT<ComplexMatrix> llt(sub);
            if (llt.info() != Eigen::Success) {
                throw_unphysical();
            }
            double prod = 1.0;
            for (Eigen::Index i = 0; i < sub.rows(); ++i) {
                prod *= llt.matrixLLT()(i, i).real();
            }
            term = 1.0 / prod;
        }
        sum += ((n - modes.size()) % 2 == 0) ? term : -term;
    }
    return sum;
}

double click_probability(const HusimiPair &h, const ClickPattern &s, Precision precision) {
    if (s.size() != h.modes) {
        throw InputError("pattern has " + std::to_string(s.size()) + " modes, state has " + std::to_string(h.modes));
    }
    const std::vector<std::size_t> clicked = s.clicked_modes();
    const double tor = clicked.empty() ? 1.0 : torontonian(keep_modes(h.o, clicked), precision);
    return finish_probability(tor, h.log_sqrt_det, s);
}

double log_click_probability(const HusimiPair &h, const ClickPattern &s, Precision precision) {
    if (s.size() != h.modes) {
        throw InputError("pattern has " + std::to_string(s.size()) + " modes, state has " + std::to_string(h.modes));
    }
    const std::vector<std::size_t> clicked = s.clicked_modes();
    const double tor = clicked.empty() ? 1.0 : torontonian(keep_modes(h.o, clicked), precision);
    if (!(tor > 0.0) || !std::isfinite(tor)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "non-finite log-probability: Tor = " << tor << " for pattern " << s.to_string();
        throw NumericError(msg.str());
    }
    return std::log(tor) - h.log_sqrt_det;
}

double marginal_probability(const HusimiPair &h, std::span<const std::size_t> modes, Precision precision) {
    check_modes(modes, h.modes);
    if (modes.empty()) {
        return 1.0;
    }
    const HusimiPair reduced = husimi_from_sigma(keep_modes(h.sigma, modes));
    return click_probability(reduced, ClickPattern::from_string(std::string(modes.size(), '1')), precision);
}

double marginal_probability(const CovarianceMatrix &sigma, std::span<const std::size_t> modes, Precision precision) {
    check_modes(modes, sigma.modes());
    if (modes.empty()) {
        return 1.0;
    }
    const HusimiPair reduced = husimi_from_covariance(sigma.reduced(modes));
    return click_probability(reduced, ClickPattern::from_string(std::string(modes.size(), '1')), precision);
}

ClickMoments click_count_mean_std(const CovarianceMatrix &sigma) {
    const HusimiPair h = husimi_from_covariance(sigma);
    const std::size_t m = h.modes;
    std::vector<double> p(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t idx[] = {i};
        p[i] = marginal_probability(h, idx);
    }
    std::vector<double> cross(m, 0.0);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(m); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        try {
            double acc = 0.0;
            for (std::size_t j = i + 1; j < m; ++j) {
                const std::size_t idx[] = {i, j};
                acc += marginal_probability(h, idx) - p[i] * p[j];
            }
            cross[i] = acc;
        } catch (...) {
#pragma omp critical(tgbs_moments_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    ClickMoments out;
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        out.mean += p[i];
        var += p[i] * (1.0 - p[i]) + 2.0 * cross[i];
    }
    out.stddev = std::sqrt(std::max(var, 0.0));
    return out;
}

std::vector<double> probability_table(const HusimiPair &h, Precision precision) {
    const std::size_t m = h.modes;
    if (m > 20) {
        throw InputError("probability table needs M <= 20, got " + std::to_string(m));
    }
    const auto total = static_cast<std::int64_t>(std::uint64_t{1} << m);
    std::vector<double> table(static_cast<std::size_t>(total));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t mask = 0; mask < total; ++mask) {
        try {
            table[static_cast<std::size_t>(mask)] =
                click_probability(h, ClickPattern::from_mask(static_cast<std::uint64_t>(mask), m), precision);
        } catch (...) {
#pragma omp critical(tgbs_table_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return table;
}

std::vector<double> sector_sums(std::span<const double> table, std::size_t modes) {
    if (table.size() != (std::size_t{1} << modes)) {
        throw InputError("probability table size does not match 2^M");
    }
    std::vector<DoubleDouble> acc(modes + 1, DoubleDouble(0.0));
    for (std::size_t mask = 0; mask < table.size(); ++mask) {
        acc[static_cast<std::size_t>(std::popcount(mask))] += table[mask];
    }
    std::vector<double> out(modes + 1);
    for (std::size_t c = 0; c <= modes; ++c) {
        out[c] = static_cast<double>(acc[c]);
    }
    return out;
}

}  // namespace tgbs
