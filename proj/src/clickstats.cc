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

#include "tgbs/clickstats.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>

#include "tgbs/error.h"
#include "tgbs/random.h"

namespace tgbs {

namespace {

using Partition = std::vector<std::vector<std::size_t>>;

std::vector<Partition> build_partitions(std::size_t n) {
    // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
    std::vector<Partition> out;
    std::vector<std::size_t> a(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t max_block) {
        if (i == n) {
            Partition p(max_block + 1);
            for (std::size_t k = 0; k < n; ++k) {
                p[a[k]].push_back(k);
            }
            out.push_back(std::move(p));
            return;
        }
        for (std::size_t b = 0; b <= max_block + 1; ++b) {
            a[i] = b;
            rec(i + 1, std::max(max_block, b));
        }
    };
    if (n == 0) {
        out.push_back({});
    } else {
        a[0] = 0;
        rec(1, 0);
    }
    return out;
}

double factorial(std::size_t k) {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) {
        f *= static_cast<double>(i);
    }
    return f;
}

// Cumulant from moments indexed by sub-mask of the subset positions.
double cumulant_from_mask_moments(std::size_t n, std::span<const double> moment_by_mask) {
    double kappa = 0.0;
    for (const Partition &p : set_partitions(n)) {
        const std::size_t blocks = p.size();
        double term = factorial(blocks - 1) * ((blocks - 1) % 2 == 0 ? 1.0 : -1.0);
        for (const auto &block : p) {
            std::size_t mask = 0;
            for (std::size_t k : block) {
                mask |= std::size_t{1} << k;
            }
            term *= moment_by_mask[mask];
        }
        kappa += term;
    }
    return kappa;
}

void check_order(std::size_t n) {
    if (n > kMaxCumulantOrder) {
        throw InputError("cumulants of order " + std::to_string(n) + " are not supported (max " +
                         std::to_string(kMaxCumulantOrder) + ")");
    }
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0.0;
    }
    double b = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::round(b);
}

void check_pair(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw InputError("correlation inputs differ in length");
    }
    if (xs.size() < 3) {
        throw InputError("correlation needs at least 3 points");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            throw InputError("correlation inputs must be finite");
        }
    }
}

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
            ++j;
        }
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[idx[k]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

// Per-mode bit columns over the sample index, for fast joint counts.
class ModeColumns {
   public:
    explicit ModeColumns(const SampleSet &samples)
        : words_((samples.size() + 63) / 64), cols_(samples.modes(), std::vector<std::uint64_t>(words_, 0)) {
        for (std::size_t s = 0; s < samples.size(); ++s) {
            const ClickPattern &p = samples[s];
            for (std::size_t j = 0; j < samples.modes(); ++j) {
                if (p.test(j)) {
                    cols_[j][s >> 6] |= std::uint64_t{1} << (s & 63);
                }
            }
        }
    }

    // counts[mask] = number of samples in which all subset positions in mask clicked.
    std::vector<std::size_t> joint_counts(std::span<const std::size_t> subset, std::size_t total) const {
        const std::size_t n = subset.size();
        std::vector<std::size_t> counts(std::size_t{1} << n, 0);
        counts[0] = total;
        std::vector<std::uint64_t> acc(std::size_t{1} << n);
        for (std::size_t w = 0; w < words_; ++w) {
            acc[0] = ~std::uint64_t{0};
            for (std::size_t mask = 1; mask < acc.size(); ++mask) {
                const auto low = static_cast<std::size_t>(std::countr_zero(mask));
                acc[mask] = acc[mask & (mask - 1)] & cols_[subset[low]][w];
                counts[mask] += static_cast<std::size_t>(std::popcount(acc[mask]));
            }
        }
        return counts;
    }

   private:
    std::size_t words_;
    std::vector<std::vector<std::uint64_t>> cols_;
};

}  // namespace

const std::vector<Partition> &set_partitions(std::size_t n) {
    static const std::array<std::vector<Partition>, kMaxCumulantOrder + 1> table = [] {
        std::array<std::vector<Partition>, kMaxCumulantOrder + 1> t;
        for (std::size_t k = 0; k <= kMaxCumulantOrder; ++k) {
            t[k] = build_partitions(k);
        }
        return t;
    }();
    check_order(n);
    return table[n];
}

double theoretical_moment(const HusimiPair &h, std::span<const std::size_t> modes) {
    return marginal_probability(h, modes);
}

double theoretical_moment(const CovarianceMatrix &sigma, std::span<const std::size_t> modes) {
    return marginal_probability(sigma, modes);
}

double cumulant_from_moments(const MomentFn &moment, std::span<const std::size_t> modes) {
    const std::size_t n = modes.size();
    check_order(n);
    if (n == 0) {
        throw InputError("cumulant of an empty mode set");
    }
    std::vector<double> by_mask(std::size_t{1} << n, 1.0);
    for (std::size_t mask = 1; mask < by_mask.size(); ++mask) {
        std::vector<std::size_t> block;
        for (std::size_t k = 0; k < n; ++k) {
            if ((mask >> k) & 1U) {
                block.push_back(modes[k]);
            }
        }
        by_mask[mask] = moment(block);
    }
    return cumulant_from_mask_moments(n, by_mask);
}

double empirical_moment(const SampleSet &samples, std::span<const std::size_t> modes) {
    if (samples.empty()) {
        throw InputError("empirical moment of an empty sample set");
    }
    std::size_t hits = 0;
    for (const ClickPattern &p : samples.patterns()) {
        if (p.all_clicked(modes)) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double empirical_cumulant(const SampleSet &samples, std::span<const std::size_t> modes) {
    if (samples.empty()) {
        throw InputError("empirical cumulant of an empty sample set");
    }
    return cumulant_from_moments([&](std::span<const std::size_t> b) { return empirical_moment(samples, b); }, modes);
}

std::vector<ModeSubset> all_mode_subsets(std::size_t modes, std::size_t order) {
    std::vector<ModeSubset> out;
    if (order > modes) {
        return out;
    }
    ModeSubset cur(order);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        std::size_t i = order;
        while (i > 0 && cur[i - 1] == modes - order + (i - 1)) {
            --i;
        }
        if (i == 0) {
            break;
        }
        ++cur[i - 1];
        for (std::size_t k = i; k < order; ++k) {
            cur[k] = cur[k - 1] + 1;
        }
    }
    return out;
}

std::vector<ModeSubset> random_mode_subsets(std::size_t modes, std::size_t order, std::size_t count,
                                            std::uint64_t seed) {
    if (order > modes) {
        throw InputError("subset order " + std::to_string(order) + " exceeds mode count " + std::to_string(modes));
    }
    if (static_cast<double>(count) >= binomial(modes, order)) {
        return all_mode_subsets(modes, order);
    }
    Rng rng = make_rng(seed, Stream::kModeSubsets, order);
    std::set<ModeSubset> seen;
    std::vector<ModeSubset> out;
    out.reserve(count);
    while (out.size() < count) {
        // Floyd's algorithm for `order` distinct indices.
        std::set<std::size_t> chosen;
        for (std::size_t j = modes - order; j < modes; ++j) {
            std::uniform_int_distribution<std::size_t> pick(0, j);
            const std::size_t t = pick(rng);
            if (!chosen.insert(t).second) {
                chosen.insert(j);
            }
        }
        ModeSubset s(chosen.begin(), chosen.end());
        if (seen.insert(s).second) {
            out.push_back(std::move(s));
        }
    }
    return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    check_pair(xs, ys);
    const auto n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw NumericError("correlation coefficient undefined: zero variance");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    check_pair(xs, ys);
    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    return pearson(rx, ry);
}

double correlation(Correlation kind, std::span<const double> xs, std::span<const double> ys) {
    return kind == Correlation::kPearson ? pearson(xs, ys) : spearman(xs, ys);
}

BootstrapEstimate bootstrap_ci(std::span<const double> xs, std::span<const double> ys, Correlation kind,
                               std::size_t resamples, std::uint64_t seed) {
    BootstrapEstimate out;
    out.estimate = correlation(kind, xs, ys);
    Rng rng = make_rng(seed, Stream::kBootstrap, static_cast<std::uint64_t>(kind));
    std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
    std::vector<double> bx(xs.size()), by(ys.size()), stats;
    stats.reserve(resamples);
    for (std::size_t r = 0; r < resamples; ++r) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const std::size_t k = pick(rng);
            bx[i] = xs[k];
            by[i] = ys[k];
        }
        try {
            stats.push_back(correlation(kind, bx, by));
        } catch (const NumericError &) {
            // Degenerate resample (all drawn points tied); skip it.
        }
    }
    out.resamples = stats.size();
    if (stats.size() >= 2) {
        const double mean = std::accumulate(stats.begin(), stats.end(), 0.0) / static_cast<double>(stats.size());
        double ss = 0.0;
        for (double s : stats) {
            ss += (s - mean) * (s - mean);
        }
        out.stddev = std::sqrt(ss / static_cast<double>(stats.size() - 1));
    }
    return out;
}

std::vector<CumulantRecord> compare_cumulants(const CovarianceMatrix &sque, const CovarianceMatrix &squa,
                                              const SampleSet &samples, std::span<const ModeSubset> subsets) {
    if (samples.empty()) {
        throw InputError("cumulant comparison needs a nonempty sample set");
    }
    if (sque.modes() != samples.modes() || squa.modes() != samples.modes()) {
        throw InputError("covariance and sample mode counts differ");
    }
    const HusimiPair h_sque = husimi_from_covariance(sque);
    const HusimiPair h_squa = husimi_from_covariance(squa);
    const ModeColumns columns(samples);
    std::vector<CumulantRecord> out(subsets.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(subsets.size()); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        try {
            const ModeSubset &s = subsets[i];
            const std::size_t n = s.size();
            check_order(n);
            if (n == 0) {
                throw InputError("empty mode subset");
            }
            std::vector<double> m_sque(std::size_t{1} << n, 1.0), m_squa(m_sque.size(), 1.0),
                m_emp(m_sque.size(), 1.0);
            const std::vector<std::size_t> counts = columns.joint_counts(s, samples.size());
            for (std::size_t mask = 1; mask < m_sque.size(); ++mask) {
                std::vector<std::size_t> block;
                for (std::size_t k = 0; k < n; ++k) {
                    if ((mask >> k) & 1U) {
                        block.push_back(s[k]);
                    }
                }
                m_sque[mask] = marginal_probability(h_sque, block);
                m_squa[mask] = marginal_probability(h_squa, block);
                m_emp[mask] = static_cast<double>(counts[mask]) / static_cast<double>(samples.size());
            }
            out[i].modes = s;
            out[i].theory_sque = cumulant_from_mask_moments(n, m_sque);
            out[i].theory_squa = cumulant_from_mask_moments(n, m_squa);
            out[i].empirical = cumulant_from_mask_moments(n, m_emp);
            out[i].samples = samples.size();
        } catch (...) {
#pragma omp critical(tgbs_cumulant_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

std::vector<CorrelationSummary> correlation_summary(std::span<const CumulantRecord> records, std::size_t resamples,
                                                    std::uint64_t seed) {
    std::vector<CorrelationSummary> out;
    for (Hypothesis hyp : {Hypothesis::kSqueezed, Hypothesis::kSquashed}) {
        for (std::size_t order = 1; order <= kMaxCumulantOrder; ++order) {
            std::vector<double> theory, emp;
            for (const CumulantRecord &r : records) {
                if (r.order() == order) {
                    theory.push_back(hyp == Hypothesis::kSqueezed ? r.theory_sque : r.theory_squa);
                    emp.push_back(r.empirical);
                }
            }
            if (theory.size() < 3) {
                continue;
            }
            CorrelationSummary s;
            s.hypothesis = hyp;
            s.order = order;
            s.count = theory.size();
            const std::uint64_t index = order * 2 + (hyp == Hypothesis::kSqueezed ? 0 : 1);
            const std::uint64_t sub = derive_seed(seed, Stream::kBootstrap, index);
            s.pearson = bootstrap_ci(theory, emp, Correlation::kPearson, resamples, sub);
            s.spearman = bootstrap_ci(theory, emp, Correlation::kSpearman, resamples, sub);
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace tgbs
