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

#include "tgbs/validation.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>

#include "tgbs/double_double.h"
#include "tgbs/error.h"
#include "tgbs/random.h"

namespace tgbs {

namespace {

std::size_t sector_clicks(const SampleSet &set) {
    if (set.empty()) {
        throw InputError("empty sample sector");
    }
    const std::size_t c = set[0].click_count();
    for (std::size_t i = 1; i < set.size(); ++i) {
        if (set[i].click_count() != c) {
            throw InputError("sample sector mixes click counts " + std::to_string(c) + " and " +
                             std::to_string(set[i].click_count()));
        }
    }
    return c;
}

// ln Pr(s) for every pattern, computed in parallel and stored by index.
std::vector<double> log_probabilities(const HusimiPair &h, const SampleSet &set, Precision precision) {
    std::vector<double> out(set.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(set.size()); ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            const Precision p = effective_precision(precision, set[k].click_count());
            out[k] = log_click_probability(h, set[k], p);
            if (!std::isfinite(out[k])) {
                throw NumericError("non-finite log-probability for pattern " + set[k].to_string());
            }
        } catch (...) {
#pragma omp critical(tgbs_logprob_failure)
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

struct MeanVar {
    DoubleDouble mean{0.0};
    double variance = 0.0;  // unbiased; 0 for fewer than two values
};

MeanVar mean_var(std::span<const double> xs) {
    MeanVar out;
    DoubleDouble s(0.0);
    for (double x : xs) {
        s += x;
    }
    out.mean = s / DoubleDouble(static_cast<double>(xs.size()));
    if (xs.size() >= 2) {
        const double m = static_cast<double>(out.mean);
        DoubleDouble ss(0.0);
        for (double x : xs) {
            ss += (x - m) * (x - m);
        }
        out.variance = static_cast<double>(ss) / static_cast<double>(xs.size() - 1);
    }
    return out;
}

double log_sector(const SectorProbabilities &p, std::size_t c, const char *which) {
    if (c >= p.probability.size()) {
        throw InputError(std::string(which) + " sector probabilities do not cover C = " + std::to_string(c));
    }
    const double v = p.probability[c];
    if (!(v > 0.0)) {
        throw NumericError(std::string(which) + " Pr(C = " + std::to_string(c) + ") = " + std::to_string(v) +
                           " is not positive; increase the phase-space sample count");
    }
    return std::log(v);
}

}  // namespace

SectorProbabilities SectorProbabilities::exact(std::vector<double> sectors) {
    SectorProbabilities out;
    out.uncertainty.assign(sectors.size(), 0.0);
    out.probability = std::move(sectors);
    out.source = "exact";
    return out;
}

SectorProbabilities SectorProbabilities::from_estimate(const GroupedClickDistribution &dist) {
    SectorProbabilities out;
    out.probability = dist.probability;
    out.uncertainty = dist.uncertainty;
    out.source = "phase-space";
    return out;
}

SectorProbabilities sector_probabilities(Hypothesis kind, const SqueezeSpec &spec, const TransmissionMatrix &t,
                                         const EstimatorOptions &options) {
    if (t.output_modes() <= kExactSectorModes) {
        const CovarianceMatrix sigma = build_hypothesis(kind, spec, t);
        const std::vector<double> table = probability_table(husimi_from_covariance(sigma), options.precision);
        return SectorProbabilities::exact(sector_sums(table, t.output_modes()));
    }
    return SectorProbabilities::from_estimate(estimate_grouped_clicks(kind, spec, t, options.samples, options.groups,
                                                                      options.seed, options.precision));
}

Precision effective_precision(Precision requested, std::size_t clicks) {
    return clicks >= kForceExtendedClicks ? Precision::kExtended : requested;
}

double conditional_log_prob(const HusimiPair &h, const ClickPattern &s, std::size_t clicks, double pr_clicks,
                            Precision precision) {
    if (s.click_count() != clicks) {
        throw InputError("pattern " + s.to_string() + " has " + std::to_string(s.click_count()) +
                         " clicks, not " + std::to_string(clicks));
    }
    if (!(pr_clicks > 0.0)) {
        throw NumericError("Pr(C = " + std::to_string(clicks) +
                           ") is not positive; increase the phase-space sample count");
    }
    return log_click_probability(h, s, effective_precision(precision, clicks)) - std::log(pr_clicks);
}

double ratio_from_delta(double delta, std::size_t samples) {
    const double x = static_cast<double>(samples) * delta;
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

TestResult bayesian_test(std::span<const SampleSet> sectors, const CovarianceMatrix &ref,
                         const CovarianceMatrix &alt, const SectorProbabilities &ref_sectors,
                         const SectorProbabilities &alt_sectors, Precision precision) {
    const HusimiPair h_ref = husimi_from_covariance(ref);
    const HusimiPair h_alt = husimi_from_covariance(alt);
    TestResult out;
    out.test = "bayes";
    out.probability_source = ref_sectors.source == alt_sectors.source
                                 ? ref_sectors.source
                                 : ref_sectors.source + "/" + alt_sectors.source;
    for (const SampleSet &set : sectors) {
        const std::size_t c = sector_clicks(set);
        const double log_ref_c = log_sector(ref_sectors, c, "reference");
        const double log_alt_c = log_sector(alt_sectors, c, "alternative");
        const std::vector<double> lr = log_probabilities(h_ref, set, precision);
        const std::vector<double> la = log_probabilities(h_alt, set, precision);
        std::vector<double> d(set.size());
        for (std::size_t k = 0; k < set.size(); ++k) {
            d[k] = (la[k] - lr[k]) - (log_alt_c - log_ref_c);
        }
        const MeanVar mv = mean_var(d);
        TestRow row;
        row.clicks = c;
        row.samples = set.size();
        row.delta = static_cast<double>(mv.mean);
        row.sample_std_error = std::sqrt(mv.variance / static_cast<double>(set.size()));
        const double ur = ref_sectors.uncertainty.empty() ? 0.0 : ref_sectors.uncertainty[c] / ref_sectors.probability[c];
        const double ua = alt_sectors.uncertainty.empty() ? 0.0 : alt_sectors.uncertainty[c] / alt_sectors.probability[c];
        row.probability_std_error = std::hypot(ur, ua);
        row.std_error = std::hypot(row.sample_std_error, row.probability_std_error);
        row.ratio = ratio_from_delta(row.delta, row.samples);
        out.rows.push_back(row);
    }
    return out;
}

TestResult hog_test(std::span<const SampleSet> experimental, std::span<const SampleSet> adversary,
                    const CovarianceMatrix &ref, Precision precision) {
    if (experimental.size() != adversary.size()) {
        throw InputError("experimental and adversary sector lists differ in length");
    }
    const HusimiPair h = husimi_from_covariance(ref);
    TestResult out;
    out.test = "hog";
    out.probability_source = "cancels";
    for (std::size_t i = 0; i < experimental.size(); ++i) {
        const std::size_t c = sector_clicks(experimental[i]);
        const std::size_t c_adv = sector_clicks(adversary[i]);
        if (c != c_adv) {
            throw InputError("sector " + std::to_string(i) + " pairs C = " + std::to_string(c) + " with C = " +
                             std::to_string(c_adv));
        }
        if (experimental[i].size() != adversary[i].size()) {
            throw InputError("sample counts differ at C = " + std::to_string(c) + ": " +
                             std::to_string(experimental[i].size()) + " experimental vs " +
                             std::to_string(adversary[i].size()) + " adversary");
        }
        const std::vector<double> le = log_probabilities(h, experimental[i], precision);
        const std::vector<double> la = log_probabilities(h, adversary[i], precision);
        const MeanVar me = mean_var(le);
        const MeanVar ma = mean_var(la);
        const auto l = static_cast<double>(experimental[i].size());
        TestRow row;
        row.clicks = c;
        row.samples = experimental[i].size();
        row.delta = static_cast<double>(ma.mean - me.mean);
        row.sample_std_error = std::sqrt(me.variance / l + ma.variance / l);
        row.probability_std_error = 0.0;
        row.std_error = row.sample_std_error;
        row.ratio = ratio_from_delta(row.delta, row.samples);
        out.rows.push_back(row);
    }
    return out;
}

std::vector<SampleSet> split_by_clicks(const SampleSet &samples, std::span<const std::size_t> clicks,
                                       std::size_t per_sector, bool randomize, std::uint64_t seed) {
    std::vector<SampleSet> out;
    for (std::size_t c : clicks) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (samples[i].click_count() == c) {
                idx.push_back(i);
            }
        }
        if (randomize && idx.size() > per_sector) {
            Rng rng = make_rng(seed, Stream::kSelection, c);
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(per_sector);
            std::sort(idx.begin(), idx.end());
        } else if (idx.size() > per_sector) {
            idx.resize(per_sector);
        }
        SampleSet set(samples.modes(), samples.source());
        for (std::size_t i : idx) {
            set.push_back(samples[i]);
        }
        out.push_back(std::move(set));
    }
    return out;
}

}  // namespace tgbs
