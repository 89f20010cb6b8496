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

#include "tgbs/acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tgbs/clickstats.h"
#include "tgbs/double_double.h"
#include "tgbs/error.h"
#include "tgbs/instance.h"
#include "tgbs/io.h"
#include "tgbs/phasespace.h"
#include "tgbs/random.h"
#include "tgbs/sampler.h"
#include "tgbs/torontonian.h"
#include "tgbs/validation.h"

namespace tgbs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Outcome {
    CriterionStatus status;
    std::string detail;
};

Outcome pass_if(bool ok, std::string detail) {
    return {ok ? CriterionStatus::kPass : CriterionStatus::kFail, std::move(detail)};
}

// 1. Every table of a mixed set of small instances sums to one.
Outcome normalization(std::uint64_t seed) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng = make_rng(seed, Stream::kInstance, 1000 + i);
        std::uniform_real_distribution<double> r_dist(0.3, 1.2);
        std::vector<double> r(3);
        for (double &x : r) {
            x = r_dist(rng);
        }
        const double eta = i % 2 == 0 ? 0.3 : 0.7;
        const Hypothesis kind = (i / 2) % 2 == 0 ? Hypothesis::kSqueezed : Hypothesis::kSquashed;
        const DeskInstance inst = make_desk_instance(6, r, eta, seed, i);
        const CovarianceMatrix sigma = build_hypothesis(kind, inst.spec, inst.t);
        const std::vector<double> table = probability_table(husimi_from_covariance(sigma));
        DoubleDouble total(0.0);
        for (double p : table) {
            total += p;
        }
        worst = std::max(worst, std::abs(static_cast<double>(total) - 1.0));
    }
    const double secs = seconds_since(t0);
    return pass_if(worst <= 1e-9 && secs < 30.0,
                   "max |sum Pr(s) - 1| = " + fmt("%.3g", worst) + " over 20 instances, " + fmt("%.2f", secs) + " s");
}

// 2. Closed forms for one squashed mode and one squeezed vacuum.
Outcome analytic_single_mode() {
    double worst = 0.0;
    const ClickPattern click = ClickPattern::from_string("1");
    const ClickPattern none = ClickPattern::from_string("0");
    for (double n : {0.1, 0.5, 2.0}) {
        RealMatrix s = RealMatrix::Identity(2, 2);
        s(0, 0) = 1.0 + 4.0 * n;
        const HusimiPair h = husimi_from_covariance(CovarianceMatrix(s));
        const double expected = 1.0 - 1.0 / std::sqrt(1.0 + 2.0 * n);
        worst = std::max(worst, std::abs(click_probability(h, click) - expected));
    }
    for (double r : {0.5, 1.0, 2.0}) {
        RealMatrix s = RealMatrix::Zero(2, 2);
        s(0, 0) = std::exp(2.0 * r);
        s(1, 1) = std::exp(-2.0 * r);
        const HusimiPair h = husimi_from_covariance(CovarianceMatrix(s));
        worst = std::max(worst, std::abs(click_probability(h, none) - 1.0 / std::cosh(r)));
    }
    return pass_if(worst <= 1e-12, "max abs error = " + fmt("%.3g", worst));
}

// 3. Thermal mode with one mean photon clicks with probability exactly 1/2.
Outcome thermal_sign() {
    const std::vector<double> n = {1.0};
    const HusimiPair h = husimi_from_covariance(CovarianceMatrix::thermal(n));
    const double p = click_probability(h, ClickPattern::from_string("1"));
    return pass_if(std::abs(p - 0.5) <= 1e-15, "Pr(click) = " + fmt("%.17g", p));
}

// Joint cumulant of 0/1 variables from central moments of a full table.
double table_cumulant(const std::vector<double> &table, std::size_t m, const ModeSubset &modes) {
    std::vector<double> mean(m, 0.0);
    for (std::size_t mask = 0; mask < table.size(); ++mask) {
        for (std::size_t j = 0; j < m; ++j) {
            if ((mask >> j) & 1U) {
                mean[j] += table[mask];
            }
        }
    }
    auto central = [&](std::initializer_list<std::size_t> idx) {
        double acc = 0.0;
        for (std::size_t mask = 0; mask < table.size(); ++mask) {
            double prod = table[mask];
            for (std::size_t j : idx) {
                prod *= static_cast<double>((mask >> j) & 1U) - mean[j];
            }
            acc += prod;
        }
        return acc;
    };
    const auto &s = modes;
    switch (s.size()) {
        case 1:
            return mean[s[0]];
        case 2:
            return central({s[0], s[1]});
        case 3:
            return central({s[0], s[1], s[2]});
        case 4:
            return central({s[0], s[1], s[2], s[3]}) - central({s[0], s[1]}) * central({s[2], s[3]}) -
                   central({s[0], s[2]}) * central({s[1], s[3]}) - central({s[0], s[3]}) * central({s[1], s[2]});
        default:
            throw InputError("unsupported order");
    }
}

// 4. Partition-formula cumulants equal central-moment cumulants of the full table.
Outcome cumulant_equivalence(std::uint64_t seed) {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        const DeskInstance inst = make_desk_instance(5, {0.8, 0.6, 1.0}, 0.6, seed, 2000 + i);
        const Hypothesis kind = i % 2 == 0 ? Hypothesis::kSqueezed : Hypothesis::kSquashed;
        const CovarianceMatrix sigma = build_hypothesis(kind, inst.spec, inst.t);
        const HusimiPair h = husimi_from_covariance(sigma);
        const std::vector<double> table = probability_table(h);
        for (std::size_t order = 1; order <= 4; ++order) {
            for (const ModeSubset &s : all_mode_subsets(5, order)) {
                const double a = cumulant_from_moments(
                    [&](std::span<const std::size_t> b) { return theoretical_moment(h, b); }, s);
                const double b = table_cumulant(table, 5, s);
                worst = std::max(worst, std::abs(a - b));
            }
        }
    }
    return pass_if(worst <= 1e-9, "max |difference| = " + fmt("%.3g", worst) + " over 10 instances, orders 1-4");
}

// 5. Grouped estimator against exact sector sums.
Outcome phase_space_vs_exact(std::uint64_t seed) {
    const auto t0 = Clock::now();
    const DeskInstance inst = make_desk_instance(8, {1.0, 0.8, 0.9, 0.7}, 0.5, seed, 3000);
    std::size_t compared = 0, failed = 0;
    double worst_z = 0.0, worst_z_spread = 0.0;
    for (Hypothesis kind : {Hypothesis::kSqueezed, Hypothesis::kSquashed}) {
        const CovarianceMatrix sigma = build_hypothesis(kind, inst.spec, inst.t);
        const std::vector<double> exact = sector_sums(probability_table(husimi_from_covariance(sigma)), 8);
        const GroupedClickDistribution est =
            estimate_grouped_clicks(kind, inst.spec, inst.t, 1000000, 100, derive_seed(seed, Stream::kAmplitudes, 5),
                                    Precision::kDouble);
        for (std::size_t c = 0; c < exact.size(); ++c) {
            if (exact[c] <= 1e-4) {
                continue;
            }
            ++compared;
            const double diff = std::abs(est.probability[c] - exact[c]);
            const double z = diff / est.std_error_of_mean(c);
            worst_z = std::max(worst_z, z);
            worst_z_spread = std::max(worst_z_spread, diff / est.uncertainty[c]);
            if (z > 3.0) {
                ++failed;
            }
        }
    }
    const double secs = seconds_since(t0);
    return pass_if(failed == 0 && secs < 60.0,
                   std::to_string(compared) + " sectors, " + std::to_string(failed) +
                       " outside 3 standard errors of the mean; max z = " + fmt("%.2f", worst_z) +
                       " (group-spread units " + fmt("%.3f", worst_z_spread) + "), " + fmt("%.1f", secs) + " s");
}

// 6. Squashed sampler against the exact squashed table.
Outcome sampler_fidelity(std::uint64_t seed) {
    const DeskInstance inst = make_desk_instance(8, {1.0, 0.8, 0.9, 0.7}, 0.5, seed, 4000);
    const CovarianceMatrix sigma = build_hypothesis(Hypothesis::kSquashed, inst.spec, inst.t);
    const HusimiPair h = husimi_from_covariance(sigma);
    const std::vector<double> table = probability_table(h);
    SamplerConfig cfg;
    cfg.spec = inst.spec;
    cfg.t = inst.t;
    cfg.samples = 1000000;
    cfg.seed = derive_seed(seed, Stream::kSquashedSampler, 6);
    const SampleSet samples = sample_squashed(cfg);
    const auto l = static_cast<double>(samples.size());
    std::vector<double> counts(256, 0.0);
    for (const ClickPattern &p : samples.patterns()) {
        counts[p.mask()] += 1.0;
    }
    double tvd = 0.0;
    for (std::size_t i = 0; i < 256; ++i) {
        tvd += std::abs(counts[i] / l - table[i]);
    }
    tvd *= 0.5;
    const double bound = 5.0 * std::sqrt(256.0 / l);
    double worst_z = 0.0;
    for (std::size_t order = 1; order <= 2; ++order) {
        for (const ModeSubset &s : all_mode_subsets(8, order)) {
            const double p = marginal_probability(h, s);
            const double f = empirical_moment(samples, s);
            worst_z = std::max(worst_z, std::abs(f - p) / std::sqrt(p * (1.0 - p) / l));
        }
    }
    return pass_if(tvd <= bound && worst_z <= 4.0, "TVD = " + fmt("%.4f", tvd) + " (bound " + fmt("%.3f", bound) +
                                                       "), max marginal z = " + fmt("%.2f", worst_z));
}

// 7. Bayesian test leans toward the hypothesis that generated the samples.
Outcome bayesian_direction(std::uint64_t seed) {
    const std::vector<std::size_t> sectors = {2, 3, 4};
    std::vector<std::size_t> squa_ok(sectors.size(), 0), sque_ok(sectors.size(), 0);
    const std::size_t seeds = 20;
    for (std::uint64_t s = 0; s < seeds; ++s) {
        const DeskInstance inst = make_desk_instance(10, std::vector<double>(5, 1.0), 0.5, seed, 5000 + s);
        const CovarianceMatrix sque = build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t);
        const CovarianceMatrix squa = build_hypothesis(Hypothesis::kSquashed, inst.spec, inst.t);
        const ExactSampler ex_sque(sque), ex_squa(squa);
        const SectorProbabilities p_sque = SectorProbabilities::exact(ex_sque.sectors());
        const SectorProbabilities p_squa = SectorProbabilities::exact(ex_squa.sectors());
        const std::uint64_t sample_seed = derive_seed(seed, Stream::kExactSampler, 7000 + s);
        std::vector<SampleSet> from_squa, from_sque;
        for (std::size_t c : sectors) {
            from_squa.push_back(ex_squa.sample_sector(c, 2000, sample_seed));
            from_sque.push_back(ex_sque.sample_sector(c, 2000, sample_seed));
        }
        const TestResult a = bayesian_test(from_squa, sque, squa, p_sque, p_squa);
        const TestResult b = bayesian_test(from_sque, sque, squa, p_sque, p_squa);
        for (std::size_t i = 0; i < sectors.size(); ++i) {
            const TestRow &ra = a.rows[i];
            const TestRow &rb = b.rows[i];
            if (ra.delta > 0.0 && ra.delta > 3.0 * ra.std_error) {
                ++squa_ok[i];
            }
            if (rb.delta < 0.0 && -rb.delta > 3.0 * rb.std_error) {
                ++sque_ok[i];
            }
        }
    }
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < sectors.size(); ++i) {
        ok = ok && squa_ok[i] * 10 >= seeds * 9 && sque_ok[i] * 10 >= seeds * 9;
        d << "C=" << sectors[i] << ": SQUA samples " << squa_ok[i] << "/" << seeds << ", SQUE samples " << sque_ok[i]
          << "/" << seeds << (i + 1 < sectors.size() ? "; " : "");
    }
    return pass_if(ok, d.str());
}

// 8. Exact squeezed samples are heavier than squashed-sampler output.
Outcome hog_direction(std::uint64_t seed) {
    const std::vector<std::size_t> sectors = {2, 3, 4};
    std::vector<std::size_t> ok_count(sectors.size(), 0);
    const std::size_t seeds = 20;
    for (std::uint64_t s = 0; s < seeds; ++s) {
        const DeskInstance inst = make_desk_instance(10, std::vector<double>(5, 1.0), 0.5, seed, 5000 + s);
        const CovarianceMatrix sque = build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t);
        const ExactSampler ex_sque(sque);
        const std::uint64_t sample_seed = derive_seed(seed, Stream::kExactSampler, 8000 + s);
        std::vector<SampleSet> experimental, adversary;
        for (std::size_t c : sectors) {
            experimental.push_back(ex_sque.sample_sector(c, 2000, sample_seed));
            SamplerConfig cfg;
            cfg.spec = inst.spec;
            cfg.t = inst.t;
            cfg.samples = 2000;
            cfg.seed = derive_seed(seed, Stream::kSquashedSampler, 8000 + 16 * s + c);
            cfg.condition_clicks = c;
            adversary.push_back(sample_squashed(cfg));
        }
        const TestResult r = hog_test(experimental, adversary, sque);
        for (std::size_t i = 0; i < sectors.size(); ++i) {
            if (r.rows[i].delta < 0.0 && -r.rows[i].delta > 3.0 * r.rows[i].std_error) {
                ++ok_count[i];
            }
        }
    }
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < sectors.size(); ++i) {
        ok = ok && ok_count[i] * 10 >= seeds * 9;
        d << "C=" << sectors[i] << ": " << ok_count[i] << "/" << seeds << (i + 1 < sectors.size() ? "; " : "");
    }
    return pass_if(ok, d.str());
}

// 9. Identical inputs give exactly zero differences.
Outcome identity_degeneracies(std::uint64_t seed) {
    const DeskInstance inst = make_desk_instance(6, {0.9, 0.7, 1.1}, 0.6, seed, 9000);
    const CovarianceMatrix sque = build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t);
    const ExactSampler ex(sque);
    const SectorProbabilities p = SectorProbabilities::exact(ex.sectors());
    std::vector<SampleSet> sets;
    for (std::size_t c : {1, 2, 3}) {
        sets.push_back(ex.sample_sector(c, 200, seed));
    }
    const TestResult b = bayesian_test(sets, sque, sque, p, p);
    const TestResult h = hog_test(sets, sets, sque);
    bool ok = true;
    for (const TestResult *r : {&b, &h}) {
        for (const TestRow &row : r->rows) {
            ok = ok && row.delta == 0.0 && row.ratio == 0.5;
        }
    }
    return pass_if(ok, ok ? "delta = 0 and ratio = 1/2 in every sector of both tests" : "nonzero delta found");
}

// 10. Timing of a 16-click pattern at M = 144 and precision agreement at 14 clicks.
Outcome performance(std::uint64_t seed) {
    const DeskInstance inst = make_desk_instance(144, std::vector<double>(72, 1.0), 0.5, seed, 10000);
    const CovarianceMatrix sigma = build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t);
    const HusimiPair h = husimi_from_covariance(sigma);
    Rng rng = make_rng(seed, Stream::kSelection, 10);
    std::vector<std::size_t> modes(144);
    std::iota(modes.begin(), modes.end(), 0);
    std::shuffle(modes.begin(), modes.end(), rng);
    ClickPattern s16(144), s14(144);
    for (std::size_t i = 0; i < 16; ++i) {
        s16.set(modes[i]);
    }
    for (std::size_t i = 0; i < 14; ++i) {
        s14.set(modes[i]);
    }
    const auto t0 = Clock::now();
    const double p16 = click_probability(h, s16, Precision::kDouble);
    const double secs = seconds_since(t0);
    const double d14 = click_probability(h, s14, Precision::kDouble);
    const double x14 = click_probability(h, s14, Precision::kExtended);
    const double rel = std::abs(d14 - x14) / std::abs(x14);
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    return pass_if(secs < 10.0 && rel <= 1e-9, "C=16: " + fmt("%.3f", secs) + " s on " + std::to_string(threads) +
                                                   " thread(s), Pr = " + fmt("%.6g", p16) +
                                                   "; C=14 double/extended relative difference " + fmt("%.3g", rel));
}

// 11. Click/photon relation; soft.
Outcome click_photon_relation(std::uint64_t seed) {
    std::ostringstream d;
    bool within = true;
    for (double nu : {0.1, 0.5, 1.0}) {
        const double r = squeezing_for_density(nu, 0.6);
        const DeskInstance inst = make_desk_instance(16, std::vector<double>(8, r), 0.6, seed, 11000);
        const CovarianceMatrix sigma = build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t);
        const ClickMoments cm = click_count_mean_std(sigma);
        const double dev = click_photon_relation_check(sigma, cm.mean);
        within = within && dev < 0.15;
        d << "nu=" << nu << ": " << fmt("%.4f", dev) << (nu < 1.0 ? ", " : "");
    }
    return {within ? CriterionStatus::kPass : CriterionStatus::kFinding, "relative deviation " + d.str()};
}

// 12. Published summary values for an external dataset.
Outcome data_backed(const AcceptanceOptions &options) {
    if (!options.data_manifest) {
        return {CriterionStatus::kSkip, "no external dataset supplied"};
    }
    const ExperimentBundle b = load_bundle(*options.data_manifest);
    const std::size_t n = options.data_phase_space_samples - options.data_phase_space_samples % 100;
    const GroupedClickDistribution est =
        estimate_grouped_clicks(Hypothesis::kSqueezed, b.spec, b.t, n, 100, options.seed, Precision::kDouble);
    const ClickSummary s = summarize(est);
    const bool ok = std::abs(s.mean - 41.042) <= 0.007 + s.mean_uncertainty &&
                    std::abs(s.stddev - 6.509) <= 0.022 + s.stddev_uncertainty;
    return pass_if(ok, "SQUE mean clicks " + fmt("%.3f", s.mean) + " +- " + fmt("%.3f", s.mean_uncertainty) +
                           ", stddev " + fmt("%.3f", s.stddev) + " +- " + fmt("%.3f", s.stddev_uncertainty) +
                           "; sector sign structure is checked with the bayes and hog subcommands");
}

}  // namespace

std::string_view to_string(CriterionStatus s) {
    switch (s) {
        case CriterionStatus::kPass:
            return "PASS";
        case CriterionStatus::kFail:
            return "FAIL";
        case CriterionStatus::kFinding:
            return "FINDING";
        case CriterionStatus::kSkip:
            return "SKIP";
    }
    return "?";
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &options, std::ostream &out) {
    const std::uint64_t seed = options.seed;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"normalization", [&] { return normalization(seed); }},
        {"analytic single-mode oracles", [] { return analytic_single_mode(); }},
        {"thermal sign oracle", [] { return thermal_sign(); }},
        {"cumulant equivalence", [&] { return cumulant_equivalence(seed); }},
        {"phase-space vs exact", [&] { return phase_space_vs_exact(seed); }},
        {"sampler fidelity", [&] { return sampler_fidelity(seed); }},
        {"Bayesian direction", [&] { return bayesian_direction(seed); }},
        {"HOG direction", [&] { return hog_direction(seed); }},
        {"identity degeneracies", [&] { return identity_degeneracies(seed); }},
        {"performance", [&] { return performance(seed); }},
        {"click/photon relation (soft)", [&] { return click_photon_relation(seed); }},
        {"external data (optional)", [&] { return data_backed(options); }},
    };
    std::vector<CriterionResult> results;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
            continue;
        }
        CriterionResult r;
        r.id = id;
        r.name = criteria[i].first;
        const auto t0 = Clock::now();
        try {
            const Outcome o = criteria[i].second();
            r.status = o.status;
            r.detail = o.detail;
        } catch (const std::exception &e) {
            r.status = CriterionStatus::kFail;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = seconds_since(t0);
        out << "[" << to_string(r.status) << "] " << r.id << " " << r.name << ": " << r.detail << " ("
            << fmt("%.1f", r.seconds) << " s)" << std::endl;
        results.push_back(std::move(r));
    }
    return results;
}

bool acceptance_passed(const std::vector<CriterionResult> &results) {
    return std::none_of(results.begin(), results.end(),
                        [](const CriterionResult &r) { return r.status == CriterionStatus::kFail; });
}

}  // namespace tgbs
