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

// Command-line driver: builds hypotheses from an experiment bundle, estimates
// grouped click distributions, samples, and runs the validation tests.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tgbs/acceptance.h"
#include "tgbs/clickstats.h"
#include "tgbs/error.h"
#include "tgbs/gaussian.h"
#include "tgbs/instance.h"
#include "tgbs/io.h"
#include "tgbs/log.h"
#include "tgbs/phasespace.h"
#include "tgbs/report.h"
#include "tgbs/sampler.h"
#include "tgbs/torontonian.h"
#include "tgbs/validation.h"

namespace fs = std::filesystem;
using namespace tgbs;

namespace {

constexpr const char *kVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct Globals {
    std::uint64_t seed = 1;
    std::string precision = "double";
    int threads = 0;
    std::string out_dir = "tgbs_out";
    bool hbar_check = false;
};

// Thrown by subcommands whose test asserted false.
class ValidationFailure : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::vector<Hypothesis> hypotheses_from(const std::string &which) {
    if (which == "both") {
        return {Hypothesis::kSqueezed, Hypothesis::kSquashed};
    }
    return {parse_hypothesis(which)};
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char &c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

void hbar_check(const CovarianceMatrix &sigma) {
    // The same state written with hbar = 1 must give identical Husimi matrices.
    const HusimiPair a = husimi_from_covariance(sigma, kHbar);
    const HusimiPair b = husimi_from_covariance(CovarianceMatrix(sigma.matrix() * (1.0 / kHbar)), 1.0);
    const double diff = (a.sigma - b.sigma).cwiseAbs().maxCoeff();
    if (diff > 1e-12) {
        throw NumericError("hbar consistency check failed: max difference " + format_double(diff));
    }
}

nlohmann::ordered_json run_header(const Globals &g, const std::string &command) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["seed"] = g.seed;
    j["precision"] = g.precision;
    return j;
}

template <typename Fn>
int run_with_report(const Globals &g, const std::string &command, Fn &&body) {
    const auto t0 = std::chrono::steady_clock::now();
    ReportWriter report(g.out_dir);
    report.summary() = run_header(g, command);
    body(report);
    report.summary()["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.finish();
    return kExitOk;
}

SampleSet samples_for(const ExperimentBundle &b, const std::string &path) {
    if (!path.empty()) {
        return read_samples(path, b.output_modes());
    }
    if (b.samples.empty()) {
        throw InputError("no sample file given and the bundle lists none");
    }
    return b.samples.front();
}

std::vector<std::size_t> parse_clicks(const std::vector<std::size_t> &clicks, const SampleSet &samples) {
    if (!clicks.empty()) {
        return clicks;
    }
    std::vector<std::size_t> out;
    const auto hist = samples.click_histogram();
    for (std::size_t c = 0; c < hist.size(); ++c) {
        if (hist[c] > 0) {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<SampleSet> nonempty(std::vector<SampleSet> sets, const std::vector<std::size_t> &clicks) {
    std::vector<SampleSet> out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].empty()) {
            warn("no samples with " + std::to_string(clicks[i]) + " clicks; sector skipped");
        } else {
            out.push_back(std::move(sets[i]));
        }
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Threshold-detector Gaussian boson sampling: exact probabilities, samplers and validation tests"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Master seed for every random stream");
    app.add_option("--precision", g.precision, "Torontonian arithmetic: double or extended")
        ->check(CLI::IsMember({"double", "extended"}));
    app.add_option("--threads", g.threads, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    app.add_option("--out-dir", g.out_dir, "Directory for CSV tables and summary.json");
    app.add_flag("--hbar-check", g.hbar_check, "Verify the Husimi matrices do not depend on the hbar convention");
    app.add_flag("--quiet", [](std::int64_t) { set_warnings_enabled(false); }, "Silence warnings");

    std::string bundle_path;
    auto add_bundle = [&](CLI::App *sub) { sub->add_option("--bundle", bundle_path, "Experiment manifest")->required(); };

    // hypothesis
    auto *hyp = app.add_subcommand("hypothesis", "Photon and click statistics of both hypotheses");
    add_bundle(hyp);

    // grouped
    auto *grouped = app.add_subcommand("grouped", "Phase-space estimate of Pr(C)");
    add_bundle(grouped);
    std::size_t ps_samples = kDefaultPhaseSpaceSamples;
    std::size_t ps_groups = kDefaultPhaseSpaceGroups;
    std::string which = "both";
    grouped->add_option("--n-samples", ps_samples, "Amplitude draws");
    grouped->add_option("--groups", ps_groups, "Groups for the uncertainty");
    grouped->add_option("--hypothesis", which, "sque, squa or both");

    // sample
    auto *sample = app.add_subcommand("sample", "Draw click patterns");
    add_bundle(sample);
    std::string sampler_kind = "squashed";
    std::string sample_hyp = "squa";
    std::size_t n_samples = 1000;
    std::optional<std::size_t> cond_clicks;
    std::size_t cap = kDefaultRejectionCap;
    std::string output;
    sample->add_option("--sampler", sampler_kind, "squashed or exact")->check(CLI::IsMember({"squashed", "exact"}));
    sample->add_option("--hypothesis", sample_hyp, "Hypothesis for the exact sampler");
    sample->add_option("-n,--count", n_samples, "Number of patterns");
    sample->add_option("--clicks", cond_clicks, "Keep only patterns with this many clicks");
    sample->add_option("--cap", cap, "Rejection cap in draws");
    sample->add_option("-o,--output", output, "Sample file (default <out-dir>/samples.txt)");

    // cumulants
    auto *cum = app.add_subcommand("cumulants", "Theory vs empirical click cumulants");
    add_bundle(cum);
    std::string samples_path;
    std::vector<std::size_t> orders = {1, 2, 3, 4};
    std::size_t subsets = 1000;
    std::size_t resamples = kDefaultBootstrapResamples;
    cum->add_option("--samples", samples_path, "Sample file (default: first in bundle)");
    cum->add_option("--orders", orders, "Cumulant orders");
    cum->add_option("--subsets", subsets, "Random mode subsets per order");
    cum->add_option("--resamples", resamples, "Bootstrap resamples");

    // bayes and hog share the sector selection
    std::vector<std::size_t> clicks;
    std::size_t per_sector = kDefaultSectorSamples;
    bool randomize = false;
    auto add_sectors = [&](CLI::App *sub) {
        sub->add_option("--samples", samples_path, "Experimental sample file (default: first in bundle)");
        sub->add_option("--clicks", clicks, "Click numbers to test (default: all present)");
        sub->add_option("--per-sector", per_sector, "Samples per click number");
        sub->add_flag("--randomize", randomize, "Pick a random subset per sector instead of the first ones");
        sub->add_option("--n-samples", ps_samples, "Phase-space draws when Pr(C) is estimated");
        sub->add_option("--groups", ps_groups, "Phase-space groups");
    };
    auto *bayes = app.add_subcommand("bayes", "Bayesian test between the hypotheses");
    add_bundle(bayes);
    add_sectors(bayes);
    std::string ref_hyp = "sque", alt_hyp = "squa";
    bayes->add_option("--reference", ref_hyp, "Reference hypothesis");
    bayes->add_option("--alternative", alt_hyp, "Alternative hypothesis");

    auto *hog = app.add_subcommand("hog", "Heavy-output test against squashed-sampler output");
    add_bundle(hog);
    add_sectors(hog);
    std::string adversary_path;
    hog->add_option("--adversary", adversary_path, "Adversary sample file (default: generated, matched per sector)");

    // selftest
    auto *self = app.add_subcommand("selftest", "Run the acceptance criteria");
    std::vector<int> only;
    std::string data_manifest;
    self->add_option("--only", only, "Criterion numbers to run");
    self->add_option("--data", data_manifest, "External dataset manifest for the data-backed criterion");

    // convert
    auto *conv = app.add_subcommand("convert", "Convert foreign sample formats to bit strings");
    std::string conv_format = "spaced-bits", conv_in, conv_out;
    std::size_t conv_modes = 0;
    conv->add_option("--format", conv_format, "spaced-bits or click-indices")
        ->check(CLI::IsMember({"spaced-bits", "click-indices"}));
    conv->add_option("--input", conv_in, "Input file")->required();
    conv->add_option("--output", conv_out, "Output bit-string file")->required();
    conv->add_option("--modes", conv_modes, "Mode count (required for click-indices)");

    // synth
    auto *synth = app.add_subcommand("synth", "Write a synthetic bundle with a lossy Haar interferometer");
    std::size_t synth_modes = 8;
    std::vector<double> synth_r = {1.0};
    std::size_t synth_pairs = 0;
    double synth_eta = 0.5;
    std::string synth_name = "desk";
    std::size_t synth_samples = 0;
    synth->add_option("--modes", synth_modes, "Output modes M");
    synth->add_option("--pairs", synth_pairs, "Two-mode squeezers (default M/2)");
    synth->add_option("--r", synth_r, "Pair squeezing; one value is repeated for every pair");
    synth->add_option("--eta", synth_eta, "Uniform transmission");
    synth->add_option("--name", synth_name, "Bundle name");
    synth->add_option("--exact-samples", synth_samples, "Also write this many exact SQUE samples (M <= 12)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return e.get_exit_code() == 0 ? code : kExitInput;
    }

#ifdef _OPENMP
    if (g.threads > 0) {
        omp_set_num_threads(g.threads);
    }
#endif

    try {
        const Precision precision = parse_precision(g.precision);
        auto load = [&] {
            ExperimentBundle b = load_bundle(bundle_path);
            if (g.hbar_check) {
                for (Hypothesis h : {Hypothesis::kSqueezed, Hypothesis::kSquashed}) {
                    hbar_check(build_hypothesis(h, b.spec, b.t));
                }
            }
            return b;
        };
        auto bundle_json = [](const ExperimentBundle &b) {
            return nlohmann::ordered_json{{"name", b.name},
                                          {"manifest", b.manifest.string()},
                                          {"output_modes", b.output_modes()},
                                          {"input_modes", b.input_modes()}};
        };

        if (*hyp) {
            const ExperimentBundle b = load();
            return run_with_report(g, "hypothesis", [&](ReportWriter &report) {
                report.summary()["bundle"] = bundle_json(b);
                std::vector<Row> rows;
                for (Hypothesis h : {Hypothesis::kSqueezed, Hypothesis::kSquashed}) {
                    const CovarianceMatrix sigma = build_hypothesis(h, b.spec, b.t);
                    const ClickMoments cm = click_count_mean_std(sigma);
                    const double n = mean_photon_number(sigma);
                    const double dev = cm.mean > 0.0 ? click_photon_relation_check(sigma, cm.mean) : 0.0;
                    rows.push_back({std::string(to_string(h)), format_double(n), format_double(photon_density(sigma)),
                                    format_double(cm.mean), format_double(cm.stddev), format_double(dev)});
                    std::cout << to_string(h) << ": nu = " << photon_density(sigma) << ", mean clicks = " << cm.mean
                              << ", stddev = " << cm.stddev << "\n";
                }
                report.write_csv("hypothesis.csv",
                                 {"hypothesis", "mean_photons", "density", "mean_clicks", "stddev_clicks",
                                  "relation_deviation"},
                                 rows);
            });
        }

        if (*grouped) {
            const ExperimentBundle b = load();
            bool normalized = true;
            run_with_report(g, "grouped", [&](ReportWriter &report) {
                report.summary()["bundle"] = bundle_json(b);
                report.summary()["samples"] = ps_samples;
                report.summary()["groups"] = ps_groups;
                for (Hypothesis h : hypotheses_from(which)) {
                    const GroupedClickDistribution d =
                        estimate_grouped_clicks(h, b.spec, b.t, ps_samples, ps_groups, g.seed, precision);
                    const std::string name = lower(to_string(h));
                    report.write_csv("grouped_" + name + ".csv", kGroupedHeader, grouped_rows(d));
                    nlohmann::ordered_json j = to_json(summarize(d));
                    j["total"] = d.total();
                    j["total_uncertainty"] = d.total_uncertainty();
                    j["max_imaginary"] = d.max_imaginary;
                    report.summary()[std::string(to_string(h))] = j;
                    const bool ok = std::abs(d.total() - 1.0) <= 3.0 * d.total_uncertainty() + 1e-12;
                    normalized = normalized && ok;
                    std::cout << to_string(h) << ": sum Pr(C) = " << d.total() << " +- " << d.total_uncertainty()
                              << "\n";
                }
                report.summary()["normalized"] = normalized;
            });
            if (!normalized) {
                throw ValidationFailure("grouped probabilities do not sum to one within 3 uncertainties");
            }
            return kExitOk;
        }

        if (*sample) {
            const ExperimentBundle b = load();
            SampleSet out;
            if (sampler_kind == "squashed") {
                SamplerConfig cfg;
                cfg.kind = parse_hypothesis(sample_hyp);
                cfg.spec = b.spec;
                cfg.t = b.t;
                cfg.samples = n_samples;
                cfg.seed = g.seed;
                cfg.condition_clicks = cond_clicks;
                cfg.rejection_cap = cap;
                out = sample_squashed(cfg);
            } else {
                const ExactSampler ex(build_hypothesis(parse_hypothesis(sample_hyp), b.spec, b.t), precision);
                out = cond_clicks ? ex.sample_sector(*cond_clicks, n_samples, g.seed) : ex.sample(n_samples, g.seed);
            }
            const fs::path path = output.empty() ? fs::path(g.out_dir) / "samples.txt" : fs::path(output);
            if (!path.parent_path().empty()) {
                fs::create_directories(path.parent_path());
            }
            write_samples(path, out);
            std::cout << "wrote " << out.size() << " patterns to " << path.string()
                      << (out.incomplete() ? " (rejection cap reached)" : "") << "\n";
            return kExitOk;
        }

        if (*cum) {
            const ExperimentBundle b = load();
            const SampleSet samples = samples_for(b, samples_path);
            const CovarianceMatrix sque = build_hypothesis(Hypothesis::kSqueezed, b.spec, b.t);
            const CovarianceMatrix squa = build_hypothesis(Hypothesis::kSquashed, b.spec, b.t);
            return run_with_report(g, "cumulants", [&](ReportWriter &report) {
                report.summary()["bundle"] = bundle_json(b);
                report.summary()["samples"] = samples.size();
                std::vector<ModeSubset> chosen;
                for (std::size_t order : orders) {
                    auto s = random_mode_subsets(b.output_modes(), order, subsets, g.seed);
                    chosen.insert(chosen.end(), s.begin(), s.end());
                }
                const std::vector<CumulantRecord> records = compare_cumulants(sque, squa, samples, chosen);
                report.write_csv("cumulants.csv", kCumulantHeader, cumulant_rows(records));
                report.summary()["correlations"] = to_json(correlation_summary(records, resamples, g.seed));
            });
        }

        if (*bayes) {
            const ExperimentBundle b = load();
            const SampleSet samples = samples_for(b, samples_path);
            const std::vector<std::size_t> cs = parse_clicks(clicks, samples);
            const std::vector<SampleSet> sectors =
                nonempty(split_by_clicks(samples, cs, per_sector, randomize, g.seed), cs);
            const Hypothesis ref = parse_hypothesis(ref_hyp);
            const Hypothesis alt = parse_hypothesis(alt_hyp);
            const EstimatorOptions opts{ps_samples, ps_groups, g.seed, precision};
            const SectorProbabilities p_ref = sector_probabilities(ref, b.spec, b.t, opts);
            const SectorProbabilities p_alt = sector_probabilities(alt, b.spec, b.t, opts);
            TestResult r = bayesian_test(sectors, build_hypothesis(ref, b.spec, b.t),
                                         build_hypothesis(alt, b.spec, b.t), p_ref, p_alt, precision);
            r.hypotheses = std::string(to_string(alt)) + "/" + std::string(to_string(ref));
            return run_with_report(g, "bayes", [&](ReportWriter &report) {
                report.summary()["bundle"] = bundle_json(b);
                report.summary()["result"] = to_json(r);
                report.write_csv("bayes.csv", kTestHeader, test_rows(r));
            });
        }

        if (*hog) {
            const ExperimentBundle b = load();
            const SampleSet samples = samples_for(b, samples_path);
            const std::vector<std::size_t> cs = parse_clicks(clicks, samples);
            std::vector<SampleSet> experimental;
            std::vector<std::size_t> kept;
            {
                auto sets = split_by_clicks(samples, cs, per_sector, randomize, g.seed);
                for (std::size_t i = 0; i < sets.size(); ++i) {
                    if (!sets[i].empty()) {
                        experimental.push_back(std::move(sets[i]));
                        kept.push_back(cs[i]);
                    } else {
                        warn("no samples with " + std::to_string(cs[i]) + " clicks; sector skipped");
                    }
                }
            }
            std::vector<SampleSet> adversary;
            if (!adversary_path.empty()) {
                const SampleSet adv = read_samples(adversary_path, b.output_modes(), SampleSource::kSquashedSampler);
                for (std::size_t i = 0; i < kept.size(); ++i) {
                    auto one = split_by_clicks(adv, std::span(&kept[i], 1), experimental[i].size(), false, g.seed);
                    adversary.push_back(std::move(one.front()));
                }
            } else {
                for (std::size_t i = 0; i < kept.size(); ++i) {
                    SamplerConfig cfg;
                    cfg.spec = b.spec;
                    cfg.t = b.t;
                    cfg.samples = experimental[i].size();
                    cfg.seed = derive_seed(g.seed, Stream::kSquashedSampler, kept[i]);
                    cfg.condition_clicks = kept[i];
                    adversary.push_back(sample_squashed(cfg));
                }
            }
            TestResult r = hog_test(experimental, adversary, build_hypothesis(Hypothesis::kSqueezed, b.spec, b.t),
                                    precision);
            r.hypotheses = "SQUE";
            return run_with_report(g, "hog", [&](ReportWriter &report) {
                report.summary()["bundle"] = bundle_json(b);
                report.summary()["result"] = to_json(r);
                report.write_csv("hog.csv", kTestHeader, test_rows(r));
            });
        }

        if (*self) {
            AcceptanceOptions opts;
            opts.seed = app.get_option("--seed")->count() ? g.seed : opts.seed;
            opts.only = only;
            if (!data_manifest.empty()) {
                opts.data_manifest = data_manifest;
            }
            const auto results = run_acceptance(opts, std::cout);
            if (!acceptance_passed(results)) {
                throw ValidationFailure("acceptance criteria failed");
            }
            return kExitOk;
        }

        if (*conv) {
            std::ifstream in(conv_in);
            if (!in) {
                throw InputError("cannot open " + conv_in);
            }
            if (conv_format == "click-indices" && conv_modes == 0) {
                throw InputError("--modes is required for click-indices input");
            }
            SampleSet out(conv_modes, SampleSource::kExperimental);
            std::string line;
            std::size_t n = 0;
            while (std::getline(in, line)) {
                ++n;
                std::istringstream ss(line);
                ClickPattern p;
                if (conv_format == "spaced-bits") {
                    std::string bits, tok;
                    while (ss >> tok) {
                        bits += tok;
                    }
                    if (bits.empty()) {
                        continue;
                    }
                    p = ClickPattern::from_string(bits);
                    if (out.modes() == 0) {
                        out = SampleSet(p.size(), SampleSource::kExperimental);
                    }
                } else {
                    p = ClickPattern(conv_modes);
                    std::size_t j = 0;
                    while (ss >> j) {
                        if (j >= conv_modes) {
                            throw InputError(conv_in + ":" + std::to_string(n) + ": mode index " + std::to_string(j) +
                                             " out of range");
                        }
                        p.set(j);
                    }
                }
                try {
                    out.push_back(std::move(p));
                } catch (const InputError &e) {
                    throw InputError(conv_in + ":" + std::to_string(n) + ": " + e.what());
                }
            }
            write_samples(conv_out, out);
            std::cout << "wrote " << out.size() << " patterns to " << conv_out << "\n";
            return kExitOk;
        }

        if (*synth) {
            const std::size_t pairs = synth_pairs ? synth_pairs : synth_modes / 2;
            std::vector<double> r = synth_r;
            if (r.size() == 1) {
                r.assign(pairs, r.front());
            }
            if (r.size() != pairs) {
                throw InputError("expected 1 or " + std::to_string(pairs) + " squeezing values");
            }
            const DeskInstance inst = make_desk_instance(synth_modes, r, synth_eta, g.seed);
            std::vector<SampleSet> samples;
            if (synth_samples > 0) {
                samples.push_back(exact_sample(build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t),
                                               synth_samples, g.seed));
            }
            const fs::path m = write_bundle(g.out_dir, synth_name, inst.spec, inst.t, samples);
            std::cout << "wrote " << m.string() << "\n";
            return kExitOk;
        }
    } catch (const ValidationFailure &e) {
        std::cerr << "validation failed: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InputError &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericError &e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
