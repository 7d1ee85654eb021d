#include "gkeca/eval.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gkeca/parallel.hpp"

namespace gkeca {

namespace {

__extension__ using u128 = unsigned __int128;

// round(num * 10^scale_digits / den), half away from zero, as a decimal string
// with `decimals` fractional digits.
std::string render_scaled(std::uint64_t num, std::uint64_t den, int extra_power, int decimals) {
    if (den == 0) throw std::invalid_argument("rate: zero denominator");
    u128 scale = 1;
    for (int i = 0; i < extra_power + decimals; ++i) scale *= 10;
    const u128 scaled = static_cast<u128>(num) * scale;
    const u128 q = (2 * scaled + den) / (2 * static_cast<u128>(den));

    u128 unit = 1;
    for (int i = 0; i < decimals; ++i) unit *= 10;
    auto to_str = [](u128 v) {
        if (v == 0) return std::string("0");
        std::string s;
        while (v > 0) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        return s;
    };
    std::string out = to_str(q / unit);
    if (decimals > 0) {
        std::string frac = to_str(q % unit);
        out += "." + std::string(static_cast<std::size_t>(decimals) - frac.size(), '0') + frac;
    }
    return out;
}

std::optional<Rate> ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return std::nullopt;
    return Rate{num, den};
}

}  // namespace

std::string Rate::percent(int decimals) const { return render_scaled(num, den, 2, decimals); }
std::string Rate::fraction(int decimals) const { return render_scaled(num, den, 0, decimals); }

EvalReport compute_metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw std::invalid_argument("metrics: all confusion counts are zero");
    EvalReport r;
    r.counts = c;
    r.sensitivity = ratio(c.tp, c.tp + c.fn);
    r.specificity = ratio(c.tn, c.fp + c.tn);
    r.false_positive_rate = ratio(c.fp, c.fp + c.tn);
    r.false_negative_rate = ratio(c.fn, c.tp + c.fn);
    r.accuracy = Rate{c.tp + c.tn, c.total()};
    return r;
}

ConfusionCounts count_at(std::span<const ScoredProbe> probes, double tau) {
    if (std::isnan(tau)) throw std::invalid_argument("protocol: tau must not be NaN");
    ConfusionCounts c;
    for (const auto& p : probes) {
        const bool accepted = p.distance <= tau;
        if (p.role == Role::positive_test) {
            if (accepted && p.predicted == p.truth) {
                ++c.tp;
            } else {
                ++c.fn;
            }
        } else if (p.role == Role::negative_test) {
            if (accepted) {
                ++c.fp;
            } else {
                ++c.tn;
            }
        }
    }
    return c;
}

std::vector<ScoredProbe> score_probes(const TrainedPipeline& pipeline, const LabeledDataset& dataset, Measure m) {
    const std::set<std::string> classes(pipeline.classes.labels.begin(), pipeline.classes.labels.end());
    std::vector<const DatasetEntry*> probes;
    for (const auto& e : dataset.entries) {
        if (e.role == Role::train) continue;
        const bool known = classes.count(e.label) > 0;
        if (e.role == Role::positive_test && !known) {
            throw std::invalid_argument("protocol: positive-test entry '" + e.path + "' has label '" + e.label +
                                        "' which is not a trained class");
        }
        if (e.role == Role::negative_test && known) {
            throw std::invalid_argument("protocol: negative-test entry '" + e.path + "' has label '" + e.label +
                                        "' which is a trained class");
        }
        probes.push_back(&e);
    }

    const auto& cfg = pipeline.config;
    FeatureExtractor extractor(cfg.image_size, cfg.gabor, cfg.block_size);
    std::vector<ScoredProbe> out(probes.size());
    parallel_for(probes.size(), cfg.threads, [&](std::size_t i) {
        const auto chi = extractor.extract(probes[i]->image);
        const auto result = pipeline.classify_features(chi, m);
        out[i] = ScoredProbe{probes[i]->role, probes[i]->label, result.label, result.distance};
    });
    return out;
}

ConfusionCounts run_protocol(const LabeledDataset& dataset, const PipelineConfig& config, double tau, Measure m) {
    if (std::isnan(tau)) throw std::invalid_argument("protocol: tau must not be NaN");
    const auto train = dataset.with_role(Role::train);
    if (train.empty()) throw std::invalid_argument("protocol: dataset has no train entries");
    if (dataset.with_role(Role::positive_test).empty()) {
        throw std::invalid_argument("protocol: dataset has no positive-test entries");
    }
    if (dataset.with_role(Role::negative_test).empty()) {
        throw std::invalid_argument("protocol: dataset has no negative-test entries");
    }
    const auto pipeline = train_pipeline(train, config);
    const auto scored = score_probes(pipeline, dataset, m);
    return count_at(scored, tau);
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string report_csv_header() { return "measure,tau,TP,FP,TN,FN,sensitivity,specificity,fpr,fnr,accuracy"; }

std::string report_csv_row(const ReportRow& row) {
    const auto& r = row.report;
    auto rate = [](const std::optional<Rate>& x) { return x ? x->fraction(6) : std::string("NA"); };
    std::ostringstream out;
    out << to_string(row.measure) << ',' << format_double(row.tau) << ',' << r.counts.tp << ',' << r.counts.fp << ','
        << r.counts.tn << ',' << r.counts.fn << ',' << rate(r.sensitivity) << ',' << rate(r.specificity) << ','
        << rate(r.false_positive_rate) << ',' << rate(r.false_negative_rate) << ',' << r.accuracy.fraction(6);
    return out.str();
}

std::string report_table(const std::vector<ReportRow>& rows, std::uint64_t seed) {
    auto pct = [](const std::optional<Rate>& x) { return x ? x->percent(2) + "%" : std::string("n/a"); };
    std::ostringstream out;
    out << "seed " << seed << "\n";
    out << std::left << std::setw(12) << "measure" << std::setw(14) << "tau" << std::right << std::setw(7) << "TP"
        << std::setw(7) << "FP" << std::setw(7) << "TN" << std::setw(7) << "FN" << std::setw(10) << "sens"
        << std::setw(10) << "spec" << std::setw(10) << "FPR" << std::setw(10) << "FNR" << std::setw(10) << "acc"
        << "\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << std::left << std::setw(12) << to_string(row.measure) << std::setw(14) << format_double(row.tau)
            << std::right << std::setw(7) << r.counts.tp << std::setw(7) << r.counts.fp << std::setw(7) << r.counts.tn
            << std::setw(7) << r.counts.fn << std::setw(10) << pct(r.sensitivity) << std::setw(10)
            << pct(r.specificity) << std::setw(10) << pct(r.false_positive_rate) << std::setw(10)
            << pct(r.false_negative_rate) << std::setw(10) << (r.accuracy.percent(2) + "%") << "\n";
    }
    return out.str();
}

}  // namespace gkeca
