#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gkeca/classify.hpp"
#include "gkeca/manifest.hpp"
#include "gkeca/pipeline.hpp"

namespace gkeca {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
    bool operator==(const ConfusionCounts&) const = default;
};

/// Exact ratio of two counts. Rendering rounds half away from zero using
/// integer arithmetic only.
struct Rate {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    /// e.g. 1481/1600 with 2 decimals -> "92.56"
    std::string percent(int decimals) const;
    /// e.g. 1481/1600 with 4 decimals -> "0.9256"
    std::string fraction(int decimals) const;
    /// 1 - this, exactly.
    Rate complement() const { return Rate{den - num, den}; }
    bool operator==(const Rate&) const = default;
};

struct EvalReport {
    ConfusionCounts counts;
    std::optional<Rate> sensitivity;          ///< TP / (TP + FN)
    std::optional<Rate> specificity;          ///< TN / (FP + TN)
    std::optional<Rate> false_positive_rate;  ///< FP / (FP + TN)
    std::optional<Rate> false_negative_rate;  ///< FN / (TP + FN)
    Rate accuracy;                            ///< (TP + TN) / total
};

/// Rates whose denominator is zero are left empty. Throws on all-zero counts.
EvalReport compute_metrics(const ConfusionCounts& c);

struct ScoredProbe {
    Role role = Role::positive_test;
    std::string truth;
    std::string predicted;
    double distance = 0.0;
};

/// A positive probe is a TP when its predicted label is right and its distance
/// is <= tau, otherwise an FN. A negative probe is a TN when its distance is
/// > tau, otherwise an FP.
ConfusionCounts count_at(std::span<const ScoredProbe> probes, double tau);

/// Classifies every positive-test and negative-test entry of `dataset`.
/// Positive labels must name a trained class; negative labels must not.
std::vector<ScoredProbe> score_probes(const TrainedPipeline& pipeline, const LabeledDataset& dataset, Measure m);

/// Fits on the train entries, scores the probes, counts at tau.
ConfusionCounts run_protocol(const LabeledDataset& dataset, const PipelineConfig& config, double tau, Measure m);

struct ReportRow {
    Measure measure = Measure::mahalanobis;
    double tau = 0.0;
    EvalReport report;
};

/// `measure,tau,TP,FP,TN,FN,sensitivity,specificity,fpr,fnr,accuracy`
std::string report_csv_header();
std::string report_csv_row(const ReportRow& row);
std::string report_table(const std::vector<ReportRow>& rows, std::uint64_t seed);

/// Shortest round-trip decimal for a double; "inf" / "-inf" for infinities.
std::string format_double(double v);

}  // namespace gkeca
