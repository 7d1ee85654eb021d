#include "commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "gkeca/config.hpp"
#include "gkeca/eval.hpp"
#include "gkeca/manifest.hpp"
#include "gkeca/model_io.hpp"
#include "gkeca/pipeline.hpp"

namespace gkeca::cli {

namespace {

namespace fs = std::filesystem;

// Options shared by every subcommand: --config plus one flag per config key.
struct CommonOptions {
    std::string config_path;
    std::map<std::string, std::string> overrides;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
        for (const auto& key : config_keys()) {
            cmd->add_option("--" + key, overrides[key], "Overrides config key '" + key + "'");
        }
    }

    Settings settings() const {
        Settings s = config_path.empty() ? Settings{} : load_settings(config_path);
        for (const auto& [key, value] : overrides) {
            if (!value.empty()) s[key] = value;
        }
        return s;
    }

    PipelineConfig config() const { return config_from_settings(settings()); }
};

std::size_t feature_length(const PipelineConfig& cfg) {
    const std::size_t outputs = static_cast<std::size_t>(cfg.gabor.num_scales) * cfg.gabor.num_orientations;
    return outputs * static_cast<std::size_t>(cfg.image_size.width / cfg.block_size) *
           static_cast<std::size_t>(cfg.image_size.height / cfg.block_size);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

int cmd_gabor_dump(const CommonOptions& common, const std::string& image_path, const std::string& out_dir,
                   std::ostream& out) {
    const auto cfg = common.config();
    const auto img = load_pgm(image_path);
    FeatureExtractor extractor(cfg.image_size, cfg.gabor, cfg.block_size);
    fs::create_directories(out_dir);
    const auto mags = extractor.magnitudes(img);
    for (const auto& m : mags) {
        const auto name = "gabor_nu" + std::to_string(m.scale) + "_mu" + std::to_string(m.orientation) + ".pgm";
        save_pgm(rescale_to_gray(m.width, m.height, m.values), fs::path(out_dir) / name);
    }
    out << "wrote " << mags.size() << " magnitude images to " << out_dir << "\n";
    return 0;
}

int cmd_extract(const CommonOptions& common, const std::string& manifest, const std::string& out_path,
                std::ostream& out) {
    const auto cfg = common.config();
    const auto dataset = load_manifest(manifest, cfg.image_size);
    FeatureExtractor extractor(cfg.image_size, cfg.gabor, cfg.block_size);
    std::vector<const GrayImage*> images;
    for (const auto& e : dataset.entries) images.push_back(&e.image);
    const auto features = extractor.extract_all(images, cfg.threads);

    std::ostringstream csv;
    csv << "label";
    const std::size_t d = feature_length(cfg);
    for (std::size_t i = 1; i <= d; ++i) csv << ",v" << i;
    csv << "\n";
    for (std::size_t i = 0; i < features.size(); ++i) {
        csv << dataset.entries[i].label;
        for (double v : features[i].values) csv << ',' << format_double(v);
        csv << "\n";
    }
    if (out_path.empty() || out_path == "-") {
        out << csv.str();
    } else {
        write_file(out_path, csv.str());
    }
    return 0;
}

int cmd_fit(const CommonOptions& common, const std::string& manifest, const std::string& model_path,
            std::ostream& out, std::ostream& err) {
    const auto cfg = common.config();
    const auto dataset = load_manifest(manifest, cfg.image_size);
    const auto train = dataset.with_role(Role::train);
    if (train.empty()) throw std::runtime_error(manifest + ": no train entries");
    const auto pipeline = train_pipeline(train, cfg);
    if (cfg.keca.k && pipeline.keca.k < *cfg.keca.k) {
        err << "warning: requested k = " << *cfg.keca.k << " but only " << pipeline.keca.k
            << " axes carry positive entropy; using k = " << pipeline.keca.k << "\n";
    }
    save_model(pipeline, model_path);
    out << "fitted " << train.size() << " training images, " << pipeline.classes.num_classes() << " classes, k = "
        << pipeline.keca.k << " -> " << model_path << "\n";
    return 0;
}

int cmd_eval(const CommonOptions& common, const std::string& manifest, const std::string& model_path,
             const std::string& out_path, std::ostream& out) {
    auto pipeline = load_model(model_path);
    // Feature geometry comes from the model; protocol settings from the config.
    const auto cfg = common.config();
    pipeline.config.measures = cfg.measures;
    pipeline.config.tau = cfg.tau;
    pipeline.config.tau_sweep = cfg.tau_sweep;
    pipeline.config.seed = cfg.seed;
    pipeline.config.threads = cfg.threads;

    const auto dataset = load_manifest(manifest, pipeline.config.image_size);
    if (dataset.with_role(Role::positive_test).empty() && dataset.with_role(Role::negative_test).empty()) {
        throw std::runtime_error(manifest + ": no positive-test or negative-test entries");
    }
    const auto taus = cfg.tau_sweep ? cfg.tau_sweep->values() : std::vector<double>{cfg.tau};

    std::vector<ReportRow> rows;
    for (auto m : cfg.measures) {
        const auto scored = score_probes(pipeline, dataset, m);
        for (double tau : taus) rows.push_back(ReportRow{m, tau, compute_metrics(count_at(scored, tau))});
    }

    std::ostringstream csv;
    csv << report_csv_header() << "\n";
    for (const auto& row : rows) csv << report_csv_row(row) << "\n";
    if (out_path.empty() || out_path == "-") {
        out << csv.str();
    } else {
        write_file(out_path, csv.str());
        out << report_table(rows, cfg.seed);
    }
    return 0;
}

int cmd_predict(const CommonOptions& common, const std::string& model_path, const std::string& image_path,
                std::ostream& out) {
    const auto pipeline = load_model(model_path);
    const auto cfg = common.config();
    const auto img = load_pgm(image_path);
    FeatureExtractor extractor(pipeline.config.image_size, pipeline.config.gabor, pipeline.config.block_size);
    const auto result = pipeline.classify_features(extractor.extract(img), cfg.measures.front());
    out << result.label << " " << format_double(result.distance) << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gabor feature + kernel entropy component analysis image classifier", "gkeca"};
    app.require_subcommand(1);

    CommonOptions dump_opts, extract_opts, fit_opts, eval_opts, predict_opts;
    std::string image, out_dir, manifest, out_path, model_path;

    auto* dump = app.add_subcommand("gabor-dump", "Write the Gabor magnitude images of one image as PGM files");
    dump->add_option("--image", image, "Input PGM")->required();
    dump->add_option("--out", out_dir, "Output directory")->required();
    dump_opts.attach(dump);

    auto* extract = app.add_subcommand("extract", "Write one feature row per manifest image as CSV");
    extract->add_option("--manifest", manifest, "CSV manifest (path,label,role)")->required();
    extract->add_option("--out", out_path, "Output CSV (default: stdout)");
    extract_opts.attach(extract);

    auto* fit = app.add_subcommand("fit", "Fit the KECA model on the manifest's train entries");
    fit->add_option("--manifest", manifest, "CSV manifest (path,label,role)")->required();
    fit->add_option("--out", model_path, "Model file to write")->required();
    fit_opts.attach(fit);

    auto* eval = app.add_subcommand("eval", "Score the manifest's test entries and report rates");
    eval->add_option("--manifest", manifest, "CSV manifest (path,label,role)")->required();
    eval->add_option("--model", model_path, "Model file from `fit`")->required()->check(CLI::ExistingFile);
    eval->add_option("--out", out_path, "Report CSV (default: stdout, no table)");
    eval_opts.attach(eval);

    auto* predict = app.add_subcommand("predict", "Classify a single image");
    predict->add_option("--model", model_path, "Model file from `fit`")->required()->check(CLI::ExistingFile);
    predict->add_option("--image", image, "Input PGM")->required();
    predict_opts.attach(predict);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*dump) return cmd_gabor_dump(dump_opts, image, out_dir, out);
        if (*extract) return cmd_extract(extract_opts, manifest, out_path, out);
        if (*fit) return cmd_fit(fit_opts, manifest, model_path, out, err);
        if (*eval) return cmd_eval(eval_opts, manifest, model_path, out_path, out);
        if (*predict) return cmd_predict(predict_opts, model_path, image, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace gkeca::cli
