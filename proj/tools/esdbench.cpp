// esdbench: cross-validated comparison of Naive Bayes, an MLP, and a
// C4.5-style tree on the erythemato-squamous disease dataset.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <openssl/evp.h>

#include "esd/harness.hpp"
#include "esd/report.hpp"

namespace {

constexpr const char* kDataHost = "archive.ics.uci.edu";
constexpr const char* kDataPath = "/ml/machine-learning-databases/dermatology/dermatology.data";

// SHA-256 of the canonical file after normalization (LF line endings, no
// trailing blank lines, exactly one final newline). Mirrored in
// data/dermatology.sha256.
constexpr const char* kDataSha256 =
    "455eba77f72cd087ce54a5a266c514c5f34e85000c8689ad09e796d68ad45742";

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 computation failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string normalize_line_endings(const std::string& body) {
    std::string out;
    out.reserve(body.size());
    for (char c : body) {
        if (c != '\r') out.push_back(c);
    }
    while (!out.empty() && out.back() == '\n') out.pop_back();
    out.push_back('\n');
    return out;
}

int fetch_data(const std::string& directory) {
    std::cerr << "fetching https://" << kDataHost << kDataPath << "\n";
    httplib::SSLClient client(kDataHost);
    client.set_follow_location(true);
    client.set_connection_timeout(30);
    client.set_read_timeout(60);
    const httplib::Result response = client.Get(kDataPath);
    if (!response) {
        std::cerr << "esdbench: download failed: " << httplib::to_string(response.error())
                  << "\n";
        return 1;
    }
    if (response->status != 200) {
        std::cerr << "esdbench: download failed: HTTP " << response->status << "\n";
        return 1;
    }

    const std::string body = normalize_line_endings(response->body);

    std::istringstream stream(body);
    const esd::Dataset dataset = esd::load_dataset(stream, "dermatology.data");
    std::size_t missing = 0;
    for (const auto& instance : dataset.instances) {
        if (instance.age_missing()) ++missing;
    }
    if (dataset.size() != 366 || missing != 8) {
        std::cerr << "esdbench: unexpected file shape: " << dataset.size() << " instances, "
                  << missing << " missing ages (expected 366 and 8)\n";
        return 1;
    }

    const std::string digest = sha256_hex(body);
    if (digest != kDataSha256) {
        std::cerr << "esdbench: checksum mismatch\n  expected " << kDataSha256 << "\n  got      "
                  << digest << "\n";
        return 1;
    }

    std::filesystem::create_directories(directory);
    const std::filesystem::path data_path = std::filesystem::path(directory) / "dermatology.data";
    std::ofstream out(data_path, std::ios::binary);
    if (!out) {
        std::cerr << "esdbench: cannot write " << data_path.string() << "\n";
        return 1;
    }
    out << body;
    out.close();
    std::ofstream sum(std::filesystem::path(directory) / "dermatology.sha256");
    sum << digest << "  dermatology.data\n";

    std::cout << data_path.string() << "\n" << digest << "  dermatology.data\n";
    return 0;
}

std::string trace_path_for(const std::string& base, esd::Algorithm algorithm, bool single) {
    if (single) return base;
    std::filesystem::path path(base);
    const std::string stem = path.stem().string() + "." + esd::algorithm_name(algorithm);
    return (path.parent_path() / (stem + path.extension().string())).string();
}

int run_experiment(const esd::ExperimentConfig& config, const std::string& out_path,
                   const std::string& trace_path, const std::string& plot_path) {
    const esd::BenchmarkResult benchmark = esd::run_benchmark(config);

    const std::string report = esd::format_report(benchmark, config.format);
    if (out_path.empty()) {
        std::cout << report;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
        out << report;
    }

    if (!trace_path.empty()) {
        const bool single = benchmark.results.size() == 1;
        for (const auto& result : benchmark.results) {
            esd::emit_trace(result.pooled_trace,
                            trace_path_for(trace_path, result.algorithm, single));
        }
    }
    if (!plot_path.empty()) {
        std::ofstream plot(plot_path);
        if (!plot) throw std::runtime_error("cannot open " + plot_path + " for writing");
        plot << esd::format_plot_csv(benchmark);
    }

    std::cerr << esd::format_timings(benchmark);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Predictive data-mining benchmark on the erythemato-squamous disease dataset"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Cross-validate classifiers and print the comparison");
    std::string data_path;
    std::string algo = "all";
    int folds = 10;
    std::uint64_t seed = 1;
    std::string missing = "drop";
    std::string format = "md";
    std::string trace_path, config_path, out_path, plot_path;
    run->add_option("--data", data_path, "Path to dermatology.data")->required();
    run->add_option("--algo", algo, "nb|mlp|j48|all")
        ->check(CLI::IsMember({"nb", "mlp", "j48", "all"}));
    run->add_option("--folds", folds, "Number of cross-validation folds");
    run->add_option("--seed", seed, "Master seed for fold assignment and training");
    run->add_option("--missing", missing, "Missing-age handling")
        ->check(CLI::IsMember({"drop", "raw"}));
    run->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"md", "csv", "json"}));
    run->add_option("--emit-trace", trace_path,
                    "Write the pooled prediction trace(s) to this path");
    run->add_option("--config", config_path, "Key/value file with hyperparameter overrides");
    run->add_option("--out", out_path, "Write the report here instead of stdout");
    run->add_option("--plot-csv", plot_path, "Write grouped-bar plot data (metric,algorithm,value)");

    // fetch-data
    auto* fetch = app.add_subcommand("fetch-data",
                                     "Download the canonical UCI file and verify its checksum");
    std::string fetch_dir;
    fetch->add_option("dir", fetch_dir, "Destination directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(fetch)) return fetch_data(fetch_dir);

        esd::ExperimentConfig config;
        config.data_path = data_path;
        config.folds = folds;
        config.seed = seed;
        config.missing = missing == "raw" ? esd::MissingMode::raw : esd::MissingMode::drop;
        if (format == "csv") config.format = esd::ReportFormat::csv;
        else if (format == "json") config.format = esd::ReportFormat::json;
        else config.format = esd::ReportFormat::markdown;
        if (algo == "nb") config.algorithms = {esd::Algorithm::naive_bayes};
        else if (algo == "mlp") config.algorithms = {esd::Algorithm::mlp};
        else if (algo == "j48") config.algorithms = {esd::Algorithm::j48};
        if (!config_path.empty()) esd::apply_config_file(config, config_path);
        config.validate();
        return run_experiment(config, out_path, trace_path, plot_path);
    } catch (const std::exception& e) {
        std::cerr << "esdbench: " << e.what() << "\n";
        return 1;
    }
}
