#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eqweyl/numerics.hpp"
#include "eqweyl/spectral.hpp"

#include "json.hpp"

namespace eqweyl {
namespace io {

using Json = nlohmann::json;  // std::map-backed: keys serialize sorted

/// RFC-4180 CSV: CRLF records, '.' decimal point, fields quoted only when
/// needed.  All numbers go through the locale-independent shortest form.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& fields);
    const std::string& str() const { return out_; }
    void save(const std::filesystem::path& path) const;

private:
    std::string out_;
    size_t width_;
};

std::string field(double x);
std::string field(long long x);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Run manifest: every emitted artifact with size and content hash, plus
/// the configuration echo.  Deterministic for identical config + seed.
class Manifest {
public:
    explicit Manifest(Json config) : config_(std::move(config)) {}
    void add(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

private:
    Json config_;
    Json files_ = Json::object();
};

/// Spectrum export: columns (t, total_mult, weight, mult_weight).
void spectrum_csv(const spectral::SpectrumTable& table, const std::filesystem::path& path);

/// Counting export: columns (lambda, N_chi).
void counting_csv(const spectral::CountingResult& result, const std::filesystem::path& path);

/// Oscillatory-sample files for offline fitting: columns (mu, re, im).
void write_mu_samples(const std::vector<std::pair<double, Complex>>& samples,
                      const std::filesystem::path& path);
std::vector<std::pair<double, Complex>> read_mu_samples(const std::filesystem::path& path);

}  // namespace io
}  // namespace eqweyl
