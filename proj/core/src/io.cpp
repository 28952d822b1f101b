#include "eqweyl/io.hpp"

#include <openssl/evp.h>

#include <fstream>

namespace eqweyl {
namespace io {

namespace {

std::string csv_escape(const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += csv_escape(header[i]);
    }
    out_ += "\r\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw ConfigError("CsvWriter: column count mismatch");
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ += ',';
        out_ += csv_escape(fields[i]);
    }
    out_ += "\r\n";
}

void CsvWriter::save(const std::filesystem::path& path) const { write_text(path, out_); }

std::string field(double x) { return num::format_double(x); }
std::string field(long long x) { return std::to_string(x); }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void write_json(const std::filesystem::path& path, const Json& j) {
    write_text(path, j.dump(2) + "\n");
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for hashing: " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 init failed");
    char buf[65536];
    while (f) {
        f.read(buf, sizeof(buf));
        EVP_DigestUpdate(ctx, buf, static_cast<size_t>(f.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

void Manifest::add(const std::filesystem::path& path) {
    Json entry;
    entry["bytes"] = static_cast<int64_t>(std::filesystem::file_size(path));
    entry["sha256"] = sha256_file(path);
    files_[path.filename().string()] = entry;
}

void Manifest::save(const std::filesystem::path& path) const {
    Json j;
    j["config"] = config_;
    j["files"] = files_;
    write_json(path, j);
}

void spectrum_csv(const spectral::SpectrumTable& table, const std::filesystem::path& path) {
    CsvWriter w({"t", "total_mult", "weight", "mult_weight"});
    for (const auto& e : table.entries) {
        if (e.weight_mults.empty())
            w.row({field(e.eigenvalue), field(e.total_multiplicity), "", ""});
        for (const auto& [weight, mult] : e.weight_mults)
            w.row({field(e.eigenvalue), field(e.total_multiplicity), field(weight), field(mult)});
    }
    w.save(path);
}

void counting_csv(const spectral::CountingResult& result, const std::filesystem::path& path) {
    CsvWriter w({"lambda", "N_chi"});
    for (size_t i = 0; i < result.lambda_grid.size(); ++i)
        w.row({field(result.lambda_grid[i]), field(result.values[i])});
    w.save(path);
}

void write_mu_samples(const std::vector<std::pair<double, Complex>>& samples,
                      const std::filesystem::path& path) {
    CsvWriter w({"mu", "re", "im"});
    for (const auto& [mu, v] : samples) w.row({field(mu), field(v.real()), field(v.imag())});
    w.save(path);
}

std::vector<std::pair<double, Complex>> read_mu_samples(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open sample file: " + path.string());
    std::vector<std::pair<double, Complex>> out;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (first) {  // header
            first = false;
            continue;
        }
        const size_t c1 = line.find(',');
        const size_t c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ConfigError("sample file rows must be mu,re,im");
        out.push_back({std::stod(line.substr(0, c1)),
                       Complex{std::stod(line.substr(c1 + 1, c2 - c1 - 1)),
                               std::stod(line.substr(c2 + 1))}});
    }
    return out;
}

}  // namespace io
}  // namespace eqweyl
