#include "output.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "qvar/csv.hpp"

namespace qvar::cli {

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInput("input file not found: " + path.string());

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 init failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);

    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex.push_back(kHex[md[i] >> 4]);
        hex.push_back(kHex[md[i] & 0xF]);
    }
    return hex;
}

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path OutputSet::resolve(const std::filesystem::path& name) const {
    return dir_ / name;
}

void OutputSet::write_text(const std::filesystem::path& name, const std::string& text) {
    const auto path = resolve(name);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw std::runtime_error("failed to write " + path.string());
    outputs_.push_back(name.generic_string());
}

void OutputSet::write_json(const std::filesystem::path& name, const nlohmann::ordered_json& doc) {
    write_text(name, doc.dump(2) + "\n");
}

void OutputSet::write_csv(const std::filesystem::path& name, const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    csv::write_row(os, header);
    for (const auto& r : rows) csv::write_row(os, r);
    write_text(name, os.str());
}

std::filesystem::path OutputSet::input(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw MissingInput("input file not found: " + path.string());
    }
    inputs_.push_back({{"path", path.generic_string()}, {"sha256", sha256_file(path)}});
    return path;
}

void OutputSet::write_manifest(const std::string& version, const std::string& command,
                               const nlohmann::ordered_json& flags, std::uint64_t seed) {
    nlohmann::ordered_json m;
    m["version"] = version;
    m["command"] = command;
    m["flags"] = flags;
    m["seed"] = seed;
    m["input_digests"] = inputs_;
    m["outputs"] = outputs_;
    const auto path = resolve("manifest.json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << m.dump(2) << "\n";
    out.close();
    if (!out) throw std::runtime_error("failed to write " + path.string());
}

}  // namespace qvar::cli
