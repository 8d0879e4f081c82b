#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qvar::cli {

// Thrown for inputs that do not exist; maps to exit code 2.
class MissingInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string sha256_file(const std::filesystem::path& path);

// Every artifact a subcommand writes goes through here so the manifest can list it.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::filesystem::path resolve(const std::filesystem::path& name) const;

    void write_text(const std::filesystem::path& name, const std::string& text);
    void write_json(const std::filesystem::path& name, const nlohmann::ordered_json& doc);
    void write_csv(const std::filesystem::path& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows);

    // Records a digest and returns the path, or throws MissingInput.
    std::filesystem::path input(const std::filesystem::path& path);

    void write_manifest(const std::string& version, const std::string& command,
                        const nlohmann::ordered_json& flags, std::uint64_t seed);

private:
    std::filesystem::path dir_;
    std::vector<std::string> outputs_;
    nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
};

}  // namespace qvar::cli
