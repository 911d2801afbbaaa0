#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathhd/hypervector.hpp"

namespace pathhd {

// Fixed map from symbol name to atomic hypervector. Symbol i is generated from
// the stream keyed by (config.seed, i), so appending symbols never changes the
// vectors of existing ones.
class Codebook {
public:
    // Throws ConfigError on an empty or duplicate symbol list or invalid config.
    static Codebook build(const HdcConfig& config, std::vector<std::string> symbols);

    const HdcConfig& config() const noexcept { return config_; }
    std::span<const std::string> symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }

    bool contains(std::string_view symbol) const;
    // Throws UnknownSymbolError.
    const Hypervector& at(std::string_view symbol) const;
    const Hypervector* find(std::string_view symbol) const;
    const Hypervector& entry(std::size_t index) const { return entries_.at(index); }

    // Binary container: magic "PATHHDCB", format version, config, symbols, payloads.
    // Round trip is bit-exact.
    void save(std::ostream& out) const;
    static Codebook load(std::istream& in);
    void save_file(const std::filesystem::path& path) const;
    static Codebook load_file(const std::filesystem::path& path);

    static constexpr std::uint32_t kFormatVersion = 1;

private:
    Codebook(HdcConfig config, std::vector<std::string> symbols, std::vector<Hypervector> entries);

    HdcConfig config_;
    std::vector<std::string> symbols_;
    std::vector<Hypervector> entries_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

inline Codebook make_codebook(const HdcConfig& config, std::vector<std::string> symbols) {
    return Codebook::build(config, std::move(symbols));
}

// Left fold of bind over the relation vectors; the empty path is the identity.
// Throws UnknownSymbolError for a relation missing from the codebook.
Hypervector encode_path(const Codebook& cb, std::span<const std::string> relations);

// similarity(query, encode_path(cb, relations)) without building the path vector.
double path_similarity(const Codebook& cb, const Hypervector& query, std::span<const std::string> relations);

}  // namespace pathhd
