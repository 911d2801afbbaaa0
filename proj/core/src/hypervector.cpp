#include "pathhd/hypervector.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <string>

#include "pathhd/error.hpp"

namespace pathhd {

namespace {

std::string lowered(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::replace(out.begin(), out.end(), '-', '_');
    return out;
}

}  // namespace

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::Ghrr: return "ghrr";
        case Family::Fhrr: return "fhrr";
        case Family::Hrr: return "hrr";
        case Family::RealElementwise: return "real";
        case Family::BipolarXor: return "bipolar";
        case Family::CommMix: return "comm_mix";
    }
    return "unknown";
}

std::string_view to_string(BlockFamily f) noexcept {
    switch (f) {
        case BlockFamily::DiagonalPhase: return "diagonal_phase";
        case BlockFamily::HouseholderProduct: return "householder_product";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    const std::string s = lowered(name);
    if (s == "ghrr") return Family::Ghrr;
    if (s == "fhrr") return Family::Fhrr;
    if (s == "hrr") return Family::Hrr;
    if (s == "real" || s == "real_elementwise") return Family::RealElementwise;
    if (s == "bipolar" || s == "bipolar_xor" || s == "xor") return Family::BipolarXor;
    if (s == "comm_mix" || s == "commmix") return Family::CommMix;
    throw ConfigError("unknown operator family '" + std::string(name) + "'");
}

BlockFamily parse_block_family(std::string_view name) {
    const std::string s = lowered(name);
    if (s == "diagonal_phase" || s == "diagonal") return BlockFamily::DiagonalPhase;
    if (s == "householder_product" || s == "householder") return BlockFamily::HouseholderProduct;
    throw ConfigError("unknown block family '" + std::string(name) + "'");
}

void HdcConfig::validate() const {
    if (num_blocks == 0) throw ConfigError("num_blocks must be >= 1");
    if (block_size == 0) throw ConfigError("block_size must be >= 1");
    if (is_flat(family) && block_size != 1) {
        throw ConfigError("block_size m > 1 requested for flat family '" +
                          std::string(to_string(family)) + "'");
    }
}

HdcConfig HdcConfig::ghrr(std::size_t dimension, std::size_t block_size, std::uint64_t seed,
                          BlockFamily blocks) {
    if (block_size == 0 || dimension % (block_size * block_size) != 0 || dimension == 0) {
        throw ConfigError("GHRR dimension " + std::to_string(dimension) +
                          " is not a positive multiple of m^2 = " +
                          std::to_string(block_size * block_size));
    }
    return HdcConfig{dimension / (block_size * block_size), block_size, Family::Ghrr, seed, blocks};
}

HdcConfig HdcConfig::flat(Family family, std::size_t dimension, std::uint64_t seed) {
    if (!is_flat(family)) throw ConfigError("HdcConfig::flat called with GHRR");
    HdcConfig cfg{dimension, 1, family, seed, BlockFamily::HouseholderProduct};
    cfg.validate();
    return cfg;
}

Hypervector Hypervector::ghrr(std::size_t num_blocks, std::size_t block_size, std::vector<Complex> data) {
    if (num_blocks == 0 || block_size == 0 || data.size() != num_blocks * block_size * block_size) {
        throw MismatchError("GHRR payload size does not match D·m²");
    }
    return Hypervector(Family::Ghrr, num_blocks, block_size, std::move(data));
}

Hypervector Hypervector::fhrr(std::vector<Complex> data) {
    if (data.empty()) throw MismatchError("empty FHRR payload");
    const std::size_t n = data.size();
    return Hypervector(Family::Fhrr, n, 1, std::move(data));
}

Hypervector Hypervector::hrr(std::vector<double> data) {
    if (data.empty()) throw MismatchError("empty HRR payload");
    const std::size_t n = data.size();
    return Hypervector(Family::Hrr, n, 1, std::move(data));
}

Hypervector Hypervector::real(std::vector<double> data) {
    if (data.empty()) throw MismatchError("empty real payload");
    const std::size_t n = data.size();
    return Hypervector(Family::RealElementwise, n, 1, std::move(data));
}

Hypervector Hypervector::bipolar(Family family, std::vector<std::int8_t> data) {
    if (family != Family::BipolarXor && family != Family::CommMix) {
        throw MismatchError("bipolar payload requires BipolarXor or CommMix");
    }
    if (data.empty()) throw MismatchError("empty bipolar payload");
    for (std::int8_t v : data) {
        if (v != 1 && v != -1) throw MismatchError("bipolar entries must be exactly ±1");
    }
    const std::size_t n = data.size();
    return Hypervector(family, n, 1, std::move(data));
}

std::size_t Hypervector::dimension() const noexcept {
    return num_blocks_ * block_size_ * block_size_;
}

std::span<const Hypervector::Complex> Hypervector::complex_data() const {
    if (const auto* v = std::get_if<std::vector<Complex>>(&data_)) return *v;
    throw MismatchError("hypervector of family '" + std::string(to_string(family_)) +
                        "' has no complex payload");
}

std::span<const double> Hypervector::real_data() const {
    if (const auto* v = std::get_if<std::vector<double>>(&data_)) return *v;
    throw MismatchError("hypervector of family '" + std::string(to_string(family_)) +
                        "' has no real payload");
}

std::span<const std::int8_t> Hypervector::sign_data() const {
    if (const auto* v = std::get_if<std::vector<std::int8_t>>(&data_)) return *v;
    throw MismatchError("hypervector of family '" + std::string(to_string(family_)) +
                        "' has no sign payload");
}

std::span<const Hypervector::Complex> Hypervector::block(std::size_t j) const {
    const std::size_t area = block_size_ * block_size_;
    return complex_data().subspan(j * area, area);
}

bool bit_equal(const Hypervector& a, const Hypervector& b) noexcept {
    if (a.family_ != b.family_ || a.num_blocks_ != b.num_blocks_ || a.block_size_ != b.block_size_ ||
        a.data_.index() != b.data_.index()) {
        return false;
    }
    return std::visit(
        [&](const auto& lhs) {
            const auto& rhs = std::get<std::decay_t<decltype(lhs)>>(b.data_);
            return lhs.size() == rhs.size() &&
                   (lhs.empty() ||
                    std::memcmp(lhs.data(), rhs.data(), lhs.size() * sizeof(lhs[0])) == 0);
        },
        a.data_);
}

}  // namespace pathhd
