#include "pathhd/codebook.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "pathhd/error.hpp"
#include "pathhd/ops.hpp"

namespace pathhd {

namespace {

constexpr std::array<char, 8> kMagic = {'P', 'A', 'T', 'H', 'H', 'D', 'C', 'B'};
// Guards against absurd allocations when reading a corrupt header.
constexpr std::uint64_t kMaxSymbolLength = 1U << 20;

void write_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
    out.write(bytes.data(), bytes.size());
}

std::uint64_t read_u64(std::istream& in) {
    std::array<unsigned char, 8> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw ParseError("codebook: truncated input", 0);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

void write_f64(std::ostream& out, double v) { write_u64(out, std::bit_cast<std::uint64_t>(v)); }
double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

}  // namespace

Codebook::Codebook(HdcConfig config, std::vector<std::string> symbols, std::vector<Hypervector> entries)
    : config_(config), symbols_(std::move(symbols)), entries_(std::move(entries)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) index_.emplace(symbols_[i], i);
}

Codebook Codebook::build(const HdcConfig& config, std::vector<std::string> symbols) {
    config.validate();
    if (symbols.empty()) throw ConfigError("codebook needs at least one symbol");
    std::set<std::string_view> seen;
    for (const auto& s : symbols) {
        if (!seen.insert(s).second) throw ConfigError("duplicate symbol '" + s + "' in codebook");
    }
    std::vector<Hypervector> entries;
    entries.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) entries.push_back(make_atom(config, i));
    return Codebook(config, std::move(symbols), std::move(entries));
}

bool Codebook::contains(std::string_view symbol) const { return index_.find(symbol) != index_.end(); }

const Hypervector* Codebook::find(std::string_view symbol) const {
    const auto it = index_.find(symbol);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

const Hypervector& Codebook::at(std::string_view symbol) const {
    if (const auto* hv = find(symbol)) return *hv;
    throw UnknownSymbolError(std::string(symbol));
}

void Codebook::save(std::ostream& out) const {
    out.write(kMagic.data(), kMagic.size());
    write_u64(out, kFormatVersion);
    write_u64(out, static_cast<std::uint64_t>(config_.family));
    write_u64(out, static_cast<std::uint64_t>(config_.block_family));
    write_u64(out, config_.num_blocks);
    write_u64(out, config_.block_size);
    write_u64(out, config_.seed);
    write_u64(out, symbols_.size());
    for (const auto& s : symbols_) {
        write_u64(out, s.size());
        out.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    for (const auto& hv : entries_) {
        if (hv.is_complex()) {
            for (const auto& z : hv.complex_data()) {
                write_f64(out, z.real());
                write_f64(out, z.imag());
            }
        } else if (hv.is_real()) {
            for (double v : hv.real_data()) write_f64(out, v);
        } else {
            const auto signs = hv.sign_data();
            out.write(reinterpret_cast<const char*>(signs.data()), static_cast<std::streamsize>(signs.size()));
        }
    }
    if (!out) throw IoError("codebook: write failed");
}

Codebook Codebook::load(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw ParseError("codebook: bad magic header", 0);
    }
    const std::uint64_t version = read_u64(in);
    if (version != kFormatVersion) {
        throw ParseError("codebook: unsupported format version " + std::to_string(version), 0);
    }
    HdcConfig cfg;
    const std::uint64_t family = read_u64(in);
    const std::uint64_t block_family = read_u64(in);
    if (family > static_cast<std::uint64_t>(Family::CommMix) ||
        block_family > static_cast<std::uint64_t>(BlockFamily::HouseholderProduct)) {
        throw ParseError("codebook: unknown family tag", 0);
    }
    cfg.family = static_cast<Family>(family);
    cfg.block_family = static_cast<BlockFamily>(block_family);
    cfg.num_blocks = read_u64(in);
    cfg.block_size = read_u64(in);
    cfg.seed = read_u64(in);
    cfg.validate();

    const std::uint64_t count = read_u64(in);
    std::vector<std::string> symbols;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t len = read_u64(in);
        if (len > kMaxSymbolLength) throw ParseError("codebook: symbol length out of range", 0);
        std::string s(len, '\0');
        if (!in.read(s.data(), static_cast<std::streamsize>(len))) throw ParseError("codebook: truncated symbol", 0);
        symbols.push_back(std::move(s));
    }
    std::set<std::string_view> seen;
    for (const auto& s : symbols) {
        if (!seen.insert(s).second) throw ParseError("codebook: duplicate symbol '" + s + "'", 0);
    }

    const std::size_t d = cfg.dimension();
    std::vector<Hypervector> entries;
    entries.reserve(symbols.size());
    for (std::uint64_t i = 0; i < count; ++i) {
        switch (cfg.family) {
            case Family::Ghrr:
            case Family::Fhrr: {
                std::vector<Hypervector::Complex> data(d);
                for (auto& z : data) {
                    const double re = read_f64(in);
                    const double im = read_f64(in);
                    z = {re, im};
                }
                entries.push_back(cfg.family == Family::Ghrr
                                      ? Hypervector::ghrr(cfg.num_blocks, cfg.block_size, std::move(data))
                                      : Hypervector::fhrr(std::move(data)));
                break;
            }
            case Family::Hrr:
            case Family::RealElementwise: {
                std::vector<double> data(d);
                for (auto& v : data) v = read_f64(in);
                entries.push_back(cfg.family == Family::Hrr ? Hypervector::hrr(std::move(data))
                                                            : Hypervector::real(std::move(data)));
                break;
            }
            case Family::BipolarXor:
            case Family::CommMix: {
                std::vector<std::int8_t> data(d);
                if (!in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(d))) {
                    throw ParseError("codebook: truncated payload", 0);
                }
                entries.push_back(Hypervector::bipolar(cfg.family, std::move(data)));
                break;
            }
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw ParseError("codebook: trailing bytes", 0);
    return Codebook(cfg, std::move(symbols), std::move(entries));
}

void Codebook::save_file(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    save(out);
}

Codebook Codebook::load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open codebook '" + path.string() + "'");
    return load(in);
}

Hypervector encode_path(const Codebook& cb, std::span<const std::string> relations) {
    if (relations.empty()) return identity(cb.config());
    Hypervector acc = cb.at(relations.front());
    for (std::size_t i = 1; i < relations.size(); ++i) acc = bind(acc, cb.at(relations[i]));
    return acc;
}

double path_similarity(const Codebook& cb, const Hypervector& query, std::span<const std::string> relations) {
    if (relations.empty()) return similarity(query, identity(cb.config()));
    std::vector<const Hypervector*> factors;
    factors.reserve(relations.size());
    for (const auto& r : relations) factors.push_back(&cb.at(r));
    return path_similarity(query, factors);
}

}  // namespace pathhd
