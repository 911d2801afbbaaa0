#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace pathhd {

// Binding operator family. Determines the payload kind of a Hypervector.
enum class Family : std::uint32_t {
    Ghrr = 0,             // block vector of m×m unitary matrices, blockwise matmul
    Fhrr = 1,             // unit-modulus phasors, elementwise complex product
    Hrr = 2,              // real vector, circular convolution
    RealElementwise = 3,  // real vector, elementwise product
    BipolarXor = 4,       // ±1 vector, elementwise product (XOR in bipolar code)
    CommMix = 5,          // ±1 vector built as base ⊙ mask, elementwise product
};

// How GHRR atomic blocks are sampled.
enum class BlockFamily : std::uint32_t {
    DiagonalPhase = 0,       // diag(e^{iφ}), φ ~ U[0, 2π); blocks commute
    HouseholderProduct = 1,  // Haar unitary from a Householder QR of a complex Gaussian
};

std::string_view to_string(Family f) noexcept;
std::string_view to_string(BlockFamily f) noexcept;
// Accepts the enum spelling used on the command line: ghrr, fhrr, hrr, real,
// bipolar, comm_mix (and their upper-case enum names). Throws ConfigError.
Family parse_family(std::string_view name);
BlockFamily parse_block_family(std::string_view name);

// Whether binding in this family is commutative.
constexpr bool is_commutative(Family f) noexcept { return f != Family::Ghrr; }
constexpr bool is_flat(Family f) noexcept { return f != Family::Ghrr; }

struct HdcConfig {
    // For GHRR: number of blocks D. For flat families: the vector length d.
    std::size_t num_blocks = 256;
    // Block edge m. Must be 1 for flat families.
    std::size_t block_size = 4;
    Family family = Family::Ghrr;
    std::uint64_t seed = 0;
    BlockFamily block_family = BlockFamily::HouseholderProduct;

    // Flattened dimension: D·m² for GHRR, D for flat families.
    std::size_t dimension() const noexcept {
        return family == Family::Ghrr ? num_blocks * block_size * block_size : num_blocks;
    }

    // Throws ConfigError when D or m is zero, or m > 1 for a flat family.
    void validate() const;

    bool operator==(const HdcConfig&) const = default;

    // GHRR config with total dimension d = D·m² (d must be divisible by m²).
    static HdcConfig ghrr(std::size_t dimension, std::size_t block_size, std::uint64_t seed,
                          BlockFamily blocks = BlockFamily::HouseholderProduct);
    // Flat-family config of length d.
    static HdcConfig flat(Family family, std::size_t dimension, std::uint64_t seed);
};

// A symbol or composite encoding. Immutable once constructed.
//
// Storage per family:
//   Ghrr             complex, D blocks of m×m, row-major within a block
//   Fhrr             complex, d entries
//   Hrr, RealElem.   real, d entries
//   BipolarXor, Comm int8 in {-1, +1}, d entries
class Hypervector {
public:
    using Complex = std::complex<double>;

    static Hypervector ghrr(std::size_t num_blocks, std::size_t block_size, std::vector<Complex> data);
    static Hypervector fhrr(std::vector<Complex> data);
    static Hypervector hrr(std::vector<double> data);
    static Hypervector real(std::vector<double> data);
    // family must be BipolarXor or CommMix; entries must be ±1.
    static Hypervector bipolar(Family family, std::vector<std::int8_t> data);

    Family family() const noexcept { return family_; }
    std::size_t num_blocks() const noexcept { return num_blocks_; }
    std::size_t block_size() const noexcept { return block_size_; }
    std::size_t dimension() const noexcept;

    bool is_complex() const noexcept { return std::holds_alternative<std::vector<Complex>>(data_); }
    bool is_real() const noexcept { return std::holds_alternative<std::vector<double>>(data_); }
    bool is_sign() const noexcept { return std::holds_alternative<std::vector<std::int8_t>>(data_); }

    // Typed views; throw MismatchError on the wrong payload kind.
    std::span<const Complex> complex_data() const;
    std::span<const double> real_data() const;
    std::span<const std::int8_t> sign_data() const;

    // GHRR block j as m² row-major entries.
    std::span<const Complex> block(std::size_t j) const;

    // True when both have the same family, shape and the same bytes.
    friend bool bit_equal(const Hypervector& a, const Hypervector& b) noexcept;

private:
    using Payload = std::variant<std::vector<Complex>, std::vector<double>, std::vector<std::int8_t>>;

    Hypervector(Family family, std::size_t num_blocks, std::size_t block_size, Payload data)
        : family_(family), num_blocks_(num_blocks), block_size_(block_size), data_(std::move(data)) {}

    Family family_;
    std::size_t num_blocks_;
    std::size_t block_size_;
    Payload data_;
};

bool bit_equal(const Hypervector& a, const Hypervector& b) noexcept;

}  // namespace pathhd
