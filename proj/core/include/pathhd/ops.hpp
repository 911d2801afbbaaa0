#pragma once

#include <cstdint>
#include <span>

#include "pathhd/hypervector.hpp"

namespace pathhd {

// Position of the known operand y in the original bind(x, y).
//   RightFactor: z = bind(x, y), recover x   (GHRR: X_j ≈ Z_j Y_j*)
//   LeftFactor:  z = bind(y, x), recover x   (GHRR: X_j ≈ Y_j* Z_j)
// Commutative families ignore the side.
enum class Side { LeftFactor, RightFactor };

// Guard added to the divisor in real elementwise unbinding.
inline constexpr double kRealUnbindEpsilon = 1e-12;

// Atomic hypervector number `symbol_index` of the codebook described by cfg.
// Each block draws from its own stream keyed by (cfg.seed, symbol_index, block).
Hypervector make_atom(const HdcConfig& cfg, std::uint64_t symbol_index);

// Binding identity: all-I blocks, zero phases, delta (HRR), all ones.
Hypervector identity(const HdcConfig& cfg);
Hypervector identity_like(const Hypervector& x);

Hypervector bind(const Hypervector& x, const Hypervector& y);
Hypervector unbind(const Hypervector& z, const Hypervector& y, Side side);

// Blockwise cosine: (1/D) Σ_j Re<X_j, Y_j>_F / (|X_j|_F |Y_j|_F) for GHRR,
// ordinary cosine for flat families. Throws ZeroNormError on a zero block.
double similarity(const Hypervector& x, const Hypervector& y);

// similarity(query, f0 ⊗ f1 ⊗ ...) with the bind fold taken left to right.
// Bit-identical to materialising the product; GHRR runs blockwise without
// allocating. Throws MismatchError on an empty factor list.
double path_similarity(const Hypervector& query, std::span<const Hypervector* const> factors);

Hypervector negate(const Hypervector& x);
// Multiplies every entry by c. Not defined for bipolar payloads.
Hypervector scaled(const Hypervector& x, double c);

// max_j |A_j* A_j - I|_max for GHRR, max_i ||x_i| - 1| for FHRR; 0 otherwise.
double unitarity_defect(const Hypervector& x);

// Throws MismatchError unless x and y share family and shape.
void require_compatible(const Hypervector& x, const Hypervector& y);

}  // namespace pathhd
