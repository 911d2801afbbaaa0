#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pathhd/hypervector.hpp"

namespace pathhd {

// Fixed random linear map P ∈ R^{d×d_t}, entries ~ Normal(0, 1/d_t), used to
// lift a text embedding into hypervector space. Row i of P is drawn from the
// stream keyed by (projection_seed, i).
//
// The projected real d-vector is packed into the target family:
//   GHRR   entries fill blocks row-major as real parts; each block is scaled to
//          unit Frobenius norm (the result is not unitary).
//   FHRR   real parts, whole vector scaled to unit norm.
//   HRR / REAL  whole vector scaled to unit norm.
//   BIPOLAR / COMM_MIX  sign of each entry, zero maps to +1.
class Projector {
public:
    Projector(std::uint64_t projection_seed, std::size_t text_dim, const HdcConfig& config);

    // Throws ZeroNormError for an all-zero embedding or a zero projected block,
    // MismatchError when embedding.size() != text_dim().
    Hypervector project(std::span<const double> embedding) const;

    std::size_t text_dim() const noexcept { return text_dim_; }
    const HdcConfig& config() const noexcept { return config_; }

private:
    HdcConfig config_;
    std::size_t text_dim_;
    std::vector<double> matrix_;  // row-major d × d_t
};

// One-shot convenience that materializes the projector.
Hypervector project_embedding(std::uint64_t projection_seed, std::span<const double> embedding,
                              const HdcConfig& config);

}  // namespace pathhd
