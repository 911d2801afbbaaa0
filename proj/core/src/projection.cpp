#include "pathhd/projection.hpp"

#include <cmath>
#include <string>

#include "pathhd/error.hpp"
#include "pathhd/rng.hpp"

namespace pathhd {

namespace {

void normalize(std::span<double> v, const char* what) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm == 0.0) throw ZeroNormError(std::string("cannot normalize zero ") + what);
    const double inv = 1.0 / std::sqrt(norm);
    for (double& x : v) x *= inv;
}

}  // namespace

Projector::Projector(std::uint64_t projection_seed, std::size_t text_dim, const HdcConfig& config)
    : config_(config), text_dim_(text_dim) {
    config_.validate();
    if (text_dim == 0) throw ConfigError("text embedding dimension must be >= 1");
    const std::size_t d = config_.dimension();
    const double stddev = 1.0 / std::sqrt(static_cast<double>(text_dim));
    matrix_.resize(d * text_dim);
    for (std::size_t i = 0; i < d; ++i) {
        auto rng = CounterRng::stream(projection_seed, {i});
        for (std::size_t t = 0; t < text_dim; ++t) matrix_[i * text_dim + t] = rng.normal() * stddev;
    }
}

Hypervector Projector::project(std::span<const double> embedding) const {
    if (embedding.size() != text_dim_) {
        throw MismatchError("embedding has length " + std::to_string(embedding.size()) + ", projector expects " +
                            std::to_string(text_dim_));
    }
    bool nonzero = false;
    for (double x : embedding) nonzero = nonzero || x != 0.0;
    if (!nonzero) throw ZeroNormError("cannot normalize an all-zero embedding");

    const std::size_t d = config_.dimension();
    std::vector<double> y(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        const double* row = matrix_.data() + i * text_dim_;
        double acc = 0.0;
        for (std::size_t t = 0; t < text_dim_; ++t) acc += row[t] * embedding[t];
        y[i] = acc;
    }

    switch (config_.family) {
        case Family::Ghrr: {
            const std::size_t area = config_.block_size * config_.block_size;
            for (std::size_t j = 0; j < config_.num_blocks; ++j) {
                normalize(std::span<double>(y).subspan(j * area, area), "projected block");
            }
            std::vector<Hypervector::Complex> data(d);
            for (std::size_t i = 0; i < d; ++i) data[i] = {y[i], 0.0};
            return Hypervector::ghrr(config_.num_blocks, config_.block_size, std::move(data));
        }
        case Family::Fhrr: {
            normalize(y, "projected vector");
            std::vector<Hypervector::Complex> data(d);
            for (std::size_t i = 0; i < d; ++i) data[i] = {y[i], 0.0};
            return Hypervector::fhrr(std::move(data));
        }
        case Family::Hrr:
            normalize(y, "projected vector");
            return Hypervector::hrr(std::move(y));
        case Family::RealElementwise:
            normalize(y, "projected vector");
            return Hypervector::real(std::move(y));
        case Family::BipolarXor:
        case Family::CommMix: {
            std::vector<std::int8_t> signs(d);
            for (std::size_t i = 0; i < d; ++i) signs[i] = y[i] < 0.0 ? std::int8_t{-1} : std::int8_t{1};
            return Hypervector::bipolar(config_.family, std::move(signs));
        }
    }
    throw MismatchError("unhandled family");
}

Hypervector project_embedding(std::uint64_t projection_seed, std::span<const double> embedding,
                              const HdcConfig& config) {
    return Projector(projection_seed, embedding.size(), config).project(embedding);
}

}  // namespace pathhd
