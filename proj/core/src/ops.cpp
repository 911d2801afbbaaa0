#include "pathhd/ops.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "pathhd/error.hpp"
#include "pathhd/rng.hpp"

namespace pathhd {

namespace {

using Complex = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex phasor(double phi) { return {std::cos(phi), std::sin(phi)}; }

// Haar-distributed m×m unitary (row-major) from a Householder QR of a
// complex Gaussian matrix, with diag(R) phases folded back into Q.
void haar_unitary(std::size_t m, CounterRng& rng, Complex* out) {
    std::vector<Complex> r(m * m);
    for (auto& z : r) z = Complex(rng.normal(), rng.normal()) * (1.0 / std::numbers::sqrt2);
    std::vector<Complex> q(m * m, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < m; ++i) q[i * m + i] = 1.0;

    std::vector<Complex> v(m);
    std::vector<Complex> diag(m);
    for (std::size_t k = 0; k < m; ++k) {
        double norm_x = 0.0;
        for (std::size_t i = k; i < m; ++i) norm_x += std::norm(r[i * m + k]);
        norm_x = std::sqrt(norm_x);
        const Complex x0 = r[k * m + k];
        const Complex unit = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0, 0.0);
        const Complex alpha = -unit * norm_x;

        double norm_v = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            v[i] = r[i * m + k] - (i == k ? alpha : Complex(0.0, 0.0));
            norm_v += std::norm(v[i]);
        }
        if (norm_v > 0.0) {
            const double inv = 1.0 / std::sqrt(norm_v);
            for (std::size_t i = k; i < m; ++i) v[i] *= inv;
            // R[k:, :] -= 2 v (v* R[k:, :])
            for (std::size_t j = 0; j < m; ++j) {
                Complex dot(0.0, 0.0);
                for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i]) * r[i * m + j];
                for (std::size_t i = k; i < m; ++i) r[i * m + j] -= 2.0 * v[i] * dot;
            }
            // Q[:, k:] -= 2 (Q[:, k:] v) v*
            for (std::size_t i = 0; i < m; ++i) {
                Complex dot(0.0, 0.0);
                for (std::size_t l = k; l < m; ++l) dot += q[i * m + l] * v[l];
                for (std::size_t l = k; l < m; ++l) q[i * m + l] -= 2.0 * dot * std::conj(v[l]);
            }
        }
        const Complex rkk = r[k * m + k];
        diag[k] = std::abs(rkk) > 0.0 ? rkk / std::abs(rkk) : Complex(1.0, 0.0);
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) out[i * m + j] = q[i * m + j] * diag[j];
    }
}

// Z = X·Y for one m×m block; manual arithmetic avoids the NaN-recovery path
// of std::complex multiplication.
template <std::size_t M>
void block_matmul_fixed(const Complex* x, const Complex* y, Complex* z) {
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
            double re = 0.0, im = 0.0;
            for (std::size_t k = 0; k < M; ++k) {
                const Complex a = x[i * M + k];
                const Complex b = y[k * M + j];
                re += a.real() * b.real() - a.imag() * b.imag();
                im += a.real() * b.imag() + a.imag() * b.real();
            }
            z[i * M + j] = Complex(re, im);
        }
    }
}

void block_matmul(std::size_t m, const Complex* x, const Complex* y, Complex* z) {
    switch (m) {
        case 1: block_matmul_fixed<1>(x, y, z); return;
        case 2: block_matmul_fixed<2>(x, y, z); return;
        case 3: block_matmul_fixed<3>(x, y, z); return;
        case 4: block_matmul_fixed<4>(x, y, z); return;
        default: break;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double re = 0.0, im = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const Complex a = x[i * m + k];
                const Complex b = y[k * m + j];
                re += a.real() * b.real() - a.imag() * b.imag();
                im += a.real() * b.imag() + a.imag() * b.real();
            }
            z[i * m + j] = Complex(re, im);
        }
    }
}

// Z = X·Y* (conj_left = false) or Z = X*·Y (conj_left = true).
void block_matmul_adjoint(std::size_t m, const Complex* x, const Complex* y, Complex* z, bool conj_left) {
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            Complex acc(0.0, 0.0);
            for (std::size_t k = 0; k < m; ++k) {
                acc += conj_left ? std::conj(x[k * m + i]) * y[k * m + j]
                                 : x[i * m + k] * std::conj(y[j * m + k]);
            }
            z[i * m + j] = acc;
        }
    }
}

std::string shape_of(const Hypervector& h) {
    return std::string(to_string(h.family())) + "[" + std::to_string(h.num_blocks()) + "x" +
           std::to_string(h.block_size()) + "x" + std::to_string(h.block_size()) + "]";
}

std::vector<std::int8_t> random_signs(CounterRng& rng, std::size_t d) {
    std::vector<std::int8_t> out(d);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < d; ++i) {
        if (i % 64 == 0) bits = rng();
        out[i] = (bits & 1U) ? std::int8_t{1} : std::int8_t{-1};
        bits >>= 1;
    }
    return out;
}

template <typename T>
std::vector<T> to_vector(std::span<const T> s) {
    return std::vector<T>(s.begin(), s.end());
}

}  // namespace

void require_compatible(const Hypervector& x, const Hypervector& y) {
    if (x.family() != y.family() || x.num_blocks() != y.num_blocks() || x.block_size() != y.block_size()) {
        throw MismatchError("incompatible hypervectors: " + shape_of(x) + " vs " + shape_of(y));
    }
}

Hypervector make_atom(const HdcConfig& cfg, std::uint64_t symbol_index) {
    cfg.validate();
    const std::size_t d = cfg.dimension();
    switch (cfg.family) {
        case Family::Ghrr: {
            const std::size_t m = cfg.block_size;
            std::vector<Complex> data(d, Complex(0.0, 0.0));
            for (std::size_t j = 0; j < cfg.num_blocks; ++j) {
                auto rng = CounterRng::stream(cfg.seed, {symbol_index, j});
                Complex* blk = data.data() + j * m * m;
                if (cfg.block_family == BlockFamily::DiagonalPhase) {
                    for (std::size_t l = 0; l < m; ++l) blk[l * m + l] = phasor(kTwoPi * rng.uniform());
                } else {
                    haar_unitary(m, rng, blk);
                }
            }
            return Hypervector::ghrr(cfg.num_blocks, m, std::move(data));
        }
        case Family::Fhrr: {
            auto rng = CounterRng::stream(cfg.seed, {symbol_index, 0});
            std::vector<Complex> data(d);
            for (auto& z : data) z = phasor(kTwoPi * rng.uniform());
            return Hypervector::fhrr(std::move(data));
        }
        case Family::Hrr: {
            // Unit-modulus spectrum: circular correlation is then an exact inverse.
            auto rng = CounterRng::stream(cfg.seed, {symbol_index, 0});
            std::vector<Complex> spectrum(d / 2 + 1);
            spectrum[0] = static_cast<double>(rng.sign());
            for (std::size_t k = 1; k < spectrum.size(); ++k) {
                if (d % 2 == 0 && k == d / 2) {
                    spectrum[k] = static_cast<double>(rng.sign());
                } else {
                    spectrum[k] = phasor(kTwoPi * rng.uniform());
                }
            }
            return Hypervector::hrr(detail::inverse_real_dft(spectrum, d));
        }
        case Family::RealElementwise: {
            auto rng = CounterRng::stream(cfg.seed, {symbol_index, 0});
            const double scale = 1.0 / std::sqrt(static_cast<double>(d));
            std::vector<double> data(d);
            for (auto& v : data) v = rng.normal() * scale;
            return Hypervector::real(std::move(data));
        }
        case Family::BipolarXor: {
            auto rng = CounterRng::stream(cfg.seed, {symbol_index, 0});
            return Hypervector::bipolar(Family::BipolarXor, random_signs(rng, d));
        }
        case Family::CommMix: {
            auto base_rng = CounterRng::stream(cfg.seed, {symbol_index, 0});
            auto mask_rng = CounterRng::stream(cfg.seed, {symbol_index, 1});
            auto base = random_signs(base_rng, d);
            const auto mask = random_signs(mask_rng, d);
            for (std::size_t i = 0; i < d; ++i) base[i] = static_cast<std::int8_t>(base[i] * mask[i]);
            return Hypervector::bipolar(Family::CommMix, std::move(base));
        }
    }
    throw ConfigError("unhandled family");
}

Hypervector identity(const HdcConfig& cfg) {
    cfg.validate();
    const std::size_t d = cfg.dimension();
    switch (cfg.family) {
        case Family::Ghrr: {
            const std::size_t m = cfg.block_size;
            std::vector<Complex> data(d, Complex(0.0, 0.0));
            for (std::size_t j = 0; j < cfg.num_blocks; ++j) {
                for (std::size_t l = 0; l < m; ++l) data[j * m * m + l * m + l] = 1.0;
            }
            return Hypervector::ghrr(cfg.num_blocks, m, std::move(data));
        }
        case Family::Fhrr: return Hypervector::fhrr(std::vector<Complex>(d, Complex(1.0, 0.0)));
        case Family::Hrr: {
            std::vector<double> delta(d, 0.0);
            delta[0] = 1.0;
            return Hypervector::hrr(std::move(delta));
        }
        case Family::RealElementwise: return Hypervector::real(std::vector<double>(d, 1.0));
        case Family::BipolarXor:
        case Family::CommMix: return Hypervector::bipolar(cfg.family, std::vector<std::int8_t>(d, 1));
    }
    throw ConfigError("unhandled family");
}

Hypervector identity_like(const Hypervector& x) {
    HdcConfig cfg;
    cfg.family = x.family();
    cfg.num_blocks = x.num_blocks();
    cfg.block_size = x.block_size();
    return identity(cfg);
}

Hypervector bind(const Hypervector& x, const Hypervector& y) {
    require_compatible(x, y);
    switch (x.family()) {
        case Family::Ghrr: {
            const std::size_t m = x.block_size();
            const auto xs = x.complex_data();
            const auto ys = y.complex_data();
            std::vector<Complex> out(xs.size());
            for (std::size_t j = 0; j < x.num_blocks(); ++j) {
                block_matmul(m, xs.data() + j * m * m, ys.data() + j * m * m, out.data() + j * m * m);
            }
            auto z = Hypervector::ghrr(x.num_blocks(), m, std::move(out));
            assert(!(unitarity_defect(x) <= 1e-9 && unitarity_defect(y) <= 1e-9) ||
                   unitarity_defect(z) <= 1e-9);
            return z;
        }
        case Family::Fhrr: {
            const auto xs = x.complex_data();
            const auto ys = y.complex_data();
            std::vector<Complex> out(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const Complex a = xs[i], b = ys[i];
                out[i] = Complex(a.real() * b.real() - a.imag() * b.imag(),
                                 a.real() * b.imag() + a.imag() * b.real());
            }
            return Hypervector::fhrr(std::move(out));
        }
        case Family::Hrr: return Hypervector::hrr(detail::circular_convolve(x.real_data(), y.real_data()));
        case Family::RealElementwise: {
            const auto xs = x.real_data();
            const auto ys = y.real_data();
            std::vector<double> out(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i] * ys[i];
            return Hypervector::real(std::move(out));
        }
        case Family::BipolarXor:
        case Family::CommMix: {
            const auto xs = x.sign_data();
            const auto ys = y.sign_data();
            std::vector<std::int8_t> out(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) out[i] = static_cast<std::int8_t>(xs[i] * ys[i]);
            return Hypervector::bipolar(x.family(), std::move(out));
        }
    }
    throw MismatchError("unhandled family");
}

Hypervector unbind(const Hypervector& z, const Hypervector& y, Side side) {
    require_compatible(z, y);
    switch (z.family()) {
        case Family::Ghrr: {
            const std::size_t m = z.block_size();
            const auto zs = z.complex_data();
            const auto ys = y.complex_data();
            std::vector<Complex> out(zs.size());
            for (std::size_t j = 0; j < z.num_blocks(); ++j) {
                const std::size_t off = j * m * m;
                if (side == Side::RightFactor) {
                    block_matmul_adjoint(m, zs.data() + off, ys.data() + off, out.data() + off, false);
                } else {
                    block_matmul_adjoint(m, ys.data() + off, zs.data() + off, out.data() + off, true);
                }
            }
            return Hypervector::ghrr(z.num_blocks(), m, std::move(out));
        }
        case Family::Fhrr: {
            const auto zs = z.complex_data();
            const auto ys = y.complex_data();
            std::vector<Complex> out(zs.size());
            for (std::size_t i = 0; i < zs.size(); ++i) out[i] = zs[i] * std::conj(ys[i]);
            return Hypervector::fhrr(std::move(out));
        }
        case Family::Hrr: return Hypervector::hrr(detail::circular_correlate(z.real_data(), y.real_data()));
        case Family::RealElementwise: {
            const auto zs = z.real_data();
            const auto ys = y.real_data();
            std::vector<double> out(zs.size());
            for (std::size_t i = 0; i < zs.size(); ++i) {
                out[i] = zs[i] / (ys[i] + std::copysign(kRealUnbindEpsilon, ys[i]));
            }
            return Hypervector::real(std::move(out));
        }
        case Family::BipolarXor:
        case Family::CommMix: return bind(z, y);
    }
    throw MismatchError("unhandled family");
}

double similarity(const Hypervector& x, const Hypervector& y) {
    require_compatible(x, y);
    switch (x.family()) {
        case Family::Ghrr: {
            const std::size_t area = x.block_size() * x.block_size();
            const auto xs = x.complex_data();
            const auto ys = y.complex_data();
            double total = 0.0;
            for (std::size_t j = 0; j < x.num_blocks(); ++j) {
                double dot = 0.0, nx = 0.0, ny = 0.0;
                const Complex* a = xs.data() + j * area;
                const Complex* b = ys.data() + j * area;
                for (std::size_t l = 0; l < area; ++l) {
                    dot += a[l].real() * b[l].real() + a[l].imag() * b[l].imag();
                    nx += a[l].real() * a[l].real() + a[l].imag() * a[l].imag();
                    ny += b[l].real() * b[l].real() + b[l].imag() * b[l].imag();
                }
                if (nx == 0.0 || ny == 0.0) {
                    throw ZeroNormError("zero-norm block " + std::to_string(j) + " in similarity");
                }
                total += dot / std::sqrt(nx * ny);
            }
            return total / static_cast<double>(x.num_blocks());
        }
        case Family::Fhrr: {
            const auto xs = x.complex_data();
            const auto ys = y.complex_data();
            double dot = 0.0, nx = 0.0, ny = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                dot += xs[i].real() * ys[i].real() + xs[i].imag() * ys[i].imag();
                nx += std::norm(xs[i]);
                ny += std::norm(ys[i]);
            }
            if (nx == 0.0 || ny == 0.0) throw ZeroNormError("zero-norm vector in similarity");
            return dot / std::sqrt(nx * ny);
        }
        case Family::Hrr:
        case Family::RealElementwise: {
            const auto xs = x.real_data();
            const auto ys = y.real_data();
            double dot = 0.0, nx = 0.0, ny = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                dot += xs[i] * ys[i];
                nx += xs[i] * xs[i];
                ny += ys[i] * ys[i];
            }
            if (nx == 0.0 || ny == 0.0) throw ZeroNormError("zero-norm vector in similarity");
            return dot / std::sqrt(nx * ny);
        }
        case Family::BipolarXor:
        case Family::CommMix: {
            const auto xs = x.sign_data();
            const auto ys = y.sign_data();
            std::int64_t dot = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) dot += xs[i] * ys[i];
            return static_cast<double>(dot) / static_cast<double>(xs.size());
        }
    }
    throw MismatchError("unhandled family");
}

double path_similarity(const Hypervector& query, std::span<const Hypervector* const> factors) {
    if (factors.empty()) throw MismatchError("path_similarity needs at least one factor");
    for (const auto* f : factors) require_compatible(query, *f);
    if (query.family() != Family::Ghrr || query.block_size() > 4) {
        Hypervector acc = *factors.front();
        for (std::size_t i = 1; i < factors.size(); ++i) acc = bind(acc, *factors[i]);
        return similarity(query, acc);
    }
    const std::size_t m = query.block_size();
    const std::size_t area = m * m;
    const auto qs = query.complex_data();
    Complex acc[16], next[16];
    double total = 0.0;
    for (std::size_t j = 0; j < query.num_blocks(); ++j) {
        const Complex* first = factors.front()->complex_data().data() + j * area;
        std::copy(first, first + area, acc);
        for (std::size_t i = 1; i < factors.size(); ++i) {
            block_matmul(m, acc, factors[i]->complex_data().data() + j * area, next);
            std::copy(next, next + area, acc);
        }
        double dot = 0.0, nx = 0.0, ny = 0.0;
        const Complex* a = qs.data() + j * area;
        for (std::size_t l = 0; l < area; ++l) {
            dot += a[l].real() * acc[l].real() + a[l].imag() * acc[l].imag();
            nx += a[l].real() * a[l].real() + a[l].imag() * a[l].imag();
            ny += acc[l].real() * acc[l].real() + acc[l].imag() * acc[l].imag();
        }
        if (nx == 0.0 || ny == 0.0) throw ZeroNormError("zero-norm block " + std::to_string(j) + " in similarity");
        total += dot / std::sqrt(nx * ny);
    }
    return total / static_cast<double>(query.num_blocks());
}

Hypervector negate(const Hypervector& x) {
    switch (x.family()) {
        case Family::Ghrr:
        case Family::Fhrr: {
            auto data = to_vector(x.complex_data());
            for (auto& z : data) z = -z;
            return x.family() == Family::Ghrr ? Hypervector::ghrr(x.num_blocks(), x.block_size(), std::move(data))
                                              : Hypervector::fhrr(std::move(data));
        }
        case Family::Hrr:
        case Family::RealElementwise: {
            auto data = to_vector(x.real_data());
            for (auto& v : data) v = -v;
            return x.family() == Family::Hrr ? Hypervector::hrr(std::move(data)) : Hypervector::real(std::move(data));
        }
        case Family::BipolarXor:
        case Family::CommMix: {
            auto data = to_vector(x.sign_data());
            for (auto& v : data) v = static_cast<std::int8_t>(-v);
            return Hypervector::bipolar(x.family(), std::move(data));
        }
    }
    throw MismatchError("unhandled family");
}

Hypervector scaled(const Hypervector& x, double c) {
    switch (x.family()) {
        case Family::Ghrr:
        case Family::Fhrr: {
            auto data = to_vector(x.complex_data());
            for (auto& z : data) z *= c;
            return x.family() == Family::Ghrr ? Hypervector::ghrr(x.num_blocks(), x.block_size(), std::move(data))
                                              : Hypervector::fhrr(std::move(data));
        }
        case Family::Hrr:
        case Family::RealElementwise: {
            auto data = to_vector(x.real_data());
            for (auto& v : data) v *= c;
            return x.family() == Family::Hrr ? Hypervector::hrr(std::move(data)) : Hypervector::real(std::move(data));
        }
        case Family::BipolarXor:
        case Family::CommMix: throw MismatchError("bipolar hypervectors cannot be scaled");
    }
    throw MismatchError("unhandled family");
}

double unitarity_defect(const Hypervector& x) {
    if (x.family() == Family::Fhrr) {
        double worst = 0.0;
        for (const Complex& z : x.complex_data()) worst = std::max(worst, std::abs(std::abs(z) - 1.0));
        return worst;
    }
    if (x.family() != Family::Ghrr) return 0.0;
    const std::size_t m = x.block_size();
    std::vector<Complex> gram(m * m);
    double worst = 0.0;
    for (std::size_t j = 0; j < x.num_blocks(); ++j) {
        const Complex* a = x.complex_data().data() + j * m * m;
        block_matmul_adjoint(m, a, a, gram.data(), true);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) {
                const Complex target = r == c ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
                worst = std::max(worst, std::abs(gram[r * m + c] - target));
            }
        }
    }
    return worst;
}

}  // namespace pathhd
