#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pathhd/codebook.hpp"
#include "pathhd/error.hpp"
#include "pathhd/ops.hpp"
#include "pathhd/projection.hpp"
#include "pathhd/rng.hpp"

using namespace pathhd;

namespace {

const Family kAllFamilies[] = {Family::Ghrr, Family::Fhrr, Family::Hrr,
                               Family::RealElementwise, Family::BipolarXor, Family::CommMix};

HdcConfig config_for(Family f, std::size_t d, std::uint64_t seed = 7) {
    return f == Family::Ghrr ? HdcConfig::ghrr(d, 4, seed) : HdcConfig::flat(f, d, seed);
}

std::vector<std::string> names(std::size_t n, const std::string& prefix = "r") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// Largest absolute elementwise difference between two payloads of the same kind.
double max_abs_diff(const Hypervector& a, const Hypervector& b) {
    double worst = 0.0;
    if (a.is_complex()) {
        for (std::size_t i = 0; i < a.complex_data().size(); ++i)
            worst = std::max(worst, std::abs(a.complex_data()[i] - b.complex_data()[i]));
    } else if (a.is_real()) {
        for (std::size_t i = 0; i < a.real_data().size(); ++i)
            worst = std::max(worst, std::abs(a.real_data()[i] - b.real_data()[i]));
    } else {
        for (std::size_t i = 0; i < a.sign_data().size(); ++i)
            worst = std::max(worst, double(std::abs(a.sign_data()[i] - b.sign_data()[i])));
    }
    return worst;
}

}  // namespace

TEST_CASE("codebook build is deterministic and insertion stable") {
    for (Family f : kAllFamilies) {
        CAPTURE(to_string(f));
        const auto cfg = config_for(f, 256);
        const auto a = make_codebook(cfg, names(5));
        const auto b = make_codebook(cfg, names(5));
        auto longer = names(5);
        longer.push_back("extra");
        const auto c = make_codebook(cfg, longer);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(bit_equal(a.entry(i), b.entry(i)));
            CHECK(bit_equal(a.entry(i), c.entry(i)));
        }
        CHECK_FALSE(bit_equal(a.entry(0), a.entry(1)));
    }
}

TEST_CASE("codebook rejects bad inputs") {
    const auto cfg = HdcConfig::ghrr(64, 4, 1);
    CHECK_THROWS_AS(make_codebook(cfg, {"a", "b", "a"}), ConfigError);
    CHECK_THROWS_AS(make_codebook(cfg, {}), ConfigError);
    HdcConfig flat = HdcConfig::flat(Family::Hrr, 64, 1);
    flat.block_size = 2;
    CHECK_THROWS_AS(make_codebook(flat, {"a"}), ConfigError);
    const auto cb = make_codebook(cfg, {"a"});
    CHECK_THROWS_AS(cb.at("missing"), UnknownSymbolError);
    CHECK(cb.find("missing") == nullptr);
}

TEST_CASE("atoms satisfy their family invariants") {
    for (BlockFamily bf : {BlockFamily::HouseholderProduct, BlockFamily::DiagonalPhase}) {
        const auto cb = make_codebook(HdcConfig::ghrr(4096, 4, 3, bf), names(20));
        for (std::size_t i = 0; i < cb.size(); ++i) CHECK(unitarity_defect(cb.entry(i)) <= 1e-9);
    }
    const auto fh = make_codebook(HdcConfig::flat(Family::Fhrr, 1024, 3), names(5));
    for (std::size_t i = 0; i < fh.size(); ++i) {
        for (auto z : fh.entry(i).complex_data()) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-12);
    }
    for (Family f : {Family::BipolarXor, Family::CommMix}) {
        const auto cb = make_codebook(HdcConfig::flat(f, 1024, 3), names(5));
        for (std::size_t i = 0; i < cb.size(); ++i) {
            for (auto v : cb.entry(i).sign_data()) CHECK((v == 1 || v == -1));
        }
    }
}

TEST_CASE("ghrr atoms are near-orthogonal at d=4096") {
    const auto cb = make_codebook(HdcConfig::ghrr(4096, 4, 11), names(2000));
    double sum = 0.0;
    for (std::size_t p = 0; p < 1000; ++p) {
        const double s = oracle::similarity(cb.entry(2 * p), cb.entry(2 * p + 1));
        CHECK(std::abs(similarity(cb.entry(2 * p), cb.entry(2 * p + 1)) - s) <= 1e-12);
        sum += std::abs(s);
    }
    CHECK(sum / 1000.0 <= 0.05);
}

TEST_CASE("library similarity agrees with the scalar-loop oracle") {
    for (Family f : kAllFamilies) {
        CAPTURE(to_string(f));
        const auto cb = make_codebook(config_for(f, 1024), names(6));
        for (std::size_t i = 0; i + 1 < cb.size(); ++i) {
            const auto z = bind(cb.entry(i), cb.entry(i + 1));
            CHECK(std::abs(similarity(z, cb.entry(i)) - oracle::similarity(z, cb.entry(i))) <= 1e-12);
            CHECK(std::abs(similarity(cb.entry(i), cb.entry(i + 1)) -
                           oracle::similarity(cb.entry(i), cb.entry(i + 1))) <= 1e-12);
        }
    }
}

TEST_CASE("bind with the identity returns the operand") {
    for (Family f : kAllFamilies) {
        CAPTURE(to_string(f));
        const auto cfg = config_for(f, 1024);
        const auto x = make_atom(cfg, 4);
        const auto id = identity(cfg);
        if (f == Family::Hrr) {
            CHECK(max_abs_diff(bind(x, id), x) <= 1e-9);
            CHECK(max_abs_diff(bind(id, x), x) <= 1e-9);
        } else {
            CHECK(bit_equal(bind(x, id), x));
            CHECK(bit_equal(bind(id, x), x));
        }
    }
}

TEST_CASE("bipolar self-binding is all ones") {
    const auto x = make_atom(HdcConfig::flat(Family::BipolarXor, 512, 2), 0);
    const auto self = bind(x, x);
    for (auto v : self.sign_data()) CHECK(v == 1);
}

TEST_CASE("binding is associative") {
    for (Family f : kAllFamilies) {
        CAPTURE(to_string(f));
        const auto cb = make_codebook(config_for(f, 1024), names(3));
        const auto& a = cb.entry(0);
        const auto& b = cb.entry(1);
        const auto& c = cb.entry(2);
        CHECK(max_abs_diff(bind(bind(a, b), c), bind(a, bind(b, c))) <= 1e-9);
    }
}

TEST_CASE("commutativity dichotomy") {
    for (Family f : kAllFamilies) {
        CAPTURE(to_string(f));
        const auto cb = make_codebook(config_for(f, 2048), names(2));
        const auto ab = bind(cb.entry(0), cb.entry(1));
        const auto ba = bind(cb.entry(1), cb.entry(0));
        if (f == Family::Ghrr) {
            CHECK(similarity(ab, ba) <= 0.2);
        } else if (f == Family::Hrr) {
            CHECK(max_abs_diff(ab, ba) <= 1e-9);
        } else {
            CHECK(bit_equal(ab, ba));
        }
    }
}

TEST_CASE("diagonal-phase ghrr blocks commute") {
    const auto cb = make_codebook(HdcConfig::ghrr(1024, 4, 5, BlockFamily::DiagonalPhase), names(2));
    const auto ab = bind(cb.entry(0), cb.entry(1));
    const auto ba = bind(cb.entry(1), cb.entry(0));
    CHECK(max_abs_diff(ab, ba) <= 1e-12);
}

TEST_CASE("ghrr binding is order sensitive on average") {
    const auto cb = make_codebook(HdcConfig::ghrr(4096, 4, 13), names(2000));
    double sum = 0.0;
    for (std::size_t p = 0; p < 1000; ++p) {
        const auto& a = cb.entry(2 * p);
        const auto& b = cb.entry(2 * p + 1);
        sum += oracle::similarity(bind(a, b), bind(b, a));
    }
    CHECK(sum / 1000.0 <= 0.1);
}

TEST_CASE("ghrr bind keeps blocks unitary") {
    const auto cb = make_codebook(HdcConfig::ghrr(4096, 4, 17), names(8));
    Hypervector acc = cb.entry(0);
    for (std::size_t i = 1; i < cb.size(); ++i) {
        acc = bind(acc, cb.entry(i));
        CHECK(unitarity_defect(acc) <= 1e-9);
    }
}

TEST_CASE("ghrr unbinding is exact on both sides") {
    const auto cb = make_codebook(HdcConfig::ghrr(4096, 4, 19), names(40));
    for (std::size_t p = 0; p < 20; ++p) {
        const auto& x = cb.entry(2 * p);
        const auto& y = cb.entry(2 * p + 1);
        CHECK(similarity(unbind(bind(x, y), y, Side::RightFactor), x) >= 1.0 - 1e-6);
        CHECK(similarity(unbind(bind(y, x), y, Side::LeftFactor), x) >= 1.0 - 1e-6);
    }
}

TEST_CASE("bipolar and real unbinding recover the factor") {
    const auto bp = make_codebook(HdcConfig::flat(Family::BipolarXor, 512, 2), names(2));
    CHECK(bit_equal(unbind(bind(bp.entry(0), bp.entry(1)), bp.entry(1), Side::RightFactor), bp.entry(0)));
    const auto cm = make_codebook(HdcConfig::flat(Family::CommMix, 512, 2), names(2));
    CHECK(bit_equal(unbind(bind(cm.entry(0), cm.entry(1)), cm.entry(1), Side::RightFactor), cm.entry(0)));
    const auto fh = make_codebook(HdcConfig::flat(Family::Fhrr, 512, 2), names(2));
    CHECK(max_abs_diff(unbind(bind(fh.entry(0), fh.entry(1)), fh.entry(1), Side::RightFactor), fh.entry(0)) <= 1e-12);
    const auto re = make_codebook(HdcConfig::flat(Family::RealElementwise, 512, 2), names(2));
    CHECK(similarity(unbind(bind(re.entry(0), re.entry(1)), re.entry(1), Side::RightFactor), re.entry(0)) >=
          1.0 - 1e-6);
}

TEST_CASE("real unbinding by zero stays finite") {
    const auto x = Hypervector::real({1.0, 2.0, 3.0});
    const auto y = Hypervector::real({0.0, 1.0, -1.0});
    const auto r = unbind(bind(x, y), y, Side::RightFactor);
    for (double v : r.real_data()) CHECK(std::isfinite(v));
}

TEST_CASE("hrr bind matches direct circular convolution") {
    const auto cb = make_codebook(HdcConfig::flat(Family::Hrr, 512, 23), names(4));
    for (std::size_t i = 0; i + 1 < cb.size(); ++i) {
        const auto& x = cb.entry(i);
        const auto& y = cb.entry(i + 1);
        const std::vector<double> xs(x.real_data().begin(), x.real_data().end());
        const std::vector<double> ys(y.real_data().begin(), y.real_data().end());
        const auto expect = oracle::circular_convolution(xs, ys);
        const auto got = bind(x, y);
        for (std::size_t k = 0; k < expect.size(); ++k) CHECK(std::abs(got.real_data()[k] - expect[k]) <= 1e-9);
    }
}

TEST_CASE("hrr unbinding recovers the factor at d=4096") {
    const std::size_t d = 4096;
    const auto cb = make_codebook(HdcConfig::flat(Family::Hrr, d, 29), names(200));
    double sum = 0.0;
    for (std::size_t t = 0; t < 100; ++t) {
        const auto& x = cb.entry(2 * t);
        const auto& y = cb.entry(2 * t + 1);
        const std::vector<double> xs(x.real_data().begin(), x.real_data().end());
        const std::vector<double> ys(y.real_data().begin(), y.real_data().end());
        const auto recovered = oracle::circular_correlation(oracle::circular_convolution(xs, ys), ys);
        const double s = oracle::cosine(recovered, xs);
        sum += s;
        const auto lib = unbind(bind(x, y), y, Side::RightFactor);
        const std::vector<double> ls(lib.real_data().begin(), lib.real_data().end());
        CHECK(std::abs(oracle::cosine(ls, xs) - s) <= 1e-9);
    }
    CHECK(sum / 100.0 >= 0.9);
}

TEST_CASE("path_similarity matches the materialised path bit for bit") {
    std::vector<HdcConfig> cfgs;
    for (Family f : kAllFamilies) cfgs.push_back(config_for(f, 1024));
    cfgs.push_back(HdcConfig::ghrr(1024, 2, 7));
    cfgs.push_back(HdcConfig::ghrr(1024, 4, 7, BlockFamily::DiagonalPhase));
    cfgs.push_back(HdcConfig::ghrr(1600, 5, 7));
    for (const auto& cfg : cfgs) {
        CAPTURE(to_string(cfg.family));
        CAPTURE(cfg.block_size);
        const auto cb = make_codebook(cfg, {"r1", "r2", "r3", "r4"});
        const auto query = encode_path(cb, std::vector<std::string>{"r2", "r1"});
        for (const std::vector<std::string>& rels :
             {std::vector<std::string>{}, {"r1"}, {"r2", "r1"}, {"r1", "r2"}, {"r3", "r4", "r1"}, {"r4", "r4", "r2", "r3"}}) {
            const double direct = similarity(query, encode_path(cb, rels));
            const double fused = path_similarity(cb, query, rels);
            CHECK(std::memcmp(&direct, &fused, sizeof direct) == 0);
        }
    }
    const auto cb = make_codebook(HdcConfig::ghrr(1024, 4, 7), {"r1"});
    CHECK_THROWS_AS(path_similarity(cb, cb.at("r1"), std::vector<std::string>{"zz"}), UnknownSymbolError);
    CHECK_THROWS_AS(path_similarity(cb.at("r1"), {}), MismatchError);
}

TEST_CASE("encode_path folds left over the codebook") {
    const auto cb = make_codebook(HdcConfig::ghrr(1024, 4, 31), {"r1", "r2", "r3"});
    const std::vector<std::string> one{"r1"};
    CHECK(bit_equal(encode_path(cb, one), cb.at("r1")));
    CHECK(bit_equal(encode_path(cb, std::span<const std::string>{}), identity(cb.config())));
    const std::vector<std::string> three{"r1", "r2", "r3"};
    CHECK(bit_equal(encode_path(cb, three), bind(bind(cb.at("r1"), cb.at("r2")), cb.at("r3"))));
    const std::vector<std::string> bad{"r1", "nope"};
    CHECK_THROWS_AS(encode_path(cb, bad), UnknownSymbolError);
}

TEST_CASE("ghrr path encodings distinguish reversed order") {
    const auto cb = make_codebook(HdcConfig::ghrr(4096, 4, 37), names(60));
    auto rng = CounterRng::stream(37, {1});
    double sum = 0.0;
    for (std::size_t t = 0; t < 500; ++t) {
        std::vector<std::string> fwd;
        std::vector<std::size_t> picked;
        while (picked.size() < 3) {
            const auto i = static_cast<std::size_t>(rng.below(60));
            if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
        }
        for (auto i : picked) fwd.push_back(cb.symbols()[i]);
        std::vector<std::string> rev(fwd.rbegin(), fwd.rend());
        sum += oracle::similarity(encode_path(cb, fwd), encode_path(cb, rev));
    }
    CHECK(sum / 500.0 <= 0.1);
}

TEST_CASE("similarity identities") {
    for (Family f : kAllFamilies) {
        CAPTURE(to_string(f));
        const auto cb = make_codebook(config_for(f, 1024), names(2));
        const auto& x = cb.entry(0);
        const auto& y = cb.entry(1);
        CHECK(std::abs(similarity(x, x) - 1.0) <= 1e-12);
        CHECK(std::abs(similarity(x, negate(x)) + 1.0) <= 1e-12);
        if (!x.is_sign()) CHECK(std::abs(similarity(scaled(x, 3.5), y) - similarity(x, y)) <= 1e-12);
    }
}

TEST_CASE("similarity reports zero norms and mismatches") {
    const auto x = Hypervector::real({0.0, 0.0});
    const auto y = Hypervector::real({1.0, 0.0});
    CHECK_THROWS_AS(similarity(x, y), ZeroNormError);
    const auto g = make_atom(HdcConfig::ghrr(64, 4, 1), 0);
    const auto h = make_atom(HdcConfig::ghrr(128, 4, 1), 0);
    CHECK_THROWS_AS(similarity(g, h), MismatchError);
    CHECK_THROWS_AS(bind(g, make_atom(HdcConfig::flat(Family::Fhrr, 64, 1), 0)), MismatchError);
}

TEST_CASE("independent ghrr atoms concentrate at d=8192") {
    const std::size_t d = 8192;
    const auto cfg = HdcConfig::ghrr(d, 4, 41);
    const double bound = 3.0 / std::sqrt(double(d));
    std::size_t within = 0;
    for (std::uint64_t t = 0; t < 10000; ++t) {
        if (std::abs(similarity(make_atom(cfg, 2 * t), make_atom(cfg, 2 * t + 1))) <= bound) ++within;
    }
    CHECK(within >= 9900);
}

TEST_CASE("codebook round trip is bit exact") {
    for (Family f : kAllFamilies) {
        CAPTURE(to_string(f));
        const auto cb = make_codebook(config_for(f, 256), names(4));
        std::stringstream buf;
        cb.save(buf);
        const std::string bytes = buf.str();
        CHECK(bytes.rfind("PATHHDCB", 0) == 0);
        std::stringstream in(bytes);
        const auto back = Codebook::load(in);
        CHECK(back.config() == cb.config());
        REQUIRE(back.size() == cb.size());
        for (std::size_t i = 0; i < cb.size(); ++i) {
            CHECK(back.symbols()[i] == cb.symbols()[i]);
            CHECK(bit_equal(back.entry(i), cb.entry(i)));
        }
        std::stringstream again;
        back.save(again);
        CHECK(again.str() == bytes);
    }
    std::stringstream junk("NOTACODEBOOK");
    CHECK_THROWS(Codebook::load(junk));
}

TEST_CASE("projection is deterministic and rejects zero input") {
    const auto cfg = HdcConfig::ghrr(1024, 4, 0);
    std::vector<double> e(32);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::sin(double(i) + 1.0);
    CHECK(bit_equal(project_embedding(5, e, cfg), project_embedding(5, e, cfg)));
    const std::vector<double> zero(32, 0.0);
    CHECK_THROWS_AS(project_embedding(5, zero, cfg), ZeroNormError);
    const std::vector<double> wrong(16, 1.0);
    CHECK_THROWS_AS(Projector(5, 32, cfg).project(wrong), MismatchError);
}

TEST_CASE("projection approximately preserves cosine") {
    const std::size_t dt = 768;
    const Projector proj(43, dt, HdcConfig::ghrr(4096, 4, 0));
    auto rng = CounterRng::stream(43, {2});
    for (std::size_t t = 0; t < 200; ++t) {
        std::vector<double> a(dt), b(dt);
        const double mix = rng.uniform(-1.0, 1.0);
        for (std::size_t i = 0; i < dt; ++i) {
            a[i] = rng.normal();
            b[i] = mix * a[i] + std::sqrt(1.0 - mix * mix) * rng.normal();
        }
        const double before = oracle::cosine(a, b);
        const double after = oracle::similarity(proj.project(a), proj.project(b));
        CHECK(std::abs(after - before) <= 0.15);
    }
}
