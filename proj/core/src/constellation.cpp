#include "fibercap/constellation.hpp"

#include <cmath>

#include "fibercap/error.hpp"
#include "fibercap/rng.hpp"

namespace fibercap {

ConstellationKind parse_constellation_kind(const std::string& name) {
    if (name == "qam64") return ConstellationKind::qam64;
    if (name == "gaussian" || name == "gaussian_iid") return ConstellationKind::gaussian_iid;
    if (name == "ripple") return ConstellationKind::ripple;
    throw ValidationError("constellation", "unknown constellation kind '" + name + "'");
}

std::string to_string(ConstellationKind k) {
    switch (k) {
        case ConstellationKind::qam64: return "qam64";
        case ConstellationKind::gaussian_iid: return "gaussian_iid";
        case ConstellationKind::ripple: return "ripple";
    }
    return "?";
}

Constellation Constellation::qam64(double power) {
    if (!(power >= 0.0)) throw ValidationError("power", "must be >= 0");
    Constellation c;
    c.kind_ = ConstellationKind::qam64;
    c.power_ = power;
    // Levels {-7,...,7}; mean |x|^2 of the square grid is 2 (M-1)/3 = 42.
    const double scale = std::sqrt(power / 42.0);
    for (int i = -7; i <= 7; i += 2)
        for (int q = -7; q <= 7; q += 2) c.points_.emplace_back(i * scale, q * scale);
    return c;
}

Constellation Constellation::gaussian_iid(double power) {
    if (!(power >= 0.0)) throw ValidationError("power", "must be >= 0");
    Constellation c;
    c.kind_ = ConstellationKind::gaussian_iid;
    c.power_ = power;
    return c;
}

Constellation Constellation::ripple(RippleDistribution dist) {
    dist.validate();
    Constellation c;
    c.kind_ = ConstellationKind::ripple;
    c.power_ = dist.total_power();
    c.ripple_ = std::move(dist);
    return c;
}

Constellation Constellation::with_power(double power) const {
    switch (kind_) {
        case ConstellationKind::qam64: return qam64(power);
        case ConstellationKind::gaussian_iid: return gaussian_iid(power);
        case ConstellationKind::ripple: {
            RippleDistribution d = *ripple_;
            const double f = power / power_;
            for (auto& s : d.S_levels) s *= f;
            for (auto& r : d.rho_levels) r *= std::sqrt(f);
            return ripple(std::move(d));
        }
    }
    throw ValidationError("constellation", "unknown kind");
}

double SymbolBlock::mean_power() const {
    if (symbols.empty()) return 0.0;
    double s = 0.0;
    for (const auto& x : symbols) s += std::norm(x);
    return s / static_cast<double>(symbols.size());
}

SymbolBlock sample_block(const Constellation& c, std::size_t d, std::uint64_t seed) {
    if (d < 1) throw ValidationError("d", "block length must be >= 1");
    SymbolBlock b;
    b.power = c.power();
    b.symbols.resize(d);
    auto eng = make_engine(seed, 0xB10C);
    switch (c.kind()) {
        case ConstellationKind::qam64: {
            std::uniform_int_distribution<std::size_t> pick(0, c.points().size() - 1);
            for (auto& x : b.symbols) x = c.points()[pick(eng)];
            break;
        }
        case ConstellationKind::gaussian_iid:
            for (auto& x : b.symbols) x = complex_normal(eng, c.power());
            break;
        case ConstellationKind::ripple:
            for (auto& x : b.symbols) x = ripple_draw(c.ripple_distribution(), eng);
            break;
    }
    return b;
}

}  // namespace fibercap
