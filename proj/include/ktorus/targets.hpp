#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "ktorus/errors.hpp"
#include "ktorus/fft.hpp"
#include "ktorus/norms.hpp"
#include "ktorus/tensor.hpp"

namespace ktorus {

enum class TargetKind { fourier_decay_mixed, fourier_decay_hybrid, smooth_analytic, single_mode };

/// Seeded target-function family with prescribed Sobolev regularity and
/// exactly known Fourier coefficients.
struct TargetFamily {
    TargetKind kind = TargetKind::smooth_analytic;
    int d = 1;
    double theta = 2.0;           // fourier_decay_mixed
    double s = 1.0, t = 1.0;      // fourier_decay_hybrid
    std::vector<long long> mode;  // single_mode
    std::uint64_t seed = 0;
    int band_limit = 8;

    void validate() const
    {
        if (d < 1)
            throw config_error("TargetFamily: dimension must be >= 1");
        switch (kind) {
        case TargetKind::fourier_decay_mixed:
            if (!(theta > 0.5))
                throw config_error("TargetFamily: theta must exceed 1/2");
            if (band_limit < 1)
                throw config_error("TargetFamily: band_limit must be >= 1");
            break;
        case TargetKind::fourier_decay_hybrid:
            if (s < 0.0 || t < 0.0)
                throw config_error("TargetFamily: hybrid orders must be non-negative");
            if (band_limit < 1)
                throw config_error("TargetFamily: band_limit must be >= 1");
            break;
        case TargetKind::single_mode:
            if (static_cast<int>(mode.size()) != d)
                throw config_error("TargetFamily: mode length must equal d");
            break;
        case TargetKind::smooth_analytic:
            break;
        }
    }

    bool is_spectral() const
    {
        return kind == TargetKind::fourier_decay_mixed || kind == TargetKind::fourier_decay_hybrid
            || kind == TargetKind::single_mode;
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sign epsilon_m in {-1, +1}, deterministic in (seed, m) and symmetric under
/// m -> -m (hash the canonical representative with first nonzero entry > 0)
/// so synthesized spectra are conjugate-symmetric, hence real fields.
inline double seeded_sign(std::uint64_t seed, const std::vector<long long>& m)
{
    std::vector<long long> canon = m;
    for (long long v : m) {
        if (v > 0)
            break;
        if (v < 0) {
            for (auto& c : canon)
                c = -c;
            break;
        }
    }
    std::uint64_t h = splitmix64(seed ^ 0x5bf0'3635'dcf2'64e3ULL);
    for (long long c : canon)
        h = splitmix64(h ^ static_cast<std::uint64_t>(c + 0x4000'0000LL));
    return (h & 1ULL) ? 1.0 : -1.0;
}

inline constexpr double decay_margin = 0.05; // delta inside decay exponents

/// Exact Fourier coefficient a_m of a spectral family (real-valued).
inline double spectral_coefficient(const TargetFamily& family, const std::vector<long long>& m)
{
    switch (family.kind) {
    case TargetKind::fourier_decay_mixed: {
        double amp = 1.0;
        for (long long mi : m)
            amp *= std::pow(1.0 + static_cast<double>(std::llabs(mi)),
                            -family.theta - 0.5 - decay_margin);
        return seeded_sign(family.seed, m) * amp;
    }
    case TargetKind::fourier_decay_hybrid: {
        const std::size_t d = m.size();
        double hybrid = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double term = std::pow(1.0 + static_cast<double>(std::llabs(m[i])),
                                   2.0 * (family.s + family.t));
            for (std::size_t j = 0; j < d; ++j)
                if (j != i)
                    term *= std::pow(1.0 + static_cast<double>(std::llabs(m[j])), 2.0 * family.t);
            hybrid += term;
        }
        double amp = 1.0 / std::sqrt(hybrid);
        for (long long mi : m)
            amp *= std::pow(1.0 + static_cast<double>(std::llabs(mi)), -0.5 - decay_margin);
        return seeded_sign(family.seed, m) * amp;
    }
    case TargetKind::single_mode:
        return 0.5; // placed at +m and -m by the caller
    case TargetKind::smooth_analytic:
        break;
    }
    throw config_error("spectral_coefficient: family has no synthesized spectrum");
}

/// Visits every band-limited frequency m with its coefficient a_m.
template <typename Visitor>
void for_each_spectral_term(const TargetFamily& family, Visitor&& visit)
{
    if (family.kind == TargetKind::single_mode) {
        std::vector<long long> neg(family.mode.size());
        for (std::size_t i = 0; i < neg.size(); ++i)
            neg[i] = -family.mode[i];
        visit(family.mode, 0.5);
        if (neg != family.mode)
            visit(neg, 0.5);
        return;
    }
    const long long b = family.band_limit;
    const std::size_t d = static_cast<std::size_t>(family.d);
    double count = std::pow(2.0 * static_cast<double>(b) + 1.0, static_cast<double>(d));
    if (count > 1e7)
        throw size_budget_error("target spectrum: band exceeds the term budget (1e7)");

    std::vector<long long> m(d, -b);
    while (true) {
        visit(m, spectral_coefficient(family, m));
        std::size_t a = d;
        while (a-- > 0) {
            if (++m[a] <= b)
                break;
            m[a] = -b;
            if (a == 0)
                return;
        }
    }
}

} // namespace detail

/// Exact samples on the tensor grid X_levels. Spectral families are sampled
/// by alias-folding the band-limited spectrum onto the grid and applying an
/// unnormalized inverse DFT, which reproduces the pointwise series exactly.
inline GridFunctionND sample(const TargetFamily& family, const LevelIndex& levels)
{
    family.validate();
    levels.validate();
    if (levels.dim() != family.d)
        throw config_error("sample: dimension mismatch");
    const auto shape = levels.shape();

    GridFunctionND out;
    out.levels = levels;

    if (family.kind == TargetKind::smooth_analytic) {
        out.values.resize(levels.total_size());
        const std::size_t d = shape.size();
        std::vector<std::size_t> idx(d, 0);
        for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
            std::size_t rem = flat;
            double v = 1.0;
            for (std::size_t a = d; a-- > 0;) {
                idx[a] = rem % shape[a];
                rem /= shape[a];
                const double x = static_cast<double>(idx[a]) / static_cast<double>(shape[a]);
                v *= std::exp(std::sin(2.0 * std::numbers::pi * x));
            }
            out.values[flat] = v;
        }
        return out;
    }

    std::vector<cplx> spectrum(levels.total_size(), cplx{0.0, 0.0});
    detail::for_each_spectral_term(family, [&](const std::vector<long long>& m, double a) {
        std::size_t flat = 0;
        for (std::size_t ax = 0; ax < shape.size(); ++ax) {
            const long long n = static_cast<long long>(shape[ax]);
            const long long r = ((m[ax] % n) + n) % n;
            flat = flat * shape[ax] + static_cast<std::size_t>(r);
        }
        spectrum[flat] += a;
    });
    for (std::size_t axis = 0; axis < shape.size(); ++axis)
        for_each_axis_line(std::span<cplx>(spectrum), std::span<const std::size_t>(shape), axis,
                           [](std::span<cplx> line) { detail::fft_radix2(line, +1); });

    out.values.resize(spectrum.size());
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (std::abs(spectrum[i].imag()) > 1e-12 * std::max(1.0, std::abs(spectrum[i].real())))
            throw numerical_error("sample: synthesized field has imaginary residue");
        out.values[i] = spectrum[i].real();
    }
    return out;
}

/// Exact coefficients on the isotropic reference grid at fine_level. Spectral
/// families require the band to fit strictly inside the Nyquist range so the
/// placement is unaliased; smooth_analytic uses the DFT of fine samples.
inline FourierField exact_fourier(const TargetFamily& family, int fine_level)
{
    family.validate();
    if (fine_level < 1)
        throw config_error("exact_fourier: fine_level must be >= 1");

    LevelIndex levels;
    levels.levels.assign(static_cast<std::size_t>(family.d), fine_level);

    if (family.kind == TargetKind::smooth_analytic)
        return to_fourier(sample(family, levels));

    const long long nyquist = 1LL << (fine_level - 1);
    long long band = family.band_limit;
    if (family.kind == TargetKind::single_mode) {
        band = 0;
        for (long long mi : family.mode)
            band = std::max(band, std::llabs(mi));
    }
    if (band >= nyquist)
        throw config_error("exact_fourier: band_limit must lie below the grid Nyquist range");

    FourierField field;
    field.fine_level = fine_level;
    field.d = family.d;
    field.coeffs.assign(levels.total_size(), cplx{0.0, 0.0});
    const auto shape = levels.shape();
    detail::for_each_spectral_term(family, [&](const std::vector<long long>& m, double a) {
        std::size_t flat = 0;
        for (std::size_t ax = 0; ax < shape.size(); ++ax) {
            const long long n = static_cast<long long>(shape[ax]);
            const long long r = ((m[ax] % n) + n) % n;
            flat = flat * shape[ax] + static_cast<std::size_t>(r);
        }
        field.coeffs[flat] += a;
    });
    return field;
}

inline TargetSampler make_sampler(const TargetFamily& family)
{
    family.validate();
    return [family](const LevelIndex& levels) { return sample(family, levels); };
}

/// JSON shape {"kind":..., "theta":..., "seed":..., "band_limit":...} plus the
/// kind-specific fields (s/t for hybrid, m for single modes) and "d".
inline nlohmann::json family_to_json(const TargetFamily& family)
{
    nlohmann::json js;
    js["d"] = family.d;
    js["seed"] = family.seed;
    js["band_limit"] = family.band_limit;
    switch (family.kind) {
    case TargetKind::fourier_decay_mixed:
        js["kind"] = "FourierDecayMixed";
        js["theta"] = family.theta;
        break;
    case TargetKind::fourier_decay_hybrid:
        js["kind"] = "FourierDecayHybrid";
        js["s"] = family.s;
        js["t"] = family.t;
        break;
    case TargetKind::smooth_analytic:
        js["kind"] = "SmoothAnalytic";
        break;
    case TargetKind::single_mode:
        js["kind"] = "SingleMode";
        js["m"] = family.mode;
        break;
    }
    return js;
}

inline TargetFamily family_from_json(const nlohmann::json& js)
{
    TargetFamily family;
    try {
        const std::string kind = js.at("kind").get<std::string>();
        family.d = js.value("d", 1);
        family.seed = js.value("seed", std::uint64_t{0});
        family.band_limit = js.value("band_limit", 8);
        if (kind == "FourierDecayMixed") {
            family.kind = TargetKind::fourier_decay_mixed;
            family.theta = js.at("theta").get<double>();
        } else if (kind == "FourierDecayHybrid") {
            family.kind = TargetKind::fourier_decay_hybrid;
            family.s = js.at("s").get<double>();
            family.t = js.at("t").get<double>();
        } else if (kind == "SmoothAnalytic") {
            family.kind = TargetKind::smooth_analytic;
        } else if (kind == "SingleMode") {
            family.kind = TargetKind::single_mode;
            family.mode = js.at("m").get<std::vector<long long>>();
        } else {
            throw config_error("family_from_json: unknown kind '" + kind + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("family_from_json: ") + e.what());
    }
    family.validate();
    return family;
}

} // namespace ktorus
