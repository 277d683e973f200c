#include "windline/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "windline/error.hpp"

namespace windline {

std::string_view to_string(SingularityKind kind) {
    switch (kind) {
        case SingularityKind::Unknown: return "Unknown";
        case SingularityKind::Removable: return "Removable";
        case SingularityKind::Pole: return "Pole";
        case SingularityKind::EssentialTruncated: return "EssentialTruncated";
    }
    return "Unknown";
}

std::vector<int> Singularity::principal_indices(double zero_threshold) const {
    double biggest = 0.0;
    for (const auto& [k, a] : laurent) biggest = std::max(biggest, std::abs(a) * std::pow(radius > 0 ? radius : 1.0, k));
    std::vector<int> out;
    for (const auto& [k, a] : laurent) {
        if (k >= 0) continue;
        const double scaled = std::abs(a) * std::pow(radius > 0 ? radius : 1.0, k);
        if (scaled > zero_threshold * biggest) out.push_back(-k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double default_radius(const AnalyticFunction& f, Complex z0, const LaurentConfig& cfg) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& s : f.singularities) {
        const double d = std::abs(s.location - z0);
        if (d > 1e-12 * (1.0 + std::abs(z0))) nearest = std::min(nearest, d);
    }
    return std::isfinite(nearest) ? 0.5 * nearest : cfg.fallback_radius;
}

namespace {

// Scaled coefficients b_k = a_k radius^k from an M-point trapezoid rule.
std::vector<Complex> scaled_coeffs(const AnalyticFunction& f, Complex z0, double radius, int k_lo, int k_hi,
                                   std::size_t m) {
    std::vector<Complex> samples(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
        samples[j] = f(z0 + std::polar(radius, theta));
        if (!std::isfinite(samples[j].real()) || !std::isfinite(samples[j].imag())) {
            throw Error(ErrorCode::NoConvergence, "function is not finite on the extraction circle");
        }
    }
    std::vector<Complex> b(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (int k = k_lo; k <= k_hi; ++k) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < m; ++j) {
            // exact reduction of the phase index keeps the angle argument small
            const auto idx = static_cast<std::size_t>(
                ((static_cast<long long>(j) * static_cast<long long>(-k)) % static_cast<long long>(m) +
                 static_cast<long long>(m)) %
                static_cast<long long>(m));
            acc += samples[j] * std::polar(1.0, kTwoPi * static_cast<double>(idx) / static_cast<double>(m));
        }
        b[static_cast<std::size_t>(k - k_lo)] = acc / static_cast<double>(m);
    }
    return b;
}

std::vector<Complex> converged_scaled(const AnalyticFunction& f, Complex z0, double radius, int k_lo, int k_hi,
                                      const LaurentConfig& cfg) {
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidInput, "extraction radius must be positive");
    if (k_lo > k_hi) throw Error(ErrorCode::InvalidInput, "empty index range");
    for (const auto& s : f.singularities) {
        const double d = std::abs(s.location - z0);
        if (d > 1e-12 * (1.0 + std::abs(z0)) && d <= radius) {
            throw Error(ErrorCode::AnnulusViolation, "another declared singularity lies within the extraction radius");
        }
    }
    std::size_t m = std::max<std::size_t>(cfg.samples_start, static_cast<std::size_t>(2 * (k_hi - k_lo + 1)));
    auto prev = scaled_coeffs(f, z0, radius, k_lo, k_hi, m);
    while (m < cfg.samples_max) {
        m *= 2;
        auto next = scaled_coeffs(f, z0, radius, k_lo, k_hi, m);
        double biggest = 0.0;
        double diff = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            biggest = std::max(biggest, std::abs(next[i]));
            diff = std::max(diff, std::abs(next[i] - prev[i]));
        }
        prev = std::move(next);
        if (diff <= cfg.coeff_tol * biggest || biggest == 0.0) return prev;
    }
    throw Error(ErrorCode::NoConvergence, "Laurent coefficients did not settle before the sample cap");
}

int highest_principal(const std::vector<Complex>& b, int k_lo, double threshold) {
    double biggest = 0.0;
    for (const auto& v : b) biggest = std::max(biggest, std::abs(v));
    int highest = 0;
    for (int k = k_lo; k < 0; ++k) {
        if (std::abs(b[static_cast<std::size_t>(k - k_lo)]) > threshold * biggest) highest = std::max(highest, -k);
    }
    return highest;
}

}  // namespace

std::map<int, Complex> laurent_coeffs(const AnalyticFunction& f, Complex z0, double radius, int k_lo, int k_hi,
                                      const LaurentConfig& cfg) {
    const auto b = converged_scaled(f, z0, radius, k_lo, k_hi, cfg);
    std::map<int, Complex> out;
    for (int k = k_lo; k <= k_hi; ++k) out[k] = b[static_cast<std::size_t>(k - k_lo)] * std::pow(radius, -k);
    return out;
}

Singularity classify(const AnalyticFunction& f, Complex z0, double radius, const LaurentConfig& cfg) {
    const int depth = cfg.classify_depth;
    const auto outer = converged_scaled(f, z0, radius, -depth, depth, cfg);
    const auto inner = converged_scaled(f, z0, radius / 4.0, -depth, depth, cfg);
    const int h_outer = highest_principal(outer, -depth, cfg.zero_threshold);
    const int h_inner = highest_principal(inner, -depth, cfg.zero_threshold);

    Singularity s;
    s.location = z0;
    s.radius = radius;
    for (int k = -depth; k <= depth; ++k) {
        s.laurent[k] = outer[static_cast<std::size_t>(k + depth)] * std::pow(radius, -k);
    }
    s.residue = s.laurent[-1];
    if (std::max(h_outer, h_inner) >= depth || h_inner > h_outer) {
        s.kind = SingularityKind::EssentialTruncated;
        s.order = depth;
    } else if (h_outer == 0) {
        s.kind = SingularityKind::Removable;
        s.order = 0;
    } else {
        s.kind = SingularityKind::Pole;
        s.order = h_outer;
    }
    return s;
}

Singularity classify(const AnalyticFunction& f, Complex z0, const LaurentConfig& cfg) {
    return classify(f, z0, default_radius(f, z0, cfg), cfg);
}

Complex residue(const AnalyticFunction& f, Complex z0, double radius, const LaurentConfig& cfg) {
    return laurent_coeffs(f, z0, radius, -cfg.classify_depth, cfg.classify_depth, cfg).at(-1);
}

Complex residue(const AnalyticFunction& f, Complex z0, const LaurentConfig& cfg) {
    return residue(f, z0, default_radius(f, z0, cfg), cfg);
}

Singularity resolve(const AnalyticFunction& f, const Singularity& declared, const LaurentConfig& cfg) {
    Singularity s = classify(f, declared.location, cfg);
    if (declared.kind != SingularityKind::Unknown) {
        s.kind = declared.kind;
        if (declared.order > 0) s.order = declared.order;
    }
    if (declared.residue) s.residue = declared.residue;
    if (!declared.laurent.empty()) {
        for (const auto& [k, a] : declared.laurent) s.laurent[k] = a;
    }
    return s;
}

}  // namespace windline
