#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace robust_grad {

using Vec = std::vector<double>;
using ConstVecView = std::span<const double>;

// Small dense helpers. Everything here is O(d) and allocation-light.
namespace vec {

inline void require_same_dim(ConstVecView a, ConstVecView b, const char* what) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

inline double dot(ConstVecView a, ConstVecView b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(ConstVecView a) { return std::sqrt(dot(a, a)); }

inline double squared_norm(ConstVecView a) { return dot(a, a); }

inline double norm_inf(ConstVecView a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

inline Vec sub(ConstVecView a, ConstVecView b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline Vec add(ConstVecView a, ConstVecView b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline Vec scaled(ConstVecView a, double s) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

// a + s * b
inline Vec axpy(ConstVecView a, double s, ConstVecView b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
    return out;
}

inline double distance(ConstVecView a, ConstVecView b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline bool all_finite(ConstVecView a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace vec
}  // namespace robust_grad
