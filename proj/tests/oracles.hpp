#pragma once
// Naive reference implementations written straight from the defining sums.
// Deliberately slow: long double, full double loops, no shared helpers with
// the library.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using LD = long double;

inline std::vector<LD> diff(const Vec& y, int lag) {
    std::vector<LD> out;
    for (std::size_t i = 0; i + lag < y.size(); ++i) out.push_back(static_cast<LD>(y[i + lag]) - y[i]);
    return out;
}

// int_a^b of the box kernel 1/2 on [-1, 1].
inline LD box_integral(LD a, LD b) {
    auto clip = [](LD u) { return std::clamp(u, -1.0L, 1.0L); };
    return 0.5L * (clip(b) - clip(a));
}

// (15/31)(1/2 + (1-u^2)^2) on [-1, 1].
inline LD quartic_plateau_integral(LD a, LD b) {
    auto P = [](LD u) {
        u = std::clamp(u, -1.0L, 1.0L);
        return 15.0L / 31.0L * (0.5L * u + u - 2.0L * u * u * u / 3.0L + u * u * u * u * u / 5.0L);
    };
    return P(b) - P(a);
}

inline LD box_value(LD u) { return std::fabs(u) <= 1.0L ? 0.5L : 0.0L; }
inline LD quartic_plateau_value(LD u) {
    if (std::fabs(u) > 1.0L) return 0.0L;
    const LD w = 1.0L - u * u;
    return 15.0L / 31.0L * (0.5L + w * w);
}

using Integral = std::function<LD(LD, LD)>;

// Modified kernel weight at integer lag t.
inline LD modified_kernel(const Integral& I, int n, double h, long t) {
    if (std::labs(t) < 2) return 0.0L;
    const LD nh = static_cast<LD>(n) * h;
    const LD at = std::labs(t);
    const LD norm = 1.0L - I(-2.0L / nh, 2.0L / nh);
    return I(at / nh, (at + 1.0L) / nh) / norm;
}

inline LD t_hat_kernel(const Vec& y, const Integral& I, double h) {
    const auto r = diff(y, 1);
    const int n = static_cast<int>(r.size());
    LD acc = 0.0L;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (std::abs(i - j) < 2) continue;
            const LD p = r[i] * r[i] * r[j] * r[j];
            acc += (modified_kernel(I, n, h, i - j) / n - 1.0L / (static_cast<LD>(n) * n)) * p;
        }
    }
    return acc;
}

inline LD t_hat_profile(const Vec& y) {
    const auto r = diff(y, 1);
    const int n = static_cast<int>(r.size());
    LD acc = 0.0L;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (std::abs(i - j) < 2) continue;
            const LD a = r[i] * r[i], b = r[j] * r[j];
            acc += (a * a + b * b) / 3.0L - 2.0L * a * b;
        }
    }
    return acc / (2.0L * n * n);
}

inline LD quartic_pair(LD a, LD b) {
    const LD a2 = a * a, b2 = b * b;
    return (a2 * a2 + b2 * b2) / 3.0L - 2.0L * a2 * b2;
}

inline LD t1_hat(const Vec& y) {
    const auto r = diff(y, 1);
    const auto s = diff(y, 3);
    const int n = static_cast<int>(r.size());
    LD acc = 0.0L;
    for (int k = 0; k <= n - 3; ++k) acc += quartic_pair(r[k + 1], s[k]);
    return acc / n;
}

inline LD t2_hat(const Vec& y) {
    const auto r = diff(y, 1);
    const auto rt = diff(y, 2);
    const int n = static_cast<int>(r.size());
    LD acc = 0.0L;
    for (int k = 0; k <= n - 3; ++k) acc += quartic_pair(rt[k + 1], rt[k]);
    return acc / n;
}

inline LD dette_munk(const Vec& y) {
    const auto r = diff(y, 1);
    const int n = static_cast<int>(r.size());
    LD a = 0.0L, s = 0.0L;
    for (int i = 0; i + 2 < n; ++i) a += r[i] * r[i] * r[i + 2] * r[i + 2];
    for (int i = 0; i < n; ++i) s += r[i] * r[i];
    const LD m = s / (2.0L * n);
    return a / (4.0L * (n - 2)) - m * m;
}

inline LD dette_2002(const Vec& y, const std::function<LD(LD)>& K, double h) {
    const auto r = diff(y, 1);
    const int n = static_cast<int>(r.size());
    LD mean = 0.0L;
    for (int i = 0; i < n; ++i) mean += r[i] * r[i];
    mean /= n;
    LD acc = 0.0L;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (std::abs(i - j) < 2) continue;
            acc += K(static_cast<LD>(i - j) / (static_cast<LD>(n) * h)) * (r[i] * r[i] - mean) *
                   (r[j] * r[j] - mean);
        }
    }
    return acc / (4.0L * n * (n - 1) * h);
}

// Proxy targets from the design values of f and V.
inline LD proxy_T(const Vec& f, const Vec& V) {
    const int n = static_cast<int>(f.size()) - 1;
    std::vector<LD> U(n);
    LD mean = 0.0L;
    for (int i = 0; i < n; ++i) {
        const LD d = static_cast<LD>(f[i + 1]) - f[i];
        U[i] = static_cast<LD>(V[i]) + V[i + 1] + d * d;
        mean += U[i];
    }
    mean /= n;
    LD acc = 0.0L;
    for (LD u : U) acc += (u - mean) * (u - mean);
    return acc / n;
}

inline LD proxy_T1(const Vec& f, const Vec& V) {
    const int n = static_cast<int>(f.size()) - 1;
    LD acc = 0.0L;
    for (int k = 0; k + 2 < n; ++k) {
        const LD d1 = static_cast<LD>(f[k + 2]) - f[k + 1];
        const LD d3 = static_cast<LD>(f[k + 3]) - f[k];
        const LD e = (static_cast<LD>(V[k + 1]) + V[k + 2] + d1 * d1) - (static_cast<LD>(V[k]) + V[k + 3] + d3 * d3);
        acc += e * e;
    }
    return acc / n;
}

inline LD proxy_T2(const Vec& f, const Vec& V) {
    const int n = static_cast<int>(f.size()) - 1;
    LD acc = 0.0L;
    for (int k = 0; k + 2 < n; ++k) {
        const LD da = static_cast<LD>(f[k + 3]) - f[k + 1];
        const LD db = static_cast<LD>(f[k + 2]) - f[k];
        const LD a = static_cast<LD>(V[k + 1]) + V[k + 3] + da * da;
        const LD b = static_cast<LD>(V[k]) + V[k + 2] + db * db;
        acc += (a - b) * (a - b);
    }
    return acc / n;
}

// Integer-indexed sequences as ordered maps, zero elsewhere.
using Seq = std::map<long, LD>;

inline LD at(const Seq& s, long z) {
    auto it = s.find(z);
    return it == s.end() ? 0.0L : it->second;
}

inline long lo(const Seq& s) { return s.begin()->first; }
inline long hi(const Seq& s) { return s.rbegin()->first; }

// sum_k f(k) g(k - z)
inline LD conv_minus(const Seq& f, const Seq& g, long z) {
    LD acc = 0.0L;
    for (const auto& [k, v] : f) acc += v * at(g, k - z);
    return acc;
}

inline LD double_factorial_moment(int k) {
    if (k % 2) return 0.0L;
    LD m = 1.0L;
    for (int j = k - 1; j > 1; j -= 2) m *= j;
    return m;
}

}  // namespace oracle
