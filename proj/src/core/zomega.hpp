#pragma once

#include <complex>
#include <cstdint>
#include <vector>

// Exact arithmetic in Z[omega], omega = exp(2 pi i / n), stored as integer
// counts per power of omega. For prime n two values agree iff their counts
// agree after reducing omega^(n-1) = -(1 + omega + ... + omega^(n-2)), which
// turns phase-sum comparisons into exact integer identities.

namespace ncqft {

struct CycloInt {
    int n = 1;
    std::vector<long long> c; // counts of omega^k

    explicit CycloInt(int n_ = 1) : n(n_), c(n_, 0) {}

    static CycloInt unit(int n, long long power) {
        CycloInt z(n);
        long long p = power % n;
        if (p < 0) p += n;
        z.c[static_cast<size_t>(p)] = 1;
        return z;
    }

    void add_unit(long long power, long long count = 1) {
        long long p = power % n;
        if (p < 0) p += n;
        c[static_cast<size_t>(p)] += count;
    }

    CycloInt& operator+=(const CycloInt& o) {
        for (int k = 0; k < n; ++k) c[k] += o.c[k];
        return *this;
    }

    // multiply by omega^power
    CycloInt shifted(long long power) const {
        CycloInt out(n);
        long long p = power % n;
        if (p < 0) p += n;
        for (int k = 0; k < n; ++k) out.c[(k + p) % n] += c[k];
        return out;
    }

    CycloInt& operator*=(long long s) {
        for (auto& v : c) v *= s;
        return *this;
    }

    // reduce to the Z-basis 1, omega, ..., omega^(n-2) (n prime)
    std::vector<long long> canonical() const {
        std::vector<long long> out(n - 1);
        for (int k = 0; k + 1 < n; ++k) out[k] = c[k] - c[n - 1];
        return out;
    }

    bool equals(const CycloInt& o) const { return canonical() == o.canonical(); }

    std::complex<double> to_complex() const {
        std::complex<double> acc(0);
        for (int k = 0; k < n; ++k) {
            if (c[k] == 0) continue;
            double t = 6.283185307179586476925286766559 * k / n;
            acc += static_cast<double>(c[k]) *
                   std::complex<double>(std::cos(t), std::sin(t));
        }
        return acc;
    }
};

} // namespace ncqft
