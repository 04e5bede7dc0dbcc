#pragma once

#include <cstdint>

namespace mhh {

using Fp = std::uint32_t;

class Prime {
public:
    explicit Prime(int p);

    int value() const { return p_; }
    Fp reduce(long long x) const
    {
        long long r = x % p_;
        return static_cast<Fp>(r < 0 ? r + p_ : r);
    }
    Fp add(Fp a, Fp b) const { return static_cast<Fp>((a + b) % static_cast<Fp>(p_)); }
    Fp sub(Fp a, Fp b) const { return static_cast<Fp>((a + static_cast<Fp>(p_) - b) % static_cast<Fp>(p_)); }
    Fp neg(Fp a) const { return a == 0 ? 0 : static_cast<Fp>(p_) - a; }
    Fp mul(Fp a, Fp b) const { return static_cast<Fp>(static_cast<std::uint64_t>(a) * b % static_cast<std::uint64_t>(p_)); }
    Fp pow(Fp a, long long e) const;
    Fp inv(Fp a) const;  // throws on 0

    bool operator==(const Prime& o) const { return p_ == o.p_; }

private:
    int p_;
};

bool is_prime(int n);

// p-adic valuation of n > 0
int valuation(long long n, int p);

}  // namespace mhh
