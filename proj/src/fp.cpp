#include "mhh/fp.hpp"

#include "mhh/error.hpp"

#include <string>

namespace mhh {

bool is_prime(int n)
{
    if (n < 2)
        return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Prime::Prime(int p) : p_(p)
{
    if (!is_prime(p) || p > 46337)
        throw InvalidInput("not a supported prime: " + std::to_string(p));
}

Fp Prime::pow(Fp a, long long e) const
{
    Fp result = 1 % static_cast<Fp>(p_);
    Fp base = a % static_cast<Fp>(p_);
    if (e < 0) {
        base = inv(base);
        e = -e;
    }
    while (e > 0) {
        if (e & 1)
            result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

Fp Prime::inv(Fp a) const
{
    if (a % static_cast<Fp>(p_) == 0)
        throw Error("inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
}

int valuation(long long n, int p)
{
    if (n <= 0)
        throw InvalidInput("valuation of non-positive integer");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

}  // namespace mhh
