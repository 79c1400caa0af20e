#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace wg {

// Ambient torsion subgroup mu_N of k*. N must be even so that -1 exists,
// and divisible by the order of every root of unity in play.
struct TorsionConfig {
    int modulus = 2520; // lcm(1..10): even, covers every small root order

    explicit TorsionConfig(int n = 2520) : modulus(n) {
        if (n < 2 || n % 2 != 0)
            throw std::invalid_argument("torsion order must be even and >= 2, got " +
                                        std::to_string(n));
    }
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An element of the multiplicative group <g> x mu_N: g^free * zeta_N^tor,
// with g of infinite order and zeta_N a fixed primitive N-th root of unity.
// Every value is a unit; equality is exact.
class Scalar {
  public:
    Scalar() : free_(0), tor_(0), mod_(2520) {}
    Scalar(long long free_exp, long long tor_exp, int modulus)
        : free_(free_exp), tor_(static_cast<int>(((tor_exp % modulus) + modulus) % modulus)),
          mod_(modulus) {}

    static Scalar one(int modulus = 2520) { return Scalar(0, 0, modulus); }
    static Scalar minus_one(int modulus = 2520) { return Scalar(0, modulus / 2, modulus); }
    static Scalar generator(int modulus = 2520) { return Scalar(1, 0, modulus); }
    // primitive K-th root zeta_K = zeta_N^(N/K); requires K | N
    static Scalar root_of_unity(int k, int modulus = 2520) {
        if (k <= 0 || modulus % k != 0)
            throw ConfigError("root order " + std::to_string(k) + " does not divide torsion order " +
                              std::to_string(modulus));
        return Scalar(0, modulus / k, modulus);
    }

    long long free_exp() const { return free_; }
    int tor_exp() const { return tor_; }
    int modulus() const { return mod_; }

    bool is_one() const { return free_ == 0 && tor_ == 0; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        a.check(b);
        return a.free_ == b.free_ && a.tor_ == b.tor_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    // componentwise order, used for canonical keys
    friend bool operator<(const Scalar& a, const Scalar& b) {
        a.check(b);
        return a.free_ != b.free_ ? a.free_ < b.free_ : a.tor_ < b.tor_;
    }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        a.check(b);
        return Scalar(a.free_ + b.free_, a.tor_ + b.tor_, a.mod_);
    }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

    Scalar inverse() const { return Scalar(-free_, mod_ - tor_, mod_); }

    Scalar pow(long long e) const {
        long long t = (static_cast<long long>(tor_) * (e % mod_)) % mod_;
        return Scalar(free_ * e, t, mod_);
    }

    // multiplicative order; nullopt means infinite
    std::optional<long long> order() const;

    bool in_mu(int n) const { // value lies in the subgroup mu_n
        return free_ == 0 && (static_cast<long long>(tor_) * n) % mod_ == 0;
    }

  private:
    void check(const Scalar& b) const {
        if (mod_ != b.mod_)
            throw ConfigError("torsion orders differ: " + std::to_string(mod_) + " vs " +
                              std::to_string(b.mod_));
    }

    long long free_;
    int tor_;
    int mod_;
};

long long scalar_order_or_zero(const Scalar& a); // 0 encodes infinite

bool is_primitive_root(const Scalar& a, long long n);

// Smallest m >= 0 with (1 + p + ... + p^m) * (p^m r - 1) = 0, i.e. either
// p^m r = 1 or p is a root of unity of order k with 1 < k and k | m+1.
// Solved exactly: a linear equation on free exponents plus a congruence on
// torsion exponents. nullopt when no m exists.
std::optional<long long> cartan_exponent(const Scalar& p, const Scalar& r);

// Grammar: '-'? term ('*' term)*, term := '1' | 'q' ('^' int)? | 'z' K ('^' int)?
// where zK is the fixed primitive K-th root of unity (requires K | N) and a
// leading '-' multiplies by -1.
Scalar parse_scalar(const std::string& text, int modulus = 2520);

// Canonical form: "-"? "q^e"? "zK^e"?, '*'-joined, unit exponents omitted,
// torsion exponent reduced into (-K/2, K/2]. Round-trips through parse_scalar.
std::string to_string(const Scalar& a);

} // namespace wg
