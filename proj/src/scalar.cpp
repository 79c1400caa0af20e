#include "wg/scalar.hpp"

#include <numeric>

namespace wg {

std::optional<long long> Scalar::order() const {
    if (free_ != 0)
        return std::nullopt;
    return mod_ / std::gcd(static_cast<long long>(mod_), static_cast<long long>(tor_));
}

long long scalar_order_or_zero(const Scalar& a) {
    auto n = a.order();
    return n ? *n : 0;
}

bool is_primitive_root(const Scalar& a, long long n) {
    auto o = a.order();
    return o && *o == n;
}

std::optional<long long> cartan_exponent(const Scalar& p, const Scalar& r) {
    const int n = p.modulus();
    std::optional<long long> best;

    // p^m r = 1: solve m*a + c = 0 on free exponents, m*b + e = 0 mod n on torsion
    const long long a = p.free_exp(), c = r.free_exp();
    const long long b = p.tor_exp(), e = r.tor_exp();
    if (a != 0) {
        if (c % a == 0) {
            long long m = -c / a;
            if (m >= 0 && (m * b + e) % n == 0)
                best = m;
        }
    } else if (c == 0) {
        const long long g = std::gcd(b, static_cast<long long>(n));
        const long long target = (n - e) % n;
        if (target % g == 0) {
            if (b == 0) {
                best = 0; // then e == 0, so r == 1
            } else {
                // m * (b/g) = target/g mod n/g; b/g is invertible mod n/g
                const long long nn = n / g, bb = b / g, tt = (target / g) % nn;
                long long inv = 1;
                for (long long x = 0; x < nn; ++x) // nn <= 2520, linear scan is fine
                    if ((bb * x) % nn == tt % nn) {
                        inv = x;
                        break;
                    }
                best = inv;
            }
        }
    }

    // 1 + p + ... + p^m = 0: p a root of unity of order k > 1, smallest m = k-1
    auto k = p.order();
    if (k && *k > 1) {
        long long m = *k - 1;
        if (!best || m < *best)
            best = m;
    }
    return best;
}

Scalar parse_scalar(const std::string& text, int modulus) {
    size_t pos = 0;
    auto fail = [&](const std::string& what) {
        throw ParseError("bad scalar literal \"" + text + "\": " + what);
    };
    auto read_int = [&]() -> long long {
        bool neg = false;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
            neg = text[pos] == '-';
            ++pos;
        }
        if (pos >= text.size() || !isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected integer at offset " + std::to_string(pos));
        long long v = 0;
        while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos])))
            v = v * 10 + (text[pos++] - '0');
        return neg ? -v : v;
    };

    if (text.empty())
        fail("empty");
    Scalar out = Scalar::one(modulus);
    if (text[pos] == '-') {
        out *= Scalar::minus_one(modulus);
        ++pos;
        if (pos == text.size())
            fail("lone '-'");
    }
    bool expect_term = true;
    while (pos < text.size()) {
        if (!expect_term) {
            if (text[pos] != '*')
                fail("expected '*' at offset " + std::to_string(pos));
            ++pos;
        }
        expect_term = false;
        if (pos >= text.size())
            fail("trailing '*'");
        char c = text[pos];
        if (c == '1') {
            ++pos;
        } else if (c == 'q') {
            ++pos;
            long long e = 1;
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                e = read_int();
            }
            out *= Scalar::generator(modulus).pow(e);
        } else if (c == 'z') {
            ++pos;
            if (pos >= text.size() || !isdigit(static_cast<unsigned char>(text[pos])))
                fail("expected root order after 'z'");
            long long k = read_int();
            if (k <= 0 || modulus % k != 0)
                fail("root order " + std::to_string(k) + " does not divide torsion order " +
                     std::to_string(modulus));
            long long e = 1;
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                e = read_int();
            }
            out *= Scalar::root_of_unity(static_cast<int>(k), modulus).pow(e);
        } else {
            fail(std::string("unexpected character '") + c + "'");
        }
    }
    return out;
}

std::string to_string(const Scalar& a) {
    const int n = a.modulus();
    // pick the torsion representation with the smaller root order between
    // zeta_N^t and -zeta_N^(t - N/2)
    auto root_order = [&](int t) { return n / std::gcd(n, t == 0 ? n : t); };
    int t_plain = a.tor_exp();
    int t_neg = (a.tor_exp() - n / 2 + n) % n;
    bool sign = root_order(t_neg) < root_order(t_plain);
    int t = sign ? t_neg : t_plain;

    std::string out;
    if (sign)
        out += '-';
    if (a.free_exp() != 0) {
        out += 'q';
        if (a.free_exp() != 1)
            out += '^' + std::to_string(a.free_exp());
    }
    if (t != 0) {
        long long k = n / std::gcd(n, t);
        long long e = t / (n / k);
        if (2 * e > k)
            e -= k; // reduce into (-K/2, K/2]
        if (!out.empty() && out != "-")
            out += '*';
        out += 'z' + std::to_string(k);
        if (e != 1)
            out += '^' + std::to_string(e);
    }
    if (out.empty())
        return "1";
    if (out == "-")
        return "-1";
    return out;
}

} // namespace wg
