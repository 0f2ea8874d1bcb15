#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "hqcalc/quaternion.hpp"

namespace hqcalc {

/// Real polynomial with ascending coefficients c0 + c1 x + ... + cm x^m.
/// Trailing zero coefficients are trimmed on construction.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> c) : c_(c) { trim(); }
    explicit Polynomial(std::vector<double> c) : c_(std::move(c)) { trim(); }

    static Polynomial monomial(int degree, double coeff = 1.0);
    /// (a + b x)^k
    static Polynomial binomial_power(double a, double b, int k);

    const std::vector<double>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    /// Multiplicity of the root at 0 (0 if p(0) != 0; -1 for the zero polynomial).
    int zero_order() const;

    double operator()(double x) const;
    std::complex<double> operator()(std::complex<double> z) const;
    /// Real coefficients commute with every quaternion, so Horner is exact.
    Quat operator()(const Quat& q) const;

    Polynomial derivative() const;
    /// Complex roots from the companion matrix. Empty for constants.
    std::vector<std::complex<double>> roots() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double k, const Polynomial& a);
    bool operator==(const Polynomial&) const = default;

private:
    void trim();
    std::vector<double> c_;
};

} // namespace hqcalc
