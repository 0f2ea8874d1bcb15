#include "hqcalc/polynomial.hpp"

#include <Eigen/Eigenvalues>

namespace hqcalc {

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::monomial(int degree, double coeff) {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    c.back() = coeff;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::binomial_power(double a, double b, int k) {
    Polynomial out{1.0};
    const Polynomial lin{a, b};
    for (int i = 0; i < k; ++i) out = out * lin;
    return out;
}

int Polynomial::zero_order() const {
    if (c_.empty()) return -1;
    int k = 0;
    while (c_[static_cast<std::size_t>(k)] == 0.0) ++k;
    return k;
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Quat Polynomial::operator()(const Quat& q) const {
    Quat acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = qmul(acc, q) + Quat(*it);
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(d));
}

std::vector<std::complex<double>> Polynomial::roots() const {
    const int m = degree();
    if (m <= 0) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
    const double lead = c_.back();
    for (int i = 0; i < m; ++i) companion(0, i) = -c_[static_cast<std::size_t>(m - 1 - i)] / lead;
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    std::vector<std::complex<double>> r(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) r[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(double k, const Polynomial& a) {
    std::vector<double> c = a.c_;
    for (auto& x : c) x *= k;
    return Polynomial(std::move(c));
}

} // namespace hqcalc
