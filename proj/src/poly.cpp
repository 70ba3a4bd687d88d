#include "maxwell/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxwell {

Poly::Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);
    trim(0.0);
}

Poly Poly::monomial(std::size_t power, double coeff) {
    std::vector<double> c(power + 1, 0.0);
    c[power] = coeff;
    return Poly(std::move(c));
}

double Poly::operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() == 1) return zero();
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Poly(std::move(d));
}

Poly Poly::antiderivative() const {
    std::vector<double> a(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<double>(k + 1);
    return Poly(std::move(a));
}

double Poly::integral_zero_to(double x) const {
    // Horner on the antiderivative without materializing it
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i] / static_cast<double>(i + 1);
    return acc * x;
}

bool Poly::is_zero() const {
    for (double v : c_)
        if (v != 0.0) return false;
    return true;
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    std::vector<double> r(c_);
    for (double& v : r) v = -v;
    return Poly(std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return zero();
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(r));
}

Poly Poly::operator*(double s) const {
    std::vector<double> r(c_);
    for (double& v : r) v *= s;
    return Poly(std::move(r));
}

Poly Poly::compose(const Poly& inner) const {
    Poly acc = zero();
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * inner + constant(c_[i]);
    return acc;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& divisor) const {
    if (divisor.is_zero()) throw std::invalid_argument("Poly::divmod: division by zero polynomial");
    std::vector<double> rem(c_);
    const std::vector<double>& d = divisor.c_;
    if (rem.size() < d.size()) return {zero(), *this};
    std::vector<double> quot(rem.size() - d.size() + 1, 0.0);
    const double lead = d.back();
    for (std::size_t k = quot.size(); k-- > 0;) {
        double q = rem[k + d.size() - 1] / lead;
        quot[k] = q;
        for (std::size_t j = 0; j < d.size(); ++j) rem[k + j] -= q * d[j];
    }
    rem.resize(d.size() - 1 > 0 ? d.size() - 1 : 1);
    return {Poly(std::move(quot)), Poly(std::move(rem))};
}

void Poly::trim(double tol) {
    while (c_.size() > 1 && std::abs(c_.back()) <= tol) c_.pop_back();
}

}  // namespace maxwell
