#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace maxwell {

// Dense real-coefficient polynomial, coeffs[k] is the coefficient of x^k.
// Carrier for the degree distributions and every derived curve polynomial.
class Poly {
public:
    Poly() : c_{0.0} {}
    explicit Poly(std::vector<double> coeffs);

    static Poly zero() { return Poly(); }
    static Poly constant(double a) { return Poly({a}); }
    // a + b*x
    static Poly affine(double a, double b) { return Poly({a, b}); }
    static Poly monomial(std::size_t power, double coeff = 1.0);

    double operator()(double x) const;  // Horner evaluation

    Poly derivative() const;
    Poly antiderivative() const;  // constant of integration 0
    double integral_zero_to(double x) const;
    double integral01() const { return integral_zero_to(1.0); }

    std::size_t degree() const { return c_.size() - 1; }
    bool is_zero() const;
    double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    const std::vector<double>& coeffs() const { return c_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(double s) const;

    // p(inner(x)) by Horner over polynomials
    Poly compose(const Poly& inner) const;

    // Euclidean division; remainder has degree < divisor degree.
    std::pair<Poly, Poly> divmod(const Poly& divisor) const;

    // Drop trailing coefficients with |c| <= tol (keeps at least the constant).
    void trim(double tol = 0.0);

private:
    std::vector<double> c_;
};

inline Poly operator*(double s, const Poly& p) { return p * s; }

}  // namespace maxwell
