#include "maxwell/ensemble.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace maxwell {

namespace {

Poly poly_from_degree_map(const std::map<int, double>& m, const char* what) {
    int max_deg = 0;
    for (const auto& [deg, coef] : m) {
        if (deg < 1) throw EnsembleError(std::string(what) + ": degree must be >= 1");
        (void)coef;
        max_deg = std::max(max_deg, deg);
    }
    std::vector<double> c(static_cast<std::size_t>(max_deg), 0.0);
    for (const auto& [deg, coef] : m) c[static_cast<std::size_t>(deg - 1)] += coef;
    return Poly(std::move(c));
}

// Coefficient sums off from 1 by <= 1e-9 are renormalized (published
// distributions are often quoted as truncated decimals); larger deviation is
// rejected.
Poly validate_edge_dist(Poly p, const char* what) {
    double sum = 0.0;
    for (double v : p.coeffs()) {
        if (!std::isfinite(v)) throw EnsembleError(std::string(what) + ": non-finite coefficient");
        if (v < 0.0) throw EnsembleError(std::string(what) + ": negative coefficient");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw EnsembleError(std::string(what) + ": coefficients sum to " + std::to_string(sum) +
                            ", not 1");
    if (p.coeff(0) != 0.0)
        throw EnsembleError(std::string(what) + ": degree-1 nodes not supported (x^0 term)");
    if (sum != 1.0) p = p * (1.0 / sum);
    return p;
}

}  // namespace

DDPair DDPair::from_degree_maps(const std::map<int, double>& lambda,
                                const std::map<int, double>& rho) {
    return from_edge(poly_from_degree_map(lambda, "lambda"), poly_from_degree_map(rho, "rho"));
}

DDPair DDPair::from_edge(Poly lambda, Poly rho) {
    DDPair dd;
    dd.lambda_edge_ = validate_edge_dist(std::move(lambda), "lambda");
    dd.rho_edge_ = validate_edge_dist(std::move(rho), "rho");
    dd.int_rho_ = dd.rho_edge_.integral01();
    if (dd.int_rho_ <= 0.0) throw EnsembleError("rho: zero integral");
    dd.gamma_node_ = dd.rho_edge_.antiderivative() * (1.0 / dd.int_rho_);
    dd.rho_deriv_ = dd.rho_edge_.derivative();
    dd.rho_primitive_ = dd.rho_edge_.antiderivative();
    dd.int_y_ = 1.0 - dd.int_rho_;
    if (dd.rho_edge_.degree() <= 24) {
        // expanded y(x) = 1 - rho(1-x), safe at modest degree
        dd.y_poly_ = Poly::constant(1.0) - dd.rho_edge_.compose(Poly::affine(1.0, -1.0));
        dd.have_y_poly_ = true;
    }
    dd.finish_setup();
    dd.design_rate_ = 1.0 - dd.int_rho_ / dd.int_lambda_;
    return dd;
}

DDPair DDPair::generalized(Poly lambda, Poly right_exit) {
    DDPair dd;
    dd.generalized_ = true;
    dd.lambda_edge_ = validate_edge_dist(std::move(lambda), "lambda");
    for (double v : right_exit.coeffs())
        if (!std::isfinite(v)) throw EnsembleError("right_exit: non-finite coefficient");
    if (right_exit.coeff(0) != 0.0) throw EnsembleError("right_exit: y(0) != 0");
    if (std::abs(right_exit(1.0) - 1.0) > 1e-9) throw EnsembleError("right_exit: y(1) != 1");
    Poly yd = right_exit.derivative();
    for (int i = 0; i <= 1000; ++i)
        if (yd(i / 1000.0) < -1e-9) throw EnsembleError("right_exit: y not nondecreasing on [0,1]");
    dd.y_poly_ = std::move(right_exit);
    dd.have_y_poly_ = true;
    dd.int_y_ = dd.y_poly_.integral01();
    dd.finish_setup();
    // design rate constraint r = 1 - (1 - int y)/int lambda
    dd.design_rate_ = 1.0 - (1.0 - dd.int_y_) / dd.int_lambda_;
    return dd;
}

void DDPair::finish_setup() {
    int_lambda_ = lambda_edge_.integral01();
    if (int_lambda_ <= 0.0) throw EnsembleError("lambda: zero integral");
    lambda_node_ = lambda_edge_.antiderivative() * (1.0 / int_lambda_);
    lambda_primitive_ = lambda_edge_.antiderivative();
    if (have_y_poly_) {
        y_poly_deriv_ = y_poly_.derivative();
        y_poly_primitive_ = y_poly_.antiderivative();
    }
}

double DDPair::y_at(double x) const {
    if (generalized_) return y_poly_(x);
    return 1.0 - rho_edge_(1.0 - x);
}

double DDPair::y_at_precise(double x) const {
    if (generalized_) return y_poly_(x);
    if (x >= 1.0) return 1.0;
    // sum_j rho_j (1 - (1-x)^(j-1)) with every term at full relative precision
    double l = std::log1p(-x);
    double acc = 0.0;
    for (std::size_t k = 1; k < rho_edge_.coeffs().size(); ++k) {
        double c = rho_edge_.coeff(k);
        if (c != 0.0) acc -= c * std::expm1(static_cast<double>(k) * l);
    }
    return acc;
}

double DDPair::y_deriv_at(double x) const {
    if (generalized_) return y_poly_deriv_(x);
    return rho_deriv_(1.0 - x);
}

double DDPair::y_integral_at(double x) const {
    if (generalized_) return y_poly_primitive_(x);
    // int_0^x (1 - rho(1-t)) dt = x - (R(1) - R(1-x)), R the rho antiderivative
    return x - (int_rho_ - rho_primitive_(1.0 - x));
}

const Poly& DDPair::rho_edge() const {
    if (generalized_) throw EnsembleError("rho unavailable in generalized mode");
    return rho_edge_;
}

const Poly& DDPair::gamma_node() const {
    if (generalized_) throw EnsembleError("Gamma unavailable in generalized mode");
    return gamma_node_;
}

double DDPair::gamma_node_deriv1() const {
    if (generalized_) throw EnsembleError("Gamma'(1) unavailable in generalized mode");
    return 1.0 / int_rho_;
}

DDPair DDPair::parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw EnsembleError(std::string("ensemble JSON parse error: ") + e.what());
    }
    auto read_map = [&](const char* key) {
        std::map<int, double> m;
        if (!j.contains(key)) throw EnsembleError(std::string("missing field \"") + key + "\"");
        for (const auto& [k, v] : j.at(key).items()) {
            int deg = 0;
            try {
                deg = std::stoi(k);
            } catch (...) {
                throw EnsembleError(std::string("field \"") + key + "\": bad key \"" + k + "\"");
            }
            m[deg] = v.get<double>();
        }
        return m;
    };
    if (j.contains("right_exit")) {
        std::map<int, double> ym;
        for (const auto& [k, v] : j.at("right_exit").items()) ym[std::stoi(k)] = v.get<double>();
        int max_pow = 0;
        for (const auto& [p, c] : ym) {
            (void)c;
            if (p < 1) throw EnsembleError("right_exit: powers must be >= 1");
            max_pow = std::max(max_pow, p);
        }
        std::vector<double> yc(static_cast<std::size_t>(max_pow) + 1, 0.0);
        for (const auto& [p, c] : ym) yc[static_cast<std::size_t>(p)] = c;
        return generalized(poly_from_degree_map(read_map("lambda"), "lambda"), Poly(std::move(yc)));
    }
    return from_degree_maps(read_map("lambda"), read_map("rho"));
}

DDPair DDPair::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EnsembleError("cannot open ensemble file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

Poly node_to_edge(const Poly& node_poly) {
    Poly d = node_poly.derivative();
    double d1 = d(1.0);
    if (d1 == 0.0) throw EnsembleError("node_to_edge: derivative vanishes at 1");
    return d * (1.0 / d1);
}

}  // namespace maxwell
