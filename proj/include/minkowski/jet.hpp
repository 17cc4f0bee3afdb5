#pragma once

// Truncated polynomials in the entries of a symmetric matrix Theta with exact
// rational coefficients. Variables are the upper-triangular entries theta_ij
// (i <= j) in lexicographic order of (i, j).

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include <gmpxx.h>

namespace mlab {

using Rational = mpq_class;

inline constexpr int kMaxJetDim = 4;
inline constexpr int kMaxJetVars = kMaxJetDim * (kMaxJetDim + 1) / 2;

using Exponent = std::array<std::uint8_t, kMaxJetVars>;

/// Number of theta variables for an n x n symmetric matrix.
constexpr int jet_var_count(int n) { return n * (n + 1) / 2; }

/// Position of theta_ij (order of i, j irrelevant) in the exponent vector.
int jet_var_index(int n, int i, int j);

int total_degree(const Exponent& e);

class Jet {
public:
    using Terms = std::map<Exponent, Rational>;

    /// The zero polynomial. Throws std::invalid_argument unless 1 <= n <= 4
    /// and degree_cap >= 0.
    Jet(int n, int degree_cap);

    static Jet constant(int n, int degree_cap, const Rational& c);
    /// coef * theta_ij.
    static Jet variable(int n, int degree_cap, int i, int j, const Rational& coef = 1);

    int dim() const { return n_; }
    int degree_cap() const { return cap_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    Rational coefficient(const Exponent& e) const;
    Rational constant_term() const;

    /// Adds c * monomial, dropping it if above the cap or if the result is 0.
    void add_term(const Exponent& e, const Rational& c);

    Jet& operator+=(const Jet& other);
    Jet& operator-=(const Jet& other);
    Jet& operator*=(const Rational& s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, const Rational& s) { return a *= s; }
    friend Jet operator*(const Rational& s, Jet a) { return a *= s; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend bool operator==(const Jet& a, const Jet& b) {
        return a.n_ == b.n_ && a.cap_ == b.cap_ && a.terms_ == b.terms_;
    }

    std::string to_string() const;

private:
    void check_compatible(const Jet& other, const char* op) const;

    int n_;
    int cap_;
    Terms terms_;
};

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_mul(const Jet& a, const Jet& b);
Jet jet_pow(const Jet& a, int k);

/// sum_{m <= cap} a^m / m!. Throws std::invalid_argument if a has a nonzero
/// constant term.
Jet jet_exp(const Jet& a);

/// tr(Theta^k) as a jet. Throws std::invalid_argument for k < 1.
Jet trace_power(int n, int k, int degree_cap);

/// Applies det(diag * I + dsign * D_Theta) to the jet and evaluates at
/// Theta = 0, where (D_Theta)_ij carries the weight (1 + delta_ij) / 2.
Rational apply_det_operator(const Rational& diag, int dsign, const Jet& jet);

/// det(-D_Theta + gamma * x * I) jet |_{Theta=0}.
Rational det_diffop_apply(const Rational& x, const Rational& gamma, const Jet& jet);

}  // namespace mlab
