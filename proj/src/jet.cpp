#include "minkowski/jet.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mlab {

int jet_var_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n) throw std::out_of_range("jet_var_index: index outside matrix");
    // Rows 0..i-1 contribute n, n-1, ..., n-i+1 entries.
    return i * n - i * (i - 1) / 2 + (j - i);
}

int total_degree(const Exponent& e) {
    int d = 0;
    for (auto v : e) d += v;
    return d;
}

Jet::Jet(int n, int degree_cap) : n_(n), cap_(degree_cap) {
    if (n < 1 || n > kMaxJetDim) {
        throw std::invalid_argument("Jet: dimension must be in [1, 4], got " + std::to_string(n));
    }
    if (degree_cap < 0) throw std::invalid_argument("Jet: negative degree cap");
}

Jet Jet::constant(int n, int degree_cap, const Rational& c) {
    Jet j(n, degree_cap);
    j.add_term(Exponent{}, c);
    return j;
}

Jet Jet::variable(int n, int degree_cap, int i, int j, const Rational& coef) {
    Jet out(n, degree_cap);
    Exponent e{};
    e[jet_var_index(n, i, j)] = 1;
    out.add_term(e, coef);
    return out;
}

Rational Jet::coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational Jet::constant_term() const { return coefficient(Exponent{}); }

void Jet::add_term(const Exponent& e, const Rational& c) {
    if (c == 0 || total_degree(e) > cap_) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void Jet::check_compatible(const Jet& other, const char* op) const {
    if (n_ != other.n_ || cap_ != other.cap_) {
        throw std::invalid_argument(std::string("Jet ") + op + ": dimension or degree cap mismatch");
    }
}

Jet& Jet::operator+=(const Jet& other) {
    check_compatible(other, "add");
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

Jet& Jet::operator-=(const Jet& other) {
    check_compatible(other, "sub");
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

Jet& Jet::operator*=(const Rational& s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b, "mul");
    Jet out(a.n_, a.cap_);
    const int nv = jet_var_count(a.n_);
    std::vector<std::pair<int, const Jet::Terms::value_type*>> rhs;
    rhs.reserve(b.terms_.size());
    for (const auto& t : b.terms_) rhs.emplace_back(total_degree(t.first), &t);
    Rational prod;
    for (const auto& [ea, ca] : a.terms_) {
        const int da = total_degree(ea);
        for (const auto& [db, tb] : rhs) {
            if (da + db > a.cap_) continue;
            Exponent e = ea;
            for (int v = 0; v < nv; ++v) e[v] = static_cast<std::uint8_t>(e[v] + tb->first[v]);
            prod = ca * tb->second;
            out.add_term(e, prod);
        }
    }
    return out;
}

std::string Jet::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.get_str();
        for (int i = 0; i < n_; ++i) {
            for (int j = i; j < n_; ++j) {
                const int p = e[jet_var_index(n_, i, j)];
                if (p == 0) continue;
                os << "*t" << i + 1 << j + 1;
                if (p > 1) os << "^" << p;
            }
        }
    }
    return os.str();
}

Jet jet_add(const Jet& a, const Jet& b) { return a + b; }
Jet jet_mul(const Jet& a, const Jet& b) { return a * b; }

Jet jet_pow(const Jet& a, int k) {
    if (k < 0) throw std::invalid_argument("jet_pow: negative exponent");
    Jet out = Jet::constant(a.dim(), a.degree_cap(), 1);
    for (int i = 0; i < k; ++i) out = out * a;
    return out;
}

Jet jet_exp(const Jet& a) {
    if (a.constant_term() != 0) {
        throw std::invalid_argument("jet_exp: argument must have zero constant term");
    }
    Jet sum = Jet::constant(a.dim(), a.degree_cap(), 1);
    Jet term = sum;
    // a has no constant term, so a^m vanishes beyond the degree cap.
    for (int m = 1; m <= a.degree_cap(); ++m) {
        term = term * a;
        term *= Rational(1, m);
        if (term.is_zero()) break;
        sum += term;
    }
    return sum;
}

Jet trace_power(int n, int k, int degree_cap) {
    if (k < 1) throw std::invalid_argument("trace_power: k must be >= 1");
    // Entries of Theta as degree-1 jets; Theta^k accumulated by matrix products.
    std::vector<Jet> theta;
    theta.reserve(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) theta.push_back(Jet::variable(n, degree_cap, i, j));
    std::vector<Jet> power = theta;
    for (int p = 1; p < k; ++p) {
        std::vector<Jet> next(n * n, Jet(n, degree_cap));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) next[i * n + j] += power[i * n + l] * theta[l * n + j];
        power = std::move(next);
    }
    Jet tr(n, degree_cap);
    for (int i = 0; i < n; ++i) tr += power[i * n + i];
    return tr;
}

namespace {

int permutation_sign(const std::vector<int>& p) {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

Rational factorial(int k) {
    Rational f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

Rational apply_det_operator(const Rational& diag, int dsign, const Jet& jet) {
    const int n = jet.dim();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rational total = 0;
    do {
        const int sgn = permutation_sign(perm);
        std::vector<int> fixed;
        for (int i = 0; i < n; ++i)
            if (perm[i] == i) fixed.push_back(i);
        // Each fixed point contributes either the scalar diag or dsign * D_ii;
        // every other row contributes dsign * D_{i sigma(i)}.
        const unsigned subsets = 1u << fixed.size();
        for (unsigned mask = 0; mask < subsets; ++mask) {
            Exponent alpha{};
            Rational weight = sgn;
            int derivatives = 0;
            for (int i = 0; i < n; ++i) {
                bool scalar = false;
                if (perm[i] == i) {
                    const auto pos = std::find(fixed.begin(), fixed.end(), i) - fixed.begin();
                    scalar = (mask >> pos) & 1u;
                }
                if (scalar) {
                    weight *= diag;
                } else {
                    ++alpha[jet_var_index(n, i, perm[i])];
                    ++derivatives;
                    if (perm[i] != i) weight *= Rational(1, 2);
                }
            }
            if (weight == 0) continue;
            const Rational c = jet.coefficient(alpha);
            if (c == 0) continue;
            Rational value = weight * c;
            if (dsign < 0 && derivatives % 2 == 1) value = -value;
            for (auto a : alpha) value *= factorial(a);
            total += value;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

Rational det_diffop_apply(const Rational& x, const Rational& gamma, const Jet& jet) {
    return apply_det_operator(gamma * x, -1, jet);
}

}  // namespace mlab
