#include "minkowski/excursion_mf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mlab {

std::int64_t ECCurve::at(double v) const {
    // thresholds are decreasing; find the last one >= v.
    const auto it = std::partition_point(thresholds.begin(), thresholds.end(),
                                         [v](double t) { return t >= v; });
    if (it == thresholds.begin()) return 0;
    return chi[static_cast<std::size_t>(it - thresholds.begin()) - 1];
}

namespace {

using Offset = std::vector<int>;

// Simplices through a vertex, as the offsets of their other vertices, with
// the simplex dimension. Each simplex is a chain 0 = c_0 < c_1 < ... < c_k in
// {0,1}^n (strictly increasing coordinate subsets) translated so that the
// vertex sits at c_j.
struct StarEntry {
    std::vector<Offset> others;
    int dim = 0;
};

void extend_chains(int n, std::vector<std::vector<unsigned>>& out, std::vector<unsigned>& chain) {
    out.push_back(chain);
    const unsigned last = chain.back();
    const unsigned full = (1u << n) - 1u;
    for (unsigned next = last + 1; next <= full; ++next) {
        if ((next & last) != last) continue;  // must contain the previous subset
        chain.push_back(next);
        extend_chains(n, out, chain);
        chain.pop_back();
    }
}

std::vector<std::vector<unsigned>> chains_from_origin(int n) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> chain{0u};
    extend_chains(n, out, chain);
    return out;
}

std::vector<StarEntry> star_template(int n) {
    std::vector<StarEntry> star;
    for (const auto& chain : chains_from_origin(n)) {
        for (std::size_t j = 0; j < chain.size(); ++j) {
            StarEntry e;
            e.dim = static_cast<int>(chain.size()) - 1;
            for (std::size_t i = 0; i < chain.size(); ++i) {
                if (i == j) continue;
                Offset o(n);
                for (int a = 0; a < n; ++a)
                    o[a] = static_cast<int>((chain[i] >> a) & 1u) -
                           static_cast<int>((chain[j] >> a) & 1u);
                e.others.push_back(std::move(o));
            }
            star.push_back(std::move(e));
        }
    }
    return star;
}

struct Lattice {
    int n;
    std::vector<int> shape;
    bool periodic;

    // Site index of p + o, or -1 outside a non-periodic grid.
    std::int64_t shifted(std::span<const int> p, std::span<const int> o) const {
        std::int64_t k = 0;
        for (int a = 0; a < n; ++a) {
            int c = p[a] + o[a];
            if (periodic) {
                c = (c % shape[a] + shape[a]) % shape[a];
            } else if (c < 0 || c >= shape[a]) {
                return -1;
            }
            k = k * shape[a] + c;
        }
        return k;
    }

    void coords(std::int64_t k, std::vector<int>& p) const {
        p.resize(n);
        for (int a = n - 1; a >= 0; --a) {
            p[a] = static_cast<int>(k % shape[a]);
            k /= shape[a];
        }
    }
};

Lattice make_lattice(const FieldGrid& f, bool periodic) {
    if (f.values.empty()) throw std::invalid_argument("excursion: empty field");
    f.validate();
    if (periodic)
        for (int e : f.shape)
            if (e < 3) throw std::invalid_argument("excursion: periodic mode needs extents >= 3");
    return {f.n, f.shape, periodic};
}

}  // namespace

ECCurve ec_curve_sweep(const FieldGrid& field, bool periodic) {
    const Lattice lat = make_lattice(field, periodic);
    const auto star = star_template(lat.n);
    const std::size_t N = field.values.size();

    std::vector<std::int64_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        const double va = field.values[a], vb = field.values[b];
        return va != vb ? va > vb : a < b;
    });

    std::vector<char> active(N, 0);
    std::vector<int> p;
    ECCurve curve;
    std::int64_t chi = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const std::int64_t t = order[i];
        lat.coords(t, p);
        active[t] = 1;
        for (const auto& e : star) {
            bool all = true;
            for (const auto& o : e.others) {
                const std::int64_t q = lat.shifted(p, o);
                if (q < 0 || !active[q]) {
                    all = false;
                    break;
                }
            }
            if (all) chi += (e.dim % 2 == 0) ? 1 : -1;
        }
        const bool batch_ends = i + 1 == N || field.values[order[i + 1]] != field.values[t];
        if (batch_ends) {
            curve.thresholds.push_back(field.values[t]);
            curve.chi.push_back(chi);
        }
    }
    return curve;
}

std::int64_t ec_bruteforce(const FieldGrid& field, double v, bool periodic) {
    const Lattice lat = make_lattice(field, periodic);
    const int n = lat.n;
    std::set<std::vector<std::int64_t>> simplices;

    std::vector<int> axes(n);
    std::vector<int> base(n, 0), step(n);
    std::vector<std::int64_t> chain;
    const std::size_t N = field.values.size();
    for (std::size_t k = 0; k < N; ++k) {
        lat.coords(static_cast<std::int64_t>(k), base);
        std::iota(axes.begin(), axes.end(), 0);
        do {
            // Vertices base, base + e_{axes[0]}, base + e_{axes[0]} + e_{axes[1]}, ...
            chain.clear();
            std::fill(step.begin(), step.end(), 0);
            bool inside = true;
            for (int m = 0; m <= n && inside; ++m) {
                if (m > 0) step[axes[m - 1]] = 1;
                const std::int64_t q = lat.shifted(base, step);
                if (q < 0) inside = false;
                else chain.push_back(q);
            }
            if (!inside) continue;
            for (unsigned mask = 1; mask < (1u << (n + 1)); ++mask) {
                std::vector<std::int64_t> face;
                bool ok = true;
                for (int m = 0; m <= n; ++m) {
                    if (!((mask >> m) & 1u)) continue;
                    if (!(field.values[chain[m]] >= v)) {
                        ok = false;
                        break;
                    }
                    face.push_back(chain[m]);
                }
                if (!ok) continue;
                std::sort(face.begin(), face.end());
                simplices.insert(std::move(face));
            }
        } while (std::next_permutation(axes.begin(), axes.end()));
    }
    std::int64_t chi = 0;
    for (const auto& s : simplices) chi += (s.size() % 2 == 1) ? 1 : -1;
    return chi;
}

namespace {

struct Pt {
    double x, y;
};

double dist(Pt a, Pt b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Clip triangle (p, f) to {f >= v}; accumulate polygon area and iso length.
void clip_triangle(const Pt p[3], const double f[3], double v, double& area, double& length) {
    Pt poly[4];
    int m = 0;
    Pt cut[2];
    int c = 0;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const bool in_i = f[i] >= v, in_j = f[j] >= v;
        if (in_i) poly[m++] = p[i];
        if (in_i != in_j) {
            const double t = (v - f[i]) / (f[j] - f[i]);
            const Pt q{p[i].x + t * (p[j].x - p[i].x), p[i].y + t * (p[j].y - p[i].y)};
            poly[m++] = q;
            cut[c++] = q;
        }
    }
    if (m >= 3) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            const Pt& a = poly[i];
            const Pt& b = poly[(i + 1) % m];
            s += a.x * b.y - b.x * a.y;
        }
        area += 0.5 * std::abs(s);
    }
    if (c == 2) length += dist(cut[0], cut[1]);
}

}  // namespace

MF2D mf2d_estimate(const FieldGrid& field, double v) {
    if (field.n != 2) throw std::invalid_argument("mf2d_estimate: field must be 2-D");
    return mf2d_estimate(field, v, ec_curve_sweep(field));
}

MF2D mf2d_estimate(const FieldGrid& field, double v, const ECCurve& curve) {
    if (field.n != 2) throw std::invalid_argument("mf2d_estimate: field must be 2-D");
    field.validate();
    const int nx = field.shape[0], ny = field.shape[1];
    const double hx = field.spacing[0], hy = field.spacing[1];
    auto val = [&](int i, int j) { return field.values[static_cast<std::size_t>(i) * ny + j]; };
    double area = 0.0, length = 0.0;
    for (int i = 0; i + 1 < nx; ++i) {
        for (int j = 0; j + 1 < ny; ++j) {
            const Pt p00{i * hx, j * hy}, p10{(i + 1) * hx, j * hy}, p01{i * hx, (j + 1) * hy},
                p11{(i + 1) * hx, (j + 1) * hy};
            const Pt a[3] = {p00, p10, p11};
            const double fa[3] = {val(i, j), val(i + 1, j), val(i + 1, j + 1)};
            const Pt b[3] = {p00, p11, p01};
            const double fb[3] = {val(i, j), val(i + 1, j + 1), val(i, j + 1)};
            clip_triangle(a, fa, v, area, length);
            clip_triangle(b, fb, v, area, length);
        }
    }
    // Iso segments lying on a shared edge are counted once per triangle;
    // they only arise when both edge endpoints equal v, a null event.
    return {area, 0.5 * length, curve.at(v)};
}

std::vector<MeanRow> mean_table(std::span<const std::vector<double>> samples,
                                std::span<const double> v_grid) {
    if (samples.empty()) throw std::invalid_argument("mean_table: empty ensemble");
    for (const auto& s : samples)
        if (s.size() != v_grid.size()) throw std::invalid_argument("mean_table: ragged samples");
    const double R = static_cast<double>(samples.size());
    std::vector<MeanRow> rows;
    for (std::size_t i = 0; i < v_grid.size(); ++i) {
        double m = 0.0;
        for (const auto& s : samples) m += s[i];
        m /= R;
        double var = 0.0;
        for (const auto& s : samples) var += (s[i] - m) * (s[i] - m);
        const double se = samples.size() < 2 ? std::numeric_limits<double>::quiet_NaN()
                                             : std::sqrt(var / (R - 1.0) / R);
        rows.push_back({v_grid[i], m, se});
    }
    return rows;
}

std::vector<MeanRow> mean_curves(std::span<const ECCurve> curves, std::span<const double> v_grid) {
    if (curves.empty()) throw std::invalid_argument("mean_curves: empty ensemble");
    std::vector<std::vector<double>> samples;
    for (const auto& c : curves) {
        std::vector<double> row;
        for (double v : v_grid) row.push_back(static_cast<double>(c.at(v)));
        samples.push_back(std::move(row));
    }
    return mean_table(samples, v_grid);
}

}  // namespace mlab
