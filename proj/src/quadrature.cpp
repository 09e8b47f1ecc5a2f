#include "levymv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "levymv/errors.hpp"

namespace lmv {

namespace {

const double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double a, b, value, err;
    bool operator<(const Piece& o) const { return err < o.err; }
};

Piece gk15(const std::function<double(double)>& f, double a, double b, int& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * kXgk[j];
        double f1 = f(c - dx);
        double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    evals += 15;
    double value = resk * h;
    double err = std::abs((resk - resg) * h);
    if (!std::isfinite(value)) err = INFINITY;
    return {a, b, value, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt) {
    QuadResult out;
    if (a == b) return out;
    if (b < a) {
        out = integrate(f, b, a, opt);
        out.value = -out.value;
        return out;
    }
    std::priority_queue<Piece> heap;
    Piece first = gk15(f, a, b, out.evaluations);
    heap.push(first);
    double total = first.value;
    double total_err = first.err;
    int intervals = 1;
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (intervals >= opt.max_intervals) {
            out.converged = false;
            break;
        }
        Piece worst = heap.top();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;
            break;
        }
        heap.pop();
        Piece left = gk15(f, worst.a, mid, out.evaluations);
        Piece right = gk15(f, mid, worst.b, out.evaluations);
        heap.push(left);
        heap.push(right);
        ++intervals;
        // Recompute sums from scratch now and then to avoid drift.
        if (intervals % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            total_err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().err;
                copy.pop();
            }
        } else {
            total += left.value + right.value - worst.value;
            total_err += left.err + right.err - worst.err;
        }
    }
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().err;
        heap.pop();
    }
    out.value = sum;
    out.abs_error = err;
    if (!std::isfinite(sum)) out.converged = false;
    return out;
}

QuadResult integrate_pieces(const std::function<double(double)>& f,
                            const std::vector<double>& breaks, const QuadOptions& opt) {
    QuadResult out;
    std::vector<double> b = breaks;
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    QuadOptions piece_opt = opt;
    if (b.size() > 2) piece_opt.abs_tol = opt.abs_tol / static_cast<double>(b.size() - 1);
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        QuadResult r = integrate(f, b[i], b[i + 1], piece_opt);
        out.value += r.value;
        out.abs_error += r.abs_error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    return out;
}

QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            const QuadOptions& opt) {
    auto g = [&](double t) {
        double s = 1.0 - t;
        double x = a + t / s;
        double v = f(x);
        return v == 0.0 ? 0.0 : v / (s * s);
    };
    return integrate(g, 0.0, 1.0, opt);
}

double quad(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt) {
    QuadResult r = integrate(f, a, b, opt);
    if (!r.converged)
        fail(ErrorCode::QuadratureFailure,
             "quadrature did not converge on [" + std::to_string(a) + ", " + std::to_string(b) +
                 "], error estimate " + std::to_string(r.abs_error));
    return r.value;
}

double quad_inf(const std::function<double(double)>& f, double a, const QuadOptions& opt) {
    QuadResult r = integrate_to_inf(f, a, opt);
    if (!r.converged)
        fail(ErrorCode::QuadratureFailure, "quadrature did not converge on [" + std::to_string(a) +
                                               ", inf), error estimate " +
                                               std::to_string(r.abs_error));
    return r.value;
}

}  // namespace lmv
