#ifndef BIPHOTON_QUADRATURE_HPP
#define BIPHOTON_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <functional>

namespace biphoton {

// Composite Simpson rule with n intervals (n forced even).
template <typename F>
double simpson(F&& f, double a, double b, std::size_t n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) {
        const double x = a + h * static_cast<double>(i);
        sum += f(x) * ((i % 2) ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

// Simpson with interval doubling until successive estimates agree to
// abs_tol + rel_tol * |estimate|. Starts at n0 intervals.
template <typename F>
double simpson_refine(F&& f, double a, double b, std::size_t n0,
                      double abs_tol, double rel_tol,
                      std::size_t max_doublings = 14) {
    double prev = simpson(f, a, b, n0);
    std::size_t n = n0;
    for (std::size_t d = 0; d < max_doublings; ++d) {
        n *= 2;
        const double cur = simpson(f, a, b, n);
        if (std::abs(cur - prev) <= abs_tol + rel_tol * std::abs(cur))
            return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace biphoton

#endif
