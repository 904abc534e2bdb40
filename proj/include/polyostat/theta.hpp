#pragma once

#include <cstddef>
#include <vector>

namespace polyostat {

// Truncated power series in the boundary-size marker theta. Coefficients
// live at powers 0..L; every operation keeps the truncation order.
template <class S>
struct ThetaSeries {
    std::vector<S> c;

    ThetaSeries() = default;
    explicit ThetaSeries(std::size_t L) : c(L + 1, S{0}) {}

    std::size_t order() const { return c.size() - 1; }
    S& operator[](std::size_t l) { return c[l]; }
    const S& operator[](std::size_t l) const { return c[l]; }

    // In-place division by (1 - r*theta).
    void div_geom(const S& r) {
        for (std::size_t l = 1; l < c.size(); ++l) c[l] = c[l] + r * c[l - 1];
    }

    // In-place multiplication by (c0 + c1*theta).
    void mul_linear(const S& c0, const S& c1) {
        for (std::size_t l = c.size(); l-- > 0;) {
            S t = c0 * c[l];
            if (l >= 1) t = t + c1 * c[l - 1];
            c[l] = t;
        }
    }

    ThetaSeries& operator+=(const ThetaSeries& o) {
        for (std::size_t l = 0; l < c.size(); ++l) c[l] = c[l] + o.c[l];
        return *this;
    }

    void scaled_add(const ThetaSeries& o, const S& f) {
        for (std::size_t l = 0; l < c.size(); ++l) c[l] = c[l] + f * o.c[l];
    }

    S sum() const {
        S s{0};
        for (const auto& x : c) s = s + x;
        return s;
    }

    S eval(const S& theta) const {
        // Horner from the top coefficient.
        S s{0};
        for (std::size_t l = c.size(); l-- > 0;) s = s * theta + c[l];
        return s;
    }
};

}  // namespace polyostat
