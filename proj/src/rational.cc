// Copyright 2026 The stabmagic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stabmagic/rational.h"

#include <cmath>

#include "stabmagic/errors.h"

namespace stabmagic {

std::vector<size_t> RationalMatrix::rref() {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols_ && r < rows_; c++) {
        size_t p = r;
        while (p < rows_ && sgn((*this)(p, c)) == 0) {
            p++;
        }
        if (p == rows_) {
            continue;
        }
        if (p != r) {
            for (size_t k = 0; k < cols_; k++) {
                std::swap((*this)(p, k), (*this)(r, k));
            }
        }
        Rational inv = 1 / (*this)(r, c);
        for (size_t k = c; k < cols_; k++) {
            (*this)(r, k) *= inv;
        }
        for (size_t i = 0; i < rows_; i++) {
            if (i == r || sgn((*this)(i, c)) == 0) {
                continue;
            }
            Rational f = (*this)(i, c);
            for (size_t k = c; k < cols_; k++) {
                (*this)(i, k) -= f * (*this)(r, k);
            }
        }
        pivots.push_back(c);
        r++;
    }
    return pivots;
}

size_t RationalMatrix::rank() const {
    RationalMatrix copy = *this;
    return copy.rref().size();
}

std::optional<RationalVector> RationalMatrix::solve_square(const RationalVector &b) const {
    if (rows_ != cols_ || b.size() != rows_) {
        throw DimensionError("solve_square needs a square system");
    }
    RationalMatrix aug(rows_, cols_ + 1);
    for (size_t i = 0; i < rows_; i++) {
        for (size_t j = 0; j < cols_; j++) {
            aug(i, j) = (*this)(i, j);
        }
        aug(i, cols_) = b[i];
    }
    auto pivots = aug.rref();
    if (pivots.size() != rows_ || pivots.back() == cols_) {
        return std::nullopt;
    }
    RationalVector x(cols_);
    for (size_t i = 0; i < rows_; i++) {
        x[pivots[i]] = aug(i, cols_);
    }
    return x;
}

RationalVector IncrementalSystem::reduce(std::span<const Rational> row, Rational &rhs) const {
    if (row.size() != cols_) {
        throw DimensionError("equation length does not match system width");
    }
    RationalVector r(row.begin(), row.end());
    for (size_t i = 0; i < rows_.size(); i++) {
        size_t p = pivots_[i];
        if (sgn(r[p]) == 0) {
            continue;
        }
        Rational f = r[p];
        for (size_t k = 0; k < cols_; k++) {
            if (sgn(rows_[i][k]) != 0) {
                r[k] -= f * rows_[i][k];
            }
        }
        rhs -= f * rhs_[i];
    }
    return r;
}

IncrementalSystem::Outcome IncrementalSystem::test(std::span<const Rational> row, const Rational &rhs) const {
    Rational c = rhs;
    RationalVector r = reduce(row, c);
    for (const auto &x : r) {
        if (sgn(x) != 0) {
            return Outcome::kIndependent;
        }
    }
    return sgn(c) == 0 ? Outcome::kRedundant : Outcome::kInconsistent;
}

IncrementalSystem::Outcome IncrementalSystem::add(std::span<const Rational> row, const Rational &rhs) {
    Rational c = rhs;
    RationalVector r = reduce(row, c);
    size_t p = 0;
    while (p < cols_ && sgn(r[p]) == 0) {
        p++;
    }
    if (p == cols_) {
        return sgn(c) == 0 ? Outcome::kRedundant : Outcome::kInconsistent;
    }
    Rational inv = 1 / r[p];
    for (auto &x : r) {
        x *= inv;
    }
    c *= inv;
    // Keep the stored rows fully reduced against the new pivot.
    for (size_t i = 0; i < rows_.size(); i++) {
        if (sgn(rows_[i][p]) == 0) {
            continue;
        }
        Rational f = rows_[i][p];
        for (size_t k = 0; k < cols_; k++) {
            if (sgn(r[k]) != 0) {
                rows_[i][k] -= f * r[k];
            }
        }
        rhs_[i] -= f * c;
    }
    rows_.push_back(std::move(r));
    rhs_.push_back(std::move(c));
    pivots_.push_back(p);
    return Outcome::kIndependent;
}

AffineSolution IncrementalSystem::solution() const {
    AffineSolution out;
    out.consistent = true;
    out.rank = rows_.size();
    out.particular.assign(cols_, Rational(0));
    std::vector<bool> is_pivot(cols_, false);
    for (size_t i = 0; i < rows_.size(); i++) {
        out.particular[pivots_[i]] = rhs_[i];
        is_pivot[pivots_[i]] = true;
    }
    for (size_t f = 0; f < cols_; f++) {
        if (is_pivot[f]) {
            continue;
        }
        RationalVector v(cols_, Rational(0));
        v[f] = 1;
        for (size_t i = 0; i < rows_.size(); i++) {
            v[pivots_[i]] = -rows_[i][f];
        }
        out.null_basis.push_back(std::move(v));
    }
    return out;
}

AffineSolution solve_affine(const RationalMatrix &a, const RationalVector &c) {
    if (c.size() != a.rows()) {
        throw DimensionError("right-hand side length does not match row count");
    }
    IncrementalSystem sys(a.cols());
    std::vector<Rational> row(a.cols());
    for (size_t i = 0; i < a.rows(); i++) {
        for (size_t j = 0; j < a.cols(); j++) {
            row[j] = a(i, j);
        }
        if (sys.add(row, c[i]) == IncrementalSystem::Outcome::kInconsistent) {
            AffineSolution bad;
            bad.rank = sys.rank();
            return bad;
        }
    }
    return sys.solution();
}

std::vector<mpz_class> primitive_integer_vector(std::span<const Rational> v) {
    mpz_class lcm = 1;
    for (const auto &x : v) {
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    }
    std::vector<mpz_class> out;
    out.reserve(v.size());
    mpz_class g = 0;
    for (const auto &x : v) {
        mpz_class n = x.get_num() * (lcm / x.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        out.push_back(std::move(n));
    }
    if (g > 1) {
        for (auto &n : out) {
            n /= g;
        }
    }
    return out;
}

Rational rationalize(double x, int64_t max_den) {
    if (!std::isfinite(x)) {
        throw ValidationError("cannot rationalize a non-finite value");
    }
    // Convergents h/k of the continued fraction of x.
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int iter = 0; iter < 64; iter++) {
        double fl = std::floor(r);
        mpz_class a(fl);
        mpz_class h2 = a * h1 + h0;
        mpz_class k2 = a * k1 + k0;
        if (k2 > max_den) {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        double frac = r - fl;
        if (frac < 1e-15) {
            break;
        }
        r = 1 / frac;
    }
    Rational q(h1, k1);
    q.canonicalize();
    return q;
}

}  // namespace stabmagic
