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

#ifndef STABMAGIC_RATIONAL_H
#define STABMAGIC_RATIONAL_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace stabmagic {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Dense matrix of exact rationals (row-major). GMP keeps every entry in
/// lowest terms.
class RationalMatrix {
   public:
    RationalMatrix() = default;
    RationalMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    }

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    Rational &operator()(size_t r, size_t c) {
        return data_[r * cols_ + c];
    }
    const Rational &operator()(size_t r, size_t c) const {
        return data_[r * cols_ + c];
    }

    /// Reduces to reduced row echelon form in place; returns the pivot columns.
    std::vector<size_t> rref();
    size_t rank() const;
    /// Solves A x = b exactly when A is square and nonsingular.
    std::optional<RationalVector> solve_square(const RationalVector &b) const;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// The solution set of A x = c as x = particular + sum_j t_j null_basis[j].
struct AffineSolution {
    bool consistent = false;
    size_t rank = 0;
    RationalVector particular;
    std::vector<RationalVector> null_basis;
};

/// Row-by-row accumulation of a linear system A x = c kept in reduced row
/// echelon form, so consistency of one more equation costs O(rank * cols).
class IncrementalSystem {
   public:
    explicit IncrementalSystem(size_t cols) : cols_(cols) {
    }

    size_t cols() const {
        return cols_;
    }
    size_t rank() const {
        return rows_.size();
    }
    bool full_rank() const {
        return rows_.size() == cols_;
    }

    /// Whether row . x = rhs is consistent with the system (and, if so,
    /// whether it would raise the rank).
    enum class Outcome { kInconsistent, kRedundant, kIndependent };
    Outcome test(std::span<const Rational> row, const Rational &rhs) const;
    /// Adds the equation when consistent; returns the outcome.
    Outcome add(std::span<const Rational> row, const Rational &rhs);

    AffineSolution solution() const;

   private:
    RationalVector reduce(std::span<const Rational> row, Rational &rhs) const;

    size_t cols_;
    std::vector<RationalVector> rows_;  // each normalized so its pivot entry is 1
    RationalVector rhs_;
    std::vector<size_t> pivots_;
};

AffineSolution solve_affine(const RationalMatrix &a, const RationalVector &c);

/// Scales a rational vector by the lcm of its denominators and divides out the
/// gcd of the numerators (the sign is kept). Zero maps to zero.
std::vector<mpz_class> primitive_integer_vector(std::span<const Rational> v);

/// Best rational approximation with denominator at most max_den (continued fractions).
Rational rationalize(double x, int64_t max_den);

}  // namespace stabmagic

#endif
