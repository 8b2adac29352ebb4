/**
 * Copyright 2026 The heraldsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * Evolves sparse Fock states through mode unitaries.
 *
 * Two independent amplitude engines live here on purpose:
 *
 *  - apply() expands each input term multinomially, merging output
 *    monomials in a hash map as it goes. The expansion of every input
 *    mode is restricted to the nonzero columns of its row, so embedded
 *    small blocks stay cheap inside large systems.
 *  - amplitude_permanent() computes a single transition amplitude as the
 *    permanent of the row/column-repeated submatrix via Ryser's formula
 *    with Gray-code subset iteration.
 *
 * The two routes are cross-checked against each other in the test suite;
 * do not reimplement one in terms of the other.
 */

#ifndef HERALDSIM_EVOLUTION_HPP
#define HERALDSIM_EVOLUTION_HPP

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "heraldsim/errors.hpp"
#include "heraldsim/fock.hpp"
#include "heraldsim/unitary.hpp"

namespace heraldsim {

namespace detail {

/// factorials up to 170 fit in double exactly enough for our photon counts
inline double factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(171, 1.0);
        for (int i = 1; i < 171; ++i) t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i - 1)] * i;
        return t;
    }();
    return table[static_cast<std::size_t>(n)];
}

inline double binomial(int n, int k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

inline double sqrt_factorial_product(const FockState& s) {
    double p = 1.0;
    for (std::uint8_t n : s.occupations()) p *= factorial(n);
    return std::sqrt(p);
}

/// Distributes `photons` from one input row over its nonzero columns,
/// carrying the running multinomial weight and amplitude product, and
/// merges each completed assignment into `next`.
inline void expand_row(const std::vector<std::pair<int, Amplitude>>& columns,
                       std::size_t column_index, int photons_left, Amplitude coeff,
                       std::vector<std::uint8_t>& occ,
                       StateVector::TermMap& next) {
    const auto [mode, entry] = columns[column_index];
    if (column_index + 1 == columns.size()) {
        // Last column takes the remainder; multinomial factor is 1 here.
        Amplitude c = coeff;
        for (int i = 0; i < photons_left; ++i) c *= entry;
        occ[static_cast<std::size_t>(mode)] += static_cast<std::uint8_t>(photons_left);
        auto [it, inserted] = next.try_emplace(FockState(occ), Amplitude{0.0, 0.0});
        it->second += c;
        occ[static_cast<std::size_t>(mode)] -= static_cast<std::uint8_t>(photons_left);
        return;
    }
    Amplitude c = coeff;  // coeff * entry^take, maintained incrementally
    for (int take = 0;; ++take) {
        expand_row(columns, column_index + 1, photons_left - take,
                   c * binomial(photons_left, take), occ, next);
        if (take == photons_left) break;
        c *= entry;
        occ[static_cast<std::size_t>(mode)] += 1;
    }
    occ[static_cast<std::size_t>(mode)] -= static_cast<std::uint8_t>(photons_left);
}

// Fast path for systems of at most 10 modes: occupations are packed six
// bits per mode into one 64-bit key, which keeps the merge maps free of
// per-term heap allocations. Occupations stay below 64 because packed
// keys are only used when the photon total fits.
inline constexpr int kPackedModeLimit = 10;
inline constexpr int kPackedBits = 6;
inline constexpr int kPackedMaxPhotons = 63;

using PackedMap = std::unordered_map<std::uint64_t, Amplitude>;

inline std::uint64_t pack_occupations(const FockState& state) {
    std::uint64_t key = 0;
    for (int m = 0; m < state.mode_count(); ++m) {
        key |= static_cast<std::uint64_t>(state.occupation(m)) << (kPackedBits * m);
    }
    return key;
}

inline FockState unpack_occupations(std::uint64_t key, int mode_count) {
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(mode_count));
    for (int m = 0; m < mode_count; ++m) {
        occ[static_cast<std::size_t>(m)] =
            static_cast<std::uint8_t>((key >> (kPackedBits * m)) & 0x3f);
    }
    return FockState(std::move(occ));
}

inline void expand_row_packed(const std::vector<std::pair<int, Amplitude>>& columns,
                              std::size_t column_index, int photons_left, Amplitude coeff,
                              std::uint64_t key, PackedMap& next) {
    const auto [mode, entry] = columns[column_index];
    const std::uint64_t step = std::uint64_t{1} << (kPackedBits * mode);
    if (column_index + 1 == columns.size()) {
        Amplitude c = coeff;
        for (int i = 0; i < photons_left; ++i) c *= entry;
        next[key + step * static_cast<std::uint64_t>(photons_left)] += c;
        return;
    }
    Amplitude c = coeff;
    for (int take = 0;; ++take) {
        expand_row_packed(columns, column_index + 1, photons_left - take,
                          c * binomial(photons_left, take), key, next);
        if (take == photons_left) break;
        c *= entry;
        key += step;
    }
}

}  // namespace detail

/// Sends `state` through `u`: each input term is expanded via the
/// creation-operator transition relation with bosonic sqrt(n!) weights,
/// outputs are merged and pruned. Preserves the norm and the photon
/// number of every term. Pure function; callers may evaluate different
/// (u, state) pairs concurrently.
inline StateVector apply(const Unitary& u, const StateVector& state) {
    const int m = state.mode_count();
    if (u.dim() != m) {
        throw InvalidArgument("apply: unitary dimension does not match state mode count");
    }

    // Nonzero columns per input row.
    std::vector<std::vector<std::pair<int, Amplitude>>> support(
        static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
            const Amplitude e = u.entries(k, l);
            if (std::abs(e) > 1e-14) support[static_cast<std::size_t>(k)].emplace_back(l, e);
        }
    }

    StateVector out(m);
    const bool packed = m <= detail::kPackedModeLimit;
    std::vector<std::uint8_t> scratch;
    for (const auto& [input, amplitude] : state.terms()) {
        const Amplitude base = amplitude / detail::sqrt_factorial_product(input);
        if (packed && input.total_photons() <= detail::kPackedMaxPhotons) {
            detail::PackedMap current;
            current.emplace(0, base);
            for (int k = 0; k < m; ++k) {
                const int photons = input.occupation(k);
                if (photons == 0) continue;
                detail::PackedMap next;
                next.reserve(current.size() * 4);
                for (const auto& [key, coeff] : current) {
                    detail::expand_row_packed(support[static_cast<std::size_t>(k)], 0,
                                              photons, coeff, key, next);
                }
                current = std::move(next);
            }
            for (const auto& [key, coeff] : current) {
                const FockState monomial = detail::unpack_occupations(key, m);
                out.accumulate(monomial, coeff * detail::sqrt_factorial_product(monomial));
            }
            continue;
        }
        StateVector::TermMap current;
        current.emplace(FockState::zero(m), base);
        for (int k = 0; k < m; ++k) {
            const int photons = input.occupation(k);
            if (photons == 0) continue;
            StateVector::TermMap next;
            next.reserve(current.size() * 4);
            for (const auto& [partial, coeff] : current) {
                scratch = partial.occupations();
                detail::expand_row(support[static_cast<std::size_t>(k)], 0, photons,
                                   coeff, scratch, next);
            }
            current = std::move(next);
        }
        for (const auto& [monomial, coeff] : current) {
            out.accumulate(monomial, coeff * detail::sqrt_factorial_product(monomial));
        }
    }
    out.prune();
    return out;
}

/// Transition amplitude <output| U |input> via Ryser's permanent formula
/// on the matrix whose rows repeat input modes by their occupation and
/// whose columns repeat output modes likewise. Returns exactly 0 when the
/// photon totals differ (particle conservation, not an error).
inline Amplitude amplitude_permanent(const Unitary& u, const FockState& input,
                                     const FockState& output) {
    if (input.mode_count() != u.dim() || output.mode_count() != u.dim()) {
        throw InvalidArgument("amplitude_permanent: state length does not match unitary");
    }
    if (input.total_photons() != output.total_photons()) return Amplitude{0.0, 0.0};
    const int n = input.total_photons();
    if (n == 0) return Amplitude{1.0, 0.0};
    if (n > 30) throw CapacityError("amplitude_permanent: more than 30 photons");

    std::vector<int> rows, cols;
    rows.reserve(static_cast<std::size_t>(n));
    cols.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < u.dim(); ++k) {
        for (int i = 0; i < input.occupation(k); ++i) rows.push_back(k);
        for (int i = 0; i < output.occupation(k); ++i) cols.push_back(k);
    }

    // B(i, j) = U(rows[i], cols[j]); per(B) by Ryser with Gray-code
    // updates of the per-row partial sums.
    std::vector<Amplitude> row_sums(static_cast<std::size_t>(n), Amplitude{0.0, 0.0});
    Amplitude total{0.0, 0.0};
    std::uint64_t gray = 0;
    int subset_size = 0;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const std::uint64_t next_gray = k ^ (k >> 1);
        const std::uint64_t changed = gray ^ next_gray;
        const int j = std::countr_zero(changed);
        const bool added = (next_gray & changed) != 0;
        const int col = cols[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) {
            const Amplitude e = u.entries(rows[static_cast<std::size_t>(i)], col);
            row_sums[static_cast<std::size_t>(i)] += added ? e : -e;
        }
        subset_size += added ? 1 : -1;
        gray = next_gray;

        Amplitude prod{1.0, 0.0};
        for (int i = 0; i < n; ++i) prod *= row_sums[static_cast<std::size_t>(i)];
        const bool negative = ((n - subset_size) % 2) != 0;
        total += negative ? -prod : prod;
    }

    double norm = 1.0;
    for (int k = 0; k < u.dim(); ++k) {
        norm *= detail::factorial(input.occupation(k));
        norm *= detail::factorial(output.occupation(k));
    }
    return total / std::sqrt(norm);
}

/// Applies the annihilation operator to one mode: occupation n -> n - 1
/// with coefficient sqrt(n); vacuum components of that mode vanish.
/// Returns the renormalized state together with the probability that the
/// subtraction fires at all, i.e. the probability that the mode is
/// occupied. On a state with nothing in the mode, returns (zero state, 0).
inline std::pair<StateVector, double> subtract_photon(const StateVector& state, int mode) {
    if (mode < 0 || mode >= state.mode_count()) {
        throw InvalidArgument("subtract_photon: mode out of range");
    }
    StateVector lowered(state.mode_count());
    double occupied_weight = 0.0;
    for (const auto& [basis, amp] : state.terms()) {
        const int n = basis.occupation(mode);
        if (n == 0) continue;
        occupied_weight += std::norm(amp);
        lowered.accumulate(basis.with_occupation(mode, n - 1),
                           amp * std::sqrt(static_cast<double>(n)));
    }
    lowered.prune();
    if (lowered.is_zero()) return {std::move(lowered), 0.0};
    return {lowered.normalized(), occupied_weight};
}

}  // namespace heraldsim

#endif  // HERALDSIM_EVOLUTION_HPP
