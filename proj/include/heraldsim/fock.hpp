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
 * Fock basis states over composite (spatial x internal) optical modes and
 * sparse complex state vectors built on top of them.
 *
 * States are value types: construction and in-place accumulation are
 * single-owner operations, finished values are immutable and safe for
 * concurrent reads. There is no internal locking.
 */

#ifndef HERALDSIM_FOCK_HPP
#define HERALDSIM_FOCK_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "heraldsim/errors.hpp"
#include "heraldsim/format.hpp"

namespace heraldsim {

using Amplitude = std::complex<double>;

/// Terms with |amplitude| below this are dropped after state-producing
/// operations. Well below the 1e-9 tolerances asserted everywhere else.
inline constexpr double kPruneThreshold = 1e-12;

/// Tolerance at which a state documented as "normalized" must satisfy
/// sum |amplitude|^2 = 1.
inline constexpr double kNormTolerance = 1e-9;

/// A composite mode label: spatial port index plus internal label
/// (polarization-like two-level label, or 0 for pure path encoding).
struct ModeIndex {
    int spatial = 0;
    int internal_label = 0;

    friend bool operator==(const ModeIndex& a, const ModeIndex& b) {
        return a.spatial == b.spatial && a.internal_label == b.internal_label;
    }
};

/// Fixes how composite modes map onto flat mode indices:
/// flat = spatial * internal_dim + internal_label, a bijection onto
/// [0, spatial_count * internal_dim).
class ModeLayout {
public:
    ModeLayout(int spatial_count, int internal_dim = 1)
        : spatial_count_(spatial_count), internal_dim_(internal_dim) {
        if (spatial_count < 1 || internal_dim < 1) {
            throw InvalidArgument("ModeLayout requires at least one spatial mode and internal label");
        }
    }

    int spatial_count() const { return spatial_count_; }
    int internal_dim() const { return internal_dim_; }
    int mode_count() const { return spatial_count_ * internal_dim_; }

    int flatten(ModeIndex idx) const {
        if (idx.spatial < 0 || idx.spatial >= spatial_count_ ||
            idx.internal_label < 0 || idx.internal_label >= internal_dim_) {
            throw InvalidArgument("mode index outside layout");
        }
        return idx.spatial * internal_dim_ + idx.internal_label;
    }

    ModeIndex unflatten(int flat) const {
        if (flat < 0 || flat >= mode_count()) {
            throw InvalidArgument("flat mode index outside layout");
        }
        return ModeIndex{flat / internal_dim_, flat % internal_dim_};
    }

private:
    int spatial_count_;
    int internal_dim_;
};

/// Occupation-number basis state. Occupations are stored per flat mode;
/// the photon total is cached.
class FockState {
public:
    FockState() = default;

    explicit FockState(std::vector<std::uint8_t> occupations)
        : occ_(std::move(occupations)) {
        recompute_total();
    }

    explicit FockState(const std::vector<int>& occupations) {
        occ_.reserve(occupations.size());
        for (int n : occupations) {
            if (n < 0 || n > 255) throw InvalidArgument("occupation outside [0, 255]");
            occ_.push_back(static_cast<std::uint8_t>(n));
        }
        recompute_total();
    }

    static FockState zero(int mode_count) {
        return FockState(std::vector<std::uint8_t>(static_cast<std::size_t>(mode_count), 0));
    }

    int mode_count() const { return static_cast<int>(occ_.size()); }
    int total_photons() const { return total_; }
    int occupation(int mode) const { return occ_[static_cast<std::size_t>(mode)]; }
    const std::vector<std::uint8_t>& occupations() const { return occ_; }

    /// Copy with one occupation replaced.
    FockState with_occupation(int mode, int value) const {
        if (value < 0 || value > 255) throw InvalidArgument("occupation outside [0, 255]");
        FockState s = *this;
        s.total_ += value - s.occ_[static_cast<std::size_t>(mode)];
        s.occ_[static_cast<std::size_t>(mode)] = static_cast<std::uint8_t>(value);
        return s;
    }

    /// Copy keeping only the listed modes, in the given order.
    FockState restricted_to(const std::vector<int>& modes) const {
        std::vector<std::uint8_t> kept;
        kept.reserve(modes.size());
        for (int m : modes) kept.push_back(occ_[static_cast<std::size_t>(m)]);
        return FockState(std::move(kept));
    }

    friend bool operator==(const FockState& a, const FockState& b) { return a.occ_ == b.occ_; }
    /// Lexicographic on the occupation vector; the canonical term order.
    friend bool operator<(const FockState& a, const FockState& b) { return a.occ_ < b.occ_; }

    std::string to_string() const {
        std::ostringstream os;
        os << "|";
        for (std::size_t i = 0; i < occ_.size(); ++i) {
            if (i) os << ",";
            os << static_cast<int>(occ_[i]);
        }
        os << "\xE2\x9F\xA9";  // U+27E9, closing angle bracket of the ket
        return os.str();
    }

private:
    void recompute_total() {
        total_ = 0;
        for (std::uint8_t n : occ_) total_ += n;
    }

    std::vector<std::uint8_t> occ_;
    int total_ = 0;
};

struct FockStateHash {
    std::size_t operator()(const FockState& s) const {
        // FNV-1a over the occupation bytes.
        std::size_t h = 1469598103934665603ull;
        for (std::uint8_t b : s.occupations()) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Sparse quantum state: map from Fock basis states to complex amplitudes.
/// All stored states share the declared mode count.
class StateVector {
public:
    using TermMap = std::unordered_map<FockState, Amplitude, FockStateHash>;

    explicit StateVector(int mode_count) : mode_count_(mode_count) {
        if (mode_count < 1) throw InvalidArgument("StateVector requires mode_count >= 1");
    }

    int mode_count() const { return mode_count_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    Amplitude amplitude(const FockState& basis) const {
        auto it = terms_.find(basis);
        return it == terms_.end() ? Amplitude{0.0, 0.0} : it->second;
    }

    void accumulate(const FockState& basis, Amplitude amp) {
        if (basis.mode_count() != mode_count_) {
            throw InvalidArgument("Fock term length does not match state mode count");
        }
        norm_cache_.reset();
        auto [it, inserted] = terms_.try_emplace(basis, amp);
        if (!inserted) it->second += amp;
    }

    void prune(double threshold = kPruneThreshold) {
        norm_cache_.reset();
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) < threshold) {
                it = terms_.erase(it);
            } else {
                ++it;
            }
        }
    }

    void scale(Amplitude factor) {
        norm_cache_.reset();
        for (auto& [basis, amp] : terms_) amp *= factor;
    }

    /// sqrt(sum |amplitude|^2); cached until the state is next mutated.
    double norm() const {
        if (!norm_cache_) {
            double sq = 0.0;
            for (const auto& [basis, amp] : terms_) sq += std::norm(amp);
            norm_cache_ = std::sqrt(sq);
        }
        return *norm_cache_;
    }

    StateVector normalized() const {
        const double n = norm();
        if (n <= 0.0) throw InvalidArgument("cannot normalize a zero state");
        StateVector out = *this;
        out.scale(1.0 / n);
        return out;
    }

    /// Terms in canonical (lexicographic) order; used wherever
    /// deterministic output matters.
    std::vector<std::pair<FockState, Amplitude>> sorted_terms() const {
        std::vector<std::pair<FockState, Amplitude>> v(terms_.begin(), terms_.end());
        std::sort(v.begin(), v.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        return v;
    }

private:
    int mode_count_;
    TermMap terms_;
    mutable std::optional<double> norm_cache_;
};

/// The vacuum: a single all-zero term with amplitude 1.
inline StateVector vacuum(int mode_count) {
    StateVector s(mode_count);
    s.accumulate(FockState::zero(mode_count), Amplitude{1.0, 0.0});
    return s;
}

/// Normalized number state |n1,n2,...,nM> for the given occupations.
inline StateVector product_input(const std::vector<int>& occupations) {
    StateVector s(static_cast<int>(occupations.size()));
    s.accumulate(FockState(occupations), Amplitude{1.0, 0.0});
    return s;
}

inline double norm(const StateVector& state) { return state.norm(); }

/// <a|b> = sum over shared terms of conj(a) * b.
inline Amplitude inner_product(const StateVector& a, const StateVector& b) {
    if (a.mode_count() != b.mode_count()) {
        throw InvalidArgument("inner_product requires equal mode counts");
    }
    const StateVector& small = a.term_count() <= b.term_count() ? a : b;
    const StateVector& large = a.term_count() <= b.term_count() ? b : a;
    Amplitude sum{0.0, 0.0};
    for (const auto& [basis, amp] : small.terms()) {
        const Amplitude other = large.amplitude(basis);
        if (&small == &a) {
            sum += std::conj(amp) * other;
        } else {
            sum += std::conj(other) * amp;
        }
    }
    return sum;
}

/// Tensor product; modes of `a` come first.
inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
    StateVector out(a.mode_count() + b.mode_count());
    for (const auto& [fa, aa] : a.terms()) {
        for (const auto& [fb, ab] : b.terms()) {
            std::vector<std::uint8_t> occ = fa.occupations();
            occ.insert(occ.end(), fb.occupations().begin(), fb.occupations().end());
            out.accumulate(FockState(std::move(occ)), aa * ab);
        }
    }
    return out;
}

/// Canonical text form, one term per line, lexicographically sorted:
///   |n1,n2,...,nM> : re,im
inline std::string to_canonical_text(const StateVector& state) {
    std::ostringstream os;
    for (const auto& [basis, amp] : state.sorted_terms()) {
        os << basis.to_string() << " : " << format_real(amp.real()) << ","
           << format_real(amp.imag()) << "\n";
    }
    return os.str();
}

}  // namespace heraldsim

#endif  // HERALDSIM_FOCK_HPP
