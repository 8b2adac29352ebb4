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
 * Unitary mode transformations for linear-optical networks.
 *
 * Entry (k, l) is the transition amplitude from input mode k to output
 * mode l, i.e. creation operators map as a_k^dag -> sum_l U(k,l) b_l^dag.
 * In this convention, sending a state through `first` and then `second`
 * is described by the matrix product first * second; `compose` fixes
 * exactly that order and a regression test pins it with two
 * non-commuting beam splitters.
 */

#ifndef HERALDSIM_UNITARY_HPP
#define HERALDSIM_UNITARY_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "heraldsim/errors.hpp"
#include "heraldsim/fock.hpp"

namespace heraldsim {

/// Elementwise tolerance for U * U^dag = I.
inline constexpr double kUnitarityTolerance = 1e-10;

/// How a Unitary was built; carried along through embeddings and products.
enum class Provenance { Identity, Dft, Embed, Compose, InternalRotation, Custom };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::Identity: return "identity";
        case Provenance::Dft: return "dft";
        case Provenance::Embed: return "embed";
        case Provenance::Compose: return "compose";
        case Provenance::InternalRotation: return "internal-rotation";
        case Provenance::Custom: return "custom";
    }
    return "unknown";
}

/// max |U U^dag - I| over all entries.
inline double unitarity_defect(const Eigen::MatrixXcd& m) {
    const Eigen::MatrixXcd delta =
        m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return delta.cwiseAbs().maxCoeff();
}

/// A mode transformation with provenance metadata. Immutable in practice:
/// every builder returns a fresh value and validates unitarity.
struct Unitary {
    Eigen::MatrixXcd entries;
    Provenance provenance = Provenance::Custom;
    std::string description;

    int dim() const { return static_cast<int>(entries.rows()); }
};

inline Unitary make_unitary(Eigen::MatrixXcd entries, Provenance provenance,
                            std::string description) {
    if (entries.rows() != entries.cols() || entries.rows() < 1) {
        throw InvalidArgument("unitary must be a square matrix of dimension >= 1");
    }
    const double defect = unitarity_defect(entries);
    if (defect >= kUnitarityTolerance) {
        std::ostringstream os;
        os << "matrix is not unitary (defect " << defect << "): " << description;
        throw InvalidArgument(os.str());
    }
    return Unitary{std::move(entries), provenance, std::move(description)};
}

inline Unitary identity_unitary(int dim) {
    if (dim < 1) throw InvalidArgument("identity_unitary requires dim >= 1");
    return Unitary{Eigen::MatrixXcd::Identity(dim, dim), Provenance::Identity,
                   "identity(" + std::to_string(dim) + ")"};
}

/// Symmetric N-port splitter: the N-dimensional discrete Fourier transform,
/// U(k,l) = exp(i 2 pi k l / N) / sqrt(N) with zero-based k, l.
/// N = 2 is a balanced beam splitter.
inline Unitary dft_unitary(int n) {
    if (n < 1) throw InvalidArgument("dft_unitary requires N >= 1");
    Eigen::MatrixXcd m(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            // Reduce the exponent mod N first so large k*l stay exact.
            const long long e = (static_cast<long long>(k) * l) % n;
            const double arg = 2.0 * std::numbers::pi * static_cast<double>(e) / n;
            m(k, l) = scale * std::complex<double>(std::cos(arg), std::sin(arg));
        }
    }
    return Unitary{std::move(m), Provenance::Dft, "dft(" + std::to_string(n) + ")"};
}

/// Places `u` on the listed modes of a larger system, identity elsewhere.
/// target_modes[i] is where block row/column i lands.
inline Unitary embed(const Unitary& u, const std::vector<int>& target_modes,
                     int total_modes) {
    if (static_cast<int>(target_modes.size()) != u.dim()) {
        throw InvalidArgument("embed: target mode list must match block dimension");
    }
    if (total_modes < u.dim()) {
        throw InvalidArgument("embed: total mode count smaller than block");
    }
    std::vector<bool> seen(static_cast<std::size_t>(total_modes), false);
    for (int m : target_modes) {
        if (m < 0 || m >= total_modes) throw InvalidArgument("embed: target mode out of range");
        if (seen[static_cast<std::size_t>(m)]) throw InvalidArgument("embed: duplicate target mode");
        seen[static_cast<std::size_t>(m)] = true;
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(total_modes, total_modes);
    for (int r = 0; r < u.dim(); ++r) {
        m.row(target_modes[static_cast<std::size_t>(r)]).setZero();
        for (int c = 0; c < u.dim(); ++c) {
            m(target_modes[static_cast<std::size_t>(r)],
              target_modes[static_cast<std::size_t>(c)]) = u.entries(r, c);
        }
    }
    std::ostringstream os;
    os << "embed(" << u.description << " -> [";
    for (std::size_t i = 0; i < target_modes.size(); ++i) {
        if (i) os << ",";
        os << target_modes[i];
    }
    os << "] of " << total_modes << ")";
    return Unitary{std::move(m), Provenance::Embed, os.str()};
}

/// Sequential composition: the state passes through `first`, then `second`.
inline Unitary compose(const Unitary& first, const Unitary& second) {
    if (first.dim() != second.dim()) {
        throw InvalidArgument("compose requires equal dimensions");
    }
    Eigen::MatrixXcd m = first.entries * second.entries;
    const double defect = unitarity_defect(m);
    if (defect >= kUnitarityTolerance) {
        throw InvalidArgument("compose produced a non-unitary matrix");
    }
    return Unitary{std::move(m), Provenance::Compose,
                   "compose(" + first.description + ", " + second.description + ")"};
}

/// Rotates the two internal labels of one spatial mode by a 2x2 unitary,
/// identity on everything else. Used to detect photons in the
/// (|0> +- |1>)/sqrt(2) internal basis: rotate, then count photons.
inline Unitary internal_rotation(int spatial_mode, const Eigen::Matrix2cd& r,
                                 const ModeLayout& layout) {
    if (layout.internal_dim() != 2) {
        throw UnsupportedLayout("internal_rotation requires a two-level internal label");
    }
    Unitary block = make_unitary(r, Provenance::Custom, "internal 2x2");
    const int a = layout.flatten({spatial_mode, 0});
    const int b = layout.flatten({spatial_mode, 1});
    Unitary out = embed(block, {a, b}, layout.mode_count());
    out.provenance = Provenance::InternalRotation;
    out.description = "internal_rotation(spatial " + std::to_string(spatial_mode) + ")";
    return out;
}

/// Lifts a spatial-mode unitary onto a layout with an internal label:
/// acts as `u` on the listed spatial modes identically for every internal
/// label, i.e. the splitter does not see the internal degree of freedom.
inline Unitary lift_spatial(const Unitary& u, const std::vector<int>& spatial_targets,
                            const ModeLayout& layout) {
    if (static_cast<int>(spatial_targets.size()) != u.dim()) {
        throw InvalidArgument("lift_spatial: spatial target list must match block dimension");
    }
    Eigen::MatrixXcd m =
        Eigen::MatrixXcd::Identity(layout.mode_count(), layout.mode_count());
    for (int r = 0; r < u.dim(); ++r) {
        for (int i = 0; i < layout.internal_dim(); ++i) {
            const int row = layout.flatten({spatial_targets[static_cast<std::size_t>(r)], i});
            m.row(row).setZero();
            for (int c = 0; c < u.dim(); ++c) {
                const int col = layout.flatten({spatial_targets[static_cast<std::size_t>(c)], i});
                m(row, col) = u.entries(r, c);
            }
        }
    }
    return Unitary{std::move(m), Provenance::Embed,
                   "lift_spatial(" + u.description + ")"};
}

}  // namespace heraldsim

#endif  // HERALDSIM_UNITARY_HPP
