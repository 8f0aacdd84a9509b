// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nhsyk/errors.hpp"
#include "nhsyk/linalg.hpp"
#include "nhsyk/majorana.hpp"
#include "nhsyk/rng.hpp"

namespace nhsyk {

enum class Mode { NonHermitian = 0, Hermitian = 1, AntiHermitian = 2 };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::NonHermitian: return "non-hermitian";
        case Mode::Hermitian: return "hermitian";
        case Mode::AntiHermitian: return "anti-hermitian";
    }
    return "?";
}

inline Mode mode_from_string(const std::string& s) {
    if (s == "non-hermitian") return Mode::NonHermitian;
    if (s == "hermitian") return Mode::Hermitian;
    if (s == "anti-hermitian") return Mode::AntiHermitian;
    throw InvalidArgument("unknown mode: " + s);
}

struct ModelConfig {
    int n = 0;
    double p = 1.0;
    Mode mode = Mode::NonHermitian;
    std::uint64_t master_seed = 0;
    std::uint64_t realization_index = 0;

    void validate() const {
        if (n < 4 || n % 2 != 0)
            throw InvalidArgument("ModelConfig: N must be even and >= 4");
        if (!(p > 0.0 && p <= 1.0))
            throw InvalidArgument("ModelConfig: p must be in (0, 1]");
    }
};

/// One sampled coupling: indices 1-based with a < b < c < d.
struct Coupling {
    int a, b, c, d;
    double j, m;
};

struct CouplingRealization {
    ModelConfig config;
    std::vector<Coupling> entries;
};

inline std::uint64_t n_choose_4(int n) {
    return static_cast<std::uint64_t>(n) * (n - 1) * (n - 2) * (n - 3) / 24;
}

/// Bernoulli(p) inclusion per index tuple; included couplings get i.i.d.
/// Gaussian J, M with variance 6/(p N^3). The same (seed, index) always
/// draws the same J values regardless of mode; the mode only zeroes J or M.
inline CouplingRealization sample_couplings(const ModelConfig& config) {
    config.validate();
    std::mt19937_64 rng = realization_stream(config.master_seed, config.realization_index);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sigma = std::sqrt(6.0 / (config.p * std::pow(static_cast<double>(config.n), 3)));

    CouplingRealization out;
    out.config = config;
    for (int a = 1; a <= config.n - 3; ++a)
        for (int b = a + 1; b <= config.n - 2; ++b)
            for (int c = b + 1; c <= config.n - 1; ++c)
                for (int d = c + 1; d <= config.n; ++d) {
                    if (unif(rng) >= config.p) continue;
                    double j = sigma * gauss(rng);
                    double m = sigma * gauss(rng);
                    if (config.mode == Mode::Hermitian) m = 0.0;
                    if (config.mode == Mode::AntiHermitian) j = 0.0;
                    out.entries.push_back({a, b, c, d, j, m});
                }
    return out;
}

namespace detail {

inline ColumnMap four_body(const CouplingRealization& c, const MajoranaSet& ms,
                           const Coupling& e) {
    if (e.a < 1 || e.d > ms.n_majoranas() || !(e.a < e.b && e.b < e.c && e.c < e.d))
        throw InvalidArgument("coupling indices out of range");
    return ms.op(e.a - 1)
        .compose(ms.op(e.b - 1))
        .compose(ms.op(e.c - 1))
        .compose(ms.op(e.d - 1));
}

}  // namespace detail

/// H = sum over entries of (J + iM) psi_a psi_b psi_c psi_d, dense L x L.
inline Matrix assemble_hamiltonian(const CouplingRealization& c, const MajoranaSet& ms) {
    const int dim = ms.dim();
    Matrix h = Matrix::Zero(dim, dim);
    for (const Coupling& e : c.entries) {
        const ColumnMap m4 = detail::four_body(c, ms, e);
        const Complex coeff(e.j, e.m);
        for (int col = 0; col < dim; ++col)
            h(m4.row[col], col) += coeff * m4.val[col];
    }
    return h;
}

/// Assemble directly in one parity sector: every 4-body monomial preserves
/// the sector, so the (L/2)^2 block is filled without forming the full H.
inline Matrix assemble_sector(const CouplingRealization& c, const MajoranaSet& ms,
                              const ParityOperator& parity, int sign) {
    const int dim = ms.dim();
    const std::vector<int> idx = parity.sector_indices(sign);
    std::vector<int> pos(dim, -1);
    for (std::size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = static_cast<int>(k);
    Matrix h = Matrix::Zero(idx.size(), idx.size());
    for (const Coupling& e : c.entries) {
        const ColumnMap m4 = detail::four_body(c, ms, e);
        const Complex coeff(e.j, e.m);
        for (int col : idx) {
            const int r = pos[m4.row[col]];
            if (r < 0)
                throw SymmetryViolation("4-body monomial does not preserve parity sector");
            h(r, pos[col]) += coeff * m4.val[col];
        }
    }
    return h;
}

/// Flat text format: header line `# nhsyk-couplings N p mode seed index`,
/// then one `a b c d J M` line per entry.
inline void write_couplings(std::ostream& os, const CouplingRealization& c) {
    os.precision(17);
    os << "# nhsyk-couplings " << c.config.n << ' ' << c.config.p << ' '
       << to_string(c.config.mode) << ' ' << c.config.master_seed << ' '
       << c.config.realization_index << '\n';
    for (const Coupling& e : c.entries)
        os << e.a << ' ' << e.b << ' ' << e.c << ' ' << e.d << ' '
           << e.j << ' ' << e.m << '\n';
}

inline CouplingRealization read_couplings(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw CorruptRecord("empty coupling file");
    std::istringstream hdr(line);
    std::string hash, tag, mode;
    CouplingRealization out;
    hdr >> hash >> tag >> out.config.n >> out.config.p >> mode
        >> out.config.master_seed >> out.config.realization_index;
    if (hash != "#" || tag != "nhsyk-couplings" || hdr.fail())
        throw CorruptRecord("bad coupling header: " + line);
    out.config.mode = mode_from_string(mode);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        Coupling e{};
        ls >> e.a >> e.b >> e.c >> e.d >> e.j >> e.m;
        if (ls.fail()) throw CorruptRecord("bad coupling line: " + line);
        out.entries.push_back(e);
    }
    return out;
}

}  // namespace nhsyk
