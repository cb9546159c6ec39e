#include "trotter/kernels.hpp"

#include <array>

namespace trotter::kernels {

namespace {

constexpr Eigen::Index PARALLEL_MIN_OUTER = Eigen::Index(1) << 9;

void check_support(Eigen::Index dim, int L, const std::vector<int>& sites, const Mat& gate) {
    if (dim != (Eigen::Index(1) << L))
        throw std::invalid_argument("apply_local: amplitude length is not 2^L");
    const int k = int(sites.size());
    if (k < 1 || k > 3) throw std::invalid_argument("apply_local: support size must be 1..3");
    for (int i = 0; i < k; ++i) {
        if (sites[i] < 1 || sites[i] > L)
            throw std::out_of_range("apply_local: site index out of range");
        if (i > 0 && sites[i] <= sites[i - 1])
            throw std::invalid_argument("apply_local: sites must be strictly ascending");
    }
    if (gate.rows() != (1 << k) || gate.cols() != (1 << k))
        throw std::invalid_argument("apply_local: gate dimension does not match support");
}

// Insert a zero bit at each masked position, lowest position first.
inline Eigen::Index expand_outer(Eigen::Index m, const std::array<int, 3>& asc_pos, int k) {
    for (int i = 0; i < k; ++i) {
        const Eigen::Index low = m & ((Eigen::Index(1) << asc_pos[i]) - 1);
        m = ((m >> asc_pos[i]) << (asc_pos[i] + 1)) | low;
    }
    return m;
}

}  // namespace

void apply_local(Vec& amps, int L, const std::vector<int>& sites, const Mat& gate) {
    check_support(amps.size(), L, sites, gate);
    const int k = int(sites.size());
    const int m_dim = 1 << k;

    // Site j occupies bit (L - j); sites ascending means positions descending.
    // Local index convention: sites[0] is the local MSB.
    std::array<Eigen::Index, 8> off{};
    std::array<int, 3> asc_pos{};
    for (int i = 0; i < k; ++i) asc_pos[i] = L - sites[k - 1 - i];
    for (int il = 0; il < m_dim; ++il) {
        Eigen::Index o = 0;
        for (int i = 0; i < k; ++i)
            o |= Eigen::Index((il >> (k - 1 - i)) & 1) << (L - sites[i]);
        off[size_t(il)] = o;
    }

    std::array<cxd, 64> g{};
    for (int r = 0; r < m_dim; ++r)
        for (int c = 0; c < m_dim; ++c) g[size_t(r * m_dim + c)] = gate(r, c);

    const Eigen::Index n_outer = Eigen::Index(1) << (L - k);
    cxd* a = amps.data();

    auto process = [&](Eigen::Index m) {
        const Eigen::Index base = expand_outer(m, asc_pos, k);
        std::array<cxd, 8> in{};
        for (int il = 0; il < m_dim; ++il) in[size_t(il)] = a[base + off[size_t(il)]];
        for (int r = 0; r < m_dim; ++r) {
            cxd acc{0.0, 0.0};
            const cxd* row = &g[size_t(r * m_dim)];
            for (int c = 0; c < m_dim; ++c) acc += row[c] * in[size_t(c)];
            a[base + off[size_t(r)]] = acc;
        }
    };

    if (n_outer >= PARALLEL_MIN_OUTER) {
#pragma omp parallel for schedule(static)
        for (Eigen::Index m = 0; m < n_outer; ++m) process(m);
    } else {
        for (Eigen::Index m = 0; m < n_outer; ++m) process(m);
    }
}

namespace serial {

void apply_local(Vec& amps, int L, const std::vector<int>& sites, const Mat& gate) {
    check_support(amps.size(), L, sites, gate);
    const int k = int(sites.size());
    const int m_dim = 1 << k;
    const Vec in = amps;

    for (Eigen::Index gidx = 0; gidx < in.size(); ++gidx) {
        int row = 0;
        for (int i = 0; i < k; ++i)
            row = (row << 1) | int((gidx >> (L - sites[i])) & 1);
        cxd acc{0.0, 0.0};
        for (int col = 0; col < m_dim; ++col) {
            Eigen::Index src = gidx;
            for (int i = 0; i < k; ++i) {
                const Eigen::Index bit = Eigen::Index(1) << (L - sites[i]);
                if ((col >> (k - 1 - i)) & 1)
                    src |= bit;
                else
                    src &= ~bit;
            }
            acc += gate(row, col) * in(src);
        }
        amps(gidx) = acc;
    }
}

}  // namespace serial

}  // namespace trotter::kernels
