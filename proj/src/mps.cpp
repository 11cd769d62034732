#include "qlg/mps.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

namespace qlg {

std::int64_t MpsState::bond_dim(int bond) const {
    if (bond < 0 || bond > n()) throw validation_error("bond index out of range");
    if (bond == n()) return tensors.back().dim(2);
    return tensors[static_cast<std::size_t>(bond)].dim(0);
}

std::int64_t MpsState::max_bond_dim() const {
    std::int64_t m = 1;
    for (const auto& t : tensors) m = std::max(m, t.dim(2));
    return m;
}

MpsState product_mps(const std::vector<Eigen::Vector2cd>& local_states) {
    if (local_states.empty()) throw validation_error("product_mps: empty chain");
    MpsState psi;
    for (const auto& v : local_states) {
        DenseTensor t({1, 2, 1});
        t.at({0, 0, 0}) = v[0];
        t.at({0, 1, 0}) = v[1];
        psi.tensors.push_back(std::move(t));
    }
    psi.lambdas.assign(local_states.size() + 1, VectorXd::Ones(1));
    psi.center = 0;
    canonicalize(psi);
    return psi;
}

MpsState all_up_mps(int n) {
    return product_mps(std::vector<Eigen::Vector2cd>(static_cast<std::size_t>(n),
                                                     Eigen::Vector2cd(1.0, 0.0)));
}

MpsState neel_mps(int n) {
    std::vector<Eigen::Vector2cd> s;
    for (int i = 0; i < n; ++i)
        s.push_back(i % 2 == 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0));
    return product_mps(s);
}

MpsState random_mps(int n, std::int64_t chi, std::uint64_t seed) {
    if (n < 1) throw validation_error("random_mps: n must be >= 1");
    if (chi < 1) throw validation_error("random_mps: chi must be >= 1");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0) * 2.0 - 1.0;
    };
    MpsState psi;
    std::int64_t dl = 1;
    for (int i = 0; i < n; ++i) {
        // bond dims grow/shrink like an exact state's, capped at chi
        const std::int64_t max_left = std::int64_t{1} << std::min(i, 30);
        const std::int64_t max_right = std::int64_t{1} << std::min(n - 1 - i, 30);
        const std::int64_t dr = std::min({chi, 2 * dl, max_right});
        (void)max_left;
        DenseTensor t({dl, 2, dr});
        for (std::int64_t j = 0; j < t.size(); ++j) t.data()[j] = cdouble(uniform(), uniform());
        psi.tensors.push_back(std::move(t));
        dl = dr;
    }
    psi.lambdas.assign(static_cast<std::size_t>(n) + 1, VectorXd::Ones(1));
    psi.center = 0;
    canonicalize(psi);
    return psi;
}

double canonicalize(MpsState& psi, std::int64_t chi_max, double cutoff) {
    const int n = psi.n();
    if (n == 0) throw validation_error("canonicalize: empty state");
    psi.lambdas.assign(static_cast<std::size_t>(n) + 1, VectorXd::Ones(1));

    // left-orthogonalize: QR down the chain
    for (int i = 0; i + 1 < n; ++i) {
        DenseTensor& t = psi.tensors[static_cast<std::size_t>(i)];
        const std::int64_t dl = t.dim(0), dr = t.dim(2);
        MatrixXcd m = t.matricize(2);  // (dl*2) x dr
        Eigen::HouseholderQR<MatrixXcd> qr(m);
        const std::int64_t k = std::min(dl * 2, dr);
        MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(dl * 2, k);
        MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        std::vector<cdouble> qd(static_cast<std::size_t>(q.rows() * q.cols()));
        for (std::int64_t rr = 0; rr < q.rows(); ++rr)
            for (std::int64_t cc = 0; cc < q.cols(); ++cc)
                qd[static_cast<std::size_t>(rr * q.cols() + cc)] = q(rr, cc);
        t = DenseTensor({dl, 2, k}, std::move(qd));
        // push r into the next tensor
        DenseTensor& nxt = psi.tensors[static_cast<std::size_t>(i + 1)];
        const DenseTensor rt = DenseTensor::from_matrix(r);
        psi.tensors[static_cast<std::size_t>(i + 1)] = contract(rt, nxt, {{1, 0}});
    }

    // right-to-left SVD sweep: capture Schmidt spectra, truncate, normalize
    double norm_in = 0.0;
    for (int i = n - 1; i > 0; --i) {
        DenseTensor& t = psi.tensors[static_cast<std::size_t>(i)];
        const std::int64_t dl = t.dim(0), dr = t.dim(2);
        const MatrixXcd m = t.matricize(1);  // dl x (2*dr)
        auto r = svd_truncate(m, chi_max, cutoff);
        psi.cumulative_truncation += r.report.discarded_weight;
        const std::int64_t k = r.report.kept;
        std::vector<cdouble> vd(static_cast<std::size_t>(k * 2 * dr));
        for (std::int64_t rr = 0; rr < k; ++rr)
            for (std::int64_t cc = 0; cc < 2 * dr; ++cc)
                vd[static_cast<std::size_t>(rr * 2 * dr + cc)] = r.v(rr, cc);
        t = DenseTensor({k, 2, dr}, std::move(vd));
        const double snorm = r.s.norm();
        psi.lambdas[static_cast<std::size_t>(i)] = snorm > 0 ? (r.s / snorm).eval() : r.s;
        // U * S folds into the left neighbor
        MatrixXcd us = r.u * r.s.asDiagonal();
        DenseTensor& prev = psi.tensors[static_cast<std::size_t>(i - 1)];
        const DenseTensor ust = DenseTensor::from_matrix(us);
        prev = contract(prev, ust, {{2, 0}});
    }
    norm_in = psi.tensors[0].frobenius_norm();
    if (norm_in > 0) psi.tensors[0] *= cdouble(1.0 / norm_in, 0.0);
    psi.center = 0;
    return norm_in;
}

cdouble overlap(const MpsState& a, const MpsState& b) {
    if (a.n() != b.n()) throw validation_error("overlap: chain length mismatch");
    MatrixXcd env = MatrixXcd::Ones(1, 1);
    for (int i = 0; i < a.n(); ++i) {
        const DenseTensor& ta = a.tensors[static_cast<std::size_t>(i)];
        const DenseTensor& tb = b.tensors[static_cast<std::size_t>(i)];
        if (ta.dim(0) != env.rows() || tb.dim(0) != env.cols())
            throw shape_error("overlap: inconsistent bond dimensions");
        MatrixXcd next = MatrixXcd::Zero(ta.dim(2), tb.dim(2));
        // next = sum_s (A^s)^dagger env B^s
        for (std::int64_t s = 0; s < 2; ++s) {
            MatrixXcd as(ta.dim(0), ta.dim(2)), bs(tb.dim(0), tb.dim(2));
            for (std::int64_t l = 0; l < ta.dim(0); ++l)
                for (std::int64_t r = 0; r < ta.dim(2); ++r)
                    as(l, r) = ta.values()[static_cast<std::size_t>((l * 2 + s) * ta.dim(2) + r)];
            for (std::int64_t l = 0; l < tb.dim(0); ++l)
                for (std::int64_t r = 0; r < tb.dim(2); ++r)
                    bs(l, r) = tb.values()[static_cast<std::size_t>((l * 2 + s) * tb.dim(2) + r)];
            next += as.adjoint() * env * bs;
        }
        env = std::move(next);
    }
    return env(0, 0);
}

MpsState apply_site_op(const MpsState& psi, int k, Axis mu) {
    if (k < 0 || k >= psi.n()) throw validation_error("apply_site_op: site out of range");
    MpsState out = psi;
    const MatrixXcd p = pauli(mu);
    DenseTensor& t = out.tensors[static_cast<std::size_t>(k)];
    const std::int64_t dl = t.dim(0), dr = t.dim(2);
    DenseTensor nt({dl, 2, dr});
    for (std::int64_t l = 0; l < dl; ++l)
        for (std::int64_t s = 0; s < 2; ++s)
            for (std::int64_t r = 0; r < dr; ++r) {
                cdouble acc{0, 0};
                for (std::int64_t s2 = 0; s2 < 2; ++s2)
                    acc += p(s, s2) * t.values()[static_cast<std::size_t>((l * 2 + s2) * dr + r)];
                nt.data()[(l * 2 + s) * dr + r] = acc;
            }
    t = std::move(nt);
    return out;
}

cdouble mpo_expectation(const Mpo& mpo, const MpsState& psi) {
    if (mpo.n_sites != psi.n()) throw validation_error("mpo_expectation: length mismatch");
    // env indexed (bra bond, mpo bond, ket bond), flattened as a DenseTensor
    DenseTensor env({1, 1, 1});
    env.at({0, 0, 0}) = 1.0;
    for (int i = 0; i < psi.n(); ++i) {
        const DenseTensor& t = psi.tensors[static_cast<std::size_t>(i)];
        const DenseTensor& w = mpo.w[static_cast<std::size_t>(i)];
        // env(a,b,c) * conj(T)(a,s,a') -> (b,c,s,a')
        DenseTensor x = contract(env, t.conj(), {{0, 0}});
        // x(b,c,s,a') * W(b,b',s,s') -> (c,a',b',s')
        DenseTensor y = contract(x, w, {{0, 0}, {2, 2}});
        // y(c,a',b',s') * T(c,s',c') -> (a',b',c')
        env = contract(y, t, {{0, 0}, {3, 1}});
    }
    return env.values()[0];
}

MpsState mpo_apply(const Mpo& mpo, const MpsState& psi) {
    if (mpo.n_sites != psi.n()) throw validation_error("mpo_apply: length mismatch");
    MpsState out;
    out.center = 0;
    for (int i = 0; i < psi.n(); ++i) {
        const DenseTensor& t = psi.tensors[static_cast<std::size_t>(i)];
        const DenseTensor& w = mpo.w[static_cast<std::size_t>(i)];
        // W(b,b',s,s') * T(l,s',r) -> (b,s,b',l,r) -> ((b l), s, (b' r))
        DenseTensor x = contract(w, t, {{3, 1}});  // (b, b', s, l, r)
        const std::vector<int> perm{0, 3, 2, 1, 4};
        x = x.permute(perm);  // (b, l, s, b', r)
        out.tensors.push_back(
            x.reshape({x.dim(0) * x.dim(1), 2, x.dim(3) * x.dim(4)}));
    }
    out.lambdas.assign(static_cast<std::size_t>(psi.n()) + 1, VectorXd::Ones(1));
    return out;
}

VectorXcd mps_to_dense(const MpsState& psi) {
    if (psi.n() > 14) throw resource_error("mps_to_dense: limited to n <= 14");
    MatrixXcd acc = MatrixXcd::Ones(1, 1);  // (configurations so far) x (bond)
    for (int i = 0; i < psi.n(); ++i) {
        const DenseTensor& t = psi.tensors[static_cast<std::size_t>(i)];
        const std::int64_t dl = t.dim(0), dr = t.dim(2);
        MatrixXcd next(acc.rows() * 2, dr);
        const MatrixXcd m = t.matricize(1);  // dl x (2 dr)
        for (std::int64_t s = 0; s < 2; ++s)
            next.block(s * acc.rows(), 0, acc.rows(), dr) = acc * m.block(0, s * dr, dl, dr);
        // rows must keep the basis order "site 0 most significant": configuration
        // index c*2+s, i.e. earlier sites vary slowest
        MatrixXcd reordered(next.rows(), dr);
        for (std::int64_t c = 0; c < acc.rows(); ++c)
            for (std::int64_t s = 0; s < 2; ++s) reordered.row(c * 2 + s) = next.row(s * acc.rows() + c);
        acc = std::move(reordered);
    }
    return acc.col(0);
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

constexpr char kMagic[8] = {'Q', 'L', 'G', 'M', 'P', 'S', '1', '\0'};

template <typename T>
void put(std::string& buf, const T& v) {
    buf.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw validation_error("mps_load: truncated checkpoint");
    return v;
}

}  // namespace

std::uint64_t mps_content_hash(const MpsState& psi) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& t : psi.tensors) {
        for (std::int64_t d : t.shape()) h = fnv1a64(&d, sizeof(d), h);
        h = fnv1a64(t.data(), sizeof(cdouble) * static_cast<std::size_t>(t.size()), h);
    }
    return h;
}

void mps_save(const std::string& path, const MpsState& psi) {
    std::string buf;
    buf.append(kMagic, sizeof(kMagic));
    put<std::uint32_t>(buf, 1);  // format version
    put<std::int32_t>(buf, psi.n());
    put<std::int32_t>(buf, psi.center);
    put<double>(buf, psi.cumulative_truncation);
    for (const auto& t : psi.tensors) {
        put<std::int32_t>(buf, static_cast<std::int32_t>(t.rank()));
        for (std::int64_t d : t.shape()) put<std::int64_t>(buf, d);
        buf.append(reinterpret_cast<const char*>(t.data()),
                   sizeof(cdouble) * static_cast<std::size_t>(t.size()));
    }
    for (const auto& l : psi.lambdas) {
        put<std::int64_t>(buf, l.size());
        buf.append(reinterpret_cast<const char*>(l.data()),
                   sizeof(double) * static_cast<std::size_t>(l.size()));
    }
    const std::uint64_t h = fnv1a64(buf.data(), buf.size());
    put<std::uint64_t>(buf, h);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw validation_error("mps_save: cannot open '" + path + "'");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

MpsState mps_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("mps_load: cannot open '" + path + "'");
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (all.size() < sizeof(kMagic) + 8 || std::memcmp(all.data(), kMagic, sizeof(kMagic)) != 0)
        throw validation_error("mps_load: not a checkpoint file");
    std::uint64_t stored;
    std::memcpy(&stored, all.data() + all.size() - 8, 8);
    if (fnv1a64(all.data(), all.size() - 8) != stored)
        throw validation_error("mps_load: checkpoint content hash mismatch");

    std::ifstream s(path, std::ios::binary);
    s.seekg(sizeof(kMagic));
    const auto version = take<std::uint32_t>(s);
    if (version != 1) throw validation_error("mps_load: unsupported format version");
    const auto n = take<std::int32_t>(s);
    MpsState psi;
    psi.center = take<std::int32_t>(s);
    psi.cumulative_truncation = take<double>(s);
    for (int i = 0; i < n; ++i) {
        const auto rank = take<std::int32_t>(s);
        std::vector<std::int64_t> shape;
        for (int d = 0; d < rank; ++d) shape.push_back(take<std::int64_t>(s));
        std::int64_t sz = 1;
        for (auto d : shape) sz *= d;
        std::vector<cdouble> data(static_cast<std::size_t>(sz));
        s.read(reinterpret_cast<char*>(data.data()), sizeof(cdouble) * data.size());
        psi.tensors.emplace_back(std::move(shape), std::move(data));
    }
    for (int i = 0; i <= n; ++i) {
        const auto len = take<std::int64_t>(s);
        VectorXd l(len);
        s.read(reinterpret_cast<char*>(l.data()), sizeof(double) * static_cast<std::size_t>(len));
        psi.lambdas.push_back(std::move(l));
    }
    return psi;
}

}  // namespace qlg
