#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "qlg/ed.hpp"
#include "qlg/model.hpp"

using namespace qlg;

namespace {

SpinHamiltonian random_general(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::tuple<Axis, int, int, double>> cs;
    std::vector<std::tuple<Axis, int, double>> fs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (Axis a : {Axis::X, Axis::Y, Axis::Z}) cs.emplace_back(a, i, j, u(rng));
    for (int i = 0; i < n; ++i)
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) fs.emplace_back(a, i, u(rng));
    return build_general(n, cs, fs);
}

MatrixXcd kron_chain_op(int n, int site, const MatrixXcd& op) {
    MatrixXcd m = MatrixXcd::Identity(1, 1);
    for (int i = 0; i < n; ++i) {
        const MatrixXcd& cur = (i == site) ? op : MatrixXcd::Identity(2, 2);
        MatrixXcd next(m.rows() * cur.rows(), m.cols() * cur.cols());
        for (std::int64_t r = 0; r < m.rows(); ++r)
            for (std::int64_t c = 0; c < m.cols(); ++c)
                next.block(r * cur.rows(), c * cur.cols(), cur.rows(), cur.cols()) = m(r, c) * cur;
        m = next;
    }
    return m;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("sigma_z sigma_z coupling is diagonal in the documented basis order") {
    const auto h = build_general(2, {{Axis::Z, 0, 1, 1.0}}, {});
    const MatrixXcd d = to_dense(h);
    MatrixXcd expect = MatrixXcd::Zero(4, 4);
    expect.diagonal() << 1, -1, -1, 1;  // {uu, ud, du, dd}
    CHECK((d - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("single-site transverse field gives pauli-x") {
    const auto h = build_general(1, {}, {{Axis::X, 0, 1.0}});
    CHECK((to_dense(h) - pauli(Axis::X)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("random coefficients give a hermitian traceless dense form") {
    auto h = random_general(3, 123);
    h.fields.clear();  // pure two-site couplings
    const MatrixXcd d = to_dense(h);
    CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(d.trace()) < 1e-12);
}

TEST_CASE("coefficient round-trip and absent entries read as zero") {
    const auto h = build_general(4, {{Axis::Y, 2, 0, 0.25}}, {{Axis::Z, 3, -0.5}});
    CHECK(h.coupling(Axis::Y, 0, 2) == 0.25);
    CHECK(h.coupling(Axis::Y, 2, 0) == 0.25);
    CHECK(h.coupling(Axis::X, 0, 2) == 0.0);
    CHECK(h.field(Axis::Z, 3) == -0.5);
    CHECK(h.field(Axis::Z, 0) == 0.0);
    CHECK_THROWS_AS(build_general(2, {{Axis::X, 0, 2, 1.0}}, {}), validation_error);
    CHECK_THROWS_AS(build_general(2, {{Axis::X, 1, 1, 1.0}}, {}), validation_error);
}

TEST_CASE("two-site heisenberg spectrum is singlet -3, triplet +1") {
    const auto h = build_xxz(2, 1.0, 1.0);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(to_dense(h));
    CHECK(es.eigenvalues()[0] == doctest::Approx(-3.0));
    for (int i = 1; i < 4; ++i) CHECK(es.eigenvalues()[i] == doctest::Approx(1.0));
}

TEST_CASE("xxz at delta=0 has no z couplings") {
    const auto h = build_xxz(6, 1.0, 0.0);
    for (int i = 0; i + 1 < 6; ++i) CHECK(h.coupling(Axis::Z, i, i + 1) == 0.0);
    CHECK_THROWS_AS(build_xxz(1, 1.0, 0.0), validation_error);
}

TEST_CASE("ferromagnetic xxz ground energy is the polarized-state energy") {
    const auto gs = ed_ground(build_xxz(10, 1.0, -1.5));
    CHECK(gs.e0 == doctest::Approx(-13.5).epsilon(1e-12));  // j*delta*(N-1)
    CHECK(gs.degeneracy_gap < 1e-10);
    CHECK(std::abs(gs.psi0[0]) == doctest::Approx(1.0).epsilon(1e-8));  // |up...up>
}

TEST_CASE("xy at gamma=1 is the transverse-field ising chain") {
    const auto h = build_xy(6, 1.0, 1.0, 0.3);
    for (int i = 0; i + 1 < 6; ++i) {
        CHECK(h.coupling(Axis::Y, i, i + 1) == 0.0);
        CHECK(h.coupling(Axis::X, i, i + 1) == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(build_xy(6, 1.0, 1.5, 0.3), validation_error);
}

TEST_CASE("xy at gamma=0 matches the xx chain at half the coupling") {
    // XY(gamma=0) carries J_x = J_y = j/2, so it coincides with XXZ(delta=0)
    // built at coupling j/2.
    const MatrixXcd a = to_dense(build_xy(5, 1.0, 0.0, 0.0));
    const MatrixXcd b = to_dense(build_xxz(5, 0.5, 0.0));
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("xy regression fixture: n=8 gamma=0.5 nu=1") {
    const auto h = build_xy(8, 1.0, 0.5, 1.0);
    CHECK(h.info.nu.value() == doctest::Approx(1.0));
    const auto gs = ed_ground(h);
    CHECK(gs.e0 == doctest::Approx(-8.559937047941535).epsilon(1e-12));
}

TEST_CASE("fk for xxz mu=z doubles the x/y couplings touching k") {
    const auto h = build_xxz(6, 1.0, 0.7);
    const auto f = build_fk(h, 3, Axis::Z);
    CHECK(f.coupling(Axis::X, 2, 3) == doctest::Approx(2.0));
    CHECK(f.coupling(Axis::X, 3, 4) == doctest::Approx(2.0));
    CHECK(f.coupling(Axis::Y, 2, 3) == doctest::Approx(2.0));
    CHECK(f.coupling(Axis::Z, 2, 3) == 0.0);    // alpha = mu excluded
    CHECK(f.coupling(Axis::X, 1, 2) == 0.0);    // does not touch k
    CHECK(f.fields.empty());
}

TEST_CASE("fk vanishes when only the mu field acts on k") {
    SpinHamiltonian h;
    h.n_sites = 1;
    h.fields[{static_cast<int>(Axis::Z), 0}] = 0.8;
    const auto f = build_fk(h, 0, Axis::Z);
    CHECK(f.couplings.empty());
    CHECK(f.fields.empty());
}

TEST_CASE("conjugation identity holds as a matrix identity") {
    const auto h = build_xxz(6, 1.0, 0.5);
    for (Axis mu : {Axis::X, Axis::Y, Axis::Z})
        CHECK(conjugation_identity_check(h, 3, mu) < 1e-12);
    CHECK(conjugation_identity_check(random_general(5, 7), 2, Axis::Y) < 1e-12);
}

TEST_CASE("mpo expectation on the all-up state: xxz") {
    const auto h = build_xxz(4, 1.0, 0.7);
    const MatrixXcd d = to_dense(h);
    CHECK(d(0, 0).real() == doctest::Approx(3 * 0.7));  // J*delta*(N-1), diagonal term
}

TEST_CASE("ising mpo expectation cross-checked against dense") {
    // note: sigma^x sigma^x has zero diagonal, so <up...up|H|up...up> = 4*bz
    const auto h = build_xy(4, 1.0, 1.0, 0.9);
    const MatrixXcd d = to_dense(h);
    CHECK(d(0, 0).real() == doctest::Approx(4 * 0.9));
}

TEST_CASE("mpo bond dimension stays within 5 and rejects long-range terms") {
    CHECK(to_mpo(build_xxz(8, 1.0, 0.3)).max_bond() <= 5);
    CHECK(to_mpo(build_xy(8, 1.0, 0.5, 0.2)).max_bond() <= 5);
    const auto lr = build_general(5, {{Axis::X, 0, 3, 1.0}}, {});
    CHECK_THROWS_AS(to_mpo(lr), unsupported_error);
}

TEST_CASE("to_dense guards the 2^14 cap") {
    SpinHamiltonian h;
    h.n_sites = 15;
    h.fields[{static_cast<int>(Axis::Z), 0}] = 1.0;
    CHECK_THROWS_AS(to_dense(h), resource_error);
}

TEST_CASE("matrix-free kernels agree with the dense matrix and each other") {
    const auto h = random_general(8, 99);
    const auto ch = compile_terms(h);
    const MatrixXcd d = to_dense(h);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VectorXcd v(256);
    for (int i = 0; i < 256; ++i) v[i] = cdouble(u(rng), u(rng));
    VectorXcd serial(256), parallel(256);
    kernels::apply_hamiltonian_serial(ch, v.data(), serial.data());
    kernels::apply_hamiltonian_omp(ch, v.data(), parallel.data());
    CHECK((serial - d * v).norm() < 1e-10 * serial.norm());
    // the omp kernel writes each entry from exactly one iteration: bit-identical
    for (int i = 0; i < 256; ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("xxz dense form commutes with the total z magnetization") {
    const auto h = build_xxz(6, 1.0, 0.37);
    const MatrixXcd d = to_dense(h);
    MatrixXcd sz_tot = MatrixXcd::Zero(64, 64);
    for (int i = 0; i < 6; ++i) sz_tot += kron_chain_op(6, i, pauli(Axis::Z));
    CHECK((d * sz_tot - sz_tot * d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("xxz dense form is invariant under the global spin flip") {
    const auto h = build_xxz(6, 1.0, -0.8);
    const MatrixXcd d = to_dense(h);
    MatrixXcd flip = MatrixXcd::Identity(64, 64);
    for (int i = 0; i < 6; ++i) flip = kron_chain_op(6, i, pauli(Axis::X)) * flip;
    CHECK((flip * d * flip - d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("su(2) symmetry at delta = +-1") {
    for (double delta : {1.0, -1.0}) {
        const MatrixXcd d = to_dense(build_xxz(5, 1.0, delta));
        for (Axis a : {Axis::X, Axis::Y}) {
            MatrixXcd tot = MatrixXcd::Zero(32, 32);
            for (int i = 0; i < 5; ++i) tot += kron_chain_op(5, i, pauli(a));
            CHECK((d * tot - tot * d).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("hamiltonian reassembles from coefficient times pauli-string pieces") {
    const auto h = random_general(4, 321);
    const std::int64_t dim = 16;
    MatrixXcd sum = MatrixXcd::Zero(dim, dim);
    for (const auto& [key, val] : h.couplings) {
        const auto& [a, i, j] = key;
        sum += val * (kron_chain_op(4, i, pauli(static_cast<Axis>(a))) *
                      kron_chain_op(4, j, pauli(static_cast<Axis>(a))));
    }
    for (const auto& [key, val] : h.fields) {
        const auto& [a, i] = key;
        sum += val * kron_chain_op(4, i, pauli(static_cast<Axis>(a)));
    }
    CHECK((sum - to_dense(h)).cwiseAbs().maxCoeff() < 1e-12);
}

}  // TEST_SUITE
