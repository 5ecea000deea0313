#include "doctest.h"

#include "oracles.hpp"
#include "stellar/composition.hpp"
#include "stellar/constellation.hpp"
#include "stellar/errors.hpp"
#include "stellar/measures.hpp"

using namespace stellar;

namespace {

SymmetricState qubit_state(double a, double b) {
    VectorXcd d(2);
    d << a, b;
    return SymmetricState(d);
}

}  // namespace

TEST_SUITE("composition") {

TEST_CASE("Bell states from single qubits") {
    const double r = 1 / std::sqrt(2.0);
    // |1> (.) |0> = (|01> + |10>)/sqrt(2)
    const SymmetricState psi_plus = compose(qubit_state(0, 1), qubit_state(1, 0));
    VectorXcd expect = VectorXcd::Zero(4);
    expect << 0, r, r, 0;
    CHECK(std::abs(std::abs(expect.dot(embed_full(psi_plus).amplitudes())) - 1.0) <= 1e-12);

    // |+> (.) |-> = (|00> - |11>)/sqrt(2)
    const SymmetricState phi_minus = compose(qubit_state(r, r), qubit_state(r, -r));
    expect << r, 0, 0, -r;
    CHECK(std::abs(std::abs(expect.dot(embed_full(phi_minus).amplitudes())) - 1.0) <= 1e-12);

    // Brute-force symmetrization of the two factors gives the same vectors.
    const VectorXcd brute = oracle::brute_symmetrize({Vector2cd(r, r), Vector2cd(r, -r)}).normalized();
    CHECK(std::abs(std::abs(brute.dot(embed_full(phi_minus).amplitudes())) - 1.0) <= 1e-12);

    // Psi+ (.) Phi- is a square on a meridian: E_B = 1 and GHZ4 up to a rotation.
    const SymmetricState square = compose(psi_plus, phi_minus);
    CHECK(std::abs(e_b(square) - 1.0) <= 1e-12);
    CHECK(std::abs(e_g(square).value - 1.0) <= 1e-8);
    const SymmetricState turned = rotate_state(square, Star::from_angles(kPi / 2, 0), kPi / 2);
    const Constellation t = state_to_stars(turned);
    for (const auto& s : t.stars()) CHECK(std::abs(s.theta() - kPi / 2) <= 1e-7);
}

TEST_CASE("compose equals the state of the union of the constellations") {
    SeededRng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const SymmetricState a = oracle::random_dicke(rng, 1 + trial % 5);
        const SymmetricState b = oracle::random_dicke(rng, 1 + trial % 4);
        const SymmetricState via_stars = stars_to_state(state_to_stars(a) + state_to_stars(b));
        CHECK(fidelity(compose(a, b), via_stars) >= 1 - 1e-9);
    }
}

TEST_CASE("compose is commutative and associative") {
    SeededRng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const SymmetricState a = oracle::random_dicke(rng, 1 + trial % 4);
        const SymmetricState b = oracle::random_dicke(rng, 2);
        const SymmetricState c = oracle::random_dicke(rng, 3);
        CHECK(fidelity(compose(a, b), compose(b, a)) >= 1 - 1e-12);
        CHECK(fidelity(compose(compose(a, b), c), compose(a, compose(b, c))) >= 1 - 1e-12);
    }
}

TEST_CASE("composing product states gives the symmetrized tensor product") {
    SeededRng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vector2cd> parts;
        const QubitState first = random_qubit(rng);
        SymmetricState acc(first.amplitudes());
        parts.push_back(first.amplitudes());
        for (int q = 1; q < 2 + trial % 4; ++q) {
            const QubitState next = random_qubit(rng);
            acc = compose(acc, SymmetricState(next.amplitudes()));
            parts.push_back(next.amplitudes());
        }
        const VectorXcd brute = oracle::brute_symmetrize(parts).normalized();
        CHECK(std::abs(std::abs(brute.dot(embed_full(acc).amplitudes())) - 1.0) <= 1e-12);
    }
    // Coinciding stars: a coherent state composed with itself stays coherent.
    const QubitState center(1.1, 0.3);
    CHECK(fidelity(compose(coherent_state(3, center), coherent_state(2, center)), coherent_state(5, center)) >=
          1 - 1e-12);
}

TEST_CASE("Husimi function of a composition is the product of the factors") {
    SeededRng rng(44);
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const SymmetricState a = oracle::random_dicke(rng, 1 + trial % 4);
        const SymmetricState b = oracle::random_dicke(rng, 1 + trial % 3);
        const SymmetricState ab = compose(a, b);
        std::vector<double> log_ratio;
        for (int p = 0; p < 20; ++p) {
            const QubitState x = random_qubit(rng);
            log_ratio.push_back(std::log(husimi(ab, x)) - std::log(husimi(a, x)) - std::log(husimi(b, x)));
        }
        for (double r : log_ratio) worst = std::max(worst, std::abs(r - log_ratio[0]));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("maximal barycentric states compose to maximal states") {
    SeededRng rng(45);
    for (int trial = 0; trial < 30; ++trial) {
        const SymmetricState a = random_antipodal_state(2 + 2 * (trial % 3), rng);
        const SymmetricState b = trial % 2 ? ghz_state(3) : rec_family_state(rng.uniform(0, kPi), rng.uniform(0, 2 * kPi));
        CHECK(std::abs(e_b(a) - 1.0) <= 1e-10);
        CHECK(std::abs(e_b(compose(a, b)) - 1.0) <= 1e-10);
    }
}

TEST_CASE("random states") {
    SeededRng a(7), b(7);
    for (int i = 0; i < 5; ++i) CHECK(a.next_u64() == b.next_u64());
    SeededRng r1(99), r2(99);
    CHECK(fidelity(random_state(6, r1), random_state(6, r2)) >= 1 - 1e-15);
    CHECK(random_state(6, r1).dicke() == random_state(6, r2).dicke());

    SeededRng rng(46);
    for (int trial = 0; trial < 50; ++trial) CHECK(std::abs(e_b(random_antipodal_state(8, rng)) - 1.0) <= 1e-12);
    CHECK_THROWS_AS(random_antipodal_state(5, rng), DomainError);
    CHECK_THROWS_AS(random_antipodal_state(0, rng), DomainError);
    CHECK(random_state(1, rng).n() == 1);

    // Uniform points: z and the azimuth have the right first moments.
    double z = 0, x = 0, z2 = 0;
    const int m = 20000;
    for (int i = 0; i < m; ++i) {
        const Vector3d v = random_qubit(rng).bloch();
        z += v.z(), x += v.x(), z2 += v.z() * v.z();
    }
    CHECK(std::abs(z / m) <= 0.03);
    CHECK(std::abs(x / m) <= 0.03);
    CHECK(std::abs(z2 / m - 1.0 / 3.0) <= 0.02);
}

}  // TEST_SUITE
