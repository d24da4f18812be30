#include <doctest.h>

#include <cmath>

#include "tsimpute/linalg.hpp"

using namespace tsimpute;

TEST_SUITE("linalg") {

TEST_CASE("matmul and transpose") {
    Matrix a(2, 3);
    a(0, 0) = 1;
    a(0, 1) = 2;
    a(0, 2) = 3;
    a(1, 0) = 4;
    a(1, 1) = 5;
    a(1, 2) = 6;
    Matrix b(3, 2);
    b(0, 0) = 7;
    b(0, 1) = 8;
    b(1, 0) = 9;
    b(1, 1) = 10;
    b(2, 0) = 11;
    b(2, 1) = 12;
    const Matrix c = matmul(a, b);
    CHECK(c(0, 0) == 58);
    CHECK(c(0, 1) == 64);
    CHECK(c(1, 0) == 139);
    CHECK(c(1, 1) == 154);

    const Matrix at = transpose(a);
    CHECK(at.rows() == 3);
    CHECK(at(2, 1) == 6);

    const std::vector<double> v = matvec(a, std::vector<double>{1.0, 1.0, 1.0});
    CHECK(v[0] == 6);
    CHECK(v[1] == 15);
}

TEST_CASE("cholesky solves a known SPD system") {
    Matrix a(2, 2);
    a(0, 0) = 4;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 3;
    std::vector<double> x;
    REQUIRE(cholesky_solve(a, {1.0, 2.0}, x));
    // Solution of [[4,1],[1,3]] x = (1,2): x = (1/11, 7/11).
    CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-14));
}

TEST_CASE("cholesky rejects an indefinite matrix") {
    Matrix a(2, 2);
    a(0, 0) = 1;
    a(0, 1) = 2;
    a(1, 0) = 2;
    a(1, 1) = 1;  // eigenvalues 3 and -1
    std::vector<double> x;
    CHECK_FALSE(cholesky_solve(a, {1.0, 1.0}, x));
}

TEST_CASE("gaussian elimination handles pivoting and flags singularity") {
    Matrix a(3, 3);
    a(0, 0) = 0;
    a(0, 1) = 2;
    a(0, 2) = 1;
    a(1, 0) = 1;
    a(1, 1) = 0;
    a(1, 2) = 1;
    a(2, 0) = 2;
    a(2, 1) = 1;
    a(2, 2) = 0;
    std::vector<double> x;
    REQUIRE(solve_linear(a, {3.0, 2.0, 3.0}, x));
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x[2] == doctest::Approx(1.0).epsilon(1e-12));

    Matrix singular(2, 2);
    singular(0, 0) = 1;
    singular(0, 1) = 2;
    singular(1, 0) = 2;
    singular(1, 1) = 4;
    CHECK_FALSE(solve_linear(singular, {1.0, 2.0}, x));
}

TEST_CASE("jacobi eigenvalues of a known symmetric matrix") {
    Matrix a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 2;  // eigenvalues 1 and 3
    const std::vector<double> eigen = symmetric_eigenvalues(a);
    CHECK(eigen[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(eigen[1] == doctest::Approx(3.0).epsilon(1e-10));

    const Matrix id = Matrix::identity(4);
    for (double value : symmetric_eigenvalues(id)) {
        CHECK(value == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("trace and symmetrize") {
    Matrix a(2, 2);
    a(0, 0) = 1;
    a(0, 1) = 4;
    a(1, 0) = 2;
    a(1, 1) = 5;
    CHECK(trace(a) == 6);
    symmetrize(a);
    CHECK(a(0, 1) == 3);
    CHECK(a(1, 0) == 3);
}

}  // TEST_SUITE
