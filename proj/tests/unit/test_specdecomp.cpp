#include "fcd/error.hpp"
#include "fcd/rng.hpp"
#include "fcd/specdecomp.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fcd;

namespace {

SpectralPair spectrum_of(std::initializer_list<double> values) {
    SpectralPair s;
    s.eigenvalues = Eigen::Map<const Eigen::VectorXd>(values.begin(), static_cast<Eigen::Index>(values.size()));
    s.eigenvectors = Eigen::MatrixXd::Identity(s.eigenvalues.size(), s.eigenvalues.size());
    return s;
}

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, rng::Stream& s) {
    std::normal_distribution<double> n;
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = n(s);
    return m;
}

}  // namespace

TEST(EmpiricalCovariance, Examples) {
    const Grid g(20);
    const Curve e = Curve::from_function(g, [](double t) { return 1 + t; });
    const std::vector<Curve> pair{e, -1.0 * e};
    const Eigen::MatrixXd c = empirical_covariance(std::span<const Curve>(pair), true).matrix;
    const Eigen::VectorXd v = coordinates(e);
    EXPECT_LT((c - v * v.transpose()).cwiseAbs().maxCoeff(), 1e-14);

    const std::vector<Curve> one{e};
    EXPECT_EQ(empirical_covariance(std::span<const Curve>(one), true).matrix.cwiseAbs().maxCoeff(), 0.0);

    Eigen::MatrixXd basis(2, 2);
    basis << 1, 0, 0, 1;
    EXPECT_TRUE(empirical_covariance(basis, false).matrix.isApprox(0.5 * Eigen::MatrixXd::Identity(2, 2)));
    EXPECT_THROW((void)empirical_covariance(Eigen::MatrixXd(0, 3), true), UsageError);
}

TEST(EmpiricalCrossCovariance, Examples) {
    rng::Stream s(5);
    EXPECT_EQ(empirical_cross_covariance(Eigen::MatrixXd::Zero(4, 3), random_matrix(4, 2, s)).cwiseAbs().maxCoeff(), 0.0);

    const Eigen::MatrixXd e = random_matrix(1, 3, s), f = random_matrix(1, 2, s);
    EXPECT_TRUE(empirical_cross_covariance(e, f).isApprox(e.transpose() * f));

    // xs with identity empirical covariance: √n times orthonormal columns.
    const Eigen::Index n = 40, p = 4;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(n, p, s));
    const Eigen::MatrixXd xs = std::sqrt(static_cast<double>(n)) * (qr.householderQ() * Eigen::MatrixXd::Identity(n, p));
    ASSERT_TRUE(empirical_covariance(xs, false).matrix.isApprox(Eigen::MatrixXd::Identity(p, p), 1e-12));
    const Eigen::MatrixXd rho = random_matrix(3, p, s);
    const Eigen::MatrixXd ys = xs * rho.transpose();
    EXPECT_LT((empirical_cross_covariance(ys, xs) - rho).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW((void)empirical_cross_covariance(ys, xs.topRows(5)), UsageError);
}

TEST(Eigendecompose, Examples) {
    Eigen::MatrixXd a(2, 2);
    a << 2, 1, 1, 2;
    const SpectralPair s = eigendecompose({a});
    EXPECT_NEAR(s.eigenvalues[0], 3.0, 1e-14);
    EXPECT_NEAR(s.eigenvalues[1], 1.0, 1e-14);

    const SpectralPair id = eigendecompose({Eigen::MatrixXd::Identity(3, 3)});
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(id.eigenvalues[i], 1.0, 1e-14);
    EXPECT_TRUE((id.eigenvectors.transpose() * id.eigenvectors).isApprox(Eigen::MatrixXd::Identity(3, 3)));

    Eigen::VectorXd e(4);
    e << 1, -1, 1, 1;  // norm 2
    const SpectralPair r1 = eigendecompose({e * e.transpose()});
    EXPECT_NEAR(r1.eigenvalues[0], 4.0, 1e-13);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(r1.eigenvalues[i], 0.0, 1e-13);
}

TEST(Eigendecompose, SignRuleAndErrors) {
    Eigen::VectorXd e(3);
    e << 0.2, -0.9, 0.3;
    const SpectralPair s = eigendecompose({e * e.transpose()});
    EXPECT_GT(s.eigenvectors(1, 0), 0.0);

    Eigen::MatrixXd nonsym(2, 2);
    nonsym << 1, 0.5, 0, 1;
    EXPECT_THROW((void)eigendecompose({nonsym}), StructuralError);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1, 0, 0, -1;
    EXPECT_THROW((void)eigendecompose({indefinite}), DegenerateInputError);
}

TEST(Eigendecompose, RandomPSDProperties) {
    rng::Stream s(9);
    for (int k = 0; k < 20; ++k) {
        const Eigen::Index p = 12, r = 1 + k % 8;
        const Eigen::MatrixXd b = random_matrix(p, r, s);
        const Eigen::MatrixXd a = b * b.transpose();
        const SpectralPair sp = eigendecompose({a});
        for (Eigen::Index i = 1; i < p; ++i) EXPECT_GE(sp.eigenvalues[i - 1], sp.eigenvalues[i]);
        EXPECT_TRUE((sp.eigenvectors.transpose() * sp.eigenvectors).isApprox(Eigen::MatrixXd::Identity(p, p), 1e-8));
        EXPECT_LE((sp.reconstruct() - a).cwiseAbs().maxCoeff(), 1e-8 * (1 + sp.eigenvalues[0]));
        EXPECT_LE(sp.rank(), r);
        const SpectralPair again = eigendecompose({sp.reconstruct()});
        EXPECT_LE((again.reconstruct() - sp.reconstruct()).cwiseAbs().maxCoeff(), 1e-8 * (1 + sp.eigenvalues[0]));
        for (Eigen::Index j = 0; j < p; ++j) {
            Eigen::Index arg = 0;
            sp.eigenvectors.col(j).cwiseAbs().maxCoeff(&arg);
            EXPECT_GT(sp.eigenvectors(arg, j), 0.0);
        }
    }
}

TEST(Truncation, ThresholdExamples) {
    EXPECT_EQ(truncation_threshold(spectrum_of({1.0, 0.1, 0.001}), 100), 2);
    EXPECT_EQ(truncation_threshold(spectrum_of({2.0, 2.0, 1.0}), 1), 2);
    EXPECT_EQ(truncation_threshold(spectrum_of({4, 3, 2, 1}), 2), 3);
    EXPECT_EQ(truncation_threshold(spectrum_of({4, 3, 0, 0}), 1e9), 2);
    EXPECT_EQ(truncation_threshold(spectrum_of({4, 3, 2, 1}), 2, ThresholdScale::absolute), 4);
    EXPECT_THROW((void)truncation_threshold(spectrum_of({0, 0}), 10), DegenerateInputError);
}

TEST(Truncation, PVEExamples) {
    EXPECT_EQ(truncation_pve(spectrum_of({4, 3, 2, 1}), 0.69), 2);
    EXPECT_EQ(truncation_pve(spectrum_of({4, 3, 2, 1}), 0.71), 3);
    EXPECT_EQ(truncation_pve(spectrum_of({4, 3, 2, 1}), 1e-9), 1);
    EXPECT_THROW((void)truncation_pve(spectrum_of({0, 0}), 0.5), DegenerateInputError);
}

TEST(Truncation, MonotoneInParameters) {
    rng::Stream s(4);
    for (int k = 0; k < 30; ++k) {
        Eigen::VectorXd v = random_matrix(10, 1, s).cwiseAbs();
        std::sort(v.data(), v.data() + v.size(), std::greater<>());
        SpectralPair sp;
        sp.eigenvalues = v;
        sp.eigenvectors = Eigen::MatrixXd::Identity(10, 10);
        int prev = 0;
        for (double m = 1; m < 1e4; m *= 1.7) {
            const int t = truncation_threshold(sp, m);
            EXPECT_GE(t, prev);
            prev = t;
        }
        prev = 0;
        for (double pv = 0.01; pv < 1; pv += 0.05) {
            const int t = truncation_pve(sp, pv);
            EXPECT_GE(t, prev);
            prev = t;
        }
    }
}
