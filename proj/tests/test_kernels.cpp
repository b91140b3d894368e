#include <cmath>
#include <random>

#include "doctest.h"

#include "tda/kernels.hpp"
#include "tda/summaries.hpp"

using namespace tda;

namespace {

PersistenceDiagram random_diagram(int max_points, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    PersistenceDiagram d{1, {}};
    const int n = static_cast<int>(rng() % (max_points + 1));
    for (int i = 0; i < n; ++i) {
        const double b = u(rng);
        d.points.push_back({b, b + u(rng) + 1e-3});
    }
    return d;
}

std::vector<PersistenceDiagram> random_collection(std::mt19937& rng, int max_diagrams,
                                                  int max_points) {
    const int n = 2 + static_cast<int>(rng() % (max_diagrams - 1));
    std::vector<PersistenceDiagram> out;
    for (int i = 0; i < n; ++i) out.push_back(random_diagram(max_points, rng));
    return out;
}

// direct transcription of the scale-space formula, nothing shared with k_pss
double pss_oracle(const PersistenceDiagram& a, const PersistenceDiagram& b, double sigma) {
    double acc = 0.0;
    for (const auto& x : a.points)
        for (const auto& y : b.points) {
            const double direct =
                (x.birth - y.birth) * (x.birth - y.birth) + (x.death - y.death) * (x.death - y.death);
            const double mirror =
                (x.birth - y.death) * (x.birth - y.death) + (x.death - y.birth) * (x.death - y.birth);
            acc += std::exp(-direct / (8.0 * sigma)) - std::exp(-mirror / (8.0 * sigma));
        }
    return acc / (8.0 * M_PI * sigma);
}

double pwg_embedding_inner(const PersistenceDiagram& a, const PersistenceDiagram& b,
                           double tau, double c, double q) {
    double acc = 0.0;
    for (const auto& x : a.points)
        for (const auto& y : b.points) {
            const double wx = std::atan(c * std::pow(x.death - x.birth, q));
            const double wy = std::atan(c * std::pow(y.death - y.birth, q));
            const double sq =
                (x.birth - y.birth) * (x.birth - y.birth) + (x.death - y.death) * (x.death - y.death);
            acc += wx * wy * std::exp(-sq / (2.0 * tau * tau));
        }
    return acc;
}

KernelSpec geodesic_spec(double h, double p = 2.0) {
    KernelSpec s;
    s.kind = KernelKind::GeodesicGaussian;
    s.h = h;
    s.ground = Ground::L2;
    s.p = p;
    return s;
}

} // namespace

TEST_CASE("geodesic gaussian closed forms") {
    const PersistenceDiagram d{1, {{0.0, 2.0}}};
    const PersistenceDiagram empty{1, {}};
    // W_2 to the empty diagram is sqrt(2), so the exponent is -2/h
    CHECK(k_geodesic_gaussian(d, empty, 2.0, Ground::L2) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(k_geodesic_gaussian(d, empty, 1.0, Ground::L2) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
    CHECK(k_geodesic_gaussian(empty, empty, 1.0, Ground::L2) == 1.0);

    std::mt19937 rng(61);
    for (int i = 0; i < 10; ++i) {
        const PersistenceDiagram r = random_diagram(5, rng);
        CHECK(k_geodesic_gaussian(r, r, 0.7, Ground::L2) == 1.0);
    }
}

TEST_CASE("geodesic laplacian closed forms") {
    const PersistenceDiagram d{1, {{0.0, 2.0}}};
    const PersistenceDiagram empty{1, {}};
    CHECK(k_geodesic_laplacian(d, empty, 1.0, Ground::L2) ==
          doctest::Approx(std::exp(-std::sqrt(2.0))).epsilon(1e-13));
    std::mt19937 rng(62);
    const PersistenceDiagram r = random_diagram(5, rng);
    CHECK(k_geodesic_laplacian(r, r, 0.3, Ground::L2) == 1.0);
}

TEST_CASE("geodesic kernels reduce to the transport distance") {
    std::mt19937 rng(63);
    for (int trial = 0; trial < 50; ++trial) {
        const PersistenceDiagram a = random_diagram(4, rng);
        const PersistenceDiagram b = random_diagram(4, rng);
        const double w = brute_force_wasserstein(a, b, {Ground::L2, 2.0});
        const double h = 0.5 + 0.1 * (trial % 7);
        CHECK(k_geodesic_gaussian(a, b, h, Ground::L2) ==
              doctest::Approx(std::exp(-w * w / h)).epsilon(1e-9));
        CHECK(k_geodesic_laplacian(a, b, h, Ground::L2) ==
              doctest::Approx(std::exp(-w / h)).epsilon(1e-9));
        const double g = k_geodesic_gaussian(a, b, h, Ground::L2);
        CHECK(g > 0.0);
        CHECK(g <= 1.0);
    }
}

TEST_CASE("closer diagrams score higher") {
    const PersistenceDiagram d{1, {{0.0, 2.0}}};
    const PersistenceDiagram near{1, {{0.1, 2.1}}};
    const PersistenceDiagram far{1, {{0.0, 6.0}}};
    CHECK(k_geodesic_gaussian(d, near, 1.0, Ground::L2) >
          k_geodesic_gaussian(d, far, 1.0, Ground::L2));
    const PersistenceDiagram empty{1, {}};
    CHECK(k_geodesic_gaussian(d, empty, 2.0, Ground::L2) >
          k_geodesic_gaussian(d, far, 2.0, Ground::L2));
}

TEST_CASE("scale-space kernel") {
    const PersistenceDiagram single{1, {{0.0, 1.0}}};
    const PersistenceDiagram empty{1, {}};

    CHECK(k_pss(single, single, 1.0) ==
          doctest::Approx((1.0 - std::exp(-0.25)) / (8.0 * M_PI)).epsilon(1e-13));
    CHECK(k_pss(empty, single, 1.0) == 0.0);
    CHECK(k_pss(single, empty, 1.0) == 0.0);
    CHECK(k_pss(empty, empty, 1.0) == 0.0);

    std::mt19937 rng(64);
    for (int trial = 0; trial < 40; ++trial) {
        const PersistenceDiagram a = random_diagram(5, rng);
        const PersistenceDiagram b = random_diagram(5, rng);
        const double sigma = 0.2 + 0.3 * (trial % 5);
        CHECK(k_pss(a, b, sigma) == doctest::Approx(pss_oracle(a, b, sigma)).epsilon(1e-12));
        CHECK(k_pss(a, b, sigma) == k_pss(b, a, sigma)); // bitwise
        CHECK(k_pss(a, b, sigma) >= 0.0);
    }
}

TEST_CASE("scale-space Gram matrices stay positive semidefinite") {
    std::mt19937 rng(65);
    KernelSpec spec;
    spec.kind = KernelKind::Pss;
    for (int trial = 0; trial < 60; ++trial) {
        spec.sigma = 0.1 + 0.2 * (trial % 6);
        const auto diagrams = random_collection(rng, 8, 5);
        const KernelMatrix k = kernel_matrix(diagrams, spec);
        CHECK(k.min_eigenvalue() >= -1e-8);
    }
}

TEST_CASE("weighted gaussian kernel") {
    const PersistenceDiagram empty{1, {}};
    CHECK(k_pwg(empty, empty, 1.0, 1.0, 1.0, 1.0) == 1.0);

    std::mt19937 rng(66);
    for (int trial = 0; trial < 40; ++trial) {
        const PersistenceDiagram a = random_diagram(4, rng);
        const PersistenceDiagram b = random_diagram(4, rng);
        const double sigma = 0.5 + 0.25 * (trial % 4);
        const double tau = 0.4 + 0.2 * (trial % 3);
        const double c = 0.5 + (trial % 2);
        const double q = 1.0 + (trial % 2);

        CHECK(k_pwg(a, a, sigma, tau, c, q) == 1.0);

        const double saa = pwg_embedding_inner(a, a, tau, c, q);
        const double sbb = pwg_embedding_inner(b, b, tau, c, q);
        const double sab = pwg_embedding_inner(a, b, tau, c, q);
        const double dg = std::max(0.0, saa + sbb - 2.0 * sab);
        CHECK(k_pwg(a, b, sigma, tau, c, q) ==
              doctest::Approx(std::exp(-dg / (2.0 * sigma * sigma))).epsilon(1e-11));
        CHECK(k_pwg(a, b, sigma, tau, c, q, true) ==
              doctest::Approx(std::exp(-dg * dg / (2.0 * sigma * sigma))).epsilon(1e-11));
        CHECK(k_pwg(a, b, sigma, tau, c, q) == k_pwg(b, a, sigma, tau, c, q));
    }
}

TEST_CASE("landscape kernel is a genuine inner product") {
    KernelSpec spec;
    spec.kind = KernelKind::LandscapeL2;
    spec.k_max = 3;
    spec.t_grid = uniform_grid(0.0, 4.0, 33);

    std::mt19937 rng(67);
    const auto diagrams = random_collection(rng, 8, 5);
    const KernelMatrix k = kernel_matrix(diagrams, spec);
    CHECK(k.min_eigenvalue() >= -1e-8);
    for (std::size_t i = 0; i < diagrams.size(); ++i)
        for (std::size_t j = 0; j < diagrams.size(); ++j)
            CHECK(k.matrix()(i, j) ==
                  doctest::Approx(landscape_l2_inner(diagrams[i], diagrams[j], 3, spec.t_grid))
                      .epsilon(1e-12));
}

TEST_CASE("kernel_value dispatches to the named kernels") {
    std::mt19937 rng(68);
    const PersistenceDiagram a = random_diagram(4, rng);
    const PersistenceDiagram b = random_diagram(4, rng);

    KernelSpec spec = geodesic_spec(0.8);
    CHECK(kernel_value(a, b, spec) == k_geodesic_gaussian(a, b, 0.8, Ground::L2));
    spec.kind = KernelKind::GeodesicLaplacian;
    CHECK(kernel_value(a, b, spec) == k_geodesic_laplacian(a, b, 0.8, Ground::L2));
    spec.kind = KernelKind::Pss;
    spec.sigma = 0.4;
    CHECK(kernel_value(a, b, spec) == k_pss(a, b, 0.4));
    spec.kind = KernelKind::Pwg;
    CHECK(kernel_value(a, b, spec) == k_pwg(a, b, spec.sigma, spec.tau, spec.c, spec.q));

    WassersteinCache cache;
    spec = geodesic_spec(0.8);
    const double with_cache = kernel_value(a, b, spec, &cache);
    CHECK(with_cache == kernel_value(a, b, spec));
    CHECK(cache.size() == 1);
    CHECK(kernel_value(a, b, spec, &cache) == with_cache);
    CHECK(cache.size() == 1);
}

TEST_CASE("cache returns the transport distance") {
    std::mt19937 rng(69);
    WassersteinCache cache;
    for (int i = 0; i < 10; ++i) {
        const PersistenceDiagram a = random_diagram(4, rng);
        const PersistenceDiagram b = random_diagram(4, rng);
        CHECK(cache.distance(a, b, Ground::L2, 2.0) ==
              wasserstein(a, b, {Ground::L2, 2.0}).value);
        CHECK(cache.distance(b, a, Ground::L2, 2.0) ==
              cache.distance(a, b, Ground::L2, 2.0));
    }
}

TEST_CASE("gram matrix construction") {
    std::mt19937 rng(70);
    const auto diagrams = random_collection(rng, 10, 5);
    const KernelSpec spec = geodesic_spec(1.0);
    const KernelMatrix k = kernel_matrix(diagrams, spec);

    REQUIRE(k.size() == static_cast<int>(diagrams.size()));
    for (int i = 0; i < k.size(); ++i) {
        CHECK(k.matrix()(i, i) == 1.0);
        for (int j = 0; j < k.size(); ++j) {
            CHECK(k.matrix()(i, j) == k.matrix()(j, i));
            CHECK(k.matrix()(i, j) == kernel_value(diagrams[i], diagrams[j], spec));
        }
    }

    const KernelMatrix threaded = kernel_matrix(diagrams, spec, 4);
    CHECK((threaded.matrix() - k.matrix()).cwiseAbs().maxCoeff() == 0.0);

    const KernelMatrix one = kernel_matrix({diagrams[0]}, spec);
    CHECK(one.matrix()(0, 0) == 1.0);

    CHECK_THROWS_AS(kernel_matrix({}, spec), InputError);
}

TEST_CASE("kernel matrix validates its entries") {
    KernelSpec spec = geodesic_spec(1.0);
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.5 + 1e-6, 1.0;
    CHECK_THROWS_AS(KernelMatrix(asym, spec), NumericError);
    Eigen::MatrixXd nan(2, 2);
    nan << 1.0, std::nan(""), std::nan(""), 1.0;
    CHECK_THROWS_AS(KernelMatrix(nan, spec), NumericError);
    Eigen::MatrixXd rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(KernelMatrix(rect, spec), InputError);
}

TEST_CASE("eigendecomposition reconstructs the matrix") {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
        const KernelMatrix k(m, geodesic_spec(1.0));
        const Eigen::MatrixXd rebuilt =
            k.eigenvectors() * k.eigenvalues().asDiagonal() * k.eigenvectors().transpose();
        CHECK((rebuilt - m).norm() <= 1e-8 * std::max(1.0, m.norm()));
        CHECK(k.min_eigenvalue() == k.eigenvalues().minCoeff());
    }
}

TEST_CASE("spectral surgery on a diagonal matrix") {
    Eigen::MatrixXd m(2, 2);
    m << 2.0, 0.0, 0.0, -1.0;
    const KernelMatrix k(m, geodesic_spec(1.0));

    const Eigen::MatrixXd clip = spectral_transform(k, SpectralMode::Clip).matrix();
    CHECK(clip(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(clip(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(clip(0, 1)) <= 1e-12);

    const Eigen::MatrixXd flip = spectral_transform(k, SpectralMode::Flip).matrix();
    CHECK(flip(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(flip(1, 1) == doctest::Approx(1.0).epsilon(1e-12));

    const Eigen::MatrixXd square = spectral_transform(k, SpectralMode::Square).matrix();
    CHECK(square(0, 0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(square(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral surgery yields PSD matrices that rebuild from their eigensystem") {
    std::mt19937 rng(72);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 8);
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
        const KernelMatrix k(m, geodesic_spec(1.0));
        for (SpectralMode mode : {SpectralMode::Clip, SpectralMode::Flip, SpectralMode::Square}) {
            const KernelMatrix t = spectral_transform(k, mode);
            CHECK(t.min_eigenvalue() >= -1e-8);
            const Eigen::MatrixXd rebuilt =
                t.eigenvectors() * t.eigenvalues().asDiagonal() * t.eigenvectors().transpose();
            CHECK((rebuilt - t.matrix()).norm() <= 1e-8 * std::max(1.0, t.matrix().norm()));
        }
    }
}

TEST_CASE("clip and flip agree on positive definite input") {
    std::mt19937 rng(73);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) a(i, j) = u(rng);
    const Eigen::MatrixXd pd =
        a * a.transpose() + Eigen::MatrixXd::Identity(5, 5);
    const KernelMatrix k(0.5 * (pd + pd.transpose()), geodesic_spec(1.0));
    const Eigen::MatrixXd clip = spectral_transform(k, SpectralMode::Clip).matrix();
    const Eigen::MatrixXd flip = spectral_transform(k, SpectralMode::Flip).matrix();
    CHECK((clip - flip).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((clip - k.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("random search exhibits an indefinite geodesic Gram matrix") {
    const DiagramCollectionGenerator gen = [](std::mt19937& rng) {
        std::uniform_real_distribution<double> u(0.0, 2.0);
        const int count = 4 + static_cast<int>(rng() % 7);
        std::vector<PersistenceDiagram> out;
        for (int i = 0; i < count; ++i) {
            PersistenceDiagram d{1, {}};
            const int pts = 1 + static_cast<int>(rng() % 6);
            for (int j = 0; j < pts; ++j) {
                const double b = u(rng);
                d.points.push_back({b, b + u(rng) + 1e-3});
            }
            out.push_back(std::move(d));
        }
        return out;
    };

    const WitnessResult ggt =
        indefiniteness_witness(gen, geodesic_spec(1.0), 150, 2026);
    REQUIRE(ggt.found);
    CHECK(ggt.min_eigenvalue < -1e-8);
    REQUIRE(!ggt.collection.empty());
    CHECK(ggt.bandwidth > 0.0);

    // re-verify the witness from scratch
    KernelSpec at_witness = geodesic_spec(ggt.bandwidth);
    const KernelMatrix k = kernel_matrix(ggt.collection, at_witness);
    CHECK(k.min_eigenvalue() == doctest::Approx(ggt.min_eigenvalue).epsilon(1e-10));
    CHECK(k.min_eigenvalue() < -1e-8);

    // eigenvalue surgery repairs it
    CHECK(spectral_transform(k, SpectralMode::Flip).min_eigenvalue() >= -1e-8);
    CHECK(spectral_transform(k, SpectralMode::Clip).min_eigenvalue() >= -1e-8);

    // the scale-space kernel never certifies a witness on the same search
    KernelSpec pss;
    pss.kind = KernelKind::Pss;
    pss.sigma = 0.5;
    const WitnessResult stable = indefiniteness_witness(gen, pss, 150, 2026);
    CHECK(!stable.found);
    CHECK(stable.min_eigenvalue >= -1e-8);
}

TEST_CASE("spec validation and bandwidth substitution") {
    KernelSpec spec = geodesic_spec(1.0);
    CHECK_NOTHROW(validate_kernel_spec(spec));
    spec.h = 0.0;
    CHECK_THROWS_AS(validate_kernel_spec(spec), ConfigError);

    spec = geodesic_spec(2.0);
    CHECK(with_bandwidth(spec, 0.25).h == 0.25);
    KernelSpec pss;
    pss.kind = KernelKind::Pss;
    CHECK(with_bandwidth(pss, 0.25).sigma == 0.25);

    KernelSpec land;
    land.kind = KernelKind::LandscapeL2;
    CHECK_THROWS_AS(validate_kernel_spec(land), ConfigError); // empty grid
    land.t_grid = uniform_grid(0.0, 1.0, 8);
    CHECK_NOTHROW(validate_kernel_spec(land));
    land.k_max = 0;
    CHECK_THROWS_AS(validate_kernel_spec(land), ConfigError);
    land.k_max = 3;
    CHECK_THROWS_AS(with_bandwidth(land, 0.5), ConfigError);

    for (KernelKind kind :
         {KernelKind::GeodesicGaussian, KernelKind::GeodesicLaplacian, KernelKind::Pss,
          KernelKind::Pwg, KernelKind::LandscapeL2})
        CHECK(kernel_kind_from_name(kernel_kind_name(kind)) == kind);
    CHECK_THROWS_AS(kernel_kind_from_name("rbf"), ConfigError);
}
