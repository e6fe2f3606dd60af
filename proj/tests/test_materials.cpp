#include "tlsph/materials.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace tlsph;

namespace
{
Real relative(const auto &a, const auto &b)
{
    return (a - b).norm() / std::max<Real>(b.norm(), 1.0e-300);
}

PlasticParams copper()
{
    PlasticParams p;
    p.base = ElasticParams::from_young(8930.0, 117.0e9, 0.35);
    p.yield_stress = 0.4e9;
    p.hardening = LinearHardening{0.1e9};
    return p;
}

PlasticParams steel()
{
    PlasticParams p;
    p.base.rho0 = 7850.0;
    p.base.K = 164.21e9;
    p.base.G = 80.1938e9;
    p.yield_stress = 450.0e6;
    p.hardening = SaturationHardening{715.0e6, 16.93, 129.24e6};
    return p;
}

HolzapfelOgdenParams random_holzapfel_ogden()
{
    HolzapfelOgdenParams p;
    p.rho0 = 1.0;
    p.a = oracle::uniform(0.05, 1.0);
    p.b = oracle::uniform(0.5, 8.0);
    p.a_f = oracle::uniform(0.0, 20.0);
    p.b_f = oracle::uniform(0.5, 16.0);
    p.a_s = oracle::uniform(0.0, 3.0);
    p.b_s = oracle::uniform(0.5, 11.0);
    p.a_fs = oracle::uniform(0.0, 0.5);
    p.b_fs = oracle::uniform(0.5, 11.0);
    p.lambda = oracle::uniform(1.0, 500.0);
    p.f0 = oracle::random_unit<3>();
    Vec3 s = oracle::random_unit<3>();
    p.s0 = (s - s.dot(p.f0) * p.f0).normalized();
    return p;
}

/** Kirchhoff stress of the plastic model written out from the elastic left Cauchy-Green tensor. */
template <int Dim>
Mat<Dim> plastic_kirchhoff(const Mat<Dim> &F, const Mat<Dim> &Cp_inv, const ElasticParams &e)
{
    const Real J = F.determinant();
    const Mat<Dim> be = F * Cp_inv * F.transpose();
    const Mat<Dim> be_bar = std::pow(be.determinant(), -1.0 / Dim) * be;
    return 0.5 * e.K * (J * J - 1.0) * Mat<Dim>::Identity() + e.G * deviatoric<Dim>(be_bar);
}

template <int Dim>
void check_neo_hookean_against_energy()
{
    const ElasticParams p = ElasticParams::from_young(1000.0, 2.0e6, 0.3);
    const auto energy = [&](const Mat<Dim> &F) { return oracle::neo_hookean_energy<Dim>(F, p.K, p.G); };
    for (int k = 0; k < 200; ++k)
    {
        const Mat<Dim> F = oracle::random_deformation<Dim>(0.3);
        const Mat<Dim> expected = oracle::kirchhoff_from_energy<Dim>(energy, F, 1.0e-6);
        const Mat<Dim> tau = neo_hookean_stress<Dim>(F, p, Mat<Dim>::Zero()).kirchhoff();
        CHECK(relative(tau, expected) <= 1.0e-5);
    }
}

template <int Dim>
void check_plastic_consistency(const PlasticParams &p, Real amplitude)
{
    int yielded = 0;
    for (int k = 0; k < 300; ++k)
    {
        PlasticState<Dim> state;
        state.xi = oracle::uniform(0.0, 0.2);
        const Mat<Dim> F = oracle::random_deformation<Dim>(amplitude);
        const auto result = plastic_return_map<Dim>(F, state, p);
        const auto trial = oracle::trial_oracle<Dim>(F, state.Cp_inv, p.base.G);
        const Real f_trial = trial.norm - std::sqrt(2.0 / 3.0) * p.flow_stress(state.xi);
        CHECK(result.yielded == (f_trial > 0.0));
        CHECK(result.state.xi >= state.xi);
        CHECK(std::abs(result.tau_de.trace()) <= 1.0e-12 * std::max<Real>(result.tau_de.norm(), 1.0));
        if (!result.yielded)
            continue;
        ++yielded;
        CHECK(std::abs(yield_function<Dim>(result.tau_de, result.state.xi, p)) <= 1.0e-9 * p.yield_stress);

        const Real increment = oracle::consistency_increment(trial.norm, trial.G_tilde, state.xi,
                                                             [&](Real xi) { return p.flow_stress(xi); });
        CHECK(std::abs(result.state.xi - (state.xi + std::sqrt(2.0 / 3.0) * increment)) <= 1.0e-10);

        const Mat<Dim> &Cp = result.state.Cp_inv;
        CHECK((Cp - Cp.transpose()).cwiseAbs().maxCoeff() <= 1.0e-12);
        CHECK(Cp.determinant() > 0.0);
        const Mat<Dim> be = F * Cp * F.transpose();
        CHECK(std::abs(be.trace() - trial.trace_be) <= 1.0e-12 * trial.trace_be);
        CHECK((result.stress.b_e - be).cwiseAbs().maxCoeff() <= 1.0e-12 * trial.trace_be);

        const Mat<Dim> full = plastic_kirchhoff<Dim>(F, Cp, p.base);
        CHECK(relative(result.stress.kirchhoff(), full) <= 1.0e-10);
    }
    CHECK(yielded > 50);
}
} // namespace

TEST_SUITE("materials")
{
    TEST_CASE("elastic constants from Young's modulus and Poisson ratio")
    {
        const ElasticParams p = ElasticParams::from_young(1100.0, 17.0e6, 0.45);
        CHECK(std::abs(p.K - 17.0e6 / (3.0 * 0.1)) < 1.0e-6);
        CHECK(std::abs(p.G - 17.0e6 / 2.9) < 1.0e-6);
        CHECK(std::abs(p.sound_speed() - std::sqrt(p.K / 1100.0)) < 1.0e-12);
        CHECK_THROWS_AS(ElasticParams::from_young(1.0, 1.0, 0.5), ContractViolation);
        ElasticParams bad;
        bad.G = -1.0;
        CHECK_THROWS_AS(bad.validate(), ContractViolation);
    }

    TEST_CASE("deviatoric part is trace free")
    {
        for (int k = 0; k < 1000; ++k)
        {
            const Mat3 A = oracle::random_matrix<3>(3.0);
            const Mat3 b = A * A.transpose() + 0.1 * Mat3::Identity();
            const Mat3 b_bar = std::pow(b.determinant(), -1.0 / 3.0) * b;
            CHECK(std::abs(deviatoric<3>(b_bar).trace()) <= 1.0e-12);
            const Mat2 A2 = oracle::random_matrix<2>(3.0);
            const Mat2 b2 = A2 * A2.transpose() + 0.1 * Mat2::Identity();
            CHECK(std::abs(deviatoric<2>(b2).trace()) <= 1.0e-12 * b2.trace());
        }
    }

    TEST_CASE("neo-Hookean reference state is stress free")
    {
        const ElasticParams p = ElasticParams::from_young(1000.0, 2.0e6, 0.4);
        const auto s2 = neo_hookean_stress<2>(Mat2::Identity(), p, Mat2::Zero());
        CHECK(s2.c == doctest::Approx(p.G));
        CHECK(s2.b_e == Mat2::Identity());
        CHECK((s2.tau_r + p.G * Mat2::Identity()).norm() < 1.0e-9);
        CHECK(s2.kirchhoff().norm() < 1.0e-9);
        CHECK(neo_hookean_stress<3>(Mat3::Identity(), p, Mat3::Zero()).kirchhoff().norm() < 1.0e-9);
    }

    TEST_CASE("neo-Hookean small strain matches linear elasticity")
    {
        const ElasticParams p = ElasticParams::from_young(1000.0, 2.0e6, 0.3);
        const Real eps = 1.0e-6;
        Mat3 F = Mat3::Identity();
        F(0, 0) += eps;
        Mat3 strain = Mat3::Zero();
        strain(0, 0) = eps;
        const Mat3 linear = (p.K - 2.0 * p.G / 3.0) * eps * Mat3::Identity() + 2.0 * p.G * strain;
        CHECK(relative(neo_hookean_stress<3>(F, p, Mat3::Zero()).kirchhoff(), linear) <= 1.0e-3);
    }

    TEST_CASE("neo-Hookean stress is the derivative of its energy")
    {
        check_neo_hookean_against_energy<2>();
        check_neo_hookean_against_energy<3>();
    }

    TEST_CASE("decomposition reconstructs the full stress")
    {
        const ElasticParams p = ElasticParams::from_young(1000.0, 5.0e6, 0.45);
        for (int k = 0; k < 1000; ++k)
        {
            const Mat3 F = oracle::random_deformation<3>(0.4);
            const Real J = F.determinant();
            const Mat3 b = F * F.transpose();
            const Mat3 full =
                0.5 * p.K * (J * J - 1.0) * Mat3::Identity() + p.G * std::pow(J, -2.0 / 3.0) * deviatoric<3>(b);
            CHECK(relative(neo_hookean_stress<3>(F, p, Mat3::Zero()).kirchhoff(), full) <= 1.0e-10);

            const HolzapfelOgdenParams ho = random_holzapfel_ogden();
            const Mat3 G = oracle::random_deformation<3>(0.2);
            const StressDecomposition<3> s = holzapfel_ogden_stress(G, ho, Mat3::Zero());
            CHECK(relative(s.kirchhoff(), holzapfel_ogden_kirchhoff(G, ho)) <= 1.0e-10);
            CHECK(s.c == doctest::Approx(ho.a * std::exp(ho.b * ((G * G.transpose()).trace() - 3.0))).epsilon(1e-14));
        }
    }

    TEST_CASE("inverted deformation is fatal")
    {
        const ElasticParams p;
        Mat2 F = Mat2::Identity();
        F(0, 0) = -1.0;
        CHECK_THROWS_AS(neo_hookean_stress<2>(F, p, Mat2::Zero()), NumericalFailure);
        CHECK_THROWS_AS(holzapfel_ogden_stress(Mat3::Zero(), random_holzapfel_ogden(), Mat3::Zero()), NumericalFailure);
        PlasticState<2> state;
        CHECK_THROWS_AS(plastic_return_map<2>(F, state, copper()), NumericalFailure);
    }

    TEST_CASE("yield function values")
    {
        PlasticParams p = copper();
        CHECK(yield_function<3>(Mat3::Zero(), 0.0, p) == doctest::Approx(-std::sqrt(2.0 / 3.0) * 0.4e9));
        Mat3 tau = Mat3::Zero();
        tau(0, 1) = tau(1, 0) = std::sqrt(2.0 / 3.0) * 0.4e9 / std::sqrt(2.0);
        CHECK(std::abs(yield_function<3>(tau, 0.0, p)) < 1.0e-6);
        Mat3 unit = Mat3::Zero();
        unit(0, 0) = 1.0e9 / std::sqrt(2.0);
        unit(1, 1) = -1.0e9 / std::sqrt(2.0);
        CHECK(yield_function<3>(unit, 1.0, p) == doctest::Approx(1.0e9 - std::sqrt(2.0 / 3.0) * 5.0e8));

        const PlasticParams s = steel();
        CHECK(s.flow_stress(0.0) == doctest::Approx(450.0e6));
        const Real xi = 0.1;
        CHECK(s.flow_stress(xi) == doctest::Approx(450.0e6 + 129.24e6 * xi + 265.0e6 * (1.0 - std::exp(-1.693))));
    }

    TEST_CASE("elastic return leaves the state untouched")
    {
        const PlasticParams p = copper();
        PlasticState<3> state;
        state.xi = 0.01;
        Mat3 F = Mat3::Identity();
        F(0, 1) = 1.0e-4;
        const auto result = plastic_return_map<3>(F, state, p);
        CHECK_FALSE(result.yielded);
        CHECK(result.state.xi == state.xi);
        CHECK(result.state.Cp_inv == state.Cp_inv);
    }

    TEST_CASE("simple shear increment matches the scalar formula")
    {
        const PlasticParams p = copper();
        const Real kappa = 0.1e9;
        Mat2 F = Mat2::Identity();
        F(0, 1) = 0.02;
        PlasticState<2> state;
        const auto result = plastic_return_map<2>(F, state, p);
        REQUIRE(result.yielded);
        const auto trial = oracle::trial_oracle<2>(F, state.Cp_inv, p.base.G);
        const Real f_trial = trial.norm - std::sqrt(2.0 / 3.0) * p.yield_stress;
        const Real increment = 0.5 * f_trial / (trial.G_tilde + kappa / 3.0);
        CHECK(std::abs(result.state.xi - std::sqrt(2.0 / 3.0) * increment) <= 1.0e-10);
    }

    TEST_CASE("return map consistency for linear, perfect and saturation hardening")
    {
        check_plastic_consistency<2>(copper(), 0.05);
        check_plastic_consistency<3>(copper(), 0.05);
        PlasticParams perfect;
        perfect.base = ElasticParams::from_young(2700.0, 78.2e9, 0.3);
        perfect.yield_stress = 0.29e9;
        check_plastic_consistency<3>(perfect, 0.05);
        check_plastic_consistency<2>(steel(), 0.05);
        check_plastic_consistency<3>(steel(), 0.05);
    }

    TEST_CASE("plastic history accumulates with a non-identity plastic state")
    {
        const PlasticParams p = steel();
        PlasticState<2> state;
        Real xi = 0.0;
        for (int k = 1; k <= 40; ++k)
        {
            Mat2 F = Mat2::Identity();
            F(0, 0) = 1.0 + 0.002 * k;
            F(1, 1) = 1.0 / (1.0 + 0.002 * k);
            F(0, 1) = 0.001 * k;
            const auto result = plastic_return_map<2>(F, state, p);
            CHECK(result.state.xi >= xi);
            xi = result.state.xi;
            if (result.yielded)
                CHECK(std::abs(yield_function<2>(result.tau_de, result.state.xi, p)) <= 1.0e-9 * p.yield_stress);
            state = result.state;
        }
        CHECK(xi > 0.0);
    }

    TEST_CASE("Herschel-Bulkley relaxation matches a sub-stepped flow integration")
    {
        for (Real n : {1.0, 0.5, 1.6})
        {
            PlasticParams p;
            p.base = ElasticParams::from_young(1000.0, 2.0e6, 0.3);
            p.yield_stress = 1.0e3;
            p.hardening = HerschelBulkley{10.0, n};
            Mat3 F = Mat3::Identity();
            F(0, 1) = 0.05;
            PlasticState<3> state;
            const auto trial = oracle::trial_oracle<3>(F, state.Cp_inv, p.base.G);
            const Real f_trial = trial.norm - std::sqrt(2.0 / 3.0) * p.yield_stress;
            REQUIRE(f_trial > 0.0);
            for (Real dt : {1.0e-9, 1.0e-7, 1.0e-6})
            {
                const auto result = herschel_bulkley_return_map<3>(F, state, p, dt);
                const Real x = oracle::relax_overstress(f_trial, trial.G_tilde, 10.0, n, dt, 100);
                const Real expected = (f_trial - x) / (2.0 * trial.G_tilde);
                const Real increment = std::sqrt(1.5) * result.state.xi;
                CHECK(std::abs(increment - expected) <= 0.01 * expected);
                CHECK(result.tau_de.norm() <= trial.norm);
                CHECK(result.tau_de.norm() >= std::sqrt(2.0 / 3.0) * p.yield_stress * (1.0 - 1.0e-12));
            }
            const auto instant = herschel_bulkley_return_map<3>(F, state, p, 1.0e-15);
            CHECK(std::abs(instant.tau_de.norm() - trial.norm) <= 1.0e-6 * trial.norm);

            Mat3 small = Mat3::Identity();
            small(0, 1) = 1.0e-5;
            const auto elastic = herschel_bulkley_return_map<3>(small, state, p, 1.0e-3);
            CHECK_FALSE(elastic.yielded);
            CHECK(elastic.state.Cp_inv == state.Cp_inv);
        }
        CHECK_THROWS_AS(plastic_return_map<3>(Mat3::Identity(), PlasticState<3>{},
                                              PlasticParams{ElasticParams{}, 1.0, HerschelBulkley{}}),
                        ContractViolation);
    }

    TEST_CASE("Holzapfel-Ogden reference state and isotropic reduction")
    {
        for (int k = 0; k < 20; ++k)
        {
            const HolzapfelOgdenParams p = random_holzapfel_ogden();
            CHECK(holzapfel_ogden_kirchhoff(Mat3::Identity(), p).norm() <= 1.0e-12 * (p.a + p.lambda));

            HolzapfelOgdenParams iso = p;
            iso.a_f = iso.a_s = iso.a_fs = 0.0;
            const Mat3 F = oracle::random_deformation<3>(0.3);
            const Real J = F.determinant();
            const Mat3 b = F * F.transpose();
            const Mat3 expected = (iso.lambda * std::log(J) - iso.a) * Mat3::Identity() +
                                  iso.a * std::exp(iso.b * (b.trace() - 3.0)) * b;
            CHECK(relative(holzapfel_ogden_kirchhoff(F, iso), expected) <= 1.0e-12);
        }
    }

    TEST_CASE("Holzapfel-Ogden stress is the derivative of its energy")
    {
        for (int k = 0; k < 200; ++k)
        {
            const HolzapfelOgdenParams p = random_holzapfel_ogden();
            const Mat3 F = oracle::random_deformation<3>(0.2);
            const Mat3 expected = oracle::kirchhoff_from_right_energy(p, F, 1.0e-6);
            CHECK(relative(holzapfel_ogden_kirchhoff(F, p), expected) <= 1.0e-5);
        }
    }

    TEST_CASE("active stress")
    {
        HolzapfelOgdenParams p;
        p.f0 = Vec3::UnitX();
        CHECK(active_stress(Mat3::Identity(), 0.0, p).norm() == 0.0);
        const Mat3 thirty = active_stress(Mat3::Identity(), 30.0, p);
        Mat3 expected = Mat3::Zero();
        expected(0, 0) = -15.0;
        CHECK((thirty - expected).norm() < 1.0e-14);
        CHECK((active_stress(Mat3::Identity(), 300.0, p) - 10.0 * thirty).norm() < 1.0e-12);
    }

    TEST_CASE("damping stress")
    {
        const DampingParams d{1000.0, 2.0e6, 0.01};
        for (int k = 0; k < 50; ++k)
        {
            const Mat3 F = oracle::random_deformation<3>(0.3);
            const Mat3 Fdot = oracle::random_matrix<3>(10.0);
            CHECK(damping_stress<3>(F, Mat3::Zero(), d, 1.0).norm() == 0.0);
            const Mat3 full = damping_stress<3>(F, Fdot, d, 1.0);
            const Mat3 eighth = damping_stress<3>(F, Fdot, d, 0.125);
            CHECK((eighth - 0.125 * full).norm() <= 1.0e-15 * full.norm());
            CHECK((full - full.transpose()).norm() <= 1.0e-15 * full.norm());
            const Real chi = 0.5 * 1000.0 * std::sqrt(2.0e6 / 1000.0) * 0.01;
            const Mat3 rate = Fdot * F.transpose() + F * Fdot.transpose();
            CHECK(relative(full, 0.5 * chi * rate) <= 1.0e-14);
        }
    }

    TEST_CASE("parameter validation")
    {
        PlasticParams p = copper();
        p.yield_stress = -1.0;
        CHECK_THROWS_AS(p.validate(), ContractViolation);
        HolzapfelOgdenParams h;
        h.lambda = 1.0;
        h.a = 1.0;
        h.f0 = Vec3(1.0, 1.0, 0.0);
        CHECK_THROWS_AS(h.validate(), ContractViolation);
    }
}
