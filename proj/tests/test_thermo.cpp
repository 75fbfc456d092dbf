#include "oracles.hpp"

#include <hsbc/ions.hpp>
#include <hsbc/solvents.hpp>
#include <hsbc/thermo.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <thread>
#include <vector>

using namespace hsbc;

namespace {
const SolventModel &W() { return builtin_solvent("W"); }
const IonSpec li{"Li+", 1, 0.880};
constexpr double alpha_w25 = 0.685195;
constexpr std::array<Model, 3> models = {Model::Born, Model::MSA, Model::HSBC};
const AlphaLaw published_w{0.670476, 0.000594};
} // namespace

TEST(BornEnergy, ReferenceValues) {
    EXPECT_EQ(std::lround(born_energy(li, 78.283)), -779);
    EXPECT_EQ(std::lround(born_energy({"Cs+", 1, 1.839}, 32.63)), -366);
    EXPECT_DOUBLE_EQ(born_energy(li, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(born_energy({"x", 2, 2.0}, 50.0), 4.0 * born_energy({"x", 1, 2.0}, 50.0));
}

TEST(BornEnergy, NonUnitInteriorPermittivity) {
    const UnitSystem u{born_constant, 2.0};
    EXPECT_NEAR(born_energy({"x", 1, 1.0}, 80.0, u), -born_constant * (0.5 - 1.0 / 80.0), 1e-12);
    EXPECT_DOUBLE_EQ(born_energy({"x", 1, 1.0}, 2.0, u), 0.0);
    EXPECT_THROW(born_energy({"x", 1, 1.0}, 1.5, u), DomainError);
}

TEST(MsaEnergy, ReferenceValues) {
    const auto ion = builtin_ion("Li+");
    EXPECT_NEAR(msa_energy(ion, W(), 25.0), -484.444659090882, 1e-9);
    EXPECT_NEAR(msa_energy(ion, W(), 25.0), -485.0, 1.0);
    EXPECT_NEAR(msa_energy(ion, builtin_solvent("DMF"), 25.0), -335.0, 1.0);
    EXPECT_DOUBLE_EQ(msa_energy(li, 78.283, 0.0), born_energy(li, 78.283));
}

TEST(SurfaceCharge, BornAndMsa) {
    const double eps = 1.0 / (1.0 - 0.987);
    EXPECT_NEAR(born_sigma({"x", 1, 1.0}, eps), -0.987 / (4.0 * pi), 1e-14);
    EXPECT_DOUBLE_EQ(msa_sigma(li, 78.283, 0.0), born_sigma(li, 78.283));
    for (double r : {0.5, 0.88, 1.7, 5.0})
        for (double d : {0.1, 0.5353, 2.0}) {
            const IonSpec ion{"x", -1, r};
            EXPECT_NEAR(msa_sigma(ion, 40.0, d) / born_sigma(ion, 40.0), r / (r + d), 1e-14);
        }
}

TEST(HModel, Values) {
    EXPECT_DOUBLE_EQ(h_model(0.0, 0.7), 0.0);
    EXPECT_NEAR(h_model(0.89506, alpha_w25), 0.648246618050304, 1e-12);
    EXPECT_NEAR(h_model(0.89506, alpha_w25), 0.6483, 1e-4);
    for (double e : {0.01, 0.3, 2.0}) EXPECT_DOUBLE_EQ(h_model(-e, 0.9), h_model(e, 0.9));
    EXPECT_THROW(h_model(1.0, -0.1), DomainError);
}

TEST(NormalField, Values) {
    EXPECT_DOUBLE_EQ(normal_field({"x", 1, 1.0}, 0.0), -1.0);
    const double s = msa_sigma(li, W(), 25.0);
    EXPECT_NEAR(std::abs(normal_field(li, s)), 0.8951, 2e-4);
    EXPECT_DOUBLE_EQ(normal_field({"x", -1, 0.88}, -s), -normal_field(li, s));
}

TEST(HsbcSolve, AlphaZeroIsBorn) {
    for (const auto &ion : builtin_ion_set()) {
        const auto r = hsbc_solve(ion, W(), 25.0, 0.0);
        EXPECT_NEAR(r.dG, born_energy(ion, eps_of_T(W(), 25.0)), 1e-12 * std::abs(r.dG));
        EXPECT_DOUBLE_EQ(r.h, 0.0);
    }
}

TEST(HsbcSolve, LithiumInWater) {
    const auto r = hsbc_solve(builtin_ion("Li+"), W(), 25.0, alpha_w25);
    EXPECT_NEAR(r.dG, -472.0, 0.03 * 472.0);
    EXPECT_LT(r.sigma, 0.0);
    EXPECT_GT(r.h, 0.0);
    // fixed-point consistency
    const double sb = born_sigma(builtin_ion("Li+"), eps_of_T(W(), 25.0));
    EXPECT_NEAR((1.0 + h_model(normal_field(builtin_ion("Li+"), r.sigma), alpha_w25)) * r.sigma, sb,
                1e-12 * std::abs(sb));
}

TEST(HsbcSolve, LargeRadiusRecoversBorn) {
    const IonSpec big{"big", 1, 1e4};
    const double b = born_energy(big, eps_of_T(W(), 25.0));
    EXPECT_LT(std::abs(hsbc_solve(big, W(), 25.0, alpha_w25).dG - b) / std::abs(b), 1e-2);
    EXPECT_LT(std::abs(msa_energy(big, W(), 25.0) - b) / std::abs(b), 1e-2);
}

TEST(HsbcSolve, SmallAlphaApproachesBorn) {
    const auto ion = builtin_ion("Na+");
    const double b = born_energy(ion, eps_of_T(W(), 25.0));
    double previous = 1e300;
    for (double a : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
        const double gap = std::abs(hsbc_solve(ion, W(), 25.0, a).dG - b);
        EXPECT_LT(gap, previous);
        previous = gap;
    }
    EXPECT_LT(previous / std::abs(b), 1e-5);
}

TEST(HsbcSolve, Errors) {
    EXPECT_THROW(hsbc_solve(li, 78.0, -0.1), DomainError);
    FixedPointOptions opts;
    opts.max_iterations = 1;
    try {
        hsbc_solve(li, 78.0, 5.0, {}, opts);
        FAIL();
    } catch (const IterationError &e) {
        EXPECT_EQ(e.iterations(), 1);
        EXPECT_GT(e.residual(), 0.0);
    }
}

TEST(HsbcSolve, MonotoneAndContinuousInAlpha) {
    const auto ion = builtin_ion("K+");
    double previous = hsbc_solve(ion, W(), 25.0, 0.0).dG;
    for (int i = 1; i <= 100; ++i) {
        const double g = hsbc_solve(ion, W(), 25.0, 0.02 * i).dG;
        EXPECT_GT(g, previous);
        EXPECT_LT(g - previous, 5.0);
        previous = g;
    }
}

TEST(Properties, ChargeSymmetryAllModels) {
    for (const auto &s : builtin_solvents()) {
        for (double r : {0.88, 1.5, 2.2}) {
            const IonSpec pos{"p", 1, r}, neg{"n", -1, r};
            for (Model m : models) {
                EXPECT_DOUBLE_EQ(free_energy(m, pos, s, 25.0, published_w), free_energy(m, neg, s, 25.0, published_w));
                EXPECT_DOUBLE_EQ(entropy(m, pos, s, 25.0, published_w), entropy(m, neg, s, 25.0, published_w));
            }
        }
    }
}

TEST(Properties, OrderingAndGaussDeficit) {
    for (const auto &s : builtin_solvents()) {
        for (const auto &ion : builtin_ion_set()) {
            const double eps = eps_of_T(s, 25.0);
            const double born = born_energy(ion, eps);
            const auto h = hsbc_solve(ion, s, 25.0, 0.9);
            EXPECT_LT(std::abs(h.dG), std::abs(born));
            EXPECT_LT(std::abs(msa_energy(ion, s, 25.0)), std::abs(born));
            const double area = 4.0 * pi * ion.radius * ion.radius;
            EXPECT_LT(std::abs(area * h.sigma), std::abs(area * born_sigma(ion, eps)));
        }
    }
}

TEST(Properties, ResultInvariants) {
    for (const auto &ion : builtin_ion_set())
        for (Model m : models) {
            const auto r = evaluate(m, ion, W(), 25.0, published_w);
            EXPECT_LT(r.dG, 0.0);
            EXPECT_LT(r.sigma * ion.valence, 0.0);
            if (m == Model::Born) {
                EXPECT_EQ(r.h, 0.0);
            }
            EXPECT_EQ(r.model, m);
            EXPECT_FALSE(std::isnan(r.dS));
        }
}

TEST(Entropy, ReferenceValuesForLithiumInWater) {
    const auto ion = builtin_ion("Li+");
    EXPECT_EQ(std::lround(entropy(Model::Born, ion, W(), 25.0, {})), -46);
    EXPECT_EQ(std::lround(entropy(Model::MSA, ion, W(), 25.0, {})), -198);
    EXPECT_NEAR(entropy_analytic(Model::MSA, ion, W(), 25.0), -198.132072974956, 1e-8);
    EXPECT_NEAR(entropy_analytic(Model::Born, ion, W(), 25.0), -45.780859355958, 1e-8);
    EXPECT_NEAR(entropy_analytic(Model::MSA, ion, W(), 25.0), -197.9, 0.3);
    EXPECT_THROW(entropy_analytic(Model::HSBC, ion, W(), 25.0), DomainError);
}

TEST(Entropy, AnalyticMatchesFiniteDifference) {
    for (const auto &s : builtin_solvents())
        for (const auto &ion : builtin_ion_set())
            for (Model m : {Model::Born, Model::MSA})
                EXPECT_NEAR(entropy(m, ion, s, 25.0, {}), entropy_analytic(m, ion, s, 25.0), 0.1)
                    << s.name() << " " << ion.name;
}

TEST(Entropy, SplitFormMatchesFiniteDifference) {
    const AlphaLaw law{1.0, 0.001};
    for (const auto &s : builtin_solvents())
        for (const auto &ion : builtin_ion_set())
            EXPECT_NEAR(entropy(Model::HSBC, ion, s, 25.0, law), hsbc_entropy_split(ion, s, 25.0, law), 1.0)
                << s.name() << " " << ion.name;
}

TEST(Entropy, RangeEdgesUseOneSidedStencil) {
    const auto &f = builtin_solvent("F");
    const auto ion = builtin_ion("Na+");
    EXPECT_NEAR(entropy(Model::Born, ion, f, 25.0, {}), entropy_analytic(Model::Born, ion, f, 25.0), 1e-3);
    EXPECT_NEAR(entropy(Model::Born, ion, f, 18.0, {}), entropy_analytic(Model::Born, ion, f, 18.0), 1e-3);
    EXPECT_THROW(entropy(Model::Born, ion, f, 25.5, {}), RangeError);
}

TEST(Entropy, StencilIsExactForQuadratics) {
    auto f = [](double t) { return 3.0 * t * t - 2.0 * t + 1.0; };
    const TemperatureRange r{0.0, 10.0};
    for (double t : {0.0, 0.05, 5.0, 9.95, 10.0}) EXPECT_NEAR(temperature_derivative(r, t, 0.1, f), 6.0 * t - 2.0, 1e-9);
    EXPECT_THROW(temperature_derivative(TemperatureRange{0.0, 0.1}, 0.05, 0.1, f), RangeError);
    EXPECT_THROW(temperature_derivative(r, 11.0, 0.1, f), RangeError);
}

TEST(ChargingRatio, Values) {
    EXPECT_EQ(charging_ratio(0.0), 1.0);
    EXPECT_NEAR(charging_ratio(0.6), 1.08624053107479, 1e-10);
    EXPECT_NEAR(charging_ratio(0.6), 1.086, 5e-4);
    EXPECT_THROW(charging_ratio(-0.1), DomainError);
}

TEST(ChargingRatio, MatchesClosedFormAndIsMonotone) {
    double previous = 1.0;
    for (int i = 1; i <= 200; ++i) {
        const double h = 0.01 * i;
        const double r = charging_ratio(h);
        EXPECT_NEAR(r, oracle::charging_ratio(h), 1e-10) << h;
        EXPECT_GE(r, previous);
        previous = r;
    }
}

TEST(Concurrency, ParallelEvaluationIsBitwiseIdentical) {
    const auto ions = builtin_ion_set();
    std::vector<double> sequential, parallel(ions.size() * 5 * 2);
    for (const auto &s : builtin_solvents())
        for (const auto &ion : ions) {
            sequential.push_back(free_energy(Model::HSBC, ion, s, 25.0, published_w));
            sequential.push_back(entropy(Model::HSBC, ion, s, 25.0, published_w));
        }
    std::vector<std::thread> threads;
    const auto &solvents = builtin_solvents();
    for (std::size_t k = 0; k < solvents.size(); ++k)
        threads.emplace_back([&, k] {
            for (std::size_t i = 0; i < ions.size(); ++i) {
                const std::size_t idx = 2 * (k * ions.size() + i);
                parallel[idx] = free_energy(Model::HSBC, ions[i], solvents[k], 25.0, published_w);
                parallel[idx + 1] = entropy(Model::HSBC, ions[i], solvents[k], 25.0, published_w);
            }
        });
    for (auto &t : threads) t.join();
    EXPECT_EQ(sequential, parallel);
}
