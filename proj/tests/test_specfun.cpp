#include <gtest/gtest.h>

#include <limits>

#include <helmbem/specfun.hpp>

using namespace helmbem;

namespace {

// mpmath at 40 digits: x, J0, J1, J2, Y0, Y1, Y2, StruveH0, StruveH1, StruveH2
const double kBesselRef[][10] = {
    {1.00000000000000002e-03, 9.99999750000015619e-01, 4.99999937500002645e-04, 1.24999989583333652e-07, -4.47141661137592283e+00, -6.36622167231139429e+02, -1.27323986304566753e+06, 6.36619701632053941e-04, 2.12206576642088150e-07, 4.24413161368236556e-11},
    {1.00000000000000006e-01, 9.97501562066040015e-01, 4.99375260362419984e-02, 1.24895865879991901e-03, -1.53423865135036674e+00, -6.45895109470202655e+00, -1.27644783242690153e+02, 6.35912699949335580e-02, 2.12065160142555420e-03, 4.24211124968965902e-05},
    {1.00000000000000000e+00, 7.65197686557966605e-01, 4.40050585744933498e-01, 1.14903484931900474e-01, 8.82569642156769557e-02, -7.81212821300288685e-01, -1.65068260681625434e+00, 5.68656627048287899e-01, 1.98457336201944390e-01, 4.04646361447946259e-02},
    {3.89999999999999991e+00, -4.01826014887639915e-01, -2.72440396207798904e-02, 3.87854712518009181e-01, 2.33759081987189622e-02, 4.07820019526537902e-01, 1.85762563353351756e-01, 1.78931155604483000e-01, 1.08127615155406565e+00, 1.20317513901391915e+00},
    {4.09999999999999964e+00, -3.88669679835853710e-01, -1.03273257747338573e-01, 3.38292480934712925e-01, -5.60946266063444832e-02, 3.84594034818916575e-01, 2.43701472859474549e-01, 9.24207816024588125e-02, 1.05484794623738765e+00, 1.29218621440757109e+00},
    {1.00000000000000000e+01, -2.45935764451348349e-01, 4.34727461688614383e-02, 2.54630313685120624e-01, 5.56711672835993945e-02, 2.49015424206953884e-01, -5.86808244220861450e-03, 1.18743683687461271e-01, 8.91832492094538076e-01, 2.18168872262338409e+00},
    {1.70000000000000000e+01, -1.69854252151183549e-01, -9.76684927577806533e-02, 1.58363841238503472e-01, -9.26371984423236955e-02, 1.67205036077233693e-01, 1.12308379157292360e-01, -5.53148217663712444e-02, 8.06005845242157681e-01, 3.75765108226997802e+00},
    {2.98999999999999986e+01, -9.78111500660624467e-02, -1.09916810709372259e-01, 9.04588550353351978e-02, -1.08266517021775519e-01, 9.60148297906092546e-02, 1.14688913663287845e-01, -8.69984683267977510e-02, 7.33344345916911888e-01, 6.48102866642983955e+00},
    {3.01000000000000014e+01, -7.41013723240185884e-02, -1.26372682721439922e-01, 6.57045163292385159e-02, -1.25124867785074728e-01, 7.20336636940051428e-02, 1.29911157731520260e-01, -1.03997827708655774e-01, 7.09353809589325257e-01, 6.53854935395769576e+00},
    {5.00000000000000000e+01, 5.58123276692518155e-02, -9.75118281251751429e-02, -5.97128007942588218e-02, -9.80649954700770765e-02, -5.67956685620147686e-02, 9.57931687275964949e-02, -8.53376748261189949e-02, 5.80078447945441944e-01, 1.07188703522036253e+01},
    {1.00000000000000000e+02, 1.99858503042231218e-02, -7.71453520141121563e-02, -2.15287573445053643e-02, -7.72443133650831532e-02, -2.03723120027597925e-02, 7.68368671250279495e-02, -7.08787516896473430e-02, 6.16311103272013439e-01, 2.13038640526744665e+01},
    {2.00000000000000000e+02, -1.54374399305650910e-02, -5.43045381823782231e-02, 1.48943945487413094e-02, -5.42657752498179116e-02, 1.53018245803899899e-02, 5.44187934956218075e-02, -5.10827559475577966e-02, 6.51937511249065627e-01, 4.24989202888988018e+01},
};

// sigma, calI0, calI1, Gamma0, Gamma2 (re, im), kind 1; mpmath quadrature of the defining integrals
const double kPrimitiveRef[][9] = {
    {1.00000000000000006e-01, 9.99166979104670339e-02, -2.17430566620116617e-01, 4.99375260362420071e-03, -9.27533710262135741e-03, 4.99791718742250302e-03, -1.24677195593903070e-02, -8.33055611352238370e-06, 2.12231917476492933e-05},
    {6.99999999999999956e-01, 6.71936809408976599e-01, -6.24099634076743404e-01, 2.30297019078041232e-01, -1.35655137967762018e-01, 2.40058747508242354e-01, -3.01214605885958331e-01, -1.96847281385313586e-02, 2.57409019363988960e-02},
    {1.00000000000000000e+00, 9.19730410089760198e-01, -6.37069376607423132e-01, 4.40050585744933498e-01, -1.44593048932707385e-01, 4.79679824344826700e-01, -4.92476327674715719e-01, -8.06106758687676478e-02, 8.70105549086779562e-02},
    {2.25999999999999979e+00, 1.46475266806580628e+00, -1.47489255117385920e-01, 1.23565549715712675e+00, 7.09526103607086789e-01, 2.07468553267159495e+00, -1.04285182017237887e+00, -1.83952142154273623e+00, 1.01604873055329681e+00},
    {1.00000000000000000e+01, 1.06701130395673682e+00, 2.41290318322666841e-01, 4.34727461688614369e-01, 3.12677401443712011e+00, 1.02353855778787537e+01, -7.13870831210451695e-01, -1.71246250127988958e+02, 3.32224528695734200e+00},
    {3.00000000000000000e+01, 8.84249088825474927e-01, 8.82297119480366515e-02, -3.56253187849868791e+00, 3.16938689221999859e+00, 3.00900045432629355e+01, -5.22495533778898902e-01, -4.51855926278933111e+03, 3.37812747510335765e+00},
};

// z, H1~ re, im, H2~ re, im (kind 1)
const double kRegRef[][5] = {
    {5.00000000000000000e-01, 2.42268457674873899e-01, -1.98232847935080392e-01, 3.06040234586826415e-02, -3.48412658233615002e-01},
    {9.99999999999999955e-07, 4.99999999999937509e-07, -4.59367068392220142e-06, 1.24999999999989572e-13, -3.18309886184958979e-01},
    {3.00000000000000000e+00, 3.39058958525936482e-01, 5.36881015580993770e-01, 4.86091260585891083e-01, -1.89293329587945439e-02},
};

void expect_rel(double got, double want, double rel, double abs_floor = 1e-14) {
    EXPECT_LE(std::abs(got - want), std::max(rel * std::abs(want), abs_floor)) << "want " << want << " got " << got;
}

}  // namespace

TEST(Bessel, MatchesReferenceJY) {
    for (const auto& r : kBesselRef) {
        for (int n = 0; n < 3; ++n) {
            SCOPED_TRACE("x=" + std::to_string(r[0]) + " n=" + std::to_string(n));
            expect_rel(bessel(BesselFamily::J, n, r[0]), r[1 + n], 1e-12);
            expect_rel(bessel(BesselFamily::Y, n, r[0]), r[4 + n], 1e-12);
        }
    }
}

TEST(Bessel, MatchesReferenceStruve) {
    for (const auto& r : kBesselRef) {
        for (int n = 0; n < 3; ++n) {
            SCOPED_TRACE("x=" + std::to_string(r[0]) + " n=" + std::to_string(n));
            expect_rel(struve_h(n, r[0]), r[7 + n], 1e-12);
        }
    }
}

TEST(Bessel, OriginValues) {
    EXPECT_EQ(bessel(BesselFamily::J, 0, 0.0), 1.0);
    EXPECT_EQ(bessel(BesselFamily::StruveH, 0, 0.0), 0.0);
    EXPECT_NEAR(bessel(BesselFamily::StruveH, -1, 0.0), 2.0 / kPi, 1e-15);
}

TEST(Bessel, StruveMinusOneRecurrence) {
    for (double z = 0.01; z <= 200.0; z *= 1.07)
        EXPECT_NEAR(struve_h(-1, z) + struve_h(1, z), 2.0 / kPi, 1e-12) << z;
}

TEST(Bessel, StruveContinuousAcrossRangeSwitches) {
    for (int nu = 0; nu < 3; ++nu)
        for (double x : {4.0, 30.0}) {
            const double lo = struve_h(nu, x * (1 - 1e-12)), hi = struve_h(nu, x * (1 + 1e-12));
            EXPECT_NEAR(lo, hi, 1e-11 * std::max(1.0, std::abs(lo))) << nu << " " << x;
        }
}

TEST(Bessel, RejectsBadInput) {
    EXPECT_THROW(bessel(BesselFamily::J, 0, std::nan("")), DomainError);
    EXPECT_THROW(bessel(BesselFamily::J, 3, 1.0), ArgumentError);
    EXPECT_THROW(bessel(BesselFamily::StruveH, -2, 1.0), ArgumentError);
    EXPECT_THROW(bessel(BesselFamily::Y, 0, -1.0), DomainError);
}

TEST(Hankel, ComposedFromJY) {
    const cplx h = hankel(HankelKind::First, 2, 3.0);
    EXPECT_DOUBLE_EQ(h.real(), bessel(BesselFamily::J, 2, 3.0));
    EXPECT_DOUBLE_EQ(h.imag(), bessel(BesselFamily::Y, 2, 3.0));
    EXPECT_NEAR(h.real(), 0.48609126058589108, 1e-15);
    EXPECT_NEAR(h.imag(), -0.16040039348492374, 1e-15);
}

TEST(Hankel, SmallArgumentLimit) {
    const double z = 1e-8;
    EXPECT_LE(std::abs(z * hankel(HankelKind::First, 1, z) + cplx(0, 2.0 / kPi)), 1e-6);
}

TEST(Hankel, RecurrenceBothKinds) {
    for (HankelKind kind : {HankelKind::First, HankelKind::Second})
        for (double z = 0.01; z <= 100.0; z *= 1.05) {
            const cplx r = z * hankel(kind, 0, z) + z * hankel(kind, 2, z) - 2.0 * hankel(kind, 1, z);
            EXPECT_LE(std::abs(r), 1e-10 * std::abs(hankel(kind, 1, z))) << z;
        }
}

TEST(Hankel, SecondKindIsConjugate) {
    for (int n = 0; n < 3; ++n)
        for (double z : {0.01, 0.5, 3.0, 40.0}) {
            EXPECT_EQ(hankel(HankelKind::Second, n, z), std::conj(hankel(HankelKind::First, n, z)));
        }
}

TEST(Hankel, DomainErrors) {
    EXPECT_THROW(hankel(HankelKind::First, 0, 0.0), DomainError);
    EXPECT_THROW(hankel(HankelKind::First, 0, -1.0), DomainError);
    EXPECT_THROW(hankel_reg(HankelKind::First, 1, 0.0), DomainError);
    EXPECT_THROW(hankel(HankelKind::First, 3, 1.0), ArgumentError);
    EXPECT_THROW(hankel_reg(HankelKind::First, 0, 1.0), ArgumentError);
}

TEST(HankelReg, MatchesReference) {
    for (const auto& r : kRegRef) {
        const cplx h1 = hankel_reg(HankelKind::First, 1, r[0]), h2 = hankel_reg(HankelKind::First, 2, r[0]);
        EXPECT_NEAR(h1.real(), r[1], 1e-14);
        EXPECT_NEAR(h1.imag(), r[2], 1e-13);
        EXPECT_NEAR(h2.real(), r[3], 1e-14);
        EXPECT_NEAR(h2.imag(), r[4], 1e-13);
    }
}

TEST(HankelReg, DifferenceIsSubtractionTerm) {
    for (double x : {0.3, 1.0, 2.5, 7.0}) {
        EXPECT_NEAR(std::abs(hankel_reg(HankelKind::First, 1, x) - hankel(HankelKind::First, 1, x) -
                             cplx(0, 2 / (kPi * x))),
                    0.0, 1e-13);
        EXPECT_NEAR(std::abs(hankel_reg(HankelKind::Second, 2, x) - hankel(HankelKind::Second, 2, x) -
                             cplx(0, -4 / (kPi * x * x))),
                    0.0, 1e-13);
    }
}

TEST(HankelReg, SecondKindSmallArgument) {
    const cplx h = hankel_reg(HankelKind::Second, 1, 0.5);
    EXPECT_NEAR(h.real(), 2.42268457674873899e-01, 1e-14);
    EXPECT_NEAR(h.imag(), 1.98232847935080392e-01, 1e-14);
    EXPECT_LE(std::abs(hankel_reg(HankelKind::First, 2, 1e-6) - cplx(0, -1 / kPi)), 1e-4);
}

TEST(Primitives, MatchReferenceIntegrals) {
    for (const auto& r : kPrimitiveRef) {
        const double s = r[0];
        SCOPED_TRACE("sigma=" + std::to_string(s));
        const cplx i0 = calI0(HankelKind::First, s), i1 = calI1(HankelKind::First, s);
        const cplx g0 = gamma0(HankelKind::First, s, 20), g2 = gamma2(HankelKind::First, s, 20);
        const double scale = std::max(1.0, s * s * s / 100);
        EXPECT_LE(std::abs(i0 - cplx(r[1], r[2])), 1e-12);
        EXPECT_LE(std::abs(i1 - cplx(r[3], r[4])), 1e-12 * std::max(1.0, s));
        EXPECT_LE(std::abs(g0 - cplx(r[5], r[6])), 1e-11 * std::max(1.0, s));
        EXPECT_LE(std::abs(g2 - cplx(r[7], r[8])), 1e-11 * scale);
    }
}

TEST(Primitives, ZeroAtOrigin) {
    EXPECT_EQ(calI0(HankelKind::First, 0.0), cplx(0.0, 0.0));
    EXPECT_EQ(calI1(HankelKind::First, 0.0), cplx(0.0, 0.0));
    EXPECT_EQ(gamma0(HankelKind::First, 0.0, 20), cplx(0.0, 0.0));
    EXPECT_EQ(gamma2(HankelKind::First, 0.0, 20), cplx(0.0, 0.0));
}

TEST(Primitives, SmallSigmaLimit) {
    for (HankelKind kind : {HankelKind::First, HankelKind::Second}) {
        EXPECT_LE(std::abs(calI0(kind, 1e-12)), 1e-10);
        EXPECT_LE(std::abs(calI1(kind, 1e-12)), 1e-10);
    }
    // the guarded expansion joins the closed form smoothly
    const cplx below = calI0(HankelKind::First, 0.999999e-8), above = calI0(HankelKind::First, 1.000001e-8);
    EXPECT_LE(std::abs(below - above), 1e-12);
}

TEST(Primitives, CalI1Definition) {
    const cplx want = 2.0 * hankel(HankelKind::First, 1, 2.0) + cplx(0, 2 / kPi);
    EXPECT_LE(std::abs(calI1(HankelKind::First, 2.0) - want), 1e-14);
}

TEST(Primitives, KindConjugation) {
    for (double s : {0.05, 1.0, 2.26, 12.0}) {
        EXPECT_EQ(calI0(HankelKind::Second, s), std::conj(calI0(HankelKind::First, s)));
        EXPECT_EQ(calI1(HankelKind::Second, s), std::conj(calI1(HankelKind::First, s)));
        EXPECT_EQ(gamma0(HankelKind::Second, s, 20), std::conj(gamma0(HankelKind::First, s, 20)));
        EXPECT_EQ(gamma2(HankelKind::Second, s, 20), std::conj(gamma2(HankelKind::First, s, 20)));
    }
    EXPECT_LT(gamma2(HankelKind::First, 1.0, 20).imag() * gamma2(HankelKind::Second, 1.0, 20).imag(), 0.0);
}

TEST(Primitives, GammaConvergesInNq) {
    for (double s : {0.5, 2.26, 10.0, 30.0}) {
        const cplx a0 = gamma0(HankelKind::First, s, 20), b0 = gamma0(HankelKind::First, s, 40);
        const cplx a2 = gamma2(HankelKind::First, s, 20), b2 = gamma2(HankelKind::First, s, 40);
        EXPECT_LE(std::abs(a0 - b0), 1e-10 * std::abs(b0)) << s;
        EXPECT_LE(std::abs(a2 - b2), 1e-10 * std::abs(b2)) << s;
    }
}

TEST(Primitives, DomainErrors) {
    EXPECT_THROW(calI0(HankelKind::First, -1.0), DomainError);
    EXPECT_THROW(calI1(HankelKind::First, -1.0), DomainError);
    EXPECT_THROW(gamma0(HankelKind::First, -1.0, 20), DomainError);
    EXPECT_THROW(gamma2(HankelKind::First, 1.0, 1), ArgumentError);
    EXPECT_THROW(calI0(HankelKind::First, std::numeric_limits<double>::infinity()), DomainError);
}

TEST(Primitives, CalI0RealPartRisesFromZero) {
    // real part increases from 0 up to its first maximum near the first zero of J0
    double prev = 0.0;
    for (double s = 0.1; s < 2.4; s += 0.1) {
        const double re = calI0(HankelKind::First, s).real();
        EXPECT_GT(re, prev) << s;
        prev = re;
    }
}
