#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "upslope/chars.hpp"
#include "upslope/literal.hpp"
#include "upslope/padic.hpp"
#include "upslope/rng.hpp"

using namespace upslope;

namespace {

CtxPtr ctx3_2(int prec = 40) { return PadicContext::create(3, 2, prec, 3); }
CtxPtr ctx3_3(int prec = 40) { return PadicContext::create(3, 3, prec, 9); }

// norm of zeta_n - c as resultant Res(Phi_n, x - c) = Phi_n(c), for the
// valuation oracle (prime-power n only)
std::int64_t cyclotomic_norm_of_zeta_minus(std::int64_t n, std::int64_t p, std::int64_t c) {
    // Phi_{p^k}(x) = sum_{i<p} x^{i p^{k-1}}
    std::int64_t step = n / p;
    std::int64_t acc = 0;
    for (std::int64_t i = 0; i < p; ++i) {
        std::int64_t term = 1;
        for (std::int64_t t = 0; t < i * step; ++t) term *= c;
        acc += term;
    }
    return acc;
}

}  // namespace

TEST_CASE("context validation") {
    CHECK_THROWS(PadicContext::create(2, 2, 10));
    CHECK_THROWS(PadicContext::create(4, 1, 10));
    CHECK_THROWS(PadicContext::create(3, 1, 0));
    CHECK_THROWS(PadicContext::create(3, 2, 41));   // 3^41 overflows
    CHECK_THROWS(PadicContext::create(5, 2, 30));   // 5^30 overflows
    CHECK_THROWS(PadicContext::create(3, 2, 10, 5));  // cyclo order not a p-power
    CHECK_THROWS(PadicContext::create(5, 1, 10, 1, 3));  // 3 does not divide p-1
    auto c = PadicContext::create(3, 3, 40, 9);
    CHECK(c->e == 6);
    auto c2 = PadicContext::create(3, 4, 40, 27);
    CHECK(c2->e == 18);
    auto c3 = PadicContext::create(3, 1, 40);
    CHECK(c3->e == 1);
}

TEST_CASE("valuation: stated values") {
    auto ctx = ctx3_2();
    // v(p) = 1
    CHECK(CycloElt::from_int(ctx.get(), 3).valuation().known_eq(Rat(1)));
    // v(xi - 1) = 1/2 for a primitive cube root xi
    CycloElt xi = CycloElt::zeta(ctx.get());
    CHECK((xi - CycloElt::one(ctx.get())).valuation().known_eq(Rat(1, 2)));
    // v(1) = 0
    CHECK(CycloElt::one(ctx.get()).valuation().known_eq(Rat(0)));
    // v(zeta_9 - 1) = 1/6 in the e = 6 context, against the norm oracle
    auto c9 = ctx3_3();
    CycloElt z9 = CycloElt::zeta(c9.get());
    CHECK((z9 - CycloElt::one(c9.get())).valuation().known_eq(Rat(1, 6)));
    std::int64_t nrm = cyclotomic_norm_of_zeta_minus(9, 3, 1);
    CHECK(nrm == 3);  // v_p(norm)/e = 1/6
    // zero at precision
    CHECK_FALSE(CycloElt::zero(ctx.get()).valuation().is_exact());
    CHECK(CycloElt::zero(ctx.get()).valuation().lower_bound() == Rat(40));
}

TEST_CASE("valuation properties: multiplicative and ultrametric") {
    auto ctx = ctx3_3(20);
    SplitMix64 rng(42);
    auto random_elt = [&] {
        std::vector<std::uint64_t> c(ctx->e);
        for (auto& v : c) v = rng.below(ctx->modulus());
        return CycloElt::from_pi_coeffs(ctx.get(), c, ctx->prec);
    };
    for (int t = 0; t < 1000; ++t) {
        CycloElt x = random_elt(), y = random_elt();
        Valuation vx = x.valuation(), vy = y.valuation(), vxy = (x * y).valuation();
        if (vx.is_exact() && vy.is_exact() && vx.value() + vy.value() < Rat(ctx->prec)) {
            REQUIRE(vxy.is_exact());
            REQUIRE(vxy.value() == vx.value() + vy.value());
        }
        Valuation vs = (x + y).valuation();
        Rat lo = vx.lower_bound() < vy.lower_bound() ? vx.lower_bound() : vy.lower_bound();
        REQUIRE(vs.lower_bound() >= lo);
        if (vx.is_exact() && vy.is_exact() && !(vx.value() == vy.value()))
            REQUIRE(vs.known_eq(vx.value() < vy.value() ? vx.value() : vy.value()));
    }
}

TEST_CASE("teichmuller") {
    auto ctx = ctx3_2();
    CHECK(teichmuller(ctx.get(), 1).equal_at_min_prec(CycloElt::one(ctx.get())));
    // p = 3, a = 2: the only nontrivial square root of 1 is -1
    CHECK(teichmuller(ctx.get(), 2).equal_at_min_prec(CycloElt::from_int(ctx.get(), -1)));
    // p = 5, a = 2: x^4 = 1, x = 2 mod 5, exhaustively 7 mod 25
    auto c5 = PadicContext::create(5, 1, 10);
    std::uint64_t found = 0;
    for (std::uint64_t x = 0; x < 25; ++x)
        if (x % 5 == 2 && (x * x % 25) * (x * x % 25) % 25 == 1) found = x;
    CHECK(found == 7);
    CHECK(*teichmuller(c5.get(), 2).rational_residue(2) == 7);
    // omega(a)^{p-1} = 1 and omega(a) = a mod p
    for (std::int64_t a = 1; a < 3; ++a) {
        CycloElt w = teichmuller(ctx.get(), a);
        CHECK(w.pow_u64(2).equal_at_min_prec(CycloElt::one(ctx.get())));
        CHECK(*w.rational_residue(1) == static_cast<std::uint64_t>(a));
    }
    CHECK_THROWS(teichmuller(ctx.get(), 3));
}

TEST_CASE("hensel_sqrt") {
    auto ctx = ctx3_2();
    // nu_3 = sqrt(-2), = 1 mod 3, with expansion 1 + 3 + 2*9 + 2*243 + 2187 mod 3^8
    CycloElt nu = hensel_sqrt(ctx.get(), -2, 1);
    std::uint64_t mod38 = 6561;
    CHECK(*nu.rational_residue(8) % mod38 == (1 + 3 + 2 * 9 + 2 * 243 + 2187) % mod38);
    CHECK((nu * nu).equal_at_min_prec(CycloElt::from_int(ctx.get(), -2)));
    // sqrt(1) with hint 1
    CHECK(hensel_sqrt(ctx.get(), 1, 1).equal_at_min_prec(CycloElt::one(ctx.get())));
    // sqrt(4) with hint 1 is -2 (the root congruent to 1 mod 3)
    CycloElt r = hensel_sqrt(ctx.get(), 4, 1);
    CHECK(r.equal_at_min_prec(CycloElt::from_int(ctx.get(), -2)));
    CHECK((r * r).equal_at_min_prec(CycloElt::from_int(ctx.get(), 4)));
    CHECK_THROWS(hensel_sqrt(ctx.get(), 2, 1));  // 2 is not a QR mod 3 with hint 1
}

TEST_CASE("unit inversion and exact division") {
    auto ctx = ctx3_3(30);
    SplitMix64 rng(7);
    for (int t = 0; t < 50; ++t) {
        std::vector<std::uint64_t> c(ctx->e);
        for (auto& v : c) v = rng.below(ctx->modulus());
        c[0] |= 1;
        if (c[0] % 3 == 0) c[0] += 1;
        CycloElt x = CycloElt::from_pi_coeffs(ctx.get(), c, ctx->prec);
        CycloElt xi = x.inverse_unit();
        CHECK((x * xi).equal_at_min_prec(CycloElt::one(ctx.get())));
    }
    // pi-division round trip
    CycloElt pi = CycloElt::pi(ctx.get());
    CycloElt y = CycloElt::from_int(ctx.get(), 12) * pi.pow_u64(4);
    CHECK(y.div_pi_pow_exact(4).equal_at_min_prec(CycloElt::from_int(ctx.get(), 12)));
    CHECK_THROWS(CycloElt::one(ctx.get()).div_pi_pow_exact(1));
}

TEST_CASE("exp and log scalars") {
    auto ctx = ctx3_2();
    CycloElt g0 = exp_scalar(ctx.get(), 6);  // exp(2p)
    CycloElt lg = log_scalar_residue(ctx.get(), g0.coeffs()[0]);
    CHECK(lg.equal_at_min_prec(CycloElt::from_int(ctx.get(), 6)));
    CHECK_THROWS(exp_scalar(ctx.get(), 1));
}

TEST_CASE("char_eval: the conductor-9 character") {
    auto ctx = ctx3_2();
    DirichletCharacter psi{2, 0, 2};
    // psi(-1) = 1
    CHECK(psi.sign(3) == 1);
    CycloElt xi = char_eval(ctx.get(), psi, 4);
    // primitive cube root of unity
    CHECK_FALSE(xi.equal_at_min_prec(CycloElt::one(ctx.get())));
    CHECK(xi.pow_u64(3).equal_at_min_prec(CycloElt::one(ctx.get())));
    // psi(7) = psi(4)^2
    CHECK(char_eval(ctx.get(), psi, 7).equal_at_min_prec(xi * xi));
    // multiplicativity over all unit pairs mod 9
    for (std::int64_t a = 1; a < 9; ++a) {
        if (a % 3 == 0) continue;
        for (std::int64_t b = 1; b < 9; ++b) {
            if (b % 3 == 0) continue;
            CHECK(char_eval(ctx.get(), psi, a * b)
                      .equal_at_min_prec(char_eval(ctx.get(), psi, a) * char_eval(ctx.get(), psi, b)));
        }
    }
    // trivial character
    DirichletCharacter triv{1, 0, 0};
    CHECK(char_eval(ctx.get(), triv, 5).equal_at_min_prec(CycloElt::one(ctx.get())));
    CHECK_THROWS(char_eval(ctx.get(), psi, 6));
}

TEST_CASE("kappa_eval: scalar part and invariants") {
    auto ctx = ctx3_2();
    DirichletCharacter triv{1, 0, 0};
    // kappa = x: psi(d) d^0 = 1
    WeightChar kx = WeightChar::classical(1, triv);
    CHECK(kappa_eval(ctx.get(), kx, CycloElt::from_int(ctx.get(), 7))
              .equal_at_min_prec(CycloElt::one(ctx.get())));
    // the conductor-9 character at d = 4 with w = 0: psi(4) <4>^0 = xi
    DirichletCharacter psi{2, 0, 2};
    WeightChar disk0 = WeightChar::disk(psi, CycloElt::zero(ctx.get()));
    CHECK(kappa_eval(ctx.get(), disk0, CycloElt::from_int(ctx.get(), 4))
              .equal_at_min_prec(char_eval(ctx.get(), psi, 4)));
    // DiskPoint(psi, k-1) matches Classical(k, psi omega^{k-1}) on units = 1 mod 2p
    DirichletCharacter psi_tw = psi;
    psi_tw.tame_exp = (psi.tame_exp + 3) % 2;  // omega^{k-1} for k = 4: omega^3 = omega
    {
        int k = 4;
        DirichletCharacter tw = psi;
        tw.tame_exp = (tw.tame_exp + static_cast<std::uint64_t>(k - 1)) % 2;
        WeightChar disk = WeightChar::disk(psi, CycloElt::from_int(ctx.get(), k - 1));
        WeightChar cls = WeightChar::classical(k, tw);
        for (std::int64_t d : {7, 13, 19}) {  // units congruent to 1 mod 6... 7, 13, 19
            CycloElt dd = CycloElt::from_int(ctx.get(), d);
            CHECK(kappa_eval(ctx.get(), disk, dd)
                      .equal_at_min_prec(kappa_eval(ctx.get(), cls, dd)));
        }
    }
    // <a>^w <b>^w = <ab>^w at working precision (series path included)
    {
        CycloElt w = CycloElt::pi(ctx.get()) + CycloElt::from_int(ctx.get(), 2);
        SplitMix64 rng(11);
        for (int t = 0; t < 20; ++t) {
            std::uint64_t a = 1 + 3 * rng.below(1000);
            std::uint64_t b = 1 + 3 * rng.below(1000);
            CycloElt lhs = one_unit_pow(ctx.get(), a, w) * one_unit_pow(ctx.get(), b, w);
            CycloElt rhs =
                one_unit_pow(ctx.get(), mulmod(a, b, ctx->modulus()), w);
            REQUIRE(lhs.equal_at_min_prec(rhs));
        }
    }
    // T-coordinate: v(T) = v(2kp) for kappa = x^k
    for (int k : {1, 3, 9}) {
        WeightChar kk = WeightChar::classical(k, triv);
        CycloElt T = t_coordinate(ctx.get(), kk);
        int expect = 1 + val_p_u64(static_cast<std::uint64_t>(k), 3);
        CHECK(T.valuation().known_eq(Rat(expect)));
    }
    // log(exp(2p)) = 2p round-trip lives in exp/log scalar test
}

TEST_CASE("cyclotomic literals round-trip") {
    auto ctx = ctx3_3(20);
    // z^7 reduces in the power basis (zeta_9^6 = -zeta^3 - 1); the canonical
    // form is stable and value-preserving
    CycloElt v = parse_cyclo(ctx.get(), "z^7 - 2*z + 3");
    CHECK(format_cyclo(v) == "-z^4 - 3*z + 3");
    CHECK(parse_cyclo(ctx.get(), format_cyclo(v)).equal_at_min_prec(v));
    CHECK(format_cyclo(parse_cyclo(ctx.get(), "z^5 - 2*z + 3")) == "z^5 - 2*z + 3");
    CHECK(format_cyclo(parse_cyclo(ctx.get(), "0")) == "0");
    CHECK(format_cyclo(parse_cyclo(ctx.get(), "-1")) == "-1");
    // z^9 = 1 in the order-9 context
    CHECK(parse_cyclo(ctx.get(), "z^9").equal_at_min_prec(CycloElt::one(ctx.get())));
    // property: parse(format(x)) == x on random elements
    SplitMix64 rng(5);
    for (int t = 0; t < 200; ++t) {
        std::vector<std::uint64_t> c(ctx->e);
        for (auto& v : c) v = rng.below(ctx->modulus());
        CycloElt x = CycloElt::from_pi_coeffs(ctx.get(), c, ctx->prec);
        CycloElt y = parse_cyclo(ctx.get(), format_cyclo(x));
        REQUIRE(y.equal_at_min_prec(x));
    }
}

TEST_CASE("conjugation is a ring automorphism fixing Z_p") {
    auto ctx = ctx3_3(20);
    SplitMix64 rng(9);
    for (int t = 0; t < 100; ++t) {
        std::vector<std::uint64_t> c(ctx->e), d(ctx->e);
        for (auto& v : c) v = rng.below(ctx->modulus());
        for (auto& v : d) v = rng.below(ctx->modulus());
        CycloElt x = CycloElt::from_pi_coeffs(ctx.get(), c, ctx->prec);
        CycloElt y = CycloElt::from_pi_coeffs(ctx.get(), d, ctx->prec);
        REQUIRE((x * y).conj().equal_at_min_prec(x.conj() * y.conj()));
        REQUIRE((x + y).conj().equal_at_min_prec(x.conj() + y.conj()));
    }
    CHECK(CycloElt::from_int(ctx.get(), 17).conj().equal_at_min_prec(
        CycloElt::from_int(ctx.get(), 17)));
    // conj(zeta) * zeta = 1
    CycloElt z = CycloElt::zeta(ctx.get());
    CHECK((z.conj() * z).equal_at_min_prec(CycloElt::one(ctx.get())));
}
