use super::*;
use crate::series_core::{qz, Cyc, PuiseuxSeries};
use num::{One, Zero};

fn c(n: i64) -> Cyc {
    Cyc::from_int(n)
}

#[test]
fn eta_pentagonal_coefficients() {
    let eta = eta_series(rat(7, 1));
    assert_eq!(eta.coeff(rat(1, 24)).unwrap(), c(1));
    assert_eq!(eta.coeff(rat(25, 24)).unwrap(), c(-1)); // 1 + 1/24
    assert_eq!(eta.coeff(rat(49, 24)).unwrap(), c(-1)); // 2 + 1/24
    assert_eq!(eta.coeff(rat(121, 24)).unwrap(), c(1)); // 5 + 1/24
    assert_eq!(eta.coeff(rat(73, 24)).unwrap(), c(0)); // 3 + 1/24 absent
}

#[test]
fn eta_matches_truncated_product_oracle() {
    // multiply out q^{1/24} prod_{n<=8} (1 - q^n) directly
    let mut prod = PuiseuxSeries::monomial(rat(1, 24), Cyc::one());
    for n in 1..=8i64 {
        let f = PuiseuxSeries::from_terms([
            (rat(0, 1), Cyc::one()),
            (rat(n, 1), c(-1)),
        ]);
        prod = prod.mul(&f);
    }
    let eta = eta_series(rat(8, 1));
    let out = eta.eq_within(&prod.truncate(rat(8, 1)), rat(0, 1), rat(8, 1)).unwrap();
    assert!(out.is_ok(), "{:?}", out);
}

#[test]
fn eisenstein_series_normalization() {
    let e2 = eisenstein(2, rat(6, 1)).unwrap();
    let e4 = eisenstein(4, rat(6, 1)).unwrap();
    let e6 = eisenstein(6, rat(6, 1)).unwrap();
    for e in [&e2, &e4, &e6] {
        assert!(e.coeff(rat(0, 1)).unwrap().is_one());
    }
    assert_eq!(e2.coeff(rat(1, 1)).unwrap(), c(-24));
    assert_eq!(e6.coeff(rat(1, 1)).unwrap(), c(-504));
    // divisor-sum brute force for E4: 240 * sigma_3(n)
    for n in 1..6i64 {
        let sigma3: i64 = (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum();
        assert_eq!(
            e4.coeff(rat(n, 1)).unwrap(),
            Cyc::from_rational(qz(240) * qz(sigma3)),
            "E4 q^{n}"
        );
    }
    assert!(eisenstein(8, rat(3, 1)).is_err());
}

#[test]
fn j_series_known_coefficients() {
    let j = j_normalized(rat(4, 1));
    assert_eq!(j.coeff(rat(-1, 1)).unwrap(), c(1));
    assert!(j.coeff(rat(0, 1)).unwrap().is_zero());
    assert_eq!(j.coeff(rat(1, 1)).unwrap(), c(196884));
    assert_eq!(j.coeff(rat(2, 1)).unwrap(), c(21493760));
    assert_eq!(j.coeff(rat(3, 1)).unwrap(), c(864299970));
}

#[test]
fn delta_two_routes_agree() {
    // eta^24 = (E4^3 - E6^2)/1728
    let trunc = rat(9, 1);
    let eta24 = eta_series(rat(12, 1)).powi(24).unwrap();
    let e4 = eisenstein(4, rat(12, 1)).unwrap();
    let e6 = eisenstein(6, rat(12, 1)).unwrap();
    let delta = e4
        .powi(3)
        .unwrap()
        .sub(&e6.powi(2).unwrap())
        .scale(&Cyc::from_rat(rat(1, 1728)));
    let out = eta24.eq_within(&delta, rat(0, 1), trunc).unwrap();
    assert!(out.is_ok(), "{:?}", out);
}

#[test]
fn dedekind_eps_is_24th_root_of_unity() {
    let mats = [
        [0i64, -1, 1, 0],
        [1, 0, 1, 1],
        [2, 1, 1, 1],
        [2, 3, 1, 2],
        [3, -2, 2, -1],
        [5, 2, 2, 1],
        [1, 0, 9, 1],
    ];
    for m in mats {
        assert_eq!(m[0] * m[3] - m[1] * m[2], 1, "input {:?}", m);
        let eps = dedekind_eps(m);
        assert!(eps.pow(24).is_one(), "eps^24 != 1 for {:?}", m);
    }
    // classical value at S: eta(-1/tau) = sqrt(-i tau) eta(tau), eps = 1
    assert!(dedekind_eps([0, -1, 1, 0]).is_one());
}

#[test]
fn weight_zero_required_at_cusps() {
    let e = parse_expr("eta(1)^23").unwrap();
    let s = expr_expand(&e, [0, -1, 1, 0], rat(2, 1));
    assert!(matches!(s, Err(Error::NonzeroWeight)));
    let e2 = parse_expr("E2").unwrap();
    assert!(matches!(
        expr_expand(&e2, [0, -1, 1, 0], rat(2, 1)),
        Err(Error::E2AtCusp)
    ));
    // but E2 is fine at a translation
    let shifted = expr_expand(&e2, [1, 1, 0, 1], rat(3, 1)).unwrap();
    assert_eq!(shifted.coeff(rat(1, 1)).unwrap(), c(-24).mul(&Cyc::e(rat(1, 1))));
}

#[test]
fn eta_quotient_at_s_gives_exact_constant_4096() {
    // eta(-1/tau) = sqrt(-i tau) eta(tau) and eta(-2/tau) =
    // sqrt(-i tau/2) eta(tau/2), so eta(tau)^24/eta(2 tau)^24 at S equals
    // 2^12 eta(tau)^24/eta(tau/2)^24: automorphy factors cancel to exactly
    // 2^12.
    let e = parse_expr("eta(1)^24/eta(2)^24").unwrap();
    let got = expr_expand(&e, [0, -1, 1, 0], rat(3, 1)).unwrap();
    let eta = eta_series(rat(8, 1));
    let half = eta.substitute(1, 0, 2).powi(24).unwrap();
    let full = eta.powi(24).unwrap();
    let expected = full
        .mul(&half.inv().unwrap())
        .scale(&Cyc::from_int(4096));
    let out = got.eq_within(&expected, rat(0, 1), rat(3, 1)).unwrap();
    assert!(out.is_ok(), "{:?}", out);
    // leading term: 4096 q^{1/2}, regular at zero (2B is non-Fricke)
    assert_eq!(got.leading().unwrap().0, rat(1, 2));
    assert_eq!(got.coeff(rat(1, 2)).unwrap(), c(4096));
}

#[test]
fn j_is_invariant_under_sample_matrices() {
    let e = parse_expr("E4^3/eta(1)^24 - 744").unwrap();
    let the_j = j_normalized(rat(3, 1));
    for g in [[0i64, -1, 1, 0], [2, 1, 1, 1], [3, -2, 2, -1], [5, 2, 2, 1]] {
        let s = expr_expand(&e, g, rat(3, 1)).unwrap();
        let out = s.eq_within(&the_j, rat(-1, 1), rat(3, 1)).unwrap();
        assert!(out.is_ok(), "gamma {:?}: {:?}", g, out);
    }
}

#[test]
fn composition_with_translations() {
    // expand at gamma*T^k == substitute(expand at gamma, 1, k, 1)
    let e = parse_expr("eta(1)^24/eta(2)^24 + 24").unwrap();
    let ex = Expander::new();
    for g in [[0i64, -1, 1, 0], [1, 0, 1, 1]] {
        for k in [1i64, 2] {
            let gt = crate::vvmf::mat_mul(g, [1, k, 0, 1]);
            let lhs = ex.expand(&e, gt, rat(3, 1)).unwrap();
            let rhs = ex.expand(&e, g, rat(3, 1)).unwrap().substitute(1, k, 1);
            let out = lhs.eq_within(&rhs, rat(-1, 1), rat(3, 1)).unwrap();
            assert!(out.is_ok(), "gamma {:?} T^{}: {:?}", g, k, out);
        }
    }
    // T-invariant expressions ignore left translation
    for k in [1i64, 3] {
        let tg = crate::vvmf::mat_mul([1, k, 0, 1], [0, -1, 1, 0]);
        let lhs = ex.expand(&e, tg, rat(3, 1)).unwrap();
        let rhs = ex.expand(&e, [0, -1, 1, 0], rat(3, 1)).unwrap();
        let out = lhs.eq_within(&rhs, rat(-1, 1), rat(3, 1)).unwrap();
        assert!(out.is_ok(), "T^{} gamma: {:?}", k, out);
    }
}

#[test]
fn t3c_entry_phases_match_fixing_group() {
    // x3 = [[1,0],[3,1]] acts on T_3C by e(1/3)
    let e = parse_expr("E4(3)/eta(3)^8").unwrap();
    let ex = Expander::new();
    let base = ex.expand(&e, [1, 0, 0, 1], rat(9, 1)).unwrap();
    let moved = ex.expand(&e, [1, 0, 3, 1], rat(9, 1)).unwrap();
    let expected = base.scale(&Cyc::e(rat(1, 3)));
    let out = moved.eq_within(&expected, rat(-1, 1), rat(9, 1)).unwrap();
    assert!(out.is_ok(), "{:?}", out);
    // the Fricke-type matrix [[0,-1],[1,0]] sends T_3C to q^{-1/9} + ...
    let inv = ex.expand(&e, [0, -1, 1, 0], rat(1, 1)).unwrap();
    assert_eq!(inv.leading().unwrap().0, rat(-1, 9));
    assert_eq!(inv.coeff(rat(2, 9)).unwrap(), c(248));
    assert_eq!(inv.coeff(rat(5, 9)).unwrap(), c(4124));
    assert_eq!(inv.coeff(rat(8, 9)).unwrap(), c(34752));
}

#[test]
fn t3c_equals_cube_root_of_dilated_j() {
    // E4(3)/eta(3)^8 = j(3 tau)^{1/3} as series at the identity
    let e = parse_expr("E4(3)/eta(3)^8").unwrap();
    let t = expr_expand(&e, [1, 0, 0, 1], rat(9, 1)).unwrap();
    let j3 = j_series(rat(30, 1)).substitute(3, 0, 1);
    let root = j3.pow_rat(rat(1, 3)).unwrap();
    let out = t.eq_within(&root, rat(-1, 1), rat(9, 1)).unwrap();
    assert!(out.is_ok(), "{:?}", out);
    // sanity: cube the root and compare back
    let cubed = root.powi(3).unwrap();
    let out2 = cubed.eq_within(&j3, rat(-3, 1), rat(6, 1)).unwrap();
    assert!(out2.is_ok(), "{:?}", out2);
    assert_eq!(t.coeff(rat(2, 1)).unwrap(), c(248));
    assert_eq!(t.coeff(rat(5, 1)).unwrap(), c(4124));
    assert_eq!(t.coeff(rat(8, 1)).unwrap(), c(34752));
}

#[test]
fn eta_positivity_examples() {
    let q2b = EtaQuotient { factors: vec![(1, 24), (2, -24)], constant: rat(24, 1) };
    assert_eq!(eta_positivity(&q2b), Ok(()));
    let bad = EtaQuotient { factors: vec![(1, -1)], constant: rat(0, 1) };
    assert_eq!(eta_positivity(&bad), Err(0));
    let q3 = EtaQuotient { factors: vec![(1, 12), (3, -12)], constant: rat(12, 1) };
    assert_eq!(eta_positivity(&q3), Ok(()));
}

#[test]
fn eta_quotient_extraction_from_expr() {
    let e = parse_expr("eta(1)^24/eta(2)^24 + 24").unwrap();
    let q = EtaQuotient::from_expr(&e).unwrap();
    assert_eq!(q.factors, vec![(1, 24), (2, -24)]);
    assert_eq!(q.constant, rat(24, 1));
    assert_eq!(q.weight(), rat(0, 1));
    let not_quotient = parse_expr("E4^3/eta(1)^24 - 744").unwrap();
    assert!(EtaQuotient::from_expr(&not_quotient).is_none());
}

#[test]
fn nonfricke_inversion_2b() {
    let e = parse_expr("eta(1)^24/eta(2)^24 + 24").unwrap();
    let (k1, k2, t_inv) = nonfricke_inversion(&e, 2, rat(4, 1)).unwrap();
    assert_eq!(k1, rat(24, 1));
    assert_eq!(k2, rat(4096, 1));
    // T(-1/tau) regular at zero with non-negative integer coefficients
    assert!(t_inv.leading().unwrap().0 >= rat(0, 1));
    for (e_, c_) in t_inv.terms() {
        let q = c_.as_rational().expect("rational");
        assert!(q.is_integer(), "coefficient at {} not integral", e_);
        assert!(q >= num::BigRational::zero(), "negative coefficient at {}", e_);
    }
    assert_eq!(t_inv.coeff(rat(1, 2)).unwrap(), c(4096));
}

#[test]
fn nonfricke_inversion_rejects_fricke_input() {
    // J is Fricke: (J(-1/tau) - k1)(J - k1) is nowhere constant
    let e = parse_expr("E4^3/eta(1)^24 - 744").unwrap();
    assert!(nonfricke_inversion(&e, 1, rat(4, 1)).is_err());
}

#[test]
fn parse_failures() {
    assert!(parse_expr("eta(0)^2").is_err());
    assert!(parse_expr("foo(3)").is_err());
    assert!(parse_expr("eta(1)^").is_err());
    assert!(parse_expr("1 +").is_err());
}
