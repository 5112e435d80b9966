//! Exact q-expansions of eta, Eisenstein series, j/J, and evaluation of
//! modular-expression trees at gamma*tau for gamma in SL2(Z).
//!
//! Cusp expansions factor each dilated atom's matrix as (SL2(Z) element) *
//! (upper triangular), apply the classical eta transformation with the
//! Dedekind-sum multiplier, and cancel automorphy factors across weight-zero
//! combinations, leaving an exact cyclotomic constant times a Puiseux
//! series.

mod expander;
mod expr;

pub use expander::{expr_expand, normalize_gamma, Expander};
pub use expr::{parse_expr, AtomKind, EtaQuotient, ModularExpr};

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::series_core::{qz, rat, Bound, Cyc, PuiseuxSeries, Rat};

/// Dedekind eta: q^{1/24} prod (1 - q^n), via the pentagonal number theorem.
pub fn eta_series(trunc: Rat) -> PuiseuxSeries {
    assert!(trunc > rat(1, 24), "eta truncation too small");
    let mut terms: BTreeMap<i64, Cyc> = BTreeMap::new();
    // exponents 1/24 + k(3k-1)/2, sign (-1)^k
    let mut k: i64 = 0;
    loop {
        let mut hit = false;
        for kk in [k, -k] {
            let e = kk * (3 * kk - 1) / 2;
            let exp = Rat::new(24 * e + 1, 24);
            if exp < trunc {
                hit = true;
                let sign = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                terms.insert(24 * e + 1, Cyc::from_int(sign));
            }
            if kk == 0 {
                break;
            }
        }
        if !hit && k > 0 {
            break;
        }
        k += 1;
    }
    PuiseuxSeries::new(24, terms, Bound::Fin(trunc))
}

/// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n
/// for k in {2, 4, 6}.
pub fn eisenstein(k: u32, trunc: Rat) -> Result<PuiseuxSeries> {
    let factor: i64 = match k {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => return Err(Error::Other(format!("Eisenstein weight {} not supported", k))),
    };
    let top = trunc.ceil().to_integer().max(1);
    let mut terms: BTreeMap<i64, Cyc> = BTreeMap::new();
    terms.insert(0, Cyc::one());
    for n in 1..top {
        if Rat::from_integer(n) >= trunc {
            break;
        }
        let mut sigma: i64 = 0;
        for d in 1..=n {
            if n % d == 0 {
                sigma += d.pow(k - 1);
            }
        }
        terms.insert(n, Cyc::from_rational(qz(factor) * qz(sigma)));
    }
    Ok(PuiseuxSeries::new(1, terms, Bound::Fin(trunc)))
}

/// Klein's j, computed as E4^3 / eta^24.
pub fn j_series(trunc: Rat) -> PuiseuxSeries {
    let pad = trunc + Rat::from_integer(2);
    let e4 = eisenstein(4, pad).expect("weight 4");
    let eta = eta_series(pad);
    let eta24 = eta.pow_rat(Rat::from_integer(24)).expect("eta^24");
    let num = e4.powi(3).expect("E4^3");
    let j = num.mul(&eta24.inv().expect("eta^24 invertible"));
    j.truncate(trunc)
}

/// J = j - 744, the unique normalization with expansion q^{-1} + O(q).
pub fn j_normalized(trunc: Rat) -> PuiseuxSeries {
    j_series(trunc).sub(&PuiseuxSeries::constant(Cyc::from_int(744)))
}

/// Dedekind sum s(h, k) = sum_{r=1}^{k-1} ((r/k)) ((hr/k)), exact.
pub fn dedekind_sum(h: i64, k: i64) -> Rat {
    assert!(k >= 1);
    let saw = |x: Rat| -> Rat {
        if x.is_integer() {
            Rat::zero()
        } else {
            x - x.floor() - rat(1, 2)
        }
    };
    let mut s = Rat::zero();
    for r in 1..k {
        s += saw(Rat::new(r, k)) * saw(Rat::new(h * r, k));
    }
    s
}

/// Multiplier of eta under [[a,b],[c,d]] in SL2(Z) with c > 0:
/// eta(gamma tau) = eps * (-i (c tau + d))^{1/2} * eta(tau).
/// The result is always a 24th root of unity.
pub fn dedekind_eps(m: [i64; 4]) -> Cyc {
    let [a, b, c, d] = m;
    debug_assert_eq!(a * d - b * c, 1);
    assert!(c > 0, "multiplier formula requires c > 0");
    let x = Rat::new(a + d, 12 * c) + dedekind_sum(-d, c);
    // eps = exp(pi i x) = e(x/2); x always has 12*x integral
    let half = x / Rat::from_integer(2);
    let scaled = half * Rat::from_integer(24);
    assert!(scaled.is_integer(), "eta multiplier left mu_24: {}", x);
    Cyc::root_of_unity(scaled.to_integer(), 24)
}

/// Positivity condition on an eta quotient's exponents: for every residue
/// class k mod lcm(a_i), sum of b_i over a_i | k must be non-negative.
/// Returns the violating residue on failure.
pub fn eta_positivity(q: &EtaQuotient) -> std::result::Result<(), i64> {
    let mut l: i64 = 1;
    for (a, _) in &q.factors {
        l = num::integer::lcm(l, *a);
    }
    for k in 0..l {
        let mut s = 0i64;
        for (a, b) in &q.factors {
            let divides = if k == 0 { true } else { k % a == 0 };
            if divides {
                s += b;
            }
        }
        if s < 0 {
            return Err(k);
        }
    }
    Ok(())
}

/// Inversion data for a weight-zero eta quotient T = (product) + k:
/// computes T(-1/tau) exactly and solves
///   (T(-1/N tau) - k1) * (T(tau) - k1) = k2,
/// the involutive form of the hauptmodul inversion relation.  Fails if the
/// relation does not hold past the matched coefficients.
pub fn nonfricke_inversion(
    expr: &ModularExpr,
    n_level: i64,
    trunc: Rat,
) -> Result<(Rat, Rat, PuiseuxSeries)> {
    let s_mat = [0, -1, 1, 0];
    let expander = Expander::new();
    let t_inv = expander.expand(expr, s_mat, trunc)?;
    // T(-1/N tau): dilate the S-expansion by N
    let needed = (trunc / Rat::from_integer(n_level)) + Rat::one();
    let t_inv_for_dilation = if needed > trunc {
        expander.expand(expr, s_mat, needed)?
    } else {
        t_inv.clone()
    };
    let t_invn = t_inv_for_dilation.substitute(n_level, 0, 1);
    let t_id = expander.expand(expr, [1, 0, 0, 1], trunc)?;

    if let Some((e, _)) = t_invn.leading() {
        if e < Rat::zero() {
            return Err(Error::NotInversionForm(format!(
                "T(-1/N tau) has a pole q^{}",
                e
            )));
        }
    }
    let k1c = t_invn.coeff(Rat::zero())?;
    let k1 = k1c
        .as_rational()
        .ok_or_else(|| Error::NotInversionForm("irrational constant term".into()))?;
    let k1r = Rat::new(
        i64::try_from(k1.numer().clone()).map_err(|_| Error::Other("k1 overflow".into()))?,
        i64::try_from(k1.denom().clone()).map_err(|_| Error::Other("k1 overflow".into()))?,
    );
    let shift = PuiseuxSeries::constant(Cyc::from_rat(k1r));
    let prod = t_invn.sub(&shift).mul(&t_id.sub(&shift));
    let k2c = prod.coeff(Rat::zero())?;
    let k2 = k2c
        .as_rational()
        .ok_or_else(|| Error::NotInversionForm("irrational k2".into()))?;
    let k2r = Rat::new(
        i64::try_from(k2.numer().clone()).map_err(|_| Error::Other("k2 overflow".into()))?,
        i64::try_from(k2.denom().clone()).map_err(|_| Error::Other("k2 overflow".into()))?,
    );
    // all other coefficients of the product must vanish on the window
    let hi = match prod.hi() {
        Bound::Fin(h) => h,
        Bound::Inf => trunc,
    };
    for (e, c) in prod.terms() {
        if !e.is_zero() && e < hi {
            return Err(Error::NotInversionForm(format!(
                "residual term ({}) q^{} in (T(-1/Ntau)-k1)(T-k1)",
                c, e
            )));
        }
    }
    Ok((k1r, k2r, t_inv))
}

#[cfg(test)]
mod tests;
