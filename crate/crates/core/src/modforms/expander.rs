//! Cusp expansion of modular expressions.
//!
//! For an atom of dilation a = p/r under gamma = [[g11,g12],[g21,g22]], the
//! integer matrix W = [[p g11, p g12],[r g21, r g22]] (det = pr) factors as
//! U * [[A,B],[0,C]] with U in SL2(Z), A,C > 0 and 0 <= B < C.  The SL2(Z)
//! part contributes the classical multiplier and automorphy factor
//! Omega = {-i (g21 tau + g22)}^{1/2}; the triangular part becomes the
//! substitution q^e -> e(eB/C) q^{eA/C}.  Weight-zero combinations cancel
//! all Omega powers, leaving an exact cyclotomic constant times the series.

use std::collections::HashMap;
use std::sync::Mutex;

use num::{One, Signed};

use super::expr::{AtomKind, ModularExpr};
use super::{dedekind_eps, eisenstein, eta_series};
use crate::error::{Error, Result};
use crate::series_core::{Bound, Cyc, PuiseuxSeries, Rat};

/// Normalize the sign of an SL2(Z) matrix so that the bottom row satisfies
/// g21 > 0, or g21 = 0 and g22 > 0.  Both signs act identically on tau.
pub fn normalize_gamma(g: [i64; 4]) -> [i64; 4] {
    assert_eq!(g[0] * g[3] - g[1] * g[2], 1, "gamma must have determinant 1");
    if g[2] < 0 || (g[2] == 0 && g[3] < 0) {
        [-g[0], -g[1], -g[2], -g[3]]
    } else {
        g
    }
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Hermite-type factorization W = U * [[A,B],[0,C]] of an integer matrix
/// with positive determinant and primitive bottom row direction.
fn factor_upper(w: [i64; 4]) -> ([i64; 4], i64, i64, i64) {
    let [w11, w12, w21, w22] = w;
    let det = w11 * w22 - w12 * w21;
    debug_assert!(det > 0);
    let a = {
        let g = num::integer::gcd(w11.abs(), w21.abs());
        debug_assert!(g > 0);
        g
    };
    let c = det / a;
    let u11 = w11 / a;
    let u21 = w21 / a;
    // u11 * u22 - u12 * u21 = 1
    let (g, x, y) = extended_gcd(u11, u21);
    debug_assert_eq!(g, 1, "non-primitive first column");
    let mut u22 = x;
    let mut u12 = -y;
    // B = (U^{-1} W)_{12}
    let mut b = u22 * w12 - u12 * w22;
    let k = b.div_euclid(c);
    b -= k * c;
    u12 += k * u11;
    u22 += k * u21;
    let u = [u11, u12, u21, u22];
    debug_assert_eq!(u11 * u22 - u12 * u21, 1);
    debug_assert_eq!([u11 * a, u11 * b + u12 * c, u21 * a, u21 * b + u22 * c], w);
    (u, a, b, c)
}

/// Intermediate value: series times Omega^omega, constants folded in.
struct Val {
    series: PuiseuxSeries,
    omega: i64,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    kind: AtomKind,
    power: (i64, i64),
    trunc_ceil: i64,
}

/// Expression evaluator with a cache of atom-power base expansions.
pub struct Expander {
    cache: Mutex<HashMap<CacheKey, PuiseuxSeries>>,
}

impl Default for Expander {
    fn default() -> Self {
        Self::new()
    }
}

impl Expander {
    pub fn new() -> Self {
        Expander { cache: Mutex::new(HashMap::new()) }
    }

    /// Exact expansion of e(gamma tau) in fractional powers of q.
    pub fn expand(&self, e: &ModularExpr, gamma: [i64; 4], trunc: Rat) -> Result<PuiseuxSeries> {
        let g = normalize_gamma(gamma);
        let mut reserve = Rat::from_integer(2);
        for _ in 0..9 {
            let val = self.eval(e, g, trunc + reserve)?;
            if val.omega != 0 {
                return Err(Error::NonzeroWeight);
            }
            let ok = match val.series.hi() {
                Bound::Inf => true,
                Bound::Fin(h) => h >= trunc,
            };
            if ok {
                return Ok(val.series.truncate(trunc));
            }
            reserve = reserve * Rat::from_integer(2);
        }
        Err(Error::Other(format!(
            "expansion window never reached truncation {}",
            trunc
        )))
    }

    fn base_power(&self, kind: AtomKind, power: Rat, trunc: Rat) -> Result<PuiseuxSeries> {
        let trunc_ceil = trunc.ceil().to_integer().max(2);
        let key = CacheKey {
            kind,
            power: (*power.numer(), *power.denom()),
            trunc_ceil,
        };
        if let Some(s) = self.cache.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let t = Rat::from_integer(trunc_ceil);
        let base = match kind {
            AtomKind::Eta => {
                // window padding so that eta^power stays exact past trunc
                let pad = t + Rat::from_integer(2);
                eta_series(pad)
            }
            AtomKind::E2 => eisenstein(2, t + Rat::from_integer(2))?,
            AtomKind::E4 => eisenstein(4, t + Rat::from_integer(2))?,
            AtomKind::E6 => eisenstein(6, t + Rat::from_integer(2))?,
        };
        let powered = base.pow_rat(power)?;
        self.cache.lock().unwrap().insert(key, powered.clone());
        Ok(powered)
    }

    /// Atom^power under gamma, as a single cached substitution.
    fn eval_atom_power(
        &self,
        kind: AtomKind,
        dilation: Rat,
        power: Rat,
        g: [i64; 4],
        trunc: Rat,
    ) -> Result<Val> {
        let p = *dilation.numer();
        let r = *dilation.denom();
        let w = [p * g[0], p * g[1], r * g[2], r * g[3]];
        let (u, wa, wb, wc) = factor_upper(w);
        let scale = Rat::new(wa, wc);
        let triangular = g[2] == 0;
        if kind == AtomKind::E2 && !triangular {
            return Err(Error::E2AtCusp);
        }
        // base expansion needed to trunc/scale; the substituted leading
        // exponent shifts windows, so pad generously (retry loop adjusts).
        let base_trunc = trunc / scale + Rat::from_integer(1);
        let base = self.base_power(kind, power, base_trunc)?;
        if triangular {
            // fold the SL2 translation part into the shift
            let shift = wb + u[1] * wc;
            let series = base.substitute(wa, shift, wc);
            return Ok(Val { series, omega: 0 });
        }
        let series = base.substitute(wa, wb, wc);
        if !power.is_integer() {
            // fractional atom powers at a genuine cusp would need a branch
            // choice for the multiplier; nothing in the catalog needs it
            return Err(Error::Other(
                "fractional atom power at a nontrivial cusp".into(),
            ));
        }
        let k = power.to_integer();
        let (omega, constant) = match kind {
            AtomKind::Eta => {
                let eps = if u[2] > 0 {
                    dedekind_eps(u)
                } else {
                    // U = [[1, n],[0, 1]]: eta(z + n) = e(n/24) eta(z), and
                    // Omega degenerates to {-i}^{1/2} = e(-1/8)
                    Cyc::e(Rat::new(u[1], 24)).mul(&Cyc::e(Rat::new(1, 8)))
                };
                let sqrt = Cyc::sqrt_of_rat(Rat::new(r, wc));
                (k, eps.pow(k).mul(&sqrt.pow(k)))
            }
            AtomKind::E4 => {
                // (r/C)^{4k} i^{4k} = (r/C)^{4k}
                let c = Cyc::from_rat(Rat::new(r, wc)).pow(4 * k);
                (8 * k, c)
            }
            AtomKind::E6 => {
                let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
                let c = Cyc::from_rat(Rat::new(r, wc)).pow(6 * k).scale(&crate::series_core::qz(sign));
                (12 * k, c)
            }
            AtomKind::E2 => unreachable!(),
        };
        Ok(Val { series: series.scale(&constant), omega })
    }

    fn eval(&self, e: &ModularExpr, g: [i64; 4], trunc: Rat) -> Result<Val> {
        match e {
            ModularExpr::Const(c) => Ok(Val {
                series: PuiseuxSeries::constant(Cyc::from_rat(*c)),
                omega: 0,
            }),
            ModularExpr::QPow(r) => {
                if g[2] != 0 {
                    return Err(Error::Other(
                        "q-power atom cannot be expanded at a nontrivial cusp".into(),
                    ));
                }
                // q^r under tau -> (g11 tau + g12): exponent scales by g11 = 1
                let shifted = PuiseuxSeries::monomial(*r, Cyc::one());
                // tau -> tau + g12 (g11 = g22 = 1 after normalization)
                Ok(Val { series: shifted.substitute(1, g[1], 1), omega: 0 })
            }
            ModularExpr::Atom { kind, dilation } => {
                self.eval_atom_power(*kind, *dilation, Rat::one(), g, trunc)
            }
            ModularExpr::Pow(base, r) => {
                if let ModularExpr::Atom { kind, dilation } = &**base {
                    if r.is_integer() {
                        return self.eval_atom_power(*kind, *dilation, *r, g, trunc);
                    }
                }
                let v = self.eval(base, g, trunc)?;
                let omega_r = Rat::from_integer(v.omega) * *r;
                if !omega_r.is_integer() {
                    return Err(Error::Other(format!(
                        "power {} leaves the automorphy lattice",
                        r
                    )));
                }
                Ok(Val {
                    series: v.series.pow_rat(*r)?,
                    omega: omega_r.to_integer(),
                })
            }
            ModularExpr::Neg(a) => {
                let v = self.eval(a, g, trunc)?;
                Ok(Val { series: v.series.neg(), omega: v.omega })
            }
            ModularExpr::Add(a, b) | ModularExpr::Sub(a, b) => {
                let va = self.eval(a, g, trunc)?;
                let vb = self.eval(b, g, trunc)?;
                let zero_a = va.series.is_zero_on_window() && va.series.hi() == Bound::Inf;
                let zero_b = vb.series.is_zero_on_window() && vb.series.hi() == Bound::Inf;
                if va.omega != vb.omega && !zero_a && !zero_b {
                    return Err(Error::NonzeroWeight);
                }
                let series = match e {
                    ModularExpr::Add(..) => va.series.add(&vb.series),
                    _ => va.series.sub(&vb.series),
                };
                Ok(Val { series, omega: if zero_a { vb.omega } else { va.omega } })
            }
            ModularExpr::Mul(a, b) => {
                let va = self.eval(a, g, trunc)?;
                let vb = self.eval(b, g, trunc)?;
                Ok(Val { series: va.series.mul(&vb.series), omega: va.omega + vb.omega })
            }
            ModularExpr::Div(a, b) => {
                // route atom-power denominators through the cache as
                // negative powers: one substitution instead of a windowed
                // inversion per call site
                if let Some((kind, dilation, k)) = as_atom_power(b) {
                    let va = self.eval(a, g, trunc)?;
                    let vb = self.eval_atom_power(kind, dilation, -k, g, trunc)?;
                    return Ok(Val {
                        series: va.series.mul(&vb.series),
                        omega: va.omega + vb.omega,
                    });
                }
                let va = self.eval(a, g, trunc)?;
                let vb = self.eval(b, g, trunc)?;
                Ok(Val {
                    series: va.series.mul(&vb.series.inv()?),
                    omega: va.omega - vb.omega,
                })
            }
        }
    }
}

fn as_atom_power(e: &ModularExpr) -> Option<(AtomKind, Rat, Rat)> {
    match e {
        ModularExpr::Atom { kind, dilation } => Some((*kind, *dilation, Rat::one())),
        ModularExpr::Pow(base, r) if r.is_integer() => match &**base {
            ModularExpr::Atom { kind, dilation } => Some((*kind, *dilation, *r)),
            _ => None,
        },
        _ => None,
    }
}

/// One-shot expansion without cache reuse.
pub fn expr_expand(e: &ModularExpr, gamma: [i64; 4], trunc: Rat) -> Result<PuiseuxSeries> {
    Expander::new().expand(e, gamma, trunc)
}
