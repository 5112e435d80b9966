//! Truncated series in p whose coefficients are Puiseux series in q.
//!
//! BiSeries house differences f(sigma) - f(tau), infinite products, and the
//! two sides of denominator identities.  The p-direction is truncated at
//! `pmax`; each q-coefficient carries its own exactness window, so the same
//! no-silent-garbage discipline applies in both variables.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use super::cyc::{Cyc, Rat};
use super::puiseux::{Bound, PuiseuxSeries};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct BiSeries {
    pmin: i64,
    pmax: i64,
    coeffs: BTreeMap<i64, PuiseuxSeries>,
}

impl BiSeries {
    pub fn new(pmin: i64, pmax: i64, coeffs: BTreeMap<i64, PuiseuxSeries>) -> Self {
        assert!(pmin <= pmax);
        let coeffs = coeffs
            .into_iter()
            .filter(|(m, s)| *m >= pmin && *m <= pmax && !(s.is_zero_on_window() && s.hi() == Bound::Inf))
            .collect();
        BiSeries { pmin, pmax, coeffs }
    }

    pub fn zero(pmin: i64, pmax: i64) -> Self {
        BiSeries { pmin, pmax, coeffs: BTreeMap::new() }
    }

    pub fn one(pmax: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, PuiseuxSeries::one());
        BiSeries { pmin: 0, pmax, coeffs }
    }

    /// c * p^m q^e as an exact factor.
    pub fn monomial(m: i64, e: Rat, c: Cyc, pmax: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(m, PuiseuxSeries::monomial(e, c));
        BiSeries { pmin: m.min(0), pmax, coeffs }
    }

    pub fn pmin(&self) -> i64 {
        self.pmin
    }

    pub fn pmax(&self) -> i64 {
        self.pmax
    }

    /// The q-series at p^m (exact zero when inside the p-window but absent).
    pub fn coeff_series(&self, m: i64) -> Result<PuiseuxSeries> {
        if m < self.pmin || m > self.pmax {
            return Err(Error::OutOfWindow(format!("p^{}", m)));
        }
        Ok(self.coeffs.get(&m).cloned().unwrap_or_else(PuiseuxSeries::zero_exact))
    }

    pub fn coeff(&self, m: i64, n: Rat) -> Result<Cyc> {
        let s = self.coeff_series(m)?;
        s.coeff(n).map_err(|_| Error::OutOfWindow(format!("p^{} q^{}", m, n)))
    }

    pub fn coeff_entries(&self) -> impl Iterator<Item = (i64, &PuiseuxSeries)> + '_ {
        self.coeffs.iter().map(|(&m, s)| (m, s))
    }

    pub fn set_coeff(&mut self, m: i64, s: PuiseuxSeries) {
        assert!(m >= self.pmin && m <= self.pmax);
        self.coeffs.insert(m, s);
    }

    pub fn add(&self, other: &Self) -> Self {
        let pmin = self.pmin.min(other.pmin);
        let pmax = self.pmax.min(other.pmax);
        let mut coeffs: BTreeMap<i64, PuiseuxSeries> = BTreeMap::new();
        for m in pmin..=pmax {
            let a = self.coeffs.get(&m);
            let b = other.coeffs.get(&m);
            let s = match (a, b) {
                (Some(x), Some(y)) => x.add(y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => continue,
            };
            coeffs.insert(m, s);
        }
        BiSeries::new(pmin, pmax, coeffs)
    }

    pub fn neg(&self) -> Self {
        BiSeries {
            pmin: self.pmin,
            pmax: self.pmax,
            coeffs: self.coeffs.iter().map(|(&m, s)| (m, s.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Cyc) -> Self {
        BiSeries {
            pmin: self.pmin,
            pmax: self.pmax,
            coeffs: self.coeffs.iter().map(|(&m, s)| (m, s.scale(c))).collect(),
        }
    }

    /// Multiply by p^k (shifts the window).
    pub fn shift_p(&self, k: i64) -> Self {
        BiSeries {
            pmin: self.pmin + k,
            pmax: self.pmax + k,
            coeffs: self.coeffs.iter().map(|(&m, s)| (m + k, s.clone())).collect(),
        }
    }

    fn support_pmin(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.pmax + 1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let lo = self.support_pmin() + other.support_pmin();
        let pmax = (self.support_pmin() + other.pmax).min(other.support_pmin() + self.pmax);
        let pmin = self.pmin.min(lo).min(pmax);
        let mut coeffs: BTreeMap<i64, PuiseuxSeries> = BTreeMap::new();
        for (&ma, sa) in &self.coeffs {
            for (&mb, sb) in &other.coeffs {
                let m = ma + mb;
                if m > pmax {
                    continue;
                }
                let prod = sa.mul(sb);
                match coeffs.get_mut(&m) {
                    Some(acc) => *acc = acc.add(&prod),
                    None => {
                        coeffs.insert(m, prod);
                    }
                }
            }
        }
        BiSeries::new(pmin, pmax, coeffs)
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = BiSeries::one(self.pmax);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// p-adically convergent log; requires the p^0 coefficient to be the
    /// constant series 1 and no lower p-terms.
    pub fn log(&self) -> Result<Self> {
        if self.support_pmin() < 0 {
            return Err(Error::NonUnitConstant(format!(
                "p^{} term present",
                self.support_pmin()
            )));
        }
        let c0 = self.coeff_series(0)?;
        let is_one = c0.leading().map(|(e, c)| e.is_zero() && c.is_one()) == Some(true)
            && c0.num_terms() == 1;
        if !is_one {
            return Err(Error::NonUnitConstant(format!("{}", c0)));
        }
        // X = B - 1 has support in p^{>=1}; log(1+X) = sum (-1)^{k-1} X^k / k
        let mut x = self.clone();
        x.coeffs.remove(&0);
        let x = BiSeries::new(1.min(x.support_pmin().min(self.pmax)), self.pmax, x.coeffs.clone());
        let mut acc = BiSeries::zero(0, self.pmax);
        let mut xpow = x.clone();
        let mut k: i64 = 1;
        while xpow.support_pmin() <= self.pmax && k <= self.pmax.max(1) {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let c = Cyc::from_rat(Rat::new(sign, k));
            acc = acc.add(&xpow.scale(&c));
            if k as i64 >= self.pmax {
                break;
            }
            xpow = xpow.mul(&x);
            k += 1;
        }
        Ok(acc)
    }

    /// Compare on the p-range [pfrom, pto] and q-range [qfrom, qto); error if
    /// either side cannot answer there.
    pub fn eq_within(
        &self,
        other: &Self,
        pfrom: i64,
        pto: i64,
        qfrom: Rat,
        qto: Rat,
    ) -> Result<std::result::Result<(), (i64, Rat, Cyc, Cyc)>> {
        for m in pfrom..=pto {
            let a = self.coeff_series(m)?;
            let b = other.coeff_series(m)?;
            match a.eq_within(&b, qfrom, qto)? {
                Ok(()) => {}
                Err((e, ca, cb)) => return Ok(Err((m, e, ca, cb))),
            }
        }
        Ok(Ok(()))
    }
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BiSeries p-window [{}, {}]:", self.pmin, self.pmax)?;
        for (m, s) in &self.coeffs {
            writeln!(f, "  p^{}: {}", m, s)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series_core::cyc::rat;

    #[test]
    fn log_of_one_is_zero() {
        let b = BiSeries::one(4);
        let l = b.log().unwrap();
        for m in 0..=4 {
            assert!(l.coeff_series(m).unwrap().is_zero_on_window());
        }
    }

    #[test]
    fn mercator_in_p() {
        // log(1 - p q^{-1}) = -sum p^i q^{-i} / i
        let factor = BiSeries::one(5).sub(&BiSeries::monomial(1, rat(-1, 1), Cyc::one(), 5));
        let l = factor.log().unwrap();
        for i in 1..=5i64 {
            let c = l.coeff(i, rat(-i, 1)).unwrap();
            assert_eq!(c, Cyc::from_rat(rat(-1, i)), "p^{i}");
        }
    }

    #[test]
    fn log_requires_unit_constant() {
        let b = BiSeries::one(3).scale(&Cyc::from_int(2));
        assert!(matches!(b.log(), Err(Error::NonUnitConstant(_))));
    }

    #[test]
    fn mul_truncates_p() {
        let a = BiSeries::monomial(-1, rat(0, 1), Cyc::one(), 2)
            .add(&BiSeries::monomial(2, rat(0, 1), Cyc::one(), 2));
        let b = a.mul(&a);
        // support pmin = -1, so products are exact to p-degree -1 + 2 = 1
        assert_eq!(b.pmax(), 1);
        assert_eq!(b.coeff(-2, rat(0, 1)).unwrap(), Cyc::one());
        assert_eq!(b.coeff(1, rat(0, 1)).unwrap(), Cyc::from_int(2));
        assert!(b.coeff(4, rat(0, 1)).is_err());
    }
}
