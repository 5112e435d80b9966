//! Exact cyclotomic rationals.
//!
//! A [`Cyc`] is an element of Q(zeta_L), stored as the canonical
//! representative of a polynomial in zeta_L reduced modulo the L-th
//! cyclotomic polynomial.  Canonical reduction (rather than working modulo
//! x^L - 1) makes equality syntactic, so discrete Fourier sums cancel to an
//! exact, recognizable zero.
//!
//! Coefficients are sparse: almost every number produced by the series
//! pipelines is a rational times a single root of unity, and products of
//! such numbers stay sparse.  The canonical degree bound phi(L) is enforced
//! on every store through a memoized rewrite table for zeta^k, k >= phi(L).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{BigRational, One, Zero};

/// Arbitrary-precision rational coefficient.
pub type Q = BigRational;
/// Small rational used for exponents and truncation windows.
pub type Rat = Ratio<i64>;

pub fn qz(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(r: Rat) -> Q {
    Q::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    num::integer::gcd(a, b)
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    num::integer::lcm(a, b)
}

pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients of the L-th cyclotomic polynomial, ascending degree, monic.
fn cyclotomic_poly(l: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&l) {
        return p.clone();
    }
    let poly = if l == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // (x^L - 1) / prod_{d | L, d < L} Phi_d, exact division over Z.
        let mut num = vec![BigInt::zero(); (l + 1) as usize];
        num[0] = BigInt::from(-1);
        num[l as usize] = BigInt::one();
        for d in 1..l {
            if l % d == 0 {
                let phi_d = cyclotomic_poly(d, memo);
                num = poly_exact_div(&num, &phi_d);
            }
        }
        num
    };
    memo.insert(l, poly.clone());
    poly
}

/// Exact division of integer polynomials (ascending coefficients).
fn poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd);
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone() / den[dd].clone();
        quot[k] = c.clone();
        for j in 0..=dd {
            let t = c.clone() * den[j].clone();
            rem[k + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// Per-order reduction data, built once and shared.
struct CycCtx {
    phi: u32,
    /// rewrite[k - phi] = canonical form of zeta^k, for k in [phi, 2*order].
    rewrite: Vec<Vec<(u32, BigInt)>>,
}

fn ctx(order: u32) -> Arc<CycCtx> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycCtx>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(c) = guard.get(&order) {
        return c.clone();
    }
    let phi = euler_phi(order);
    let mut memo = HashMap::new();
    let cp = cyclotomic_poly(order, &mut memo);
    debug_assert_eq!(cp.len() as u32, phi + 1);
    // Dense rows: row k holds the canonical coefficients of zeta^k.
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut row = vec![BigInt::zero(); phi as usize];
    // zeta^phi = -(c_0 + c_1 x + ... + c_{phi-1} x^{phi-1})
    for i in 0..phi as usize {
        row[i] = -cp[i].clone();
    }
    rows.push(row.clone());
    for _k in phi + 1..=2 * order {
        // multiply previous row by zeta, folding the overflow.
        let carry = row[phi as usize - 1].clone();
        for i in (1..phi as usize).rev() {
            row[i] = row[i - 1].clone();
        }
        row[0] = BigInt::zero();
        if !carry.is_zero() {
            for i in 0..phi as usize {
                let t = carry.clone() * rows[0][i].clone();
                row[i] += t;
            }
        }
        rows.push(row.clone());
    }
    let rewrite = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as u32, c))
                .collect()
        })
        .collect();
    let c = Arc::new(CycCtx { phi, rewrite });
    guard.insert(order, c.clone());
    c
}

/// Element of the cyclotomic field Q(zeta_order), canonically reduced.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyc {
    order: u32,
    poly: BTreeMap<u32, Q>,
}

impl Cyc {
    pub fn zero() -> Self {
        Cyc { order: 1, poly: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Cyc::from_rational(Q::one())
    }

    pub fn from_rational(q: Q) -> Self {
        let mut poly = BTreeMap::new();
        if !q.is_zero() {
            poly.insert(0, q);
        }
        Cyc { order: 1, poly }
    }

    pub fn from_int(n: i64) -> Self {
        Cyc::from_rational(qz(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Cyc::from_rational(qr(r))
    }

    /// zeta_l^k, canonically reduced; the result order divides l.
    pub fn root_of_unity(k: i64, l: u32) -> Self {
        assert!(l >= 1, "root of unity order must be positive");
        let k = k.rem_euclid(l as i64) as u32;
        let mut poly = BTreeMap::new();
        poly.insert(k, Q::one());
        Cyc { order: l, poly }.reduced()
    }

    /// e(r) = e^{2 pi i r} for rational r.
    pub fn e(r: Rat) -> Self {
        let d = *r.denom();
        debug_assert!(d > 0);
        assert!(d <= u32::MAX as i64, "cyclotomic order overflow");
        Cyc::root_of_unity(*r.numer(), d as u32)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.poly.len() == 1 && self.poly.get(&0).map(|c| c.is_one()) == Some(true)
    }

    pub fn is_rational(&self) -> bool {
        self.poly.is_empty() || (self.order == 1)
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.poly.is_empty() {
            Some(Q::zero())
        } else if self.order == 1 {
            self.poly.get(&0).cloned()
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        match self.as_rational() {
            Some(q) => q.is_integer(),
            None => false,
        }
    }

    /// Canonical coordinate vector of length phi(order).
    pub fn coords(&self) -> Vec<Q> {
        let phi = euler_phi(self.order) as usize;
        let mut v = vec![Q::zero(); phi];
        for (&k, c) in &self.poly {
            v[k as usize] = c.clone();
        }
        v
    }

    /// Reduce all exponents below phi(order), then descend to the smallest
    /// order visible from the exponent support.
    fn reduced(mut self) -> Self {
        if self.order == 1 {
            return self;
        }
        let c = ctx(self.order);
        let needs = self.poly.keys().any(|&k| k >= c.phi);
        if needs {
            let mut out: BTreeMap<u32, Q> = BTreeMap::new();
            for (k, coef) in std::mem::take(&mut self.poly) {
                let k = k % self.order; // zeta^order = 1
                if k < c.phi {
                    add_term(&mut out, k, coef);
                } else {
                    for (e, ic) in &c.rewrite[(k - c.phi) as usize] {
                        add_term(&mut out, *e, coef.clone() * Q::from_integer(ic.clone()));
                    }
                }
            }
            self.poly = out;
        }
        self.descend()
    }

    /// Drop to order/g when every exponent is divisible by g, and normalize
    /// orders congruent to 2 mod 4 down to their odd part (Q(zeta_{2m}) =
    /// Q(zeta_m) for odd m); both steps keep the representative canonical.
    fn descend(mut self) -> Self {
        if self.poly.is_empty() {
            self.order = 1;
            return self;
        }
        let mut g = self.order;
        for &k in self.poly.keys() {
            g = gcd_u32(g, k);
            if g == 1 {
                break;
            }
        }
        if g > 1 {
            self.order /= g;
            self.poly = std::mem::take(&mut self.poly)
                .into_iter()
                .map(|(k, c)| (k / g, c))
                .collect();
            // a changed order can expose further reductions (e.g. zeta_2 -> -1)
            return self.reduced();
        }
        if self.order % 4 == 2 {
            // zeta_{2m}^k = (-1)^k zeta_m^{k (m+1)/2 mod m}, m odd
            let m = self.order / 2;
            let half = (m + 1) / 2;
            let mut poly: BTreeMap<u32, Q> = BTreeMap::new();
            for (k, coef) in std::mem::take(&mut self.poly) {
                let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
                let e = ((k as u64 * half as u64) % m as u64) as u32;
                add_term(&mut poly, e, coef * sign);
            }
            return Cyc { order: m, poly }.reduced();
        }
        self
    }

    /// Re-express in Q(zeta_new) where order | new.  Exponents only scale;
    /// the result is *not* reduced.
    fn lifted(&self, new: u32) -> BTreeMap<u32, Q> {
        debug_assert_eq!(new % self.order, 0);
        let f = new / self.order;
        self.poly.iter().map(|(&k, c)| (k * f, c.clone())).collect()
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let l = lcm_u32(self.order, other.order);
        let mut poly = self.lifted(l);
        for (k, c) in other.lifted(l) {
            add_term(&mut poly, k, c);
        }
        Cyc { order: l, poly }.reduced()
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            order: self.order,
            poly: self.poly.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        if self.is_zero() || other.is_zero() {
            return Cyc::zero();
        }
        // rational fast paths
        if self.order == 1 {
            let q = self.poly.get(&0).unwrap();
            return other.scale(q);
        }
        if other.order == 1 {
            let q = other.poly.get(&0).unwrap();
            return self.scale(q);
        }
        let l = lcm_u32(self.order, other.order);
        let a = self.lifted(l);
        let b = other.lifted(l);
        let mut poly: BTreeMap<u32, Q> = BTreeMap::new();
        for (&ka, ca) in &a {
            for (&kb, cb) in &b {
                add_term(&mut poly, (ka + kb) % l, ca.clone() * cb.clone());
            }
        }
        Cyc { order: l, poly }.reduced()
    }

    pub fn scale(&self, q: &Q) -> Cyc {
        if q.is_zero() {
            return Cyc::zero();
        }
        Cyc {
            order: self.order,
            poly: self.poly.iter().map(|(&k, c)| (k, c.clone() * q.clone())).collect(),
        }
    }

    /// Multiplicative inverse.  Monomials invert directly; general elements
    /// go through the extended Euclidean algorithm against Phi_order.
    pub fn inv(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        if self.poly.len() == 1 {
            let (&k, c) = self.poly.iter().next().unwrap();
            let mut poly = BTreeMap::new();
            poly.insert((self.order - k) % self.order, c.recip());
            return Some(Cyc { order: self.order, poly }.reduced());
        }
        let l = self.order;
        let phi = euler_phi(l) as usize;
        let mut memo = HashMap::new();
        let cp = cyclotomic_poly(l, &mut memo);
        let modulus: Vec<Q> = cp.iter().map(|c| Q::from_integer(c.clone())).collect();
        let mut a: Vec<Q> = vec![Q::zero(); phi.max(1)];
        for (&k, c) in &self.poly {
            a[k as usize] = c.clone();
        }
        let inv = poly_mod_inverse(&a, &modulus)?;
        let poly = inv
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c))
            .collect();
        Some(Cyc { order: l, poly }.reduced())
    }

    pub fn pow(&self, n: i64) -> Cyc {
        if n == 0 {
            return Cyc::one();
        }
        let (mut base, mut e) = if n < 0 {
            (self.inv().expect("zero has no negative power"), (-n) as u64)
        } else {
            (self.clone(), n as u64)
        };
        let mut acc = Cyc::one();
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

    /// Complex conjugation, zeta -> zeta^{-1}.
    pub fn conj(&self) -> Cyc {
        let l = self.order;
        let poly = self
            .poly
            .iter()
            .map(|(&k, c)| ((l - k) % l, c.clone()))
            .collect();
        Cyc { order: l, poly }.reduced()
    }

    /// Galois twist zeta -> zeta^a for a coprime to the order.
    pub fn galois(&self, a: i64) -> Cyc {
        let l = self.order;
        let a = a.rem_euclid(l as i64) as u32;
        assert_eq!(gcd_u32(a.max(1), l), 1, "galois exponent must be coprime to order");
        let poly = self
            .poly
            .iter()
            .map(|(&k, c)| ((k as u64 * a as u64 % l as u64) as u32, c.clone()))
            .collect();
        Cyc { order: l, poly }.reduced()
    }

    /// Exact positive square root of a positive rational, as a cyclotomic
    /// number (Gauss sums realize sqrt(p) inside Q(zeta_{4p})).
    pub fn sqrt_of_rat(r: Rat) -> Cyc {
        assert!(r > Rat::zero(), "square root of non-positive rational");
        let n = *r.numer();
        let d = *r.denom();
        // sqrt(n/d) = sqrt(n*d)/d
        let m = n.checked_mul(d).expect("sqrt argument overflow");
        let mut square_part: i64 = 1;
        let mut free_part: i64 = 1;
        let mut rem = m;
        let mut p: i64 = 2;
        while p * p <= rem {
            if rem % p == 0 {
                let mut e = 0;
                while rem % p == 0 {
                    rem /= p;
                    e += 1;
                }
                for _ in 0..e / 2 {
                    square_part *= p;
                }
                if e % 2 == 1 {
                    free_part *= p;
                }
            }
            p += 1;
        }
        if rem > 1 {
            free_part *= rem;
        }
        let mut acc = Cyc::from_rational(Q::new(BigInt::from(square_part), BigInt::from(d)));
        let mut f = free_part;
        let mut q: i64 = 2;
        while f > 1 {
            if f % q == 0 {
                f /= q;
                acc = acc.mul(&sqrt_prime(q as u32));
            } else {
                q += 1;
            }
        }
        acc
    }
}

/// sqrt(p) for prime p, via quadratic Gauss sums.
fn sqrt_prime(p: u32) -> Cyc {
    if p == 2 {
        // zeta_8 - zeta_8^3 = sqrt(2)
        return Cyc::root_of_unity(1, 8).sub(&Cyc::root_of_unity(3, 8));
    }
    // g = sum_a (a|p) zeta_p^a equals sqrt(p) for p = 1 mod 4, i sqrt(p) otherwise.
    let mut g = Cyc::zero();
    for a in 1..p {
        let mut sym = -1i64;
        for x in 1..p {
            if x * x % p == a {
                sym = 1;
                break;
            }
        }
        let term = Cyc::root_of_unity(a as i64, p).scale(&qz(sym));
        g = g.add(&term);
    }
    if p % 4 == 1 {
        g
    } else {
        // sqrt(p) = -i * g
        Cyc::root_of_unity(3, 4).mul(&g)
    }
}

fn add_term(map: &mut BTreeMap<u32, Q>, k: u32, c: Q) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Inverse of `a` modulo the monic polynomial `m` over Q, both ascending.
fn poly_mod_inverse(a: &[Q], m: &[Q]) -> Option<Vec<Q>> {
    // extended Euclid on (m, a)
    let trim = |v: &mut Vec<Q>| {
        while v.last().map(|c| c.is_zero()) == Some(true) {
            v.pop();
        }
    };
    let mut r0: Vec<Q> = m.to_vec();
    let mut r1: Vec<Q> = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<Q> = vec![];
    let mut s1: Vec<Q> = vec![Q::one()];
    while !r1.is_empty() {
        // divide r0 by r1
        let mut quot = vec![Q::zero(); r0.len().saturating_sub(r1.len()) + 1];
        let mut rem = r0.clone();
        let lead = r1.last().unwrap().clone();
        while rem.len() >= r1.len() && !rem.is_empty() {
            let k = rem.len() - r1.len();
            let c = rem.last().unwrap().clone() / lead.clone();
            quot[k] = c.clone();
            for j in 0..r1.len() {
                let t = c.clone() * r1[j].clone();
                rem[k + j] -= t;
            }
            trim(&mut rem);
            if rem.len() < r1.len() {
                break;
            }
        }
        // (r0, r1) <- (r1, rem); (s0, s1) <- (s1, s0 - q s1)
        let mut s_new = s0.clone();
        let prod = poly_mul(&quot, &s1);
        if s_new.len() < prod.len() {
            s_new.resize(prod.len(), Q::zero());
        }
        for (i, c) in prod.into_iter().enumerate() {
            s_new[i] -= c;
        }
        trim(&mut s_new);
        r0 = std::mem::take(&mut r1);
        r1 = rem;
        s0 = std::mem::take(&mut s1);
        s1 = s_new;
    }
    // r0 = gcd; must be a nonzero constant (Phi is irreducible, a nonzero)
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].recip();
    Some(s0.into_iter().map(|x| x * c.clone()).collect())
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x.clone() * y.clone();
        }
    }
    out
}

impl fmt::Display for Cyc {
    /// Exact literals: rationals as `a/b`, otherwise sums of `c*z(k,L)`
    /// monomials over the canonical basis.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_empty() {
            return write!(f, "0");
        }
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", fmt_q(&q));
        }
        let mut first = true;
        for (&k, c) in &self.poly {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", fmt_q(c))?;
            } else if c.is_one() {
                write!(f, "z({},{})", k, self.order)?;
            } else {
                write!(f, "{}*z({},{})", fmt_q(c), k, self.order)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_basics() {
        assert!(Cyc::root_of_unity(0, 5).is_one());
        assert_eq!(Cyc::root_of_unity(3, 6), Cyc::from_int(-1));
        // full sum of fifth roots vanishes
        let mut s = Cyc::zero();
        for k in 0..5 {
            s = s.add(&Cyc::root_of_unity(k, 5));
        }
        assert!(s.is_zero());
    }

    #[test]
    fn coset_of_cube_roots_in_q_zeta9_cancels() {
        // zeta_9 (1 + zeta_3 + zeta_3^2) = zeta_9^1 + zeta_9^4 + zeta_9^7 = 0.
        // Float oracle: |e(1/9) + e(4/9) + e(7/9)| ~ 0.
        let mut re = 0f64;
        let mut im = 0f64;
        for k in [1f64, 4.0, 7.0] {
            let t = 2.0 * std::f64::consts::PI * k / 9.0;
            re += t.cos();
            im += t.sin();
        }
        assert!(re.abs() < 1e-12 && im.abs() < 1e-12);
        let s = Cyc::root_of_unity(1, 9)
            .add(&Cyc::root_of_unity(4, 9))
            .add(&Cyc::root_of_unity(7, 9));
        assert!(s.is_zero());
    }

    #[test]
    fn descends_to_rational() {
        let z = Cyc::root_of_unity(1, 3);
        let s = z.mul(&z).mul(&z);
        assert!(s.is_one());
        assert_eq!(s.order(), 1);
        // zeta_6^3 = -1 descends through reduction
        let m = Cyc::root_of_unity(3, 6);
        assert_eq!(m.as_rational(), Some(-Q::one()));
    }

    #[test]
    fn mixed_order_arithmetic() {
        let a = Cyc::root_of_unity(1, 4); // i
        let b = Cyc::root_of_unity(1, 3);
        let p = a.mul(&b);
        assert_eq!(p, Cyc::root_of_unity(7, 12));
        let inv = p.inv().unwrap();
        assert!(p.mul(&inv).is_one());
    }

    #[test]
    fn general_inverse() {
        let x = Cyc::root_of_unity(1, 5).add(&Cyc::from_int(2));
        let ix = x.inv().unwrap();
        assert!(x.mul(&ix).is_one());
    }

    #[test]
    fn conjugation_and_galois() {
        let z = Cyc::root_of_unity(2, 9);
        assert_eq!(z.conj(), Cyc::root_of_unity(-2, 9));
        assert_eq!(z.galois(2), Cyc::root_of_unity(4, 9));
        let s = z.add(&z.conj());
        assert_eq!(s.conj(), s);
    }

    #[test]
    fn sqrt_via_gauss_sums() {
        for n in [2i64, 3, 5, 6, 8, 12] {
            let s = Cyc::sqrt_of_rat(Rat::from_integer(n));
            assert_eq!(s.mul(&s), Cyc::from_int(n), "sqrt({n})^2");
        }
        let h = Cyc::sqrt_of_rat(rat(1, 2));
        assert_eq!(h.mul(&h), Cyc::from_rat(rat(1, 2)));
    }

    #[test]
    fn coords_have_phi_length() {
        let z = Cyc::root_of_unity(1, 9);
        assert_eq!(z.coords().len(), 6);
        assert_eq!(euler_phi(216), 72);
    }

    #[test]
    fn display_literals() {
        assert_eq!(Cyc::from_rat(rat(3, 2)).to_string(), "3/2");
        assert_eq!(Cyc::root_of_unity(1, 9).to_string(), "z(1,9)");
    }
}
