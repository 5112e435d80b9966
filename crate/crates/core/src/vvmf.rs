//! Trace table F-hat and multiplicity function F, their transformation
//! laws, and exact component coefficients.
//!
//! The trace table realizes entry (i,j) as f_((i,j,N)) expanded at a
//! canonical SL2(Z) lift with bottom row congruent to (i/g, j/g) mod N/g;
//! the multiplicity table is its exact row-wise discrete Fourier transform
//! over Q(zeta_N).

use num::Zero;

use crate::catalog::{gcd3, Family};
use crate::error::{Error, Result};
use crate::modforms::Expander;
use crate::report::{CheckRow, Report};
use crate::series_core::{rat, Cyc, PuiseuxSeries, Rat};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TableKind {
    Trace,
    Multiplicity,
}

#[derive(Clone)]
pub struct VVMFTable {
    pub level: i64,
    pub kind: TableKind,
    pub provenance: String,
    entries: Vec<PuiseuxSeries>,
}

/// Element of the discriminant group (Z/N)^2 under the identification
/// (a, b, 0, 0) + M -> (b + NZ, Na + NZ).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DiscElement {
    pub i: i64,
    pub k: i64,
    pub level: i64,
}

impl DiscElement {
    pub fn new(i: i64, k: i64, level: i64) -> Self {
        DiscElement { i: i.rem_euclid(level), k: k.rem_euclid(level), level }
    }

    /// Q/Z-valued quadratic form: ik/N mod 1, in [0, 1).
    pub fn q_value(&self) -> Rat {
        let v = Rat::new(self.i * self.k, self.level);
        v - v.floor()
    }
}

impl VVMFTable {
    pub fn entry(&self, i: i64, j: i64) -> &PuiseuxSeries {
        let n = self.level;
        let i = i.rem_euclid(n) as usize;
        let j = j.rem_euclid(n) as usize;
        &self.entries[i * n as usize + j]
    }

    pub fn nonzero_support(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for i in 0..self.level {
            for j in 0..self.level {
                if !self.entry(i, j).is_zero_on_window() {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Canonical SL2(Z) lift with bottom row congruent to (i/g, j/g) mod N/g,
/// g = (i, j, N): push the c-representative off zero, adjust d by multiples
/// of N/g until coprime to c, complete by the extended Euclidean algorithm,
/// and translation-reduce the top row.
pub fn canonical_lift(i: i64, j: i64, n: i64) -> [i64; 4] {
    let i = i.rem_euclid(n);
    let j = j.rem_euclid(n);
    let g = gcd3(i, j, n);
    let np = n / g;
    if np == 1 {
        return [1, 0, 0, 1];
    }
    let c0 = (i / g).rem_euclid(np);
    let c = if c0 == 0 { np } else { c0 };
    let mut d = (j / g).rem_euclid(np);
    while num::integer::gcd(c, d) != 1 {
        d += np;
    }
    // a*d - b*c = 1
    let (gg, x, y) = ext_gcd(c, d);
    debug_assert_eq!(gg, 1);
    let mut a = y;
    let mut b = -x;
    // translation-reduce: a into [0, c)
    let t = a.div_euclid(c);
    a -= t * c;
    b -= t * d;
    debug_assert_eq!(a * d - b * c, 1);
    [a, b, c, d]
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Matrix product helper for 2x2 integer matrices as [a, b, c, d].
pub fn mat_mul(x: [i64; 4], y: [i64; 4]) -> [i64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// Build the trace table: entry (i,j) = f_((i,j,N)) at the canonical lift.
pub fn build_hat_table(
    fam: &Family,
    trunc: Rat,
    expander: &Expander,
    provenance: &str,
) -> Result<VVMFTable> {
    let n = fam.level;
    let mut entries = Vec::with_capacity((n * n) as usize);
    for i in 0..n {
        for j in 0..n {
            let comp = fam.component_for(i, j)?;
            let lift = canonical_lift(i, j, n);
            let s = expander.expand(&comp.expr, lift, trunc).map_err(|e| {
                Error::Other(format!("entry ({}, {}): {}", i, j, e))
            })?;
            entries.push(s);
        }
    }
    Ok(VVMFTable {
        level: n,
        kind: TableKind::Trace,
        provenance: provenance.to_string(),
        entries,
    })
}

/// Exact row DFT: F_{i,k} = (1/N) sum_j e(-jk/N) Fhat_{i,j}.
pub fn dft_rows(t: &VVMFTable) -> VVMFTable {
    assert_eq!(t.kind, TableKind::Trace);
    let n = t.level;
    let inv_n = Cyc::from_rat(Rat::new(1, n));
    let mut entries = Vec::with_capacity((n * n) as usize);
    for i in 0..n {
        for k in 0..n {
            let mut acc = PuiseuxSeries::zero_exact();
            for j in 0..n {
                let phase = Cyc::e(Rat::new(-(j * k), n));
                acc = acc.add(&t.entry(i, j).scale(&phase));
            }
            entries.push(acc.scale(&inv_n));
        }
    }
    VVMFTable {
        level: n,
        kind: TableKind::Multiplicity,
        provenance: t.provenance.clone(),
        entries,
    }
}

/// Inverse row DFT: Fhat_{i,j} = sum_k e(jk/N) F_{i,k}.
pub fn idft_rows(t: &VVMFTable) -> VVMFTable {
    assert_eq!(t.kind, TableKind::Multiplicity);
    let n = t.level;
    let mut entries = Vec::with_capacity((n * n) as usize);
    for i in 0..n {
        for j in 0..n {
            let mut acc = PuiseuxSeries::zero_exact();
            for k in 0..n {
                let phase = Cyc::e(Rat::new(j * k, n));
                acc = acc.add(&t.entry(i, k).scale(&phase));
            }
            entries.push(acc);
        }
    }
    VVMFTable {
        level: n,
        kind: TableKind::Trace,
        provenance: t.provenance.clone(),
        entries,
    }
}

/// Exact coefficient c_{i,k}(n) of the multiplicity table.
pub fn component_coeff(f: &VVMFTable, i: i64, k: i64, n: Rat) -> Result<Cyc> {
    assert_eq!(f.kind, TableKind::Multiplicity);
    f.entry(i, k)
        .coeff(n)
        .map_err(|_| Error::OutOfWindow(format!("c_({},{})({})", i, k, n)))
}

fn defect_row(
    check: &str,
    class: &str,
    params: String,
    outcome: std::result::Result<(), (Rat, Cyc, Cyc)>,
) -> CheckRow {
    match outcome {
        Ok(()) => CheckRow::pass(check, class, params),
        Err((e, a, b)) => CheckRow::fail(
            check,
            class,
            params,
            format!("q^{}", e),
            format!("{} != {}", a, b),
        ),
    }
}

/// Transformation-law verification for a trace/multiplicity table pair.
///
/// T-law (trace picture): Fhat_{i,j}(tau+1) = Fhat_{i,j+i}(tau).
/// T-law (multiplicity): F_{i,k}(tau+1) = e(ik/N) F_{i,k}(tau), checked both
/// directly and through the equivalent support condition.
/// S-law (trace picture): the entry at lift*S equals entry (j,-i).
/// S-law (Gauss-sum form): F_{i,k}(-1/tau) = (1/N) sum e(-(il+jk)/N) F_{j,l}.
pub fn check_type_rho(
    hat: &VVMFTable,
    mult: &VVMFTable,
    fam: &Family,
    trunc: Rat,
    expander: &Expander,
) -> Result<Report> {
    let n = hat.level;
    let mut report = Report::new();
    let class = &hat.provenance;
    let lo = rat(-1, 1);

    // trace T-law, tablewide
    for i in 0..n {
        for j in 0..n {
            let lhs = hat.entry(i, j).substitute(1, 1, 1);
            let rhs = hat.entry(i, j + i);
            let out = lhs.eq_within(rhs, lo, trunc)?;
            report.push(defect_row("vvmf-t-law-trace", class, format!("i={} j={}", i, j), out));
        }
    }

    // multiplicity T-law and support condition
    for i in 0..n {
        for k in 0..n {
            let s = mult.entry(i, k);
            let lhs = s.substitute(1, 1, 1);
            let phase = Cyc::e(Rat::new(i * k, n));
            let rhs = s.scale(&phase);
            let out = lhs.eq_within(&rhs, lo, trunc)?;
            report.push(defect_row(
                "vvmf-t-law-mult",
                class,
                format!("i={} k={}", i, k),
                out,
            ));
            // support: every exponent is congruent to ik/N mod 1
            let want = DiscElement::new(i, k, n).q_value();
            let mut support_ok = Ok(());
            for (e, _) in s.terms() {
                let frac = e - e.floor();
                if frac != want {
                    support_ok = Err((e, Cyc::zero(), Cyc::zero()));
                    break;
                }
            }
            report.push(match support_ok {
                Ok(()) => CheckRow::pass("vvmf-support", class, format!("i={} k={}", i, k)),
                Err((e, _, _)) => CheckRow::fail(
                    "vvmf-support",
                    class,
                    format!("i={} k={}", i, k),
                    format!("q^{}", e),
                    format!("exponent not congruent to {}", want),
                ),
            });
        }
    }

    // trace S-law: expansion at lift*S equals the entry at (j, -i)
    for i in 0..n {
        for j in 0..n {
            let lift = canonical_lift(i, j, n);
            let s_mat = mat_mul(lift, [0, -1, 1, 0]);
            let comp = fam.component_for(i, j)?;
            let lhs = expander.expand(&comp.expr, s_mat, trunc)?;
            let rhs = hat.entry(j, -i);
            let out = lhs.eq_within(rhs, lo, trunc)?;
            report.push(defect_row("vvmf-s-law-trace", class, format!("i={} j={}", i, j), out));
        }
    }

    // Gauss-sum S-law on the multiplicity table; |M^/M|^{1/2} = N exactly
    for i in 0..n {
        for k in 0..n {
            // lhs via the proven relabel: F_{i,k}(-1/tau) = (1/N) sum_j e(-jk/N) Fhat_{j,-i}
            let mut lhs = PuiseuxSeries::zero_exact();
            for j in 0..n {
                lhs = lhs.add(&hat.entry(j, -i).scale(&Cyc::e(Rat::new(-(j * k), n))));
            }
            lhs = lhs.scale(&Cyc::from_rat(Rat::new(1, n)));
            let mut rhs = PuiseuxSeries::zero_exact();
            for j in 0..n {
                for l in 0..n {
                    let phase = Cyc::e(Rat::new(-(i * l + j * k), n));
                    rhs = rhs.add(&mult.entry(j, l).scale(&phase));
                }
            }
            rhs = rhs.scale(&Cyc::from_rat(Rat::new(1, n)));
            let out = lhs.eq_within(&rhs, lo, trunc)?;
            report.push(defect_row("vvmf-s-law-gauss", class, format!("i={} k={}", i, k), out));
        }
    }
    Ok(report)
}

/// Rationality hypotheses of the two coefficient lemmas, checked at
/// truncation, plus the conclusion they support.
pub struct RationalityReport {
    /// Row-0 coefficients all rational.
    pub row0_rational: bool,
    /// Singular coefficients rational and row-0 constant terms rational.
    pub singular_rational: bool,
    pub full_table_rational: bool,
    pub first_irrational: Option<(i64, i64, Rat)>,
}

pub fn rationality_predicates(f: &VVMFTable) -> RationalityReport {
    assert_eq!(f.kind, TableKind::Multiplicity);
    let n = f.level;
    let mut row0 = true;
    let mut singular = true;
    let mut full = true;
    let mut first = None;
    for i in 0..n {
        for k in 0..n {
            for (e, c) in f.entry(i, k).terms() {
                if !c.is_rational() {
                    full = false;
                    if first.is_none() {
                        first = Some((i, k, e));
                    }
                    if i == 0 {
                        row0 = false;
                    }
                    if e < Rat::zero() {
                        singular = false;
                    }
                    if i == 0 && e.is_zero() {
                        singular = false;
                    }
                }
            }
        }
    }
    RationalityReport {
        row0_rational: row0,
        singular_rational: singular,
        full_table_rational: full,
        first_irrational: first,
    }
}

/// Construct a synthetic multiplicity table (for tests and lint tooling).
pub fn table_from_entries(
    level: i64,
    kind: TableKind,
    provenance: &str,
    entries: Vec<PuiseuxSeries>,
) -> VVMFTable {
    assert_eq!(entries.len() as i64, level * level);
    VVMFTable { level, kind, provenance: provenance.to_string(), entries }
}

/// TSV dump of a table: columns i, j, exponent numerator, denominator D,
/// coefficient literal.
pub fn dump_tsv(t: &VVMFTable) -> String {
    let mut out = String::from("i\tj\texp_num\texp_den\tcoeff\n");
    for i in 0..t.level {
        for j in 0..t.level {
            for (e, c) in t.entry(i, j).terms() {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    i,
                    j,
                    e.numer(),
                    e.denom(),
                    c
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    #[test]
    fn canonical_lift_has_right_bottom_row() {
        for n in [1i64, 2, 3, 4, 9] {
            for i in 0..n {
                for j in 0..n {
                    let g = gcd3(i, j, n);
                    let m = canonical_lift(i, j, n);
                    assert_eq!(m[0] * m[3] - m[1] * m[2], 1, "det at ({i},{j},{n})");
                    let np = n / g;
                    assert_eq!(m[2].rem_euclid(np.max(1)), (i / g).rem_euclid(np.max(1)));
                    assert_eq!(m[3].rem_euclid(np.max(1)), (j / g).rem_euclid(np.max(1)));
                }
            }
        }
    }

    #[test]
    fn n1_table_is_j() {
        let cat = Catalog::builtin();
        let e = cat.get("1A").unwrap();
        let ex = Expander::new();
        let fam = cat.family_of(e, rat(6, 1), &ex).unwrap();
        let hat = build_hat_table(&fam, rat(5, 1), &ex, "1A").unwrap();
        assert_eq!(hat.level, 1);
        let j = hat.entry(0, 0);
        assert_eq!(j.coeff(rat(1, 1)).unwrap(), Cyc::from_int(196884));
    }

    #[test]
    fn dft_of_constant_row_concentrates() {
        // family with f_(1) = f_(2) = J gives F_{i,0} = J-row, F_{i,1} = 0
        let j = crate::modforms::j_normalized(rat(4, 1));
        let entries = vec![j.clone(), j.clone(), j.clone(), j.clone()];
        let t = table_from_entries(2, TableKind::Trace, "synthetic", entries);
        let f = dft_rows(&t);
        assert!(!f.entry(0, 0).is_zero_on_window());
        assert!(f.entry(0, 1).is_zero_on_window());
        assert!(f.entry(1, 1).is_zero_on_window());
        let back = idft_rows(&f);
        for i in 0..2 {
            for j_ in 0..2 {
                let out = back
                    .entry(i, j_)
                    .eq_within(t.entry(i, j_), rat(-1, 1), rat(4, 1))
                    .unwrap();
                assert!(out.is_ok());
            }
        }
    }

    #[test]
    fn disc_element_quadratic_value() {
        let d = DiscElement::new(1, 8, 9);
        assert_eq!(d.q_value(), rat(8, 9));
        let d2 = DiscElement::new(0, 4, 9);
        assert_eq!(d2.q_value(), rat(0, 1));
    }
}
