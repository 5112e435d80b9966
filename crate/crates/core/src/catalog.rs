//! Conjugacy-class catalog: closed-form expressions, power maps, and the
//! family {f_(m)} attached to each entry.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::modforms::{parse_expr, Expander, ModularExpr};
use crate::series_core::{rat, PuiseuxSeries, Rat};

#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub name: String,
    /// Element order n.
    pub order: i64,
    /// Conway-Norton h; the level is N = n*h.
    pub h: i64,
    pub fricke: bool,
    pub expr: ModularExpr,
    pub expr_text: String,
    /// Divisor m of the order maps to the class of g^m.
    pub power_map: BTreeMap<i64, String>,
}

impl ClassEntry {
    pub fn level(&self) -> i64 {
        self.order * self.h
    }

    /// Class name of g^m for any divisor m of the level.
    pub fn power_class(&self, m: i64) -> Result<&str> {
        let key = num::integer::gcd(m, self.order);
        self.power_map
            .get(&key)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::CatalogInvariant {
                class: self.name.clone(),
                msg: format!("power map has no image for divisor {}", key),
            })
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: BTreeMap<String, ClassEntry>,
}

/// One component of a family: the class it came from, its expression, and
/// its principal expansion.
#[derive(Clone, Debug)]
pub struct FamilyComponent {
    pub class_name: String,
    pub expr: ModularExpr,
    pub series: PuiseuxSeries,
}

/// The family {f_(m)}_{m|N} of an entry: f_(m) = T_{g^m}.
#[derive(Clone, Debug)]
pub struct Family {
    pub level: i64,
    components: BTreeMap<i64, FamilyComponent>,
}

impl Family {
    pub fn divisors(&self) -> impl Iterator<Item = i64> + '_ {
        self.components.keys().copied()
    }

    pub fn component(&self, m: i64) -> Result<&FamilyComponent> {
        self.components
            .get(&m)
            .ok_or_else(|| Error::Other(format!("family has no component for divisor {}", m)))
    }

    /// Component attached to table position gcd data.
    pub fn component_for(&self, i: i64, j: i64) -> Result<&FamilyComponent> {
        let n = self.level;
        let g = gcd3(i.rem_euclid(n), j.rem_euclid(n), n);
        self.component(g)
    }
}

pub fn gcd3(i: i64, j: i64, n: i64) -> i64 {
    num::integer::gcd(num::integer::gcd(i, j), n)
}

impl Catalog {
    /// Parse the line-oriented catalog format, checking structural
    /// invariants and principal normalization (by expansion).
    pub fn load(source: &str) -> Result<Catalog> {
        let mut entries: BTreeMap<String, ClassEntry> = BTreeMap::new();
        let mut current: Option<ClassEntry> = None;
        for (idx, raw) in source.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.starts_with('#') {
                continue;
            }
            if line.is_empty() {
                if let Some(e) = current.take() {
                    finish_entry(e, &mut entries, lineno)?;
                }
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            match head {
                "class" => {
                    if let Some(e) = current.take() {
                        finish_entry(e, &mut entries, lineno)?;
                    }
                    let parse = |w: Option<&str>, what: &str| -> Result<String> {
                        w.map(|s| s.to_string()).ok_or_else(|| Error::Parse {
                            line: lineno,
                            msg: format!("missing {}", what),
                        })
                    };
                    let name = parse(words.next(), "class name")?;
                    expect_word(&mut words, "order", lineno)?;
                    let order: i64 = parse_num(words.next(), lineno)?;
                    expect_word(&mut words, "h", lineno)?;
                    let h: i64 = parse_num(words.next(), lineno)?;
                    expect_word(&mut words, "fricke", lineno)?;
                    let fricke = match words.next() {
                        Some("true") => true,
                        Some("false") => false,
                        other => {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: format!("bad fricke flag {:?}", other),
                            })
                        }
                    };
                    if order < 1 || h < 1 {
                        return Err(Error::Parse { line: lineno, msg: "order and h must be positive".into() });
                    }
                    current = Some(ClassEntry {
                        name,
                        order,
                        h,
                        fricke,
                        expr: ModularExpr::Const(Rat::zero()),
                        expr_text: String::new(),
                        power_map: BTreeMap::new(),
                    });
                }
                "expr" => {
                    let e = current.as_mut().ok_or_else(|| Error::Parse {
                        line: lineno,
                        msg: "expr outside of entry".into(),
                    })?;
                    let text = line["expr".len()..].trim().to_string();
                    e.expr = parse_expr(&text).map_err(|err| Error::Parse {
                        line: lineno,
                        msg: err.to_string(),
                    })?;
                    e.expr_text = text;
                }
                "power" => {
                    let e = current.as_mut().ok_or_else(|| Error::Parse {
                        line: lineno,
                        msg: "power outside of entry".into(),
                    })?;
                    let m: i64 = parse_num(words.next(), lineno)?;
                    expect_word(&mut words, "->", lineno)?;
                    let target = words.next().ok_or_else(|| Error::Parse {
                        line: lineno,
                        msg: "missing power target".into(),
                    })?;
                    e.power_map.insert(m, target.to_string());
                }
                other => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unknown directive '{}'", other),
                    })
                }
            }
        }
        if let Some(e) = current.take() {
            let last = source.lines().count();
            finish_entry(e, &mut entries, last)?;
        }
        let catalog = Catalog { entries };
        catalog.check_cross_references()?;
        Ok(catalog)
    }

    /// The shipped catalog.
    pub fn builtin() -> Catalog {
        Catalog::load(include_str!("../data/catalog.txt")).expect("builtin catalog is valid")
    }

    fn check_cross_references(&self) -> Result<()> {
        for e in self.entries.values() {
            for (m, target) in &e.power_map {
                if !self.entries.contains_key(target) {
                    return Err(Error::CatalogInvariant {
                        class: e.name.clone(),
                        msg: format!("power {} -> {} dangles", m, target),
                    });
                }
            }
            if e.power_map.get(&1).map(String::as_str) != Some(e.name.as_str()) {
                return Err(Error::CatalogInvariant {
                    class: e.name.clone(),
                    msg: "power 1 must map to the class itself".into(),
                });
            }
            if e.power_map.get(&e.order).map(String::as_str) != Some("1A") {
                return Err(Error::CatalogInvariant {
                    class: e.name.clone(),
                    msg: "power <order> must map to 1A".into(),
                });
            }
            // Conway-Norton constraints, asserted rather than derived
            if e.order % e.h != 0 || 24 % e.h != 0 {
                return Err(Error::CatalogInvariant {
                    class: e.name.clone(),
                    msg: format!("h = {} must divide the order and 24", e.h),
                });
            }
            for m in divisors(e.order) {
                if !e.power_map.contains_key(&m) {
                    return Err(Error::CatalogInvariant {
                        class: e.name.clone(),
                        msg: format!("power map missing divisor {}", m),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&ClassEntry> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownClass(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|s| s.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = &ClassEntry> {
        self.entries.values()
    }

    /// Principal normalization: expansion q^{-1} + O(q) with zero constant.
    pub fn check_principal(&self, entry: &ClassEntry, expander: &Expander) -> Result<()> {
        let s = expander.expand(&entry.expr, [1, 0, 0, 1], rat(2, 1))?;
        let fail = |msg: String| Error::CatalogInvariant { class: entry.name.clone(), msg };
        match s.leading() {
            Some((e, c)) if e == rat(-1, 1) && c.is_one() => {}
            other => {
                return Err(fail(format!(
                    "not principally normalized: leading term {:?}",
                    other
                )))
            }
        }
        let c0 = s.coeff(Rat::zero())?;
        if !c0.is_zero() {
            return Err(fail(format!("not principally normalized: constant term {}", c0)));
        }
        for (e, c) in s.terms() {
            if e > rat(-1, 1) && e < Rat::one() && !e.is_zero() && !c.is_zero() {
                return Err(fail(format!("unexpected term ({}) q^{}", c, e)));
            }
        }
        Ok(())
    }

    /// Expand the family {f_(m)}_{m|N} of an entry to the given truncation.
    pub fn family_of(&self, entry: &ClassEntry, trunc: Rat, expander: &Expander) -> Result<Family> {
        let n = entry.level();
        let mut components = BTreeMap::new();
        for m in divisors(n) {
            let class_name = entry.power_class(m)?.to_string();
            let class = self.get(&class_name)?;
            let series = expander.expand(&class.expr, [1, 0, 0, 1], trunc)?;
            components.insert(
                m,
                FamilyComponent { class_name, expr: class.expr.clone(), series },
            );
        }
        Ok(Family { level: n, components })
    }
}

pub fn divisors(n: i64) -> Vec<i64> {
    let mut v: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
    v.sort_unstable();
    v
}

fn finish_entry(
    e: ClassEntry,
    entries: &mut BTreeMap<String, ClassEntry>,
    lineno: usize,
) -> Result<()> {
    if e.expr_text.is_empty() {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("class {} has no expr", e.name),
        });
    }
    if entries.contains_key(&e.name) {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("duplicate class {}", e.name),
        });
    }
    entries.insert(e.name.clone(), e);
    Ok(())
}

fn expect_word(words: &mut std::str::SplitWhitespace<'_>, expected: &str, line: usize) -> Result<()> {
    match words.next() {
        Some(w) if w == expected => Ok(()),
        other => Err(Error::Parse {
            line,
            msg: format!("expected '{}', found {:?}", expected, other),
        }),
    }
}

fn parse_num(word: Option<&str>, line: usize) -> Result<i64> {
    word.ok_or_else(|| Error::Parse { line, msg: "missing number".into() })?
        .parse()
        .map_err(|_| Error::Parse { line, msg: "bad number".into() })
}

/// Convenience: the principal series of a class at a truncation.
pub fn class_series(catalog: &Catalog, name: &str, trunc: Rat) -> Result<PuiseuxSeries> {
    let entry = catalog.get(name)?;
    Expander::new().expand(&entry.expr, [1, 0, 0, 1], trunc)
}

/// Check a series is q^{-1} + O(q).
pub fn is_principally_normalized(s: &PuiseuxSeries) -> bool {
    match s.leading() {
        Some((e, c)) if e == rat(-1, 1) && c.is_one() => {}
        _ => return false,
    }
    match s.coeff(Rat::zero()) {
        Ok(c) => {
            if !c.is_zero() {
                return false;
            }
        }
        Err(_) => return false,
    }
    s.terms().all(|(e, _)| !(e > rat(-1, 1) && e < Rat::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_parses() {
        let cat = Catalog::builtin();
        let names: Vec<&str> = cat.names().collect();
        assert_eq!(names, vec!["1A", "2A", "2B", "3B", "3C", "4C"]);
        let c3 = cat.get("3C").unwrap();
        assert_eq!(c3.order, 3);
        assert_eq!(c3.h, 3);
        assert_eq!(c3.level(), 9);
        assert!(c3.fricke);
    }

    #[test]
    fn power_classes_collapse_through_gcd() {
        let cat = Catalog::builtin();
        let c3 = cat.get("3C").unwrap();
        assert_eq!(c3.power_class(1).unwrap(), "3C");
        assert_eq!(c3.power_class(3).unwrap(), "1A");
        assert_eq!(c3.power_class(9).unwrap(), "1A");
        let c4 = cat.get("4C").unwrap();
        assert_eq!(c4.power_class(2).unwrap(), "2B");
    }

    #[test]
    fn parse_error_carries_line_number() {
        let bad = "class X order 2 h 1 fricke maybe\n";
        match Catalog::load(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn unknown_class_is_an_error() {
        let cat = Catalog::builtin();
        assert!(matches!(cat.get("NOPE"), Err(Error::UnknownClass(_))));
    }
}
