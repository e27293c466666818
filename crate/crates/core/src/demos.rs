//! Built-in example catalog: the named algebras, extensions, and short
//! exact sequences that the command line ships with and the test suites
//! exercise. Parametric families are addressed by name, e.g.
//! `laurent F2 3` or `acyclic-division F5 w=Xinv`.

use crate::algebra::DgAlgebra;
use crate::construct::{
    acyclic_division_from_cycles, dual_numbers, ground_field, laurent_ring,
    quadratic_field_extension, twisted_laurent, DgExtension,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedVector;
use crate::modules::{free_dg_module, ShortExactSequence};

#[derive(Debug, Clone)]
pub enum Demo {
    Algebra(Box<DgAlgebra>),
    Extension(Box<DgExtension>),
    Ses {
        ext: Box<DgExtension>,
        ses: Box<ShortExactSequence>,
    },
}

impl Demo {
    /// The algebra a structural command should operate on: the object
    /// itself, or the target of an extension.
    pub fn algebra(&self) -> &DgAlgebra {
        match self {
            Demo::Algebra(a) => a,
            Demo::Extension(e) => &e.target,
            Demo::Ses { ext, .. } => &ext.target,
        }
    }

    pub fn extension(&self) -> Option<&DgExtension> {
        match self {
            Demo::Algebra(_) => None,
            Demo::Extension(e) => Some(e),
            Demo::Ses { ext, .. } => Some(ext),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DemoEntry {
    pub name: String,
    pub kind: &'static str,
    pub summary: String,
}

pub fn parse_field(token: &str) -> Result<Field> {
    Field::from_tag(token)
}

/// `(K, 0) -> K[X]/(X^2)` with `|X| = -1`, `d(X) = 1`.
pub fn dual_numbers_extension(field: Field) -> DgExtension {
    let dn = dual_numbers(field);
    DgExtension {
        source: ground_field(field),
        target: dn.clone(),
        images: vec![dn.pres.unit.clone()],
        period_scale: None,
        left_basis: vec![dn.pres.label_vec(0), dn.pres.label_vec(1)],
    }
}

/// `K[T^n, T^{-n}] -> K[T, T^{-1}]` with `|T| = 2` and zero differentials;
/// the left basis is `1, T, ..., T^{n-1}`.
pub fn laurent_pair(field: Field, n: i64) -> Result<DgExtension> {
    if n < 1 {
        return Err(Error::Format(format!(
            "laurent family index must be a positive integer, got {}",
            n
        )));
    }
    let source = laurent_ring(field, 2 * n)?;
    let target = laurent_ring(field, 2)?;
    let left_basis = (0..n)
        .map(|t| GradedVector::single((0, t), field.one()))
        .collect();
    Ok(DgExtension {
        source,
        target,
        images: vec![GradedVector::single((0, 0), field.one())],
        period_scale: Some((n, field.one())),
        left_basis,
    })
}

/// The acyclic algebra built on the cycles `K[X, X^{-1}]`, `|X| = 2`, with
/// the square of the adjoined contraction equal to `w`.
pub fn acyclic_division_demo(field: Field, w_is_x_inverse: bool) -> Result<DgAlgebra> {
    let c = laurent_ring(field, 2)?;
    let w = if w_is_x_inverse {
        GradedVector::single((0, -1), field.one())
    } else {
        GradedVector::zero()
    };
    acyclic_division_from_cycles(&c.pres, &[GradedVector::zero()], &w)
}

/// `(K[X, X^{-1}], 0)` included as the cycles of its acyclic cover.
pub fn cycles_into_acyclic(field: Field) -> Result<DgExtension> {
    let c = laurent_ring(field, 2)?;
    let b = acyclic_division_from_cycles(&c.pres, &[GradedVector::zero()], &GradedVector::zero())?;
    Ok(DgExtension {
        source: c,
        target: b.clone(),
        images: vec![b.pres.label_vec(0)],
        period_scale: Some((1, field.one())),
        left_basis: vec![b.pres.label_vec(0), b.pres.label_vec(1)],
    })
}

/// Acyclic covers on both sides of the index-`n` Laurent pair, with
/// `1 -> 1` and the contraction mapped to the contraction.
pub fn acyclic_pair(field: Field, n: i64) -> Result<DgExtension> {
    if n < 1 {
        return Err(Error::Format(format!(
            "acyclic pair index must be a positive integer, got {}",
            n
        )));
    }
    let ca = laurent_ring(field, 2 * n)?.pres;
    let cb = laurent_ring(field, 2)?.pres;
    let source = acyclic_division_from_cycles(&ca, &[GradedVector::zero()], &GradedVector::zero())?;
    let target = acyclic_division_from_cycles(&cb, &[GradedVector::zero()], &GradedVector::zero())?;
    let left_basis = (0..n)
        .map(|t| GradedVector::single((0, t), field.one()))
        .collect();
    Ok(DgExtension {
        source,
        target: target.clone(),
        images: vec![target.pres.label_vec(0), target.pres.label_vec(1)],
        period_scale: Some((n, field.one())),
        left_basis,
    })
}

/// `F_2 -> F_4 = F_2[u]/(u^2 + u + 1)`.
pub fn field_extension_f2_f4() -> DgExtension {
    let field = Field::prime(2).unwrap();
    let target = quadratic_field_extension(field, 1, 1).unwrap();
    DgExtension {
        source: ground_field(field),
        target: target.clone(),
        images: vec![target.pres.unit.clone()],
        period_scale: None,
        left_basis: vec![target.pres.label_vec(0), target.pres.label_vec(1)],
    }
}

/// `F_3 -> F_9 = F_3[u]/(u^2 + 1)`.
pub fn field_extension_f3_f9() -> DgExtension {
    let field = Field::prime(3).unwrap();
    let target = quadratic_field_extension(field, 0, -1).unwrap();
    DgExtension {
        source: ground_field(field),
        target: target.clone(),
        images: vec![target.pres.unit.clone()],
        period_scale: None,
        left_basis: vec![target.pres.label_vec(0), target.pres.label_vec(1)],
    }
}

/// The skew Laurent ring `F_4[X, X^{-1}; Frobenius]` with `|X| = 1`:
/// graded but not graded-commutative.
pub fn twisted_laurent_f4() -> DgAlgebra {
    let f4 = quadratic_field_extension(Field::prime(2).unwrap(), 1, 1)
        .unwrap()
        .pres;
    let frobenius = vec![f4.label_vec(0), f4.products[1][1].clone()];
    twisted_laurent(&f4, &frobenius, 2, 1).unwrap()
}

/// `0 -> free(d1) -> free(d1, d2) -> free(d2) -> 0` presented as a direct
/// sum.
pub fn ses_direct_sum(base: &DgAlgebra, d1: i64, d2: i64) -> ShortExactSequence {
    let field = *base.field();
    let sub = free_dg_module(base, &[d1]);
    let quot = free_dg_module(base, &[d2]);
    let mid = free_dg_module(base, &[d1, d2]);
    let ns = sub.basis.len();
    let inject = (0..ns)
        .map(|t| GradedVector::single((t, 0), field.one()))
        .collect();
    let mut project = vec![GradedVector::zero(); mid.basis.len()];
    for (t, entry) in project.iter_mut().enumerate().skip(ns) {
        *entry = GradedVector::single((t - ns, 0), field.one());
    }
    ShortExactSequence {
        sub,
        mid,
        quot,
        inject,
        project,
    }
}

/// A split sequence that is not presented as a direct sum: both middle
/// generators project onto the quotient generator and the injection hits
/// their sum. Needs characteristic 2 so that the composite vanishes.
pub fn ses_mixed_split(base: &DgAlgebra) -> Result<ShortExactSequence> {
    let field = *base.field();
    if field.characteristic() != 2 {
        return Err(Error::Unsupported(
            "the mixed split example needs characteristic 2".into(),
        ));
    }
    let sub = free_dg_module(base, &[0]);
    let quot = free_dg_module(base, &[0]);
    let mid = free_dg_module(base, &[0, 0]);
    let ns = sub.basis.len();
    let inject = (0..ns)
        .map(|t| {
            let mut v = GradedVector::single((t, 0), field.one());
            v.add_term(&field, (ns + t, 0), &field.one());
            v
        })
        .collect();
    let mut project = vec![GradedVector::zero(); mid.basis.len()];
    for t in 0..mid.basis.len() {
        project[t] = GradedVector::single((t % ns, 0), field.one());
    }
    Ok(ShortExactSequence {
        sub,
        mid,
        quot,
        inject,
        project,
    })
}

/// The middle is an interval: its differential carries the degree-0
/// generator onto the injected degree-1 one, so no cycle can be a section
/// and the sequence does not split.
pub fn ses_interval(base: &DgAlgebra) -> ShortExactSequence {
    let field = *base.field();
    let sub = free_dg_module(base, &[1]);
    let quot = free_dg_module(base, &[0]);
    let nb = base.basis().len();
    let mut mid = free_dg_module(base, &[1, 0]);
    for i in 0..nb {
        mid.delta[nb + i] = mid.delta[nb + i].add(
            &field,
            &GradedVector::single((i, 0), field.one()),
        );
    }
    let ns = sub.basis.len();
    let inject = (0..ns)
        .map(|t| GradedVector::single((t, 0), field.one()))
        .collect();
    let mut project = vec![GradedVector::zero(); mid.basis.len()];
    for (t, entry) in project.iter_mut().enumerate().skip(ns) {
        *entry = GradedVector::single((t - ns, 0), field.one());
    }
    ShortExactSequence {
        sub,
        mid,
        quot,
        inject,
        project,
    }
}

fn ses_base_extension(token: &str) -> Result<DgExtension> {
    match token {
        "field-ext-F2-F4" => Ok(field_extension_f2_f4()),
        "laurent-F2-3" => laurent_pair(Field::prime(2).unwrap(), 3),
        _ => Err(Error::Format(format!(
            "unknown ses base '{}': expected field-ext-F2-F4 or laurent-F2-3",
            token
        ))),
    }
}

fn ses_shape(ext: &DgExtension, token: &str) -> Result<ShortExactSequence> {
    match token {
        "direct-sum" => Ok(ses_direct_sum(&ext.target, 0, 1)),
        "mixed-split" => ses_mixed_split(&ext.target),
        "interval" => Ok(ses_interval(&ext.target)),
        _ => Err(Error::Format(format!(
            "unknown ses shape '{}': expected direct-sum, mixed-split, or interval",
            token
        ))),
    }
}

/// Look up a catalog object by name. Parametric names are one string with
/// space-separated arguments.
pub fn demo(name: &str) -> Result<Demo> {
    let tokens: Vec<&str> = name.split_whitespace().collect();
    match tokens.as_slice() {
        [single] if single.starts_with("dual-numbers-over-") => {
            let field = parse_field(single.trim_start_matches("dual-numbers-over-"))?;
            Ok(Demo::Extension(Box::new(dual_numbers_extension(field))))
        }
        ["laurent", field, n] => {
            let field = parse_field(field)?;
            let n: i64 = n
                .parse()
                .map_err(|_| Error::Format(format!("bad laurent index '{}'", n)))?;
            Ok(Demo::Extension(Box::new(laurent_pair(field, n)?)))
        }
        ["acyclic-division", field, w] => {
            let field = parse_field(field)?;
            let w_is_x_inverse = match *w {
                "w=0" => false,
                "w=Xinv" => true,
                _ => {
                    return Err(Error::Format(format!(
                        "unknown twist '{}': expected w=0 or w=Xinv",
                        w
                    )))
                }
            };
            Ok(Demo::Algebra(Box::new(acyclic_division_demo(
                field,
                w_is_x_inverse,
            )?)))
        }
        ["cycles-into-acyclic", field] => {
            let field = parse_field(field)?;
            Ok(Demo::Extension(Box::new(cycles_into_acyclic(field)?)))
        }
        ["acyclic-pair", field, n] => {
            let field = parse_field(field)?;
            let n: i64 = n
                .parse()
                .map_err(|_| Error::Format(format!("bad acyclic pair index '{}'", n)))?;
            Ok(Demo::Extension(Box::new(acyclic_pair(field, n)?)))
        }
        ["field-ext", "F2-F4"] => Ok(Demo::Extension(Box::new(field_extension_f2_f4()))),
        ["field-ext", "F3-F9"] => Ok(Demo::Extension(Box::new(field_extension_f3_f9()))),
        ["twisted-laurent", "F4"] => Ok(Demo::Algebra(Box::new(twisted_laurent_f4()))),
        ["ses", base, shape] => {
            let ext = ses_base_extension(base)?;
            let ses = ses_shape(&ext, shape)?;
            Ok(Demo::Ses {
                ext: Box::new(ext),
                ses: Box::new(ses),
            })
        }
        _ => Err(Error::Format(format!("no demo named '{}'", name))),
    }
}

/// Every named object in the catalog, with one line of context each.
pub fn demo_entries() -> Vec<DemoEntry> {
    let mut entries = Vec::new();
    for field in ["Q", "F3", "F5"] {
        entries.push(DemoEntry {
            name: format!("dual-numbers-over-{}", field),
            kind: "extension",
            summary: format!(
                "({0}, 0) -> {0}[X]/(X^2), |X| = -1, d(X) = 1; never separable",
                field
            ),
        });
    }
    for p in [2u64, 3, 5] {
        for n in 1..=6 {
            entries.push(DemoEntry {
                name: format!("laurent F{} {}", p, n),
                kind: "extension",
                summary: format!(
                    "F{0}[T^{1}, T^-{1}] -> F{0}[T, T^-1], |T| = 2; separable iff {0} does not divide {1}",
                    p, n
                ),
            });
        }
    }
    for w in ["w=0", "w=Xinv"] {
        entries.push(DemoEntry {
            name: format!("acyclic-division F5 {}", w),
            kind: "algebra",
            summary: format!(
                "acyclic cover of F5[X, X^-1], |X| = 2, contraction square {}",
                w
            ),
        });
    }
    for p in [2u64, 3, 5] {
        entries.push(DemoEntry {
            name: format!("cycles-into-acyclic F{}", p),
            kind: "extension",
            summary: format!(
                "(F{0}[X, X^-1], 0) included in its acyclic cover; char {0}",
                p
            ),
        });
    }
    for (p, n) in [(3u64, 2i64), (3, 3), (5, 2)] {
        entries.push(DemoEntry {
            name: format!("acyclic-pair F{} {}", p, n),
            kind: "extension",
            summary: format!("acyclic covers over the index-{} Laurent pair, char {}", n, p),
        });
    }
    entries.push(DemoEntry {
        name: "field-ext F2-F4".into(),
        kind: "extension",
        summary: "F2 -> F4, zero differentials; separable".into(),
    });
    entries.push(DemoEntry {
        name: "field-ext F3-F9".into(),
        kind: "extension",
        summary: "F3 -> F9, zero differentials; separable".into(),
    });
    entries.push(DemoEntry {
        name: "twisted-laurent F4".into(),
        kind: "algebra",
        summary: "F4[X, X^-1; Frobenius], |X| = 1; graded but not graded-commutative".into(),
    });
    for base in ["field-ext-F2-F4", "laurent-F2-3"] {
        for shape in ["direct-sum", "mixed-split", "interval"] {
            entries.push(DemoEntry {
                name: format!("ses {} {}", base, shape),
                kind: "ses",
                summary: format!("short exact sequence over the target of {}: {}", base, shape),
            });
        }
    }
    entries
}

/// All catalog extensions that are graded-commutative dg-division on both
/// sides with characteristic different from 2: the family the prediction
/// audit runs over, spanning all three decision branches.
pub fn main_theorem_catalog() -> Vec<(String, DgExtension)> {
    let f3 = Field::prime(3).unwrap();
    let f5 = Field::prime(5).unwrap();
    let mut out: Vec<(String, DgExtension)> = Vec::new();
    for (field, tag) in [(f3, "F3"), (f5, "F5")] {
        for n in 1..=6 {
            out.push((
                format!("laurent {} {}", tag, n),
                laurent_pair(field, n).unwrap(),
            ));
        }
    }
    out.push(("field-ext F3-F9".into(), field_extension_f3_f9()));
    for (field, tag) in [(f3, "F3"), (f5, "F5")] {
        out.push((
            format!("cycles-into-acyclic {}", tag),
            cycles_into_acyclic(field).unwrap(),
        ));
    }
    for (field, tag, n) in [(f3, "F3", 2), (f3, "F3", 3), (f5, "F5", 2)] {
        out.push((
            format!("acyclic-pair {} {}", tag, n),
            acyclic_pair(field, n).unwrap(),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::validate_ses;

    #[test]
    fn required_names_are_present() {
        let names: Vec<String> = demo_entries().iter().map(|e| e.name.clone()).collect();
        assert!(names.contains(&"dual-numbers-over-Q".to_string()));
        assert!(names.contains(&"laurent F2 3".to_string()));
        assert!(names.contains(&"acyclic-division F5 w=Xinv".to_string()));
    }

    #[test]
    fn every_entry_parses_and_validates() {
        for entry in demo_entries() {
            let d = demo(&entry.name)
                .unwrap_or_else(|e| panic!("demo '{}' failed to parse: {}", entry.name, e));
            match d {
                Demo::Algebra(a) => {
                    let report = a.validate();
                    assert!(report.passed(), "{}: {}", entry.name, report);
                }
                Demo::Extension(e) => {
                    let report = e.validate();
                    assert!(report.passed(), "{}: {}", entry.name, report);
                }
                Demo::Ses { ext, ses } => {
                    let report = ext.validate();
                    assert!(report.passed(), "{}: {}", entry.name, report);
                    let report = validate_ses(&ses);
                    assert!(report.passed(), "{}: {}", entry.name, report);
                }
            }
        }
    }

    #[test]
    fn unknown_names_are_format_errors() {
        for bad in ["", "laurent", "laurent F2", "laurent F2 x", "laurent F4 2", "ses nope interval"] {
            match demo(bad) {
                Err(Error::Format(_)) => {}
                other => panic!("'{}' should be a format error, got {:?}", bad, other),
            }
        }
    }

    #[test]
    fn prediction_audit_family_is_large_enough() {
        let catalog = main_theorem_catalog();
        assert!(catalog.len() >= 10);
        for (name, ext) in &catalog {
            assert_ne!(ext.field().characteristic(), 2, "{}", name);
            assert!(ext.validate().passed(), "{}", name);
        }
    }

    #[test]
    fn field_tags_round_trip() {
        for tag in ["Q", "F2", "F3", "F5"] {
            let field = parse_field(tag).unwrap();
            assert_eq!(field.tag(), tag);
        }
    }
}
