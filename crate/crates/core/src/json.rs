//! JSON descriptions of algebras, extensions, modules, and short exact
//! sequences.
//!
//! A vector is a list of terms. Over `Q` a term is
//! `[label, exponent, numerator, denominator]`; over `F_p` it is
//! `[label, exponent, residue]`. Readers accept both shapes in either
//! field (a three-element term is an integer). Product and action tables
//! are objects keyed `"i,j"`; missing entries are zero. Integers that do
//! not fit a JSON number may be written as strings.

use crate::algebra::{DgAlgebra, Presentation};
use crate::construct::DgExtension;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::{GradedBasis, GradedVector};
use crate::modules::{DgModule, ShortExactSequence};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};
use std::str::FromStr;

fn format_err(context: &str) -> Error {
    Error::Format(context.to_string())
}

fn bigint_to_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn bigint_from_value(v: &Value) -> Result<BigInt> {
    if let Some(n) = v.as_i64() {
        return Ok(BigInt::from(n));
    }
    if let Some(s) = v.as_str() {
        return BigInt::from_str(s)
            .map_err(|_| Error::Format(format!("'{}' is not an integer", s)));
    }
    Err(format_err("expected an integer or an integer string"))
}

pub fn scalar_to_value(s: &Scalar) -> Value {
    match s {
        Scalar::Rat(r) => json!([bigint_to_value(r.numer()), bigint_to_value(r.denom())]),
        Scalar::Mod(v) => json!(v),
    }
}

pub fn scalar_from_value(field: &Field, v: &Value) -> Result<Scalar> {
    if let Some(arr) = v.as_array() {
        if arr.len() != 2 {
            return Err(format_err("a ratio scalar is a two-element array"));
        }
        let num = bigint_from_value(&arr[0])?;
        let den = bigint_from_value(&arr[1])?;
        return ratio_scalar(field, num, den);
    }
    let n = bigint_from_value(v)?;
    ratio_scalar(field, n, BigInt::one())
}

fn ratio_scalar(field: &Field, num: BigInt, den: BigInt) -> Result<Scalar> {
    if den == BigInt::from(0) {
        return Err(Error::DivisionByZero);
    }
    match field {
        Field::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
        Field::Prime(p) => {
            let p_big = BigInt::from(*p);
            let reduce = |n: &BigInt| -> i64 {
                let r = ((n % &p_big) + &p_big) % &p_big;
                r.to_i64().expect("residue fits")
            };
            let n = field.from_int(reduce(&num));
            let d = field.from_int(reduce(&den));
            if field.is_zero(&d) {
                return Err(Error::DivisionByZero);
            }
            Ok(field.mul(&n, &field.invert(&d)?))
        }
    }
}

pub fn vector_to_value(v: &GradedVector) -> Value {
    let terms: Vec<Value> = v
        .terms
        .iter()
        .map(|((label, exponent), c)| {
            let mut term = vec![json!(label), json!(exponent)];
            match c {
                Scalar::Rat(r) => {
                    term.push(bigint_to_value(r.numer()));
                    term.push(bigint_to_value(r.denom()));
                }
                Scalar::Mod(residue) => term.push(json!(residue)),
            }
            Value::Array(term)
        })
        .collect();
    Value::Array(terms)
}

pub fn vector_from_value(field: &Field, v: &Value) -> Result<GradedVector> {
    let arr = v
        .as_array()
        .ok_or_else(|| format_err("a vector is an array of terms"))?;
    let mut out = GradedVector::zero();
    for term in arr {
        let parts = term
            .as_array()
            .ok_or_else(|| format_err("a term is an array"))?;
        if parts.len() != 3 && parts.len() != 4 {
            return Err(format_err(
                "a term is [label, exponent, residue] or [label, exponent, numerator, denominator]",
            ));
        }
        let label = parts[0]
            .as_u64()
            .ok_or_else(|| format_err("term label index must be a nonnegative integer"))?
            as usize;
        let exponent = parts[1]
            .as_i64()
            .ok_or_else(|| format_err("term exponent must be an integer"))?;
        let scalar = if parts.len() == 3 {
            ratio_scalar(field, bigint_from_value(&parts[2])?, BigInt::one())?
        } else {
            ratio_scalar(
                field,
                bigint_from_value(&parts[2])?,
                bigint_from_value(&parts[3])?,
            )?
        };
        out.add_term(field, (label, exponent), &scalar);
    }
    Ok(out)
}

fn table_to_value(rows: &[Vec<GradedVector>]) -> Value {
    let mut map = Map::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if !entry.is_zero() {
                map.insert(format!("{},{}", i, j), vector_to_value(entry));
            }
        }
    }
    Value::Object(map)
}

fn table_from_value(
    field: &Field,
    v: &Value,
    rows: usize,
    cols: usize,
) -> Result<Vec<Vec<GradedVector>>> {
    let map = v
        .as_object()
        .ok_or_else(|| format_err("a table is an object keyed \"i,j\""))?;
    let mut out = vec![vec![GradedVector::zero(); cols]; rows];
    for (key, entry) in map {
        let (i, j) = key
            .split_once(',')
            .ok_or_else(|| Error::Format(format!("bad table key '{}'", key)))?;
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad table key '{}'", key)))?;
        let j: usize = j
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad table key '{}'", key)))?;
        if i >= rows || j >= cols {
            return Err(Error::Format(format!(
                "table key '{}' is outside the {} by {} basis",
                key, rows, cols
            )));
        }
        out[i][j] = vector_from_value(field, entry)?;
    }
    Ok(out)
}

fn vectors_to_value(vs: &[GradedVector]) -> Value {
    Value::Array(vs.iter().map(vector_to_value).collect())
}

fn vectors_from_value(field: &Field, v: &Value, expected: usize, what: &str) -> Result<Vec<GradedVector>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Format(format!("{} must be an array of vectors", what)))?;
    if arr.len() != expected {
        return Err(Error::Format(format!(
            "{} has {} entries but the basis has {}",
            what,
            arr.len(),
            expected
        )));
    }
    arr.iter().map(|e| vector_from_value(field, e)).collect()
}

fn basis_to_value(basis: &GradedBasis) -> Value {
    Value::Array(
        basis
            .labels
            .iter()
            .zip(&basis.degrees)
            .map(|(label, degree)| json!({"label": label, "degree": degree}))
            .collect(),
    )
}

fn basis_from_value(v: &Value, period: Option<i64>) -> Result<GradedBasis> {
    let arr = v
        .as_array()
        .ok_or_else(|| format_err("basis must be an array of {label, degree} objects"))?;
    let mut labels = Vec::with_capacity(arr.len());
    let mut degrees = Vec::with_capacity(arr.len());
    for entry in arr {
        let label = entry
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| format_err("basis entry needs a string 'label'"))?;
        let degree = entry
            .get("degree")
            .and_then(Value::as_i64)
            .ok_or_else(|| format_err("basis entry needs an integer 'degree'"))?;
        labels.push(label.to_string());
        degrees.push(degree);
    }
    GradedBasis::new(labels, degrees, period)
}

fn field_from_value(v: &Value) -> Result<Field> {
    let tag = v
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| format_err("missing 'field' (a string like \"Q\" or \"F5\")"))?;
    // the characteristic may ride along as a separate key: {"field": "Fp", "p": 5}
    if tag == "Fp" || tag == "F_p" {
        let p = v
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| format_err("field \"Fp\" needs a prime under the key 'p'"))?;
        return Field::prime(p);
    }
    Field::from_tag(tag)
}

pub fn algebra_to_value(dg: &DgAlgebra) -> Value {
    let mut map = Map::new();
    map.insert("field".into(), json!(dg.field().tag()));
    map.insert("basis".into(), basis_to_value(dg.basis()));
    if let Some(p) = dg.basis().period {
        map.insert("period_unit".into(), json!({ "degree": p }));
    }
    map.insert("unit".into(), vector_to_value(&dg.pres.unit));
    map.insert("products".into(), table_to_value(&dg.pres.products));
    map.insert("differential".into(), vectors_to_value(&dg.diff));
    Value::Object(map)
}

pub fn algebra_from_value(v: &Value) -> Result<DgAlgebra> {
    let field = field_from_value(v)?;
    let period = match v.get("period_unit") {
        None | Some(Value::Null) => None,
        Some(pu) => Some(
            pu.get("degree")
                .and_then(Value::as_i64)
                .ok_or_else(|| format_err("period_unit needs an integer 'degree'"))?,
        ),
    };
    let basis = basis_from_value(
        v.get("basis").ok_or_else(|| format_err("missing 'basis'"))?,
        period,
    )?;
    let n = basis.len();
    let unit = vector_from_value(
        &field,
        v.get("unit").ok_or_else(|| format_err("missing 'unit'"))?,
    )?;
    let products = table_from_value(
        &field,
        v.get("products")
            .ok_or_else(|| format_err("missing 'products'"))?,
        n,
        n,
    )?;
    let diff = match v.get("differential") {
        None | Some(Value::Null) => vec![GradedVector::zero(); n],
        Some(d) => vectors_from_value(&field, d, n, "differential")?,
    };
    for vec in unit.terms.keys().chain(diff.iter().flat_map(|d| d.terms.keys())) {
        if vec.0 >= n {
            return Err(format_err("term label index is outside the basis"));
        }
    }
    Ok(DgAlgebra {
        pres: Presentation {
            field,
            basis,
            products,
            unit,
        },
        diff,
    })
}

pub fn extension_to_value(ext: &DgExtension) -> Value {
    let mut map = Map::new();
    map.insert("source".into(), algebra_to_value(&ext.source));
    map.insert("target".into(), algebra_to_value(&ext.target));
    map.insert("map".into(), vectors_to_value(&ext.images));
    if let Some((k, c)) = &ext.period_scale {
        map.insert(
            "period_scale".into(),
            json!({"power": k, "coefficient": scalar_to_value(c)}),
        );
    }
    map.insert("left_basis".into(), vectors_to_value(&ext.left_basis));
    Value::Object(map)
}

pub fn extension_from_value(v: &Value) -> Result<DgExtension> {
    let source = algebra_from_value(
        v.get("source")
            .ok_or_else(|| format_err("missing 'source'"))?,
    )?;
    let target = algebra_from_value(
        v.get("target")
            .ok_or_else(|| format_err("missing 'target'"))?,
    )?;
    if source.field() != target.field() {
        return Err(format_err("source and target must share the field"));
    }
    let field = *target.field();
    let images = vectors_from_value(
        &field,
        v.get("map").ok_or_else(|| format_err("missing 'map'"))?,
        source.basis().len(),
        "map",
    )?;
    let period_scale = match v.get("period_scale") {
        None | Some(Value::Null) => None,
        Some(ps) => {
            let power = ps
                .get("power")
                .and_then(Value::as_i64)
                .ok_or_else(|| format_err("period_scale needs an integer 'power'"))?;
            let coefficient = scalar_from_value(
                &field,
                ps.get("coefficient")
                    .ok_or_else(|| format_err("period_scale needs a 'coefficient'"))?,
            )?;
            Some((power, coefficient))
        }
    };
    let left_basis = v
        .get("left_basis")
        .ok_or_else(|| format_err("missing 'left_basis'"))?
        .as_array()
        .ok_or_else(|| format_err("left_basis must be an array of vectors"))?
        .iter()
        .map(|e| vector_from_value(&field, e))
        .collect::<Result<Vec<_>>>()?;
    Ok(DgExtension {
        source,
        target,
        images,
        period_scale,
        left_basis,
    })
}

pub fn module_to_value(m: &DgModule) -> Value {
    let mut map = Map::new();
    map.insert("algebra".into(), algebra_to_value(&m.over));
    map.insert("basis".into(), basis_to_value(&m.basis));
    map.insert("action".into(), table_to_value(&m.action));
    map.insert("delta".into(), vectors_to_value(&m.delta));
    Value::Object(map)
}

pub fn module_from_value(v: &Value) -> Result<DgModule> {
    let over = algebra_from_value(
        v.get("algebra")
            .ok_or_else(|| format_err("missing 'algebra'"))?,
    )?;
    let field = *over.field();
    let basis = basis_from_value(
        v.get("basis").ok_or_else(|| format_err("missing 'basis'"))?,
        over.basis().period,
    )?;
    let action = table_from_value(
        &field,
        v.get("action")
            .ok_or_else(|| format_err("missing 'action'"))?,
        over.basis().len(),
        basis.len(),
    )?;
    let delta = match v.get("delta") {
        None | Some(Value::Null) => vec![GradedVector::zero(); basis.len()],
        Some(d) => vectors_from_value(&field, d, basis.len(), "delta")?,
    };
    Ok(DgModule {
        over,
        basis,
        action,
        delta,
    })
}

pub fn ses_to_value(ses: &ShortExactSequence) -> Value {
    let mut map = Map::new();
    map.insert("sub".into(), module_to_value(&ses.sub));
    map.insert("mid".into(), module_to_value(&ses.mid));
    map.insert("quot".into(), module_to_value(&ses.quot));
    map.insert("inject".into(), vectors_to_value(&ses.inject));
    map.insert("project".into(), vectors_to_value(&ses.project));
    Value::Object(map)
}

pub fn ses_from_value(v: &Value) -> Result<ShortExactSequence> {
    let sub = module_from_value(v.get("sub").ok_or_else(|| format_err("missing 'sub'"))?)?;
    let mid = module_from_value(v.get("mid").ok_or_else(|| format_err("missing 'mid'"))?)?;
    let quot = module_from_value(v.get("quot").ok_or_else(|| format_err("missing 'quot'"))?)?;
    let field = *mid.field();
    let inject = vectors_from_value(
        &field,
        v.get("inject")
            .ok_or_else(|| format_err("missing 'inject'"))?,
        sub.basis.len(),
        "inject",
    )?;
    let project = vectors_from_value(
        &field,
        v.get("project")
            .ok_or_else(|| format_err("missing 'project'"))?,
        mid.basis.len(),
        "project",
    )?;
    Ok(ShortExactSequence {
        sub,
        mid,
        quot,
        inject,
        project,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::dual_numbers;
    use crate::demos;

    #[test]
    fn algebra_round_trips_over_q() {
        let dg = dual_numbers(Field::Rationals);
        let v = algebra_to_value(&dg);
        let back = algebra_from_value(&v).unwrap();
        assert_eq!(back, dg);
        assert_eq!(algebra_to_value(&back), v);
    }

    #[test]
    fn algebra_round_trips_with_period() {
        let demo = demos::demo("acyclic-division F5 w=Xinv").unwrap();
        let dg = demo.algebra();
        let v = algebra_to_value(dg);
        assert_eq!(v.get("period_unit"), Some(&serde_json::json!({"degree": 2})));
        let back = algebra_from_value(&v).unwrap();
        assert_eq!(&back, dg);
        assert_eq!(
            back.validate().passed(),
            dg.validate().passed()
        );
    }

    #[test]
    fn extension_round_trips() {
        for name in ["laurent F3 4", "dual-numbers-over-Q", "field-ext F2-F4"] {
            let demo = demos::demo(name).unwrap();
            let ext = demo.extension().unwrap();
            let v = extension_to_value(ext);
            let back = extension_from_value(&v).unwrap();
            assert_eq!(back.source, ext.source, "{}", name);
            assert_eq!(back.target, ext.target, "{}", name);
            assert_eq!(back.images, ext.images, "{}", name);
            assert_eq!(back.period_scale, ext.period_scale, "{}", name);
            assert_eq!(back.left_basis, ext.left_basis, "{}", name);
        }
    }

    #[test]
    fn ses_round_trips() {
        let demo = demos::demo("ses field-ext-F2-F4 interval").unwrap();
        let ses = match demo {
            demos::Demo::Ses { ses, .. } => *ses,
            _ => unreachable!(),
        };
        let v = ses_to_value(&ses);
        let back = ses_from_value(&v).unwrap();
        assert_eq!(back.mid.delta, ses.mid.delta);
        assert_eq!(back.inject, ses.inject);
        assert_eq!(back.project, ses.project);
        assert_eq!(
            crate::modules::validate_ses(&back).passed(),
            crate::modules::validate_ses(&ses).passed()
        );
    }

    #[test]
    fn malformed_documents_are_format_errors() {
        let cases = [
            serde_json::json!({}),
            serde_json::json!({"field": "F4", "basis": [], "unit": [], "products": {}}),
            serde_json::json!({"field": "Q", "basis": [{"label": "1"}], "unit": [], "products": {}}),
            serde_json::json!({"field": "Q", "basis": [{"label": "1", "degree": 0}],
                "unit": [[0, 0, 1, 0]], "products": {}}),
            serde_json::json!({"field": "Q", "basis": [{"label": "1", "degree": 0}],
                "unit": [], "products": {"5,0": []}}),
        ];
        for (i, case) in cases.iter().enumerate() {
            match algebra_from_value(case) {
                Err(Error::Format(_)) | Err(Error::DivisionByZero) => {}
                other => panic!("case {} should be rejected, got {:?}", i, other),
            }
        }
    }

    #[test]
    fn field_tag_with_separate_characteristic_parses() {
        let value = serde_json::json!({
            "field": "Fp", "p": 5,
            "basis": [{"label": "1", "degree": 0}],
            "unit": [[0, 0, 1]],
            "products": {"0,0": [[0, 0, 1]]}
        });
        let dg = algebra_from_value(&value).unwrap();
        assert_eq!(dg.field().characteristic(), 5);

        let missing_p = serde_json::json!({
            "field": "Fp",
            "basis": [{"label": "1", "degree": 0}],
            "unit": [[0, 0, 1]],
            "products": {"0,0": [[0, 0, 1]]}
        });
        match algebra_from_value(&missing_p) {
            Err(Error::Format(_)) => {}
            other => panic!("missing p should be rejected, got {:?}", other),
        }
    }

    #[test]
    fn residues_and_big_ratios_parse() {
        let f5 = Field::prime(5).unwrap();
        // -1 and 4 are the same residue; a ratio means inversion
        let a = scalar_from_value(&f5, &serde_json::json!(-1)).unwrap();
        assert_eq!(a, f5.from_int(4));
        let b = scalar_from_value(&f5, &serde_json::json!([1, 2])).unwrap();
        assert_eq!(b, f5.from_int(3));
        let q = Field::Rationals;
        let big = scalar_from_value(&q, &serde_json::json!(["123456789012345678901", "3"]))
            .unwrap();
        assert_eq!(q.mul(&big, &q.from_int(3)), {
            let n = BigInt::from_str("123456789012345678901").unwrap();
            Scalar::Rat(BigRational::from_integer(n))
        });
    }
}
