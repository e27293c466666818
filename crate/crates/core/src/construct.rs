//! Builders for the algebras the toolkit works with, dg-extensions with a
//! declared left-module basis, and the tensor bimodule `B (x)_A B` that the
//! separability decision runs on.

use crate::algebra::{DgAlgebra, Presentation};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::{solve, GradedBasis, GradedVector, Matrix, Slot, SolveOutcome, Window};
use crate::report::ValidationReport;

/// `K[X]/(X^2)` with `|X| = -1` and `d(X) = 1`.
pub fn dual_numbers(field: Field) -> DgAlgebra {
    let basis = GradedBasis::new(vec!["1".into(), "X".into()], vec![0, -1], None)
        .expect("fixed two-label basis");
    let unit = GradedVector::single((0, 0), field.one());
    let x = GradedVector::single((1, 0), field.one());
    let products = vec![
        vec![unit.clone(), x.clone()],
        vec![x, GradedVector::zero()],
    ];
    DgAlgebra {
        pres: Presentation {
            field,
            basis,
            products,
            unit: unit.clone(),
        },
        diff: vec![GradedVector::zero(), unit],
    }
}

/// The ground field as a one-label presentation concentrated in degree 0.
pub fn ground_field(field: Field) -> DgAlgebra {
    let basis = GradedBasis::new(vec!["1".into()], vec![0], None).expect("one label");
    let unit = GradedVector::single((0, 0), field.one());
    DgAlgebra::zero_differential(Presentation {
        field,
        basis,
        products: vec![vec![unit.clone()]],
        unit,
    })
}

/// `K[T, T^{-1}]` with `|T| = degree`, presented on the single label 1 with
/// the periodicity unit `T` itself.
pub fn laurent_ring(field: Field, degree: i64) -> Result<DgAlgebra> {
    if degree == 0 {
        return Err(Error::Validation("Laurent generator needs nonzero degree".into()));
    }
    let basis = GradedBasis::new(vec!["1".into()], vec![0], Some(degree))?;
    let unit = GradedVector::single((0, 0), field.one());
    Ok(DgAlgebra::zero_differential(Presentation {
        field,
        basis,
        products: vec![vec![unit.clone()]],
        unit,
    }))
}

/// A finite field `F_{p^2} = F_p[u]/(u^2 - s u - t)` as a degree-0 algebra
/// over `F_p`, for a monic irreducible `x^2 - s x - t`.
pub fn quadratic_field_extension(field: Field, s: i64, t: i64) -> Result<DgAlgebra> {
    let basis = GradedBasis::new(vec!["1".into(), "u".into()], vec![0, 0], None)?;
    let unit = GradedVector::single((0, 0), field.one());
    let u = GradedVector::single((1, 0), field.one());
    let mut u_sq = GradedVector::zero();
    u_sq.add_term(&field, (1, 0), &field.from_int(s));
    u_sq.add_term(&field, (0, 0), &field.from_int(t));
    let products = vec![
        vec![unit.clone(), u.clone()],
        vec![u, u_sq],
    ];
    let dg = DgAlgebra::zero_differential(Presentation {
        field,
        basis,
        products,
        unit,
    });
    // irreducibility = no root of x^2 - s x - t in the base field
    if let Some(elements) = field.enumerate() {
        for a in elements {
            let lhs = field.mul(&a, &a);
            let rhs = field.add(&field.mul(&field.from_int(s), &a), &field.from_int(t));
            if lhs == rhs {
                return Err(Error::Validation(format!(
                    "x^2 - {}x - {} has the root {} in the base field",
                    s,
                    t,
                    a.report_string()
                )));
            }
        }
    }
    Ok(dg)
}

/// Skew Laurent ring `R[X, X^{-1}; sigma]` with `X r = sigma(r) X`, for a
/// degree-0 coefficient algebra `R` and an automorphism of declared order
/// `m`. The presentation folds over the central unit `X^m`: labels are
/// `r_i X^j` for `0 <= j < m`.
pub fn twisted_laurent(
    coeffs: &Presentation,
    sigma: &[GradedVector],
    order: usize,
    gen_degree: i64,
) -> Result<DgAlgebra> {
    let f = coeffs.field;
    let nc = coeffs.basis.len();
    if gen_degree == 0 {
        return Err(Error::Validation("twist generator needs nonzero degree".into()));
    }
    if order == 0 {
        return Err(Error::AutomorphismOrder("declared order must be positive".into()));
    }
    if coeffs.basis.period.is_some() || coeffs.basis.degrees.iter().any(|&d| d != 0) {
        return Err(Error::Validation(
            "coefficient algebra must be concentrated in degree 0 with no period".into(),
        ));
    }
    if sigma.len() != nc {
        return Err(Error::Format("one automorphism image per coefficient label".into()));
    }

    let apply = |images: &[GradedVector], v: &GradedVector| -> GradedVector {
        let mut out = GradedVector::zero();
        for ((i, e), c) in &v.terms {
            debug_assert_eq!(*e, 0);
            out = out.add(&f, &images[*i].scale(&f, c));
        }
        out
    };

    // sigma must be a unital algebra map
    if apply(sigma, &coeffs.unit) != coeffs.unit {
        return Err(Error::Validation("automorphism does not fix the unit".into()));
    }
    for i in 0..nc {
        for j in 0..nc {
            let lhs = apply(sigma, &coeffs.products[i][j]);
            let rhs = coeffs.mul(&sigma[i], &sigma[j]);
            if lhs != rhs {
                return Err(Error::Validation(format!(
                    "automorphism is not multiplicative on {} * {}",
                    coeffs.basis.labels[i], coeffs.basis.labels[j]
                )));
            }
        }
    }

    // powers sigma^0 .. sigma^{m-1}, and the order check sigma^m = id
    let identity: Vec<GradedVector> = (0..nc).map(|i| coeffs.label_vec(i)).collect();
    let mut powers = vec![identity.clone()];
    for _ in 1..order {
        let prev = powers.last().unwrap();
        let next: Vec<GradedVector> = (0..nc).map(|i| apply(prev, &sigma[i])).collect();
        powers.push(next);
    }
    let last = powers.last().unwrap();
    let full: Vec<GradedVector> = (0..nc).map(|i| apply(last, &sigma[i])).collect();
    if full != identity {
        return Err(Error::AutomorphismOrder(format!(
            "automorphism does not have order dividing {}",
            order
        )));
    }

    let m = order;
    let mut labels = Vec::with_capacity(nc * m);
    let mut degrees = Vec::with_capacity(nc * m);
    for j in 0..m {
        for i in 0..nc {
            let name = match j {
                0 => coeffs.basis.labels[i].clone(),
                1 => format!("{}*X", coeffs.basis.labels[i]),
                _ => format!("{}*X^{}", coeffs.basis.labels[i], j),
            };
            labels.push(name);
            degrees.push(j as i64 * gen_degree);
        }
    }
    let basis = GradedBasis::new(labels, degrees, Some(m as i64 * gen_degree))?;
    let idx = |i: usize, j: usize| j * nc + i;

    // (r X^a)(r' X^b) = r sigma^a(r') X^{a+b}, folding X^{a+b} over X^m
    let count = nc * m;
    let mut products = vec![vec![GradedVector::zero(); count]; count];
    for a in 0..m {
        for i in 0..nc {
            for b in 0..m {
                for j in 0..nc {
                    let coeff = coeffs.mul(&coeffs.label_vec(i), &apply(&powers[a], &coeffs.label_vec(j)));
                    let (r, q) = ((a + b) % m, ((a + b) / m) as i64);
                    let mut entry = GradedVector::zero();
                    for ((k, e), c) in &coeff.terms {
                        debug_assert_eq!(*e, 0);
                        entry.add_term(&f, (idx(*k, r), q), c);
                    }
                    products[idx(i, a)][idx(j, b)] = entry;
                }
            }
        }
    }

    let mut unit = GradedVector::zero();
    for ((i, _), c) in &coeffs.unit.terms {
        unit.add_term(&f, (idx(*i, 0), 0), c);
    }

    Ok(DgAlgebra::zero_differential(Presentation {
        field: f,
        basis,
        products,
        unit,
    }))
}

/// The acyclic dg-algebra `C (+) yC` with `d(b + ya) = a`, built from a
/// graded algebra of cycles `C`, a degree `-1` derivation `D` on it, and the
/// designated square `w = y^2` of degree `-2`. Multiplication is forced by
/// `ya = (-1)^{|a|} a y + D(a)`:
///
/// ```text
///   a  * (y b) = (-1)^{|a|} [ y(ab) - D(a) b ]
///   (y a) * b  = y (a b)
///   (y a)(y b) = (-1)^{|a|} [ w (a b) - y (D(a) b) ]
/// ```
///
/// Consistency demands `D` be a derivation with `D(w) = 0` and
/// `D^2 = [w, -]`; violations are reported as `Consistency` errors.
pub fn acyclic_division_from_cycles(
    c: &Presentation,
    d_map: &[GradedVector],
    w: &GradedVector,
) -> Result<DgAlgebra> {
    let f = c.field;
    let n = c.basis.len();
    if d_map.len() != n {
        return Err(Error::Format("one derivation value per cycle label".into()));
    }
    if let Some(p) = c.basis.period {
        // y z = (-1)^p z y + D(z): an odd period makes z non-central here
        if p.rem_euclid(2) == 1 && f.characteristic() != 2 {
            return Err(Error::Unsupported(
                "odd periodicity unit outside characteristic 2; re-present the cycles over its square first"
                    .into(),
            ));
        }
    }

    let p = c.basis.period.unwrap_or(0);
    let d_apply = |v: &GradedVector| -> GradedVector {
        let mut out = GradedVector::zero();
        for ((i, e), coeff) in &v.terms {
            let sign = f.sign(e * p);
            out = out.add(&f, &d_map[*i].shift(*e).scale(&f, &f.mul(coeff, &sign)));
        }
        out
    };

    for i in 0..n {
        match d_map[i].degree(&c.basis) {
            Ok(None) => {}
            Ok(Some(d)) if d == c.basis.degrees[i] - 1 => {}
            other => {
                return Err(Error::Consistency(format!(
                    "derivation value on {} is not homogeneous of degree {} ({:?})",
                    c.basis.labels[i],
                    c.basis.degrees[i] - 1,
                    other
                )))
            }
        }
    }
    match w.degree(&c.basis) {
        Ok(None) => {}
        Ok(Some(-2)) => {}
        other => {
            return Err(Error::Consistency(format!(
                "y^2 must be homogeneous of degree -2, got {:?}",
                other
            )))
        }
    }
    if !d_apply(&c.unit).is_zero() {
        return Err(Error::Consistency("derivation does not kill the unit".into()));
    }
    if !d_apply(w).is_zero() {
        return Err(Error::Consistency("derivation does not kill y^2".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = d_apply(&c.products[i][j]);
            let sign = f.sign(c.basis.degrees[i]);
            let rhs = c
                .mul(&d_map[i], &c.label_vec(j))
                .add(&f, &c.mul(&c.label_vec(i), &d_map[j]).scale(&f, &sign));
            if lhs != rhs {
                return Err(Error::Consistency(format!(
                    "derivation law fails on {} * {}",
                    c.basis.labels[i], c.basis.labels[j]
                )));
            }
        }
    }
    for i in 0..n {
        let dd = d_apply(&d_map[i]);
        let comm = c
            .mul(w, &c.label_vec(i))
            .sub(&f, &c.mul(&c.label_vec(i), w));
        if dd != comm {
            return Err(Error::Consistency(format!(
                "D^2 differs from [y^2, -] on {}",
                c.basis.labels[i]
            )));
        }
    }

    let mut labels = c.basis.labels.clone();
    let mut degrees = c.basis.degrees.clone();
    let unit_like = c.unit.terms.len() == 1 && {
        let ((i, e), coeff) = c.unit.terms.iter().next().unwrap();
        *e == 0 && *coeff == f.one() && c.basis.labels[*i] == labels[*i]
    };
    for i in 0..n {
        let name = if unit_like && c.unit.terms.contains_key(&(i, 0)) {
            "y".to_string()
        } else {
            format!("y*{}", c.basis.labels[i])
        };
        labels.push(name);
        degrees.push(c.basis.degrees[i] - 1);
    }
    let basis = GradedBasis::new(labels, degrees, c.basis.period)?;

    // reindex a cycle-coordinate vector into the doubled basis
    let embed = |v: &GradedVector, offset: usize| -> GradedVector {
        let mut out = GradedVector::zero();
        for ((i, e), coeff) in &v.terms {
            out.add_term(&f, (*i + offset, *e), coeff);
        }
        out
    };

    let count = 2 * n;
    let mut products = vec![vec![GradedVector::zero(); count]; count];
    for i in 0..n {
        for j in 0..n {
            let prod = &c.products[i][j];
            let sign = f.sign(c.basis.degrees[i]);
            products[i][j] = embed(prod, 0);
            products[i][n + j] = embed(prod, n)
                .sub(&f, &embed(&c.mul(&d_map[i], &c.label_vec(j)), 0))
                .scale(&f, &sign);
            products[n + i][j] = embed(prod, n);
            products[n + i][n + j] = embed(&c.mul(w, prod), 0)
                .sub(&f, &embed(&c.mul(&d_map[i], &c.label_vec(j)), n))
                .scale(&f, &sign);
        }
    }

    let mut diff = vec![GradedVector::zero(); count];
    for i in 0..n {
        diff[n + i] = c.label_vec(i);
    }

    Ok(DgAlgebra {
        pres: Presentation {
            field: f,
            basis,
            products,
            unit: embed(&c.unit, 0),
        },
        diff,
    })
}

/// A dg-extension: a unital degree-0 map of dg-algebras together with a
/// declared homogeneous basis of the target as a free left module over the
/// source. `images[i]` is the image of the i-th source label; when both
/// sides are periodic, `period_scale = (k, c)` records that the source
/// periodicity unit maps to `c` times the k-th power of the target one, and
/// the map extends by `phi(z^e a) = c^e z^{ke} phi(a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DgExtension {
    pub source: DgAlgebra,
    pub target: DgAlgebra,
    pub images: Vec<GradedVector>,
    pub period_scale: Option<(i64, Scalar)>,
    pub left_basis: Vec<GradedVector>,
}

impl DgExtension {
    pub fn field(&self) -> &Field {
        &self.target.pres.field
    }

    pub fn identity(dg: &DgAlgebra) -> DgExtension {
        let images = (0..dg.basis().len()).map(|i| dg.pres.label_vec(i)).collect();
        let period_scale = dg.basis().period.map(|_| (1, dg.field().one()));
        DgExtension {
            source: dg.clone(),
            target: dg.clone(),
            images,
            period_scale,
            left_basis: vec![dg.pres.unit.clone()],
        }
    }

    pub fn phi(&self, v: &GradedVector) -> GradedVector {
        let f = self.field();
        let mut out = GradedVector::zero();
        for ((i, e), coeff) in &v.terms {
            let img = match self.period_scale {
                Some((k, ref c)) => {
                    let scale = f.mul(coeff, &f.pow(c, *e).expect("period scale is invertible"));
                    self.images[*i].shift(k * e).scale(f, &scale)
                }
                None => {
                    debug_assert_eq!(*e, 0);
                    self.images[*i].scale(f, coeff)
                }
            };
            out = out.add(f, &img);
        }
        out
    }

    pub fn left_basis_degrees(&self) -> Vec<i64> {
        self.left_basis
            .iter()
            .map(|m| {
                m.degree(self.target.basis())
                    .expect("left basis is homogeneous")
                    .expect("left basis elements are nonzero")
            })
            .collect()
    }

    /// Degrees on which freeness (and with it every decomposition) must be
    /// checked: one source-period fold when periodic, otherwise the hull of
    /// the target support and all shifted source supports.
    pub fn freeness_window(&self) -> Window {
        let b = self.target.basis();
        match (self.source.basis().period, &self.period_scale) {
            (Some(pa), Some(_)) => {
                let lo = b.support_window().lo;
                Window::new(lo, lo + pa.abs() - 1)
            }
            _ => {
                let a = self.source.basis().support_window();
                let mut w = b.support_window();
                for d in self.left_basis_degrees() {
                    w = w.union(Window::new(d + a.lo, d + a.hi));
                }
                w
            }
        }
    }

    /// Matrix of `(a_t) -> sum phi(a_t) m_t` into the degree-n component of
    /// the target, with one column per source slot per basis element.
    fn freeness_matrix(&self, n: i64) -> (Matrix, Vec<(usize, Slot)>) {
        let f = self.field();
        let b_basis = self.target.basis();
        let a_basis = self.source.basis();
        let degrees = self.left_basis_degrees();
        let mut cols: Vec<(usize, Slot)> = Vec::new();
        for (t, dt) in degrees.iter().enumerate() {
            for slot in a_basis.component(n - dt) {
                cols.push((t, slot));
            }
        }
        let mut m = Matrix::zero(f, b_basis.dim(n), cols.len());
        for (col, (t, slot)) in cols.iter().enumerate() {
            let a = GradedVector::single(*slot, f.one());
            let prod = self.target.pres.mul(&self.phi(&a), &self.left_basis[*t]);
            let coords = prod
                .coordinates(f, b_basis, n)
                .expect("products of homogeneous elements are homogeneous");
            m.set_column(col, &coords);
        }
        (m, cols)
    }

    /// Express `v` as `sum phi(a_t) m_t`; returns the source elements `a_t`.
    pub fn left_decompose(&self, v: &GradedVector) -> Result<Vec<GradedVector>> {
        let f = self.field();
        let b_basis = self.target.basis();
        let mut out = vec![GradedVector::zero(); self.left_basis.len()];
        // split into homogeneous pieces first
        let mut by_degree: std::collections::BTreeMap<i64, GradedVector> = Default::default();
        for (slot, coeff) in &v.terms {
            by_degree
                .entry(b_basis.degree_of(*slot))
                .or_insert_with(GradedVector::zero)
                .add_term(f, *slot, coeff);
        }
        for (n, piece) in by_degree {
            let (m, cols) = self.freeness_matrix(n);
            let target = piece.coordinates(f, b_basis, n)?;
            match solve(f, &m, &target) {
                SolveOutcome::Solved { particular, kernel, .. } => {
                    if !kernel.is_empty() {
                        return Err(Error::Freeness {
                            degree: n,
                            detail: "left-basis decomposition is not unique".into(),
                        });
                    }
                    for ((t, slot), coeff) in cols.iter().zip(particular) {
                        out[*t].add_term(f, *slot, &coeff);
                    }
                }
                SolveOutcome::Inconsistent { .. } => {
                    return Err(Error::Freeness {
                        degree: n,
                        detail: "element is outside the span of the left basis".into(),
                    })
                }
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let f = self.field();

        let src = self.source.validate();
        report.push(
            "source algebra and differential valid",
            src.passed(),
            src.first_failure().map(|c| c.name.clone()).unwrap_or_default(),
        );
        let tgt = self.target.validate();
        report.push(
            "target algebra and differential valid",
            tgt.passed(),
            tgt.first_failure().map(|c| c.name.clone()).unwrap_or_default(),
        );

        let scale_ok = match (
            self.source.basis().period,
            self.target.basis().period,
            self.period_scale.as_ref(),
        ) {
            (None, None, None) => (true, String::new()),
            (None, Some(_), None) => (
                false,
                "periodic target over a non-periodic source has no finite left basis".into(),
            ),
            (None, _, Some(_)) => (false, "period scale given for a non-periodic source".into()),
            (Some(_), _, None) => (false, "periodic source needs a period scale".into()),
            (Some(pa), Some(pb), Some(&(k, ref c))) => {
                if k == 0 || f.is_zero(c) {
                    (false, "period scale must be nonzero".into())
                } else if pa != k * pb {
                    (
                        false,
                        format!("source period {} is not {} times the target period {}", pa, k, pb),
                    )
                } else {
                    (true, String::new())
                }
            }
            (Some(_), None, Some(_)) => (
                false,
                "periodic source cannot map to a non-periodic target".into(),
            ),
        };
        report.push("periodicity scale consistent", scale_ok.0, scale_ok.1);
        if !scale_ok.0 || !src.passed() || !tgt.passed() {
            return report;
        }

        let a_basis = self.source.basis();
        let mut deg_ok = true;
        for i in 0..a_basis.len() {
            match self.images[i].degree(self.target.basis()) {
                Ok(None) => {}
                Ok(Some(d)) if d == a_basis.degrees[i] => {}
                _ => {
                    report.push(
                        "map preserves degrees",
                        false,
                        format!("image of {} has the wrong degree", a_basis.labels[i]),
                    );
                    deg_ok = false;
                    break;
                }
            }
        }
        if deg_ok {
            report.push("map preserves degrees", true, "");
        }

        let unit_ok = self.phi(&self.source.pres.unit) == self.target.pres.unit;
        report.push("map sends unit to unit", unit_ok, "");

        let mut mult_ok = true;
        'pairs: for i in 0..a_basis.len() {
            for j in 0..a_basis.len() {
                let lhs = self.phi(&self.source.pres.products[i][j]);
                let rhs = self
                    .target
                    .pres
                    .mul(&self.images[i], &self.images[j]);
                if lhs != rhs {
                    report.push(
                        "map multiplicative on label pairs",
                        false,
                        format!("fails on {} * {}", a_basis.labels[i], a_basis.labels[j]),
                    );
                    mult_ok = false;
                    break 'pairs;
                }
            }
        }
        if mult_ok {
            report.push("map multiplicative on label pairs", true, "");
        }

        let mut diff_ok = true;
        for i in 0..a_basis.len() {
            let lhs = self.phi(&self.source.diff[i]);
            let rhs = self.target.d_apply(&self.images[i]);
            if lhs != rhs {
                report.push(
                    "map commutes with differentials",
                    false,
                    format!("fails on {}", a_basis.labels[i]),
                );
                diff_ok = false;
                break;
            }
        }
        if diff_ok {
            report.push("map commutes with differentials", true, "");
        }

        let mut basis_ok = true;
        if self.left_basis.is_empty() {
            report.push("left basis homogeneous and nonzero", false, "left basis is empty");
            basis_ok = false;
        }
        for (t, m) in self.left_basis.iter().enumerate() {
            match m.degree(self.target.basis()) {
                Ok(Some(_)) => {}
                _ => {
                    report.push(
                        "left basis homogeneous and nonzero",
                        false,
                        format!("element {} is zero or mixed-degree", t),
                    );
                    basis_ok = false;
                    break;
                }
            }
        }
        if basis_ok {
            report.push("left basis homogeneous and nonzero", true, "");
            let window = self.freeness_window();
            let mut free_ok = true;
            for n in window.iter() {
                let (m, cols) = self.freeness_matrix(n);
                let rank = m.rank(f);
                if rank != m.rows || cols.len() != m.rows {
                    report.push(
                        "target free over the source on the left basis",
                        false,
                        format!(
                            "degree {}: {} source coordinates against {} target dimensions, rank {}",
                            n,
                            cols.len(),
                            m.rows,
                            rank
                        ),
                    );
                    free_ok = false;
                    break;
                }
            }
            if free_ok {
                report.push(
                    "target free over the source on the left basis",
                    true,
                    format!("verified on {}", window),
                );
            }
        }

        report
    }
}

/// Greedy search for a homogeneous left-module basis of `target` over
/// `source`, degree by degree. Succeeds whenever the target is free with a
/// homogeneous basis (always over graded division rings); reports the first
/// obstructed degree otherwise.
pub fn find_left_basis(
    source: &DgAlgebra,
    target: &DgAlgebra,
    images: &[GradedVector],
    period_scale: Option<(i64, Scalar)>,
) -> Result<Vec<GradedVector>> {
    let window = match (source.basis().period, &period_scale) {
        (Some(pa), Some(_)) => {
            let lo = target.basis().support_window().lo;
            Window::new(lo, lo + pa.abs() - 1)
        }
        _ => target.basis().support_window(),
    };
    let mut probe = DgExtension {
        source: source.clone(),
        target: target.clone(),
        images: images.to_vec(),
        period_scale,
        left_basis: Vec::new(),
    };
    let f = *probe.field();
    let b_basis = target.basis().clone();

    for n in window.iter() {
        let dim = b_basis.dim(n);
        if dim == 0 {
            continue;
        }
        loop {
            let (m, _) = probe.freeness_matrix(n);
            let rank = m.rank(&f);
            if rank == dim {
                break;
            }
            // pick a component vector outside the current span
            let mut extended = false;
            for slot in b_basis.component(n) {
                let candidate = GradedVector::single(slot, f.one());
                let coords = candidate.coordinates(&f, &b_basis, n)?;
                let mut aug = Matrix::zero(&f, m.rows, m.cols + 1);
                for r in 0..m.rows {
                    for cidx in 0..m.cols {
                        *aug.at_mut(r, cidx) = m.at(r, cidx).clone();
                    }
                    *aug.at_mut(r, m.cols) = coords[r].clone();
                }
                if aug.rank(&f) > rank {
                    probe.left_basis.push(candidate);
                    extended = true;
                    break;
                }
            }
            if !extended {
                return Err(Error::Freeness {
                    degree: n,
                    detail: "no independent homogeneous element extends the basis".into(),
                });
            }
        }
    }

    // the greedy pass catches rank per degree; uniqueness needs the square shape
    let check = probe.validate();
    if let Some(fail) = check
        .failures()
        .find(|c| c.name == "target free over the source on the left basis")
    {
        return Err(Error::Freeness {
            degree: 0,
            detail: fail.detail.clone(),
        });
    }
    Ok(probe.left_basis)
}

/// `B (x)_A B` in left-basis coordinates: elements are sums
/// `sum_t x_t (x) m_t` with `x_t` in the target algebra. The slot
/// `((j, t), e)` stands for `(z^e b_j) (x) m_t`.
#[derive(Debug, Clone)]
pub struct TensorBimodule {
    pub ext: DgExtension,
    pub basis: GradedBasis,
    pub pair_of: Vec<(usize, usize)>,
    pub diff: Vec<GradedVector>,
}

/// Build the tensor bimodule. Precomputes `d(m_t) = sum_s phi(c_ts) m_s`;
/// a failing decomposition surfaces as a `Freeness` error.
pub fn tensor_over_source(ext: &DgExtension) -> Result<TensorBimodule> {
    let f = *ext.field();
    let b_basis = ext.target.basis();
    let nb = b_basis.len();
    let nt = ext.left_basis.len();
    let m_degrees = ext.left_basis_degrees();

    let mut labels = Vec::with_capacity(nb * nt);
    let mut degrees = Vec::with_capacity(nb * nt);
    let mut pair_of = Vec::with_capacity(nb * nt);
    for t in 0..nt {
        for j in 0..nb {
            labels.push(format!("{}(x)m{}", b_basis.labels[j], t));
            degrees.push(b_basis.degrees[j] + m_degrees[t]);
            pair_of.push((j, t));
        }
    }
    let basis = GradedBasis::new(labels, degrees, b_basis.period)?;
    let idx = |j: usize, t: usize| t * nb + j;

    // phi-coefficients of d(m_t) in the left basis
    let mut phi_d: Vec<Vec<GradedVector>> = Vec::with_capacity(nt);
    for m in &ext.left_basis {
        let d_m = ext.target.d_apply(m);
        let coeffs = ext.left_decompose(&d_m)?;
        phi_d.push(coeffs.iter().map(|a| ext.phi(a)).collect());
    }

    // d(x (x) m_t) = d(x) (x) m_t + (-1)^{|x|} sum_s (x phi(c_ts)) (x) m_s
    let mut diff = vec![GradedVector::zero(); nb * nt];
    for t in 0..nt {
        for j in 0..nb {
            let mut out = GradedVector::zero();
            for ((j2, h), c) in &ext.target.diff[j].terms {
                out.add_term(&f, (idx(*j2, t), *h), c);
            }
            let sign = f.sign(b_basis.degrees[j]);
            for (s, phi_c) in phi_d[t].iter().enumerate() {
                let prod = ext
                    .target
                    .pres
                    .mul(&ext.target.pres.label_vec(j), phi_c)
                    .scale(&f, &sign);
                for ((j2, h), c) in &prod.terms {
                    out.add_term(&f, (idx(*j2, s), *h), c);
                }
            }
            diff[idx(j, t)] = out;
        }
    }

    Ok(TensorBimodule {
        ext: ext.clone(),
        basis,
        pair_of,
        diff,
    })
}

impl TensorBimodule {
    pub fn field(&self) -> &Field {
        &self.ext.target.pres.field
    }

    fn nb(&self) -> usize {
        self.ext.target.basis().len()
    }

    pub fn slot_index(&self, j: usize, t: usize) -> usize {
        t * self.nb() + j
    }

    /// `b_j (x) m_t` as an element.
    pub fn simple(&self, j: usize, t: usize) -> GradedVector {
        GradedVector::single((self.slot_index(j, t), 0), self.field().one())
    }

    /// `b1 (x) b2` for arbitrary target elements, by decomposing `b2` in the
    /// left basis and moving the source coefficients across.
    pub fn tensor_element(&self, b1: &GradedVector, b2: &GradedVector) -> Result<GradedVector> {
        let f = *self.field();
        let coeffs = self.ext.left_decompose(b2)?;
        let mut out = GradedVector::zero();
        for (t, a) in coeffs.iter().enumerate() {
            let left = self.ext.target.pres.mul(b1, &self.ext.phi(a));
            for ((j, e), c) in &left.terms {
                out.add_term(&f, (self.slot_index(*j, t), *e), c);
            }
        }
        Ok(out)
    }

    pub fn d_apply(&self, v: &GradedVector) -> GradedVector {
        let f = self.field();
        let p = self.basis.period.unwrap_or(0);
        let mut out = GradedVector::zero();
        for ((i, e), c) in &v.terms {
            let sign = f.sign(e * p);
            out = out.add(f, &self.diff[*i].shift(*e).scale(f, &f.mul(c, &sign)));
        }
        out
    }

    pub fn d_block(&self, n: i64) -> Matrix {
        let f = self.field();
        let src = self.basis.component(n);
        let mut m = Matrix::zero(f, self.basis.dim(n + 1), src.len());
        for (col, slot) in src.iter().enumerate() {
            let img = self.d_apply(&GradedVector::single(*slot, f.one()));
            let coords = img
                .coordinates(f, &self.basis, n + 1)
                .expect("tensor differential has degree 1");
            m.set_column(col, &coords);
        }
        m
    }

    pub fn left_action(&self, b: &GradedVector, v: &GradedVector) -> GradedVector {
        let f = *self.field();
        let mut out = GradedVector::zero();
        for ((i, e), c) in &v.terms {
            let (j, t) = self.pair_of[*i];
            let x = GradedVector::single((j, *e), c.clone());
            let prod = self.ext.target.pres.mul(b, &x);
            for ((j2, h), c2) in &prod.terms {
                out.add_term(&f, (self.slot_index(*j2, t), *h), c2);
            }
        }
        out
    }

    pub fn right_action(&self, v: &GradedVector, b: &GradedVector) -> Result<GradedVector> {
        let f = *self.field();
        let mut out = GradedVector::zero();
        for ((i, e), c) in &v.terms {
            let (j, t) = self.pair_of[*i];
            let m_b = self.ext.target.pres.mul(&self.ext.left_basis[t], b);
            let coeffs = self.ext.left_decompose(&m_b)?;
            for (s, a) in coeffs.iter().enumerate() {
                let x = GradedVector::single((j, *e), c.clone());
                let prod = self.ext.target.pres.mul(&x, &self.ext.phi(a));
                for ((j2, h), c2) in &prod.terms {
                    out.add_term(&f, (self.slot_index(*j2, s), *h), c2);
                }
            }
        }
        Ok(out)
    }

    /// The multiplication map `mu(x (x) m_t) = x m_t`.
    pub fn mu(&self, v: &GradedVector) -> GradedVector {
        let f = self.field();
        let mut out = GradedVector::zero();
        for ((i, e), c) in &v.terms {
            let (j, t) = self.pair_of[*i];
            let x = GradedVector::single((j, *e), c.clone());
            let prod = self.ext.target.pres.mul(&x, &self.ext.left_basis[t]);
            out = out.add(f, &prod);
        }
        out
    }

    /// Structural checks: the differential squares to zero on labels, both
    /// actions commute with each other, satisfy the bimodule Leibniz rule,
    /// and `mu` intertwines the differentials.
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut report = ValidationReport::default();
        let f = *self.field();
        let b = &self.ext.target;
        let count = self.basis.len();

        let mut square_ok = true;
        for i in 0..count {
            let dd = self.d_apply(&self.diff[i]);
            if !dd.is_zero() {
                report.push(
                    "tensor differential squares to zero",
                    false,
                    format!("fails on {}", self.basis.labels[i]),
                );
                square_ok = false;
                break;
            }
        }
        if square_ok {
            report.push("tensor differential squares to zero", true, "");
        }

        let mut comm_ok = true;
        let mut leibniz_ok = true;
        let mut mu_ok = true;
        'outer: for i in 0..count {
            let w = GradedVector::single((i, 0), f.one());
            let wd = self.basis.degrees[i];
            for jb in 0..b.basis().len() {
                let bv = b.pres.label_vec(jb);
                let bd = b.basis().degrees[jb];
                for kb in 0..b.basis().len() {
                    let cv = b.pres.label_vec(kb);
                    let lhs = self.right_action(&self.left_action(&bv, &w), &cv)?;
                    let rhs = self.left_action(&bv, &self.right_action(&w, &cv)?);
                    if lhs != rhs {
                        report.push(
                            "left and right actions commute",
                            false,
                            format!(
                                "fails on {} . {} . {}",
                                b.basis().labels[jb],
                                self.basis.labels[i],
                                b.basis().labels[kb]
                            ),
                        );
                        comm_ok = false;
                        break 'outer;
                    }
                }
                let left_l = self
                    .d_apply(&self.left_action(&bv, &w))
                    .sub(&f, &self.left_action(&b.d_apply(&bv), &w))
                    .sub(
                        &f,
                        &self.left_action(&bv, &self.d_apply(&w)).scale(&f, &f.sign(bd)),
                    );
                let right_l = self
                    .d_apply(&self.right_action(&w, &bv)?)
                    .sub(&f, &self.right_action(&self.d_apply(&w), &bv)?)
                    .sub(
                        &f,
                        &self
                            .right_action(&w, &b.d_apply(&bv))?
                            .scale(&f, &f.sign(wd)),
                    );
                if !left_l.is_zero() || !right_l.is_zero() {
                    report.push(
                        "differential satisfies the bimodule Leibniz rule",
                        false,
                        format!(
                            "fails on {} against {}",
                            self.basis.labels[i],
                            b.basis().labels[jb]
                        ),
                    );
                    leibniz_ok = false;
                    break 'outer;
                }
            }
            let lhs = self.mu(&self.d_apply(&w));
            let rhs = b.d_apply(&self.mu(&w));
            if lhs != rhs {
                report.push(
                    "mu intertwines the differentials",
                    false,
                    format!("fails on {}", self.basis.labels[i]),
                );
                mu_ok = false;
                break;
            }
        }
        if comm_ok {
            report.push("left and right actions commute", true, "");
        }
        if leibniz_ok {
            report.push("differential satisfies the bimodule Leibniz rule", true, "");
        }
        if mu_ok {
            report.push("mu intertwines the differentials", true, "");
        }

        Ok(report)
    }
}
