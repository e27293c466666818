//! The separability decision and its surroundings: solving for a Casimir
//! element in `B (x)_A B`, classifying graded division rings by their cycle
//! structure, and comparing the solver's verdict against what the structure
//! theory predicts.

use crate::algebra::{cycles, homology, Cycles, DgAlgebra, Presentation};
use crate::construct::{find_left_basis, tensor_over_source, DgExtension, TensorBimodule};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::{canonical_solution, solve, GradedVector, Matrix, SolveOutcome, Window};
use crate::report::{Infeasibility, ValidationReport, Verdict};

/// A solved Casimir element with the shape of the system that produced it.
#[derive(Debug, Clone)]
pub struct CasimirCertificate {
    /// Degree-0 element of the tensor bimodule, in tensor coordinates.
    pub omega: GradedVector,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    /// Dimension of the solution space; 0 means the certificate is unique.
    pub solution_space_dim: usize,
}

#[derive(Debug, Clone)]
pub enum CasimirOutcome {
    Separable(CasimirCertificate),
    NotSeparable(Infeasibility),
}

impl CasimirOutcome {
    pub fn verdict(&self) -> Verdict {
        match self {
            CasimirOutcome::Separable(_) => Verdict::Separable,
            CasimirOutcome::NotSeparable(_) => Verdict::NotSeparable,
        }
    }
}

/// The elements whose centralizer already forces centrality in all of the
/// target: the images of the source labels, the k-th power of the target
/// periodicity unit (the image of the source one up to the scale, which
/// drops out of a commutator), and the left basis. Everything in the target
/// is a sum of products of these and their inverses, and a centralizer is a
/// subalgebra closed under existing inverses.
pub fn casimir_generators(ext: &DgExtension) -> Vec<(String, GradedVector)> {
    let a_basis = ext.source.basis();
    let mut out: Vec<(String, GradedVector)> = Vec::new();
    let mut push = |name: String, v: GradedVector| {
        if !v.is_zero() && !out.iter().any(|(_, seen)| *seen == v) {
            out.push((name, v));
        }
    };
    for i in 0..a_basis.len() {
        push(format!("phi({})", a_basis.labels[i]), ext.images[i].clone());
    }
    if let Some((k, _)) = ext.period_scale {
        push(
            format!("target periodicity unit to the power {}", k),
            ext.target.pres.unit.shift(k),
        );
    }
    for (t, m) in ext.left_basis.iter().enumerate() {
        push(format!("left basis element m{}", t), m.clone());
    }
    out
}

/// Decide separability by solving the linear system for a Casimir element
/// `omega` in the degree-0 part of `B (x)_A B`:
///
/// * `d(omega) = 0`,
/// * `g omega = omega g` for the generating set,
/// * `mu(omega) = 1`.
///
/// A solution is reduced to the canonical representative (free coordinates
/// of the kernel zeroed out) and re-verified; infeasibility comes back with
/// the rank bookkeeping and a dual witness naming the contradicting rows.
pub fn find_casimir(ext: &DgExtension) -> Result<CasimirOutcome> {
    let f = *ext.field();
    let t = tensor_over_source(ext)?;
    let slots = t.basis.component(0);
    let unknowns = slots.len();

    let mut row_names: Vec<String> = Vec::new();
    let mut row_coeffs: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();

    // d(omega) = 0
    {
        let out_names: Vec<String> = t
            .basis
            .component(1)
            .iter()
            .map(|s| t.basis.slot_name(*s))
            .collect();
        let block = t.d_block(0);
        for r in 0..block.rows {
            row_names.push(format!("d(omega) = 0 at {}", out_names[r]));
            row_coeffs.push((0..unknowns).map(|c| block.at(r, c).clone()).collect());
            rhs.push(f.zero());
        }
    }

    // centrality against the generating set
    for (name, g) in casimir_generators(ext) {
        let gdeg = g
            .degree(ext.target.basis())?
            .expect("generators are nonzero");
        let out_slots = t.basis.component(gdeg);
        let mut per_col: Vec<Vec<Scalar>> = Vec::with_capacity(unknowns);
        for s in &slots {
            let sv = GradedVector::single(*s, f.one());
            let diff = t
                .left_action(&g, &sv)
                .sub(&f, &t.right_action(&sv, &g)?);
            per_col.push(diff.coordinates(&f, &t.basis, gdeg)?);
        }
        for r in 0..out_slots.len() {
            row_names.push(format!(
                "{} commutes with omega at {}",
                name,
                t.basis.slot_name(out_slots[r])
            ));
            row_coeffs.push(per_col.iter().map(|col| col[r].clone()).collect());
            rhs.push(f.zero());
        }
    }

    // mu(omega) = 1
    {
        let b_basis = ext.target.basis();
        let out_slots = b_basis.component(0);
        let unit_coords = ext.target.pres.unit.coordinates(&f, b_basis, 0)?;
        let mut per_col: Vec<Vec<Scalar>> = Vec::with_capacity(unknowns);
        for s in &slots {
            let sv = GradedVector::single(*s, f.one());
            per_col.push(t.mu(&sv).coordinates(&f, b_basis, 0)?);
        }
        for r in 0..out_slots.len() {
            row_names.push(format!(
                "mu(omega) = 1 at {}",
                b_basis.slot_name(out_slots[r])
            ));
            row_coeffs.push(per_col.iter().map(|col| col[r].clone()).collect());
            rhs.push(unit_coords[r].clone());
        }
    }

    let equations = row_names.len();
    let mut m = Matrix::zero(&f, equations, unknowns);
    for (r, coeffs) in row_coeffs.iter().enumerate() {
        for (c, v) in coeffs.iter().enumerate() {
            *m.at_mut(r, c) = v.clone();
        }
    }

    match solve(&f, &m, &rhs) {
        SolveOutcome::Solved {
            particular,
            kernel,
            rank,
        } => {
            let coords = canonical_solution(&f, &particular, &kernel);
            let mut omega = GradedVector::zero();
            for (slot, c) in slots.iter().zip(&coords) {
                omega.add_term(&f, *slot, c);
            }
            let cert = CasimirCertificate {
                omega,
                unknowns,
                equations,
                rank,
                solution_space_dim: kernel.len(),
            };
            let check = verify_casimir(ext, &cert.omega)?;
            if !check.passed() {
                return Err(Error::Validation(format!(
                    "solver produced an element that fails re-verification: {}",
                    check
                        .first_failure()
                        .map(|c| c.name.clone())
                        .unwrap_or_default()
                )));
            }
            Ok(CasimirOutcome::Separable(cert))
        }
        SolveOutcome::Inconsistent {
            rank,
            augmented_rank,
            dual_witness,
        } => {
            let witness_rows: Vec<(String, Scalar)> = row_names
                .iter()
                .zip(&dual_witness)
                .filter(|(_, c)| !f.is_zero(c))
                .map(|(n, c)| (n.clone(), c.clone()))
                .collect();
            Ok(CasimirOutcome::NotSeparable(Infeasibility {
                unknowns,
                equations,
                rank,
                augmented_rank,
                dual_witness,
                witness_rows,
            }))
        }
    }
}

/// Independent re-check of a claimed Casimir element: homogeneity, cycle
/// condition, centrality against the generating set and against every
/// target label, and the counit condition.
pub fn verify_casimir(ext: &DgExtension, omega: &GradedVector) -> Result<ValidationReport> {
    let t = tensor_over_source(ext)?;
    let mut report = ValidationReport::default();

    let deg_ok = matches!(omega.degree(&t.basis), Ok(Some(0)));
    report.push(
        "omega is a nonzero element of degree 0",
        deg_ok,
        if deg_ok { "" } else { "zero or not homogeneous of degree 0" },
    );

    report.push("d(omega) = 0", t.d_apply(omega).is_zero(), "");

    let mut central = true;
    for (name, g) in casimir_generators(ext) {
        let lhs = t.left_action(&g, omega);
        let rhs = t.right_action(omega, &g)?;
        if lhs != rhs {
            report.push("omega commutes with the generating set", false, name);
            central = false;
            break;
        }
    }
    if central {
        report.push("omega commutes with the generating set", true, "");
    }

    let mut label_central = true;
    for j in 0..ext.target.basis().len() {
        let g = ext.target.pres.label_vec(j);
        if g.is_zero() {
            continue;
        }
        let lhs = t.left_action(&g, omega);
        let rhs = t.right_action(omega, &g)?;
        if lhs != rhs {
            report.push(
                "omega commutes with every target label",
                false,
                ext.target.basis().labels[j].clone(),
            );
            label_central = false;
            break;
        }
    }
    if label_central {
        report.push("omega commutes with every target label", true, "");
    }

    report.push(
        "mu(omega) = 1",
        t.mu(omega) == ext.target.pres.unit,
        "",
    );

    Ok(report)
}

/// Trichotomy for graded-commutative algebras probed on a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrDivisionClass {
    NotGrDivision,
    FieldConcentratedDegreeZero,
    LaurentOverField,
}

impl std::fmt::Display for GrDivisionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GrDivisionClass::NotGrDivision => "not-gr-division",
            GrDivisionClass::FieldConcentratedDegreeZero => "field-concentrated-degree-0",
            GrDivisionClass::LaurentOverField => "laurent-over-field",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct GrDivisionReport {
    pub class: GrDivisionClass,
    /// Positive generator of the support subgroup; `None` when the support
    /// is `{0}` or the algebra is not graded division.
    pub support_generator: Option<i64>,
    pub degree_zero_dim: usize,
    pub detail: String,
}

const ENUMERATION_CAP: u64 = 100_000;

fn component_vectors(f: &Field, dim: usize) -> Result<Vec<Vec<Scalar>>> {
    let elems = f.enumerate().ok_or_else(|| {
        Error::Unsupported(
            "invertibility over the rationals is only decided for one-dimensional components"
                .into(),
        )
    })?;
    let p = elems.len() as u64;
    let total = p
        .checked_pow(dim as u32)
        .filter(|&t| t <= ENUMERATION_CAP)
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "exhaustive invertibility check over {}^{} exceeds the cap",
                p, dim
            ))
        })?;
    let mut out = Vec::with_capacity(total as usize);
    let mut counter = vec![0usize; dim];
    loop {
        out.push(counter.iter().map(|&i| elems[i].clone()).collect());
        let mut pos = 0;
        loop {
            if pos == dim {
                return Ok(out);
            }
            counter[pos] += 1;
            if counter[pos] < elems.len() {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
    }
}

fn is_invertible(pres: &Presentation, v: &GradedVector, n: i64) -> bool {
    let f = &pres.field;
    let unit_coords = pres
        .unit
        .coordinates(f, &pres.basis, 0)
        .expect("unit has degree 0");
    let left = pres.left_mul_block(v, -n, n);
    let right = pres.right_mul_block(v, -n, n);
    matches!(solve(f, &left, &unit_coords), SolveOutcome::Solved { .. })
        && matches!(solve(f, &right, &unit_coords), SolveOutcome::Solved { .. })
}

/// Is every nonzero homogeneous element of degree `n` invertible? Exhaustive
/// over prime fields; over the rationals only rank-one components can be
/// decided, everything else is refused.
fn component_all_invertible(pres: &Presentation, n: i64) -> Result<(bool, String)> {
    let f = &pres.field;
    let dim = pres.basis.dim(n);
    if dim == 0 {
        return Ok((true, String::new()));
    }
    if f.enumerate().is_some() {
        for coords in component_vectors(f, dim)? {
            if coords.iter().all(|c| f.is_zero(c)) {
                continue;
            }
            let v = GradedVector::from_coordinates(f, &pres.basis, n, &coords);
            if !is_invertible(pres, &v, n) {
                return Ok((false, format!("{} is not invertible", v.render(&pres.basis))));
            }
        }
        Ok((true, String::new()))
    } else {
        if dim > 1 {
            return Err(Error::Unsupported(format!(
                "degree {} has dimension {} over the rationals; invertibility needs an exhaustive field",
                n, dim
            )));
        }
        let slot = pres.basis.component(n)[0];
        let v = GradedVector::single(slot, f.one());
        if is_invertible(pres, &v, n) {
            Ok((true, String::new()))
        } else {
            Ok((false, format!("{} is not invertible", v.render(&pres.basis))))
        }
    }
}

/// Classify a graded-commutative algebra as not graded division, a field in
/// degree 0, or a Laurent ring over a field. The window must contain degree
/// 0 and, for periodic presentations, cover at least two folds.
pub fn classify_gr_division(pres: &Presentation, window: Window) -> Result<GrDivisionReport> {
    if !pres.is_graded_commutative() {
        return Err(Error::Validation(
            "classification requires a graded-commutative algebra".into(),
        ));
    }
    if !window.contains(0) {
        return Err(Error::WindowTooSmall(format!(
            "window {} misses degree 0",
            window
        )));
    }
    if let Some(p) = pres.basis.period {
        if window.len() < 2 * p.abs() {
            return Err(Error::WindowTooSmall(format!(
                "window {} is shorter than two periods of length {}",
                window,
                p.abs()
            )));
        }
    }

    let degree_zero_dim = pres.basis.dim(0);
    let supported: Vec<i64> = window.iter().filter(|&n| pres.basis.dim(n) > 0).collect();

    let (field0, field0_detail) = component_all_invertible(pres, 0)?;

    if supported.iter().all(|&n| n == 0) {
        return Ok(if field0 {
            GrDivisionReport {
                class: GrDivisionClass::FieldConcentratedDegreeZero,
                support_generator: None,
                degree_zero_dim,
                detail: "every nonzero element of the degree-0 component is invertible".into(),
            }
        } else {
            GrDivisionReport {
                class: GrDivisionClass::NotGrDivision,
                support_generator: None,
                degree_zero_dim,
                detail: field0_detail,
            }
        });
    }

    if pres.basis.period.is_none() {
        // finite support beyond degree 0: a top-degree element has no inverse
        let top = *supported.iter().max_by_key(|n| n.abs()).unwrap();
        return Ok(GrDivisionReport {
            class: GrDivisionClass::NotGrDivision,
            support_generator: None,
            degree_zero_dim,
            detail: format!(
                "support reaches degree {} but is finite, so nothing there is invertible",
                top
            ),
        });
    }

    if !field0 {
        return Ok(GrDivisionReport {
            class: GrDivisionClass::NotGrDivision,
            support_generator: None,
            degree_zero_dim,
            detail: field0_detail,
        });
    }

    let g = supported
        .iter()
        .filter(|&&n| n != 0)
        .fold(0i64, |acc, &n| gcd(acc, n.abs()));
    for n in window.iter() {
        let should = n.rem_euclid(g) == 0;
        let does = pres.basis.dim(n) > 0;
        if should != does {
            return Ok(GrDivisionReport {
                class: GrDivisionClass::NotGrDivision,
                support_generator: None,
                degree_zero_dim,
                detail: format!(
                    "support is not the subgroup generated by {}: degree {} breaks the pattern",
                    g, n
                ),
            });
        }
    }
    for &n in &supported {
        if pres.basis.dim(n) != degree_zero_dim {
            return Ok(GrDivisionReport {
                class: GrDivisionClass::NotGrDivision,
                support_generator: None,
                degree_zero_dim,
                detail: format!(
                    "degree {} has dimension {} but degree 0 has {}",
                    n,
                    pres.basis.dim(n),
                    degree_zero_dim
                ),
            });
        }
        let (ok, detail) = component_all_invertible(pres, n)?;
        if !ok {
            return Ok(GrDivisionReport {
                class: GrDivisionClass::NotGrDivision,
                support_generator: None,
                degree_zero_dim,
                detail,
            });
        }
    }

    Ok(GrDivisionReport {
        class: GrDivisionClass::LaurentOverField,
        support_generator: Some(g),
        degree_zero_dim,
        detail: format!(
            "every nonzero homogeneous element is invertible; support is {}Z",
            g
        ),
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if a == 0 {
        b.abs()
    } else {
        gcd(b.rem_euclid(a.abs()), a.abs())
    }
}

#[derive(Debug, Clone)]
pub struct DgDivisionReport {
    pub is_division: bool,
    pub cycles: GrDivisionReport,
    pub acyclic_on_window: bool,
    pub zero_differential: bool,
}

/// A dg-algebra is dg-division exactly when its cycle algebra is graded
/// division: the inverse of a cycle is again a cycle, so invertibility can
/// be decided inside the cycles. The ambient algebra may be noncommutative
/// (odd square roots of units force that), but the shape classification of
/// the cycle algebra is only implemented for graded-commutative cycles.
pub fn is_dg_division(dg: &DgAlgebra) -> Result<DgDivisionReport> {
    let cyc = cycles(dg, dg.default_window())?;
    if !cyc.algebra.is_graded_commutative() {
        return Err(Error::HypothesisUnverified(
            "the cycle algebra is not graded-commutative, and only that case is classified".into(),
        ));
    }
    let cyc_window = match cyc.algebra.basis.period {
        Some(p) => {
            let lo = cyc.algebra.basis.support_window().lo;
            Window::new(lo.min(0), lo + 2 * p.abs() - 1)
        }
        None => {
            let w = cyc.algebra.basis.support_window();
            Window::new(w.lo.min(0), w.hi.max(0))
        }
    };
    let report = classify_gr_division(&cyc.algebra, cyc_window)?;
    let table = homology(dg, dg.default_window());
    Ok(DgDivisionReport {
        is_division: report.class != GrDivisionClass::NotGrDivision,
        cycles: report,
        acyclic_on_window: table.acyclic_on_window,
        zero_differential: dg.has_zero_differential(),
    })
}

/// The restriction of the extension map to cycles, as a graded extension of
/// the cycle algebras (zero differentials), with a freshly computed left
/// basis.
pub fn induced_cycle_extension(ext: &DgExtension) -> Result<DgExtension> {
    let cyc_a = cycles(&ext.source, ext.source.default_window())?;
    let cyc_b = cycles(&ext.target, ext.target.default_window())?;

    let mut images = Vec::with_capacity(cyc_a.algebra.basis.len());
    for inc in &cyc_a.inclusion {
        let img = ext.phi(inc);
        if !ext.target.d_apply(&img).is_zero() {
            return Err(Error::Validation(
                "image of a cycle is not a cycle; the extension does not commute with the differentials"
                    .into(),
            ));
        }
        images.push(cyc_b.express(&ext.target, &img)?);
    }

    let source = DgAlgebra::zero_differential(cyc_a.algebra.clone());
    let target = DgAlgebra::zero_differential(cyc_b.algebra.clone());
    let period_scale = ext.period_scale.clone();
    let left_basis = find_left_basis(&source, &target, &images, period_scale.clone())?;
    let induced = DgExtension {
        source,
        target,
        images,
        period_scale,
        left_basis,
    };
    let report = induced.validate();
    if !report.passed() {
        return Err(Error::Validation(format!(
            "induced cycle extension fails validation: {}",
            report
                .first_failure()
                .map(|c| c.name.clone())
                .unwrap_or_default()
        )));
    }
    Ok(induced)
}

/// The inclusion of `ker(d_B) (x)_{ker(d_A)} ker(d_B)` into `B (x)_A B`.
/// The small tensor is presented through the induced cycle extension; `map`
/// realizes its slots inside the ambient tensor bimodule.
#[derive(Debug, Clone)]
pub struct CycleTensor {
    pub induced: DgExtension,
    pub cycles_target: Cycles,
    pub small: TensorBimodule,
}

pub fn cycle_tensor_inclusion(ext: &DgExtension) -> Result<CycleTensor> {
    let induced = induced_cycle_extension(ext)?;
    let cycles_target = cycles(&ext.target, ext.target.default_window())?;
    let small = tensor_over_source(&induced)?;
    Ok(CycleTensor {
        induced,
        cycles_target,
        small,
    })
}

impl CycleTensor {
    pub fn map(&self, ambient: &TensorBimodule, v: &GradedVector) -> Result<GradedVector> {
        let f = ambient.field();
        let mut out = GradedVector::zero();
        for ((i, e), c) in &v.terms {
            let (j, t) = self.small.pair_of[*i];
            let left = self
                .cycles_target
                .to_ambient(f, &GradedVector::single((j, *e), c.clone()));
            let right = self
                .cycles_target
                .to_ambient(f, &self.induced.left_basis[t]);
            out = out.add(f, &ambient.tensor_element(&left, &right)?);
        }
        Ok(out)
    }

    fn columns_at(
        &self,
        ambient: &TensorBimodule,
        n: i64,
    ) -> Result<(Matrix, usize)> {
        let f = ambient.field();
        let slots = self.small.basis.component(n);
        let mut m = Matrix::zero(f, ambient.basis.dim(n), slots.len());
        for (col, s) in slots.iter().enumerate() {
            let img = self.map(ambient, &GradedVector::single(*s, f.one()))?;
            m.set_column(col, &img.coordinates(f, &ambient.basis, n)?);
        }
        Ok((m, slots.len()))
    }

    /// Column rank equals the small dimension in every degree of the window.
    pub fn injective_on(&self, ambient: &TensorBimodule, window: Window) -> Result<bool> {
        let f = ambient.field();
        for n in window.iter() {
            let (m, cols) = self.columns_at(ambient, n)?;
            if m.rank(f) != cols {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Does a homogeneous ambient tensor element lie in the image?
    pub fn contains(&self, ambient: &TensorBimodule, v: &GradedVector) -> Result<bool> {
        let f = ambient.field();
        let n = match v.degree(&ambient.basis)? {
            Some(n) => n,
            None => return Ok(true),
        };
        let (m, _) = self.columns_at(ambient, n)?;
        let coords = v.coordinates(f, &ambient.basis, n)?;
        Ok(matches!(solve(f, &m, &coords), SolveOutcome::Solved { .. }))
    }
}

/// Side-by-side comparison of the predicted verdict (from the shape of the
/// extension and the classification of the cycle algebras) and the computed
/// one (from the Casimir solver). `predicted` is `TheoremSilent` where the
/// structure theory makes no claim; a mismatch is only possible when it
/// does.
#[derive(Debug, Clone)]
pub struct MainTheoremReport {
    pub characteristic: u64,
    pub branch: String,
    pub predicted: Verdict,
    pub computed: Verdict,
    pub mismatch: bool,
    pub notes: Vec<String>,
    pub outcome: CasimirOutcome,
}

fn predicted_graded_separability(
    char_p: u64,
    src: &GrDivisionReport,
    tgt: &GrDivisionReport,
    notes: &mut Vec<String>,
) -> Option<bool> {
    match (src.class, tgt.class) {
        (GrDivisionClass::FieldConcentratedDegreeZero, GrDivisionClass::FieldConcentratedDegreeZero) => {
            notes.push(
                "field extension concentrated in degree 0; finite fields and the rationals are perfect, so it is separable"
                    .into(),
            );
            Some(true)
        }
        (GrDivisionClass::LaurentOverField, GrDivisionClass::LaurentOverField) => {
            let ga = src.support_generator.expect("laurent class carries a generator");
            let gb = tgt.support_generator.expect("laurent class carries a generator");
            if gb == 0 || ga.rem_euclid(gb) != 0 {
                notes.push(format!(
                    "support generators {} and {} are incompatible",
                    ga, gb
                ));
                return None;
            }
            let index = ga / gb;
            let divisible = char_p != 0 && (index.unsigned_abs() % char_p == 0);
            notes.push(format!(
                "Laurent pair with support index {}; separable exactly when the characteristic does not divide it",
                index
            ));
            Some(!divisible)
        }
        _ => {
            notes.push("cycle algebras have incompatible shapes".into());
            None
        }
    }
}

pub fn check_main_theorem(ext: &DgExtension) -> Result<MainTheoremReport> {
    let char_p = ext.field().characteristic();
    let src_div = is_dg_division(&ext.source)?;
    let tgt_div = is_dg_division(&ext.target)?;
    if !src_div.is_division || !tgt_div.is_division {
        return Err(Error::HypothesisUnverified(format!(
            "both sides must be dg-division algebras (source: {}, target: {})",
            src_div.cycles.class, tgt_div.cycles.class
        )));
    }

    let mut notes = Vec::new();
    let (branch, predicted) = match (src_div.zero_differential, tgt_div.zero_differential) {
        (true, true) => {
            let p = predicted_graded_separability(
                char_p,
                &src_div.cycles,
                &tgt_div.cycles,
                &mut notes,
            );
            let verdict = match p {
                Some(true) => Verdict::Separable,
                Some(false) => Verdict::NotSeparable,
                None => Verdict::TheoremSilent,
            };
            ("graded to graded".to_string(), verdict)
        }
        (true, false) => {
            if !tgt_div.acyclic_on_window {
                return Err(Error::Validation(
                    "a dg-division algebra with a nonzero differential must be acyclic".into(),
                ));
            }
            let verdict = if char_p == 2 {
                notes.push(
                    "in characteristic 2 the obstruction argument is unavailable; no claim".into(),
                );
                Verdict::TheoremSilent
            } else {
                notes.push(
                    "a graded base never splits off an acyclic cover outside characteristic 2"
                        .into(),
                );
                Verdict::NotSeparable
            };
            ("graded into acyclic".to_string(), verdict)
        }
        (false, _) => {
            if tgt_div.zero_differential {
                return Err(Error::Validation(
                    "an acyclic source forces an acyclic target; a zero differential there is inconsistent"
                        .into(),
                ));
            }
            if !src_div.acyclic_on_window || !tgt_div.acyclic_on_window {
                return Err(Error::Validation(
                    "a dg-division algebra with a nonzero differential must be acyclic".into(),
                ));
            }
            let p = predicted_graded_separability(
                char_p,
                &src_div.cycles,
                &tgt_div.cycles,
                &mut notes,
            );
            let verdict = match p {
                Some(true) => Verdict::Separable,
                Some(false) => {
                    if char_p == 2 {
                        notes.push(
                            "in characteristic 2 only the forward direction is available; no claim"
                                .into(),
                        );
                        Verdict::TheoremSilent
                    } else {
                        Verdict::NotSeparable
                    }
                }
                None => Verdict::TheoremSilent,
            };
            ("acyclic to acyclic, decided on the cycle algebras".to_string(), verdict)
        }
    };

    let outcome = find_casimir(ext)?;
    let computed = outcome.verdict();
    let mismatch = match predicted {
        Verdict::TheoremSilent => false,
        p => p != computed,
    };

    Ok(MainTheoremReport {
        characteristic: char_p,
        branch,
        predicted,
        computed,
        mismatch,
        notes,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{
        acyclic_division_from_cycles, dual_numbers, ground_field, laurent_ring,
        quadratic_field_extension, twisted_laurent,
    };

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn field_to_dual_numbers(field: Field) -> DgExtension {
        let dn = dual_numbers(field);
        DgExtension {
            source: ground_field(field),
            target: dn.clone(),
            images: vec![dn.pres.unit.clone()],
            period_scale: None,
            left_basis: vec![dn.pres.label_vec(0), dn.pres.label_vec(1)],
        }
    }

    fn laurent_pair(field: Field, n: i64) -> DgExtension {
        let source = laurent_ring(field, 2 * n).unwrap();
        let target = laurent_ring(field, 2).unwrap();
        let left_basis = (0..n)
            .map(|t| GradedVector::single((0, t), field.one()))
            .collect();
        DgExtension {
            source,
            target,
            images: vec![GradedVector::single((0, 0), field.one())],
            period_scale: Some((n, field.one())),
            left_basis,
        }
    }

    fn cycles_into_acyclic(field: Field) -> DgExtension {
        let c = laurent_ring(field, 2).unwrap();
        let b = acyclic_division_from_cycles(
            &c.pres,
            &[GradedVector::zero()],
            &GradedVector::zero(),
        )
        .unwrap();
        DgExtension {
            source: c,
            target: b.clone(),
            images: vec![b.pres.label_vec(0)],
            period_scale: Some((1, field.one())),
            left_basis: vec![b.pres.label_vec(0), b.pres.label_vec(1)],
        }
    }

    fn acyclic_pair(field: Field, n: i64) -> DgExtension {
        let ca = laurent_ring(field, 2 * n).unwrap().pres;
        let cb = laurent_ring(field, 2).unwrap().pres;
        let source =
            acyclic_division_from_cycles(&ca, &[GradedVector::zero()], &GradedVector::zero())
                .unwrap();
        let target =
            acyclic_division_from_cycles(&cb, &[GradedVector::zero()], &GradedVector::zero())
                .unwrap();
        let left_basis = (0..n)
            .map(|t| GradedVector::single((0, t), field.one()))
            .collect();
        DgExtension {
            source,
            target: target.clone(),
            // 1 -> 1 and y -> y
            images: vec![target.pres.label_vec(0), target.pres.label_vec(1)],
            period_scale: Some((n, field.one())),
            left_basis,
        }
    }

    #[test]
    fn dual_numbers_are_never_separable() {
        for field in [Field::Rationals, f(3), f(5)] {
            let ext = field_to_dual_numbers(field);
            assert!(ext.validate().passed());
            match find_casimir(&ext).unwrap() {
                CasimirOutcome::NotSeparable(inf) => {
                    assert_eq!(inf.unknowns, 1);
                    assert!(inf.augmented_rank > inf.rank);
                    assert!(!inf.witness_rows.is_empty());
                }
                CasimirOutcome::Separable(_) => panic!("dual numbers must not be separable"),
            }
        }
    }

    #[test]
    fn laurent_pairs_follow_the_characteristic() {
        for (p, n, expect_sep) in [
            (2u64, 2i64, false),
            (2, 3, true),
            (3, 3, false),
            (3, 2, true),
            (5, 5, false),
            (5, 4, true),
        ] {
            let ext = laurent_pair(f(p), n);
            assert!(ext.validate().passed());
            let out = find_casimir(&ext).unwrap();
            assert_eq!(
                matches!(out, CasimirOutcome::Separable(_)),
                expect_sep,
                "p={} n={}",
                p,
                n
            );
            if let CasimirOutcome::Separable(cert) = out {
                assert!(verify_casimir(&ext, &cert.omega).unwrap().passed());
                // the system pins omega down completely
                assert_eq!(cert.solution_space_dim, 0);
                // omega = n^{-1} sum_t T^{-t} (x) m_t
                let field = f(p);
                let inv_n = field.invert(&field.from_int(n)).unwrap();
                let mut expected = GradedVector::zero();
                let nb = ext.target.basis().len();
                for t in 0..n {
                    expected.add_term(&field, (t as usize * nb, -t), &inv_n);
                }
                assert_eq!(cert.omega, expected, "p={} n={}", p, n);
            }
        }
    }

    #[test]
    fn casimir_for_f2_cubic_pair_matches_brute_force() {
        let field = f(2);
        let ext = laurent_pair(field, 3);
        let t = tensor_over_source(&ext).unwrap();
        let slots = t.basis.component(0);
        assert_eq!(slots.len(), 3);
        // enumerate all 8 degree-0 candidates and check the definition directly
        let mut survivors = Vec::new();
        for mask in 0..8u32 {
            let mut omega = GradedVector::zero();
            for (i, s) in slots.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    omega.add_term(&field, *s, &field.one());
                }
            }
            if omega.is_zero() {
                continue;
            }
            if !t.d_apply(&omega).is_zero() {
                continue;
            }
            if t.mu(&omega) != ext.target.pres.unit {
                continue;
            }
            let mut central = true;
            for (_, g) in casimir_generators(&ext) {
                if t.left_action(&g, &omega) != t.right_action(&omega, &g).unwrap() {
                    central = false;
                    break;
                }
            }
            if central {
                survivors.push(omega);
            }
        }
        assert_eq!(survivors.len(), 1);
        match find_casimir(&ext).unwrap() {
            CasimirOutcome::Separable(cert) => assert_eq!(cert.omega, survivors[0]),
            _ => panic!("F_2 with index 3 is separable"),
        }
    }

    #[test]
    fn verify_rejects_corrupted_certificates() {
        let field = f(3);
        let ext = laurent_pair(field, 2);
        let cert = match find_casimir(&ext).unwrap() {
            CasimirOutcome::Separable(c) => c,
            _ => panic!("separable"),
        };
        let doubled = cert.omega.scale(&field, &field.from_int(2));
        let report = verify_casimir(&ext, &doubled).unwrap();
        assert!(!report.passed());
        assert!(report.failures().any(|c| c.name == "mu(omega) = 1"));
    }

    #[test]
    fn classification_trichotomy() {
        // plain field
        let k = ground_field(f(5)).pres;
        let r = classify_gr_division(&k, Window::new(-2, 2)).unwrap();
        assert_eq!(r.class, GrDivisionClass::FieldConcentratedDegreeZero);

        // F_4 in degree 0
        let f4 = quadratic_field_extension(f(2), 1, 1).unwrap().pres;
        let r = classify_gr_division(&f4, Window::new(-1, 1)).unwrap();
        assert_eq!(r.class, GrDivisionClass::FieldConcentratedDegreeZero);
        assert_eq!(r.degree_zero_dim, 2);

        // Laurent ring, even generator
        let l = laurent_ring(f(5), 2).unwrap().pres;
        let r = classify_gr_division(&l, Window::new(-4, 4)).unwrap();
        assert_eq!(r.class, GrDivisionClass::LaurentOverField);
        assert_eq!(r.support_generator, Some(2));

        // Laurent ring with odd generator over F_2
        let l2 = laurent_ring(f(2), 1).unwrap().pres;
        let r = classify_gr_division(&l2, Window::new(-2, 2)).unwrap();
        assert_eq!(r.class, GrDivisionClass::LaurentOverField);
        assert_eq!(r.support_generator, Some(1));

        // dual numbers are not graded division (X has no inverse)
        let dn = dual_numbers(f(5)).pres;
        let r = classify_gr_division(&dn, Window::new(-2, 2)).unwrap();
        assert_eq!(r.class, GrDivisionClass::NotGrDivision);

        // window shorter than two periods is refused
        let small = classify_gr_division(&l, Window::new(-1, 1));
        assert!(matches!(small, Err(Error::WindowTooSmall(_))));

        // noncommutative input is refused
        let f4p = quadratic_field_extension(f(2), 1, 1).unwrap().pres;
        let frob = vec![f4p.label_vec(0), f4p.products[1][1].clone()];
        let tw = twisted_laurent(&f4p, &frob, 2, 1).unwrap();
        let r = classify_gr_division(&tw.pres, Window::new(-4, 4));
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn dg_division_goes_through_cycles() {
        // dual numbers: acyclic, cycles are the ground field
        let dn = dual_numbers(f(5));
        let r = is_dg_division(&dn).unwrap();
        assert!(r.is_division);
        assert!(r.acyclic_on_window);
        assert_eq!(r.cycles.class, GrDivisionClass::FieldConcentratedDegreeZero);

        // same underlying algebra with zero differential: X is a non-invertible cycle
        let frozen = DgAlgebra::zero_differential(dn.pres.clone());
        let r = is_dg_division(&frozen).unwrap();
        assert!(!r.is_division);

        // acyclic division algebra over Laurent cycles
        let c = laurent_ring(f(5), 2).unwrap().pres;
        let b = acyclic_division_from_cycles(&c, &[GradedVector::zero()], &GradedVector::zero())
            .unwrap();
        let r = is_dg_division(&b).unwrap();
        assert!(r.is_division);
        assert_eq!(r.cycles.class, GrDivisionClass::LaurentOverField);

        // noncommutative input is refused
        let f4 = quadratic_field_extension(f(2), 1, 1).unwrap().pres;
        let frob = vec![f4.label_vec(0), f4.products[1][1].clone()];
        let tw = twisted_laurent(&f4, &frob, 2, 1).unwrap();
        assert!(matches!(
            is_dg_division(&tw),
            Err(Error::HypothesisUnverified(_))
        ));
    }

    #[test]
    fn induced_extension_of_graded_pair_is_itself() {
        let ext = laurent_pair(f(3), 2);
        let ind = induced_cycle_extension(&ext).unwrap();
        assert!(ind.validate().passed());
        assert_eq!(ind.source.basis().period, Some(4));
        assert_eq!(ind.target.basis().period, Some(2));
        assert_eq!(ind.left_basis.len(), 2);
    }

    #[test]
    fn induced_extension_of_acyclic_pair_is_the_laurent_pair() {
        let ext = acyclic_pair(f(3), 2);
        assert!(ext.validate().passed());
        let ind = induced_cycle_extension(&ext).unwrap();
        // cycles of both sides are the Laurent rings; index 2 remains
        assert_eq!(ind.source.basis().len(), 1);
        assert_eq!(ind.target.basis().len(), 1);
        assert_eq!(ind.period_scale, ext.period_scale);
        assert_eq!(ind.left_basis.len(), 2);
    }

    #[test]
    fn main_theorem_on_graded_pairs() {
        let rep = check_main_theorem(&laurent_pair(f(3), 2)).unwrap();
        assert_eq!(rep.predicted, Verdict::Separable);
        assert_eq!(rep.computed, Verdict::Separable);
        assert!(!rep.mismatch);

        let rep = check_main_theorem(&laurent_pair(f(3), 3)).unwrap();
        assert_eq!(rep.predicted, Verdict::NotSeparable);
        assert_eq!(rep.computed, Verdict::NotSeparable);
        assert!(!rep.mismatch);

        // characteristic 2 says nothing special here: the graded criterion applies
        let rep = check_main_theorem(&laurent_pair(f(2), 3)).unwrap();
        assert_eq!(rep.predicted, Verdict::Separable);
        assert_eq!(rep.computed, Verdict::Separable);
    }

    #[test]
    fn main_theorem_on_cycles_into_acyclic() {
        for p in [3u64, 5] {
            let rep = check_main_theorem(&cycles_into_acyclic(f(p))).unwrap();
            assert_eq!(rep.predicted, Verdict::NotSeparable, "p={}", p);
            assert_eq!(rep.computed, Verdict::NotSeparable, "p={}", p);
            assert!(!rep.mismatch);
        }
        // characteristic 2: the theorem is silent, whatever the solver finds
        let rep = check_main_theorem(&cycles_into_acyclic(f(2))).unwrap();
        assert_eq!(rep.predicted, Verdict::TheoremSilent);
        assert!(!rep.mismatch);
    }

    #[test]
    fn main_theorem_on_acyclic_pairs() {
        let rep = check_main_theorem(&acyclic_pair(f(3), 2)).unwrap();
        assert_eq!(rep.predicted, Verdict::Separable);
        assert_eq!(rep.computed, Verdict::Separable);
        assert!(!rep.mismatch);

        let rep = check_main_theorem(&acyclic_pair(f(3), 3)).unwrap();
        assert_eq!(rep.predicted, Verdict::NotSeparable);
        assert_eq!(rep.computed, Verdict::NotSeparable);
        assert!(!rep.mismatch);
    }

    #[test]
    fn casimir_lies_in_the_cycle_tensor() {
        let ext = laurent_pair(f(2), 3);
        let cert = match find_casimir(&ext).unwrap() {
            CasimirOutcome::Separable(c) => c,
            _ => panic!("separable"),
        };
        let ambient = tensor_over_source(&ext).unwrap();
        let ct = cycle_tensor_inclusion(&ext).unwrap();
        let fold = ct.small.basis.support_window();
        assert!(ct.injective_on(&ambient, fold).unwrap());
        assert!(ct.contains(&ambient, &cert.omega).unwrap());
    }

    #[test]
    fn cycle_tensor_of_dual_numbers_is_one_dimensional() {
        let ext = field_to_dual_numbers(Field::Rationals);
        let ambient = tensor_over_source(&ext).unwrap();
        let ct = cycle_tensor_inclusion(&ext).unwrap();
        assert_eq!(ct.small.basis.len(), 1);
        assert!(ct
            .injective_on(&ambient, Window::new(0, 0))
            .unwrap());
        // the image at degree 0 is spanned by 1 (x) 1
        let img = ct
            .map(&ambient, &GradedVector::single((0, 0), Field::Rationals.one()))
            .unwrap();
        assert_eq!(img, ambient.simple(0, 0));
    }
}
