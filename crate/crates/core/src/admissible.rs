//! Operator calculus on matrix spaces and the classification of admissible
//! tuples into canonical families.
//!
//! An admissible tuple packages matrices (A, B[, C, D]) together with a rank-1
//! right-hand side E⊗F such that the associated operator Φ on M(n,ℂ) equals
//! Ψ_{E⊗F}(X) = tr(EX)·F. The classifier recovers which canonical family a
//! given admissible tuple belongs to, with parameters.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    cone, frob, identity, mat_to_rows, rank_one_factor, rows_to_mat, standard_j,
    transpose_permutation, trace_prod, unvectorize, vectorize, CMat, CVec,
};

/// Default tolerance for admissibility residuals and classification.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum AdmissibleError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("tuple is not admissible (residual {residual:.3e})")]
    NotAdmissible { residual: f64 },
    #[error("bad tuple specification: {0}")]
    BadSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TupleKind {
    C,
    R,
    Q,
}

impl std::fmt::Display for TupleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TupleKind::C => write!(f, "C"),
            TupleKind::R => write!(f, "R"),
            TupleKind::Q => write!(f, "Q"),
        }
    }
}

/// An (A, B[, C, D], E⊗F) tuple of one of the three kinds. The right-hand
/// side is `None` for homogeneous tuples (E = F = 0 convention).
#[derive(Debug, Clone)]
pub struct AdmissibleTuple {
    pub kind: TupleKind,
    pub n: usize,
    pub a: CMat,
    pub b: CMat,
    pub c: Option<CMat>,
    pub d: Option<CMat>,
    pub rhs: Option<(CMat, CMat)>,
}

fn check_square(m: &CMat, n: usize, name: &str) -> Result<(), AdmissibleError> {
    if m.nrows() != n || m.ncols() != n {
        return Err(AdmissibleError::DimensionMismatch(format!(
            "{name} is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

impl AdmissibleTuple {
    pub fn new_c(a: CMat, b: CMat, rhs: Option<(CMat, CMat)>) -> Result<Self, AdmissibleError> {
        let n = a.nrows();
        check_square(&a, n, "A")?;
        check_square(&b, n, "B")?;
        if let Some((e, f)) = &rhs {
            check_square(e, n, "E")?;
            check_square(f, n, "F")?;
        }
        Ok(Self { kind: TupleKind::C, n, a, b, c: None, d: None, rhs })
    }

    pub fn new_r(
        a: CMat,
        b: CMat,
        c: CMat,
        d: CMat,
        rhs: Option<(CMat, CMat)>,
    ) -> Result<Self, AdmissibleError> {
        let n = a.nrows();
        check_square(&a, n, "A")?;
        check_square(&b, n, "B")?;
        check_square(&c, n, "C")?;
        check_square(&d, n, "D")?;
        if let Some((e, f)) = &rhs {
            check_square(e, n, "E")?;
            check_square(f, n, "F")?;
        }
        Ok(Self { kind: TupleKind::R, n, a, b, c: Some(c), d: Some(d), rhs })
    }

    pub fn new_q(
        a: CMat,
        b: CMat,
        c: CMat,
        d: CMat,
        rhs: Option<(CMat, CMat)>,
    ) -> Result<Self, AdmissibleError> {
        let n = a.nrows();
        if n % 2 != 0 {
            return Err(AdmissibleError::BadSpec(format!(
                "kind Q requires even order, got n = {n}"
            )));
        }
        let mut t = Self::new_r(a, b, c, d, rhs)?;
        t.kind = TupleKind::Q;
        Ok(t)
    }

    /// Applies the left-hand operator Φ of this tuple to X.
    pub fn apply(&self, x: &CMat) -> CMat {
        match self.kind {
            TupleKind::C => apply_phi_c(&self.a, &self.b, x),
            TupleKind::R => {
                apply_phi_r(&self.a, &self.b, self.c.as_ref().unwrap(), self.d.as_ref().unwrap(), x)
            }
            TupleKind::Q => {
                apply_phi_q(&self.a, &self.b, self.c.as_ref().unwrap(), self.d.as_ref().unwrap(), x)
            }
        }
    }

    /// Applies the right-hand operator Ψ_{E⊗F} to X (zero when homogeneous).
    pub fn apply_rhs(&self, x: &CMat) -> CMat {
        match &self.rhs {
            Some((e, f)) => apply_psi(e, f, x),
            None => CMat::zeros(self.n, self.n),
        }
    }

    /// Operator matrix of Φ in the column-stacking basis.
    pub fn phi_matrix(&self) -> OperatorMatrix {
        let n = self.n;
        operator_matrix_of(n, |x| self.apply(x))
    }

    /// Operator matrix of Ψ_{E⊗F}.
    pub fn psi_matrix(&self) -> OperatorMatrix {
        let n = self.n;
        operator_matrix_of(n, |x| self.apply_rhs(x))
    }

    pub fn is_homogeneous(&self) -> bool {
        match &self.rhs {
            None => true,
            Some((e, f)) => frob(e) * frob(f) <= 1e-14,
        }
    }

    /// Trace-condition defect |tr A − tr B| (+ |tr C − tr D| for kinds R, Q).
    pub fn trace_defect(&self) -> f64 {
        let mut d = (self.a.trace() - self.b.trace()).norm();
        if let (Some(c), Some(dd)) = (&self.c, &self.d) {
            d += (c.trace() - dd.trace()).norm();
        }
        d
    }

    /// Checks the trace conditions and the operator identity Φ = Ψ.
    /// Returns (admissible, residual); the residual is the sum of the trace
    /// defect and the Frobenius distance between the two operator matrices.
    pub fn is_admissible(&self, tol: f64) -> (bool, f64) {
        let mphi = self.phi_matrix();
        let mpsi = self.psi_matrix();
        let resid = self.trace_defect() + frob(&(&mphi.0 - &mpsi.0));
        let scale = 1.0f64.max(frob(&mphi.0)).max(frob(&mpsi.0));
        (resid <= tol * scale, resid)
    }

    /// The adjoint tuple under the bilinear trace pairing: Φ ↦ Φ†, E⊗F ↦ F⊗E.
    pub fn adjoint(&self) -> AdmissibleTuple {
        let rhs = self.rhs.as_ref().map(|(e, f)| (f.clone(), e.clone()));
        match self.kind {
            TupleKind::C => AdmissibleTuple {
                kind: TupleKind::C,
                n: self.n,
                a: self.b.clone(),
                b: self.a.clone(),
                c: None,
                d: None,
                rhs,
            },
            TupleKind::R => AdmissibleTuple {
                kind: TupleKind::R,
                n: self.n,
                a: self.b.clone(),
                b: self.a.clone(),
                c: Some(self.c.as_ref().unwrap().transpose()),
                d: Some(self.d.as_ref().unwrap().transpose()),
                rhs,
            },
            TupleKind::Q => {
                let j = standard_j(self.n);
                let jt = j.transpose();
                AdmissibleTuple {
                    kind: TupleKind::Q,
                    n: self.n,
                    a: self.b.clone(),
                    b: self.a.clone(),
                    c: Some(&j * self.c.as_ref().unwrap().transpose() * &jt),
                    d: Some(&j * self.d.as_ref().unwrap().transpose() * &jt),
                    rhs,
                }
            }
        }
    }

    /// The tensor E⊗F materialized as vec(E)·vec(F)ᵗ, or zero when homogeneous.
    /// This is the scale-invariant datum behind the (E, F) pair.
    pub fn rhs_tensor(&self) -> CMat {
        match &self.rhs {
            Some((e, f)) => vectorize(e) * vectorize(f).transpose(),
            None => CMat::zeros(self.n * self.n, self.n * self.n),
        }
    }
}

/// Φ^c_{A,B}(X) = AX + XB.
pub fn apply_phi_c(a: &CMat, b: &CMat, x: &CMat) -> CMat {
    a * x + x * b
}

/// Φ^r_{A,B,C,D}(X) = AX + XB + (CX + XD)ᵗ.
pub fn apply_phi_r(a: &CMat, b: &CMat, c: &CMat, d: &CMat, x: &CMat) -> CMat {
    a * x + x * b + (c * x + x * d).transpose()
}

/// Φ^q_{A,B,C,D}(X) = AX + XB + J(CX + XD)ᵗJᵗ.
pub fn apply_phi_q(a: &CMat, b: &CMat, c: &CMat, d: &CMat, x: &CMat) -> CMat {
    let n = a.nrows();
    let j = standard_j(n);
    let jt = j.transpose();
    a * x + x * b + &j * (c * x + x * d).transpose() * &jt
}

/// Ψ_{E⊗F}(X) = tr(EX)·F.
pub fn apply_psi(e: &CMat, f: &CMat, x: &CMat) -> CMat {
    f * trace_prod(e, x)
}

/// An n²×n² matrix representing a linear map on M(n,ℂ) in the column-stacking
/// basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix(pub CMat);

impl OperatorMatrix {
    pub fn order(&self) -> usize {
        (self.0.nrows() as f64).sqrt().round() as usize
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        unvectorize(&(&self.0 * vectorize(x)), x.nrows())
    }

    /// The adjoint under the bilinear pairing (X, Y) ↦ tr(XY): M† = T·Mᵗ·T,
    /// where T is the transpose permutation.
    pub fn adjoint(&self) -> OperatorMatrix {
        let t = transpose_permutation(self.order());
        OperatorMatrix(&t * self.0.transpose() * &t)
    }
}

/// Builds the operator matrix of an arbitrary linear map on M(n,ℂ) by acting
/// on elementary matrices.
pub fn operator_matrix_of<F: Fn(&CMat) -> CMat>(n: usize, op: F) -> OperatorMatrix {
    let mut m = CMat::zeros(n * n, n * n);
    for col in 0..n * n {
        let mut x = CMat::zeros(n, n);
        x[(col % n, col / n)] = cone();
        let y = vectorize(&op(&x));
        m.column_mut(col).copy_from(&y);
    }
    OperatorMatrix(m)
}

/// Recovers the rank-1 right-hand side (E, F) from an operator matrix M ≈
/// vec(F)·vec(Eᵗ)ᵗ. Returns None (with the residual) when M is numerically
/// zero; errors are reported through the residual.
pub fn recover_rhs(m: &OperatorMatrix, tol: f64) -> (Option<(CMat, CMat)>, f64) {
    let n = m.order();
    let norm = frob(&m.0);
    if norm <= tol {
        return (None, norm);
    }
    let (col, row, resid) = rank_one_factor(&m.0);
    let f = unvectorize(&col, n);
    let e = unvectorize(&row, n).transpose();
    (canonicalize_rhs(Some((e, f))), resid)
}

/// Canonicalizes an (E, F) pair: ‖E‖_F = ‖F‖_F and E's leading nonzero entry
/// (column-stacking order) has argument zero. Returns None for a zero tensor.
pub fn canonicalize_rhs(rhs: Option<(CMat, CMat)>) -> Option<(CMat, CMat)> {
    let (e, f) = rhs?;
    let (ne, nf) = (frob(&e), frob(&f));
    if ne * nf <= 1e-14 {
        return None;
    }
    let lam = (nf / ne).sqrt();
    let mut e = e * Complex64::new(lam, 0.0);
    let mut f = f / Complex64::new(lam, 0.0);
    let en = frob(&e);
    let lead = e.iter().find(|z| z.norm() > 1e-9 * en).cloned().unwrap_or(cone());
    let phase = lead / lead.norm();
    e /= phase;
    f *= phase;
    Some((e, f))
}

/// Canonicalizes (u, v) for the order-3 family: ‖u‖ = ‖v‖ with u's leading
/// nonzero entry positive real.
pub fn canonicalize_uv(u: &CVec, v: &CVec) -> (CVec, CVec) {
    let (nu, nv) = (u.norm(), v.norm());
    if nu * nv <= 1e-14 {
        return (CVec::zeros(3), CVec::zeros(3));
    }
    let lam = (nv / nu).sqrt();
    let mut u = u * Complex64::new(lam, 0.0);
    let mut v = v / Complex64::new(lam, 0.0);
    let un = u.norm();
    let lead = u.iter().find(|z| z.norm() > 1e-9 * un).cloned().unwrap_or(cone());
    let phase = lead / lead.norm();
    u /= phase;
    v *= phase;
    (u, v)
}

/// τ_{u,v} = uvᵗ − ½⟨u,v⟩I₃ (bilinear pairing ⟨u,v⟩ = Σ uᵢvᵢ).
pub fn tau_uv(u: &CVec, v: &CVec) -> CMat {
    let pairing: Complex64 = u.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
    u * v.transpose() - identity(3) * (pairing * Complex64::new(0.5, 0.0))
}

/// Cross-product matrix: σ_u w = u × w.
pub fn sigma_u(u: &CVec) -> CMat {
    let mut m = CMat::zeros(3, 3);
    m[(0, 1)] = -u[2];
    m[(0, 2)] = u[1];
    m[(1, 0)] = u[2];
    m[(1, 2)] = -u[0];
    m[(2, 0)] = -u[1];
    m[(2, 1)] = u[0];
    m
}

/// Canonical families of admissible tuples.
#[derive(Debug, Clone)]
pub enum FamilyDescriptor {
    Trivial { kind: TupleKind, n: usize },
    C1 { a: Complex64 },
    R1 { a: Complex64, b: Complex64 },
    TrAB { a: CMat, b: CMat },
    TrABDagger { a: CMat, b: CMat },
    TqAB { a: CMat, b: CMat },
    TqABDagger { a: CMat, b: CMat },
    Tuv { u: CVec, v: CVec },
}

impl FamilyDescriptor {
    pub fn family_name(&self) -> &'static str {
        match self {
            FamilyDescriptor::Trivial { .. } => "Trivial",
            FamilyDescriptor::C1 { .. } => "C1",
            FamilyDescriptor::R1 { .. } => "R1",
            FamilyDescriptor::TrAB { .. } => "TrAB",
            FamilyDescriptor::TrABDagger { .. } => "TrABdagger",
            FamilyDescriptor::TqAB { .. } => "TqAB",
            FamilyDescriptor::TqABDagger { .. } => "TqABdagger",
            FamilyDescriptor::Tuv { .. } => "Tuv",
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        match self {
            FamilyDescriptor::Trivial { .. } => true,
            FamilyDescriptor::C1 { a } => a.norm() <= 1e-14,
            FamilyDescriptor::R1 { a, b } => (a + b).norm() <= 1e-12,
            FamilyDescriptor::TrAB { a, b } | FamilyDescriptor::TrABDagger { a, b } => {
                a.trace().norm() <= 1e-12 && frob(&(b - a.transpose())) <= 1e-12
            }
            FamilyDescriptor::TqAB { a, b } | FamilyDescriptor::TqABDagger { a, b } => {
                a.trace().norm() <= 1e-12 && frob(&(a + b)) <= 1e-12
            }
            FamilyDescriptor::Tuv { u, v } => u.norm() * v.norm() <= 1e-14,
        }
    }

    /// The canonical admissible tuple of this family.
    pub fn family_tuple(&self) -> Result<AdmissibleTuple, AdmissibleError> {
        let check_traces = |a: &CMat, b: &CMat| -> Result<(), AdmissibleError> {
            let d = (a.trace() - b.trace()).norm();
            let scale = 1.0f64.max(a.trace().norm()).max(b.trace().norm());
            if d > 1e-8 * scale {
                return Err(AdmissibleError::BadParameters(format!(
                    "tr(A) != tr(B) (defect {d:.3e})"
                )));
            }
            Ok(())
        };
        match self {
            FamilyDescriptor::Trivial { kind, n } => {
                let z = CMat::zeros(*n, *n);
                match kind {
                    TupleKind::C => AdmissibleTuple::new_c(z.clone(), z, None),
                    TupleKind::R => AdmissibleTuple::new_r(z.clone(), z.clone(), z.clone(), z, None),
                    TupleKind::Q => AdmissibleTuple::new_q(z.clone(), z.clone(), z.clone(), z, None),
                }
            }
            FamilyDescriptor::C1 { a } => {
                let m = CMat::from_element(1, 1, *a);
                let rhs = canonicalize_rhs(Some((
                    CMat::from_element(1, 1, *a * 2.0),
                    CMat::from_element(1, 1, cone()),
                )));
                AdmissibleTuple::new_c(m.clone(), m, rhs)
            }
            FamilyDescriptor::R1 { a, b } => {
                let half = Complex64::new(0.5, 0.0);
                let ah = CMat::from_element(1, 1, a * half);
                let bh = CMat::from_element(1, 1, b * half);
                let rhs = canonicalize_rhs(Some((
                    CMat::from_element(1, 1, a + b),
                    CMat::from_element(1, 1, cone()),
                )));
                AdmissibleTuple::new_r(ah.clone(), ah, bh.clone(), bh, rhs)
            }
            FamilyDescriptor::TrAB { a, b } => {
                check_traces(a, b)?;
                let j = standard_j(2);
                let e = -(&j * a + b * &j);
                let rhs = canonicalize_rhs(Some((e, j.clone())));
                AdmissibleTuple::new_r(a.clone(), b.clone(), -a.clone(), -b.clone(), rhs)
            }
            FamilyDescriptor::TrABDagger { a, b } => {
                check_traces(a, b)?;
                let j = standard_j(2);
                let f = -(a * &j + &j * b);
                let rhs = canonicalize_rhs(Some((j.clone(), f)));
                AdmissibleTuple::new_r(
                    a.clone(),
                    b.clone(),
                    -b.transpose(),
                    -a.transpose(),
                    rhs,
                )
            }
            FamilyDescriptor::TqAB { a, b } => {
                check_traces(a, b)?;
                let rhs = canonicalize_rhs(Some((a + b, identity(2))));
                AdmissibleTuple::new_q(a.clone(), b.clone(), a.clone(), b.clone(), rhs)
            }
            FamilyDescriptor::TqABDagger { a, b } => {
                check_traces(a, b)?;
                let j = standard_j(2);
                let jt = j.transpose();
                let rhs = canonicalize_rhs(Some((identity(2), a + b)));
                AdmissibleTuple::new_q(
                    a.clone(),
                    b.clone(),
                    &j * b.transpose() * &jt,
                    &j * a.transpose() * &jt,
                    rhs,
                )
            }
            FamilyDescriptor::Tuv { u, v } => {
                if u.len() != 3 || v.len() != 3 {
                    return Err(AdmissibleError::BadParameters(
                        "Tuv parameters must be vectors in C^3".into(),
                    ));
                }
                let t_uv = tau_uv(u, v);
                let t_vu = tau_uv(v, u);
                let rhs = canonicalize_rhs(Some((sigma_u(u), sigma_u(v))));
                AdmissibleTuple::new_r(t_uv.clone(), t_vu.clone(), -t_uv, -t_vu, rhs)
            }
        }
    }
}

fn is_zeroish(m: &CMat, scale: f64, tol: f64) -> bool {
    frob(m) <= tol * scale.max(1.0)
}

fn tensor_distance(t1: &AdmissibleTuple, t2: &AdmissibleTuple) -> f64 {
    frob(&(t1.rhs_tensor() - t2.rhs_tensor()))
}

/// Distance between two tuples of the same kind/order: matrix parameters plus
/// the right-hand tensors.
fn tuple_distance(t1: &AdmissibleTuple, t2: &AdmissibleTuple) -> f64 {
    let mut d = frob(&(&t1.a - &t2.a)) + frob(&(&t1.b - &t2.b));
    if let (Some(c1), Some(c2)) = (&t1.c, &t2.c) {
        d += frob(&(c1 - c2));
    }
    if let (Some(d1), Some(d2)) = (&t1.d, &t2.d) {
        d += frob(&(d1 - d2));
    }
    d + tensor_distance(t1, t2)
}

fn tuple_scale(t: &AdmissibleTuple) -> f64 {
    let mut s = frob(&t.a) + frob(&t.b);
    if let Some(c) = &t.c {
        s += frob(c);
    }
    if let Some(d) = &t.d {
        s += frob(d);
    }
    s.max(1.0)
}

/// Classifies an admissible tuple into its canonical family, recovering the
/// parameters. Follows the case analysis of the classification theorems:
/// kind C splits on n = 1 vs n ≥ 2; kind R on n = 1 / 2 / 3 / ≥4 with the
/// n = 2 case reduced to kind Q through X ↦ −Φ^q(XJ)J; kind Q branches on
/// whether A − C is scalar.
pub fn classify(t: &AdmissibleTuple, tol: f64) -> Result<FamilyDescriptor, AdmissibleError> {
    let (ok, residual) = t.is_admissible(tol);
    if !ok {
        return Err(AdmissibleError::NotAdmissible { residual });
    }
    let scale = tuple_scale(t);
    let zero = |m: &CMat| is_zeroish(m, scale, tol);

    // Trivial: all operator parameters vanish.
    let all_zero = zero(&t.a)
        && zero(&t.b)
        && t.c.as_ref().map(|c| zero(c)).unwrap_or(true)
        && t.d.as_ref().map(|d| zero(d)).unwrap_or(true);
    if all_zero {
        return Ok(FamilyDescriptor::Trivial { kind: t.kind, n: t.n });
    }

    let verify = |desc: FamilyDescriptor| -> Result<FamilyDescriptor, AdmissibleError> {
        let rebuilt = desc.family_tuple()?;
        let d = tuple_distance(t, &rebuilt);
        if d <= tol * scale * 10.0 {
            Ok(desc)
        } else {
            Err(AdmissibleError::NotAdmissible { residual: d })
        }
    };

    match (t.kind, t.n) {
        (TupleKind::C, 1) => verify(FamilyDescriptor::C1 { a: t.a[(0, 0)] }),
        (TupleKind::R, 1) => verify(FamilyDescriptor::R1 {
            a: t.a[(0, 0)] * 2.0,
            b: t.c.as_ref().unwrap()[(0, 0)] * 2.0,
        }),
        (TupleKind::R, 2) => {
            // Reduce to the quaternionic branch: for a real-type tuple the
            // associated quaternionic tuple has parameters (A, −JBJ, −C, JDJ),
            // so the scalar test on A_q − C_q becomes one on A + C here.
            let ac = &t.a + t.c.as_ref().unwrap();
            if scalar_part_only(&ac, tol) {
                verify(FamilyDescriptor::TrAB { a: t.a.clone(), b: t.b.clone() })
            } else {
                verify(FamilyDescriptor::TrABDagger { a: t.a.clone(), b: t.b.clone() })
            }
        }
        (TupleKind::R, 3) => {
            // A − tr(A)·I must factor as uvᵗ.
            let m = &t.a - identity(3) * t.a.trace();
            let (u0, v0, resid) = rank_one_factor(&m);
            if resid > tol * scale * 10.0 {
                return Err(AdmissibleError::NotAdmissible { residual: resid });
            }
            let (u, v) = canonicalize_uv(&u0, &v0);
            verify(FamilyDescriptor::Tuv { u, v })
        }
        (TupleKind::Q, 2) => {
            let ac = &t.a - t.c.as_ref().unwrap();
            if scalar_part_only(&ac, tol) {
                verify(FamilyDescriptor::TqAB { a: t.a.clone(), b: t.b.clone() })
            } else {
                verify(FamilyDescriptor::TqABDagger { a: t.a.clone(), b: t.b.clone() })
            }
        }
        // Higher orders only admit the trivial tuple, which was handled above.
        _ => Err(AdmissibleError::NotAdmissible { residual }),
    }
}

/// True when M is within tolerance of a scalar matrix (tr(M)/n)·I.
fn scalar_part_only(m: &CMat, tol: f64) -> bool {
    let n = m.nrows();
    let dev = m - identity(n) * (m.trace() / Complex64::new(n as f64, 0.0));
    frob(&dev) <= tol * frob(m).max(1.0)
}

// --- JSON interchange for the CLI ---

#[derive(Debug, Serialize, Deserialize)]
pub struct TupleJson {
    pub kind: String,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<[f64; 2]>>>,
}

impl TupleJson {
    pub fn to_tuple(&self) -> Result<AdmissibleTuple, AdmissibleError> {
        let a = rows_to_mat(&self.a);
        let b = rows_to_mat(&self.b);
        let rhs = match (&self.e, &self.f) {
            (Some(e), Some(f)) => Some((rows_to_mat(e), rows_to_mat(f))),
            (None, None) => None,
            _ => {
                return Err(AdmissibleError::BadSpec(
                    "E and F must be given together or both omitted".into(),
                ))
            }
        };
        let cd = match (&self.c, &self.d) {
            (Some(c), Some(d)) => Some((rows_to_mat(c), rows_to_mat(d))),
            (None, None) => None,
            _ => {
                return Err(AdmissibleError::BadSpec(
                    "C and D must be given together or both omitted".into(),
                ))
            }
        };
        let t = match self.kind.as_str() {
            "C" | "c" => {
                if cd.is_some() {
                    return Err(AdmissibleError::BadSpec("kind C takes no C, D matrices".into()));
                }
                AdmissibleTuple::new_c(a, b, rhs)?
            }
            "R" | "r" => {
                let (c, d) =
                    cd.ok_or_else(|| AdmissibleError::BadSpec("kind R requires C and D".into()))?;
                AdmissibleTuple::new_r(a, b, c, d, rhs)?
            }
            "Q" | "q" => {
                let (c, d) =
                    cd.ok_or_else(|| AdmissibleError::BadSpec("kind Q requires C and D".into()))?;
                AdmissibleTuple::new_q(a, b, c, d, rhs)?
            }
            other => {
                return Err(AdmissibleError::BadSpec(format!(
                    "unknown kind {other:?}, expected C, R, or Q"
                )))
            }
        };
        if t.n != self.n {
            return Err(AdmissibleError::BadSpec(format!(
                "declared order {} does not match matrix size {}",
                self.n, t.n
            )));
        }
        Ok(t)
    }

    pub fn from_tuple(t: &AdmissibleTuple) -> Self {
        TupleJson {
            kind: t.kind.to_string(),
            n: t.n,
            a: mat_to_rows(&t.a),
            b: mat_to_rows(&t.b),
            c: t.c.as_ref().map(mat_to_rows),
            d: t.d.as_ref().map(mat_to_rows),
            e: t.rhs.as_ref().map(|(e, _)| mat_to_rows(e)),
            f: t.rhs.as_ref().map(|(_, f)| mat_to_rows(f)),
        }
    }
}

impl FamilyDescriptor {
    pub fn to_json(&self) -> serde_json::Value {
        let cplx = |z: &Complex64| serde_json::json!([z.re, z.im]);
        let vec_json = |v: &CVec| {
            serde_json::Value::Array(v.iter().map(|z| cplx(z)).collect())
        };
        let mat_json = |m: &CMat| serde_json::to_value(mat_to_rows(m)).unwrap();
        let params = match self {
            FamilyDescriptor::Trivial { kind, n } => {
                serde_json::json!({ "kind": kind.to_string(), "n": n })
            }
            FamilyDescriptor::C1 { a } => serde_json::json!({ "a": cplx(a) }),
            FamilyDescriptor::R1 { a, b } => serde_json::json!({ "a": cplx(a), "b": cplx(b) }),
            FamilyDescriptor::TrAB { a, b }
            | FamilyDescriptor::TrABDagger { a, b }
            | FamilyDescriptor::TqAB { a, b }
            | FamilyDescriptor::TqABDagger { a, b } => {
                serde_json::json!({ "A": mat_json(a), "B": mat_json(b) })
            }
            FamilyDescriptor::Tuv { u, v } => {
                serde_json::json!({ "u": vec_json(u), "v": vec_json(v) })
            }
        };
        serde_json::json!({
            "family": self.family_name(),
            "parameters": params,
            "homogeneous": self.is_homogeneous(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_complex_matrix, random_complex_vector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ci(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_traceless_pair(rng: &mut ChaCha8Rng, n: usize) -> (CMat, CMat) {
        let a = random_complex_matrix(rng, n, n);
        let mut b = random_complex_matrix(rng, n, n);
        // match traces
        let shift = (a.trace() - b.trace()) / Complex64::new(n as f64, 0.0);
        for i in 0..n {
            b[(i, i)] += shift;
        }
        (a, b)
    }

    #[test]
    fn phi_q_identity_case_gives_trace_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let i2 = identity(2);
        for _ in 0..20 {
            let x = random_complex_matrix(&mut rng, 2, 2);
            let lhs = apply_phi_q(&i2, &i2, &i2, &i2, &x);
            let rhs = identity(2) * (x.trace() * 2.0);
            assert!(frob(&(lhs - rhs)) < 1e-12);
        }
    }

    #[test]
    fn identity_q_tuple_is_admissible() {
        let i2 = identity(2);
        let t = AdmissibleTuple::new_q(
            i2.clone(),
            i2.clone(),
            i2.clone(),
            i2.clone(),
            Some((i2.clone() * ci(2.0, 0.0), i2.clone())),
        )
        .unwrap();
        let (ok, resid) = t.is_admissible(DEFAULT_TOL);
        assert!(ok, "residual {resid}");
    }

    #[test]
    fn trace_mismatch_is_rejected() {
        let t = AdmissibleTuple::new_c(identity(1), CMat::zeros(1, 1), None).unwrap();
        let (ok, _) = t.is_admissible(DEFAULT_TOL);
        assert!(!ok);
    }

    #[test]
    fn random_r_tuple_at_n4_is_not_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (a, b) = random_traceless_pair(&mut rng, 4);
        let (c, d) = random_traceless_pair(&mut rng, 4);
        let t = AdmissibleTuple::new_r(a, b, c, d, None).unwrap();
        let (ok, _) = t.is_admissible(DEFAULT_TOL);
        assert!(!ok);
    }

    #[test]
    fn operator_matrix_agrees_with_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b) = random_traceless_pair(&mut rng, 3);
        let (c, d) = random_traceless_pair(&mut rng, 3);
        let t = AdmissibleTuple::new_r(a, b, c, d, None).unwrap();
        let m = t.phi_matrix();
        for _ in 0..50 {
            let x = random_complex_matrix(&mut rng, 3, 3);
            assert!(frob(&(m.apply(&x) - t.apply(&x))) < 1e-12);
        }
    }

    #[test]
    fn adjoint_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let n = 2;
            let a = random_complex_matrix(&mut rng, n, n);
            let b = random_complex_matrix(&mut rng, n, n);
            let c = random_complex_matrix(&mut rng, n, n);
            let d = random_complex_matrix(&mut rng, n, n);
            let j = standard_j(n);
            let jt = j.transpose();

            // complex kind
            let m = operator_matrix_of(n, |x| apply_phi_c(&a, &b, x));
            let expect = operator_matrix_of(n, |x| apply_phi_c(&b, &a, x));
            assert!(frob(&(m.adjoint().0 - expect.0)) < 1e-10);

            // real kind
            let m = operator_matrix_of(n, |x| apply_phi_r(&a, &b, &c, &d, x));
            let expect = operator_matrix_of(n, |x| {
                apply_phi_r(&b, &a, &c.transpose(), &d.transpose(), x)
            });
            assert!(frob(&(m.adjoint().0 - expect.0)) < 1e-10);

            // quaternionic kind
            let m = operator_matrix_of(n, |x| apply_phi_q(&a, &b, &c, &d, x));
            let cq = &j * c.transpose() * &jt;
            let dq = &j * d.transpose() * &jt;
            let expect = operator_matrix_of(n, |x| apply_phi_q(&b, &a, &cq, &dq, x));
            assert!(frob(&(m.adjoint().0 - expect.0)) < 1e-10);

            // rank-1 right-hand side
            let m = operator_matrix_of(n, |x| apply_psi(&a, &b, x));
            let expect = operator_matrix_of(n, |x| apply_psi(&b, &a, x));
            assert!(frob(&(m.adjoint().0 - expect.0)) < 1e-10);
        }
    }

    #[test]
    fn r_to_q_transfer_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let j = standard_j(2);
        for _ in 0..50 {
            let a = random_complex_matrix(&mut rng, 2, 2);
            let b = random_complex_matrix(&mut rng, 2, 2);
            let c = random_complex_matrix(&mut rng, 2, 2);
            let d = random_complex_matrix(&mut rng, 2, 2);
            let x = random_complex_matrix(&mut rng, 2, 2);
            let lhs = apply_phi_r(&a, &b, &c, &d, &x);
            let bq = -(&j * &b * &j);
            let dq = &j * &d * &j;
            let rhs = -(apply_phi_q(&a, &bq, &(-&c), &dq, &(&x * &j)) * &j);
            assert!(frob(&(lhs - rhs)) < 1e-12);
        }
    }

    #[test]
    fn family_tuples_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (a, b) = random_traceless_pair(&mut rng, 2);
        let u = random_complex_vector(&mut rng, 3);
        let v = random_complex_vector(&mut rng, 3);
        let descs: Vec<FamilyDescriptor> = vec![
            FamilyDescriptor::Trivial { kind: TupleKind::R, n: 5 },
            FamilyDescriptor::C1 { a: ci(1.5, -0.5) },
            FamilyDescriptor::R1 { a: ci(2.0, 1.0), b: ci(-1.0, 0.5) },
            FamilyDescriptor::TrAB { a: a.clone(), b: b.clone() },
            FamilyDescriptor::TrABDagger { a: a.clone(), b: b.clone() },
            FamilyDescriptor::TqAB { a: a.clone(), b: b.clone() },
            FamilyDescriptor::TqABDagger { a: a.clone(), b: b.clone() },
            FamilyDescriptor::Tuv { u, v },
        ];
        for d in &descs {
            let t = d.family_tuple().unwrap();
            let (ok, resid) = t.is_admissible(DEFAULT_TOL);
            assert!(ok, "{} residual {resid}", d.family_name());
        }
    }

    #[test]
    fn tq_identity_example() {
        let i2 = identity(2);
        let d = FamilyDescriptor::TqAB { a: i2.clone(), b: i2.clone() };
        let t = d.family_tuple().unwrap();
        assert!(frob(&(&t.a - &i2)) < 1e-15);
        assert!(frob(&(t.c.as_ref().unwrap() - &i2)) < 1e-15);
        // rhs tensor equals (2I)⊗I regardless of pair scaling
        let want = vectorize(&(identity(2) * ci(2.0, 0.0))) * vectorize(&i2).transpose();
        assert!(frob(&(t.rhs_tensor() - want)) < 1e-12);
    }

    #[test]
    fn tuv_elementary_example() {
        let mut u = CVec::zeros(3);
        u[0] = cone();
        let mut v = CVec::zeros(3);
        v[1] = cone();
        let d = FamilyDescriptor::Tuv { u: u.clone(), v: v.clone() };
        let t = d.family_tuple().unwrap();
        // <e1, e2> = 0, so A = e1 e2^t
        let mut e12 = CMat::zeros(3, 3);
        e12[(0, 1)] = cone();
        assert!(frob(&(&t.a - &e12)) < 1e-14);
        let want = vectorize(&sigma_u(&u)) * vectorize(&sigma_u(&v)).transpose();
        assert!(frob(&(t.rhs_tensor() - want)) < 1e-12);
        let (ok, _) = t.is_admissible(DEFAULT_TOL);
        assert!(ok);
    }

    #[test]
    fn r1_homogeneous_flag() {
        let d = FamilyDescriptor::R1 { a: ci(3.0, -1.0), b: ci(-3.0, 1.0) };
        assert!(d.is_homogeneous());
        let t = d.family_tuple().unwrap();
        assert!(t.is_homogeneous());
    }

    #[test]
    fn classify_zero_tuple_is_trivial() {
        let z = CMat::zeros(4, 4);
        let t = AdmissibleTuple::new_q(z.clone(), z.clone(), z.clone(), z, None).unwrap();
        let d = classify(&t, DEFAULT_TOL).unwrap();
        assert_eq!(d.family_name(), "Trivial");
    }

    #[test]
    fn classify_roundtrips_on_random_descriptors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..1000 {
            let (a, b) = random_traceless_pair(&mut rng, 2);
            let u = random_complex_vector(&mut rng, 3);
            let v = random_complex_vector(&mut rng, 3);
            let descs: Vec<FamilyDescriptor> = vec![
                FamilyDescriptor::C1 { a: ci(rng_f(&mut rng), rng_f(&mut rng)) },
                FamilyDescriptor::R1 {
                    a: ci(rng_f(&mut rng), rng_f(&mut rng)),
                    b: ci(rng_f(&mut rng), rng_f(&mut rng)),
                },
                FamilyDescriptor::TrAB { a: a.clone(), b: b.clone() },
                FamilyDescriptor::TrABDagger { a: a.clone(), b: b.clone() },
                FamilyDescriptor::TqAB { a: a.clone(), b: b.clone() },
                FamilyDescriptor::TqABDagger { a: a.clone(), b: b.clone() },
                FamilyDescriptor::Tuv { u: u.clone(), v: v.clone() },
            ];
            for d in &descs {
                let t = d.family_tuple().unwrap();
                let got = classify(&t, DEFAULT_TOL)
                    .unwrap_or_else(|e| panic!("trial {trial} {}: {e}", d.family_name()));
                // Dagger overlap (B = A^t for R, B = tr(A)I − A for Q) is
                // possible but has probability zero for random parameters.
                assert_eq!(got.family_name(), d.family_name(), "trial {trial}");
                let rebuilt = got.family_tuple().unwrap();
                assert!(
                    tuple_distance(&t, &rebuilt) < 1e-8 * tuple_scale(&t),
                    "trial {trial} {}",
                    d.family_name()
                );
            }
        }
    }

    fn rng_f(rng: &mut ChaCha8Rng) -> f64 {
        use rand::Rng;
        rng.random::<f64>() * 2.0 - 1.0
    }

    #[test]
    fn dagger_overlap_reports_plain_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // R overlap: B = A^t
        let a = random_complex_matrix(&mut rng, 2, 2);
        let b = a.transpose();
        let t1 = FamilyDescriptor::TrAB { a: a.clone(), b: b.clone() }.family_tuple().unwrap();
        let t2 = FamilyDescriptor::TrABDagger { a: a.clone(), b: b.clone() }
            .family_tuple()
            .unwrap();
        assert!(tuple_distance(&t1, &t2) < 1e-10 * tuple_scale(&t1));
        assert_eq!(classify(&t1, DEFAULT_TOL).unwrap().family_name(), "TrAB");

        // Q overlap: B = tr(A)I − A
        let a = random_complex_matrix(&mut rng, 2, 2);
        let b = identity(2) * a.trace() - &a;
        let t1 = FamilyDescriptor::TqAB { a: a.clone(), b: b.clone() }.family_tuple().unwrap();
        let t2 = FamilyDescriptor::TqABDagger { a, b }.family_tuple().unwrap();
        assert!(tuple_distance(&t1, &t2) < 1e-10 * tuple_scale(&t1));
        assert_eq!(classify(&t1, DEFAULT_TOL).unwrap().family_name(), "TqAB");
    }

    #[test]
    fn rank_one_recovery_from_operator_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (a, b) = random_traceless_pair(&mut rng, 2);
        let t = FamilyDescriptor::TrAB { a, b }.family_tuple().unwrap();
        let m = t.phi_matrix();
        // admissible => operator matrix has rank <= 1
        let gram = &m.0 * m.0.adjoint();
        let eig = nalgebra::SymmetricEigen::new((&gram + gram.adjoint()) * ci(0.5, 0.0));
        let smax = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max).sqrt();
        let big = eig
            .eigenvalues
            .iter()
            .filter(|&&s| s.max(0.0).sqrt() > 1e-10 * smax.max(1.0))
            .count();
        assert!(big <= 1);
        let (rhs, resid) = recover_rhs(&m, 1e-12);
        assert!(resid < 1e-10);
        let (e, f) = rhs.unwrap();
        let got = vectorize(&e) * vectorize(&f).transpose();
        assert!(frob(&(got - t.rhs_tensor())) < 1e-10);
    }

    #[test]
    fn tuple_json_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let (a, b) = random_traceless_pair(&mut rng, 2);
        let t = FamilyDescriptor::TqAB { a, b }.family_tuple().unwrap();
        let js = serde_json::to_string(&TupleJson::from_tuple(&t)).unwrap();
        let back: TupleJson = serde_json::from_str(&js).unwrap();
        let t2 = back.to_tuple().unwrap();
        assert!(tuple_distance(&t, &t2) < 1e-12);
    }
}
