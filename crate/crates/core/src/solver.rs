//! Solution spaces of f1(xy) + f2(yx) + f3(xy⁻¹) + f4(y⁻¹x) = f5(x)f6(y)
//! on a finite group: pure solutions from admissible tuples, the homogeneous
//! solution space (structured and brute-force), and the decomposition of an
//! arbitrary solution into pure + central + normalized homogeneous parts.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::admissible::{AdmissibleTuple, TupleKind};
use crate::fourier::{
    central_part, transform, truncate_to_class, FourierError, GroupFunction,
};
use crate::group::FiniteGroup;
use crate::linalg::{czero, nullspace, trace_prod, CMat, CVec};
use crate::repr::{IrrepType, ReprError, UnitaryDual, UnitaryIrrep};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const BRUTE_FORCE_CAP: usize = 200;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("input is not a solution (residual {0:.3e})")]
    NotASolution(f64),
    #[error("group order {0} exceeds the brute-force cap of {1}")]
    TooLarge(usize, usize),
    #[error("tuple kind {kind} does not match irrep type {ty:?}")]
    TypeMismatch { kind: TupleKind, ty: IrrepType },
    #[error("tuple order {tuple} does not match irrep dimension {dim}")]
    OrderMismatch { tuple: usize, dim: usize },
    #[error("{0}")]
    BadInput(String),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Repr(#[from] ReprError),
}

/// Right-hand side of a solution: zero (homogeneous) or the pair (f5, f6).
#[derive(Debug, Clone)]
pub enum Rhs {
    Zero,
    Pair(GroupFunction, GroupFunction),
}

/// A 5-tuple of functions (f1, f2, f3, f4, f5⊗f6) on a finite group.
#[derive(Debug, Clone)]
pub struct SolutionTuple {
    pub f1: GroupFunction,
    pub f2: GroupFunction,
    pub f3: GroupFunction,
    pub f4: GroupFunction,
    pub rhs: Rhs,
}

impl SolutionTuple {
    pub fn zeros(n: usize) -> Self {
        SolutionTuple {
            f1: GroupFunction::zeros(n),
            f2: GroupFunction::zeros(n),
            f3: GroupFunction::zeros(n),
            f4: GroupFunction::zeros(n),
            rhs: Rhs::Zero,
        }
    }

    pub fn order(&self) -> usize {
        self.f1.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        match &self.rhs {
            Rhs::Zero => true,
            Rhs::Pair(f5, f6) => f5.norm() * f6.norm() <= 1e-14,
        }
    }

    /// Adds a homogeneous tuple, keeping this tuple's right-hand side.
    pub fn add_homogeneous(&self, h: &SolutionTuple) -> SolutionTuple {
        debug_assert!(matches!(h.rhs, Rhs::Zero));
        SolutionTuple {
            f1: self.f1.add(&h.f1),
            f2: self.f2.add(&h.f2),
            f3: self.f3.add(&h.f3),
            f4: self.f4.add(&h.f4),
            rhs: self.rhs.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> SolutionTuple {
        let rhs = match &self.rhs {
            Rhs::Zero => Rhs::Zero,
            // scale the tensor through its first leg
            Rhs::Pair(f5, f6) => Rhs::Pair(f5.scale(c), f6.clone()),
        };
        SolutionTuple {
            f1: self.f1.scale(c),
            f2: self.f2.scale(c),
            f3: self.f3.scale(c),
            f4: self.f4.scale(c),
            rhs,
        }
    }

    /// The rank-1 tensor f5⊗f6 as a |G|×|G| matrix (zero when homogeneous).
    pub fn rhs_tensor(&self) -> CMat {
        let n = self.order();
        match &self.rhs {
            Rhs::Zero => CMat::zeros(n, n),
            Rhs::Pair(f5, f6) => CMat::from_fn(n, n, |x, y| f5.values[x] * f6.values[y]),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        let f = |g: &GroupFunction| g.values.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let mut s = f(&self.f1).max(f(&self.f2)).max(f(&self.f3)).max(f(&self.f4));
        if let Rhs::Pair(f5, f6) = &self.rhs {
            s = s.max(f(f5) * f(f6));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arr = |f: &GroupFunction| {
            serde_json::Value::Array(
                f.values.iter().map(|z| serde_json::json!([z.re, z.im])).collect(),
            )
        };
        let rhs = match &self.rhs {
            Rhs::Zero => serde_json::Value::Null,
            Rhs::Pair(f5, f6) => serde_json::json!({ "f5": arr(f5), "f6": arr(f6) }),
        };
        serde_json::json!({
            "f1": arr(&self.f1), "f2": arr(&self.f2),
            "f3": arr(&self.f3), "f4": arr(&self.f4),
            "rhs": rhs,
        })
    }
}

/// Maximum over all (x, y) ∈ G² of |f1(xy)+f2(yx)+f3(xy⁻¹)+f4(y⁻¹x)−f5(x)f6(y)|.
pub fn residual(s: &SolutionTuple, g: &FiniteGroup) -> f64 {
    let n = g.order();
    assert_eq!(s.order(), n, "solution does not live on this group");
    let mut worst = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            let yinv = g.inv(y);
            let lhs = s.f1.values[g.mul(x, y)]
                + s.f2.values[g.mul(y, x)]
                + s.f3.values[g.mul(x, yinv)]
                + s.f4.values[g.mul(yinv, x)];
            let rhs = match &s.rhs {
                Rhs::Zero => czero(),
                Rhs::Pair(f5, f6) => f5.values[x] * f6.values[y],
            };
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Builds the pure solution ℱ_𝒯 ∘ π = (tr(A π·), …, tr(E π·)⊗tr(F π·)) from a
/// real- or quaternionic-kind tuple and a matching realized irrep.
pub fn build_pure(
    t: &AdmissibleTuple,
    pi: &UnitaryIrrep,
) -> Result<SolutionTuple, SolverError> {
    let want = match t.kind {
        TupleKind::R => IrrepType::Real,
        TupleKind::Q => IrrepType::Quaternionic,
        TupleKind::C => {
            return Err(SolverError::BadInput(
                "complex-kind tuples build through the character pair (see build_pure_u1)"
                    .into(),
            ))
        }
    };
    if pi.ty != want {
        return Err(SolverError::TypeMismatch { kind: t.kind, ty: pi.ty });
    }
    if t.n != pi.dim {
        return Err(SolverError::OrderMismatch { tuple: t.n, dim: pi.dim });
    }
    let rhs = match &t.rhs {
        None => Rhs::Zero,
        Some((e, f)) => Rhs::Pair(
            GroupFunction::trace_form(e, &pi.matrices),
            GroupFunction::trace_form(f, &pi.matrices),
        ),
    };
    Ok(SolutionTuple {
        f1: GroupFunction::trace_form(&t.a, &pi.matrices),
        f2: GroupFunction::trace_form(&t.b, &pi.matrices),
        f3: GroupFunction::trace_form(t.c.as_ref().unwrap(), &pi.matrices),
        f4: GroupFunction::trace_form(t.d.as_ref().unwrap(), &pi.matrices),
        rhs,
    })
}

/// The two-character combination on a 1-dimensional dual class:
/// f1 = f2 = (ε₁δ₁φ + ε₂δ₂φ̄)/2, f3 = f4 = (ε₁δ₂φ + ε₂δ₁φ̄)/2,
/// f5 = ε₁φ + ε₂φ̄, f6 = δ₁φ + δ₂φ̄.
pub fn build_pure_u1(
    eps1: Complex64,
    del1: Complex64,
    eps2: Complex64,
    del2: Complex64,
    class_idx: usize,
    g: &FiniteGroup,
    dual: &UnitaryDual,
) -> Result<SolutionTuple, SolverError> {
    let members = &dual.pairing[class_idx];
    if dual.irreps[members[0]].dim != 1 {
        return Err(SolverError::BadInput(format!(
            "dual class {class_idx} is not 1-dimensional"
        )));
    }
    let phi: Vec<Complex64> = dual.irreps[members[0]].character();
    let phibar: Vec<Complex64> = phi.iter().map(|z| z.conj()).collect();
    let n = g.order();
    let half = Complex64::new(0.5, 0.0);
    let build = |c1: Complex64, c2: Complex64, s: Complex64| -> GroupFunction {
        GroupFunction {
            values: (0..n).map(|x| (c1 * phi[x] + c2 * phibar[x]) * s).collect(),
        }
    };
    let one = Complex64::new(1.0, 0.0);
    let f12 = build(eps1 * del1, eps2 * del2, half);
    let f34 = build(eps1 * del2, eps2 * del1, half);
    let f5 = build(eps1, eps2, one);
    let f6 = build(del1, del2, one);
    let rhs = if f5.norm() * f6.norm() <= 1e-14 {
        Rhs::Zero
    } else {
        Rhs::Pair(f5, f6)
    };
    Ok(SolutionTuple { f1: f12.clone(), f2: f12, f3: f34.clone(), f4: f34, rhs })
}

/// Target groups of the pure-solution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyTarget {
    U1,
    O2,
    SU2,
    O3,
}

impl std::fmt::Display for FamilyTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyTarget::U1 => write!(f, "U(1)"),
            FamilyTarget::O2 => write!(f, "O(2)"),
            FamilyTarget::SU2 => write!(f, "SU(2)"),
            FamilyTarget::O3 => write!(f, "O(3)"),
        }
    }
}

/// One family of pure normalized solutions attached to a dual class.
#[derive(Debug, Clone)]
pub struct PureFamily {
    /// Index into `dual.pairing`.
    pub class: usize,
    pub target: FamilyTarget,
    /// Irrep indices within the class.
    pub members: Vec<usize>,
    /// Description of the parameter shape.
    pub parameters: &'static str,
}

/// Per dual class, the pure normalized solution families: 1-dimensional
/// classes → U(1) (4 scalars, real characters absorbed); real 2-dim → O(2)
/// (matrix pair ± dagger); quaternionic 2-dim → SU(2) (matrix pair ± dagger);
/// real 3-dim → O(3) (vector pair). All other classes carry none.
pub fn pure_families(dual: &UnitaryDual) -> Vec<PureFamily> {
    let mut out = Vec::new();
    for (ci, members) in dual.pairing.iter().enumerate() {
        let pi = &dual.irreps[members[0]];
        let fam = match (pi.dim, pi.ty) {
            (1, _) => Some((FamilyTarget::U1, "four scalars (eps1, del1, eps2, del2)")),
            (2, IrrepType::Real) => {
                Some((FamilyTarget::O2, "2x2 pair (A, B), tr A = tr B, plus dagger"))
            }
            (2, IrrepType::Quaternionic) => {
                Some((FamilyTarget::SU2, "2x2 pair (A, B), tr A = tr B, plus dagger"))
            }
            (3, IrrepType::Real) => Some((FamilyTarget::O3, "vector pair (u, v) in C^3")),
            _ => None,
        };
        if let Some((target, parameters)) = fam {
            out.push(PureFamily { class: ci, target, members: members.clone(), parameters });
        }
    }
    out
}

fn traceless_basis_2x2() -> Vec<CMat> {
    let c = |re: f64| Complex64::new(re, 0.0);
    vec![
        CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
        CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]),
        CMat::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)]),
    ]
}

/// A spanning set for the homogeneous solution space: central tuples
/// (c, −c, 0, 0) and (0, 0, c, −c) from class indicators, one tuple per real
/// 1-dim irrep, and three per real or quaternionic 2-dim irrep.
pub fn homogeneous_basis_structured(
    g: &FiniteGroup,
    dual: &UnitaryDual,
) -> Vec<SolutionTuple> {
    let n = g.order();
    let mut out = Vec::new();
    // central families F_{c1,c2} = (c1, -c1, c2, -c2), c ranging over class
    // indicator functions
    for class in g.classes() {
        let mut ind = GroupFunction::zeros(n);
        for &x in class {
            ind.values[x] = Complex64::new(1.0, 0.0);
        }
        let z = GroupFunction::zeros(n);
        out.push(SolutionTuple {
            f1: ind.clone(),
            f2: ind.scale(Complex64::new(-1.0, 0.0)),
            f3: z.clone(),
            f4: z.clone(),
            rhs: Rhs::Zero,
        });
        out.push(SolutionTuple {
            f1: z.clone(),
            f2: z.clone(),
            f3: ind.clone(),
            f4: ind.scale(Complex64::new(-1.0, 0.0)),
            rhs: Rhs::Zero,
        });
    }
    for pi in &dual.irreps {
        match (pi.dim, pi.ty) {
            // F_a^{O(1)} ∘ π: f1 = f2 = −f3 = −f4 = π
            (1, IrrepType::Real) => {
                let chi = GroupFunction { values: pi.character() };
                let neg = chi.scale(Complex64::new(-1.0, 0.0));
                out.push(SolutionTuple {
                    f1: chi.clone(),
                    f2: chi,
                    f3: neg.clone(),
                    f4: neg,
                    rhs: Rhs::Zero,
                });
            }
            // F_A^{O(2)} ∘ π: f1(x) = f2(x⁻¹) = −f3(x) = −f4(x⁻¹) = tr(Aπ(x))
            (2, IrrepType::Real) => {
                for a in traceless_basis_2x2() {
                    let f1 = GroupFunction::trace_form(&a, &pi.matrices);
                    let f2 = GroupFunction {
                        values: (0..n).map(|x| f1.values[g.inv(x)]).collect(),
                    };
                    out.push(SolutionTuple {
                        f3: f1.scale(Complex64::new(-1.0, 0.0)),
                        f4: f2.scale(Complex64::new(-1.0, 0.0)),
                        f1,
                        f2,
                        rhs: Rhs::Zero,
                    });
                }
            }
            // F_A^{SU(2)} ∘ π: f1 = −f2 = f3 = −f4 = tr(Aπ(x))
            (2, IrrepType::Quaternionic) => {
                for a in traceless_basis_2x2() {
                    let f1 = GroupFunction::trace_form(&a, &pi.matrices);
                    let neg = f1.scale(Complex64::new(-1.0, 0.0));
                    out.push(SolutionTuple {
                        f2: neg.clone(),
                        f3: f1.clone(),
                        f4: neg,
                        f1,
                        rhs: Rhs::Zero,
                    });
                }
            }
            _ => {}
        }
    }
    out
}

/// The predicted dimension of the homogeneous solution space:
/// 2·#classes + #(real 1-dim) + 3·#(real 2-dim) + 3·#(quaternionic 2-dim).
pub fn homogeneous_dimension_predicted(g: &FiniteGroup, dual: &UnitaryDual) -> usize {
    let mut d = 2 * g.classes().len();
    for pi in &dual.irreps {
        match (pi.dim, pi.ty) {
            (1, IrrepType::Real) => d += 1,
            (2, IrrepType::Real) | (2, IrrepType::Quaternionic) => d += 3,
            _ => {}
        }
    }
    d
}

/// Flattens a homogeneous 4-tuple into a 4|G| coefficient vector.
pub fn tuple_to_vector(s: &SolutionTuple) -> CVec {
    let n = s.order();
    CVec::from_iterator(
        4 * n,
        s.f1.values
            .iter()
            .chain(&s.f2.values)
            .chain(&s.f3.values)
            .chain(&s.f4.values)
            .cloned(),
    )
}

pub fn vector_to_tuple(v: &CVec) -> SolutionTuple {
    let n = v.len() / 4;
    let part = |k: usize| GroupFunction {
        values: (0..n).map(|i| v[k * n + i]).collect(),
    };
    SolutionTuple { f1: part(0), f2: part(1), f3: part(2), f4: part(3), rhs: Rhs::Zero }
}

/// Orthonormal basis of the homogeneous solution space, computed as the
/// nullspace of the |G|² × 4|G| linear system over all pairs (x, y).
pub fn homogeneous_basis_bruteforce(g: &FiniteGroup) -> Result<Vec<CVec>, SolverError> {
    let n = g.order();
    if n > BRUTE_FORCE_CAP {
        return Err(SolverError::TooLarge(n, BRUTE_FORCE_CAP));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut m = CMat::zeros(n * n, 4 * n);
    for x in 0..n {
        for y in 0..n {
            let row = x * n + y;
            let yinv = g.inv(y);
            m[(row, g.mul(x, y))] += one;
            m[(row, n + g.mul(y, x))] += one;
            m[(row, 2 * n + g.mul(x, yinv))] += one;
            m[(row, 3 * n + g.mul(yinv, x))] += one;
        }
    }
    // the gram-based nullspace resolves singular values only down to about
    // sqrt(eps)·sigma_max, so the cutoff cannot be tighter than ~1e-7
    Ok(nullspace(&m, 1e-7))
}

/// Residual of the per-irrep matrix identities: the maximum over irreps π,
/// elementary matrices X, and y ∈ G of
/// |tr[(f̂1X + Xf̂2)π(y) + (f̂3X + Xf̂4)ᵗπ̄(y)] − tr(f̂5X)·f6(y)|.
pub fn matrixeq_residual(
    s: &SolutionTuple,
    g: &FiniteGroup,
    dual: &UnitaryDual,
) -> Result<f64, SolverError> {
    let c1 = transform(&s.f1, g, dual)?;
    let c2 = transform(&s.f2, g, dual)?;
    let c3 = transform(&s.f3, g, dual)?;
    let c4 = transform(&s.f4, g, dual)?;
    let (c5, f6) = match &s.rhs {
        Rhs::Zero => (None, None),
        Rhs::Pair(f5, f6) => (Some(transform(f5, g, dual)?), Some(f6)),
    };
    let mut worst = 0.0f64;
    for (pi_idx, pi) in dual.irreps.iter().enumerate() {
        let d = pi.dim;
        for i in 0..d {
            for j in 0..d {
                let mut x = CMat::zeros(d, d);
                x[(i, j)] = Complex64::new(1.0, 0.0);
                let left = &c1.coeffs[pi_idx] * &x + &x * &c2.coeffs[pi_idx];
                let right = (&c3.coeffs[pi_idx] * &x + &x * &c4.coeffs[pi_idx]).transpose();
                let t5 = c5
                    .as_ref()
                    .map(|c| trace_prod(&c.coeffs[pi_idx], &x))
                    .unwrap_or_else(czero);
                for y in g.elements() {
                    let piy = &pi.matrices[y];
                    let piy_bar = piy.map(|z| z.conj());
                    let lhs = trace_prod(&left, piy) + trace_prod(&right, &piy_bar);
                    let rhs = match f6 {
                        Some(f6) => t5 * f6.values[y],
                        None => czero(),
                    };
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// A solution split into its canonical parts: pure normalized (supported on
/// one dual class), per-class normalized homogeneous components, and the
/// central family (c1, −c1, c2, −c2).
#[derive(Debug, Clone)]
pub struct SolutionDecomposition {
    pub pure: SolutionTuple,
    /// (dual class index, pure normalized homogeneous component)
    pub homog_normalized: Vec<(usize, SolutionTuple)>,
    pub central: (GroupFunction, GroupFunction),
}

impl SolutionDecomposition {
    pub fn reassemble(&self) -> SolutionTuple {
        let n = self.pure.order();
        let neg = Complex64::new(-1.0, 0.0);
        let mut out = self.pure.clone();
        for (_, h) in &self.homog_normalized {
            out = out.add_homogeneous(h);
        }
        let central = SolutionTuple {
            f1: self.central.0.clone(),
            f2: self.central.0.scale(neg),
            f3: self.central.1.clone(),
            f4: self.central.1.scale(neg),
            rhs: Rhs::Zero,
        };
        debug_assert_eq!(central.order(), n);
        out.add_homogeneous(&central)
    }
}

/// Decomposes a solution per the structure theorem: subtract the central
/// family read off from (f1−f2)/2 and (f3−f4)/2, truncate the remainder to
/// the dual class ϖ₀ carrying supp f̂5 ∪ supp f̂6 (the pure normalized part),
/// and split the homogeneous rest per dual class. For a homogeneous input the
/// pure part is zero.
pub fn decompose(
    s: &SolutionTuple,
    g: &FiniteGroup,
    dual: &UnitaryDual,
    tol: f64,
) -> Result<SolutionDecomposition, SolverError> {
    let scale = 1.0f64.max(s.sup_norm());
    let resid = residual(s, g);
    if resid > tol * scale * 10.0 {
        return Err(SolverError::NotASolution(resid));
    }
    let n = g.order();
    let half = Complex64::new(0.5, 0.0);
    let c1 = central_part(&s.f1.sub(&s.f2).scale(half), g, dual)?;
    let c2 = central_part(&s.f3.sub(&s.f4).scale(half), g, dual)?;
    // normalized remainder
    let r1 = s.f1.sub(&c1);
    let r2 = s.f2.add(&c1);
    let r3 = s.f3.sub(&c2);
    let r4 = s.f4.add(&c2);

    // locate the dual class carrying the right-hand side
    let pure_class = match &s.rhs {
        Rhs::Zero => None,
        Rhs::Pair(f5, f6) => {
            if f5.norm() * f6.norm() <= 1e-12 * scale {
                None
            } else {
                let s5 = transform(f5, g, dual)?.support(f5.norm());
                let s6 = transform(f6, g, dual)?.support(f6.norm());
                let mut classes: Vec<usize> =
                    s5.iter().chain(&s6).map(|&i| dual.class_of(i)).collect();
                classes.sort_unstable();
                classes.dedup();
                match classes.len() {
                    0 => None,
                    1 => Some(classes[0]),
                    _ => {
                        return Err(SolverError::BadInput(format!(
                            "right-hand side is supported on {} dual classes; \
                             a solution concentrates it on one",
                            classes.len()
                        )))
                    }
                }
            }
        }
    };

    let (pure, h1, h2, h3, h4) = match pure_class {
        None => (
            SolutionTuple::zeros(n),
            r1.clone(),
            r2.clone(),
            r3.clone(),
            r4.clone(),
        ),
        Some(ci) => {
            let p1 = truncate_to_class(&r1, g, dual, ci)?;
            let p2 = truncate_to_class(&r2, g, dual, ci)?;
            let p3 = truncate_to_class(&r3, g, dual, ci)?;
            let p4 = truncate_to_class(&r4, g, dual, ci)?;
            let rhs = match &s.rhs {
                Rhs::Pair(f5, f6) => canonicalize_rhs_pair(f5, f6),
                Rhs::Zero => Rhs::Zero,
            };
            let h1 = r1.sub(&p1);
            let h2 = r2.sub(&p2);
            let h3 = r3.sub(&p3);
            let h4 = r4.sub(&p4);
            (SolutionTuple { f1: p1, f2: p2, f3: p3, f4: p4, rhs }, h1, h2, h3, h4)
        }
    };

    // split the homogeneous normalized remainder per dual class
    let mut homog = Vec::new();
    let hnorm = h1.norm() + h2.norm() + h3.norm() + h4.norm();
    if hnorm > 1e-12 * scale {
        for ci in 0..dual.pairing.len() {
            let t = SolutionTuple {
                f1: truncate_to_class(&h1, g, dual, ci)?,
                f2: truncate_to_class(&h2, g, dual, ci)?,
                f3: truncate_to_class(&h3, g, dual, ci)?,
                f4: truncate_to_class(&h4, g, dual, ci)?,
                rhs: Rhs::Zero,
            };
            let tn = t.f1.norm() + t.f2.norm() + t.f3.norm() + t.f4.norm();
            if tn > 1e-10 * scale {
                homog.push((ci, t));
            }
        }
    }

    Ok(SolutionDecomposition { pure, homog_normalized: homog, central: (c1, c2) })
}

/// Canonicalizes the pair (f5, f6) like the admissible module does for (E, F):
/// equal L² norms, f5's leading nonzero value with argument zero.
pub fn canonicalize_rhs_pair(f5: &GroupFunction, f6: &GroupFunction) -> Rhs {
    let (n5, n6) = (f5.norm(), f6.norm());
    if n5 * n6 <= 1e-14 {
        return Rhs::Zero;
    }
    let lam = (n6 / n5).sqrt();
    let mut f5 = f5.scale(Complex64::new(lam, 0.0));
    let f6 = f6.scale(Complex64::new(1.0 / lam, 0.0));
    let nn = f5.norm();
    let lead = f5
        .values
        .iter()
        .find(|z| z.norm() > 1e-9 * nn)
        .cloned()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = lead / lead.norm();
    f5 = f5.scale(phase.conj());
    Rhs::Pair(f5, f6.scale(phase))
}

/// L² inner product of 4-tuples: Σᵢ ⟨fᵢ, gᵢ⟩ with ⟨f, g⟩ = (1/|G|)Σ f ḡ.
pub fn tuple_inner(a: &SolutionTuple, b: &SolutionTuple) -> Complex64 {
    let n = a.order() as f64;
    let ip = |f: &GroupFunction, g: &GroupFunction| -> Complex64 {
        f.values
            .iter()
            .zip(&g.values)
            .map(|(x, y)| x * y.conj())
            .sum::<Complex64>()
            / Complex64::new(n, 0.0)
    };
    ip(&a.f1, &b.f1) + ip(&a.f2, &b.f2) + ip(&a.f3, &b.f3) + ip(&a.f4, &b.f4)
}

/// Residual of the defining equation for a real/quaternionic-kind tuple on
/// arbitrary unitary matrices (pointwise identity; x⁻¹ = x*).
pub fn tuple_residual_on_samples(t: &AdmissibleTuple, samples: &[CMat]) -> f64 {
    let mut worst = 0.0f64;
    for x in samples {
        for y in samples {
            let yinv = y.adjoint();
            let lhs = trace_prod(&t.a, &(x * y))
                + trace_prod(&t.b, &(y * x))
                + trace_prod(t.c.as_ref().unwrap(), &(x * &yinv))
                + trace_prod(t.d.as_ref().unwrap(), &(&yinv * x));
            let rhs = match &t.rhs {
                None => czero(),
                Some((e, f)) => trace_prod(e, x) * trace_prod(f, y),
            };
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Residual of the two-character U(1) family on sampled phases (1×1 matrices).
pub fn u1_residual_on_samples(
    eps1: Complex64,
    del1: Complex64,
    eps2: Complex64,
    del2: Complex64,
    samples: &[Complex64],
) -> f64 {
    let f12 = |x: Complex64| (eps1 * del1 * x + eps2 * del2 * x.conj()) * 0.5;
    let f34 = |x: Complex64| (eps1 * del2 * x + eps2 * del1 * x.conj()) * 0.5;
    let mut worst = 0.0f64;
    for &x in samples {
        for &y in samples {
            let lhs = f12(x * y) + f12(y * x) + f34(x * y.conj()) + f34(y.conj() * x);
            let rhs = (eps1 * x + eps2 * x.conj()) * (del1 * y + del2 * y.conj());
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Seeded pseudo-Haar samples on U(1), O(2), SU(2), and O(3): QR-style
/// orthonormalized Gaussians with determinant correction left free (both
/// components of O(n) occur).
pub mod haar {
    use super::*;

    fn gauss<R: Rng>(rng: &mut R) -> f64 {
        // Box-Muller
        let u1: f64 = rng.random::<f64>().max(1e-300);
        let u2: f64 = rng.random::<f64>();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn u1<R: Rng>(rng: &mut R) -> Complex64 {
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        Complex64::new(theta.cos(), theta.sin())
    }

    fn orthonormalize_real<R: Rng>(rng: &mut R, n: usize) -> CMat {
        loop {
            let a = nalgebra::DMatrix::<f64>::from_fn(n, n, |_, _| gauss(rng));
            let mut cols: Vec<nalgebra::DVector<f64>> = Vec::new();
            let mut ok = true;
            for j in 0..n {
                let mut v = a.column(j).into_owned();
                for c in &cols {
                    let coef = c.dot(&v);
                    v -= c * coef;
                }
                let nv = v.norm();
                if nv < 1e-8 {
                    ok = false;
                    break;
                }
                cols.push(v / nv);
            }
            if ok {
                return CMat::from_fn(n, n, |i, j| Complex64::new(cols[j][i], 0.0));
            }
        }
    }

    pub fn o2<R: Rng>(rng: &mut R) -> CMat {
        orthonormalize_real(rng, 2)
    }

    pub fn o3<R: Rng>(rng: &mut R) -> CMat {
        orthonormalize_real(rng, 3)
    }

    pub fn su2<R: Rng>(rng: &mut R) -> CMat {
        // unit quaternion [[a, b], [-b̄, ā]]
        let q = [gauss(rng), gauss(rng), gauss(rng), gauss(rng)];
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        let a = Complex64::new(q[0] / norm, q[1] / norm);
        let b = Complex64::new(q[2] / norm, q[3] / norm);
        CMat::from_row_slice(2, 2, &[a, b, -b.conj(), a.conj()])
    }
}
