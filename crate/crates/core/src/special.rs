//! Special functional equations on a finite group: the d'Alembert equation
//! f(xy) + f(xy⁻¹) = 2f(x)f(y), its long variant, the Wilson equation, and
//! the generalized equations f(xy) + g(xy⁻¹) = h(x)k(y) and
//! f(xy) + f(yx) + f(xy⁻¹) + f(y⁻¹x) = h(x)k(y), solved via homomorphisms
//! into SU(2) and O(2).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fourier::GroupFunction;
use crate::group::FiniteGroup;
use crate::linalg::{cone, czero, frob, identity, round_complex, standard_j, CMat};
use crate::repr::{IrrepType, UnitaryDual};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SpecialError {
    #[error("solution {index} fails the long equation with residual {residual:.3e}")]
    MismatchFound { index: usize, residual: f64 },
    #[error("{0}")]
    BadInput(String),
}

/// Where an SU(2) homomorphism came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomOrigin {
    Trivial,
    /// diag(φ, φ̄) for the 1-dim character at this dual index.
    CharacterPair(usize),
    /// Symplectified quaternionic 2-dim irrep at this dual index.
    QuaternionicIrrep(usize),
}

/// A homomorphism G → SU(2), one matrix per group element.
#[derive(Debug, Clone)]
pub struct SU2Homomorphism {
    pub matrices: Vec<CMat>,
    pub origin: HomOrigin,
}

impl SU2Homomorphism {
    pub fn character(&self) -> Vec<Complex64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }

    /// f(x) = tr(P·hom(x)).
    pub fn trace_form(&self, p: &CMat) -> GroupFunction {
        GroupFunction::trace_form(p, &self.matrices)
    }

    /// Maximum defect over the homomorphism property, unitarity, and det = 1.
    pub fn defect(&self, g: &FiniteGroup) -> f64 {
        let mut worst = 0.0f64;
        for m in &self.matrices {
            worst = worst.max(frob(&(m * m.adjoint() - identity(2))));
            worst = worst.max((m.determinant() - cone()).norm());
        }
        for x in g.elements() {
            for y in g.elements() {
                let lhs = &self.matrices[x] * &self.matrices[y];
                worst = worst.max(frob(&(lhs - &self.matrices[g.mul(x, y)])));
            }
        }
        worst
    }
}

fn rounded_character(h: &SU2Homomorphism) -> Vec<(i64, i64)> {
    h.character().iter().map(|&z| round_complex(z, 1e6)).collect()
}

/// All homomorphisms G → SU(2) up to equivalence: the trivial one,
/// x ↦ diag(φ(x), φ̄(x)) per 1-dim character φ (conjugate characters give
/// equivalent homomorphisms and are deduplicated by character), and each
/// quaternionic 2-dim irrep through Sp(2) = SU(2).
pub fn su2_homomorphisms(g: &FiniteGroup, dual: &UnitaryDual) -> Vec<SU2Homomorphism> {
    let n = g.order();
    let mut out: Vec<SU2Homomorphism> = vec![SU2Homomorphism {
        matrices: vec![identity(2); n],
        origin: HomOrigin::Trivial,
    }];
    let mut seen: Vec<Vec<(i64, i64)>> = vec![rounded_character(&out[0])];
    let mut push_dedup = |h: SU2Homomorphism, seen: &mut Vec<Vec<(i64, i64)>>| {
        let key = rounded_character(&h);
        if !seen.contains(&key) {
            seen.push(key);
            out.push(h);
        }
    };
    for (idx, pi) in dual.irreps.iter().enumerate() {
        match (pi.dim, pi.ty) {
            (1, _) => {
                let mats: Vec<CMat> = pi
                    .matrices
                    .iter()
                    .map(|m| {
                        let phi = m[(0, 0)];
                        CMat::from_row_slice(2, 2, &[phi, czero(), czero(), phi.conj()])
                    })
                    .collect();
                push_dedup(
                    SU2Homomorphism { matrices: mats, origin: HomOrigin::CharacterPair(idx) },
                    &mut seen,
                );
            }
            (2, IrrepType::Quaternionic) => {
                // the dual stores quaternionic irreps in symplectic-unitary
                // form already, so the matrices lie in Sp(2) = SU(2)
                push_dedup(
                    SU2Homomorphism {
                        matrices: pi.matrices.clone(),
                        origin: HomOrigin::QuaternionicIrrep(idx),
                    },
                    &mut seen,
                );
            }
            _ => {}
        }
    }
    out
}

/// A solution of the d'Alembert equation f(xy) + f(xy⁻¹) = 2f(x)f(y).
#[derive(Debug, Clone)]
pub struct DalembertSolution {
    pub f: GroupFunction,
    /// True when f = (φ + φ⁻¹)/2 for a 1-dim character φ (or f ≡ 1).
    pub classical: bool,
    pub witness: HomOrigin,
}

/// Maximum residual of f(xy) + f(xy⁻¹) − 2f(x)f(y) over G².
pub fn dalembert_residual(f: &GroupFunction, g: &FiniteGroup) -> f64 {
    let mut worst = 0.0f64;
    for x in g.elements() {
        for y in g.elements() {
            let lhs = f.values[g.mul(x, y)] + f.values[g.mul(x, g.inv(y))];
            let rhs = f.values[x] * f.values[y] * 2.0;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Maximum residual of f(xy) + f(yx) + f(xy⁻¹) + f(y⁻¹x) − 4f(x)f(y) over G².
pub fn long_dalembert_residual(f: &GroupFunction, g: &FiniteGroup) -> f64 {
    let mut worst = 0.0f64;
    for x in g.elements() {
        for y in g.elements() {
            let yi = g.inv(y);
            let lhs = f.values[g.mul(x, y)]
                + f.values[g.mul(y, x)]
                + f.values[g.mul(x, yi)]
                + f.values[g.mul(yi, x)];
            let rhs = f.values[x] * f.values[y] * 4.0;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// The nontrivial solutions of the d'Alembert equation: tr(hom)/2 over all
/// SU(2) homomorphisms, deduplicated, each verified exhaustively.
pub fn dalembert_solutions(g: &FiniteGroup, dual: &UnitaryDual) -> Vec<DalembertSolution> {
    let mut out: Vec<DalembertSolution> = Vec::new();
    for h in su2_homomorphisms(g, dual) {
        let f = GroupFunction {
            values: h.character().iter().map(|z| z * 0.5).collect(),
        };
        let dup = out.iter().any(|s| f.sub(&s.f).norm() < 1e-8);
        if dup {
            continue;
        }
        debug_assert!(dalembert_residual(&f, g) < DEFAULT_TOL);
        let classical = !matches!(h.origin, HomOrigin::QuaternionicIrrep(_));
        out.push(DalembertSolution { f, classical, witness: h.origin });
    }
    out
}

/// Per-solution residuals for the long d'Alembert equation.
#[derive(Debug, Clone)]
pub struct LongDalembertReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Checks that every d'Alembert solution also solves the long equation; a
/// mismatch would falsify the coincidence of the two solution sets.
pub fn long_dalembert_check(
    solutions: &[DalembertSolution],
    g: &FiniteGroup,
) -> Result<LongDalembertReport, SpecialError> {
    let mut residuals = Vec::with_capacity(solutions.len());
    for (index, s) in solutions.iter().enumerate() {
        let r = long_dalembert_residual(&s.f, g);
        if r > DEFAULT_TOL {
            return Err(SpecialError::MismatchFound { index, residual: r });
        }
        residuals.push(r);
    }
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(LongDalembertReport { residuals, max_residual })
}

/// One Wilson-equation family f(xy) + f(xy⁻¹) = 2f(x)g(y): f = tr(P·hom)
/// over P ∈ M(2, ℂ) with the fixed companion g = tr(hom)/2.
#[derive(Debug, Clone)]
pub struct WilsonFamily {
    pub hom: SU2Homomorphism,
    pub g_component: GroupFunction,
}

impl WilsonFamily {
    pub fn f(&self, p: &CMat) -> GroupFunction {
        self.hom.trace_form(p)
    }
}

/// Maximum residual of f(xy) + f(xy⁻¹) − 2f(x)g(y) over G².
pub fn wilson_residual(f: &GroupFunction, gg: &GroupFunction, g: &FiniteGroup) -> f64 {
    let mut worst = 0.0f64;
    for x in g.elements() {
        for y in g.elements() {
            let lhs = f.values[g.mul(x, y)] + f.values[g.mul(x, g.inv(y))];
            let rhs = f.values[x] * gg.values[y] * 2.0;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

pub fn wilson_families(g: &FiniteGroup, dual: &UnitaryDual) -> Vec<WilsonFamily> {
    su2_homomorphisms(g, dual)
        .into_iter()
        .map(|hom| {
            let g_component = GroupFunction {
                values: hom.character().iter().map(|z| z * 0.5).collect(),
            };
            WilsonFamily { hom, g_component }
        })
        .collect()
}

/// Core solution families of f(xy) + g(xy⁻¹) = h(x)k(y), plus the
/// homogeneous lattice Σⱼ aⱼ(πⱼ, −πⱼ, 0) over O(1)-valued characters.
#[derive(Debug, Clone)]
pub enum Gen1Family {
    /// Two-character family on a conjugate pair of 1-dim irreps; four
    /// scalar parameters (ε₁, δ₁, ε₂, δ₂).
    U1Core { class: usize },
    /// f = −g = tr(Pπ) on a real-type 2-dim irrep; parameter P.
    O2Core { irrep: usize },
    /// f = g = tr(Pπ) on a quaternionic 2-dim irrep; parameter P.
    SU2Core { irrep: usize },
    /// f = Σ aⱼπⱼ, g = −f, homogeneous; the indices are the real 1-dim
    /// characters of the dual.
    O1Lattice { characters: Vec<usize> },
}

pub fn gen1_families(_g: &FiniteGroup, dual: &UnitaryDual) -> Vec<Gen1Family> {
    let mut out = Vec::new();
    for (ci, members) in dual.pairing.iter().enumerate() {
        let pi = &dual.irreps[members[0]];
        if pi.dim == 1 && members.len() == 2 {
            out.push(Gen1Family::U1Core { class: ci });
        }
    }
    for (idx, pi) in dual.irreps.iter().enumerate() {
        match (pi.dim, pi.ty) {
            (2, IrrepType::Real) => out.push(Gen1Family::O2Core { irrep: idx }),
            (2, IrrepType::Quaternionic) => out.push(Gen1Family::SU2Core { irrep: idx }),
            _ => {}
        }
    }
    let characters: Vec<usize> = dual
        .irreps
        .iter()
        .enumerate()
        .filter(|(_, p)| p.dim == 1 && p.ty == IrrepType::Real)
        .map(|(i, _)| i)
        .collect();
    out.push(Gen1Family::O1Lattice { characters });
    out
}

/// A realized member (f, g, h, k) of a `Gen1Family`.
#[derive(Debug, Clone)]
pub struct Gen1Solution {
    pub f: GroupFunction,
    pub g: GroupFunction,
    pub h: GroupFunction,
    pub k: GroupFunction,
}

/// Maximum residual of f(xy) + g(xy⁻¹) − h(x)k(y) over G².
pub fn gen1_residual(s: &Gen1Solution, g: &FiniteGroup) -> f64 {
    let mut worst = 0.0f64;
    for x in g.elements() {
        for y in g.elements() {
            let lhs = s.f.values[g.mul(x, y)] + s.g.values[g.mul(x, g.inv(y))];
            let rhs = s.h.values[x] * s.k.values[y];
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Instantiates a family member from its parameters. `U1Core` takes four
/// scalars; the matrix cores take one 2×2 matrix P flattened as four scalars
/// (row-major, real parts only ignored — pass via `params` as re/im pairs is
/// not needed since parameters are complex); `O1Lattice` takes one scalar
/// per character.
pub fn gen1_build(
    fam: &Gen1Family,
    params: &[Complex64],
    g: &FiniteGroup,
    dual: &UnitaryDual,
) -> Result<Gen1Solution, SpecialError> {
    let n = g.order();
    let need = |want: usize| {
        if params.len() != want {
            Err(SpecialError::BadInput(format!(
                "expected {want} parameters, got {}",
                params.len()
            )))
        } else {
            Ok(())
        }
    };
    match fam {
        Gen1Family::U1Core { class } => {
            need(4)?;
            let (e1, d1, e2, d2) = (params[0], params[1], params[2], params[3]);
            let phi = dual.irreps[dual.pairing[*class][0]].character();
            let comb = |c1: Complex64, c2: Complex64| GroupFunction {
                values: phi.iter().map(|&z| c1 * z + c2 * z.conj()).collect(),
            };
            Ok(Gen1Solution {
                f: comb(e1 * d1, e2 * d2),
                g: comb(e1 * d2, e2 * d1),
                h: comb(e1, e2),
                k: comb(d1, d2),
            })
        }
        Gen1Family::O2Core { irrep } => {
            need(4)?;
            let p = CMat::from_row_slice(2, 2, params);
            let pi = &dual.irreps[*irrep];
            let j = standard_j(2);
            let f = GroupFunction::trace_form(&p, &pi.matrices);
            let h = GroupFunction::trace_form(&(-(&j * &p)), &pi.matrices);
            let k = GroupFunction::trace_form(&j, &pi.matrices);
            Ok(Gen1Solution { g: f.scale(-cone()), f, h, k })
        }
        Gen1Family::SU2Core { irrep } => {
            need(4)?;
            let p = CMat::from_row_slice(2, 2, params);
            let pi = &dual.irreps[*irrep];
            let f = GroupFunction::trace_form(&p, &pi.matrices);
            let k = GroupFunction { values: pi.character() };
            Ok(Gen1Solution { g: f.clone(), h: f.clone(), f, k })
        }
        Gen1Family::O1Lattice { characters } => {
            need(characters.len())?;
            let mut f = GroupFunction::zeros(n);
            for (&a, &idx) in params.iter().zip(characters) {
                let chi = GroupFunction { values: dual.irreps[idx].character() };
                f = f.add(&chi.scale(a));
            }
            Ok(Gen1Solution {
                g: f.scale(-cone()),
                f,
                h: GroupFunction::zeros(n),
                k: GroupFunction::zeros(n),
            })
        }
    }
}

/// Solution families of f(xy) + f(yx) + f(xy⁻¹) + f(y⁻¹x) = h(x)k(y).
#[derive(Debug, Clone)]
pub enum LongWilsonFamily {
    /// f = a·tr(Jπ), h⊗k = 2a·tr(Jπ(x))·tr(π(y)) on a real-type 2-dim irrep.
    O2Branch { irrep: usize },
    /// f = tr(A·hom), h⊗k = 2·tr(A·hom(x))·tr(hom(y)).
    SU2Branch { hom: SU2Homomorphism },
}

/// A realized member (f, h, k) of a `LongWilsonFamily`.
#[derive(Debug, Clone)]
pub struct LongWilsonSolution {
    pub f: GroupFunction,
    pub h: GroupFunction,
    pub k: GroupFunction,
}

pub fn long_wilson_families(g: &FiniteGroup, dual: &UnitaryDual) -> Vec<LongWilsonFamily> {
    let mut out: Vec<LongWilsonFamily> = dual
        .irreps
        .iter()
        .enumerate()
        .filter(|(_, p)| p.dim == 2 && p.ty == IrrepType::Real)
        .map(|(i, _)| LongWilsonFamily::O2Branch { irrep: i })
        .collect();
    out.extend(
        su2_homomorphisms(g, dual)
            .into_iter()
            .map(|hom| LongWilsonFamily::SU2Branch { hom }),
    );
    out
}

/// Instantiates a member: `O2Branch` takes one scalar a, `SU2Branch` a 2×2
/// matrix A flattened row-major.
pub fn long_wilson_build(
    fam: &LongWilsonFamily,
    params: &[Complex64],
    dual: &UnitaryDual,
) -> Result<LongWilsonSolution, SpecialError> {
    match fam {
        LongWilsonFamily::O2Branch { irrep } => {
            if params.len() != 1 {
                return Err(SpecialError::BadInput("O(2) branch takes one scalar".into()));
            }
            let a = params[0];
            let pi = &dual.irreps[*irrep];
            let j = standard_j(2);
            let f = GroupFunction::trace_form(&(&j * a), &pi.matrices);
            Ok(LongWilsonSolution {
                h: f.scale(Complex64::new(2.0, 0.0)),
                k: GroupFunction { values: pi.character() },
                f,
            })
        }
        LongWilsonFamily::SU2Branch { hom } => {
            if params.len() != 4 {
                return Err(SpecialError::BadInput("SU(2) branch takes a 2x2 matrix".into()));
            }
            let a = CMat::from_row_slice(2, 2, params);
            let f = hom.trace_form(&a);
            Ok(LongWilsonSolution {
                h: f.scale(Complex64::new(2.0, 0.0)),
                k: GroupFunction { values: hom.character() },
                f,
            })
        }
    }
}

/// Maximum residual of f(xy) + f(yx) + f(xy⁻¹) + f(y⁻¹x) − h(x)k(y) over G².
pub fn long_wilson_residual(s: &LongWilsonSolution, g: &FiniteGroup) -> f64 {
    let mut worst = 0.0f64;
    for x in g.elements() {
        for y in g.elements() {
            let yi = g.inv(y);
            let lhs = s.f.values[g.mul(x, y)]
                + s.f.values[g.mul(y, x)]
                + s.f.values[g.mul(x, yi)]
                + s.f.values[g.mul(yi, x)];
            let rhs = s.h.values[x] * s.k.values[y];
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Outcome of the randomized d'Alembert completeness probe.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub starts: usize,
    pub converged_known: usize,
    pub converged_unknown: usize,
    pub non_converged: usize,
}

/// Runs seeded Gauss–Newton iterations on the quadratic system
/// f(xy) + f(xy⁻¹) − 2f(x)f(y) = 0 from random starts and classifies each
/// limit against the enumerated solutions (plus f ≡ 0). A nonzero
/// `converged_unknown` count would be evidence of a missed solution.
pub fn dalembert_newton_probe(
    g: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
    starts: usize,
) -> ProbeReport {
    let n = g.order();
    let known: Vec<GroupFunction> = dalembert_solutions(g, dual)
        .into_iter()
        .map(|s| s.f)
        .chain(std::iter::once(GroupFunction::zeros(n)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize, usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| (x, y, 0, 0))
        .map(|(x, y, _, _)| (g.mul(x, y), g.mul(x, g.inv(y)), x, y))
        .collect();
    let residual_vec = |f: &[Complex64]| -> Vec<Complex64> {
        pairs
            .iter()
            .map(|&(xy, xyi, x, y)| f[xy] + f[xyi] - f[x] * f[y] * 2.0)
            .collect()
    };
    let mut report = ProbeReport {
        starts,
        converged_known: 0,
        converged_unknown: 0,
        non_converged: 0,
    };
    for _ in 0..starts {
        let mut f: Vec<Complex64> = (0..n)
            .map(|_| {
                Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)
            })
            .collect();
        let mut converged = false;
        for _ in 0..60 {
            let r = residual_vec(&f);
            let rnorm = r.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
            if rnorm < 1e-12 {
                converged = true;
                break;
            }
            // holomorphic Jacobian of the quadratic system
            let mut jac = CMat::zeros(pairs.len(), n);
            for (row, &(xy, xyi, x, y)) in pairs.iter().enumerate() {
                jac[(row, xy)] += cone();
                jac[(row, xyi)] += cone();
                jac[(row, x)] -= f[y] * 2.0;
                jac[(row, y)] -= f[x] * 2.0;
            }
            // damped normal equations
            let jh = jac.adjoint();
            let mut lhs = &jh * &jac;
            for i in 0..n {
                lhs[(i, i)] += Complex64::new(1e-12, 0.0);
            }
            let rv = crate::linalg::CVec::from_iterator(r.len(), r.into_iter());
            let rhs = &jh * rv;
            let Some(step) = lhs.lu().solve(&rhs) else { break };
            let step_norm = step.norm();
            for i in 0..n {
                f[i] -= step[i];
            }
            if step_norm < 1e-14 {
                let rr = residual_vec(&f);
                converged = rr.iter().map(|z| z.norm()).fold(0.0f64, f64::max) < DEFAULT_TOL;
                break;
            }
        }
        if !converged {
            let r = residual_vec(&f);
            converged = r.iter().map(|z| z.norm()).fold(0.0f64, f64::max) < DEFAULT_TOL;
        }
        if !converged {
            report.non_converged += 1;
            continue;
        }
        let matches_known = known.iter().any(|k| {
            f.iter()
                .zip(&k.values)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max)
                < 1e-6
        });
        if matches_known {
            report.converged_known += 1;
        } else {
            report.converged_unknown += 1;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;
    use crate::linalg::random_complex_matrix;
    use crate::repr::compute_unitary_dual;

    fn setup(spec: crate::group::GroupSpec) -> (FiniteGroup, UnitaryDual) {
        let g = spec.build().unwrap();
        let d = compute_unitary_dual(&g, 0).unwrap();
        (g, d)
    }

    #[test]
    fn hom_counts_match_structure() {
        let (g, d) = setup(catalog::s3());
        let homs = su2_homomorphisms(&g, &d);
        assert_eq!(homs.len(), 2);
        for h in &homs {
            assert!(h.defect(&g) < 1e-10);
        }

        let (g, d) = setup(catalog::q8());
        let homs = su2_homomorphisms(&g, &d);
        assert_eq!(homs.len(), 5);
        assert_eq!(
            homs.iter()
                .filter(|h| matches!(h.origin, HomOrigin::QuaternionicIrrep(_)))
                .count(),
            1
        );
        for h in &homs {
            assert!(h.defect(&g) < 1e-10);
        }

        let (g, d) = setup(catalog::cyclic(3));
        let homs = su2_homomorphisms(&g, &d);
        assert_eq!(homs.len(), 2);
    }

    #[test]
    fn q8_has_exactly_five_dalembert_solutions() {
        let (g, d) = setup(catalog::q8());
        let sols = dalembert_solutions(&g, &d);
        assert_eq!(sols.len(), 5);
        assert_eq!(sols.iter().filter(|s| s.classical).count(), 4);
        let nonclassical = sols.iter().find(|s| !s.classical).unwrap();
        // class values (1, -1, 0, 0, 0)
        let class_vals: Vec<Complex64> = g
            .classes()
            .iter()
            .map(|c| nonclassical.f.values[c[0]])
            .collect();
        assert_eq!(class_vals.len(), 5);
        let expect = [1.0, -1.0, 0.0, 0.0, 0.0];
        let mut got: Vec<f64> = class_vals.iter().map(|z| z.re).collect();
        let mut want = expect.to_vec();
        got.sort_by(|a, b| b.partial_cmp(a).unwrap());
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(class_vals.iter().all(|z| z.im.abs() < 1e-9));
        for s in &sols {
            assert!(dalembert_residual(&s.f, &g) < 1e-10);
        }
    }

    #[test]
    fn s3_dalembert_solutions_all_classical() {
        let (g, d) = setup(catalog::s3());
        let sols = dalembert_solutions(&g, &d);
        assert_eq!(sols.len(), 2);
        assert!(sols.iter().all(|s| s.classical));
        // the constant 1 is among them
        assert!(sols
            .iter()
            .any(|s| s.f.values.iter().all(|z| (z - cone()).norm() < 1e-12)));
    }

    #[test]
    fn long_dalembert_coincides_and_rejects_perturbations() {
        let (g, d) = setup(catalog::q8());
        let sols = dalembert_solutions(&g, &d);
        let report = long_dalembert_check(&sols, &g).unwrap();
        assert_eq!(report.residuals.len(), 5);
        assert!(report.max_residual < 1e-10);

        let mut bad = sols[0].f.clone();
        bad.values[2] += Complex64::new(1e-3, 0.0);
        assert!(dalembert_residual(&bad, &g) > 1e-4);
        assert!(long_dalembert_residual(&bad, &g) > 1e-4);
    }

    #[test]
    fn wilson_families_solve_exhaustively() {
        let (g, d) = setup(catalog::q8());
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for fam in wilson_families(&g, &d) {
            // g component solves the long d'Alembert equation
            assert!(long_dalembert_residual(&fam.g_component, &g) < 1e-10);
            let p = random_complex_matrix(&mut rng, 2, 2);
            let f = fam.f(&p);
            assert!(wilson_residual(&f, &fam.g_component, &g) < 1e-10);
        }
        // trivial hom with P = I/2 gives the constant solution f = g = 1
        let fams = wilson_families(&g, &d);
        let trivial = fams
            .iter()
            .find(|f| f.hom.origin == HomOrigin::Trivial)
            .unwrap();
        let f = trivial.f(&(identity(2) * Complex64::new(0.5, 0.0)));
        assert!(f.values.iter().all(|z| (z - cone()).norm() < 1e-12));
        assert!(trivial
            .g_component
            .values
            .iter()
            .all(|z| (z - cone()).norm() < 1e-12));
    }

    #[test]
    fn vwilson_shape_solves() {
        // f(xy) + f(xy⁻¹) = 2g(x)f(y) with f = a·tr(hom), g = tr(hom)/2
        let (g, d) = setup(catalog::q8());
        let a = Complex64::new(0.7, -0.3);
        for fam in wilson_families(&g, &d) {
            let f = GroupFunction {
                values: fam.hom.character().iter().map(|z| z * a).collect(),
            };
            let mut worst = 0.0f64;
            for x in g.elements() {
                for y in g.elements() {
                    let lhs = f.values[g.mul(x, y)] + f.values[g.mul(x, g.inv(y))];
                    let rhs = fam.g_component.values[x] * f.values[y] * 2.0;
                    worst = worst.max((lhs - rhs).norm());
                }
            }
            assert!(worst < 1e-10);
        }
    }

    #[test]
    fn gen1_families_on_z4_and_d4() {
        let (g, d) = setup(catalog::cyclic(4));
        let fams = gen1_families(&g, &d);
        assert_eq!(
            fams.iter().filter(|f| matches!(f, Gen1Family::U1Core { .. })).count(),
            1
        );
        let lattice = fams
            .iter()
            .find_map(|f| match f {
                Gen1Family::O1Lattice { characters } => Some(characters.clone()),
                _ => None,
            })
            .unwrap();
        assert_eq!(lattice.len(), 2);

        let (_, d4dual) = setup(catalog::dihedral(4));
        let fams = gen1_families(&g, &d4dual);
        assert!(fams.iter().any(|f| matches!(f, Gen1Family::O2Core { .. })));
    }

    #[test]
    fn gen1_members_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let c =
            |rng: &mut ChaCha8Rng| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        for spec in [catalog::cyclic(4), catalog::dihedral(4), catalog::q8()] {
            let (g, d) = setup(spec);
            for fam in gen1_families(&g, &d) {
                let nparams = match &fam {
                    Gen1Family::U1Core { .. } => 4,
                    Gen1Family::O2Core { .. } | Gen1Family::SU2Core { .. } => 4,
                    Gen1Family::O1Lattice { characters } => characters.len(),
                };
                let params: Vec<Complex64> = (0..nparams).map(|_| c(&mut rng)).collect();
                let s = gen1_build(&fam, &params, &g, &d).unwrap();
                assert!(gen1_residual(&s, &g) < 1e-10, "group {} family {:?}", g.name, fam);
                // zero parameters give the zero solution (h⊗k as a tensor)
                let z = gen1_build(&fam, &vec![czero(); nparams], &g, &d).unwrap();
                assert!(z.f.norm() + z.g.norm() + z.h.norm() * z.k.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn long_wilson_families_solve() {
        let (g, d) = setup(catalog::dihedral(4));
        let fams = long_wilson_families(&g, &d);
        let o2 = fams
            .iter()
            .find(|f| matches!(f, LongWilsonFamily::O2Branch { .. }))
            .unwrap();
        let s = long_wilson_build(o2, &[cone()], &d).unwrap();
        assert!(long_wilson_residual(&s, &g) < 1e-12);

        let (g, d) = setup(catalog::q8());
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for fam in long_wilson_families(&g, &d) {
            let s = match &fam {
                LongWilsonFamily::O2Branch { .. } => {
                    long_wilson_build(&fam, &[Complex64::new(0.4, 0.1)], &d).unwrap()
                }
                LongWilsonFamily::SU2Branch { .. } => {
                    let a = random_complex_matrix(&mut rng, 2, 2);
                    let params: Vec<Complex64> =
                        (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| a[(i, j)]).collect();
                    long_wilson_build(&fam, &params, &d).unwrap()
                }
            };
            assert!(long_wilson_residual(&s, &g) < 1e-10);
        }

        // trivial parameters give the zero solution
        let fam = fams
            .iter()
            .find(|f| matches!(f, LongWilsonFamily::O2Branch { .. }))
            .unwrap();
        let z = long_wilson_build(fam, &[czero()], &d).unwrap();
        assert!(z.f.norm() + z.h.norm() < 1e-14);
    }

    #[test]
    fn vlong_wilson_shapes_solve() {
        // Eq. f(xy)+f(yx)+f(xy⁻¹)+f(y⁻¹x) = 4f(x)g(y) with g = tr(π)/2
        let (g, d) = setup(catalog::dihedral(4));
        for fam in long_wilson_families(&g, &d) {
            let (s, gcomp) = match &fam {
                LongWilsonFamily::O2Branch { irrep } => (
                    long_wilson_build(&fam, &[Complex64::new(0.9, 0.2)], &d).unwrap(),
                    GroupFunction {
                        values: d.irreps[*irrep].character().iter().map(|z| z * 0.5).collect(),
                    },
                ),
                LongWilsonFamily::SU2Branch { hom } => (
                    long_wilson_build(&fam, &[cone(), czero(), czero(), -cone()], &d).unwrap(),
                    GroupFunction {
                        values: hom.character().iter().map(|z| z * 0.5).collect(),
                    },
                ),
            };
            let mut worst = 0.0f64;
            for x in g.elements() {
                for y in g.elements() {
                    let yi = g.inv(y);
                    let lhs = s.f.values[g.mul(x, y)]
                        + s.f.values[g.mul(y, x)]
                        + s.f.values[g.mul(x, yi)]
                        + s.f.values[g.mul(yi, x)];
                    let rhs = s.f.values[x] * gcomp.values[y] * 4.0;
                    worst = worst.max((lhs - rhs).norm());
                }
            }
            assert!(worst < 1e-10);
        }
    }

    #[test]
    fn newton_probe_finds_only_known_solutions_on_q8() {
        let (g, d) = setup(catalog::q8());
        let report = dalembert_newton_probe(&g, &d, 0, 1000);
        assert_eq!(report.converged_unknown, 0);
        assert!(report.converged_known > 100, "known: {}", report.converged_known);
    }
}
