//! Unitary dual of a finite group: irreducible representations, their
//! real/complex/quaternionic type, and orthogonal or symplectic realizations.

use crate::group::FiniteGroup;
use crate::linalg::{
    frob, identity, random_complex_vector, random_hermitian, random_skew, random_symmetric,
    standard_j, CMat, CVec,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_DUAL_CAP: usize = 200;
const MAX_SPLIT_RETRIES: usize = 40;

#[derive(Debug, Error)]
pub enum ReprError {
    #[error("group order {0} exceeds the dual computation cap of {1}")]
    TooLarge(usize, usize),
    #[error("failed to split a reducible subspace after {0} retries")]
    SplitFailure(usize),
    #[error("Frobenius-Schur indicator {0} is not within 1e-6 of an integer in {{-1,0,1}}")]
    IndicatorNotIntegral(f64),
    #[error("operation requires an irrep of {expected:?} type, found {found:?}")]
    WrongType {
        expected: IrrepType,
        found: IrrepType,
    },
    #[error("similarity transform failed: {0}")]
    TransformFailure(String),
    #[error("no conjugate partner found for irrep {0}; the dual is incomplete")]
    PartnerNotFound(usize),
    #[error("cache i/o: {0}")]
    CacheIo(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IrrepType {
    Real,
    Complex,
    Quaternionic,
}

/// One unitary matrix per group element. Real-type irreps are stored with
/// orthogonal matrices, quaternionic ones with symplectic matrices.
#[derive(Debug, Clone)]
pub struct UnitaryIrrep {
    pub dim: usize,
    pub matrices: Vec<CMat>,
    pub ty: IrrepType,
    /// Index of the conjugate irrep within the dual (self for real/quaternionic).
    pub partner: usize,
}

impl UnitaryIrrep {
    pub fn character(&self) -> Vec<Complex64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }

    pub fn character_on_classes(&self, g: &FiniteGroup) -> Vec<Complex64> {
        g.classes()
            .iter()
            .map(|c| self.matrices[c[0]].trace())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct UnitaryDual {
    pub irreps: Vec<UnitaryIrrep>,
    /// Equivalence classes [[π]]: singletons for real/quaternionic irreps,
    /// conjugate pairs for complex ones. Each irrep index appears exactly once.
    pub pairing: Vec<Vec<usize>>,
}

impl UnitaryDual {
    /// The dual class [[π]] containing irrep `idx`.
    pub fn class_of(&self, idx: usize) -> usize {
        self.pairing
            .iter()
            .position(|c| c.contains(&idx))
            .expect("pairing covers all irreps")
    }
}

fn char_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let n = a.len() as f64;
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y.conj())
        .sum::<Complex64>()
        / Complex64::new(n, 0.0)
}

/// Matrices of the subrepresentation of the left regular representation
/// on the column span of the orthonormal basis `b`.
fn subrep_matrices(g: &FiniteGroup, b: &CMat) -> Vec<CMat> {
    let n = g.order();
    let d = b.ncols();
    let mut out = Vec::with_capacity(n);
    for x in g.elements() {
        // (P_x b)[i, k] = b[x^{-1} i, k]  since rho(x) e_h = e_{x h}
        let xinv = g.inv(x);
        let mut pb = CMat::zeros(n, d);
        for i in 0..n {
            let src = g.mul(xinv, i);
            for k in 0..d {
                pb[(i, k)] = b[(src, k)];
            }
        }
        out.push(b.adjoint() * pb);
    }
    out
}

fn permuted_basis(g: &FiniteGroup, x: usize, b: &CMat) -> CMat {
    let n = g.order();
    let d = b.ncols();
    let xinv = g.inv(x);
    let mut pb = CMat::zeros(n, d);
    for i in 0..n {
        let src = g.mul(xinv, i);
        for k in 0..d {
            pb[(i, k)] = b[(src, k)];
        }
    }
    pb
}

/// Splits the regular representation into irreducibles by averaging random
/// Hermitian seeds into commutant elements and taking eigenspaces.
pub fn compute_unitary_dual(g: &FiniteGroup, seed: u64) -> Result<UnitaryDual, ReprError> {
    compute_unitary_dual_capped(g, seed, DEFAULT_DUAL_CAP)
}

pub fn compute_unitary_dual_capped(
    g: &FiniteGroup,
    seed: u64,
    cap: usize,
) -> Result<UnitaryDual, ReprError> {
    let n = g.order();
    if n > cap {
        return Err(ReprError::TooLarge(n, cap));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut stack: Vec<CMat> = vec![identity(n)];
    let mut raw: Vec<(Vec<CMat>, CMat)> = Vec::new(); // (matrices, basis)
    while let Some(b) = stack.pop() {
        let d = b.ncols();
        let mats = subrep_matrices(g, &b);
        let chi: Vec<Complex64> = mats.iter().map(|m| m.trace()).collect();
        let norm2 = char_inner(&chi, &chi).re;
        if (norm2 - 1.0).abs() < 1e-6 {
            raw.push((mats, b));
            continue;
        }
        let mut split_ok = false;
        for _ in 0..MAX_SPLIT_RETRIES {
            let h = random_hermitian(&mut rng, d);
            let mut t = CMat::zeros(d, d);
            for m in &mats {
                t += m * &h * m.adjoint();
            }
            t /= Complex64::new(n as f64, 0.0);
            // enforce exact Hermitian symmetry before the eigensolve
            let t = (&t + t.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = nalgebra::SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..d).collect();
            order.sort_by(|&a, &b| {
                eig.eigenvalues[a]
                    .partial_cmp(&eig.eigenvalues[b])
                    .unwrap()
            });
            let spread = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            let gap_tol = 1e-6 * spread.max(1.0);
            let mut clusters: Vec<Vec<usize>> = vec![vec![order[0]]];
            for w in order.windows(2) {
                if eig.eigenvalues[w[1]] - eig.eigenvalues[w[0]] > gap_tol {
                    clusters.push(Vec::new());
                }
                clusters.last_mut().unwrap().push(w[1]);
            }
            if clusters.len() < 2 {
                continue;
            }
            let mut sub_bases = Vec::new();
            let mut all_invariant = true;
            for cl in &clusters {
                let mut v = CMat::zeros(d, cl.len());
                for (k, &c) in cl.iter().enumerate() {
                    v.set_column(k, &eig.eigenvectors.column(c));
                }
                let nb = &b * v;
                // invariance check: projection must commute with the action
                for x in g.elements() {
                    let pb = permuted_basis(g, x, &nb);
                    let coeff = nb.adjoint() * &pb;
                    if frob(&(&pb - &nb * coeff)) > 1e-7 * (d as f64) {
                        all_invariant = false;
                        break;
                    }
                }
                if !all_invariant {
                    break;
                }
                sub_bases.push(nb);
            }
            if all_invariant {
                stack.extend(sub_bases);
                split_ok = true;
                break;
            }
        }
        if !split_ok {
            return Err(ReprError::SplitFailure(MAX_SPLIT_RETRIES));
        }
    }

    // deduplicate equivalent copies by class character
    let mut kept: Vec<Vec<CMat>> = Vec::new();
    let mut kept_chars: Vec<Vec<Complex64>> = Vec::new();
    for (mats, _basis) in raw {
        let chi: Vec<Complex64> = mats.iter().map(|m| m.trace()).collect();
        let dup = kept_chars
            .iter()
            .any(|c| (char_inner(&chi, c).re - 1.0).abs() < 1e-6);
        if !dup {
            kept.push(mats);
            kept_chars.push(chi);
        }
    }
    let sum_sq: usize = kept.iter().map(|m| m[0].nrows() * m[0].nrows()).sum();
    if sum_sq != n {
        return Err(ReprError::TransformFailure(format!(
            "dual incomplete: sum of squared dimensions {sum_sq} != {n}"
        )));
    }

    // canonical ordering: ascending dimension, then rounded class character
    let mut keys: Vec<(usize, Vec<(i64, i64)>)> = Vec::new();
    for mats in &kept {
        let chi: Vec<(i64, i64)> = g
            .classes()
            .iter()
            .map(|c| {
                let z = mats[c[0]].trace();
                ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)
            })
            .collect();
        keys.push((mats[0].nrows(), chi));
    }
    let mut order: Vec<usize> = (0..kept.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));

    let mut irreps: Vec<UnitaryIrrep> = Vec::new();
    for &i in &order {
        let mats = kept[i].clone();
        let dim = mats[0].nrows();
        let mut ir = UnitaryIrrep {
            dim,
            matrices: mats,
            ty: IrrepType::Complex,
            partner: 0,
        };
        ir.ty = fs_type(&ir, g)?;
        match ir.ty {
            IrrepType::Real => {
                let (r, _) = realify_with_rng(&ir, &mut rng)?;
                ir = r;
            }
            IrrepType::Quaternionic => {
                let (r, _) = symplectify_with_rng(&ir, &mut rng)?;
                ir = r;
            }
            IrrepType::Complex => {}
        }
        irreps.push(ir);
    }

    let mut dual = UnitaryDual {
        irreps,
        pairing: Vec::new(),
    };
    dual.pairing = pair_conjugates(&mut dual.irreps)?;
    Ok(dual)
}

/// Character as a class function χ(x) = tr π(x).
pub fn character(pi: &UnitaryIrrep) -> Vec<Complex64> {
    pi.character()
}

/// Frobenius-Schur indicator based type classification:
/// ν = (1/|G|) Σ_g χ(g²), with 1 → real, 0 → complex, −1 → quaternionic.
pub fn fs_type(pi: &UnitaryIrrep, g: &FiniteGroup) -> Result<IrrepType, ReprError> {
    let n = g.order();
    let mut nu = Complex64::new(0.0, 0.0);
    for x in g.elements() {
        let sq = g.mul(x, x);
        nu += pi.matrices[sq].trace();
    }
    nu /= Complex64::new(n as f64, 0.0);
    let rounded = nu.re.round();
    if (nu.re - rounded).abs() > 1e-6 || nu.im.abs() > 1e-6 || rounded.abs() > 1.0 {
        return Err(ReprError::IndicatorNotIntegral(nu.re));
    }
    Ok(match rounded as i64 {
        1 => IrrepType::Real,
        0 => IrrepType::Complex,
        -1 => IrrepType::Quaternionic,
        _ => unreachable!(),
    })
}

/// Averages a seed matrix over the action ρ(g)(S) = π(g) S π(g)ᵗ.
fn averaged_bilinear_form(pi: &UnitaryIrrep, seed: &CMat) -> CMat {
    let mut w = CMat::zeros(pi.dim, pi.dim);
    for m in &pi.matrices {
        w += m * seed * m.transpose();
    }
    w / Complex64::new(pi.matrices.len() as f64, 0.0)
}

/// Invariant bilinear form of the given symmetry, normalized so W*W = I.
/// Returns None if the averaged form vanishes (no invariant form of that
/// symmetry exists, or an unlucky seed).
fn invariant_form<R: rand::Rng>(pi: &UnitaryIrrep, skew: bool, rng: &mut R) -> Option<CMat> {
    for _ in 0..8 {
        let seed = if skew {
            random_skew(rng, pi.dim)
        } else {
            random_symmetric(rng, pi.dim)
        };
        let w = averaged_bilinear_form(pi, &seed);
        if frob(&w) > 1e-6 {
            // Schur: W*W is a positive scalar matrix for an irreducible π
            let c = (w.adjoint() * &w).trace().re / pi.dim as f64;
            return Some(w / Complex64::new(c.sqrt(), 0.0));
        }
    }
    None
}

/// Conjugates a real-type irrep into O(n). Returns the new irrep together
/// with the unitary similarity U with R(g) = U π(g) U*.
pub fn realify(pi: &UnitaryIrrep) -> Result<(UnitaryIrrep, CMat), ReprError> {
    if pi.ty != IrrepType::Real {
        return Err(ReprError::WrongType {
            expected: IrrepType::Real,
            found: pi.ty,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ea1);
    realify_with_rng(pi, &mut rng)
}

fn realify_with_rng<R: rand::Rng>(
    pi: &UnitaryIrrep,
    rng: &mut R,
) -> Result<(UnitaryIrrep, CMat), ReprError> {
    let n = pi.dim;
    let w = invariant_form(pi, false, rng)
        .ok_or_else(|| ReprError::TransformFailure("no invariant symmetric form".into()))?;
    // antilinear structure map v ↦ W v̄ squares to +1; its fixed vectors span
    // a real form of the representation space
    let psi = |v: &CVec| -> CVec { &w * v.map(|z| z.conj()) };
    let mut basis: Vec<CVec> = Vec::new();
    let mut attempts = 0;
    while basis.len() < n {
        attempts += 1;
        if attempts > 40 * n {
            return Err(ReprError::TransformFailure(
                "could not complete a real basis".into(),
            ));
        }
        let v = random_complex_vector(rng, n);
        let mut u = &v + psi(&v);
        for b in &basis {
            let c = b.dotc(&u);
            u -= b * c;
        }
        let nu = u.norm();
        if nu > 1e-4 {
            u /= Complex64::new(nu, 0.0);
            // second orthogonalization pass for numerical hygiene
            for b in &basis {
                let c = b.dotc(&u);
                u -= b * c;
            }
            u /= Complex64::new(u.norm(), 0.0);
            basis.push(u);
        }
    }
    let mut q = CMat::zeros(n, n);
    for (k, b) in basis.iter().enumerate() {
        q.set_column(k, b);
    }
    let u = q.adjoint();
    let matrices: Vec<CMat> = pi.matrices.iter().map(|m| &u * m * &q).collect();
    for m in &matrices {
        let im_norm = m.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
        if im_norm > 1e-8 {
            return Err(ReprError::TransformFailure(format!(
                "residual imaginary part {im_norm:.2e} after realification"
            )));
        }
    }
    Ok((
        UnitaryIrrep {
            dim: n,
            matrices,
            ty: IrrepType::Real,
            partner: pi.partner,
        },
        u,
    ))
}

/// Conjugates a quaternionic irrep into Sp(n). Returns the new irrep and the
/// unitary similarity.
pub fn symplectify(pi: &UnitaryIrrep) -> Result<(UnitaryIrrep, CMat), ReprError> {
    if pi.ty != IrrepType::Quaternionic {
        return Err(ReprError::WrongType {
            expected: IrrepType::Quaternionic,
            found: pi.ty,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x59a7);
    symplectify_with_rng(pi, &mut rng)
}

fn symplectify_with_rng<R: rand::Rng>(
    pi: &UnitaryIrrep,
    rng: &mut R,
) -> Result<(UnitaryIrrep, CMat), ReprError> {
    let n = pi.dim;
    if n % 2 != 0 {
        return Err(ReprError::TransformFailure(
            "quaternionic irreps have even dimension".into(),
        ));
    }
    let m = n / 2;
    let w = invariant_form(pi, true, rng)
        .ok_or_else(|| ReprError::TransformFailure("no invariant skew form".into()))?;
    // antilinear structure map v ↦ W v̄ squares to −1; build a basis
    // (v_1..v_m, ψv_1..ψv_m), in which the preserved skew form is standard
    let psi = |v: &CVec| -> CVec { &w * v.map(|z| z.conj()) };
    let mut vs: Vec<CVec> = Vec::new();
    let mut ws: Vec<CVec> = Vec::new();
    let mut attempts = 0;
    while vs.len() < m {
        attempts += 1;
        if attempts > 40 * n {
            return Err(ReprError::TransformFailure(
                "could not complete a quaternionic basis".into(),
            ));
        }
        let mut v = random_complex_vector(rng, n);
        for b in vs.iter().chain(ws.iter()) {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let nv = v.norm();
        if nv < 1e-4 {
            continue;
        }
        v /= Complex64::new(nv, 0.0);
        let mut wv = psi(&v);
        // ψ(v) is orthogonal to everything so far up to roundoff; clean it up
        for b in vs.iter().chain(ws.iter()) {
            let c = b.dotc(&wv);
            wv -= b * c;
        }
        let c = v.dotc(&wv);
        wv -= &v * c;
        wv /= Complex64::new(wv.norm(), 0.0);
        vs.push(v);
        ws.push(wv);
    }
    let mut q = CMat::zeros(n, n);
    for k in 0..m {
        q.set_column(k, &vs[k]);
        q.set_column(m + k, &ws[k]);
    }
    let u = q.adjoint();
    let matrices: Vec<CMat> = pi.matrices.iter().map(|mm| &u * mm * &q).collect();
    let j = standard_j(n);
    for mm in &matrices {
        let resid = frob(&(mm * &j * mm.transpose() * j.transpose() - identity(n)));
        if resid > 1e-8 {
            return Err(ReprError::TransformFailure(format!(
                "symplectic residual {resid:.2e}"
            )));
        }
    }
    Ok((
        UnitaryIrrep {
            dim: n,
            matrices,
            ty: IrrepType::Quaternionic,
            partner: pi.partner,
        },
        u,
    ))
}

/// Matches complex irreps to their conjugates and fills in partner links.
pub fn pair_conjugates(irreps: &mut [UnitaryIrrep]) -> Result<Vec<Vec<usize>>, ReprError> {
    let chars: Vec<Vec<Complex64>> = irreps.iter().map(|p| p.character()).collect();
    let mut pairing: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; irreps.len()];
    for i in 0..irreps.len() {
        if assigned[i] {
            continue;
        }
        match irreps[i].ty {
            IrrepType::Real | IrrepType::Quaternionic => {
                irreps[i].partner = i;
                assigned[i] = true;
                pairing.push(vec![i]);
            }
            IrrepType::Complex => {
                let conj_char: Vec<Complex64> = chars[i].iter().map(|z| z.conj()).collect();
                let j = (0..irreps.len())
                    .filter(|&j| j != i && !assigned[j])
                    .find(|&j| {
                        chars[j]
                            .iter()
                            .zip(&conj_char)
                            .all(|(a, b)| (a - b).norm() < 1e-6)
                    })
                    .ok_or(ReprError::PartnerNotFound(i))?;
                irreps[i].partner = j;
                irreps[j].partner = i;
                assigned[i] = true;
                assigned[j] = true;
                pairing.push(vec![i, j]);
            }
        }
    }
    Ok(pairing)
}

/// Verifies the homomorphism and unitarity invariants of a computed irrep.
pub fn verify_irrep(pi: &UnitaryIrrep, g: &FiniteGroup) -> f64 {
    let mut worst = 0.0f64;
    let n = pi.dim;
    for x in g.elements() {
        let u = &pi.matrices[x];
        worst = worst.max(frob(&(u * u.adjoint() - identity(n))));
        for y in g.elements() {
            let prod = u * &pi.matrices[y];
            worst = worst.max(frob(&(&prod - &pi.matrices[g.mul(x, y)])));
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// disk cache

#[derive(Serialize, Deserialize)]
struct CachedIrrep {
    dim: usize,
    ty: IrrepType,
    partner: usize,
    matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Serialize, Deserialize)]
struct CachedDual {
    irreps: Vec<CachedIrrep>,
    pairing: Vec<Vec<usize>>,
}

pub fn cayley_hash(g: &FiniteGroup) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for &v in g.cayley_row_major() {
        h.update((v as u64).to_le_bytes());
    }
    format!("{:x}", h.finalize())
}

fn mat_to_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn rows_to_mat(rows: &[Vec<[f64; 2]>]) -> CMat {
    let nr = rows.len();
    let nc = rows.first().map(|r| r.len()).unwrap_or(0);
    CMat::from_fn(nr, nc, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]))
}

/// Dual computation with a JSON disk cache keyed by the Cayley table hash
/// and the seed.
pub fn compute_unitary_dual_cached(
    g: &FiniteGroup,
    seed: u64,
    cache_dir: &std::path::Path,
) -> Result<UnitaryDual, ReprError> {
    let key = format!("{}-{}.json", cayley_hash(g), seed);
    let path = cache_dir.join(key);
    if let Ok(data) = std::fs::read_to_string(&path) {
        if let Ok(cached) = serde_json::from_str::<CachedDual>(&data) {
            let irreps = cached
                .irreps
                .into_iter()
                .map(|c| UnitaryIrrep {
                    dim: c.dim,
                    ty: c.ty,
                    partner: c.partner,
                    matrices: c.matrices.iter().map(|m| rows_to_mat(m)).collect(),
                })
                .collect();
            return Ok(UnitaryDual {
                irreps,
                pairing: cached.pairing,
            });
        }
    }
    let dual = compute_unitary_dual(g, seed)?;
    let cached = CachedDual {
        irreps: dual
            .irreps
            .iter()
            .map(|p| CachedIrrep {
                dim: p.dim,
                ty: p.ty,
                partner: p.partner,
                matrices: p.matrices.iter().map(mat_to_rows).collect(),
            })
            .collect(),
        pairing: dual.pairing.clone(),
    };
    std::fs::create_dir_all(cache_dir).map_err(|e| ReprError::CacheIo(e.to_string()))?;
    std::fs::write(&path, serde_json::to_string(&cached).unwrap())
        .map_err(|e| ReprError::CacheIo(e.to_string()))?;
    Ok(dual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;
    use crate::linalg::cone;

    fn dual_of(spec: crate::group::GroupSpec) -> (FiniteGroup, UnitaryDual) {
        let g = spec.build().unwrap();
        let d = compute_unitary_dual(&g, 0).unwrap();
        (g, d)
    }

    #[test]
    fn z4_dual_is_four_characters() {
        let (g, d) = dual_of(catalog::cyclic(4));
        assert_eq!(d.irreps.len(), 4);
        assert!(d.irreps.iter().all(|p| p.dim == 1));
        // the two order-4 characters take value ±i on the generator
        let mut has_i = false;
        for p in &d.irreps {
            let v = p.matrices[1][(0, 0)];
            if (v - Complex64::new(0.0, 1.0)).norm() < 1e-9 {
                has_i = true;
            }
            assert!((v.norm() - 1.0).abs() < 1e-9);
            assert!(verify_irrep(p, &g) < 1e-9);
        }
        assert!(has_i);
    }

    #[test]
    fn s3_dual_dims_and_types() {
        let (g, d) = dual_of(catalog::s3());
        let dims: Vec<usize> = d.irreps.iter().map(|p| p.dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        assert!(d.irreps.iter().all(|p| p.ty == IrrepType::Real));
        for p in &d.irreps {
            assert!(verify_irrep(p, &g) < 1e-8);
            // stored in O(n): imaginary parts vanish
            for m in &p.matrices {
                assert!(m.iter().all(|z| z.im.abs() < 1e-9));
            }
        }
    }

    #[test]
    fn q8_dual_dims_types_and_character() {
        let (g, d) = dual_of(catalog::q8());
        let dims: Vec<usize> = d.irreps.iter().map(|p| p.dim).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 2]);
        let two = &d.irreps[4];
        assert_eq!(two.ty, IrrepType::Quaternionic);
        let chi = two.character_on_classes(&g);
        let mut vals: Vec<f64> = chi.iter().map(|z| z.re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] + 2.0).abs() < 1e-9);
        assert!((vals[4] - 2.0).abs() < 1e-9);
        assert!(vals[1..4].iter().all(|v| v.abs() < 1e-9));
        // symplectified: image lands in SU(2)
        for m in &two.matrices {
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            assert!((det - cone()).norm() < 1e-9);
        }
    }

    #[test]
    fn fs_types_on_z3() {
        let (g, d) = dual_of(catalog::cyclic(3));
        let types: Vec<IrrepType> = d.irreps.iter().map(|p| p.ty).collect();
        assert_eq!(
            types.iter().filter(|&&t| t == IrrepType::Complex).count(),
            2
        );
        assert_eq!(types.iter().filter(|&&t| t == IrrepType::Real).count(), 1);
        // conjugate pair is matched
        let pair = d.pairing.iter().find(|c| c.len() == 2).unwrap();
        let a = &d.irreps[pair[0]];
        let b = &d.irreps[pair[1]];
        for (x, y) in a.character().iter().zip(b.character()) {
            assert!((x.conj() - y).norm() < 1e-9);
        }
        let _ = g;
    }

    #[test]
    fn z5_pairing() {
        let (_, d) = dual_of(catalog::cyclic(5));
        let pairs = d.pairing.iter().filter(|c| c.len() == 2).count();
        let singles = d.pairing.iter().filter(|c| c.len() == 1).count();
        assert_eq!(pairs, 2);
        assert_eq!(singles, 1);
    }

    #[test]
    fn character_table_orthogonality() {
        for spec in [catalog::s4(), catalog::q8(), catalog::a4()] {
            let (g, d) = dual_of(spec);
            let n = g.order() as f64;
            for (i, p) in d.irreps.iter().enumerate() {
                for (j, q) in d.irreps.iter().enumerate() {
                    let chi_p = p.character();
                    let chi_q = q.character();
                    let ip: Complex64 = chi_p
                        .iter()
                        .zip(&chi_q)
                        .map(|(a, b)| a * b.conj())
                        .sum::<Complex64>()
                        / Complex64::new(n, 0.0);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (ip - Complex64::new(expect, 0.0)).norm() < 1e-9,
                        "irreps {i},{j}: {ip}"
                    );
                }
            }
        }
    }

    #[test]
    fn realify_s3_two_dim_from_scrambled_basis() {
        let (g, d) = dual_of(catalog::s3());
        let two = &d.irreps[2];
        // scramble into an arbitrary unitary basis first
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = crate::linalg::random_complex_matrix(&mut rng, 2, 2);
        let qr = (a.clone()).qr();
        let u = qr.q();
        let scrambled = UnitaryIrrep {
            dim: 2,
            matrices: two.matrices.iter().map(|m| &u * m * u.adjoint()).collect(),
            ty: IrrepType::Real,
            partner: two.partner,
        };
        let (r, sim) = realify(&scrambled).unwrap();
        for (m, orig) in r.matrices.iter().zip(&scrambled.matrices) {
            let im: f64 = m.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
            assert!(im < 1e-10, "imaginary residual {im}");
            assert!(frob(&(m * m.transpose() - identity(2))) < 1e-9);
            assert!(frob(&(&sim * orig * sim.adjoint() - m)) < 1e-9);
        }
        assert!(verify_irrep(&r, &g) < 1e-8);
    }

    #[test]
    fn realify_rejects_quaternionic() {
        let (_, d) = dual_of(catalog::q8());
        let two = &d.irreps[4];
        assert!(matches!(
            realify(two),
            Err(ReprError::WrongType { .. })
        ));
        let one = &d.irreps[0];
        assert!(matches!(
            symplectify(one),
            Err(ReprError::WrongType { .. })
        ));
    }

    #[test]
    fn type_tags_match_invariant_bilinear_forms() {
        for spec in [catalog::s3(), catalog::q8(), catalog::cyclic(3)] {
            let (_, d) = dual_of(spec);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for p in &d.irreps {
                let symm = invariant_form(p, false, &mut rng).is_some();
                let skew = invariant_form(p, true, &mut rng).is_some();
                match p.ty {
                    IrrepType::Real => assert!(symm && !skew),
                    IrrepType::Quaternionic => assert!(!symm && skew),
                    IrrepType::Complex => assert!(!symm && !skew),
                }
            }
        }
    }

    #[test]
    fn dual_is_deterministic_for_a_seed() {
        let g = catalog::s3().build().unwrap();
        let d1 = compute_unitary_dual(&g, 42).unwrap();
        let d2 = compute_unitary_dual(&g, 42).unwrap();
        for (p, q) in d1.irreps.iter().zip(&d2.irreps) {
            for (a, b) in p.matrices.iter().zip(&q.matrices) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn cached_dual_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let g = catalog::q8().build().unwrap();
        let d1 = compute_unitary_dual_cached(&g, 0, dir.path()).unwrap();
        let d2 = compute_unitary_dual_cached(&g, 0, dir.path()).unwrap();
        assert_eq!(d1.irreps.len(), d2.irreps.len());
        for (p, q) in d1.irreps.iter().zip(&d2.irreps) {
            assert_eq!(p.ty, q.ty);
            for (a, b) in p.matrices.iter().zip(&q.matrices) {
                assert!(frob(&(a - b)) < 1e-12);
            }
        }
    }
}
