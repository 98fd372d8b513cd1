//! Fourier transform on L²(G) for finite G: transform, inversion, central
//! splitting, and translation identities.

use crate::group::FiniteGroup;
use crate::linalg::{frob, trace_prod, CMat};
use crate::repr::UnitaryDual;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FourierError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A complex-valued function on the group, indexed by element.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    pub values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn zeros(n: usize) -> Self {
        GroupFunction {
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        GroupFunction {
            values: vec![c; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &GroupFunction) -> GroupFunction {
        GroupFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &GroupFunction) -> GroupFunction {
        GroupFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> GroupFunction {
        GroupFunction {
            values: self.values.iter().map(|a| a * c).collect(),
        }
    }

    /// Trace form f(x) = tr(L π(x)) for a coefficient matrix L.
    pub fn trace_form(l: &CMat, matrices: &[CMat]) -> GroupFunction {
        GroupFunction {
            values: matrices.iter().map(|m| trace_prod(l, m)).collect(),
        }
    }
}

/// Per-irrep coefficient matrices f̂(π).
#[derive(Debug, Clone)]
pub struct FourierCoefficients {
    pub coeffs: Vec<CMat>,
}

impl FourierCoefficients {
    /// Indices of irreps with coefficient norm above the scale-aware cutoff.
    pub fn support(&self, f_norm: f64) -> Vec<usize> {
        let cutoff = 1e-8 * f_norm.max(1.0);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| frob(c) > cutoff)
            .map(|(i, _)| i)
            .collect()
    }
}

/// f̂(π) = (d_π/|G|) Σ_x f(x) π(x)⁻¹.
pub fn transform(
    f: &GroupFunction,
    g: &FiniteGroup,
    dual: &UnitaryDual,
) -> Result<FourierCoefficients, FourierError> {
    if f.len() != g.order() {
        return Err(FourierError::DimensionMismatch(format!(
            "function has {} values for a group of order {}",
            f.len(),
            g.order()
        )));
    }
    let n = g.order() as f64;
    let mut coeffs = Vec::with_capacity(dual.irreps.len());
    for pi in &dual.irreps {
        let mut c = CMat::zeros(pi.dim, pi.dim);
        for x in g.elements() {
            c += &pi.matrices[g.inv(x)] * f.values[x];
        }
        c *= Complex64::new(pi.dim as f64 / n, 0.0);
        coeffs.push(c);
    }
    Ok(FourierCoefficients { coeffs })
}

/// f(x) = Σ_π tr(f̂(π) π(x)).
pub fn inverse_transform(
    coeffs: &FourierCoefficients,
    g: &FiniteGroup,
    dual: &UnitaryDual,
) -> Result<GroupFunction, FourierError> {
    if coeffs.coeffs.len() != dual.irreps.len() {
        return Err(FourierError::DimensionMismatch(format!(
            "{} coefficient matrices for {} irreps",
            coeffs.coeffs.len(),
            dual.irreps.len()
        )));
    }
    for (c, pi) in coeffs.coeffs.iter().zip(&dual.irreps) {
        if c.nrows() != pi.dim || c.ncols() != pi.dim {
            return Err(FourierError::DimensionMismatch(format!(
                "coefficient is {}x{} for an irrep of dimension {}",
                c.nrows(),
                c.ncols(),
                pi.dim
            )));
        }
    }
    let mut f = GroupFunction::zeros(g.order());
    for (c, pi) in coeffs.coeffs.iter().zip(&dual.irreps) {
        for x in g.elements() {
            f.values[x] += trace_prod(c, &pi.matrices[x]);
        }
    }
    Ok(f)
}

/// Splits f into its central part (scalar coefficient matrices) and the
/// orthogonal part (traceless coefficient matrices).
pub fn central_split(
    f: &GroupFunction,
    g: &FiniteGroup,
    dual: &UnitaryDual,
) -> Result<(GroupFunction, GroupFunction), FourierError> {
    let coeffs = transform(f, g, dual)?;
    let mut central = Vec::new();
    let mut ortho = Vec::new();
    for (c, pi) in coeffs.coeffs.iter().zip(&dual.irreps) {
        let d = pi.dim as f64;
        let scalar = c.trace() / Complex64::new(d, 0.0);
        let sc = CMat::identity(pi.dim, pi.dim) * scalar;
        ortho.push(c - &sc);
        central.push(sc);
    }
    let fc = inverse_transform(&FourierCoefficients { coeffs: central }, g, dual)?;
    let fo = inverse_transform(&FourierCoefficients { coeffs: ortho }, g, dual)?;
    Ok((fc, fo))
}

/// Central projection of f (the first component of `central_split`).
pub fn central_part(
    f: &GroupFunction,
    g: &FiniteGroup,
    dual: &UnitaryDual,
) -> Result<GroupFunction, FourierError> {
    central_split(f, g, dual).map(|(c, _)| c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Left translation (L_y f)(x) = f(y⁻¹ x); right translation (R_y f)(x) = f(x y).
pub fn translate(f: &GroupFunction, g: &FiniteGroup, y: usize, side: Side) -> GroupFunction {
    let values = g
        .elements()
        .map(|x| match side {
            Side::Left => f.values[g.mul(g.inv(y), x)],
            Side::Right => f.values[g.mul(x, y)],
        })
        .collect();
    GroupFunction { values }
}

/// Restriction of f to the Fourier support inside one dual class:
/// f^ϖ(x) = Σ_{[π]∈ϖ} tr(f̂(π) π(x)).
pub fn truncate_to_class(
    f: &GroupFunction,
    g: &FiniteGroup,
    dual: &UnitaryDual,
    class: usize,
) -> Result<GroupFunction, FourierError> {
    let coeffs = transform(f, g, dual)?;
    let keep = &dual.pairing[class];
    let masked: Vec<CMat> = coeffs
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if keep.contains(&i) {
                c.clone()
            } else {
                CMat::zeros(c.nrows(), c.ncols())
            }
        })
        .collect();
    inverse_transform(&FourierCoefficients { coeffs: masked }, g, dual)
}

/// Plancherel defect: |Σ_x |f(x)|²/|G| − Σ_π ‖f̂(π)‖²_F/d_π|.
pub fn plancherel_defect(
    f: &GroupFunction,
    g: &FiniteGroup,
    dual: &UnitaryDual,
) -> Result<f64, FourierError> {
    let coeffs = transform(f, g, dual)?;
    let lhs = f.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / g.order() as f64;
    let rhs: f64 = coeffs
        .coeffs
        .iter()
        .zip(&dual.irreps)
        .map(|(c, pi)| frob(c).powi(2) / pi.dim as f64)
        .sum();
    Ok((lhs - rhs).abs())
}
