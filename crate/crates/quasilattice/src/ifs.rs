//! The expanding iterated function system g_k(x) = beta*x + z_k, its conjugate
//! contracting systems in the internal planes, and the bound constants that
//! drive candidate enumeration and pruning.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ring::{FieldSpec, Plane, RingElement};

/// A validated expanding system over a field.
///
/// Validation at construction guarantees that `beta` is a unit of the ring
/// with physical modulus greater than one and that every internal-plane image
/// of `beta` has modulus strictly less than one (the Pisot-unit condition that
/// makes the conjugate systems contract), and that the translations are
/// pairwise distinct.
#[derive(Debug)]
pub struct IfsSpec {
    field: Arc<FieldSpec>,
    beta: RingElement,
    beta_inverse: RingElement,
    translations: Vec<RingElement>,
}

/// The conjugate system of one internal plane: exact ring data plus the
/// numerical action on that plane.
#[derive(Debug, Clone)]
pub struct ConjugateIfs {
    plane: usize,
    beta: RingElement,
    translations: Vec<RingElement>,
    beta_value: Complex64,
    translation_values: Vec<Complex64>,
}

/// Radii controlling the pipeline: every cycle of the expanding system lies in
/// the closed physical ball of radius `c`, and the attractor of the conjugate
/// system of plane j lies in the closed ball of radius `c_internal[j]`.
#[derive(Debug, Clone)]
pub struct Bounds {
    pub c: f64,
    pub c_internal: Vec<f64>,
}

/// Build and validate an expanding system. See [`IfsSpec`].
pub fn make_ifs(
    field: &Arc<FieldSpec>,
    beta: RingElement,
    translations: Vec<RingElement>,
) -> Result<Arc<IfsSpec>> {
    if translations.is_empty() {
        return Err(Error::InvalidIfs("translation list is empty".into()));
    }
    for (i, a) in translations.iter().enumerate() {
        for b in &translations[i + 1..] {
            if a == b {
                return Err(Error::InvalidIfs(format!(
                    "duplicate translation {a}"
                )));
            }
        }
    }
    let modulus = field.embed(&beta, Plane::Physical).norm();
    if modulus <= 1.0 {
        return Err(Error::NotPisot(format!(
            "expansion factor {beta} has physical modulus {modulus:.6} <= 1"
        )));
    }
    for j in 0..field.internal_planes() {
        let m = field.embed(&beta, Plane::Internal(j)).norm();
        if m >= 1.0 {
            return Err(Error::NotPisot(format!(
                "conjugate image of {beta} in internal plane {j} has modulus \
                 {m:.6} >= 1"
            )));
        }
    }
    let beta_inverse = field.unit_inverse(&beta)?;
    Ok(Arc::new(IfsSpec {
        field: Arc::clone(field),
        beta,
        beta_inverse,
        translations,
    }))
}

impl IfsSpec {
    /// The underlying field.
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// The expansion factor beta.
    pub fn beta(&self) -> &RingElement {
        &self.beta
    }

    /// The cached exact inverse of beta.
    pub fn beta_inverse(&self) -> &RingElement {
        &self.beta_inverse
    }

    /// The translations z_1, ..., z_m.
    pub fn translations(&self) -> &[RingElement] {
        &self.translations
    }

    /// Number of maps m.
    pub fn map_count(&self) -> usize {
        self.translations.len()
    }

    /// Exact forward map g_k(x) = beta*x + z_k.
    pub fn apply(&self, k: usize, x: &RingElement) -> RingElement {
        &(&self.beta * x) + &self.translations[k]
    }

    /// Exact inverse map g_k^(-1)(y) = (y - z_k) * beta^(-1).
    pub fn apply_inverse(&self, k: usize, y: &RingElement) -> RingElement {
        &(y - &self.translations[k]) * &self.beta_inverse
    }

    /// The conjugate contracting system of internal plane `j`.
    pub fn conjugate_ifs(&self, j: usize) -> Result<ConjugateIfs> {
        let beta = self.field.apply_automorphism(&self.beta, j)?;
        let translations: Result<Vec<RingElement>> = self
            .translations
            .iter()
            .map(|z| self.field.apply_automorphism(z, j))
            .collect();
        let translations = translations?;
        // Numerical coefficients are the internal-plane values of the
        // original coefficients: embedding into plane j already realizes the
        // automorphism, so embedding the conjugated elements there would
        // apply it twice.
        let beta_value = self.field.embed(&self.beta, Plane::Internal(j));
        debug_assert!(beta_value.norm() < 1.0);
        let translation_values = self
            .translations
            .iter()
            .map(|z| self.field.embed(z, Plane::Internal(j)))
            .collect();
        Ok(ConjugateIfs {
            plane: j,
            beta,
            translations,
            beta_value,
            translation_values,
        })
    }
}

impl ConjugateIfs {
    /// The internal plane this system acts on.
    pub fn plane(&self) -> usize {
        self.plane
    }

    /// The exact contracting factor (the automorphism image of beta).
    pub fn beta(&self) -> &RingElement {
        &self.beta
    }

    /// The exact translations (automorphism images of the z_k).
    pub fn translations(&self) -> &[RingElement] {
        &self.translations
    }

    /// Number of maps.
    pub fn map_count(&self) -> usize {
        self.translations.len()
    }

    /// Exact conjugate map g'_k(x) = beta'*x + z'_k on ring elements.
    pub fn apply(&self, k: usize, x: &RingElement) -> RingElement {
        &(&self.beta * x) + &self.translations[k]
    }

    /// Numerical action of g'_k on a point of the internal plane.
    pub fn apply_point(&self, k: usize, w: Complex64) -> Complex64 {
        self.beta_value * w + self.translation_values[k]
    }

    /// Numerical contraction factor of the plane.
    pub fn contraction(&self) -> Complex64 {
        self.beta_value
    }

    /// Numerical fixed point of g'_k, z'_k / (1 - beta').
    pub fn fixed_point_value(&self, k: usize) -> Complex64 {
        self.translation_values[k] / (Complex64::new(1.0, 0.0) - self.beta_value)
    }
}

/// Compute the cycle radius c = max_k |z_k| / (|beta| - 1) and the attractor
/// radii c_j = max_k |z'_k| / (1 - |beta'_j|), all moduli taken in the
/// respective planes.
pub fn compute_bounds(ifs: &IfsSpec) -> Bounds {
    let field = ifs.field();
    let beta_mod = field.embed(ifs.beta(), Plane::Physical).norm();
    let max_z = ifs
        .translations()
        .iter()
        .map(|z| field.embed(z, Plane::Physical).norm())
        .fold(0.0, f64::max);
    let c = max_z / (beta_mod - 1.0);

    let c_internal = (0..field.internal_planes())
        .map(|j| {
            let beta_j = field.embed(ifs.beta(), Plane::Internal(j)).norm();
            let max_zj = ifs
                .translations()
                .iter()
                .map(|z| field.embed(z, Plane::Internal(j)).norm())
                .fold(0.0, f64::max);
            max_zj / (1.0 - beta_j)
        })
        .collect();

    Bounds { c, c_internal }
}
