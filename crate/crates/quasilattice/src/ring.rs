//! Exact arithmetic in a ring of algebraic integers, its Galois automorphisms,
//! and the numerical embeddings into the physical and internal planes.
//!
//! Two field modes are supported:
//!
//! * **Cyclotomic**: the ring Z[z] with z = exp(2*pi*i/n), represented over the
//!   power basis 1, z, ..., z^(d-1) where d = phi(n), reduced modulo the n-th
//!   cyclotomic polynomial. The power basis is always a Z-basis, unlike the set
//!   of totient powers z^m (gcd(m, n) = 1), which is linearly dependent for
//!   n = 8; a conversion helper is provided for fields where the totient powers
//!   do form a basis (such as n = 5).
//! * **Complex Pisot**: the ring Z[b] for a complex Pisot unit b given by its
//!   monic integer minimal polynomial, represented over 1, b, ..., b^(d-1).
//!
//! All set logic elsewhere in the crate operates on exact integer coordinates;
//! floating-point embeddings are used only for modulus comparisons, so rounding
//! can never corrupt point identity.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when classifying roots of a minimal polynomial.
const ROOT_EPS: f64 = 1e-8;

/// Which plane an element is embedded into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    /// The plane the point pattern lives in (evaluation at the defining root).
    Physical,
    /// One of the conjugate planes, indexed from 0 to q-1.
    Internal(usize),
}

/// Construction descriptor for [`FieldSpec`]. Serializable so exported JSON
/// documents can embed enough information to rebuild the field exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum FieldDescriptor {
    /// Z[exp(2*pi*i/n)] over the power basis.
    Cyclotomic { n: u32 },
    /// Z[b] for the complex Pisot unit b with the given minimal polynomial,
    /// coefficients listed from the constant term up to the (monic) leading 1.
    ComplexPisot { min_poly: Vec<i64> },
}

/// The numerical realization of the field: one 2 x d matrix per plane, stored
/// column-wise as complex numbers (each column is the embedding of a basis
/// element), plus the automorphism exponents for cyclotomic fields.
#[derive(Debug, Clone)]
pub struct EmbeddingSet {
    physical: Vec<Complex64>,
    internal: Vec<Vec<Complex64>>,
    exponents: Vec<u32>,
}

impl EmbeddingSet {
    /// The physical 2 x d embedding matrix, column major ([re, im] per column).
    pub fn physical_matrix(&self) -> Vec<[f64; 2]> {
        self.physical.iter().map(|c| [c.re, c.im]).collect()
    }

    /// The 2 x d matrix of internal plane `j`, column major.
    pub fn internal_matrix(&self, j: usize) -> Vec<[f64; 2]> {
        self.internal[j].iter().map(|c| [c.re, c.im]).collect()
    }

    /// For cyclotomic fields, the exponent l_j with sigma_j(z) = z^(l_j) for
    /// each internal plane; empty in complex-Pisot mode.
    pub fn automorphism_exponents(&self) -> &[u32] {
        &self.exponents
    }
}

/// An exact-arithmetic field context. Create one with [`FieldSpec::cyclotomic`]
/// or [`FieldSpec::complex_pisot`] and share it via `Arc`; every ring element
/// holds a handle to its field.
#[derive(Debug)]
pub struct FieldSpec {
    descriptor: FieldDescriptor,
    /// Degree of the field / length of coordinate vectors.
    degree: usize,
    /// Monic modulus polynomial (cyclotomic polynomial or minimal polynomial),
    /// coefficients from constant term to leading 1, length degree + 1.
    modulus: Vec<i64>,
    /// For cyclotomic mode, the order n; 0 in complex mode.
    order: u32,
    embeddings: EmbeddingSet,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
    }
}
impl Eq for FieldSpec {}

impl FieldSpec {
    /// Build the cyclotomic field Z[exp(2*pi*i/n)].
    ///
    /// Requires n >= 3 and at least one internal plane, i.e. at least one
    /// Galois automorphism class beyond identity and complex conjugation
    /// (n = 3, 4, 6 have quadratic cyclotomic fields and are rejected).
    pub fn cyclotomic(n: u32) -> Result<Arc<FieldSpec>> {
        if n < 3 {
            return Err(Error::UnsupportedField(format!(
                "cyclotomic order must be at least 3, got {n}"
            )));
        }
        let modulus = cyclotomic_polynomial(n);
        let degree = modulus.len() - 1;

        // One internal plane per class {l, n-l} of automorphisms other than
        // the identity (l = 1) and complex conjugation (l = n-1).
        let mut exponents: Vec<u32> = (2..=(n / 2))
            .filter(|&l| gcd(l, n) == 1)
            .collect();
        exponents.sort_unstable();
        if exponents.is_empty() {
            return Err(Error::UnsupportedField(format!(
                "cyclotomic({n}) has no internal plane; its only embeddings are \
                 identity and conjugation"
            )));
        }

        let root = |k: u32| -> Complex64 {
            let angle = 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(n);
            Complex64::new(angle.cos(), angle.sin())
        };
        let columns = |l: u32| -> Vec<Complex64> {
            (0..degree).map(|k| root((l * k as u32) % n)).collect()
        };
        let embeddings = EmbeddingSet {
            physical: columns(1),
            internal: exponents.iter().map(|&l| columns(l)).collect(),
            exponents,
        };

        Ok(Arc::new(FieldSpec {
            descriptor: FieldDescriptor::Cyclotomic { n },
            degree,
            modulus,
            order: n,
            embeddings,
        }))
    }

    /// Build Z[b] for a complex Pisot unit b.
    ///
    /// `min_poly` lists integer coefficients from the constant term up to the
    /// leading term, which must be 1 (monic). The constant term must be +-1 so
    /// that b is a unit, and the roots must consist of exactly one complex
    /// conjugate pair of modulus > 1 with every remaining root of modulus < 1,
    /// grouped into conjugate pairs (one internal plane per contracting pair).
    pub fn complex_pisot(min_poly: &[i64]) -> Result<Arc<FieldSpec>> {
        if min_poly.len() < 3 {
            return Err(Error::UnsupportedField(
                "minimal polynomial must have degree at least 2".into(),
            ));
        }
        if *min_poly.last().unwrap() != 1 {
            return Err(Error::UnsupportedField(
                "minimal polynomial must be monic with leading coefficient 1".into(),
            ));
        }
        if min_poly[0].abs() != 1 {
            return Err(Error::NotAUnit(format!(
                "constant term {} of the minimal polynomial is not +-1",
                min_poly[0]
            )));
        }
        let degree = min_poly.len() - 1;
        let roots = polynomial_roots(min_poly);

        let mut expanding: Vec<Complex64> = Vec::new();
        let mut contracting: Vec<Complex64> = Vec::new();
        for &r in &roots {
            let m = r.norm();
            if (m - 1.0).abs() <= ROOT_EPS {
                return Err(Error::NotPisot(format!(
                    "root {r} lies on the unit circle"
                )));
            }
            if m > 1.0 {
                expanding.push(r);
            } else {
                contracting.push(r);
            }
        }
        let dominant = roots
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("degree >= 2 guarantees roots");
        if dominant.im.abs() <= ROOT_EPS {
            return Err(Error::NotPisot(
                "the dominant root is real; real Pisot units are handled through \
                 the cyclotomic mode (choose a cyclotomic order and express the \
                 unit in powers of z)"
                    .into(),
            ));
        }
        if expanding.len() != 2 {
            return Err(Error::NotPisot(format!(
                "expected exactly one expanding conjugate root pair, found {} \
                 expanding roots",
                expanding.len()
            )));
        }
        let physical_root = pick_conjugate_pair(&mut expanding).ok_or_else(|| {
            Error::NotPisot("expanding roots do not form a conjugate pair".into())
        })?;

        let mut internal_roots = Vec::new();
        while !contracting.is_empty() {
            if contracting[0].im.abs() <= ROOT_EPS {
                return Err(Error::UnsupportedField(
                    "a contracting root is real; only complex-conjugate internal \
                     planes are supported"
                        .into(),
                ));
            }
            let rep = pick_conjugate_pair(&mut contracting).ok_or_else(|| {
                Error::UnsupportedField(
                    "contracting roots do not form conjugate pairs".into(),
                )
            })?;
            internal_roots.push(rep);
        }
        if internal_roots.is_empty() {
            return Err(Error::UnsupportedField(
                "the unit has no contracting conjugate pair, so there is no \
                 internal plane"
                    .into(),
            ));
        }
        internal_roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()));

        let columns = |root: Complex64| -> Vec<Complex64> {
            let mut cols = Vec::with_capacity(degree);
            let mut p = Complex64::new(1.0, 0.0);
            for _ in 0..degree {
                cols.push(p);
                p *= root;
            }
            cols
        };
        let embeddings = EmbeddingSet {
            physical: columns(physical_root),
            internal: internal_roots.iter().map(|&r| columns(r)).collect(),
            exponents: Vec::new(),
        };

        Ok(Arc::new(FieldSpec {
            descriptor: FieldDescriptor::ComplexPisot {
                min_poly: min_poly.to_vec(),
            },
            degree,
            modulus: min_poly.to_vec(),
            order: 0,
            embeddings,
        }))
    }

    /// Build a field from its serializable descriptor.
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Arc<FieldSpec>> {
        match desc {
            FieldDescriptor::Cyclotomic { n } => FieldSpec::cyclotomic(*n),
            FieldDescriptor::ComplexPisot { min_poly } => {
                FieldSpec::complex_pisot(min_poly)
            }
        }
    }

    /// The serializable construction descriptor.
    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    /// Degree of the field (length of every coordinate vector).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of internal planes q (at least 1).
    pub fn internal_planes(&self) -> usize {
        self.embeddings.internal.len()
    }

    /// For cyclotomic fields, the order n of the root of unity.
    pub fn cyclotomic_order(&self) -> Option<u32> {
        (self.order != 0).then_some(self.order)
    }

    /// The numerical embedding matrices.
    pub fn embeddings(&self) -> &EmbeddingSet {
        &self.embeddings
    }

    fn same_field(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || self.descriptor == other.descriptor
    }

    /// The zero element.
    pub fn zero(self: &Arc<Self>) -> RingElement {
        RingElement {
            field: Arc::clone(self),
            coords: vec![0; self.degree],
        }
    }

    /// The multiplicative identity.
    pub fn one(self: &Arc<Self>) -> RingElement {
        self.integer(1)
    }

    /// The rational integer c as a ring element.
    pub fn integer(self: &Arc<Self>, c: i64) -> RingElement {
        let mut coords = vec![0; self.degree];
        coords[0] = c;
        RingElement {
            field: Arc::clone(self),
            coords,
        }
    }

    /// The basis generator: z (cyclotomic) or b (complex mode).
    pub fn generator(self: &Arc<Self>) -> RingElement {
        self.generator_pow(1)
    }

    /// z^k (cyclotomic, exponent taken modulo n) or b^k (complex mode).
    pub fn generator_pow(self: &Arc<Self>, k: u32) -> RingElement {
        let k = if self.order != 0 { k % self.order } else { k };
        let mut poly = vec![0i64; k as usize + 1];
        poly[k as usize] = 1;
        self.reduce(&poly)
    }

    /// Reduce an integer polynomial in the generator (coefficients from the
    /// constant term up, any length) to canonical coordinates.
    pub fn reduce(self: &Arc<Self>, poly: &[i64]) -> RingElement {
        let wide: Vec<i128> = poly.iter().map(|&c| i128::from(c)).collect();
        let coords = self.reduce_wide(wide);
        RingElement {
            field: Arc::clone(self),
            coords,
        }
    }

    /// Build an element directly from canonical coordinates (length must equal
    /// the field degree).
    pub fn from_coords(self: &Arc<Self>, coords: &[i64]) -> Result<RingElement> {
        if coords.len() != self.degree {
            return Err(Error::Format(format!(
                "coordinate vector of length {} for a field of degree {}",
                coords.len(),
                self.degree
            )));
        }
        Ok(RingElement {
            field: Arc::clone(self),
            coords: coords.to_vec(),
        })
    }

    /// Polynomial remainder modulo the field's monic modulus, in i128 to leave
    /// comfortable headroom, narrowed at the end.
    fn reduce_wide(&self, mut poly: Vec<i128>) -> Vec<i64> {
        let d = self.degree;
        while poly.len() > d {
            let top = poly.len() - 1;
            let c = poly[top];
            if c != 0 {
                // Subtract c * x^(top-d) * modulus (monic, so the top cancels).
                for (i, &m) in self.modulus.iter().enumerate() {
                    poly[top - d + i] -= c * i128::from(m);
                }
            }
            debug_assert_eq!(poly[top], 0);
            poly.pop();
        }
        poly.resize(d, 0);
        poly.iter()
            .map(|&c| i64::try_from(c).expect("coordinate overflow during reduction"))
            .collect()
    }

    /// Exact image of `x` under the Galois automorphism of internal plane `j`.
    ///
    /// Cyclotomic mode maps z to z^(l_j). In complex mode conjugation is
    /// realized by evaluating the same coordinates at the conjugate root, so
    /// the coordinate vector is returned unchanged.
    pub fn apply_automorphism(self: &Arc<Self>, x: &RingElement, j: usize) -> Result<RingElement> {
        if !self.same_field(&x.field) {
            return Err(Error::FieldMismatch);
        }
        if j >= self.internal_planes() {
            return Err(Error::InvalidAutomorphism(format!(
                "internal plane {j} out of range (q = {})",
                self.internal_planes()
            )));
        }
        if self.order == 0 {
            return Ok(x.clone());
        }
        self.apply_exponent(x, self.embeddings.exponents[j])
    }

    /// Exact image of `x` under sigma_l : z -> z^l (cyclotomic mode only;
    /// l must be coprime to n).
    pub fn apply_exponent(self: &Arc<Self>, x: &RingElement, l: u32) -> Result<RingElement> {
        if self.order == 0 {
            return Err(Error::InvalidAutomorphism(
                "exponent automorphisms exist only in cyclotomic mode".into(),
            ));
        }
        if !self.same_field(&x.field) {
            return Err(Error::FieldMismatch);
        }
        let n = self.order;
        if gcd(l % n, n) != 1 {
            return Err(Error::InvalidAutomorphism(format!(
                "exponent {l} is not coprime to {n}"
            )));
        }
        let mut poly = vec![0i128; n as usize];
        for (k, &c) in x.coords.iter().enumerate() {
            poly[(k as u32 * l % n) as usize] += i128::from(c);
        }
        let coords = self.reduce_wide(poly);
        Ok(RingElement {
            field: Arc::clone(self),
            coords,
        })
    }

    /// Floating-point evaluation of `x` in the chosen plane.
    pub fn embed(&self, x: &RingElement, plane: Plane) -> Complex64 {
        let cols = match plane {
            Plane::Physical => &self.embeddings.physical,
            Plane::Internal(j) => &self.embeddings.internal[j],
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, col) in x.coords.iter().zip(cols) {
            acc += Complex64::new(*c as f64, 0.0) * col;
        }
        acc
    }

    /// The d x d integer matrix of multiplication by `u` over the basis
    /// (column k holds the coordinates of u * basis_k).
    pub fn multiplication_matrix(self: &Arc<Self>, u: &RingElement) -> Vec<Vec<i64>> {
        (0..self.degree)
            .map(|k| {
                let mut poly = vec![0i64; k + 1];
                poly[k] = 1;
                let basis_k = self.reduce(&poly);
                u.try_mul(&basis_k).expect("same field by construction").coords
            })
            .collect()
    }

    /// Whether `u` is a unit of the ring (multiplication matrix determinant +-1).
    pub fn is_unit(self: &Arc<Self>, u: &RingElement) -> bool {
        let m = self.multiplication_matrix(u);
        let det = bareiss_determinant(&m);
        det == 1 || det == -1
    }

    /// The inverse of a unit, computed by solving the integer linear system of
    /// the multiplication matrix (determinant +-1 guarantees an integer
    /// solution); the product is verified to be exactly 1.
    pub fn unit_inverse(self: &Arc<Self>, u: &RingElement) -> Result<RingElement> {
        if !self.same_field(&u.field) {
            return Err(Error::FieldMismatch);
        }
        let m = self.multiplication_matrix(u);
        let det = bareiss_determinant(&m);
        if det != 1 && det != -1 {
            return Err(Error::NotAUnit(format!(
                "{u} has multiplication determinant {det}"
            )));
        }
        let mut rhs = vec![0i64; self.degree];
        rhs[0] = 1;
        let coords = cramer_solve(&m, &rhs, det);
        let inv = RingElement {
            field: Arc::clone(self),
            coords,
        };
        debug_assert_eq!(u.try_mul(&inv).unwrap(), self.one());
        Ok(inv)
    }

    /// Coordinates of `x` over the totient-power basis z^(m_1), ..., z^(m_d)
    /// (exponents coprime to n, ascending). Only available when those powers
    /// actually form a Z-basis; for n = 8 they are linearly dependent
    /// (z^5 = -z) and this returns `UnsupportedField`.
    pub fn totient_coords(self: &Arc<Self>, x: &RingElement) -> Result<Vec<i64>> {
        let (matrix, det) = self.totient_matrix()?;
        Ok(cramer_solve(&matrix, &x.coords, det))
    }

    /// Inverse of [`FieldSpec::totient_coords`].
    pub fn from_totient_coords(self: &Arc<Self>, coords: &[i64]) -> Result<RingElement> {
        let n = self.order;
        if n == 0 {
            return Err(Error::UnsupportedField(
                "totient basis exists only in cyclotomic mode".into(),
            ));
        }
        let totients: Vec<u32> = (1..n).filter(|&m| gcd(m, n) == 1).collect();
        if coords.len() != totients.len() {
            return Err(Error::Format(format!(
                "expected {} totient coordinates, got {}",
                totients.len(),
                coords.len()
            )));
        }
        let mut acc = self.zero();
        for (&c, &m) in coords.iter().zip(&totients) {
            let term = self.generator_pow(m).scale(c);
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    fn totient_matrix(self: &Arc<Self>) -> Result<(Vec<Vec<i64>>, i128)> {
        let n = self.order;
        if n == 0 {
            return Err(Error::UnsupportedField(
                "totient basis exists only in cyclotomic mode".into(),
            ));
        }
        let matrix: Vec<Vec<i64>> = (1..n)
            .filter(|&m| gcd(m, n) == 1)
            .map(|m| self.generator_pow(m).coords)
            .collect();
        let det = bareiss_determinant(&matrix);
        if det != 1 && det != -1 {
            return Err(Error::UnsupportedField(format!(
                "the totient powers of z are not a Z-basis for n = {n} \
                 (transition determinant {det})"
            )));
        }
        Ok((matrix, det))
    }
}

/// An exact element of the field, held as integer coordinates over the basis.
///
/// The representation is canonical (fully reduced), so coordinate equality is
/// ring equality. Elements are immutable; arithmetic returns new values.
/// The `+`, `-`, `*` operators panic on a field mismatch — use [`RingElement::try_add`]
/// and [`RingElement::try_mul`] when mixing elements of unknown origin.
#[derive(Debug, Clone)]
pub struct RingElement {
    field: Arc<FieldSpec>,
    coords: Vec<i64>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.coords == other.coords
    }
}
impl Eq for RingElement {}

impl std::hash::Hash for RingElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl RingElement {
    /// Canonical coordinates over the field basis.
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Field handle.
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// Exact sum; fails on elements of different fields.
    pub fn try_add(&self, other: &RingElement) -> Result<RingElement> {
        if !self.field.same_field(&other.field) {
            return Err(Error::FieldMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_add(*b).expect("coordinate overflow in add"))
            .collect();
        Ok(RingElement {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    /// Exact difference; fails on elements of different fields.
    pub fn try_sub(&self, other: &RingElement) -> Result<RingElement> {
        self.try_add(&other.neg())
    }

    /// Exact product, reduced to canonical form; fails on field mismatch.
    pub fn try_mul(&self, other: &RingElement) -> Result<RingElement> {
        if !self.field.same_field(&other.field) {
            return Err(Error::FieldMismatch);
        }
        let d = self.field.degree;
        let mut prod = vec![0i128; 2 * d - 1];
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coords.iter().enumerate() {
                prod[i + j] += i128::from(a) * i128::from(b);
            }
        }
        let coords = self.field.reduce_wide(prod);
        Ok(RingElement {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    /// Additive inverse.
    pub fn neg(&self) -> RingElement {
        RingElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|&c| -c).collect(),
        }
    }

    /// Multiplication by a rational integer.
    pub fn scale(&self, c: i64) -> RingElement {
        RingElement {
            field: Arc::clone(&self.field),
            coords: self
                .coords
                .iter()
                .map(|&a| a.checked_mul(c).expect("coordinate overflow in scale"))
                .collect(),
        }
    }

    /// Exact k-th power by repeated multiplication.
    pub fn pow(&self, k: u32) -> RingElement {
        let mut acc = self.field.one();
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same field");
        }
        acc
    }

    /// True if every coordinate is zero.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Shorthand for the physical-plane embedding.
    pub fn physical(&self) -> Complex64 {
        self.field.embed(self, Plane::Physical)
    }

    /// Shorthand for the internal-plane embedding.
    pub fn internal(&self, j: usize) -> Complex64 {
        self.field.embed(self, Plane::Internal(j))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbol = match self.field.descriptor {
            FieldDescriptor::Cyclotomic { .. } => 'z',
            FieldDescriptor::ComplexPisot { .. } => 'b',
        };
        let mut wrote = false;
        for (k, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if wrote {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "{symbol}")?;
                    } else {
                        write!(f, "{symbol}^{k}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl std::ops::Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.try_add(rhs).expect("field mismatch in +")
    }
}
impl std::ops::Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.try_sub(rhs).expect("field mismatch in -")
    }
}
impl std::ops::Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.try_mul(rhs).expect("field mismatch in *")
    }
}
impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::neg(self)
    }
}

/// Greatest common divisor.
fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The n-th cyclotomic polynomial, computed exactly by dividing x^n - 1 by the
/// cyclotomic polynomials of the proper divisors of n.
fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let mut result = num;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            result = poly_div_exact(&result, &phi_d);
        }
    }
    result
}

/// Exact division of integer polynomials (the divisor must divide evenly and
/// be monic up to sign of its leading coefficient).
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem: Vec<i128> = num.iter().map(|&c| i128::from(c)).collect();
    let dn = den.len() - 1;
    let lead = i128::from(den[dn]);
    let mut quot = vec![0i128; rem.len() - dn];
    for k in (dn..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        debug_assert_eq!(c % lead, 0);
        let q = c / lead;
        quot[k - dn] = q;
        for (i, &dc) in den.iter().enumerate() {
            rem[k - dn + i] -= q * i128::from(dc);
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot.iter()
        .map(|&c| i64::try_from(c).expect("overflow in polynomial division"))
        .collect()
}

/// All complex roots of a monic integer polynomial via the companion matrix,
/// polished with a few Newton steps.
fn polynomial_roots(poly: &[i64]) -> Vec<Complex64> {
    let d = poly.len() - 1;
    let mut companion = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        companion[(i, d - 1)] = -(poly[i] as f64);
    }
    let eigen = companion.complex_eigenvalues();
    eigen
        .iter()
        .map(|&r| {
            let mut x = Complex64::new(r.re, r.im);
            for _ in 0..3 {
                let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                for &c in poly.iter().rev() {
                    dp = dp * x + p;
                    p = p * x + Complex64::new(c as f64, 0.0);
                }
                if dp.norm() > 1e-14 {
                    x -= p / dp;
                }
            }
            x
        })
        .collect()
}

/// Remove one conjugate pair from `roots`, returning the representative with
/// positive imaginary part; `None` if no matching conjugate exists.
fn pick_conjugate_pair(roots: &mut Vec<Complex64>) -> Option<Complex64> {
    let first = roots[0];
    let partner = roots
        .iter()
        .skip(1)
        .position(|&s| (s - first.conj()).norm() <= 1e-6)?
        + 1;
    roots.remove(partner);
    roots.remove(0);
    Some(if first.im > 0.0 { first } else { first.conj() })
}

/// Exact determinant of a small integer matrix (columns as inner vectors)
/// using Bareiss fraction-free elimination in i128.
pub(crate) fn bareiss_determinant(columns: &[Vec<i64>]) -> i128 {
    let n = columns.len();
    let mut m: Vec<Vec<i128>> = (0..n)
        .map(|r| (0..n).map(|c| i128::from(columns[c][r])).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Solve M v = rhs for integer v when det(M) = +-1, by Cramer's rule with
/// exact Bareiss determinants. `columns` holds the matrix column-wise.
pub(crate) fn cramer_solve(columns: &[Vec<i64>], rhs: &[i64], det: i128) -> Vec<i64> {
    debug_assert!(det == 1 || det == -1);
    let n = columns.len();
    (0..n)
        .map(|i| {
            let mut cols = columns.to_vec();
            cols[i] = rhs.to_vec();
            let di = bareiss_determinant(&cols);
            i64::try_from(di / det).expect("overflow in integer solve")
        })
        .collect()
}
