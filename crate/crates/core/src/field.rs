//! Field abstraction shared by the prime-field and number-field planes, and
//! the homogeneous-coordinate primitives that only need field operations.

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("element is not invertible modulo the defining polynomial")]
    NotInvertible,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjError {
    #[error("all three coordinates are zero")]
    ZeroVector,
    #[error("meet of a line with itself")]
    EqualLines,
    #[error("join of a point with itself")]
    EqualPoints,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A field given by a runtime context (the modulus, the minimal polynomial).
///
/// Elements carry no reference to their field; every operation goes through
/// the context so that elements stay plain values.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Short human-readable description, used in reports and file headers.
    fn describe(&self) -> String;
}

/// Homogeneous coordinate triple, normalized so the first nonzero entry is 1.
///
/// By duality the same triple names a line or a point; which one is meant is
/// fixed by the operation that consumes it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjTriple<E> {
    coords: [E; 3],
}

impl<E: Clone> ProjTriple<E> {
    /// Caller guarantees the coordinates are already normalized.
    pub(crate) fn new_unchecked(coords: [E; 3]) -> Self {
        ProjTriple { coords }
    }

    pub fn coords(&self) -> &[E; 3] {
        &self.coords
    }

    pub fn into_coords(self) -> [E; 3] {
        self.coords
    }
}

pub fn normalize<F: Field>(field: &F, raw: [F::Elem; 3]) -> Result<ProjTriple<F::Elem>, ProjError> {
    let lead = raw
        .iter()
        .find(|c| !field.is_zero(c))
        .ok_or(ProjError::ZeroVector)?;
    if *lead == field.one() {
        return Ok(ProjTriple { coords: raw });
    }
    let s = field.inv(lead)?;
    let [a, b, c] = raw;
    Ok(ProjTriple {
        coords: [field.mul(&a, &s), field.mul(&b, &s), field.mul(&c, &s)],
    })
}

pub fn dot<F: Field>(field: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> F::Elem {
    let s = field.add(&field.mul(&a[0], &b[0]), &field.mul(&a[1], &b[1]));
    field.add(&s, &field.mul(&a[2], &b[2]))
}

pub fn cross<F: Field>(field: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> [F::Elem; 3] {
    let m = |x: &F::Elem, y: &F::Elem, z: &F::Elem, w: &F::Elem| {
        field.sub(&field.mul(x, y), &field.mul(z, w))
    };
    [
        m(&a[1], &b[2], &a[2], &b[1]),
        m(&a[2], &b[0], &a[0], &b[2]),
        m(&a[0], &b[1], &a[1], &b[0]),
    ]
}

pub fn det3<F: Field>(
    field: &F,
    a: &[F::Elem; 3],
    b: &[F::Elem; 3],
    c: &[F::Elem; 3],
) -> F::Elem {
    dot(field, a, &cross(field, b, c))
}

/// Intersection point of two distinct lines.
pub fn meet<F: Field>(
    field: &F,
    l1: &ProjTriple<F::Elem>,
    l2: &ProjTriple<F::Elem>,
) -> Result<ProjTriple<F::Elem>, ProjError> {
    if l1 == l2 {
        return Err(ProjError::EqualLines);
    }
    normalize(field, cross(field, &l1.coords, &l2.coords))
}

/// Line through two distinct points; the dual of [`meet`].
pub fn join<F: Field>(
    field: &F,
    p1: &ProjTriple<F::Elem>,
    p2: &ProjTriple<F::Elem>,
) -> Result<ProjTriple<F::Elem>, ProjError> {
    if p1 == p2 {
        return Err(ProjError::EqualPoints);
    }
    normalize(field, cross(field, &p1.coords, &p2.coords))
}

pub fn collinear<F: Field>(
    field: &F,
    t1: &ProjTriple<F::Elem>,
    t2: &ProjTriple<F::Elem>,
    t3: &ProjTriple<F::Elem>,
) -> bool {
    field.is_zero(&det3(field, &t1.coords, &t2.coords, &t3.coords))
}

/// Incidence test between a line and a point.
pub fn incident<F: Field>(field: &F, line: &ProjTriple<F::Elem>, point: &ProjTriple<F::Elem>) -> bool {
    field.is_zero(&dot(field, &line.coords, &point.coords))
}
