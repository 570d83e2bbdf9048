use std::fmt::Debug;

/// Arithmetic over a finite field whose elements are plain values.
///
/// Implemented by [`crate::gf::FieldCtx`] (elements are canonical `u32`
/// encodings) and [`crate::gf::ExtFieldCtx`] (coefficient vectors over the
/// base field). Linear algebra in [`crate::linalg`] is generic over it.
pub trait Field: Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
}
