//! Exact fields: the rationals, prime fields and their finite extensions.
//!
//! All algebra in this crate is generic over [`Field`]. A field value is a
//! cheap, immutable handle; elements are plain values interpreted relative to
//! the handle that produced them.

mod ctx;
mod descriptor;
mod galois;
mod poly;
mod rational;

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use serde_json::Value;

use crate::error::Result;

pub use ctx::{ArithOp, Fel, FieldCtx};
pub use descriptor::FieldDescriptor;
pub use galois::{GaloisField, Gf, GfEmbedding};
pub use poly::Poly;
pub use rational::{Rationals, RationalEmbedding};

/// Exact field arithmetic.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;
    type Embedding: Embedding<Self>;

    /// 0 for the rationals, `p` otherwise.
    fn characteristic(&self) -> u64;
    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;
    /// Degree over the prime field (1 for the rationals).
    fn degree(&self) -> u32;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// The canonical total order used for deterministic output.
    fn cmp_elems(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    /// Whether `a` is a well-formed element of this field.
    fn contains(&self, a: &Self::Elem) -> bool;

    /// Every element exactly once, in canonical order.
    fn elements(&self) -> Result<Vec<Self::Elem>>;

    /// Finds a root of a polynomial of degree 1..=3, extending the field when
    /// that is possible.
    fn find_root(&self, p: &Poly<Self::Elem>) -> Result<RootExt<Self>>;

    fn identity_embedding(&self) -> Self::Embedding;

    /// An embedding of `self` into `target`, if `target` contains a copy of it.
    fn embedding_into(&self, target: &Self) -> Result<Self::Embedding>;

    fn encode(&self, a: &Self::Elem) -> Value;
    fn decode(&self, v: &Value) -> Result<Self::Elem>;

    /// Human-readable rendering, used inside polynomial strings.
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Sign hint for pretty-printing; only meaningful over the rationals.
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    fn descriptor(&self) -> FieldDescriptor;
}

/// A field homomorphism `F -> F'`.
pub trait Embedding<F: Field>: Clone + fmt::Debug + Send + Sync {
    fn apply(&self, a: &F::Elem) -> F::Elem;
    fn is_identity(&self) -> bool;
}

/// A root of a polynomial together with the field it lives in.
#[derive(Clone, Debug)]
pub struct RootExt<F: Field> {
    pub field: F,
    pub root: F::Elem,
    pub embedding: F::Embedding,
}

impl<F: Field> RootExt<F> {
    /// Degree of the extension over the base field the root was requested in.
    pub fn relative_degree(&self, base: &F) -> u32 {
        self.field.degree() / base.degree()
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
