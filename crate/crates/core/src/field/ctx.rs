use std::cmp::Ordering;

use num_rational::BigRational;

use super::{Field, FieldDescriptor, GaloisField, Gf, Rationals};
use crate::error::{Error, Result};

/// A field chosen at runtime, e.g. from a JSON descriptor.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldCtx {
    Rationals(Rationals),
    Galois(GaloisField),
}

/// An element of some [`FieldCtx`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fel {
    Rational(BigRational),
    Galois(Gf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldCtx {
    pub fn make(desc: &FieldDescriptor) -> Result<Self> {
        match desc {
            FieldDescriptor::Rationals => Ok(FieldCtx::Rationals(Rationals)),
            FieldDescriptor::Galois { p, k, modulus } => {
                Ok(FieldCtx::Galois(GaloisField::new(*p, *k, modulus.clone())?))
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldCtx::Rationals(f) => f.characteristic(),
            FieldCtx::Galois(f) => f.characteristic(),
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldCtx::Rationals(f) => f.descriptor(),
            FieldCtx::Galois(f) => f.descriptor(),
        }
    }

    fn galois_pair<'a>(&self, f: &GaloisField, a: &'a Fel, b: &'a Fel) -> Result<(&'a Gf, &'a Gf)> {
        match (a, b) {
            (Fel::Galois(x), Fel::Galois(y)) if f.contains(x) && f.contains(y) => Ok((x, y)),
            _ => Err(Error::MixedFields),
        }
    }

    pub fn arith(&self, a: &Fel, b: &Fel, op: ArithOp) -> Result<Fel> {
        match self {
            FieldCtx::Rationals(f) => {
                let (Fel::Rational(x), Fel::Rational(y)) = (a, b) else {
                    return Err(Error::MixedFields);
                };
                Ok(Fel::Rational(match op {
                    ArithOp::Add => f.add(x, y),
                    ArithOp::Sub => f.sub(x, y),
                    ArithOp::Mul => f.mul(x, y),
                    ArithOp::Div => f.div(x, y)?,
                }))
            }
            FieldCtx::Galois(f) => {
                let (x, y) = self.galois_pair(f, a, b)?;
                Ok(Fel::Galois(match op {
                    ArithOp::Add => f.add(x, y),
                    ArithOp::Sub => f.sub(x, y),
                    ArithOp::Mul => f.mul(x, y),
                    ArithOp::Div => f.div(x, y)?,
                }))
            }
        }
    }

    pub fn canonical_cmp(&self, a: &Fel, b: &Fel) -> Result<Ordering> {
        match self {
            FieldCtx::Rationals(f) => match (a, b) {
                (Fel::Rational(x), Fel::Rational(y)) => Ok(f.cmp_elems(x, y)),
                _ => Err(Error::MixedFields),
            },
            FieldCtx::Galois(f) => {
                let (x, y) = self.galois_pair(f, a, b)?;
                Ok(f.cmp_elems(x, y))
            }
        }
    }

    pub fn elements(&self) -> Result<Vec<Fel>> {
        match self {
            FieldCtx::Rationals(_) => Err(Error::InfiniteField),
            FieldCtx::Galois(f) => Ok(f.elements()?.into_iter().map(Fel::Galois).collect()),
        }
    }

    pub fn decode(&self, v: &serde_json::Value) -> Result<Fel> {
        match self {
            FieldCtx::Rationals(f) => f.decode(v).map(Fel::Rational),
            FieldCtx::Galois(f) => f.decode(v).map(Fel::Galois),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn dynamic_arith() {
        let q = FieldCtx::make(&FieldDescriptor::Rationals).unwrap();
        let a = q.decode(&json!("1/2")).unwrap();
        let b = q.decode(&json!("1/3")).unwrap();
        assert_eq!(q.arith(&a, &b, ArithOp::Add).unwrap(), q.decode(&json!("5/6")).unwrap());
        let zero = q.decode(&json!(0)).unwrap();
        assert_eq!(q.arith(&a, &zero, ArithOp::Div), Err(Error::DivisionByZero));
    }

    #[test]
    fn mixing_fields_is_rejected() {
        let q = FieldCtx::make(&FieldDescriptor::Rationals).unwrap();
        let gf5 = FieldCtx::make(&FieldDescriptor::Galois { p: 5, k: 1, modulus: None }).unwrap();
        let a = q.decode(&json!("1/2")).unwrap();
        let b = gf5.decode(&json!(3)).unwrap();
        assert_eq!(q.arith(&a, &b, ArithOp::Mul), Err(Error::MixedFields));
        assert_eq!(gf5.arith(&a, &b, ArithOp::Mul), Err(Error::MixedFields));
        assert_eq!(gf5.canonical_cmp(&b, &Fel::Galois(Gf(9))), Err(Error::MixedFields));
    }

    #[test]
    fn elements_of_small_fields() {
        let gf3 = FieldCtx::make(&FieldDescriptor::Galois { p: 3, k: 1, modulus: None }).unwrap();
        assert_eq!(
            gf3.elements().unwrap(),
            vec![Fel::Galois(Gf(0)), Fel::Galois(Gf(1)), Fel::Galois(Gf(2))]
        );
        let q = FieldCtx::make(&FieldDescriptor::Rationals).unwrap();
        assert_eq!(q.elements(), Err(Error::InfiniteField));
        assert!(FieldCtx::make(&FieldDescriptor::Galois { p: 6, k: 1, modulus: None }).is_err());
    }

    #[test]
    fn gf5_arith() {
        let gf5 = FieldCtx::make(&FieldDescriptor::Galois { p: 5, k: 1, modulus: None }).unwrap();
        let r = gf5
            .arith(&Fel::Galois(Gf(2)), &Fel::Galois(Gf(4)), ArithOp::Add)
            .unwrap();
        assert_eq!(r, Fel::Galois(Gf(1)));
    }
}
