//! Derivations: the linear condition `E(D ⊗ I + I ⊗ D) - DE = 0`, its exact
//! solution space, and the closed-form tables it is checked against.

use serde_json::{json, Value};

use crate::classify::{CanonicalKey, Label};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{nullspace, rref};
use crate::tensor::{mat2_identity, mat2_mul, mat2_sub, Mat2, Msc};

/// `D = [[x, y], [z, t]]`.
pub type DerivationMatrix<E> = Mat2<E>;

/// `D ⊗ I + I ⊗ D` as a 4×4 matrix.
fn kron_sum<F: Field>(f: &F, d: &Mat2<F::Elem>) -> [[F::Elem; 4]; 4] {
    let id = mat2_identity(f);
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let (i, k, j, l) = (r / 2, r % 2, c / 2, c % 2);
            f.add(&f.mul(&d[i][j], &id[k][l]), &f.mul(&id[i][j], &d[k][l]))
        })
    })
}

/// The 2×4 matrix `E(D ⊗ I + I ⊗ D) - DE`.
pub fn der_residual<F: Field>(f: &F, e: &Msc<F::Elem>, d: &DerivationMatrix<F::Elem>) -> [[F::Elem; 4]; 2] {
    let k = kron_sum(f, d);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let lhs = (0..4).fold(f.zero(), |acc, l| f.add(&acc, &f.mul(&e.rows[i][l], &k[l][j])));
            let rhs = (0..2).fold(f.zero(), |acc, l| f.add(&acc, &f.mul(&d[i][l], &e.rows[l][j])));
            f.sub(&lhs, &rhs)
        })
    })
}

pub fn der_check<F: Field>(f: &F, e: &Msc<F::Elem>, d: &DerivationMatrix<F::Elem>) -> bool {
    der_residual(f, e, d).iter().flatten().all(|x| f.is_zero(x))
}

pub fn lie_bracket<F: Field>(f: &F, d1: &Mat2<F::Elem>, d2: &Mat2<F::Elem>) -> Mat2<F::Elem> {
    mat2_sub(f, &mat2_mul(f, d1, d2), &mat2_mul(f, d2, d1))
}

/// A basis of a space of derivations in reduced echelon form with respect to
/// the coordinates `(x, y, z, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerBasis<E> {
    basis: Vec<DerivationMatrix<E>>,
}

fn flatten<E: Clone>(m: &Mat2<E>) -> Vec<E> {
    vec![m[0][0].clone(), m[0][1].clone(), m[1][0].clone(), m[1][1].clone()]
}

fn unflatten<E: Clone>(v: &[E]) -> Mat2<E> {
    [[v[0].clone(), v[1].clone()], [v[2].clone(), v[3].clone()]]
}

impl<E: Clone + PartialEq> DerBasis<E> {
    /// Row-reduces the given spanning set.
    pub fn from_spanning<F: Field<Elem = E>>(f: &F, spanning: &[Mat2<E>]) -> Self {
        let mut rows: Vec<Vec<E>> = spanning.iter().map(flatten).collect();
        rref(f, &mut rows);
        DerBasis {
            basis: rows.iter().map(|r| unflatten(r)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat2<E>] {
        &self.basis
    }

    /// Every linear combination of the basis; `elements` must list the field.
    pub fn span<F: Field<Elem = E>>(&self, f: &F, elements: &[E]) -> Vec<Mat2<E>> {
        let mut out = vec![[[f.zero(), f.zero()], [f.zero(), f.zero()]]];
        for b in &self.basis {
            out = out
                .iter()
                .flat_map(|acc| {
                    elements.iter().map(move |c| {
                        std::array::from_fn(|i| std::array::from_fn(|j| f.add(&acc[i][j], &f.mul(c, &b[i][j]))))
                    })
                })
                .collect();
        }
        out
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        let basis: Vec<Value> = self
            .basis
            .iter()
            .map(|m| json!(m.iter().map(|r| r.iter().map(|x| f.encode(x)).collect::<Vec<_>>()).collect::<Vec<_>>()))
            .collect();
        json!({"dim": self.dim(), "basis": basis})
    }
}

/// Solves the derivation condition, which is linear in `(x, y, z, t)`.
pub fn der_solve<F: Field>(f: &F, e: &Msc<F::Elem>) -> DerBasis<F::Elem> {
    let columns: Vec<[[F::Elem; 4]; 2]> = (0..4)
        .map(|k| {
            let mut unit = vec![f.zero(); 4];
            unit[k] = f.one();
            der_residual(f, e, &unflatten(&unit))
        })
        .collect();
    let system: Vec<Vec<F::Elem>> = (0..8)
        .map(|r| columns.iter().map(|col| col[r / 4][r % 4].clone()).collect())
        .collect();
    DerBasis {
        basis: nullspace(f, &system, 4).iter().map(|v| unflatten(v)).collect(),
    }
}

/// The tabulated derivation algebra of a canonical form, by characteristic.
pub fn der_closed_form<F: Field>(f: &F, key: &CanonicalKey<F::Elem>) -> Result<DerBasis<F::Elem>> {
    let m = |v: [i64; 4]| [[f.from_i64(v[0]), f.from_i64(v[1])], [f.from_i64(v[2]), f.from_i64(v[3])]];
    let p = f.characteristic();
    let spanning = match key.label() {
        Label::E0 => return Err(Error::UnsupportedKey("E0".into())),
        Label::E1 => vec![],
        Label::E3 if p == 3 => vec![m([2, 0, 0, 1])],
        Label::E3 => vec![],
        Label::E2 if !f.is_zero(&key.params()[0]) => vec![],
        Label::E2 => vec![m([0, 0, 1, -1])],
        Label::E4 if p == 2 => vec![m([0, 0, 0, 1])],
        Label::E4 => vec![],
        Label::E5 if p == 2 => vec![m([1, -1, 1, -1])],
        Label::E5 => vec![m([-1, 1, 1, -1])],
        Label::E6 if p == 2 => vec![m([0, 1, 0, 0]), m([0, 0, 0, 1])],
        Label::E6 => vec![m([2, 0, 0, 1]), m([0, 1, 0, 0])],
    };
    Ok(DerBasis::from_spanning(f, &spanning))
}
