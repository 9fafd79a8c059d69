//! Structure-constant matrices of 2-dimensional algebras and the basis-change
//! action `B = g A (g^-1 ⊗ g^-1)`.
//!
//! An MSC is 2×4: row `k` holds the `e_k` coordinate of the products
//! `e_1e_1, e_1e_2, e_2e_1, e_2e_2`, in that column order.

use crate::error::{Error, Result};
use crate::field::{Embedding, Field};

pub type Mat2<E> = [[E; 2]; 2];
pub type Mat4<E> = [[E; 4]; 4];

pub fn mat2_identity<F: Field>(f: &F) -> Mat2<F::Elem> {
    [[f.one(), f.zero()], [f.zero(), f.one()]]
}

pub fn mat2_swap<F: Field>(f: &F) -> Mat2<F::Elem> {
    [[f.zero(), f.one()], [f.one(), f.zero()]]
}

pub fn mat2_diag<F: Field>(f: &F, x: F::Elem, y: F::Elem) -> Mat2<F::Elem> {
    [[x, f.zero()], [f.zero(), y]]
}

pub fn mat2_zero<F: Field>(f: &F) -> Mat2<F::Elem> {
    [[f.zero(), f.zero()], [f.zero(), f.zero()]]
}

pub fn mat2_mul<F: Field>(f: &F, x: &Mat2<F::Elem>, y: &Mat2<F::Elem>) -> Mat2<F::Elem> {
    let entry = |i: usize, j: usize| f.add(&f.mul(&x[i][0], &y[0][j]), &f.mul(&x[i][1], &y[1][j]));
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

pub fn mat2_sub<F: Field>(f: &F, x: &Mat2<F::Elem>, y: &Mat2<F::Elem>) -> Mat2<F::Elem> {
    let entry = |i: usize, j: usize| f.sub(&x[i][j], &y[i][j]);
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

pub fn mat2_det<F: Field>(f: &F, m: &Mat2<F::Elem>) -> F::Elem {
    f.sub(&f.mul(&m[0][0], &m[1][1]), &f.mul(&m[0][1], &m[1][0]))
}

/// Exact inverse by the adjugate formula.
pub fn mat2_inv<F: Field>(f: &F, m: &Mat2<F::Elem>) -> Result<Mat2<F::Elem>> {
    let det = mat2_det(f, m);
    let inv = f.inv(&det).map_err(|_| Error::SingularChange)?;
    let s = |x: &F::Elem| f.mul(x, &inv);
    Ok([
        [s(&m[1][1]), s(&f.neg(&m[0][1]))],
        [s(&f.neg(&m[1][0])), s(&m[0][0])],
    ])
}

pub fn mat2_map<F: Field>(emb: &F::Embedding, m: &Mat2<F::Elem>) -> Mat2<F::Elem> {
    [
        [emb.apply(&m[0][0]), emb.apply(&m[0][1])],
        [emb.apply(&m[1][0]), emb.apply(&m[1][1])],
    ]
}

/// `m ⊗ m` with rows and columns ordered (1,1),(1,2),(2,1),(2,2).
pub fn kron_square<F: Field>(f: &F, m: &Mat2<F::Elem>) -> Mat4<F::Elem> {
    std::array::from_fn(|r| std::array::from_fn(|c| f.mul(&m[r / 2][c / 2], &m[r % 2][c % 2])))
}

/// Matrix of structure constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Msc<E> {
    pub rows: [[E; 4]; 2],
}

impl<E: Clone + PartialEq> Msc<E> {
    pub fn new(rows: [[E; 4]; 2]) -> Self {
        Msc { rows }
    }

    pub fn zero<F: Field<Elem = E>>(f: &F) -> Self {
        Msc {
            rows: std::array::from_fn(|_| std::array::from_fn(|_| f.zero())),
        }
    }

    pub fn from_i64<F: Field<Elem = E>>(f: &F, rows: [[i64; 4]; 2]) -> Self {
        Msc {
            rows: rows.map(|r| r.map(|x| f.from_i64(x))),
        }
    }

    /// Checks the given basis only: columns (1,2) and (2,1) vanish.
    pub fn is_evolution<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.rows.iter().all(|r| f.is_zero(&r[1]) && f.is_zero(&r[2]))
    }

    pub fn as_evolution<F: Field<Elem = E>>(&self, f: &F) -> Option<EvolutionMsc<E>> {
        self.is_evolution(f).then(|| EvolutionMsc {
            a: self.rows[0][0].clone(),
            b: self.rows[0][3].clone(),
            c: self.rows[1][0].clone(),
            d: self.rows[1][3].clone(),
        })
    }

    pub fn map<F: Field<Elem = E>>(&self, emb: &F::Embedding) -> Self {
        Msc {
            rows: self.rows.clone().map(|r| r.map(|x| emb.apply(&x))),
        }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.rows.iter().flatten().all(|x| f.is_zero(x))
    }
}

/// Evolution MSC `[[a,0,0,b],[c,0,0,d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvolutionMsc<E> {
    pub a: E,
    pub b: E,
    pub c: E,
    pub d: E,
}

impl<E: Clone + PartialEq> EvolutionMsc<E> {
    pub fn new(a: E, b: E, c: E, d: E) -> Self {
        EvolutionMsc { a, b, c, d }
    }

    pub fn from_i64<F: Field<Elem = E>>(f: &F, v: [i64; 4]) -> Self {
        let [a, b, c, d] = v.map(|x| f.from_i64(x));
        EvolutionMsc { a, b, c, d }
    }

    pub fn to_msc<F: Field<Elem = E>>(&self, f: &F) -> Msc<E> {
        let z = f.zero();
        Msc {
            rows: [
                [self.a.clone(), z.clone(), z.clone(), self.b.clone()],
                [self.c.clone(), z.clone(), z, self.d.clone()],
            ],
        }
    }

    /// The associated 2×2 matrix `[[a,b],[c,d]]`.
    pub fn matrix(&self) -> Mat2<E> {
        [[self.a.clone(), self.b.clone()], [self.c.clone(), self.d.clone()]]
    }

    pub fn entries(&self) -> [E; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    /// Relabels the basis `e1 <-> e2`: `(a,b,c,d) -> (d,c,b,a)`.
    pub fn swapped(&self) -> Self {
        EvolutionMsc {
            a: self.d.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.a.clone(),
        }
    }

    pub fn map<F: Field<Elem = E>>(&self, emb: &F::Embedding) -> Self {
        EvolutionMsc {
            a: emb.apply(&self.a),
            b: emb.apply(&self.b),
            c: emb.apply(&self.c),
            d: emb.apply(&self.d),
        }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|x| f.is_zero(x))
    }
}

/// `ad - bc`.
pub fn det2x2<F: Field>(f: &F, e: &EvolutionMsc<F::Elem>) -> F::Elem {
    f.sub(&f.mul(&e.a, &e.d), &f.mul(&e.b, &e.c))
}

/// An invertible change of basis, stored as `g^-1 = [[ξ1, η1], [ξ2, η2]]`.
///
/// The columns of `g^-1` are the new basis vectors in old coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisChange<E> {
    ginv: Mat2<E>,
}

impl<E: Clone + PartialEq> BasisChange<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, ginv: Mat2<E>) -> Result<Self> {
        if f.is_zero(&mat2_det(f, &ginv)) {
            return Err(Error::SingularChange);
        }
        Ok(BasisChange { ginv })
    }

    /// From `g` itself rather than its inverse.
    pub fn from_g<F: Field<Elem = E>>(f: &F, g: &Mat2<E>) -> Result<Self> {
        Ok(BasisChange {
            ginv: mat2_inv(f, g)?,
        })
    }

    pub fn identity<F: Field<Elem = E>>(f: &F) -> Self {
        BasisChange {
            ginv: mat2_identity(f),
        }
    }

    pub fn swap<F: Field<Elem = E>>(f: &F) -> Self {
        BasisChange { ginv: mat2_swap(f) }
    }

    pub fn ginv(&self) -> &Mat2<E> {
        &self.ginv
    }

    pub fn g<F: Field<Elem = E>>(&self, f: &F) -> Mat2<E> {
        mat2_inv(f, &self.ginv).expect("basis change is invertible")
    }

    /// `Δ = ξ1 η2 - ξ2 η1`.
    pub fn delta<F: Field<Elem = E>>(&self, f: &F) -> E {
        mat2_det(f, &self.ginv)
    }

    /// Applying `self` first and then `next`.
    pub fn then<F: Field<Elem = E>>(&self, f: &F, next: &Self) -> Self {
        BasisChange {
            ginv: mat2_mul(f, &self.ginv, &next.ginv),
        }
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Self {
        BasisChange { ginv: self.g(f) }
    }

    pub fn map<F: Field<Elem = E>>(&self, emb: &F::Embedding) -> Self {
        BasisChange {
            ginv: mat2_map::<F>(emb, &self.ginv),
        }
    }
}

/// A basis change with `g` and `(g^-1)^⊗2` precomputed, for hot loops.
#[derive(Clone, Debug)]
pub struct PreparedChange<E> {
    pub change: BasisChange<E>,
    g: Mat2<E>,
    kron: Mat4<E>,
}

impl<E: Clone + PartialEq> PreparedChange<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, change: BasisChange<E>) -> Self {
        let g = change.g(f);
        let kron = kron_square(f, change.ginv());
        PreparedChange { change, g, kron }
    }

    pub fn apply<F: Field<Elem = E>>(&self, f: &F, a: &Msc<E>) -> Msc<E> {
        transform_raw(f, a, &self.g, &self.kron)
    }
}

fn transform_raw<F: Field>(f: &F, a: &Msc<F::Elem>, g: &Mat2<F::Elem>, kron: &Mat4<F::Elem>) -> Msc<F::Elem> {
    // A·K, 2×4
    let ak: [[F::Elem; 4]; 2] = std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            (0..4).fold(f.zero(), |acc, i| {
                if f.is_zero(&a.rows[r][i]) {
                    acc
                } else {
                    f.add(&acc, &f.mul(&a.rows[r][i], &kron[i][c]))
                }
            })
        })
    });
    Msc {
        rows: std::array::from_fn(|r| {
            std::array::from_fn(|c| f.add(&f.mul(&g[r][0], &ak[0][c]), &f.mul(&g[r][1], &ak[1][c])))
        }),
    }
}

/// `g A (g^-1)^⊗2`.
pub fn transform<F: Field>(f: &F, a: &Msc<F::Elem>, change: &BasisChange<F::Elem>) -> Msc<F::Elem> {
    let g = change.g(f);
    transform_raw(f, a, &g, &kron_square(f, change.ginv()))
}

/// The transformed entries `α'_1..α'_4`, `β'_1..β'_4` of an evolution MSC.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformedEntries<E> {
    pub alpha: [E; 4],
    pub beta: [E; 4],
}

impl<E: Clone + PartialEq> TransformedEntries<E> {
    pub fn to_msc(&self) -> Msc<E> {
        Msc {
            rows: [self.alpha.clone(), self.beta.clone()],
        }
    }
}

/// Closed-form transform of an evolution MSC:
///
/// ```text
/// α'_1 = (ξ1²(aη2 - cη1) + ξ2²(bη2 - dη1)) / Δ
/// α'_2 = α'_3 = (ξ1η1(aη2 - cη1) + ξ2η2(bη2 - dη1)) / Δ
/// α'_4 = (η1²(aη2 - cη1) + η2²(bη2 - dη1)) / Δ
/// β'_1 = (ξ1²(cξ1 - aξ2) + ξ2²(dξ1 - bξ2)) / Δ
/// β'_2 = β'_3 = (ξ1η1(cξ1 - aξ2) + ξ2η2(dξ1 - bξ2)) / Δ
/// β'_4 = (η1²(cξ1 - aξ2) + η2²(dξ1 - bξ2)) / Δ
/// ```
pub fn transform_evolution<F: Field>(
    f: &F,
    e: &EvolutionMsc<F::Elem>,
    change: &BasisChange<F::Elem>,
) -> Result<TransformedEntries<F::Elem>> {
    let [[x1, h1], [x2, h2]] = change.ginv();
    let delta_inv = f.inv(&change.delta(f)).map_err(|_| Error::SingularChange)?;
    let (a, b, c, d) = (&e.a, &e.b, &e.c, &e.d);

    let p = f.sub(&f.mul(a, h2), &f.mul(c, h1));
    let r = f.sub(&f.mul(b, h2), &f.mul(d, h1));
    let u = f.sub(&f.mul(c, x1), &f.mul(a, x2));
    let v = f.sub(&f.mul(d, x1), &f.mul(b, x2));

    let s11 = f.square(x1);
    let s22 = f.square(x2);
    let m1 = f.mul(x1, h1);
    let m2 = f.mul(x2, h2);
    let t11 = f.square(h1);
    let t22 = f.square(h2);

    let comb = |w1: &F::Elem, w2: &F::Elem, y: &F::Elem, z: &F::Elem| {
        f.mul(&f.add(&f.mul(w1, y), &f.mul(w2, z)), &delta_inv)
    };
    let a1 = comb(&s11, &s22, &p, &r);
    let a2 = comb(&m1, &m2, &p, &r);
    let a4 = comb(&t11, &t22, &p, &r);
    let b1 = comb(&s11, &s22, &u, &v);
    let b2 = comb(&m1, &m2, &u, &v);
    let b4 = comb(&t11, &t22, &u, &v);
    Ok(TransformedEntries {
        alpha: [a1, a2.clone(), a2, a4],
        beta: [b1, b2.clone(), b2, b4],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaloisField, Rationals};

    fn q(s: &str) -> num_rational::BigRational {
        Rationals.parse(s).unwrap()
    }

    #[test]
    fn kron_of_identity_and_diagonal() {
        let f = Rationals;
        let id = kron_square(&f, &mat2_identity(&f));
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, f.from_i64((i == j) as i64));
            }
        }
        let d = kron_square(&f, &mat2_diag(&f, q("2"), q("3")));
        let diag: Vec<_> = (0..4).map(|i| d[i][i].clone()).collect();
        assert_eq!(diag, vec![q("4"), q("6"), q("6"), q("9")]);
    }

    #[test]
    fn kron_of_swap_is_the_expected_permutation() {
        // ξ1 = η2 = 0, η1 = ξ2 = 1 in the 4×4 expansion
        let f = Rationals;
        let k = kron_square(&f, &mat2_swap(&f));
        let expected = [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(k[i][j], f.from_i64(expected[i][j]));
            }
        }
    }

    #[test]
    fn kron_matches_explicit_layout() {
        let f = Rationals;
        let (x1, h1, x2, h2) = (q("2"), q("3"), q("5"), q("7"));
        let k = kron_square(&f, &[[x1.clone(), h1.clone()], [x2.clone(), h2.clone()]]);
        let m = |a: &num_rational::BigRational, b: &num_rational::BigRational| a * b;
        let expected = [
            [m(&x1, &x1), m(&x1, &h1), m(&x1, &h1), m(&h1, &h1)],
            [m(&x1, &x2), m(&x1, &h2), m(&x2, &h1), m(&h1, &h2)],
            [m(&x1, &x2), m(&x2, &h1), m(&x1, &h2), m(&h1, &h2)],
            [m(&x2, &x2), m(&x2, &h2), m(&x2, &h2), m(&h2, &h2)],
        ];
        assert_eq!(k, expected);
    }

    #[test]
    fn identity_change_is_trivial() {
        let f = Rationals;
        let a = Msc::from_i64(&f, [[1, 2, 3, 4], [5, 6, 7, 8]]);
        assert_eq!(transform(&f, &a, &BasisChange::identity(&f)), a);
    }

    #[test]
    fn singular_change_rejected() {
        let f = Rationals;
        let m = [[q("1"), q("2")], [q("2"), q("4")]];
        assert_eq!(BasisChange::new(&f, m).unwrap_err(), Error::SingularChange);
    }

    #[test]
    fn sixth_remark_isomorphism() {
        // g = [[0, c], [c^2, 0]] carries [[0,0,0,1],[1,0,0,c]] to [[1,0,0,c^-3],[1,0,0,0]]
        let f = Rationals;
        let c = q("2");
        let g = [[q("0"), c.clone()], [&c * &c, q("0")]];
        let change = BasisChange::from_g(&f, &g).unwrap();
        let e = EvolutionMsc::new(q("0"), q("1"), q("1"), c.clone()).to_msc(&f);
        let out = transform(&f, &e, &change);
        assert_eq!(out, EvolutionMsc::new(q("1"), q("1/8"), q("1"), q("0")).to_msc(&f));
    }

    #[test]
    fn swap_fixes_e3() {
        let f = GaloisField::prime(7).unwrap();
        let e3 = EvolutionMsc::from_i64(&f, [0, 1, 1, 0]).to_msc(&f);
        assert_eq!(transform(&f, &e3, &BasisChange::swap(&f)), e3);
    }

    #[test]
    fn closed_form_on_simple_inputs() {
        let f = Rationals;
        let e = EvolutionMsc::from_i64(&f, [2, 3, 5, 7]);
        let t = transform_evolution(&f, &e, &BasisChange::identity(&f)).unwrap();
        assert_eq!(t.alpha, [q("2"), q("0"), q("0"), q("3")]);
        assert_eq!(t.beta, [q("5"), q("0"), q("0"), q("7")]);

        let e = EvolutionMsc::from_i64(&f, [1, 0, 0, 1]);
        let g = BasisChange::new(&f, mat2_diag(&f, q("2"), q("3"))).unwrap();
        let t = transform_evolution(&f, &e, &g).unwrap();
        assert_eq!(t.alpha[0], q("2"));
        assert_eq!(t.alpha[3], q("0"));
        assert_eq!(t.beta[0], q("0"));
        assert_eq!(t.beta[3], q("3"));
    }

    #[test]
    fn evolution_predicate() {
        let f = Rationals;
        assert!(Msc::from_i64(&f, [[1, 0, 0, 2], [3, 0, 0, 4]]).is_evolution(&f));
        assert!(!Msc::from_i64(&f, [[1, 1, 0, 2], [3, 0, 0, 4]]).is_evolution(&f));
        // generic change destroys evolution form
        let e4 = EvolutionMsc::from_i64(&f, [1, 1, 0, 0]).to_msc(&f);
        let g = BasisChange::new(&f, [[q("1"), q("1")], [q("0"), q("1")]]).unwrap();
        let out = transform(&f, &e4, &g);
        assert!(!f.is_zero(&out.rows[0][1]));
        assert!(!out.is_evolution(&f));
    }

    #[test]
    fn determinant_examples() {
        let f = Rationals;
        assert_eq!(det2x2(&f, &EvolutionMsc::from_i64(&f, [1, 0, 0, 1])), q("1"));
        assert_eq!(det2x2(&f, &EvolutionMsc::from_i64(&f, [2, 3, 5, 7])), q("-1"));
        assert_eq!(det2x2(&f, &EvolutionMsc::from_i64(&f, [0, 1, 1, 0])), q("-1"));
    }
}
