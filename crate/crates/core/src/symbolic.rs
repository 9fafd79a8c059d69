//! Integer polynomials in the family parameters `t`, `s` and the cube root
//! of unity `w` (a root of `x^2 + x + 1`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    S,
    W,
}

impl Var {
    fn index(self) -> usize {
        self as usize
    }

    fn name(i: usize) -> &'static str {
        ["t", "s", "w"][i]
    }
}

type Exponents = [u8; 3];

/// A polynomial with integer coefficients; terms with zero coefficient are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymPoly {
    terms: BTreeMap<Exponents, i64>,
}

/// Values assigned to the variables when evaluating.
#[derive(Clone, Debug)]
pub struct Assignment<E> {
    pub t: Option<E>,
    pub s: Option<E>,
    pub w: Option<E>,
}

impl<E> Default for Assignment<E> {
    fn default() -> Self {
        Assignment { t: None, s: None, w: None }
    }
}

impl SymPoly {
    pub fn constant(c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert([0; 3], c);
        }
        SymPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.index()] = 1;
        SymPoly {
            terms: BTreeMap::from([(e, 1)]),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(SymPoly::constant(1), |acc, _| &acc * self)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v.index()] > 0)
    }

    /// `(a, b)` when the polynomial is `a·t + b`.
    pub fn as_linear_in_t(&self) -> Option<(i64, i64)> {
        let mut a = 0;
        let mut b = 0;
        for (e, &c) in &self.terms {
            match e {
                [1, 0, 0] => a = c,
                [0, 0, 0] => b = c,
                _ => return None,
            }
        }
        (a != 0).then_some((a, b))
    }

    /// Evaluates the polynomial; panics if a used variable is unassigned.
    pub fn eval<F: Field>(&self, f: &F, at: &Assignment<F::Elem>) -> F::Elem {
        let values = [&at.t, &at.s, &at.w];
        self.terms.iter().fold(f.zero(), |acc, (e, &c)| {
            let mut term = f.from_i64(c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let v = values[i].as_ref().unwrap_or_else(|| panic!("{} is unassigned", Var::name(i)));
                    term = f.mul(&term, &f.pow(v, k as u64));
                }
            }
            f.add(&acc, &term)
        })
    }

    fn combine(mut self, other: &SymPoly, sign: i64) -> SymPoly {
        for (e, &c) in &other.terms {
            let entry = self.terms.entry(*e).or_insert(0);
            *entry += sign * c;
            if *entry == 0 {
                self.terms.remove(e);
            }
        }
        self
    }
}

impl From<i64> for SymPoly {
    fn from(c: i64) -> Self {
        SymPoly::constant(c)
    }
}

impl Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        self.clone().combine(rhs, 1)
    }
}

impl Sub for &SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: &SymPoly) -> SymPoly {
        self.clone().combine(rhs, -1)
    }
}

impl Neg for &SymPoly {
    type Output = SymPoly;
    fn neg(self) -> SymPoly {
        SymPoly::default().combine(self, -1)
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        let mut out = SymPoly::default();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &rhs.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                out = out.combine(&SymPoly { terms: BTreeMap::from([(e, c1 * c2)]) }, 1);
            }
        }
        out
    }
}

fn monomial_text(e: &Exponents) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| match k {
            1 => Var::name(i).to_string(),
            _ => format!("{}^{k}", Var::name(i)),
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for SymPoly {
    /// Highest total degree first, e.g. `t^2`, `1 - t`, `2*t - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| std::cmp::Reverse((e.iter().map(|&k| k as u32).sum::<u32>(), **e)));
        // A lone constant leads when the rest is a single negative term, so
        // `1 - t` reads naturally.
        if terms.len() == 2 && *terms[0].1 < 0 && terms[1].0 == &[0; 3] {
            terms.swap(0, 1);
        }
        for (i, (e, &c)) in terms.into_iter().enumerate() {
            let mono = monomial_text(e);
            let mag = c.unsigned_abs();
            let body = match (mono.is_empty(), mag) {
                (true, _) => mag.to_string(),
                (false, 1) => mono,
                (false, _) => format!("{mag}*{mono}"),
            };
            match (i, c < 0) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// A 2×2 matrix of symbolic entries.
pub type SymMatrix = [[SymPoly; 2]; 2];

pub fn sym_matrix_text(m: &SymMatrix) -> Vec<Vec<String>> {
    m.iter().map(|row| row.iter().map(|p| p.to_string()).collect()).collect()
}

pub fn eval_matrix<F: Field>(f: &F, m: &SymMatrix, at: &Assignment<F::Elem>) -> [[F::Elem; 2]; 2] {
    [
        [m[0][0].eval(f, at), m[0][1].eval(f, at)],
        [m[1][0].eval(f, at), m[1][1].eval(f, at)],
    ]
}
