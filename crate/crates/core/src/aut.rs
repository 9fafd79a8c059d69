//! Automorphism groups: membership test, closed forms and instantiation.

use std::collections::HashSet;

use serde_json::{json, Value};

use crate::classify::{CanonicalKey, Label};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::symbolic::{eval_matrix, sym_matrix_text, Assignment, SymMatrix, SymPoly, Var};
use crate::tensor::{kron_square, mat2_det, Mat2, Msc};

/// `g` is invertible and `gE = E(g ⊗ g)`.
pub fn aut_check<F: Field>(f: &F, e: &Msc<F::Elem>, g: &Mat2<F::Elem>) -> bool {
    if f.is_zero(&mat2_det(f, g)) {
        return false;
    }
    let k = kron_square(f, g);
    (0..2).all(|i| {
        (0..4).all(|j| {
            let lhs = (0..2).fold(f.zero(), |acc, l| f.add(&acc, &f.mul(&g[i][l], &e.rows[l][j])));
            let rhs = (0..4).fold(f.zero(), |acc, l| f.add(&acc, &f.mul(&e.rows[i][l], &k[l][j])));
            lhs == rhs
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharRegime {
    Not2,
    Char2,
}

/// A parametrised set of automorphisms: `t` ranges over the field (and `s`
/// too when `param_count == 2`), except where an excluded polynomial vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamFamily {
    pub entries: SymMatrix,
    /// Polynomials in `t` that must be nonzero.
    pub excluded: Vec<SymPoly>,
    pub param_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutDescription {
    /// Isolated elements; entries may involve `w`, a root of `x^2 + x + 1`.
    pub finite_elements: Vec<SymMatrix>,
    pub families: Vec<ParamFamily>,
    pub char_regime: CharRegime,
}

fn c(n: i64) -> SymPoly {
    SymPoly::constant(n)
}

fn v(x: Var) -> SymPoly {
    SymPoly::var(x)
}

fn identity() -> SymMatrix {
    [[c(1), c(0)], [c(0), c(1)]]
}

fn swap() -> SymMatrix {
    [[c(0), c(1)], [c(1), c(0)]]
}

/// The automorphism group of the canonical form `key`.
pub fn aut_closed_form<F: Field>(f: &F, key: &CanonicalKey<F::Elem>) -> Result<AutDescription> {
    let char2 = f.characteristic() == 2;
    let (t, s, w) = (v(Var::T), v(Var::S), v(Var::W));
    let w2 = w.pow(2);
    let mut finite = Vec::new();
    let mut families = Vec::new();
    match key.label() {
        Label::E0 => return Err(Error::UnsupportedKey("E0".into())),
        Label::E1 => {
            finite.push(identity());
            if key.params()[0] == key.params()[1] {
                finite.push(swap());
            }
        }
        Label::E2 if !f.is_zero(&key.params()[0]) => finite.push(identity()),
        Label::E2 => families.push(ParamFamily {
            entries: [[c(1), c(0)], [t.clone(), &c(1) - &t]],
            excluded: vec![&t - &c(1)],
            param_count: 1,
        }),
        Label::E3 => {
            finite.push(identity());
            finite.push(swap());
            // In characteristic 3 the only cube root of unity is 1, so the
            // remaining four elements collapse onto these two.
            if f.characteristic() != 3 {
                finite.push([[w.clone(), c(0)], [c(0), w2.clone()]]);
                finite.push([[w2.clone(), c(0)], [c(0), w.clone()]]);
                finite.push([[c(0), w.clone()], [w2.clone(), c(0)]]);
                finite.push([[c(0), w2.clone()], [w.clone(), c(0)]]);
            }
        }
        Label::E4 => {
            finite.push(identity());
            if !char2 {
                finite.push([[c(1), c(0)], [c(0), c(-1)]]);
            }
        }
        Label::E5 => families.push(ParamFamily {
            entries: [[t.clone(), &c(1) - &t], [&c(1) - &t, t.clone()]],
            excluded: if char2 { vec![] } else { vec![&(&c(2) * &t) - &c(1)] },
            param_count: 1,
        }),
        Label::E6 => families.push(ParamFamily {
            entries: [[t.pow(2), s], [c(0), t.clone()]],
            excluded: vec![t],
            param_count: 2,
        }),
    }
    Ok(AutDescription {
        finite_elements: finite,
        families,
        char_regime: if char2 { CharRegime::Char2 } else { CharRegime::Not2 },
    })
}

fn unity_root<F: Field>(f: &F, elements: &[F::Elem]) -> Option<F::Elem> {
    elements
        .iter()
        .find(|x| f.is_zero(&f.add(&f.add(&f.square(x), x), &f.one())))
        .cloned()
}

/// Every automorphism described by `desc` over a finite field, without
/// duplicates, isolated elements first.
pub fn aut_instantiate<F: Field>(f: &F, desc: &AutDescription) -> Result<Vec<Mat2<F::Elem>>> {
    if f.order().is_none() {
        return Err(Error::InfiniteField);
    }
    let elements = f.elements()?;
    let w = unity_root(f, &elements);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |m: Mat2<F::Elem>| {
        if seen.insert(m.clone()) {
            out.push(m);
        }
    };
    for m in &desc.finite_elements {
        let needs_w = m.iter().flatten().any(|p| p.uses(Var::W));
        if needs_w && w.is_none() {
            continue;
        }
        push(eval_matrix(f, m, &Assignment { w: w.clone(), ..Default::default() }));
    }
    for fam in &desc.families {
        for t in &elements {
            let at_t = Assignment { t: Some(t.clone()), ..Default::default() };
            if fam.excluded.iter().any(|p| f.is_zero(&p.eval(f, &at_t))) {
                continue;
            }
            if fam.param_count == 2 {
                for s in &elements {
                    let at = Assignment { s: Some(s.clone()), ..at_t.clone() };
                    push(eval_matrix(f, &fam.entries, &at));
                }
            } else {
                push(eval_matrix(f, &fam.entries, &at_t));
            }
        }
    }
    Ok(out)
}

fn exclusion_text<F: Field>(f: &F, p: &SymPoly) -> String {
    if let Some((a, b)) = p.as_linear_in_t() {
        let (a, b) = (f.from_i64(a), f.from_i64(b));
        if let Ok(root) = f.div(&f.neg(&b), &a) {
            return format!("t != {}", f.format_elem(&root));
        }
    }
    format!("{p} != 0")
}

impl AutDescription {
    pub fn uses_unity_root(&self) -> bool {
        self.finite_elements.iter().flatten().flatten().any(|p| p.uses(Var::W))
    }

    /// Group order over a finite field; `None` over the rationals.
    pub fn order_over<F: Field>(&self, f: &F) -> Option<usize> {
        aut_instantiate(f, self).ok().map(|v| v.len())
    }

    pub fn to_json<F: Field>(&self, f: &F) -> Value {
        let families: Vec<Value> = self
            .families
            .iter()
            .map(|fam| {
                let params = &["t", "s"][..fam.param_count];
                json!({
                    "entries": sym_matrix_text(&fam.entries),
                    "excluded": fam.excluded.iter().map(|p| exclusion_text(f, p)).collect::<Vec<_>>(),
                    "params": params,
                })
            })
            .collect();
        let mut out = json!({
            "finite": self.finite_elements.iter().map(sym_matrix_text).collect::<Vec<_>>(),
            "families": families,
            "order_over_field": self.order_over(f),
            "char_regime": match self.char_regime {
                CharRegime::Not2 => "not2",
                CharRegime::Char2 => "char2",
            },
        });
        if self.uses_unity_root() {
            out["w"] = json!("root of x^2 + x + 1");
        }
        out
    }
}
