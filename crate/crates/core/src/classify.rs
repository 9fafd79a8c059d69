//! Classification of 2-dimensional evolution algebras into canonical forms.
//!
//! The decision tree works with exact zero tests on `(a, b, c, d)` and the
//! determinant `ad - bc`. Keys and their parameters only ever use field
//! operations of the base field; a witness may need a square or cube root, in
//! which case a finite field is extended and the rationals report the
//! polynomial that has no rational root.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, Poly};
use crate::tensor::{mat2_diag, transform, BasisChange, EvolutionMsc, Mat2};

/// Canonical form labels. `E0` is the zero algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    E0,
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
}

impl Label {
    pub const ALL: [Label; 7] = [
        Label::E0,
        Label::E1,
        Label::E2,
        Label::E3,
        Label::E4,
        Label::E5,
        Label::E6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::E0 => "E0",
            Label::E1 => "E1",
            Label::E2 => "E2",
            Label::E3 => "E3",
            Label::E4 => "E4",
            Label::E5 => "E5",
            Label::E6 => "E6",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Label::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown label {s:?}")))
    }

    fn param_count(self) -> usize {
        match self {
            Label::E1 => 2,
            Label::E2 => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification label with parameters: `E1{b, c}` (stored sorted) or
/// `E2(b)`; no parameters otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalKey<E> {
    label: Label,
    params: Vec<E>,
}

impl<E: Clone + PartialEq> CanonicalKey<E> {
    /// Keys without parameters.
    pub fn plain(label: Label) -> Result<Self> {
        if label.param_count() != 0 {
            return Err(Error::InvalidParams(format!("{label} needs parameters")));
        }
        Ok(CanonicalKey { label, params: Vec::new() })
    }

    /// `E1{b, c}`; requires `bc != 1`.
    pub fn e1<F: Field<Elem = E>>(f: &F, b: E, c: E) -> Result<Self> {
        if f.is_one(&f.mul(&b, &c)) {
            return Err(Error::InvalidParams(format!(
                "E1 parameters {} and {} multiply to 1",
                f.format_elem(&b),
                f.format_elem(&c)
            )));
        }
        let params = if f.cmp_elems(&b, &c) == Ordering::Greater {
            vec![c, b]
        } else {
            vec![b, c]
        };
        Ok(CanonicalKey {
            label: Label::E1,
            params,
        })
    }

    pub fn e2(b: E) -> Self {
        CanonicalKey {
            label: Label::E2,
            params: vec![b],
        }
    }

    pub fn new<F: Field<Elem = E>>(f: &F, label: Label, params: Vec<E>) -> Result<Self> {
        if params.len() != label.param_count() {
            return Err(Error::InvalidParams(format!(
                "{label} takes {} parameters, got {}",
                label.param_count(),
                params.len()
            )));
        }
        match label {
            Label::E1 => {
                let mut it = params.into_iter();
                let (b, c) = (it.next().unwrap(), it.next().unwrap());
                Self::e1(f, b, c)
            }
            Label::E2 => Ok(Self::e2(params.into_iter().next().unwrap())),
            _ => Self::plain(label),
        }
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn params(&self) -> &[E] {
        &self.params
    }

    /// Label order, then parameters in canonical element order.
    pub fn cmp_with<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Ordering {
        self.label.cmp(&other.label).then_with(|| {
            self.params
                .iter()
                .zip(&other.params)
                .map(|(x, y)| f.cmp_elems(x, y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    }

    pub fn encode<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "label": self.label.as_str(),
            "params": self.params.iter().map(|p| f.encode(p)).collect::<Vec<_>>(),
        })
    }

    pub fn decode<F: Field<Elem = E>>(f: &F, v: &Value) -> Result<Self> {
        let label = v
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("key needs a \"label\"".into()))?;
        let params = match v.get("params") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(items)) => items.iter().map(|x| f.decode(x)).collect::<Result<_>>()?,
            Some(_) => return Err(Error::Parse("\"params\" must be an array".into())),
        };
        Self::new(f, Label::parse(label)?, params)
    }

    pub fn to_text<F: Field<Elem = E>>(&self, f: &F) -> String {
        match self.params.as_slice() {
            [] => self.label.to_string(),
            ps => format!(
                "{}({})",
                self.label,
                ps.iter().map(|p| f.format_elem(p)).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// Label equality and parameter equality, with the `E1` pair unordered.
pub fn same_key<F: Field>(_f: &F, k1: &CanonicalKey<F::Elem>, k2: &CanonicalKey<F::Elem>) -> bool {
    if k1.label != k2.label {
        return false;
    }
    match k1.label {
        Label::E1 => {
            let (a, b) = (&k1.params, &k2.params);
            (a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0])
        }
        _ => k1.params == k2.params,
    }
}

/// The representative MSC of a key.
pub fn canonical_msc<F: Field>(f: &F, key: &CanonicalKey<F::Elem>) -> Result<EvolutionMsc<F::Elem>> {
    let int = |v: [i64; 4]| EvolutionMsc::from_i64(f, v);
    Ok(match key.label {
        Label::E0 => int([0, 0, 0, 0]),
        Label::E1 => {
            let (b, c) = (&key.params[0], &key.params[1]);
            if f.is_one(&f.mul(b, c)) {
                return Err(Error::InvalidParams("E1 parameters multiply to 1".into()));
            }
            EvolutionMsc::new(f.one(), b.clone(), c.clone(), f.one())
        }
        Label::E2 => EvolutionMsc::new(f.one(), key.params[0].clone(), f.one(), f.zero()),
        Label::E3 => int([0, 1, 1, 0]),
        Label::E4 => int([1, 1, 0, 0]),
        Label::E5 => int([1, -1, -1, 1]),
        Label::E6 => int([0, 1, 0, 0]),
    })
}

/// Which case of the decision tree was taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Zero,
    /// det ≠ 0, a ≠ 0, d ≠ 0
    C1_1,
    /// det ≠ 0, a ≠ 0, d = 0
    C1_2,
    /// det ≠ 0, a = 0, d ≠ 0
    C1_3,
    /// det ≠ 0, a = d = 0
    C1_4,
    /// proportional rows, a + bλ² ≠ 0
    C2_1_1,
    /// proportional rows, a + bλ² = 0
    C2_1_2,
    /// second row zero, a ≠ 0
    C2_2_1,
    /// second row zero, a = 0
    C2_2_2,
    /// first row zero; reduced to the second-row-zero case by swapping
    C2_3,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Zero => "zero",
            CaseTag::C1_1 => "1.1",
            CaseTag::C1_2 => "1.2",
            CaseTag::C1_3 => "1.3",
            CaseTag::C1_4 => "1.4",
            CaseTag::C2_1_1 => "2.1.1",
            CaseTag::C2_1_2 => "2.1.2",
            CaseTag::C2_2_1 => "2.2.1",
            CaseTag::C2_2_2 => "2.2.2",
            CaseTag::C2_3 => "2.3",
        }
    }
}

/// Outcome of [`classify`].
#[derive(Clone, Debug)]
pub struct ClassificationResult<F: Field> {
    pub key: CanonicalKey<F::Elem>,
    /// `g^-1` with `transform(E, witness) = canonical_msc(key)` over `witness_field`.
    pub witness: Option<BasisChange<F::Elem>>,
    pub witness_field: F,
    /// Base field into `witness_field`.
    pub embedding: F::Embedding,
    /// Set when a root needed by the witness does not exist (rationals only).
    pub needs_extension: Option<Poly<F::Elem>>,
    pub trace: Vec<CaseTag>,
    /// Row proportionality factor, `(c, d) = λ (a, b)`.
    pub lambda: Option<F::Elem>,
}

impl<F: Field> ClassificationResult<F> {
    /// Degree of `witness_field` over the base field.
    pub fn extension_degree(&self, base: &F) -> u32 {
        self.witness_field.degree() / base.degree()
    }

    /// Recomputes `transform(E, witness)` and compares with the canonical MSC.
    pub fn witness_holds(&self, base: &F, e: &EvolutionMsc<F::Elem>) -> Result<bool> {
        let Some(w) = &self.witness else {
            return Ok(false);
        };
        let k = &self.witness_field;
        let lifted = e.map::<F>(&self.embedding).to_msc(k);
        let target = canonical_msc(base, &self.key)?.map::<F>(&self.embedding).to_msc(k);
        Ok(transform(k, &lifted, w) == target)
    }
}

/// How to build the witness once the key is known.
enum Recipe<E> {
    Rational(BasisChange<E>),
    /// `ξ1³ = 1/(b c²)`, `η2 = c ξ1²`; for `a = d = 0`.
    CubeRoot { b: E, c: E },
    /// `ξ1 = 1/a`, `η2² = 1/(ab)` on `[[a,0,0,b],[0,0,0,0]]`, after `pre`.
    SqrtRow { a: E, b: E, pre: Option<BasisChange<E>> },
    /// Proportional rows with `a, b ≠ 0` and `s = a + bλ² ≠ 0`.
    SqrtProportional { a: E, b: E, lambda: E },
}

/// `g^-1` carrying `[[1,0,0,0],[0,0,0,0]]` onto `E2(0)`: new basis `e1 + e2`, `-e2`.
fn idempotent_to_e2_zero<F: Field>(f: &F) -> BasisChange<F::Elem> {
    BasisChange::new(f, [[f.one(), f.zero()], [f.one(), f.neg(&f.one())]]).expect("invertible")
}

fn inv<F: Field>(f: &F, x: &F::Elem) -> F::Elem {
    f.inv(x).expect("nonzero by case analysis")
}

fn change<F: Field>(f: &F, m: Mat2<F::Elem>) -> BasisChange<F::Elem> {
    BasisChange::new(f, m).expect("invertible by case analysis")
}

/// Classifies an evolution MSC.
pub fn classify<F: Field>(f: &F, e: &EvolutionMsc<F::Elem>) -> ClassificationResult<F> {
    let (a, b, c, d) = (&e.a, &e.b, &e.c, &e.d);
    let nz = |x: &F::Elem| !f.is_zero(x);
    let mut trace = Vec::new();
    let mut lambda = None;

    let (key, recipe) = if e.is_zero(f) {
        trace.push(CaseTag::Zero);
        (
            CanonicalKey::plain(Label::E0).unwrap(),
            Recipe::Rational(BasisChange::identity(f)),
        )
    } else if nz(&f.sub(&f.mul(a, d), &f.mul(b, c))) {
        match (nz(a), nz(d)) {
            (true, true) => {
                trace.push(CaseTag::C1_1);
                let (ia, id) = (inv(f, a), inv(f, d));
                let p = f.mul(&f.mul(a, b), &f.square(&id));
                let q = f.mul(&f.mul(c, d), &f.square(&ia));
                let key = CanonicalKey::e1(f, p.clone(), q).expect("bc/(ad) != 1 when det != 0");
                let mut w = change(f, mat2_diag(f, ia, id));
                if key.params[0] != p {
                    w = w.then(f, &BasisChange::swap(f));
                }
                (key, Recipe::Rational(w))
            }
            (true, false) => {
                trace.push(CaseTag::C1_2);
                let ia = inv(f, a);
                let param = f.mul(&f.mul(b, &f.square(c)), &f.pow(&ia, 3));
                let w = change(f, mat2_diag(f, ia.clone(), f.mul(c, &f.square(&ia))));
                (CanonicalKey::e2(param), Recipe::Rational(w))
            }
            (false, true) => {
                trace.push(CaseTag::C1_3);
                let id = inv(f, d);
                let param = f.mul(&f.mul(c, &f.square(b)), &f.pow(&id, 3));
                let w = BasisChange::swap(f).then(f, &change(f, mat2_diag(f, id.clone(), f.mul(b, &f.square(&id)))));
                (CanonicalKey::e2(param), Recipe::Rational(w))
            }
            (false, false) => {
                trace.push(CaseTag::C1_4);
                (
                    CanonicalKey::plain(Label::E3).unwrap(),
                    Recipe::CubeRoot { b: b.clone(), c: c.clone() },
                )
            }
        }
    } else if (!nz(a) && !nz(b)) || (!nz(c) && !nz(d)) {
        let (work, pre) = if !nz(c) && !nz(d) {
            (e.clone(), None)
        } else {
            trace.push(CaseTag::C2_3);
            (e.swapped(), Some(BasisChange::swap(f)))
        };
        let with_pre = |w: BasisChange<F::Elem>| match &pre {
            Some(p) => p.then(f, &w),
            None => w,
        };
        let (a, b) = (&work.a, &work.b);
        if nz(a) {
            trace.push(CaseTag::C2_2_1);
            if nz(b) {
                (
                    CanonicalKey::plain(Label::E4).unwrap(),
                    Recipe::SqrtRow {
                        a: a.clone(),
                        b: b.clone(),
                        pre: pre.clone(),
                    },
                )
            } else {
                let w = change(f, mat2_diag(f, inv(f, a), f.one())).then(f, &idempotent_to_e2_zero(f));
                (CanonicalKey::e2(f.zero()), Recipe::Rational(with_pre(w)))
            }
        } else {
            trace.push(CaseTag::C2_2_2);
            let w = change(f, mat2_diag(f, b.clone(), f.one()));
            (CanonicalKey::plain(Label::E6).unwrap(), Recipe::Rational(with_pre(w)))
        }
    } else {
        let lam = if nz(a) { f.div(c, a).unwrap() } else { f.div(d, b).unwrap() };
        lambda = Some(lam.clone());
        let s = f.add(a, &f.mul(b, &f.square(&lam)));
        if nz(&s) {
            trace.push(CaseTag::C2_1_1);
            if nz(a) && nz(b) {
                (
                    CanonicalKey::plain(Label::E4).unwrap(),
                    Recipe::SqrtProportional {
                        a: a.clone(),
                        b: b.clone(),
                        lambda: lam,
                    },
                )
            } else {
                let first = if nz(a) {
                    // b = 0: ξ2 = λξ1, η1 = 0
                    let ia = inv(f, a);
                    change(f, [[ia.clone(), f.zero()], [f.mul(&lam, &ia), f.one()]])
                } else {
                    // a = 0: ξ2 = λξ1, η2 = 0
                    let blam = f.mul(b, &lam);
                    let xi1 = inv(f, &f.mul(&blam, &lam));
                    change(f, [[xi1, f.one()], [inv(f, &blam), f.zero()]])
                };
                (
                    CanonicalKey::e2(f.zero()),
                    Recipe::Rational(first.then(f, &idempotent_to_e2_zero(f))),
                )
            }
        } else {
            trace.push(CaseTag::C2_1_2);
            let w = change(f, mat2_diag(f, inv(f, a), inv(f, &f.mul(b, &lam))));
            (CanonicalKey::plain(Label::E5).unwrap(), Recipe::Rational(w))
        }
    };

    let mut result = ClassificationResult {
        key,
        witness: None,
        witness_field: f.clone(),
        embedding: f.identity_embedding(),
        needs_extension: None,
        trace,
        lambda,
    };
    resolve_witness(f, recipe, &mut result);
    result
}

/// Builds the witness over the root's field from the root itself.
type WitnessBuilder<F> = Box<dyn Fn(&F, &<F as Field>::Embedding, <F as Field>::Elem) -> BasisChange<<F as Field>::Elem>>;

fn resolve_witness<F: Field>(f: &F, recipe: Recipe<F::Elem>, out: &mut ClassificationResult<F>) {
    let (poly, build): (Poly<F::Elem>, WitnessBuilder<F>) = match recipe {
        Recipe::Rational(w) => {
            out.witness = Some(w);
            return;
        }
        Recipe::CubeRoot { b, c } => {
            let r = inv(f, &f.mul(&b, &f.square(&c)));
            let poly = Poly::binomial(f, 3, &r);
            (
                poly,
                Box::new(move |k: &F, emb: &F::Embedding, xi1: F::Elem| {
                    let eta2 = k.mul(&emb.apply(&c), &k.square(&xi1));
                    change(k, mat2_diag(k, xi1, eta2))
                }),
            )
        }
        Recipe::SqrtRow { a, b, pre } => {
            let r = inv(f, &f.mul(&a, &b));
            let poly = Poly::binomial(f, 2, &r);
            (
                poly,
                Box::new(move |k: &F, emb: &F::Embedding, eta2: F::Elem| {
                    let w = change(k, mat2_diag(k, k.inv(&emb.apply(&a)).unwrap(), eta2));
                    match &pre {
                        Some(p) => p.map::<F>(emb).then(k, &w),
                        None => w,
                    }
                }),
            )
        }
        Recipe::SqrtProportional { a, b, lambda } => {
            let s = f.add(&a, &f.mul(&b, &f.square(&lambda)));
            let r = f
                .div(&f.mul(&b, &f.square(&lambda)), &f.mul(&a, &f.square(&s)))
                .expect("a, s nonzero");
            let poly = Poly::binomial(f, 2, &r);
            (
                poly,
                Box::new(move |k: &F, emb: &F::Embedding, eta1: F::Elem| {
                    let (a, b, lam, s) = (emb.apply(&a), emb.apply(&b), emb.apply(&lambda), emb.apply(&s));
                    let xi1 = k.inv(&s).unwrap();
                    let xi2 = k.mul(&lam, &xi1);
                    let eta2 = k.neg(&k.div(&k.mul(&a, &eta1), &k.mul(&b, &lam)).unwrap());
                    change(k, [[xi1, eta1], [xi2, eta2]])
                }),
            )
        }
    };
    match f.find_root(&poly) {
        Ok(ext) => {
            out.witness = Some(build(&ext.field, &ext.embedding, ext.root));
            out.witness_field = ext.field;
            out.embedding = ext.embedding;
        }
        Err(_) => out.needs_extension = Some(poly),
    }
}

/// A basis change between two algebras over a common extension.
#[derive(Clone, Debug)]
pub struct IsoWitness<F: Field> {
    pub field: F,
    pub embedding: F::Embedding,
    pub change: BasisChange<F::Elem>,
}

/// Finds `g^-1` with `transform(E, g) = F'` when the keys agree.
pub fn iso_test<F: Field>(
    f: &F,
    e: &EvolutionMsc<F::Elem>,
    target: &EvolutionMsc<F::Elem>,
) -> Result<Option<IsoWitness<F>>> {
    let re = classify(f, e);
    let rt = classify(f, target);
    if !same_key(f, &re.key, &rt.key) {
        return Ok(None);
    }
    for r in [&re, &rt] {
        if let Some(p) = &r.needs_extension {
            return Err(Error::NeedsExtension { poly: p.to_text(f) });
        }
    }
    let (we, wt) = (re.witness.clone().unwrap(), rt.witness.clone().unwrap());
    let (field, embedding, we, wt) = if re.witness_field == rt.witness_field {
        (re.witness_field, re.embedding, we, wt)
    } else if re.embedding.is_identity() {
        let lifted = we.map::<F>(&rt.embedding);
        (rt.witness_field, rt.embedding, lifted, wt)
    } else if rt.embedding.is_identity() {
        let lifted = wt.map::<F>(&re.embedding);
        (re.witness_field, re.embedding, we, lifted)
    } else {
        return Err(Error::Internal("witnesses live in incompatible extensions".into()));
    };
    let change = we.then(&field, &wt.inverse(&field));
    Ok(Some(IsoWitness {
        field,
        embedding,
        change,
    }))
}

/// Labels of the alternative six-item list of complex evolution algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AltLabel {
    E1,
    E2,
    E3,
    E4,
    /// `E5_{a,b}`, two parameters
    E5,
    /// `E6_c`, one parameter
    E6,
}

impl AltLabel {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "E1" => AltLabel::E1,
            "E2" => AltLabel::E2,
            "E3" => AltLabel::E3,
            "E4" => AltLabel::E4,
            "E5" | "E5ab" => AltLabel::E5,
            "E6" | "E6c" => AltLabel::E6,
            other => return Err(Error::Parse(format!("unknown label {other:?}"))),
        })
    }

    fn param_count(self) -> usize {
        match self {
            AltLabel::E5 => 2,
            AltLabel::E6 => 1,
            _ => 0,
        }
    }
}

/// The MSC an alternative-list label stands for.
pub fn alt_msc<F: Field>(f: &F, label: AltLabel, params: &[F::Elem]) -> Result<EvolutionMsc<F::Elem>> {
    if params.len() != label.param_count() {
        return Err(Error::InvalidParams(format!(
            "{label:?} takes {} parameters",
            label.param_count()
        )));
    }
    let int = |v: [i64; 4]| EvolutionMsc::from_i64(f, v);
    Ok(match label {
        AltLabel::E1 => int([1, 0, 0, 0]),
        AltLabel::E2 => int([1, 1, 0, 0]),
        AltLabel::E3 => int([1, -1, 1, -1]),
        AltLabel::E4 => int([0, 0, 1, 0]),
        AltLabel::E5 => EvolutionMsc::new(f.one(), params[1].clone(), params[0].clone(), f.one()),
        AltLabel::E6 => EvolutionMsc::new(f.zero(), f.one(), f.one(), params[0].clone()),
    })
}

/// Maps a label of the alternative list to the key of its canonical form.
pub fn t2_to_t1<F: Field>(f: &F, label: AltLabel, params: &[F::Elem]) -> Result<CanonicalKey<F::Elem>> {
    if params.len() != label.param_count() {
        return Err(Error::InvalidParams(format!(
            "{label:?} takes {} parameters",
            label.param_count()
        )));
    }
    match label {
        AltLabel::E1 => Ok(CanonicalKey::e2(f.zero())),
        AltLabel::E2 => CanonicalKey::plain(Label::E4),
        AltLabel::E3 => CanonicalKey::plain(Label::E5),
        AltLabel::E4 => CanonicalKey::plain(Label::E6),
        AltLabel::E5 => CanonicalKey::e1(f, params[0].clone(), params[1].clone()),
        AltLabel::E6 => {
            let c = &params[0];
            if f.is_zero(c) {
                CanonicalKey::plain(Label::E3)
            } else {
                Ok(CanonicalKey::e2(f.inv(&f.pow(c, 3))?))
            }
        }
    }
}
