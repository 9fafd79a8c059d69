//! Property checks shared by the acceptance harness and the regular suites.
//! Each check returns the number of cases examined, or a description of the
//! first counterexample.

#![allow(dead_code)]

use std::collections::HashSet;

use evoalg::aut::{aut_check, aut_closed_form, aut_instantiate};
use evoalg::classify::{canonical_msc, classify, same_key, CanonicalKey, Label};
use evoalg::der::{der_check, der_solve, lie_bracket, DerBasis};
use evoalg::field::{Field, GaloisField, Rationals};
use evoalg::linalg::rank;
use evoalg::oracle::gl2_enumerate;
use evoalg::tensor::{
    mat2_inv, mat2_mul, transform, transform_evolution, BasisChange, EvolutionMsc, Mat2, Msc,
};
use rand::rngs::StdRng;
use rand::Rng;

pub type CheckResult = Result<usize, String>;

pub fn gf(p: u64, k: u32) -> GaloisField {
    GaloisField::new(p, k, None).expect("valid field")
}

pub fn random_gf(f: &GaloisField, rng: &mut StdRng) -> <GaloisField as Field>::Elem {
    let elements = f.elements().unwrap();
    elements[rng.gen_range(0..elements.len())]
}

pub fn random_q(rng: &mut StdRng) -> <Rationals as Field>::Elem {
    Rationals.ratio(rng.gen_range(-30..=30), rng.gen_range(1..=12)).unwrap()
}

pub fn random_msc<F: Field>(gen: &mut impl FnMut() -> F::Elem) -> Msc<F::Elem> {
    Msc::new([
        [gen(), gen(), gen(), gen()],
        [gen(), gen(), gen(), gen()],
    ])
}

pub fn random_change<F: Field>(f: &F, gen: &mut impl FnMut() -> F::Elem) -> BasisChange<F::Elem> {
    loop {
        if let Ok(c) = BasisChange::new(f, [[gen(), gen()], [gen(), gen()]]) {
            return c;
        }
    }
}

pub fn all_evolution<F: Field>(f: &F) -> Vec<EvolutionMsc<F::Elem>> {
    let el = f.elements().unwrap();
    let mut out = Vec::new();
    for a in &el {
        for b in &el {
            for c in &el {
                for d in &el {
                    out.push(EvolutionMsc::new(a.clone(), b.clone(), c.clone(), d.clone()));
                }
            }
        }
    }
    out
}

/// Every key realised over a finite field.
pub fn all_keys<F: Field>(f: &F) -> Vec<CanonicalKey<F::Elem>> {
    let el = f.elements().unwrap();
    let mut keys = Vec::new();
    for (i, b) in el.iter().enumerate() {
        for c in &el[i..] {
            if let Ok(k) = CanonicalKey::e1(f, b.clone(), c.clone()) {
                keys.push(k);
            }
        }
    }
    keys.extend(el.iter().map(|b| CanonicalKey::e2(b.clone())));
    for label in [Label::E3, Label::E4, Label::E5, Label::E6] {
        keys.push(CanonicalKey::plain(label).unwrap());
    }
    keys
}

/// `transform(A, I) = A` and `transform(transform(A, g1), g2) = transform(A, g1 then g2)`.
pub fn check_group_action<F: Field>(f: &F, cases: usize, mut gen: impl FnMut() -> F::Elem) -> CheckResult {
    let id = BasisChange::identity(f);
    for _ in 0..cases {
        let a = random_msc::<F>(&mut gen);
        let g1 = random_change(f, &mut gen);
        let g2 = random_change(f, &mut gen);
        if transform(f, &a, &id) != a {
            return Err(format!("identity moved {a:?}"));
        }
        let stepwise = transform(f, &transform(f, &a, &g1), &g2);
        if stepwise != transform(f, &a, &g1.then(f, &g2)) {
            return Err(format!("composition failed for {a:?}, {g1:?}, {g2:?}"));
        }
        if transform(f, &transform(f, &a, &g1), &g1.inverse(f)) != a {
            return Err(format!("inverse failed for {a:?}, {g1:?}"));
        }
    }
    Ok(cases)
}

fn key_invariance_case<F: Field>(
    f: &F,
    e: &EvolutionMsc<F::Elem>,
    g: &BasisChange<F::Elem>,
) -> Result<bool, String> {
    let Some(image) = transform(f, &e.to_msc(f), g).as_evolution(f) else {
        return Ok(false);
    };
    let (k1, k2) = (classify(f, e).key, classify(f, &image).key);
    if same_key(f, &k1, &k2) {
        Ok(true)
    } else {
        Err(format!("{e:?} -> {image:?} changed key {} -> {}", k1.to_text(f), k2.to_text(f)))
    }
}

/// Every evolution-preserving basis change keeps the key, over all of `f`.
pub fn check_key_invariance_exhaustive<F: Field>(f: &F) -> CheckResult {
    let gl = gl2_enumerate(f).unwrap();
    let mut n = 0;
    for e in all_evolution(f) {
        for g in &gl {
            n += key_invariance_case(f, &e, g)? as usize;
        }
    }
    Ok(n)
}

/// Random evolution MSCs, each moved by a random evolution-preserving change.
pub fn check_key_invariance_random(f: &GaloisField, cases: usize, rng: &mut StdRng) -> CheckResult {
    let gl = gl2_enumerate(f).unwrap();
    for _ in 0..cases {
        let e = EvolutionMsc::new(random_gf(f, rng), random_gf(f, rng), random_gf(f, rng), random_gf(f, rng));
        let msc = e.to_msc(f);
        let preserving: Vec<_> = gl.iter().filter(|g| transform(f, &msc, g).is_evolution(f)).collect();
        let g = preserving[rng.gen_range(0..preserving.len())];
        if !key_invariance_case(f, &e, g)? {
            return Err("chosen change does not preserve evolution form".into());
        }
    }
    Ok(cases)
}

/// The closed-form transformed entries agree with the generic transform.
pub fn check_closed_form_transform<F: Field>(f: &F) -> CheckResult {
    let gl = gl2_enumerate(f).unwrap();
    let mut n = 0;
    for e in all_evolution(f) {
        let msc = e.to_msc(f);
        for g in &gl {
            let closed = transform_evolution(f, &e, g).map_err(|err| err.to_string())?.to_msc();
            if closed != transform(f, &msc, g) {
                return Err(format!("closed form disagrees for {e:?}, {g:?}"));
            }
            n += 1;
        }
    }
    Ok(n)
}

/// A singular `[[a,b],[c,d]]` stays singular on the transformed `α'_1, α'_4, β'_1, β'_4`.
pub fn check_rank_degeneration<F: Field>(f: &F) -> CheckResult {
    let gl = gl2_enumerate(f).unwrap();
    let mut n = 0;
    for e in all_evolution(f) {
        let det = f.sub(&f.mul(&e.a, &e.d), &f.mul(&e.b, &e.c));
        if !f.is_zero(&det) {
            continue;
        }
        for g in &gl {
            let t = transform_evolution(f, &e, g).map_err(|err| err.to_string())?;
            let det2 = f.sub(&f.mul(&t.alpha[0], &t.beta[3]), &f.mul(&t.alpha[3], &t.beta[0]));
            if !f.is_zero(&det2) {
                return Err(format!("rank grew for {e:?} under {g:?}"));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn in_span<F: Field>(f: &F, basis: &DerBasis<F::Elem>, m: &Mat2<F::Elem>) -> bool {
    let flat = |m: &Mat2<F::Elem>| vec![m[0][0].clone(), m[0][1].clone(), m[1][0].clone(), m[1][1].clone()];
    let mut rows: Vec<Vec<F::Elem>> = basis.basis().iter().map(flat).collect();
    let before = rank(f, &rows);
    rows.push(flat(m));
    rank(f, &rows) == before
}

/// Brackets of derivation basis pairs are derivations in the same span.
pub fn check_der_lie_closure<F: Field>(f: &F, keys: &[CanonicalKey<F::Elem>]) -> CheckResult {
    let mut n = 0;
    for key in keys {
        let e = canonical_msc(f, key).unwrap().to_msc(f);
        let d = der_solve(f, &e);
        for x in d.basis() {
            if !der_check(f, &e, x) {
                return Err(format!("basis element fails for {}", key.to_text(f)));
            }
            for y in d.basis() {
                let br = lie_bracket(f, x, y);
                if !der_check(f, &e, &br) || !in_span(f, &d, &br) {
                    return Err(format!("bracket leaves Der({})", key.to_text(f)));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Instantiated automorphism sets are closed under products and inverses.
pub fn check_aut_group_closure<F: Field>(f: &F, keys: &[CanonicalKey<F::Elem>]) -> CheckResult {
    let mut n = 0;
    for key in keys {
        let e = canonical_msc(f, key).unwrap().to_msc(f);
        let group = aut_instantiate(f, &aut_closed_form(f, key).unwrap()).unwrap();
        let set: HashSet<_> = group.iter().cloned().collect();
        for g in &group {
            if !aut_check(f, &e, g) {
                return Err(format!("non-automorphism listed for {}", key.to_text(f)));
            }
            let inv = mat2_inv(f, g).map_err(|err| err.to_string())?;
            if !set.contains(&inv) {
                return Err(format!("inverse missing in Aut({})", key.to_text(f)));
            }
            for h in &group {
                if !set.contains(&mat2_mul(f, g, h)) {
                    return Err(format!("product missing in Aut({})", key.to_text(f)));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}
