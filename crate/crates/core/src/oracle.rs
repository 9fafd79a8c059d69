//! Brute-force ground truth over small finite fields.
//!
//! Everything here enumerates: all of `GL(2, q)`, all `q^4` evolution MSCs,
//! all `q^4` candidate derivations. The census cross-checks the classifier
//! and the closed-form tables against these enumerations.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::aut::{aut_check, aut_closed_form, aut_instantiate};
use crate::classify::{canonical_msc, classify, same_key, CanonicalKey, Label};
use crate::der::{der_check, der_closed_form, der_solve};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::tensor::{mat2_det, transform, BasisChange, EvolutionMsc, Mat2, Msc, PreparedChange};

/// Largest field order the census accepts.
pub const CENSUS_MAX_ORDER: u64 = 16;

fn finite_elements<F: Field>(f: &F) -> Result<Vec<F::Elem>> {
    match f.order() {
        None => Err(Error::InfiniteField),
        Some(_) => f.elements(),
    }
}

/// All 2×2 matrices in lexicographic order of their row-major entries.
fn all_matrices<F: Field>(elements: &[F::Elem]) -> impl Iterator<Item = Mat2<F::Elem>> + '_ {
    let q = elements.len();
    (0..q * q * q * q).map(move |n| {
        let e = |k: usize| elements[(n / q.pow(3 - k as u32)) % q].clone();
        [[e(0), e(1)], [e(2), e(3)]]
    })
}

/// Every invertible `g^-1`, lexicographic in its row-major entries.
pub fn gl2_enumerate<F: Field>(f: &F) -> Result<Vec<BasisChange<F::Elem>>> {
    let elements = finite_elements(f)?;
    Ok(all_matrices::<F>(&elements)
        .filter_map(|m| BasisChange::new(f, m).ok())
        .collect())
}

/// The first basis change in enumeration order carrying `e` onto `target`.
pub fn brute_iso<F: Field>(
    f: &F,
    e: &EvolutionMsc<F::Elem>,
    target: &EvolutionMsc<F::Elem>,
) -> Result<Option<BasisChange<F::Elem>>> {
    let (src, dst) = (e.to_msc(f), target.to_msc(f));
    Ok(gl2_enumerate(f)?.into_iter().find(|g| transform(f, &src, g) == dst))
}

/// Every automorphism of `e`, as matrices `g`.
pub fn brute_aut<F: Field>(f: &F, e: &Msc<F::Elem>) -> Result<Vec<Mat2<F::Elem>>> {
    let elements = finite_elements(f)?;
    Ok(all_matrices::<F>(&elements)
        .filter(|g| !f.is_zero(&mat2_det(f, g)) && aut_check(f, e, g))
        .collect())
}

/// Every derivation of `e`, including the zero matrix.
pub fn brute_der<F: Field>(f: &F, e: &Msc<F::Elem>) -> Result<Vec<Mat2<F::Elem>>> {
    let elements = finite_elements(f)?;
    Ok(all_matrices::<F>(&elements).filter(|d| der_check(f, e, d)).collect())
}

/// One `GL(2, q)`-orbit restricted to evolution MSCs.
#[derive(Clone, Debug)]
pub struct OrbitRecord<E> {
    /// First member in enumeration order.
    pub representative: EvolutionMsc<E>,
    pub size: usize,
}

/// Everything the census learned about one key.
#[derive(Clone, Debug)]
pub struct KeyRecord<E> {
    pub key: CanonicalKey<E>,
    pub msc_count: usize,
    pub orbits: Vec<OrbitRecord<E>>,
    pub brute_aut_order: usize,
    /// `None` for the zero algebra, which has no tabulated group.
    pub closed_form_aut_order: Option<usize>,
    pub der_dim: usize,
    /// Largest extension degree any witness for this key needed.
    pub max_witness_degree: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsistencyFlags {
    /// Isomorphic MSCs over the base field always share a key.
    pub keys_vs_orbits_ok: bool,
    /// Every witness exists within the degree bound and checks out.
    pub witnesses_ok: bool,
    pub aut_closed_form_ok: bool,
    pub der_closed_form_ok: bool,
}

impl ConsistencyFlags {
    pub fn all(&self) -> bool {
        self.keys_vs_orbits_ok && self.witnesses_ok && self.aut_closed_form_ok && self.der_closed_form_ok
    }
}

#[derive(Clone, Debug)]
pub struct CensusReport<F: Field> {
    pub field: F,
    pub max_ext: u32,
    pub total: usize,
    pub gl_order: usize,
    pub records: Vec<KeyRecord<F::Elem>>,
    pub flags: ConsistencyFlags,
    /// Human-readable descriptions of whatever made a flag false.
    pub failures: Vec<String>,
}

fn encode_evolution<F: Field>(f: &F, e: &EvolutionMsc<F::Elem>) -> Value {
    json!(e.entries().iter().map(|x| f.encode(x)).collect::<Vec<_>>())
}

impl<F: Field> CensusReport<F> {
    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let records: Vec<Value> = self
            .records
            .iter()
            .map(|r| {
                json!({
                    "key": r.key.encode(f),
                    "msc_count": r.msc_count,
                    "orbits": r.orbits.iter().map(|o| json!({
                        "representative": encode_evolution(f, &o.representative),
                        "size": o.size,
                    })).collect::<Vec<_>>(),
                    "brute_aut_order": r.brute_aut_order,
                    "closed_form_aut_order": r.closed_form_aut_order,
                    "der_dim": r.der_dim,
                    "max_witness_degree": r.max_witness_degree,
                })
            })
            .collect();
        json!({
            "field": f.descriptor().to_json(),
            "max_ext": self.max_ext,
            "total_mscs": self.total,
            "gl_order": self.gl_order,
            "records": records,
            "consistency_flags": {
                "keys_vs_orbits_ok": self.flags.keys_vs_orbits_ok,
                "witnesses_ok": self.flags.witnesses_ok,
                "aut_closed_form_ok": self.flags.aut_closed_form_ok,
                "der_closed_form_ok": self.flags.der_closed_form_ok,
            },
            "failures": self.failures,
        })
    }

    /// `key,count,aut_order,der_dim` per key.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,count,aut_order,der_dim\n");
        for r in &self.records {
            out.push_str(&format!(
                "\"{}\",{},{},{}\n",
                r.key.to_text(&self.field),
                r.msc_count,
                r.brute_aut_order,
                r.der_dim
            ));
        }
        out
    }
}

struct Classified<E> {
    key: CanonicalKey<E>,
    degree: u32,
    witness_ok: bool,
}

/// Classifies every evolution MSC over `f` and cross-checks against brute
/// force. `jobs` sets the worker count; the report does not depend on it.
pub fn census<F: Field>(f: &F, max_ext: u32, jobs: usize) -> Result<CensusReport<F>> {
    let q = f.order().ok_or(Error::InfiniteField)?;
    if q > CENSUS_MAX_ORDER {
        return Err(Error::BudgetExceeded(format!(
            "census over a field of order {q} (limit {CENSUS_MAX_ORDER})"
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| census_inner(f, max_ext))
}

fn census_inner<F: Field>(f: &F, max_ext: u32) -> Result<CensusReport<F>> {
    let elements = f.elements()?;
    let q = elements.len();
    let index: HashMap<F::Elem, usize> = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let total = q.pow(4);
    let msc_at = |code: usize| {
        let e = |k: u32| elements[(code / q.pow(3 - k)) % q].clone();
        EvolutionMsc::new(e(0), e(1), e(2), e(3))
    };
    let code_of = |e: &EvolutionMsc<F::Elem>| {
        e.entries().iter().fold(0, |acc, x| acc * q + index[x])
    };
    let mut failures = Vec::new();

    let classified: Vec<Classified<F::Elem>> = (0..total)
        .into_par_iter()
        .map(|code| {
            let e = msc_at(code);
            let r = classify(f, &e);
            let degree = r.extension_degree(f);
            let witness_ok = degree <= max_ext && r.witness_holds(f, &e).unwrap_or(false);
            Classified {
                key: r.key,
                degree,
                witness_ok,
            }
        })
        .collect();
    for (code, c) in classified.iter().enumerate() {
        if !c.witness_ok {
            failures.push(format!(
                "witness for {:?} failed (extension degree {})",
                msc_at(code).entries().iter().map(|x| f.format_elem(x)).collect::<Vec<_>>(),
                c.degree
            ));
        }
    }
    let witnesses_ok = classified.iter().all(|c| c.witness_ok);

    let gl: Vec<PreparedChange<F::Elem>> = gl2_enumerate(f)?
        .into_iter()
        .map(|g| PreparedChange::new(f, g))
        .collect();

    // Orbits, discovered in code order so representatives are reproducible.
    let mut orbit_of = vec![usize::MAX; total];
    let mut orbits: Vec<(usize, usize)> = Vec::new();
    for code in 0..total {
        if orbit_of[code] != usize::MAX {
            continue;
        }
        let msc = msc_at(code).to_msc(f);
        let mut members: Vec<usize> = gl
            .par_iter()
            .filter_map(|g| g.apply(f, &msc).as_evolution(f).map(|e| code_of(&e)))
            .collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            orbit_of[m] = orbits.len();
        }
        orbits.push((code, members.len()));
    }

    let mut keys_vs_orbits_ok = true;
    let mut orbit_key: Vec<Option<usize>> = vec![None; orbits.len()];
    for code in 0..total {
        let o = orbit_of[code];
        match orbit_key[o] {
            None => orbit_key[o] = Some(code),
            Some(first) => {
                if !same_key(f, &classified[first].key, &classified[code].key) {
                    keys_vs_orbits_ok = false;
                    failures.push(format!(
                        "MSC codes {first} and {code} are isomorphic but got keys {} and {}",
                        classified[first].key.to_text(f),
                        classified[code].key.to_text(f)
                    ));
                }
            }
        }
    }

    // Group by key.
    let mut groups: HashMap<CanonicalKey<F::Elem>, (usize, Vec<usize>, u32)> = HashMap::new();
    for (code, c) in classified.iter().enumerate() {
        let entry = groups.entry(c.key.clone()).or_insert((0, Vec::new(), 0));
        entry.0 += 1;
        entry.2 = entry.2.max(c.degree);
        let o = orbit_of[code];
        if orbits[o].0 == code {
            entry.1.push(o);
        }
    }
    let mut keys: Vec<_> = groups.into_iter().collect();
    keys.sort_by(|a, b| a.0.cmp_with(f, &b.0));

    struct KeyCheck<E> {
        record: KeyRecord<E>,
        aut_ok: bool,
        der_ok: bool,
    }
    let checks: Vec<Result<KeyCheck<F::Elem>>> = keys
        .into_par_iter()
        .map(|(key, (count, orbit_ids, degree))| {
            let canon = canonical_msc(f, &key)?.to_msc(f);
            let brute = brute_aut(f, &canon)?;
            let solved = der_solve(f, &canon);
            let brute_der_set: HashSet<_> = brute_der(f, &canon)?.into_iter().collect();
            let span: HashSet<_> = solved.span(f, &elements).into_iter().collect();
            let mut der_ok = brute_der_set == span;
            let mut aut_ok = true;
            let mut closed_order = None;
            if key.label() != Label::E0 {
                let desc = aut_closed_form(f, &key)?;
                let inst = aut_instantiate(f, &desc)?;
                closed_order = Some(inst.len());
                let a: HashSet<_> = inst.into_iter().collect();
                let b: HashSet<_> = brute.iter().cloned().collect();
                aut_ok = a == b;
                der_ok &= der_closed_form(f, &key)? == solved;
            }
            Ok(KeyCheck {
                record: KeyRecord {
                    key,
                    msc_count: count,
                    orbits: orbit_ids
                        .iter()
                        .map(|&o| OrbitRecord {
                            representative: msc_at(orbits[o].0),
                            size: orbits[o].1,
                        })
                        .collect(),
                    brute_aut_order: brute.len(),
                    closed_form_aut_order: closed_order,
                    der_dim: solved.dim(),
                    max_witness_degree: degree,
                },
                aut_ok,
                der_ok,
            })
        })
        .collect();

    let mut records = Vec::new();
    let (mut aut_ok, mut der_ok) = (true, true);
    for c in checks {
        let c = c?;
        if !c.aut_ok {
            failures.push(format!("automorphism table disagrees for {}", c.record.key.to_text(f)));
        }
        if !c.der_ok {
            failures.push(format!("derivation table disagrees for {}", c.record.key.to_text(f)));
        }
        aut_ok &= c.aut_ok;
        der_ok &= c.der_ok;
        records.push(c.record);
    }

    Ok(CensusReport {
        field: f.clone(),
        max_ext,
        total,
        gl_order: gl.len(),
        records,
        flags: ConsistencyFlags {
            keys_vs_orbits_ok,
            witnesses_ok,
            aut_closed_form_ok: aut_ok,
            der_closed_form_ok: der_ok,
        },
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaloisField, Rationals};
    use crate::tensor::{mat2_diag, mat2_identity};

    fn canon<F: Field>(f: &F, label: Label, params: &[i64]) -> EvolutionMsc<F::Elem> {
        let key = CanonicalKey::new(f, label, params.iter().map(|&x| f.from_i64(x)).collect()).unwrap();
        canonical_msc(f, &key).unwrap()
    }

    #[test]
    fn gl2_sizes() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = GaloisField::new(p, k, None).unwrap();
            let q = f.order().unwrap() as usize;
            assert_eq!(gl2_enumerate(&f).unwrap().len(), (q * q - 1) * (q * q - q));
        }
        assert_eq!(gl2_enumerate(&Rationals).unwrap_err(), Error::InfiniteField);
    }

    #[test]
    fn brute_iso_examples() {
        let f = GaloisField::prime(7).unwrap();
        let e = canon(&f, Label::E1, &[2, 3]);
        let t = EvolutionMsc::from_i64(&f, [1, 3, 2, 1]);
        let g = brute_iso(&f, &e, &t).unwrap().unwrap();
        assert_eq!(transform(&f, &e.to_msc(&f), &g), t.to_msc(&f));
        assert_eq!(brute_iso(&f, &e, &e).unwrap().unwrap().ginv(), &mat2_identity(&f));
        let gf5 = GaloisField::prime(5).unwrap();
        assert!(brute_iso(&gf5, &canon(&gf5, Label::E4, &[]), &canon(&gf5, Label::E6, &[]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn brute_aut_examples() {
        let f = GaloisField::prime(7).unwrap();
        let e4 = canon(&f, Label::E4, &[]).to_msc(&f);
        assert_eq!(
            brute_aut(&f, &e4).unwrap(),
            vec![mat2_identity(&f), mat2_diag(&f, f.one(), f.from_i64(-1))]
        );
        assert_eq!(brute_aut(&f, &canon(&f, Label::E6, &[]).to_msc(&f)).unwrap().len(), 42);
        let gf4 = GaloisField::new(2, 2, None).unwrap();
        assert_eq!(brute_aut(&gf4, &canon(&gf4, Label::E4, &[]).to_msc(&gf4)).unwrap().len(), 1);
    }

    #[test]
    fn brute_der_examples() {
        let gf5 = GaloisField::prime(5).unwrap();
        assert_eq!(brute_der(&gf5, &canon(&gf5, Label::E1, &[2, 4]).to_msc(&gf5)).unwrap().len(), 1);
        let gf3 = GaloisField::prime(3).unwrap();
        assert_eq!(brute_der(&gf3, &canon(&gf3, Label::E6, &[]).to_msc(&gf3)).unwrap().len(), 9);
        let gf4 = GaloisField::new(2, 2, None).unwrap();
        assert_eq!(brute_der(&gf4, &canon(&gf4, Label::E5, &[]).to_msc(&gf4)).unwrap().len(), 4);
    }

    #[test]
    fn census_gf3() {
        let f = GaloisField::prime(3).unwrap();
        let report = census(&f, 6, 2).unwrap();
        assert!(report.flags.all(), "{:?}", report.failures);
        assert_eq!(report.records.iter().map(|r| r.msc_count).sum::<usize>(), 81);
        let orbit_total: usize = report.records.iter().flat_map(|r| &r.orbits).map(|o| o.size).sum();
        assert_eq!(orbit_total, 81);
    }

    #[test]
    fn census_budget() {
        let f = GaloisField::prime(17).unwrap();
        assert!(matches!(census(&f, 6, 1), Err(Error::BudgetExceeded(_))));
    }
}
