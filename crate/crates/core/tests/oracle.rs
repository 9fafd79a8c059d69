mod common;

use std::collections::{HashMap, HashSet};

use common::*;
use evoalg::aut::{aut_closed_form, aut_instantiate};
use evoalg::classify::{canonical_msc, classify, same_key, Label};
use evoalg::der::{der_check, der_solve};
use evoalg::field::{Field, GaloisField};
use evoalg::oracle::{brute_aut, brute_der, census, gl2_enumerate};
use evoalg::tensor::{mat2_inv, mat2_mul, transform, Msc};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn gl2_orders() {
    for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)] {
        let f = gf(p, k);
        let q = f.order().unwrap() as usize;
        let gl = gl2_enumerate(&f).unwrap();
        assert_eq!(gl.len(), (q * q - 1) * (q * q - q));
        let distinct: HashSet<_> = gl.iter().map(|g| *g.ginv()).collect();
        assert_eq!(distinct.len(), gl.len());
    }
}

fn orbit_stabilizer(f: &GaloisField) {
    let gl = gl2_enumerate(f).unwrap();
    for key in all_keys(f) {
        let e = canonical_msc(f, &key).unwrap().to_msc(f);
        let orbit: HashSet<Msc<_>> = gl.iter().map(|g| transform(f, &e, g)).collect();
        let aut = brute_aut(f, &e).unwrap();
        assert_eq!(orbit.len() * aut.len(), gl.len(), "{}", key.to_text(f));
    }
}

#[test]
fn orbit_stabilizer_gf3_gf4_gf5() {
    orbit_stabilizer(&gf(3, 1));
    orbit_stabilizer(&gf(2, 2));
    orbit_stabilizer(&gf(5, 1));
}

#[test]
fn closed_form_groups_match_brute_force() {
    for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)] {
        let f = gf(p, k);
        for key in all_keys(&f) {
            let closed: HashSet<_> = aut_instantiate(&f, &aut_closed_form(&f, &key).unwrap())
                .unwrap()
                .into_iter()
                .collect();
            let brute: HashSet<_> = brute_aut(&f, &canonical_msc(&f, &key).unwrap().to_msc(&f))
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(closed, brute, "{} over GF({})", key.to_text(&f), f.order().unwrap());
        }
    }
}

#[test]
fn aut_order_formulas() {
    for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (2, 3), (13, 1)] {
        let f = gf(p, k);
        let q = f.order().unwrap() as usize;
        let order = |label: Label, params: Vec<i64>| {
            let key = evoalg::classify::CanonicalKey::new(&f, label, params.into_iter().map(|x| f.from_i64(x)).collect())
                .unwrap();
            aut_instantiate(&f, &aut_closed_form(&f, &key).unwrap()).unwrap().len()
        };
        let char2 = p == 2;
        let cube_roots_split = p != 3 && (q - 1).is_multiple_of(3);
        assert_eq!(order(Label::E6, vec![]), q * (q - 1));
        assert_eq!(order(Label::E5, vec![]), if char2 { q } else { q - 1 });
        assert_eq!(order(Label::E2, vec![0]), q - 1);
        assert_eq!(order(Label::E4, vec![]), if char2 { 1 } else { 2 });
        assert_eq!(order(Label::E3, vec![]), if cube_roots_split { 6 } else { 2 });
    }
}

#[test]
fn brute_automorphisms_form_groups() {
    let f = gf(5, 1);
    for key in all_keys(&f) {
        let group = brute_aut(&f, &canonical_msc(&f, &key).unwrap().to_msc(&f)).unwrap();
        let set: HashSet<_> = group.iter().cloned().collect();
        for g in &group {
            assert!(set.contains(&mat2_inv(&f, g).unwrap()));
            for h in &group {
                assert!(set.contains(&mat2_mul(&f, g, h)));
            }
        }
    }
}

#[test]
fn brute_derivations_are_the_solver_span() {
    for f in [gf(3, 1), gf(2, 2)] {
        let el = f.elements().unwrap();
        for key in all_keys(&f) {
            let e = canonical_msc(&f, &key).unwrap().to_msc(&f);
            let brute: HashSet<_> = brute_der(&f, &e).unwrap().into_iter().collect();
            let span: HashSet<_> = der_solve(&f, &e).span(&f, &el).into_iter().collect();
            assert_eq!(brute, span, "{}", key.to_text(&f));
        }
        // arbitrary, non-evolution structure matrices as well
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..40 {
            let e = random_msc::<GaloisField>(&mut || el[rng.gen_range(0..el.len())]);
            let brute: HashSet<_> = brute_der(&f, &e).unwrap().into_iter().collect();
            let span: HashSet<_> = der_solve(&f, &e).span(&f, &el).into_iter().collect();
            assert_eq!(brute, span);
        }
    }
}

#[test]
fn derivations_are_conjugation_covariant() {
    let f = gf(7, 1);
    let mut rng = StdRng::seed_from_u64(9);
    for key in all_keys(&f) {
        let e = canonical_msc(&f, &key).unwrap().to_msc(&f);
        let auts = brute_aut(&f, &e).unwrap();
        let ders = der_solve(&f, &e);
        for d in ders.basis() {
            for _ in 0..5 {
                let g = &auts[rng.gen_range(0..auts.len())];
                let conj = mat2_mul(&f, g, &mat2_mul(&f, d, &mat2_inv(&f, g).unwrap()));
                assert!(der_check(&f, &e, &conj), "{}", key.to_text(&f));
            }
        }
    }
}

#[test]
fn derivation_closure_on_all_keys() {
    for (p, k) in [(3, 1), (2, 2), (5, 1), (7, 1), (3, 2)] {
        let f = gf(p, k);
        check_der_lie_closure(&f, &all_keys(&f)).unwrap();
        check_aut_group_closure(&f, &all_keys(&f)).unwrap();
    }
}

/// Keys over GF(3) agree with isomorphism over GF(9), where every square
/// root exists and cube roots are automatic in characteristic 3.
#[test]
fn keys_match_isomorphism_over_gf9() {
    let base = gf(3, 1);
    let big = gf(3, 2);
    let emb = base.embedding_into(&big).unwrap();
    let small = all_evolution(&base);
    let index: HashMap<Msc<_>, usize> = small
        .iter()
        .enumerate()
        .map(|(i, e)| (e.map::<GaloisField>(&emb).to_msc(&big), i))
        .collect();
    let gl = gl2_enumerate(&big).unwrap();
    let mut orbit = vec![usize::MAX; small.len()];
    for i in 0..small.len() {
        if orbit[i] != usize::MAX {
            continue;
        }
        let e = small[i].map::<GaloisField>(&emb).to_msc(&big);
        for g in &gl {
            if let Some(&j) = index.get(&transform(&big, &e, g)) {
                orbit[j] = i;
            }
        }
    }
    let keys: Vec<_> = small.iter().map(|e| classify(&base, e).key).collect();
    for i in 0..small.len() {
        for j in 0..small.len() {
            assert_eq!(
                orbit[i] == orbit[j],
                same_key(&base, &keys[i], &keys[j]),
                "{:?} vs {:?}",
                small[i],
                small[j]
            );
        }
    }
}

#[test]
fn census_is_independent_of_worker_count() {
    for f in [gf(3, 1), gf(2, 2)] {
        let one = census(&f, 6, 1).unwrap();
        let many = census(&f, 6, 4).unwrap();
        assert!(one.flags.all());
        assert_eq!(
            serde_json::to_string(&one.to_json()).unwrap(),
            serde_json::to_string(&many.to_json()).unwrap()
        );
        assert_eq!(one.to_csv(), many.to_csv());
    }
}

#[test]
fn census_over_gf7() {
    let report = census(&gf(7, 1), 6, 4).unwrap();
    assert!(report.flags.all(), "{:?}", report.failures);
    assert_eq!(report.total, 7usize.pow(4));
}

#[test]
fn census_with_tight_extension_bound_flags_witnesses() {
    // GF(7) needs cube roots for E3 witnesses; forbidding extensions must show up.
    let report = census(&gf(7, 1), 1, 2).unwrap();
    assert!(report.flags.keys_vs_orbits_ok);
    assert!(!report.flags.witnesses_ok);
    assert!(!report.failures.is_empty());
}
