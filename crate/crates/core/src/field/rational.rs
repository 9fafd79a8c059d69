use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use super::{Embedding, Field, FieldDescriptor, Poly, RootExt};
use crate::error::{Error, Result};

/// The field of rational numbers with arbitrary-precision numerators and
/// denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

/// The only embedding ℚ → ℚ.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalEmbedding;

impl Embedding<Rationals> for RationalEmbedding {
    fn apply(&self, a: &BigRational) -> BigRational {
        a.clone()
    }

    fn is_identity(&self) -> bool {
        true
    }
}

impl Rationals {
    pub fn ratio(&self, n: i64, d: i64) -> Result<BigRational> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(n.into(), d.into()))
    }

    pub fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| bad())?,
                BigInt::from_str(d.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(s).map_err(|_| bad())?, BigInt::one()),
        };
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(n, d))
    }
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

fn exact_rational_root(q: &BigRational, k: u32) -> Option<BigRational> {
    if q.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let n = exact_root(q.numer(), k)?;
    let d = exact_root(q.denom(), k)?;
    Some(BigRational::new(n, d))
}

/// Integer roots of the monic integer cubic `y^3 + b y^2 + c y + d`.
fn integer_cubic_roots(b: &BigInt, c: &BigInt, d: &BigInt) -> Vec<BigInt> {
    let f = |y: &BigInt| ((y + b) * y + c) * y + d;
    let bound = BigInt::one() + b.abs().max(c.abs()).max(d.abs());
    let mut roots = Vec::new();
    let check = |y: BigInt, roots: &mut Vec<BigInt>| {
        if f(&y).is_zero() && !roots.contains(&y) {
            roots.push(y);
        }
    };

    // Bisection for a zero on an integer interval where f is strictly monotone.
    let monotone_zero = |lo: &BigInt, hi: &BigInt| -> Option<BigInt> {
        if lo > hi {
            return None;
        }
        let (flo, fhi) = (f(lo), f(hi));
        if flo.is_zero() {
            return Some(lo.clone());
        }
        if fhi.is_zero() {
            return Some(hi.clone());
        }
        if flo.signum() == fhi.signum() {
            return None;
        }
        let increasing = flo.is_negative();
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = Integer::div_floor(&(&lo + &hi), &BigInt::from(2));
            let fm = f(&mid);
            if fm.is_zero() {
                return Some(mid);
            }
            if fm.is_negative() == increasing {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        None
    };

    let disc = b * b - BigInt::from(3) * c;
    let three = BigInt::from(3);
    if disc.is_positive() {
        let s = disc.sqrt();
        let c1_lo: BigInt = Integer::div_floor(&(-b - &s - 1), &three) - 1;
        let c1_hi: BigInt = Integer::div_ceil(&(-b - &s), &three) + 1;
        let c2_lo: BigInt = Integer::div_floor(&(-b + &s), &three) - 1;
        let c2_hi: BigInt = Integer::div_ceil(&(-b + &s + 1), &three) + 1;
        let mut y = c1_lo.clone();
        while y <= c1_hi {
            check(y.clone(), &mut roots);
            y += 1;
        }
        let mut y = c2_lo.clone();
        while y <= c2_hi {
            check(y.clone(), &mut roots);
            y += 1;
        }
        for (lo, hi) in [(-&bound, &c1_lo - 1), (&c1_hi + 1, &c2_lo - 1), (&c2_hi + 1, bound.clone())] {
            if let Some(r) = monotone_zero(&lo, &hi) {
                check(r, &mut roots);
            }
        }
    } else if let Some(r) = monotone_zero(&-&bound, &bound) {
        check(r, &mut roots);
    }
    roots.sort();
    roots
}

impl Field for Rationals {
    type Elem = BigRational;
    type Embedding = RationalEmbedding;

    fn characteristic(&self) -> u64 {
        0
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn degree(&self) -> u32 {
        1
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn cmp_elems(&self, a: &BigRational, b: &BigRational) -> Ordering {
        a.numer().cmp(b.numer()).then_with(|| a.denom().cmp(b.denom()))
    }

    fn contains(&self, a: &BigRational) -> bool {
        a.denom().is_positive() && a.numer().gcd(a.denom()).is_one()
    }

    fn elements(&self) -> Result<Vec<BigRational>> {
        Err(Error::InfiniteField)
    }

    /// Succeeds only when a rational root exists.
    fn find_root(&self, p: &Poly<BigRational>) -> Result<RootExt<Self>> {
        let deg = match p.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            Some(d) if d > 3 => return Err(Error::UnsupportedDegree(d)),
            Some(d) => d,
        };
        let lead = p.coeffs()[deg].clone();
        let c: Vec<BigRational> = p.coeffs().iter().map(|x| x / &lead).collect();
        let root = match deg {
            1 => Some(-&c[0]),
            2 => {
                let disc = &c[1] * &c[1] - BigRational::from_integer(4.into()) * &c[0];
                exact_rational_root(&disc, 2).map(|s| (s - &c[1]) / BigRational::from_integer(2.into()))
            }
            _ if c[1].is_zero() && c[2].is_zero() => exact_rational_root(&-&c[0], 3),
            _ => {
                let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let lr = BigRational::from_integer(l.clone());
                let b = (&c[2] * &lr).to_integer();
                let cc = (&c[1] * &lr * &lr).to_integer();
                let d = (&c[0] * &lr * &lr * &lr).to_integer();
                integer_cubic_roots(&b, &cc, &d)
                    .into_iter()
                    .next()
                    .map(|y| BigRational::new(y, l.clone()))
            }
        };
        match root {
            Some(root) => Ok(RootExt {
                field: *self,
                root,
                embedding: RationalEmbedding,
            }),
            None => Err(Error::NeedsExtension { poly: p.to_text(self) }),
        }
    }

    fn identity_embedding(&self) -> RationalEmbedding {
        RationalEmbedding
    }

    fn embedding_into(&self, _target: &Self) -> Result<RationalEmbedding> {
        Ok(RationalEmbedding)
    }

    fn encode(&self, a: &BigRational) -> Value {
        Value::String(self.format_elem(a))
    }

    fn decode(&self, v: &Value) -> Result<BigRational> {
        match v {
            Value::String(s) => self.parse(s),
            Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(self.from_i64(i)),
                None => self.parse(&n.to_string()),
            },
            other => Err(Error::Parse(format!("expected a rational, got {other}"))),
        }
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Rationals
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        Rationals.parse(s).unwrap()
    }

    #[test]
    fn addition_is_exact() {
        assert_eq!(Rationals.add(&q("1/2"), &q("1/3")), q("5/6"));
    }

    #[test]
    fn canonical_order_uses_numerator_first() {
        assert_eq!(Rationals.cmp_elems(&q("1/2"), &q("2/3")), Ordering::Less);
        assert_eq!(Rationals.cmp_elems(&q("6/49"), &q("35/4")), Ordering::Less);
        assert_eq!(Rationals.cmp_elems(&q("3/4"), &q("3/4")), Ordering::Equal);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(Rationals.parse("1/0"), Err(Error::DivisionByZero));
        assert_eq!(Rationals.inv(&q("0")), Err(Error::DivisionByZero));
    }

    #[test]
    fn encoding_omits_unit_denominator() {
        assert_eq!(Rationals.encode(&q("-6/2")), Value::String("-3".into()));
        assert_eq!(Rationals.encode(&q("6/-4")), Value::String("-3/2".into()));
    }

    #[test]
    fn roots_over_q() {
        let f = Rationals;
        let p = Poly::new(&f, vec![q("-4"), q("0"), q("1")]);
        assert_eq!(f.find_root(&p).unwrap().root, q("2"));
        let p = Poly::binomial(&f, 3, &q("-27/8"));
        assert_eq!(f.find_root(&p).unwrap().root, q("-3/2"));
        let p = Poly::binomial(&f, 3, &q("1/18"));
        assert_eq!(
            f.find_root(&p).unwrap_err(),
            Error::NeedsExtension {
                poly: "x^3 - 1/18".into()
            }
        );
        let p = Poly::new(&f, vec![q("1"), q("1"), q("1")]);
        assert!(matches!(f.find_root(&p), Err(Error::NeedsExtension { .. })));
        let p = Poly::new(&f, vec![q("5")]);
        assert_eq!(f.find_root(&p).unwrap_err(), Error::ConstantPolynomial);
    }

    #[test]
    fn general_cubic_rational_roots() {
        let f = Rationals;
        // (2x - 3)(x^2 + x + 1) = 2x^3 - x^2 - x - 3
        let p = Poly::new(&f, vec![q("-3"), q("-1"), q("-1"), q("2")]);
        let r = f.find_root(&p).unwrap().root;
        assert_eq!(r, q("3/2"));
        // (x - 1)(x - 2)(x + 5) = x^3 + 2x^2 - 13x + 10, smallest root returned
        let p = Poly::new(&f, vec![q("10"), q("-13"), q("2"), q("1")]);
        assert_eq!(f.find_root(&p).unwrap().root, q("-5"));
        // x^3 - 2x + 7 has no rational root
        let p = Poly::new(&f, vec![q("7"), q("-2"), q("0"), q("1")]);
        assert!(f.find_root(&p).is_err());
        // x^3 + x^2/3: roots 0, -1/3
        let p = Poly::new(&f, vec![q("0"), q("0"), q("1/3"), q("1")]);
        assert_eq!(f.find_root(&p).unwrap().root, q("-1/3"));
    }

    #[test]
    fn cubic_root_search_matches_brute_force() {
        for b in -6i64..=6 {
            for c in -6i64..=6 {
                for d in -6i64..=6 {
                    let (bb, cc, dd) = (BigInt::from(b), BigInt::from(c), BigInt::from(d));
                    let expected: Vec<BigInt> = (-20i64..=20)
                        .filter(|y| y * y * y + b * y * y + c * y + d == 0)
                        .map(BigInt::from)
                        .collect();
                    assert_eq!(integer_cubic_roots(&bb, &cc, &dd), expected, "{b} {c} {d}");
                }
            }
        }
    }
}
