use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::Value;

use super::{is_prime, prime_factors, Embedding, Field, FieldDescriptor, Poly, RootExt};
use crate::error::{Error, Result};

/// Largest field order for which log/antilog tables are built.
pub const MAX_ORDER: u64 = 1 << 22;

/// Element of a finite field, stored as its integer code
/// `c0 + c1 p + ... + c_{k-1} p^{k-1}` for the coefficient vector of the
/// polynomial representative. Code order is the canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf(pub(crate) u32);

impl Gf {
    pub fn code(self) -> u32 {
        self.0
    }
}

/// GF(p^k) presented as GF(p)[x]/(modulus).
#[derive(Clone)]
pub struct GaloisField {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    extensions: Mutex<HashMap<u32, (GaloisField, GfEmbedding)>>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}, modulus {:?})", self.inner.p, self.inner.k, self.inner.modulus)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for GaloisField {}

/// Embedding of one finite field into another, as a lookup table indexed by
/// element code. `None` is the identity.
#[derive(Clone, Debug)]
pub struct GfEmbedding {
    table: Option<Arc<Vec<u32>>>,
}

impl Embedding<GaloisField> for GfEmbedding {
    fn apply(&self, a: &Gf) -> Gf {
        match &self.table {
            None => *a,
            Some(t) => Gf(t[a.0 as usize]),
        }
    }

    fn is_identity(&self) -> bool {
        self.table.is_none()
    }
}

// --- polynomial helpers over GF(p), coefficients lowest degree first ---

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo `m` over GF(p); `m` must be nonzero.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm {
        let dr = r.len() - 1;
        let factor = r[dr] as u64 * lead_inv % p as u64;
        for (i, &c) in m.iter().enumerate() {
            let idx = dr - dm + i;
            let sub = factor * c as u64 % p as u64;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn digits_of(mut code: u64, p: u32, n: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = (code % p as u64) as u32;
            code /= p as u64;
            d
        })
        .collect()
}

/// Monic polynomial of degree `n` whose lower coefficients are the digits of `code`.
fn monic_from_code(code: u64, p: u32, n: u32) -> Vec<u32> {
    let mut v = digits_of(code, p, n);
    v.push(1);
    v
}

/// Irreducibility over GF(p) by trial division with every monic polynomial
/// of degree at most half the degree.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let n = f.len().saturating_sub(1) as u32;
    if n == 0 {
        return false;
    }
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d);
        for code in 0..count {
            let g = monic_from_code(code, p, d);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `n`, scanning lower
/// coefficient vectors in code order.
pub(crate) fn first_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    (0..count)
        .map(|code| monic_from_code(code, p, n))
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial exists in every degree")
}

impl GaloisField {
    /// GF(p).
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// GF(p^k). Without an explicit modulus the first irreducible monic
    /// polynomial of degree `k` is used.
    pub fn new(p: u64, k: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        if k == 0 {
            return Err(Error::DegreeMismatch("degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::BudgetExceeded(format!("GF({p}^{k}) exceeds {MAX_ORDER} elements")))?;
        let p32 = p as u32;
        let modulus = match modulus {
            None => first_irreducible(p32, k),
            Some(m) => {
                if m.len() != k as usize + 1 {
                    return Err(Error::DegreeMismatch(format!(
                        "modulus has {} coefficients, expected {}",
                        m.len(),
                        k + 1
                    )));
                }
                if let Some(c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::Parse(format!("modulus coefficient {c} is not reduced mod {p}")));
                }
                if m[k as usize] != 1 {
                    return Err(Error::DegreeMismatch("modulus must be monic".into()));
                }
                let m: Vec<u32> = m.into_iter().map(|c| c as u32).collect();
                if !is_irreducible(&m, p32) {
                    return Err(Error::ReducibleModulus(format!("{m:?}")));
                }
                m
            }
        };
        Ok(Self::build(p32, k, q as u32, modulus))
    }

    fn build(p: u32, k: u32, q: u32, modulus: Vec<u32>) -> Self {
        let slow_mul = |a: u32, b: u32| -> u32 {
            let prod = poly_mul(&digits_of(a as u64, p, k), &digits_of(b as u64, p, k), p);
            let r = poly_rem(&prod, &modulus, p);
            r.iter().rev().fold(0u32, |acc, &d| acc * p + d)
        };
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let (mut base, mut acc) = (a, 1u32);
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let n = (q - 1) as u64;
        let factors = prime_factors(n);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, n / r) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().take((q - 1) as usize).enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = slow_mul(x, generator);
        }
        for i in (q - 1) as usize..exp.len() {
            exp[i] = exp[i - (q - 1) as usize];
        }
        GaloisField {
            inner: Arc::new(Inner {
                p,
                k,
                q,
                modulus,
                exp,
                log,
                extensions: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, lowest degree first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn element(&self, code: u32) -> Result<Gf> {
        if code < self.inner.q {
            Ok(Gf(code))
        } else {
            Err(Error::MixedFields)
        }
    }

    /// Coefficient vector (c0, ..., c_{k-1}).
    pub fn digits(&self, a: Gf) -> Vec<u32> {
        digits_of(a.0 as u64, self.inner.p, self.inner.k)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Gf> {
        if digits.len() != self.inner.k as usize || digits.iter().any(|&d| d >= self.inner.p) {
            return Err(Error::Parse(format!(
                "expected {} coefficients in [0, {})",
                self.inner.k, self.inner.p
            )));
        }
        Ok(Gf(digits.iter().rev().fold(0u32, |acc, &d| acc * self.inner.p + d)))
    }

    /// The class of `x`; a root of the modulus.
    pub fn generator(&self) -> Gf {
        if self.inner.k == 1 {
            // modulus x for prime fields
            Gf(0)
        } else {
            Gf(self.inner.p)
        }
    }

    fn digitwise(&self, a: u32, b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let p = self.inner.p;
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.inner.k {
            out += op(a % p, b % p) * place;
            place = place.wrapping_mul(p);
            a /= p;
            b /= p;
        }
        out
    }

    /// The extension of relative degree `m`, built over the prime field with
    /// the first irreducible modulus of degree `k*m`, and the embedding of
    /// `self` into it. Results are cached per handle.
    pub fn extension(&self, m: u32) -> Result<(GaloisField, GfEmbedding)> {
        if m == 1 {
            return Ok((self.clone(), self.identity_embedding()));
        }
        if let Some(hit) = self.inner.extensions.lock().expect("cache lock").get(&m) {
            return Ok(hit.clone());
        }
        let target = GaloisField::new(self.inner.p as u64, self.inner.k * m, None)?;
        let emb = self.embedding_into(&target)?;
        self.inner
            .extensions
            .lock()
            .expect("cache lock")
            .insert(m, (target.clone(), emb.clone()));
        Ok((target, emb))
    }

    fn scan_root(&self, p: &Poly<Gf>) -> Option<Gf> {
        (0..self.inner.q).map(Gf).find(|x| self.is_zero(&p.eval(self, x)))
    }
}

impl Field for GaloisField {
    type Elem = Gf;
    type Embedding = GfEmbedding;

    fn characteristic(&self) -> u64 {
        self.inner.p as u64
    }

    fn order(&self) -> Option<u64> {
        Some(self.inner.q as u64)
    }

    fn degree(&self) -> u32 {
        self.inner.k
    }

    fn zero(&self) -> Gf {
        Gf(0)
    }

    fn one(&self) -> Gf {
        Gf(1)
    }

    fn from_i64(&self, n: i64) -> Gf {
        Gf(n.rem_euclid(self.inner.p as i64) as u32)
    }

    #[inline]
    fn add(&self, a: &Gf, b: &Gf) -> Gf {
        let p = self.inner.p;
        if self.inner.k == 1 {
            Gf((a.0 + b.0) % p)
        } else if p == 2 {
            Gf(a.0 ^ b.0)
        } else {
            Gf(self.digitwise(a.0, b.0, |x, y| (x + y) % p))
        }
    }

    #[inline]
    fn sub(&self, a: &Gf, b: &Gf) -> Gf {
        let p = self.inner.p;
        if self.inner.k == 1 {
            Gf((a.0 + p - b.0) % p)
        } else if p == 2 {
            Gf(a.0 ^ b.0)
        } else {
            Gf(self.digitwise(a.0, b.0, |x, y| (x + p - y) % p))
        }
    }

    #[inline]
    fn mul(&self, a: &Gf, b: &Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf(0);
        }
        let i = self.inner.log[a.0 as usize] + self.inner.log[b.0 as usize];
        Gf(self.inner.exp[i as usize])
    }

    fn neg(&self, a: &Gf) -> Gf {
        self.sub(&Gf(0), a)
    }

    fn inv(&self, a: &Gf) -> Result<Gf> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.inner.q - 1;
        let l = self.inner.log[a.0 as usize];
        Ok(Gf(self.inner.exp[((n - l) % n) as usize]))
    }

    fn is_zero(&self, a: &Gf) -> bool {
        a.0 == 0
    }

    fn cmp_elems(&self, a: &Gf, b: &Gf) -> Ordering {
        a.0.cmp(&b.0)
    }

    fn contains(&self, a: &Gf) -> bool {
        a.0 < self.inner.q
    }

    fn elements(&self) -> Result<Vec<Gf>> {
        Ok((0..self.inner.q).map(Gf).collect())
    }

    /// Exhaustive root search; extends by the polynomial's degree when no
    /// root exists in `self` (such a polynomial is irreducible).
    fn find_root(&self, p: &Poly<Gf>) -> Result<RootExt<Self>> {
        let deg = match p.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            Some(d) if d > 3 => return Err(Error::UnsupportedDegree(d)),
            Some(d) => d,
        };
        if let Some(root) = self.scan_root(p) {
            return Ok(RootExt {
                field: self.clone(),
                root,
                embedding: self.identity_embedding(),
            });
        }
        let (ext, emb) = self.extension(deg as u32)?;
        let mapped = p.map_into(&ext, &emb);
        let root = ext
            .scan_root(&mapped)
            .ok_or_else(|| Error::Internal("irreducible polynomial without root in its splitting degree".into()))?;
        Ok(RootExt {
            field: ext,
            root,
            embedding: emb,
        })
    }

    fn identity_embedding(&self) -> GfEmbedding {
        GfEmbedding { table: None }
    }

    fn embedding_into(&self, target: &Self) -> Result<GfEmbedding> {
        if self == target {
            return Ok(self.identity_embedding());
        }
        if self.inner.p != target.inner.p || !target.inner.k.is_multiple_of(self.inner.k) {
            return Err(Error::MixedFields);
        }
        let modulus = Poly::new(target, self.inner.modulus.iter().map(|&c| Gf(c)).collect());
        let beta = target
            .scan_root(&modulus)
            .ok_or_else(|| Error::Internal("subfield modulus has no root in the extension".into()))?;
        let table: Vec<u32> = (0..self.inner.q)
            .map(|code| {
                let digits = digits_of(code as u64, self.inner.p, self.inner.k);
                let mut acc = Gf(0);
                for &d in digits.iter().rev() {
                    acc = target.add(&target.mul(&acc, &beta), &Gf(d));
                }
                acc.0
            })
            .collect();
        Ok(GfEmbedding {
            table: Some(Arc::new(table)),
        })
    }

    fn encode(&self, a: &Gf) -> Value {
        if self.inner.k == 1 {
            Value::from(a.0)
        } else {
            Value::Array(self.digits(*a).into_iter().map(Value::from).collect())
        }
    }

    fn decode(&self, v: &Value) -> Result<Gf> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|i| self.from_i64(i))
                .ok_or_else(|| Error::Parse(format!("expected an integer, got {n}"))),
            Value::String(s) => s
                .trim()
                .parse::<i64>()
                .map(|i| self.from_i64(i))
                .map_err(|_| Error::Parse(format!("invalid finite field element {s:?}"))),
            Value::Array(items) => {
                if items.len() != self.inner.k as usize {
                    return Err(Error::Parse(format!(
                        "expected {} coefficients, got {}",
                        self.inner.k,
                        items.len()
                    )));
                }
                let digits = items
                    .iter()
                    .map(|c| {
                        c.as_i64()
                            .map(|i| i.rem_euclid(self.inner.p as i64) as u32)
                            .ok_or_else(|| Error::Parse(format!("invalid coefficient {c}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.from_digits(&digits)
            }
            other => Err(Error::Parse(format!("expected a finite field element, got {other}"))),
        }
    }

    fn format_elem(&self, a: &Gf) -> String {
        if self.inner.k == 1 {
            a.0.to_string()
        } else {
            let d: Vec<String> = self.digits(*a).iter().map(u32::to_string).collect();
            format!("[{}]", d.join(","))
        }
    }

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Galois {
            p: self.inner.p as u64,
            k: self.inner.k,
            modulus: (self.inner.k > 1).then(|| self.inner.modulus.iter().map(|&c| c as u64).collect()),
        }
    }
}
