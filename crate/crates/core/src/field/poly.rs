use serde_json::Value;

use super::{Embedding, Field};

/// Univariate polynomial, coefficients stored lowest degree first.
///
/// The leading coefficient is nonzero unless the polynomial is zero, in which
/// case the coefficient list is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn new<F: Field<Elem = E>>(field: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `x^n - c`.
    pub fn binomial<F: Field<Elem = E>>(field: &F, n: usize, c: &E) -> Self {
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[0] = field.neg(c);
        coeffs[n] = field.one();
        Poly::new(field, coeffs)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval<F: Field<Elem = E>>(&self, field: &F, x: &E) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
    }

    pub fn map_into<F: Field<Elem = E>>(&self, target: &F, emb: &F::Embedding) -> Self {
        Poly::new(target, self.coeffs.iter().map(|c| emb.apply(c)).collect())
    }

    pub fn encode<F: Field<Elem = E>>(&self, field: &F) -> Value {
        Value::Array(self.coeffs.iter().map(|c| field.encode(c)).collect())
    }

    /// Renders as e.g. `x^3 - 1/18`.
    pub fn to_text<F: Field<Elem = E>>(&self, field: &F) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if field.is_zero(c) {
                continue;
            }
            let negative = field.is_negative(c);
            let mag = if negative { field.neg(c) } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let monomial = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                out.push_str(&field.format_elem(&mag));
            } else if field.is_one(&mag) {
                out.push_str(&monomial);
            } else {
                out.push_str(&format!("{}*{}", field.format_elem(&mag), monomial));
            }
        }
        out
    }
}
