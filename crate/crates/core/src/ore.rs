//! Skew polynomials.
//!
//! Over a context `(R, s, d)` the indeterminate obeys `x a = s(a) x + d(a)`.
//! Pushing `x^n` through a coefficient expands as
//!
//! ```text
//! x^n a = sum_{i=0}^{n} f_i^n(a) x^i
//! ```
//!
//! where `f_i^n` is the sum of all `binomial(n, i)` words of length `n` in
//! the letters `s` and `d` containing `i` copies of `s`. Multiplication is
//! implemented twice, deliberately:
//!
//! * [`SkewPolynomial::mul_iterated`] applies the base rule one `x` at a
//!   time (the default route);
//! * [`SkewPolynomial::mul_words`] expands every `x^i a` through explicit
//!   word enumeration.
//!
//! The two routes share no code beyond coefficient arithmetic and are
//! cross-checked in tests and in the acceptance suite.

use crate::derivation::SigmaDerivation;
use crate::elem::Elem;
use crate::error::{BuildError, DecideError};
use crate::morphism::RingMorphism;
use crate::ring::RingInstance;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub struct OreContext {
    pub ring: Arc<RingInstance>,
    pub sigma: Arc<RingMorphism>,
    pub delta: Arc<SigmaDerivation>,
    /// Display name of the indeterminate.
    pub var: String,
}

impl OreContext {
    pub fn new(
        ring: Arc<RingInstance>,
        sigma: Arc<RingMorphism>,
        delta: Arc<SigmaDerivation>,
    ) -> Arc<OreContext> {
        Arc::new(OreContext { ring, sigma, delta, var: "x".into() })
    }

    pub fn with_var(
        ring: Arc<RingInstance>,
        sigma: Arc<RingMorphism>,
        delta: Arc<SigmaDerivation>,
        var: &str,
    ) -> Arc<OreContext> {
        Arc::new(OreContext { ring, sigma, delta, var: var.into() })
    }

    pub fn sigma_of(&self, e: &Elem) -> Elem {
        self.sigma.apply(&self.ring, e)
    }

    pub fn delta_of(&self, e: &Elem) -> Elem {
        self.delta.apply(&self.ring, &self.sigma, e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MulRoute {
    /// Iterated base rule `x a = s(a) x + d(a)`.
    Iterated,
    /// Closed-form word expansion of `x^n a`.
    WordExpansion,
}

/// All length-`n` words with exactly `i` letters `s` (set bits) and `n - i`
/// letters `d` (clear bits), ascending as bit patterns.
pub fn words(n: u32, i: u32) -> Vec<u64> {
    assert!(n <= 63, "word length cap exceeded");
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() == i {
            out.push(mask);
        }
    }
    out
}

/// `f_i^n(a)`: the sum over all words of length `n` with `i` letters `s`,
/// computed by explicit enumeration (never by the recurrence, so this
/// serves as an independent oracle for the iterated route).
pub fn word_map_apply(ctx: &OreContext, n: u32, i: u32, a: &Elem) -> Elem {
    assert!(i <= n, "word map index {i} out of range for length {n}");
    let ring = &ctx.ring;
    let mut acc = ring.zero();
    for mask in words(n, i) {
        let mut v = a.clone();
        for k in 0..n {
            v = if mask >> k & 1 == 1 {
                ctx.sigma_of(&v)
            } else {
                ctx.delta_of(&v)
            };
        }
        acc = ring.add(&acc, &v);
    }
    acc
}

/// `x^n * a` as a polynomial, computed by iterating the base rule.
pub fn x_power_times(ctx: &Arc<OreContext>, n: u32, a: &Elem) -> SkewPolynomial {
    let ring = &ctx.ring;
    let mut coeffs = vec![a.clone()];
    for _ in 0..n {
        let mut next = vec![ring.zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            if ring.is_zero(c) {
                continue;
            }
            next[i + 1] = ring.add(&next[i + 1], &ctx.sigma_of(c));
            next[i] = ring.add(&next[i], &ctx.delta_of(c));
        }
        coeffs = next;
    }
    SkewPolynomial::new(ctx.clone(), coeffs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkewPolynomial {
    ctx: Arc<OreContext>,
    /// Ascending by exponent, no trailing zeros.
    coeffs: Vec<Elem>,
}

impl SkewPolynomial {
    pub fn new(ctx: Arc<OreContext>, mut coeffs: Vec<Elem>) -> SkewPolynomial {
        while let Some(last) = coeffs.last() {
            if ctx.ring.is_zero(last) {
                coeffs.pop();
            } else {
                break;
            }
        }
        SkewPolynomial { ctx, coeffs }
    }

    pub fn zero(ctx: Arc<OreContext>) -> SkewPolynomial {
        SkewPolynomial { ctx, coeffs: Vec::new() }
    }

    pub fn constant(ctx: Arc<OreContext>, a: Elem) -> SkewPolynomial {
        SkewPolynomial::new(ctx, vec![a])
    }

    pub fn monomial(ctx: Arc<OreContext>, a: Elem, k: usize) -> SkewPolynomial {
        let mut coeffs = vec![ctx.ring.zero(); k];
        coeffs.push(a);
        SkewPolynomial::new(ctx, coeffs)
    }

    pub fn ctx(&self) -> &Arc<OreContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.ring.zero())
    }

    pub fn leading_coeff(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &SkewPolynomial) -> Result<SkewPolynomial, DecideError> {
        self.same_ctx(other)?;
        let ring = &self.ctx.ring;
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(ring.add(&self.coeff(i), &other.coeff(i)));
        }
        Ok(SkewPolynomial::new(self.ctx.clone(), out))
    }

    pub fn neg(&self) -> SkewPolynomial {
        let ring = &self.ctx.ring;
        let coeffs = self.coeffs.iter().map(|c| ring.neg(c)).collect();
        SkewPolynomial { ctx: self.ctx.clone(), coeffs }
    }

    pub fn sub(&self, other: &SkewPolynomial) -> Result<SkewPolynomial, DecideError> {
        self.add(&other.neg())
    }

    /// Left multiplication by a constant.
    pub fn scale_left(&self, a: &Elem) -> SkewPolynomial {
        let ring = &self.ctx.ring;
        let coeffs = self.coeffs.iter().map(|c| ring.mul(a, c)).collect();
        SkewPolynomial::new(self.ctx.clone(), coeffs)
    }

    fn same_ctx(&self, other: &SkewPolynomial) -> Result<(), DecideError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(DecideError::ContextMismatch)
        }
    }

    /// Product by the chosen route.
    pub fn mul(&self, other: &SkewPolynomial, route: MulRoute) -> Result<SkewPolynomial, DecideError> {
        self.same_ctx(other)?;
        Ok(match route {
            MulRoute::Iterated => self.mul_iterated_unchecked(other),
            MulRoute::WordExpansion => self.mul_words_unchecked(other),
        })
    }

    pub fn mul_iterated(&self, other: &SkewPolynomial) -> Result<SkewPolynomial, DecideError> {
        self.mul(other, MulRoute::Iterated)
    }

    pub fn mul_words(&self, other: &SkewPolynomial) -> Result<SkewPolynomial, DecideError> {
        self.mul(other, MulRoute::WordExpansion)
    }

    fn mul_iterated_unchecked(&self, other: &SkewPolynomial) -> SkewPolynomial {
        let ctx = &self.ctx;
        let ring = &ctx.ring;
        if self.is_zero() || other.is_zero() {
            return SkewPolynomial::zero(ctx.clone());
        }
        let out_len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![ring.zero(); out_len];
        // cur holds x^i * other, stepped by the base rule.
        let mut cur = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                let mut next = vec![ring.zero(); cur.len() + 1];
                for (k, c) in cur.iter().enumerate() {
                    if ring.is_zero(c) {
                        continue;
                    }
                    next[k + 1] = ring.add(&next[k + 1], &ctx.sigma_of(c));
                    next[k] = ring.add(&next[k], &ctx.delta_of(c));
                }
                cur = next;
            }
            if ring.is_zero(a) {
                continue;
            }
            for (k, c) in cur.iter().enumerate() {
                if !ring.is_zero(c) {
                    out[k] = ring.add(&out[k], &ring.mul(a, c));
                }
            }
        }
        SkewPolynomial::new(ctx.clone(), out)
    }

    fn mul_words_unchecked(&self, other: &SkewPolynomial) -> SkewPolynomial {
        let ctx = &self.ctx;
        let ring = &ctx.ring;
        if self.is_zero() || other.is_zero() {
            return SkewPolynomial::zero(ctx.clone());
        }
        let out_len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![ring.zero(); out_len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (k, b) in other.coeffs.iter().enumerate() {
                if ring.is_zero(b) {
                    continue;
                }
                for j in 0..=i {
                    let f = word_map_apply(ctx, i as u32, j as u32, b);
                    if !ring.is_zero(&f) {
                        out[j + k] = ring.add(&out[j + k], &ring.mul(a, &f));
                    }
                }
            }
        }
        SkewPolynomial::new(ctx.clone(), out)
    }

    /// Textual form: `{coeff} v^i` terms joined by ` + `, ascending, zero
    /// coefficients skipped, `0` for the zero polynomial. Coefficients are
    /// brace-wrapped so element text may itself contain `+`.
    pub fn print(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let ring = &self.ctx.ring;
        let var = &self.ctx.var;
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if ring.is_zero(c) {
                continue;
            }
            let body = format!("{{{}}}", ring.repr(c));
            terms.push(match i {
                0 => body,
                1 => format!("{body} {var}"),
                _ => format!("{body} {var}^{i}"),
            });
        }
        terms.join(" + ")
    }

    /// Inverse of [`SkewPolynomial::print`].
    pub fn parse(ctx: &Arc<OreContext>, text: &str) -> Result<SkewPolynomial, BuildError> {
        let bad = |reason: &str| BuildError::BadDocument(format!("polynomial {text:?}: {reason}"));
        let s = text.trim();
        if s == "0" {
            return Ok(SkewPolynomial::zero(ctx.clone()));
        }
        let ring = &ctx.ring;
        let var = &ctx.var;
        let mut coeffs: Vec<Option<Elem>> = Vec::new();
        let mut rest = s;
        loop {
            let rest_t = rest.trim_start();
            let inner = rest_t
                .strip_prefix('{')
                .ok_or_else(|| bad("expected `{` opening a coefficient"))?;
            let close = inner.find('}').ok_or_else(|| bad("unclosed coefficient"))?;
            let (repr, after) = inner.split_at(close);
            let elem = ring.parse_elem(repr)?;
            let mut tail = after[1..].trim_start();
            let exp: usize;
            if let Some(t) = tail.strip_prefix(var.as_str()) {
                if let Some(t2) = t.strip_prefix('^') {
                    let end = t2
                        .find(|c: char| !c.is_ascii_digit())
                        .unwrap_or(t2.len());
                    if end == 0 {
                        return Err(bad("missing exponent digits"));
                    }
                    exp = t2[..end].parse().map_err(|_| bad("exponent out of range"))?;
                    tail = &t2[end..];
                } else {
                    exp = 1;
                    tail = t;
                }
            } else {
                exp = 0;
            }
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, None);
            }
            if coeffs[exp].replace(elem).is_some() {
                return Err(bad(&format!("duplicate exponent {exp}")));
            }
            let tail = tail.trim_start();
            if tail.is_empty() {
                break;
            }
            rest = tail
                .strip_prefix('+')
                .ok_or_else(|| bad("expected `+` between terms"))?;
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.unwrap_or_else(|| ring.zero()))
            .collect();
        Ok(SkewPolynomial::new(ctx.clone(), coeffs))
    }
}
