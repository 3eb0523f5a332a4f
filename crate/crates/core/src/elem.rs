//! Element values for the three carrier families.
//!
//! Finite table rings address elements by a small index into their Cayley
//! tables. The two structured carriers (binary polynomials, and 2x2
//! integer/rational triangular matrices) store exact values inline, so
//! equality is decidable without any enumeration of the carrier.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// One ring element. Which variant is legal depends on the ring's carrier;
/// mixing variants across rings is rejected by the ring operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    /// Index into a finite table ring, `0 <= i < order`.
    Idx(u16),
    /// Polynomial over Z2: bit `i` is the coefficient of `x^i`.
    Bits(u64),
    /// Matrix `[[a, t], [0, a]]` with `a` an integer and `t` a rational.
    ZQ(Box<ZqElem>),
}

impl Elem {
    pub fn idx(self) -> Option<u16> {
        match self {
            Elem::Idx(i) => Some(i),
            _ => None,
        }
    }

    pub fn zq(a: i64, tn: i64, td: i64) -> Elem {
        Elem::ZQ(Box::new(ZqElem::new(a, tn, td)))
    }
}

/// Largest exponent representable by the `Bits` carrier.
pub const BITS_DEGREE_CAP: u32 = 63;

/// Addition in Z2[x]: coefficientwise xor.
pub fn bits_add(a: u64, b: u64) -> u64 {
    a ^ b
}

/// Carry-less product in Z2[x]. Panics if the product degree would not fit
/// the 64-bit coefficient window; every caller works far below the cap.
pub fn bits_mul(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    let da = 63 - a.leading_zeros();
    let db = 63 - b.leading_zeros();
    assert!(
        da + db <= BITS_DEGREE_CAP,
        "binary polynomial product exceeds degree {BITS_DEGREE_CAP}"
    );
    let mut acc = 0u64;
    let mut x = a;
    let mut shift = 0;
    while x != 0 {
        if x & 1 == 1 {
            acc ^= b << shift;
        }
        x >>= 1;
        shift += 1;
    }
    acc
}

/// Render `bits` the way the fixtures spell binary polynomials: `0`, `1`,
/// `x`, `1+x+x^3`, ...
pub fn bits_repr(bits: u64) -> String {
    if bits == 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for i in 0..=BITS_DEGREE_CAP {
        if bits >> i & 1 == 1 {
            terms.push(match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            });
        }
    }
    terms.join("+")
}

pub fn bits_parse(s: &str) -> Option<u64> {
    let s = s.trim();
    if s == "0" {
        return Some(0);
    }
    let mut bits = 0u64;
    for term in s.split('+') {
        let term = term.trim();
        let exp = if term == "1" {
            0
        } else if term == "x" {
            1
        } else {
            let rest = term.strip_prefix("x^")?;
            let e: u32 = rest.parse().ok()?;
            if e > BITS_DEGREE_CAP {
                return None;
            }
            e
        };
        if bits >> exp & 1 == 1 {
            return None;
        }
        bits |= 1 << exp;
    }
    Some(bits)
}

/// Matrix `[[a, t], [0, a]]`, `a` integer, `t` rational, with exact
/// arithmetic throughout.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZqElem {
    pub a: BigInt,
    pub t: BigRational,
}

impl ZqElem {
    pub fn new(a: i64, tn: i64, td: i64) -> ZqElem {
        assert!(td != 0, "rational with zero denominator");
        ZqElem {
            a: BigInt::from(a),
            t: BigRational::new(BigInt::from(tn), BigInt::from(td)),
        }
    }

    pub fn zero() -> ZqElem {
        ZqElem {
            a: BigInt::zero(),
            t: BigRational::zero(),
        }
    }

    pub fn one() -> ZqElem {
        ZqElem {
            a: BigInt::one(),
            t: BigRational::zero(),
        }
    }

    pub fn add(&self, other: &ZqElem) -> ZqElem {
        ZqElem {
            a: &self.a + &other.a,
            t: &self.t + &other.t,
        }
    }

    pub fn neg(&self) -> ZqElem {
        ZqElem {
            a: -&self.a,
            t: -&self.t,
        }
    }

    /// `[[a,t],[0,a]] * [[a',t'],[0,a']] = [[aa', at' + ta'], [0, aa']]`.
    pub fn mul(&self, other: &ZqElem) -> ZqElem {
        let a = &self.a + BigInt::zero();
        let t = BigRational::from(a.clone()) * &other.t
            + &self.t * BigRational::from(other.a.clone());
        ZqElem {
            a: &self.a * &other.a,
            t,
        }
    }

    /// Off-diagonal halving: `[[a,t],[0,a]] -> [[a,t/2],[0,a]]`.
    pub fn halve_offdiag(&self) -> ZqElem {
        ZqElem {
            a: self.a.clone(),
            t: &self.t / BigRational::from(BigInt::from(2)),
        }
    }

    pub fn repr(&self) -> String {
        format!("({}, {})", self.a, rat_repr(&self.t))
    }

    pub fn parse(s: &str) -> Option<ZqElem> {
        let s = s.trim().strip_prefix('(')?.strip_suffix(')')?;
        let (a, t) = s.split_once(',')?;
        Some(ZqElem {
            a: a.trim().parse().ok()?,
            t: rat_parse(t.trim())?,
        })
    }
}

fn rat_repr(t: &BigRational) -> String {
    if t.denom().is_one() {
        t.numer().to_string()
    } else {
        format!("{}/{}", t.numer(), t.denom())
    }
}

fn rat_parse(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        let n: BigInt = n.trim().parse().ok()?;
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from(n))
    }
}

impl fmt::Display for ZqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.repr())
    }
}

/// Deterministic sample of `ZqElem` values of bounded height: `|a| <= h`,
/// `t = p/q` with `|p| <= 2h`, `1 <= q <= 2`. Used wherever a decider needs
/// a finite slice of the infinite carrier.
pub fn zq_sample(h: i64) -> Vec<ZqElem> {
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for a in -h..=h {
        for p in -2 * h..=2 * h {
            for q in 1..=2 {
                let e = ZqElem::new(a, p, q);
                if seen.insert((e.a.clone(), e.t.clone())) {
                    out.push(e);
                }
            }
        }
    }
    out.sort();
    out
}
