//! Ring instances.
//!
//! A `RingInstance` is an associative unital ring presented one of two ways:
//!
//! * finite-enumerable: dense Cayley tables over indices `0..n`, fully
//!   validated against the ring axioms at construction time;
//! * structured-infinite: exact programmatic arithmetic with decidable
//!   equality (binary polynomials `Z2[x]`, and the integer/rational
//!   triangular matrix ring `{[[a,t],[0,a]]}`). These carriers are never
//!   enumerated; deciders that need a finite slice use the documented
//!   bounded sample sets below.
//!
//! Every constructor validates; there is no unchecked path.

use crate::elem::{
    bits_add, bits_mul, bits_parse, bits_repr, zq_sample, Elem, ZqElem,
};
use crate::error::{BuildError, DecideError};
use std::collections::HashMap;

/// Hard ceiling on finite carrier order; annihilator sets are stored as
/// 64-bit masks. The configurable build cap (default 16) sits below this.
pub const ORDER_HARD_CAP: usize = 64;

/// Default order cap for finite carriers.
pub const DEFAULT_ORDER_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarrierKind {
    FiniteEnumerable,
    StructuredInfinite,
}

/// Dense-table presentation of a finite ring.
#[derive(Clone, Debug)]
pub struct TableRing {
    pub n: usize,
    pub names: Vec<String>,
    name_index: HashMap<String, u16>,
    /// Row-major `n x n`: `add[a*n + b] = a + b`.
    pub add: Vec<u16>,
    pub mul: Vec<u16>,
    pub neg: Vec<u16>,
    pub zero: u16,
    pub one: u16,
}

impl PartialEq for TableRing {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.add == other.add && self.mul == other.mul
    }
}

impl TableRing {
    /// Validates the full ring axiom set over the given tables and derives
    /// zero, one, and negation. Rejects anything that is not an associative
    /// unital ring presentation.
    pub fn from_tables(
        names: Vec<String>,
        add: Vec<u16>,
        mul: Vec<u16>,
    ) -> Result<TableRing, BuildError> {
        let n = names.len();
        if n == 0 {
            return Err(BuildError::UnsupportedSpec("empty carrier".into()));
        }
        if n > ORDER_HARD_CAP {
            return Err(BuildError::OrderCapExceeded { order: n, cap: ORDER_HARD_CAP });
        }
        if add.len() != n * n || mul.len() != n * n {
            return Err(BuildError::UnsupportedSpec(format!(
                "table shape mismatch: order {n} needs {}x{} entries",
                n, n
            )));
        }
        for &v in add.iter().chain(mul.iter()) {
            if (v as usize) >= n {
                return Err(BuildError::UnsupportedSpec(format!(
                    "table entry {v} out of range for order {n}"
                )));
            }
        }
        let mut name_index = HashMap::new();
        for (i, nm) in names.iter().enumerate() {
            if nm.is_empty() || nm.contains(['{', '}']) || nm.trim() != nm {
                return Err(BuildError::UnsupportedSpec(format!(
                    "element name {nm:?} would not survive the polynomial syntax"
                )));
            }
            if name_index.insert(nm.clone(), i as u16).is_some() {
                return Err(BuildError::UnsupportedSpec(format!(
                    "duplicate element name {nm:?}"
                )));
            }
        }

        let at = |a: usize, b: usize| add[a * n + b] as usize;
        let mt = |a: usize, b: usize| mul[a * n + b] as usize;

        let violation = |law: &str, w: String| BuildError::AxiomViolation {
            law: law.to_string(),
            witness: w,
        };

        for a in 0..n {
            for b in 0..n {
                if at(a, b) != at(b, a) {
                    return Err(violation("additive commutativity", format!("({a},{b})")));
                }
            }
        }
        let mut zero = None;
        for z in 0..n {
            if (0..n).all(|a| at(z, a) == a) {
                zero = Some(z);
                break;
            }
        }
        let zero = zero.ok_or_else(|| violation("additive identity", "none found".into()))?;
        let mut neg = vec![0u16; n];
        for a in 0..n {
            match (0..n).find(|&b| at(a, b) == zero) {
                Some(b) => neg[a] = b as u16,
                None => return Err(violation("additive inverse", format!("element {a}"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(violation("additive associativity", format!("({a},{b},{c})")));
                    }
                    if mt(mt(a, b), c) != mt(a, mt(b, c)) {
                        return Err(violation(
                            "multiplicative associativity",
                            format!("({a},{b},{c})"),
                        ));
                    }
                    if mt(a, at(b, c)) != at(mt(a, b), mt(a, c)) {
                        return Err(violation("left distributivity", format!("({a},{b},{c})")));
                    }
                    if mt(at(a, b), c) != at(mt(a, c), mt(b, c)) {
                        return Err(violation("right distributivity", format!("({a},{b},{c})")));
                    }
                }
            }
        }
        let mut one = None;
        for u in 0..n {
            if (0..n).all(|a| mt(u, a) == a && mt(a, u) == a) {
                one = Some(u);
                break;
            }
        }
        let one = one.ok_or_else(|| violation("multiplicative identity", "none found".into()))?;

        Ok(TableRing {
            n,
            names,
            name_index,
            add,
            mul,
            neg,
            zero: zero as u16,
            one: one as u16,
        })
    }

    #[inline]
    pub fn addi(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn muli(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn negi(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u16> {
        self.name_index.get(name.trim()).copied()
    }
}

/// `Z2[x]`, structured-infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyZ2Ring;

/// `{[[a,t],[0,a]] : a integer, t rational}`, structured-infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct IntRatTriRing;

#[derive(Clone, Debug, PartialEq)]
pub enum Carrier {
    Table(TableRing),
    PolyZ2(PolyZ2Ring),
    IntRatTri(IntRatTriRing),
}

/// How the instance was put together. Morphism programs that permute
/// structured indices (swap, off-diagonal negation) key off this.
#[derive(Clone, Debug, PartialEq)]
pub enum Construction {
    Tables,
    Zmod { n: usize },
    Product { factor_orders: Vec<usize> },
    Triangular2 { n: usize },
    PolyZ2,
    IntRatTri,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingInstance {
    pub label: String,
    pub carrier: Carrier,
    pub construction: Construction,
}

/// An idempotent element together with whether it commutes with the whole
/// carrier (for structured carriers: with the documented sample set).
#[derive(Clone, Debug, PartialEq)]
pub struct Idempotent {
    pub e: Elem,
    pub central: bool,
}

impl RingInstance {
    pub fn kind(&self) -> CarrierKind {
        match self.carrier {
            Carrier::Table(_) => CarrierKind::FiniteEnumerable,
            _ => CarrierKind::StructuredInfinite,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.kind() == CarrierKind::FiniteEnumerable
    }

    pub fn order(&self) -> Option<usize> {
        match &self.carrier {
            Carrier::Table(t) => Some(t.n),
            _ => None,
        }
    }

    pub fn table(&self) -> Option<&TableRing> {
        match &self.carrier {
            Carrier::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn zero(&self) -> Elem {
        match &self.carrier {
            Carrier::Table(t) => Elem::Idx(t.zero),
            Carrier::PolyZ2(_) => Elem::Bits(0),
            Carrier::IntRatTri(_) => Elem::ZQ(Box::new(ZqElem::zero())),
        }
    }

    pub fn one(&self) -> Elem {
        match &self.carrier {
            Carrier::Table(t) => Elem::Idx(t.one),
            Carrier::PolyZ2(_) => Elem::Bits(1),
            Carrier::IntRatTri(_) => Elem::ZQ(Box::new(ZqElem::one())),
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        *a == self.zero()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.carrier, a, b) {
            (Carrier::Table(t), Elem::Idx(x), Elem::Idx(y)) => Elem::Idx(t.addi(*x, *y)),
            (Carrier::PolyZ2(_), Elem::Bits(x), Elem::Bits(y)) => Elem::Bits(bits_add(*x, *y)),
            (Carrier::IntRatTri(_), Elem::ZQ(x), Elem::ZQ(y)) => Elem::ZQ(Box::new(x.add(y))),
            _ => panic!("element does not belong to ring {}", self.label),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&self.carrier, a) {
            (Carrier::Table(t), Elem::Idx(x)) => Elem::Idx(t.negi(*x)),
            (Carrier::PolyZ2(_), Elem::Bits(x)) => Elem::Bits(*x),
            (Carrier::IntRatTri(_), Elem::ZQ(x)) => Elem::ZQ(Box::new(x.neg())),
            _ => panic!("element does not belong to ring {}", self.label),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.carrier, a, b) {
            (Carrier::Table(t), Elem::Idx(x), Elem::Idx(y)) => Elem::Idx(t.muli(*x, *y)),
            (Carrier::PolyZ2(_), Elem::Bits(x), Elem::Bits(y)) => Elem::Bits(bits_mul(*x, *y)),
            (Carrier::IntRatTri(_), Elem::ZQ(x), Elem::ZQ(y)) => Elem::ZQ(Box::new(x.mul(y))),
            _ => panic!("element does not belong to ring {}", self.label),
        }
    }

    /// All elements, finite carriers only.
    pub fn elements(&self) -> Result<Vec<Elem>, DecideError> {
        match &self.carrier {
            Carrier::Table(t) => Ok((0..t.n as u16).map(Elem::Idx).collect()),
            _ => Err(DecideError::NotEnumerable { ring: self.label.clone() }),
        }
    }

    /// Finite carriers: every element. Structured carriers: the documented
    /// bounded slice (binary polynomials of degree < 4; matrices of height
    /// <= 2). Deterministic order.
    pub fn sample_elements(&self) -> Vec<Elem> {
        match &self.carrier {
            Carrier::Table(t) => (0..t.n as u16).map(Elem::Idx).collect(),
            Carrier::PolyZ2(_) => (0..16u64).map(Elem::Bits).collect(),
            Carrier::IntRatTri(_) => zq_sample(2)
                .into_iter()
                .map(|z| Elem::ZQ(Box::new(z)))
                .collect(),
        }
    }

    /// Smaller slice used as the coefficient space of bounded polynomial
    /// searches over structured carriers (degree < 3; height <= 1).
    pub fn small_sample(&self) -> Vec<Elem> {
        match &self.carrier {
            Carrier::Table(t) => (0..t.n as u16).map(Elem::Idx).collect(),
            Carrier::PolyZ2(_) => (0..8u64).map(Elem::Bits).collect(),
            Carrier::IntRatTri(_) => zq_sample(1)
                .into_iter()
                .map(|z| Elem::ZQ(Box::new(z)))
                .collect(),
        }
    }

    /// Idempotents. Finite carriers are scanned exhaustively; structured
    /// carriers are scanned over `sample_elements`, and centrality there is
    /// relative to the same slice.
    pub fn idempotents(&self) -> Vec<Idempotent> {
        let pool = self.sample_elements();
        let mut out = Vec::new();
        for e in &pool {
            if self.mul(e, e) == *e {
                let central = pool
                    .iter()
                    .all(|r| self.mul(e, r) == self.mul(r, e));
                out.push(Idempotent { e: e.clone(), central });
            }
        }
        out
    }

    pub fn repr(&self, e: &Elem) -> String {
        match (&self.carrier, e) {
            (Carrier::Table(t), Elem::Idx(i)) => t.names[*i as usize].clone(),
            (Carrier::PolyZ2(_), Elem::Bits(b)) => bits_repr(*b),
            (Carrier::IntRatTri(_), Elem::ZQ(z)) => z.repr(),
            _ => panic!("element does not belong to ring {}", self.label),
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem, BuildError> {
        let err = || BuildError::BadElement {
            ring: self.label.clone(),
            text: s.to_string(),
        };
        match &self.carrier {
            Carrier::Table(t) => t.index_of(s).map(Elem::Idx).ok_or_else(err),
            Carrier::PolyZ2(_) => bits_parse(s).map(Elem::Bits).ok_or_else(err),
            Carrier::IntRatTri(_) => ZqElem::parse(s)
                .map(|z| Elem::ZQ(Box::new(z)))
                .ok_or_else(err),
        }
    }
}

/// `Z/nZ`.
pub fn zmod(n: u32) -> Result<RingInstance, BuildError> {
    if n == 0 {
        return Err(BuildError::UnsupportedSpec("zmod(0)".into()));
    }
    let n = n as usize;
    let names = (0..n).map(|i| i.to_string()).collect();
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = ((a + b) % n) as u16;
            mul[a * n + b] = ((a * b) % n) as u16;
        }
    }
    Ok(RingInstance {
        label: format!("zmod{n}"),
        carrier: Carrier::Table(TableRing::from_tables(names, add, mul)?),
        construction: Construction::Zmod { n },
    })
}

/// Direct product of finite table rings; element `(a, b, ...)` is indexed
/// mixed-radix with the last factor varying fastest.
pub fn direct_product(factors: Vec<RingInstance>) -> Result<RingInstance, BuildError> {
    if factors.len() < 2 {
        return Err(BuildError::UnsupportedSpec(
            "direct product needs at least two factors".into(),
        ));
    }
    let tables: Vec<&TableRing> = factors
        .iter()
        .map(|f| {
            f.table().ok_or_else(|| {
                BuildError::UnsupportedSpec("direct product of a structured carrier".into())
            })
        })
        .collect::<Result<_, _>>()?;
    let n: usize = tables.iter().map(|t| t.n).product();
    if n > ORDER_HARD_CAP {
        return Err(BuildError::OrderCapExceeded { order: n, cap: ORDER_HARD_CAP });
    }
    let decode = |mut i: usize| -> Vec<usize> {
        let mut parts = vec![0usize; tables.len()];
        for (k, t) in tables.iter().enumerate().rev() {
            parts[k] = i % t.n;
            i /= t.n;
        }
        parts
    };
    let encode = |parts: &[usize]| -> usize {
        let mut i = 0;
        for (k, t) in tables.iter().enumerate() {
            i = i * t.n + parts[k];
        }
        i
    };
    let mut names = Vec::with_capacity(n);
    for i in 0..n {
        let parts = decode(i);
        let inner: Vec<String> = parts
            .iter()
            .zip(tables.iter())
            .map(|(&p, t)| t.names[p].clone())
            .collect();
        names.push(format!("({})", inner.join(",")));
    }
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for a in 0..n {
        let pa = decode(a);
        for b in 0..n {
            let pb = decode(b);
            let ps: Vec<usize> = (0..tables.len())
                .map(|k| tables[k].addi(pa[k] as u16, pb[k] as u16) as usize)
                .collect();
            let pm: Vec<usize> = (0..tables.len())
                .map(|k| tables[k].muli(pa[k] as u16, pb[k] as u16) as usize)
                .collect();
            add[a * n + b] = encode(&ps) as u16;
            mul[a * n + b] = encode(&pm) as u16;
        }
    }
    let label = factors
        .iter()
        .map(|f| f.label.clone())
        .collect::<Vec<_>>()
        .join("x");
    let factor_orders = tables.iter().map(|t| t.n).collect();
    Ok(RingInstance {
        label,
        carrier: Carrier::Table(TableRing::from_tables(names, add, mul)?),
        construction: Construction::Product { factor_orders },
    })
}

/// `{[[a,b],[0,a]] : a, b in Z/nZ}`: constant-diagonal upper triangular
/// matrices. Element `[a,b]` has index `a*n + b`.
pub fn triangular2(n: u32) -> Result<RingInstance, BuildError> {
    if n == 0 {
        return Err(BuildError::UnsupportedSpec("triangular2(0)".into()));
    }
    let n = n as usize;
    let order = n * n;
    if order > ORDER_HARD_CAP {
        return Err(BuildError::OrderCapExceeded { order, cap: ORDER_HARD_CAP });
    }
    let mut names = Vec::with_capacity(order);
    for a in 0..n {
        for b in 0..n {
            names.push(format!("[{a},{b}]"));
        }
    }
    let mut add = vec![0u16; order * order];
    let mut mul = vec![0u16; order * order];
    let idx = |a: usize, b: usize| a * n + b;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let i = idx(a, b);
                    let j = idx(c, d);
                    add[i * order + j] = idx((a + c) % n, (b + d) % n) as u16;
                    // [[a,b],[0,a]] * [[c,d],[0,c]] = [[ac, ad+bc], [0, ac]]
                    mul[i * order + j] = idx((a * c) % n, (a * d + b * c) % n) as u16;
                }
            }
        }
    }
    Ok(RingInstance {
        label: format!("tri2-z{n}"),
        carrier: Carrier::Table(TableRing::from_tables(names, add, mul)?),
        construction: Construction::Triangular2 { n },
    })
}

/// Finite ring from explicit Cayley tables.
pub fn from_raw_tables(
    label: &str,
    names: Vec<String>,
    add: Vec<u16>,
    mul: Vec<u16>,
) -> Result<RingInstance, BuildError> {
    Ok(RingInstance {
        label: label.to_string(),
        carrier: Carrier::Table(TableRing::from_tables(names, add, mul)?),
        construction: Construction::Tables,
    })
}

/// Upper-triangular 2x2 matrices over Z2, written in the matrix-unit
/// basis: index bits are the e11, e12, e22 coordinates.
pub fn ut2_z2() -> Result<RingInstance, BuildError> {
    let bits = |i: u16| (i & 1, i >> 1 & 1, i >> 2 & 1);
    let pack = |a: u16, b: u16, c: u16| a | b << 1 | c << 2;
    let names = ["0", "e11", "e12", "e11+e12", "e22", "1", "e12+e22", "1+e12"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut add = vec![0u16; 64];
    let mut mul = vec![0u16; 64];
    for i in 0..8u16 {
        for j in 0..8u16 {
            let (a, b, c) = bits(i);
            let (x, y, z) = bits(j);
            add[(i * 8 + j) as usize] = i ^ j;
            // [[a,b],[0,c]] * [[x,y],[0,z]] = [[ax, ay+bz], [0, cz]]
            mul[(i * 8 + j) as usize] = pack(a & x, (a & y) ^ (b & z), c & z);
        }
    }
    from_raw_tables("ut2-z2", names, add, mul)
}

/// `Z2[x]` as a structured carrier.
pub fn poly_mod2() -> RingInstance {
    RingInstance {
        label: "z2poly".into(),
        carrier: Carrier::PolyZ2(PolyZ2Ring),
        construction: Construction::PolyZ2,
    }
}

/// `{[[a,t],[0,a]] : a integer, t rational}` as a structured carrier.
pub fn int_rat_triangular() -> RingInstance {
    RingInstance {
        label: "zq-tri2".into(),
        carrier: Carrier::IntRatTri(IntRatTriRing),
        construction: Construction::IntRatTri,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod4_tables_follow_modular_arithmetic() {
        let r = zmod(4).unwrap();
        let t = r.table().unwrap();
        assert_eq!(t.zero, 0);
        assert_eq!(t.one, 1);
        assert_eq!(t.addi(3, 2), 1);
        assert_eq!(t.muli(3, 2), 2);
        assert_eq!(t.negi(1), 3);
    }

    #[test]
    fn zmod4_idempotents_are_zero_and_one() {
        // Oracle: brute-force scan of all four residues.
        let mut expect = Vec::new();
        for a in 0u32..4 {
            if (a * a) % 4 == a {
                expect.push(a as u16);
            }
        }
        assert_eq!(expect, vec![0, 1]);
        let r = zmod(4).unwrap();
        let got: Vec<u16> = r.idempotents().iter().map(|i| i.e.clone().idx().unwrap()).collect();
        assert_eq!(got, expect);
        assert!(r.idempotents().iter().all(|i| i.central));
    }

    #[test]
    fn boolean_product_has_four_idempotents_all_central() {
        let r = direct_product(vec![zmod(2).unwrap(), zmod(2).unwrap()]).unwrap();
        assert_eq!(r.order(), Some(4));
        let idems = r.idempotents();
        assert_eq!(idems.len(), 4);
        assert!(idems.iter().all(|i| i.central));
        assert_eq!(r.repr(&idems[1].e), "(0,1)");
    }

    #[test]
    fn triangular2_over_z4_matches_hand_products() {
        let r = triangular2(4).unwrap();
        assert_eq!(r.order(), Some(16));
        let a = r.parse_elem("[2,0]").unwrap();
        let b = r.parse_elem("[2,1]").unwrap();
        // [[2,0]] * [[2,1]] = [[0, 2]]
        assert_eq!(r.repr(&r.mul(&a, &b)), "[0,2]");
        // [[2,1]] * [[2,0]] = [[0, 2]]
        assert_eq!(r.repr(&r.mul(&b, &a)), "[0,2]");
        assert_eq!(r.repr(&r.mul(&a, &a)), "[0,0]");
        // Idempotents of the constant-diagonal triangular ring: 0 and 1 only.
        let idems: Vec<String> = r.idempotents().iter().map(|i| r.repr(&i.e)).collect();
        assert_eq!(idems, vec!["[0,0]", "[1,0]"]);
    }

    #[test]
    fn malformed_tables_are_rejected_with_the_violated_law() {
        // 2-element "ring" with a broken addition table.
        let names = vec!["0".into(), "1".into()];
        let add = vec![0, 1, 1, 1];
        let mul = vec![0, 0, 0, 1];
        match TableRing::from_tables(names, add, mul) {
            Err(BuildError::AxiomViolation { law, .. }) => {
                assert_eq!(law, "additive inverse");
            }
            other => panic!("expected axiom violation, got {other:?}"),
        }
    }

    #[test]
    fn structured_carriers_refuse_enumeration() {
        let r = poly_mod2();
        assert!(matches!(r.elements(), Err(DecideError::NotEnumerable { .. })));
        assert_eq!(r.sample_elements().len(), 16);
        let zq = int_rat_triangular();
        assert!(zq.sample_elements().len() > 16);
        let one = zq.one();
        assert_eq!(zq.repr(&one), "(1, 0)");
    }

    #[test]
    fn structured_idempotents_on_the_sample_are_trivial() {
        for r in [poly_mod2(), int_rat_triangular()] {
            let idems: Vec<Elem> = r.idempotents().into_iter().map(|i| i.e).collect();
            assert_eq!(idems, vec![r.zero(), r.one()], "ring {}", r.label);
        }
    }
}
