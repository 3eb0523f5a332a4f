//! Index-space kernel for exhaustive polynomial scans.
//!
//! Polynomial searches over a finite coefficient ring visit up to tens of
//! millions of pairs, so the hot loops work on `u16` Cayley-table indices
//! instead of [`Elem`] values. The `f_j^i` coefficient maps are tabulated
//! up front through the recurrence
//!
//! ```text
//! f_j^{i+1} = sigma . f_{j-1}^i + delta . f_j^i
//! ```
//!
//! which is an independent route from the explicit word enumeration in
//! [`crate::ore::word_map_apply`]; the two are cross-checked in tests.

use crate::derivation::SigmaDerivation;
use crate::elem::Elem;
use crate::error::DecideError;
use crate::morphism::RingMorphism;
use crate::ring::RingInstance;
use crate::verdict::{Bounds, CheckOptions, OnExcess, SampleInfo};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub struct FastCtx {
    pub n: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    pub zero: u16,
    pub one: u16,
    /// `f[len]` holds `len + 1` rows of `n` entries: `f[len][j*n + a] = f_j^len(a)`.
    f: Vec<Vec<u16>>,
    /// `sigma_pow[k*n + a] = sigma^k(a)` for `k <= max_len`.
    sigma_pow: Vec<u16>,
    max_len: usize,
}

impl FastCtx {
    /// Tabulates ring operations and word maps for `x`-powers up to
    /// `max_len`. The morphism and derivation are applied through their
    /// public element interface, so the tables inherit their validation.
    pub fn build(
        ring: &RingInstance,
        sigma: &RingMorphism,
        delta: &SigmaDerivation,
        max_len: usize,
    ) -> Result<FastCtx, DecideError> {
        let table = ring
            .table()
            .ok_or_else(|| DecideError::NotEnumerable { ring: ring.label.clone() })?;
        let n = table.n;
        let idx_of = |e: Elem| e.idx().expect("table ring produced a non-index element");
        let mut sig = vec![0u16; n];
        let mut del = vec![0u16; n];
        for a in 0..n {
            let ea = Elem::Idx(a as u16);
            sig[a] = idx_of(sigma.apply(ring, &ea));
            del[a] = idx_of(delta.apply(ring, sigma, &ea));
        }
        let mut f: Vec<Vec<u16>> = Vec::with_capacity(max_len + 1);
        f.push((0..n as u16).collect());
        for len in 1..=max_len {
            let prev = &f[len - 1];
            let mut cur = vec![0u16; (len + 1) * n];
            for j in 0..=len {
                for a in 0..n {
                    let hi = if j >= 1 && j - 1 <= len - 1 {
                        sig[prev[(j - 1) * n + a] as usize]
                    } else {
                        table.zero
                    };
                    let lo = if j <= len - 1 {
                        del[prev[j * n + a] as usize]
                    } else {
                        table.zero
                    };
                    cur[j * n + a] = table.addi(hi, lo);
                }
            }
            f.push(cur);
        }
        let mut sigma_pow = vec![0u16; (max_len + 1) * n];
        for a in 0..n as u16 {
            sigma_pow[a as usize] = a;
        }
        for k in 1..=max_len {
            for a in 0..n {
                sigma_pow[k * n + a] = sig[sigma_pow[(k - 1) * n + a] as usize];
            }
        }
        Ok(FastCtx {
            n,
            add: table.add.clone(),
            mul: table.mul.clone(),
            zero: table.zero,
            one: table.one,
            f,
            sigma_pow,
            max_len,
        })
    }

    #[inline(always)]
    pub fn addi(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.n + b as usize]
    }

    #[inline(always)]
    pub fn muli(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.n + b as usize]
    }

    /// `f_j^len(a)`.
    #[inline(always)]
    pub fn f_at(&self, len: usize, j: usize, a: u16) -> u16 {
        debug_assert!(len <= self.max_len && j <= len);
        self.f[len][j * self.n + a as usize]
    }

    /// `sigma^k(a)`.
    #[inline(always)]
    pub fn spow(&self, k: usize, a: u16) -> u16 {
        debug_assert!(k <= self.max_len);
        self.sigma_pow[k * self.n + a as usize]
    }

    pub fn is_zero_poly(&self, p: &[u16]) -> bool {
        p.iter().all(|&c| c == self.zero)
    }

    /// Full skew product: `out[j+k] += a_i * f_j^i(b_k)` for `j <= i`.
    pub fn mul_full(&self, a: &[u16], b: &[u16], out: &mut Vec<u16>) {
        out.clear();
        out.resize(a.len() + b.len() - 1, self.zero);
        for (i, &ai) in a.iter().enumerate() {
            if ai == self.zero {
                continue;
            }
            for (k, &bk) in b.iter().enumerate() {
                if bk == self.zero {
                    continue;
                }
                for j in 0..=i {
                    let t = self.muli(ai, self.f_at(i, j, bk));
                    if t != self.zero {
                        out[j + k] = self.addi(out[j + k], t);
                    }
                }
            }
        }
    }

    /// Twisted product with no derivation: `out[i+k] += a_i * sigma^i(b_k)`.
    pub fn mul_sigma(&self, a: &[u16], b: &[u16], out: &mut Vec<u16>) {
        out.clear();
        out.resize(a.len() + b.len() - 1, self.zero);
        for (i, &ai) in a.iter().enumerate() {
            if ai == self.zero {
                continue;
            }
            for (k, &bk) in b.iter().enumerate() {
                let t = self.muli(ai, self.spow(i, bk));
                if t != self.zero {
                    out[i + k] = self.addi(out[i + k], t);
                }
            }
        }
    }

    /// Untwisted convolution: `out[i+k] += a_i * b_k`.
    pub fn mul_plain(&self, a: &[u16], b: &[u16], out: &mut Vec<u16>) {
        out.clear();
        out.resize(a.len() + b.len() - 1, self.zero);
        for (i, &ai) in a.iter().enumerate() {
            if ai == self.zero {
                continue;
            }
            for (k, &bk) in b.iter().enumerate() {
                let t = self.muli(ai, bk);
                if t != self.zero {
                    out[i + k] = self.addi(out[i + k], t);
                }
            }
        }
    }

    /// Whether the monomial product `(a x^i)(b x^j)` vanishes, i.e.
    /// `a * f_j'^i(b) = 0` for every `j' <= i`.
    pub fn monomial_product_is_zero(&self, a: u16, i: usize, b: u16) -> bool {
        (0..=i).all(|jp| self.muli(a, self.f_at(i, jp, b)) == self.zero)
    }
}

/// Writes the base-`n` digits of `idx` into `out`, least significant digit
/// first; digit `i` is the coefficient of `x^i`.
#[inline(always)]
pub fn decode_poly(mut idx: u64, n: u64, out: &mut [u16]) {
    for d in out.iter_mut() {
        *d = (idx % n) as u16;
        idx /= n;
    }
}

/// How a scan will traverse its index space.
pub enum ScanPlan {
    Exhaustive(u64),
    Sampled { space: u128, picks: Vec<u64>, seed: u64 },
}

impl ScanPlan {
    /// Exhausts spaces within the work cap; larger spaces degrade to a
    /// seeded sample or an error, by policy. A sampled space must still
    /// fit in `u64` so indices stay decodable.
    pub fn for_space(space: u128, opts: &CheckOptions) -> Result<ScanPlan, DecideError> {
        if space <= opts.work_cap as u128 {
            return Ok(ScanPlan::Exhaustive(space as u64));
        }
        match opts.on_excess {
            OnExcess::Error => Err(DecideError::BoundTooLarge { space, cap: opts.work_cap }),
            OnExcess::Sample => {
                if space > u64::MAX as u128 {
                    return Err(DecideError::BoundTooLarge { space, cap: opts.work_cap });
                }
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                let picks = (0..opts.sample_size)
                    .map(|_| rng.gen_range(0..space as u64))
                    .collect();
                Ok(ScanPlan::Sampled { space, picks, seed: opts.seed })
            }
        }
    }

    pub fn space(&self) -> u128 {
        match self {
            ScanPlan::Exhaustive(s) => *s as u128,
            ScanPlan::Sampled { space, .. } => *space,
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        matches!(self, ScanPlan::Exhaustive(_))
    }

    /// Bounds record for a verdict produced under this plan.
    pub fn bounds(&self, dmax: u32) -> Bounds {
        Bounds {
            dmax: Some(dmax),
            hyp_dmax: None,
            space: Some(self.space()),
            exhaustive: self.is_exhaustive(),
            sample: match self {
                ScanPlan::Exhaustive(_) => None,
                ScanPlan::Sampled { space, picks, seed } => Some(SampleInfo {
                    space: *space,
                    sampled: picks.len() as u64,
                    seed: *seed,
                }),
            },
            element_sample: None,
        }
    }

    /// Runs `check` over the planned indices in parallel and returns the
    /// first violation in index order (exhaustive) or sample order
    /// (sampled), independent of thread scheduling.
    pub fn find_violation<W, F>(&self, check: F) -> Option<W>
    where
        W: Send,
        F: Fn(u64) -> Option<W> + Sync,
    {
        match self {
            ScanPlan::Exhaustive(space) => {
                (0..*space).into_par_iter().find_map_first(|i| check(i))
            }
            ScanPlan::Sampled { picks, .. } => {
                picks.par_iter().find_map_first(|&i| check(i))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::MorphismKind;
    use crate::ore::{self, OreContext, SkewPolynomial};
    use crate::ring::triangular2;
    use crate::spec::{build_derivation, DerivationSpec};
    use std::sync::Arc;

    fn tri4_parts() -> (Arc<RingInstance>, Arc<RingMorphism>, Arc<SigmaDerivation>) {
        let ring = Arc::new(triangular2(4).unwrap());
        let sigma = Arc::new(
            RingMorphism::from_program(&ring, MorphismKind::NegateOffdiag, "negate").unwrap(),
        );
        let delta = Arc::new(
            build_derivation(&ring, &sigma, &DerivationSpec::Inner { c: "[1,1]".into() }).unwrap(),
        );
        (ring, sigma, delta)
    }

    #[test]
    fn tabulated_word_maps_match_the_enumerated_words() {
        let (ring, sigma, delta) = tri4_parts();
        let fast = FastCtx::build(&ring, &sigma, &delta, 4).unwrap();
        let ctx = OreContext::new(ring.clone(), sigma, delta);
        for len in 0..=4usize {
            for j in 0..=len {
                for a in 0..fast.n as u16 {
                    let slow = ore::word_map_apply(&ctx, len as u32, j as u32, &Elem::Idx(a));
                    assert_eq!(Elem::Idx(fast.f_at(len, j, a)), slow);
                }
            }
        }
    }

    #[test]
    fn fast_full_product_matches_the_element_route() {
        let (ring, sigma, delta) = tri4_parts();
        let fast = FastCtx::build(&ring, &sigma, &delta, 3).unwrap();
        let ctx = OreContext::new(ring.clone(), sigma, delta);
        let n = fast.n as u64;
        let mut a = [0u16; 2];
        let mut b = [0u16; 2];
        let mut out = Vec::new();
        for pair in 0..n.pow(4) {
            decode_poly(pair % n.pow(2), n, &mut a);
            decode_poly(pair / n.pow(2), n, &mut b);
            fast.mul_full(&a, &b, &mut out);
            let p = SkewPolynomial::new(ctx.clone(), a.iter().map(|&i| Elem::Idx(i)).collect());
            let q = SkewPolynomial::new(ctx.clone(), b.iter().map(|&i| Elem::Idx(i)).collect());
            let prod = p.mul_iterated(&q).unwrap();
            for (k, &c) in out.iter().enumerate() {
                assert_eq!(prod.coeff(k), Elem::Idx(c));
            }
        }
    }

    #[test]
    fn sigma_product_is_the_full_product_with_zero_delta() {
        let (ring, sigma, _) = tri4_parts();
        let zero = Arc::new(SigmaDerivation::zero(&ring));
        let fast = FastCtx::build(&ring, &sigma, &zero, 3).unwrap();
        let n = fast.n as u64;
        let mut a = [0u16; 3];
        let mut b = [0u16; 2];
        let (mut o1, mut o2) = (Vec::new(), Vec::new());
        for trial in 0..n.pow(5) {
            decode_poly(trial % n.pow(3), n, &mut a);
            decode_poly(trial / n.pow(3), n, &mut b);
            fast.mul_full(&a, &b, &mut o1);
            fast.mul_sigma(&a, &b, &mut o2);
            assert_eq!(o1, o2);
        }
    }

    #[test]
    fn exhaustive_plans_visit_everything_and_sampled_plans_say_so() {
        let opts = CheckOptions { work_cap: 1000, sample_size: 64, ..CheckOptions::default() };
        let plan = ScanPlan::for_space(1000, &opts).unwrap();
        assert!(plan.is_exhaustive());
        // Leftmost violation wins regardless of thread interleaving.
        let hit = plan.find_violation(|i| if i >= 17 { Some(i) } else { None });
        assert_eq!(hit, Some(17));

        let plan = ScanPlan::for_space(1001, &opts).unwrap();
        assert!(!plan.is_exhaustive());
        let b = plan.bounds(2);
        assert_eq!(b.sample.unwrap().sampled, 64);
        assert_eq!(b.sample.unwrap().seed, opts.seed);

        let err_opts = CheckOptions { on_excess: OnExcess::Error, ..opts };
        assert!(matches!(
            ScanPlan::for_space(1001, &err_opts),
            Err(DecideError::BoundTooLarge { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let opts = CheckOptions { work_cap: 10, sample_size: 32, ..CheckOptions::default() };
        let (p1, p2) = (
            ScanPlan::for_space(1 << 30, &opts).unwrap(),
            ScanPlan::for_space(1 << 30, &opts).unwrap(),
        );
        match (p1, p2) {
            (ScanPlan::Sampled { picks: a, .. }, ScanPlan::Sampled { picks: b, .. }) => {
                assert_eq!(a, b);
            }
            _ => panic!("expected sampled plans"),
        }
    }
}
