//! Owen-scrambled Sobol points and the randomized QMC integrator.
//!
//! Scrambling uses the Laine–Karras style hash on bit-reversed integers, so
//! each output bit depends only on more significant input bits (nested
//! uniform scrambling). Independent randomizations come from distinct hash
//! seeds derived from the user seed.

use alloc::vec;
use alloc::vec::Vec;

use super::rules::checked_eval;
use super::{EvalResult, Hyperbox, QuadratureConfig};
use crate::error::{Error, Result};

/// Number of independent randomizations used for the error estimate.
pub const RANDOMIZATIONS: usize = 16;

/// Points per randomization in the first pass; doubled each round.
const INITIAL_POINTS: u64 = 256;

/// Primitive polynomial data `(degree, coefficients, initial m_k)` for
/// dimensions 2.. of the Joe–Kuo direction-number set.
const JOE_KUO: [(u32, u32, &[u32]); 15] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
    (5, 4, &[1, 1, 5, 5, 5]),
    (5, 7, &[1, 1, 7, 11, 19]),
    (5, 11, &[1, 1, 5, 1, 1]),
    (5, 13, &[1, 1, 1, 3, 11]),
    (5, 14, &[1, 3, 5, 5, 31]),
    (6, 1, &[1, 3, 3, 9, 7, 49]),
    (6, 13, &[1, 1, 1, 15, 21, 21]),
    (6, 16, &[1, 3, 1, 13, 27, 49]),
];

/// Largest dimension the Sobol generator supports.
pub const MAX_QMC_DIM: usize = JOE_KUO.len() + 1;

/// Direction numbers for a Sobol sequence of fixed dimension.
#[derive(Debug, Clone)]
pub struct Sobol {
    directions: Vec<[u32; 32]>,
}

impl Sobol {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidBox("dimension must be at least 1"));
        }
        if dim > MAX_QMC_DIM {
            return Err(Error::DimensionTooLarge {
                dim,
                max: MAX_QMC_DIM,
            });
        }
        let mut directions = Vec::with_capacity(dim);
        let mut first = [0u32; 32];
        for (k, v) in first.iter_mut().enumerate() {
            *v = 1u32 << (31 - k);
        }
        directions.push(first);
        for &(s, a, init) in JOE_KUO.iter().take(dim - 1) {
            let s = s as usize;
            let mut m = [0u32; 32];
            m[..s].copy_from_slice(init);
            for k in s..32 {
                let mut next = m[k - s] ^ (m[k - s] << s);
                for i in 1..s {
                    if (a >> (s - 1 - i)) & 1 == 1 {
                        next ^= m[k - i] << i;
                    }
                }
                m[k] = next;
            }
            let mut v = [0u32; 32];
            for k in 0..32 {
                v[k] = m[k] << (31 - k);
            }
            directions.push(v);
        }
        Ok(Sobol { directions })
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Unscrambled coordinate `dim` of point `index` as a 32-bit fraction.
    #[inline]
    pub fn raw(&self, index: u32, dim: usize) -> u32 {
        let v = &self.directions[dim];
        let mut x = 0u32;
        let mut i = index;
        let mut k = 0;
        while i != 0 {
            if i & 1 == 1 {
                x ^= v[k];
            }
            i >>= 1;
            k += 1;
        }
        x
    }
}

#[inline]
fn lk_hash(mut x: u32, seed: u32) -> u32 {
    x ^= x.wrapping_mul(0x3d20_adea);
    x = x.wrapping_add(seed);
    x = x.wrapping_mul((seed >> 16) | 1);
    x ^= x.wrapping_mul(0x0552_6c56);
    x ^= x.wrapping_mul(0x53a2_2864);
    x
}

/// Nested uniform scramble of a 32-bit fraction.
#[inline]
pub fn owen_scramble(x: u32, seed: u32) -> u32 {
    lk_hash(x.reverse_bits(), seed).reverse_bits()
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One randomized copy of the Sobol sequence.
#[derive(Debug, Clone)]
pub struct ScrambledSobol<'a> {
    sobol: &'a Sobol,
    index_seed: u32,
    dim_seeds: Vec<u32>,
    jitter_seed: u64,
}

impl<'a> ScrambledSobol<'a> {
    pub fn new(sobol: &'a Sobol, seed: u64, randomization: u64) -> Self {
        let base = splitmix64(seed ^ splitmix64(randomization.wrapping_add(0x5851_f42d)));
        let dim_seeds = (0..sobol.dim() as u64)
            .map(|d| splitmix64(base.wrapping_add(d + 1)) as u32)
            .collect();
        ScrambledSobol {
            sobol,
            index_seed: (base >> 32) as u32,
            dim_seeds,
            jitter_seed: splitmix64(base ^ 0xa076_1d64_78bd_642f),
        }
    }

    /// Point `index` in `[0,1)^d`. The 32 scrambled bits are completed with
    /// hashed low-order bits so every coordinate is uniform on its cell.
    pub fn point(&self, index: u32, out: &mut [f64]) {
        let shuffled = owen_scramble(index, self.index_seed);
        for (d, o) in out.iter_mut().enumerate() {
            let bits = owen_scramble(self.sobol.raw(shuffled, d), self.dim_seeds[d]);
            let low = splitmix64(self.jitter_seed ^ ((index as u64) << 8) ^ d as u64) >> 11;
            let frac = low as f64 * (1.0 / (1u64 << 53) as f64);
            *o = (bits as f64 + frac) * (1.0 / 4_294_967_296.0);
        }
    }
}

/// Randomized QMC estimate over `region`.
///
/// Runs [`RANDOMIZATIONS`] scrambled copies in lock-step, doubling the
/// sample count until three standard errors of the mean fall under the
/// tolerance or the budget is spent.
pub fn integrate_qmc(
    f: &dyn Fn(&[f64]) -> f64,
    region: &Hyperbox,
    cfg: &QuadratureConfig,
) -> Result<EvalResult> {
    let d = region.dim();
    let sobol = Sobol::new(d)?;
    let seqs: Vec<ScrambledSobol<'_>> = (0..RANDOMIZATIONS as u64)
        .map(|r| ScrambledSobol::new(&sobol, cfg.seed, r))
        .collect();
    let r = RANDOMIZATIONS as u64;
    if r * INITIAL_POINTS > cfg.max_evals {
        return Err(Error::InvalidConfig("max_evals too small for QMC"));
    }

    let volume = region.volume();
    let mut sums = [0.0; RANDOMIZATIONS];
    let mut u = vec![0.0; d];
    let mut x = vec![0.0; d];
    let mut done: u64 = 0;
    let mut target = INITIAL_POINTS;
    let mut evals: u64 = 0;
    loop {
        for (seq, sum) in seqs.iter().zip(sums.iter_mut()) {
            let mut partial = 0.0;
            for i in done..target {
                seq.point(i as u32, &mut u);
                for k in 0..d {
                    x[k] = region.lower[k] + u[k] * (region.upper[k] - region.lower[k]);
                }
                partial += checked_eval(f, &x)?;
            }
            *sum += partial;
        }
        evals += r * (target - done);
        done = target;

        let n = done as f64;
        let estimates: Vec<f64> = sums.iter().map(|s| volume * s / n).collect();
        let mean = estimates.iter().sum::<f64>() / r as f64;
        let var = estimates
            .iter()
            .map(|e| (e - mean) * (e - mean))
            .sum::<f64>()
            / (r as f64 - 1.0);
        let error = 3.0 * libm::sqrt(var / r as f64);
        let tol = cfg.tolerance_for(mean);
        let converged = error <= tol;
        let next = target * 2;
        if converged || evals + r * (next - done) > cfg.max_evals || next > u32::MAX as u64 {
            return Ok(EvalResult {
                value: mean,
                error_estimate: error,
                evals,
                converged,
            });
        }
        target = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_dimension_is_van_der_corput() {
        let s = Sobol::new(1).unwrap();
        let want = [0u32, 1 << 31, 1 << 30, 3 << 30, 1 << 29];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(s.raw(i as u32, 0), *w);
        }
    }

    #[test]
    fn second_dimension_known_prefix() {
        // Natural (not Gray-code) ordering.
        let s = Sobol::new(2).unwrap();
        let want = [0.0, 0.5, 0.75, 0.25, 0.625, 0.125, 0.375, 0.875];
        for (i, w) in want.iter().enumerate() {
            let x = s.raw(i as u32, 1) as f64 / 4_294_967_296.0;
            assert_eq!(x, *w, "index {i}");
        }
    }

    fn stratified(values: &[u32], m: u32) -> bool {
        let mut seen = vec![false; 1 << m];
        for v in values {
            let cell = (v >> (32 - m)) as usize;
            if seen[cell] {
                return false;
            }
            seen[cell] = true;
        }
        true
    }

    #[test]
    fn every_dimension_is_stratified() {
        let s = Sobol::new(MAX_QMC_DIM).unwrap();
        for m in 1..=10u32 {
            for d in 0..MAX_QMC_DIM {
                let vals: Vec<u32> = (0..(1u32 << m)).map(|i| s.raw(i, d)).collect();
                assert!(stratified(&vals, m), "dim {d} m {m}");
            }
        }
    }

    #[test]
    fn first_two_dimensions_form_a_zero_net() {
        // Every elementary interval of volume 2^-m holds one point.
        let s = Sobol::new(2).unwrap();
        let m = 8u32;
        for a in 0..=m {
            let b = m - a;
            let mut seen = vec![false; 1 << m];
            for i in 0..(1u32 << m) {
                let x = if a == 0 { 0 } else { s.raw(i, 0) >> (32 - a) };
                let y = if b == 0 { 0 } else { s.raw(i, 1) >> (32 - b) };
                let cell = ((x << b) | y) as usize;
                assert!(!seen[cell], "a={a} b={b}");
                seen[cell] = true;
            }
        }
    }

    #[test]
    fn scrambling_preserves_stratification() {
        let s = Sobol::new(4).unwrap();
        let seq = ScrambledSobol::new(&s, 42, 3);
        let m = 9u32;
        let mut pts = vec![[0.0; 4]; 1 << m];
        for (i, p) in pts.iter_mut().enumerate() {
            seq.point(i as u32, p);
        }
        for d in 0..4 {
            let vals: Vec<u32> = pts
                .iter()
                .map(|p| (p[d] * 4_294_967_296.0) as u32)
                .collect();
            assert!(stratified(&vals, m), "dim {d}");
            assert!(pts.iter().all(|p| (0.0..1.0).contains(&p[d])));
        }
    }

    #[test]
    fn different_seeds_give_different_points() {
        let s = Sobol::new(3).unwrap();
        let a = ScrambledSobol::new(&s, 0, 0);
        let b = ScrambledSobol::new(&s, 0, 1);
        let c = ScrambledSobol::new(&s, 1, 0);
        let mut pa = [0.0; 3];
        let mut pb = [0.0; 3];
        let mut pc = [0.0; 3];
        a.point(5, &mut pa);
        b.point(5, &mut pb);
        c.point(5, &mut pc);
        assert_ne!(pa, pb);
        assert_ne!(pa, pc);
    }

    #[test]
    fn dimension_limit() {
        assert!(matches!(
            Sobol::new(MAX_QMC_DIM + 1),
            Err(Error::DimensionTooLarge { .. })
        ));
    }
}
