//! Test-only oracles, independent of the library's arithmetic paths.
#![allow(dead_code, clippy::needless_range_loop)]

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Double-double number (~106-bit significand).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let r = (self - Dd { hi: p, lo: e }).to_f64();
        let (hi, lo) = quick_two_sum(s, r / (2.0 * s));
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

pub fn dd_sum(values: &[f64]) -> Dd {
    values.iter().fold(Dd::ZERO, |acc, &v| acc + Dd::from(v))
}

pub fn dd_mean(values: &[f64]) -> f64 {
    (dd_sum(values) / Dd::from(values.len() as f64)).to_f64()
}

/// Pearson correlation evaluated in double-double arithmetic.
pub fn dd_pearson(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = Dd::from(x.len() as f64);
    let mx = dd_sum(x) / n;
    let my = dd_sum(y) / n;
    let (mut sxy, mut sxx, mut syy) = (Dd::ZERO, Dd::ZERO, Dd::ZERO);
    for (&a, &b) in x.iter().zip(y) {
        let dx = Dd::from(a) - mx;
        let dy = Dd::from(b) - my;
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    (sxy / (sxx * syy).sqrt()).to_f64()
}

/// `1 - pearson` for every pair by a plain double loop.
pub fn oracle_rdm(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out[i][j] = 1.0 - dd_pearson(&rows[i], &rows[j]);
            }
        }
    }
    out
}

/// Upper triangle by an explicit `i < j` double loop.
pub fn oracle_triangle(m: &[Vec<f64>]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..m.len() {
        for j in 0..m.len() {
            if i < j {
                out.push(m[i][j]);
            }
        }
    }
    out
}

/// Bounded draw and partial Fisher–Yates on top of an external PCG32
/// (`rand_pcg`), following the reference `pcg32_boundedrand_r`.
pub fn reference_sample(valid: &[usize], n: usize, seed: u64) -> Vec<usize> {
    use rand::RngCore;
    let mut rng = rand_pcg::Pcg32::new(seed, 0xda3e_39cb_94b9_5bdb);
    let mut pool = valid.to_vec();
    for i in 0..n {
        let bound = (pool.len() - i) as u32;
        let threshold = bound.wrapping_neg() % bound;
        let r = loop {
            let r = rng.next_u32();
            if r >= threshold {
                break r % bound;
            }
        };
        pool.swap(i, i + r as usize);
    }
    let mut picked = pool[..n].to_vec();
    picked.sort_unstable();
    picked
}

#[test]
fn dd_oracle_sanity() {
    assert!((dd_pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]) - 0.8).abs() < 1e-16);
    let third = Dd::from(1.0) / Dd::from(3.0);
    assert!(((third * Dd::from(3.0)).to_f64() - 1.0).abs() < 1e-30);
    assert!((Dd::from(2.0).sqrt().to_f64() - std::f64::consts::SQRT_2).abs() < 1e-16);
}
