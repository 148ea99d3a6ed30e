//! Test-only high-precision oracle: power series for `J_n` and `Y_n`
//! evaluated in big-integer fixed-point arithmetic, independent of the
//! library's recurrences. Also a few shared helpers for the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fixed-point number `v · 2^{−p}`.
#[derive(Clone, Debug)]
pub struct Fx {
    pub v: BigInt,
    pub p: u32,
}

const EULER_100: &str =
    "5772156649015328606065120900824024310421593359399235988057672348848677267776646709369470632917467495";

impl Fx {
    pub fn zero(p: u32) -> Fx {
        Fx { v: BigInt::zero(), p }
    }
    pub fn int(i: i64, p: u32) -> Fx {
        Fx { v: BigInt::from(i) << p, p }
    }
    /// Exact conversion of a finite f64.
    pub fn from_f64(x: f64, p: u32) -> Fx {
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let mut v = BigInt::from(mant) * sign;
        let shift = e + p as i64;
        if shift >= 0 {
            v <<= shift as usize;
        } else {
            v >>= (-shift) as usize;
        }
        Fx { v, p }
    }
    pub fn add(&self, o: &Fx) -> Fx {
        Fx { v: &self.v + &o.v, p: self.p }
    }
    pub fn sub(&self, o: &Fx) -> Fx {
        Fx { v: &self.v - &o.v, p: self.p }
    }
    pub fn mul(&self, o: &Fx) -> Fx {
        Fx { v: (&self.v * &o.v) >> self.p as usize, p: self.p }
    }
    pub fn div(&self, o: &Fx) -> Fx {
        Fx { v: (&self.v << self.p as usize) / &o.v, p: self.p }
    }
    pub fn mul_i(&self, k: i64) -> Fx {
        Fx { v: &self.v * k, p: self.p }
    }
    pub fn div_i(&self, k: i64) -> Fx {
        Fx { v: &self.v / k, p: self.p }
    }
    pub fn is_negligible(&self, bits: u32) -> bool {
        self.v.abs().bits() < bits as u64
    }
    /// `(mantissa, exponent)` with `value = mantissa · 2^exponent`, `0.5 ≤ |m| < 1`.
    pub fn to_parts(&self) -> (f64, i64) {
        if self.v.is_zero() {
            return (0.0, 0);
        }
        let nb = self.v.abs().bits() as i64;
        let keep = 60i64;
        let sh = nb - keep;
        let top = if sh > 0 { &self.v >> sh as usize } else { &self.v << (-sh) as usize };
        let m = top.to_f64().unwrap() / 2f64.powi(keep as i32);
        (m, nb - self.p as i64)
    }
    pub fn to_f64(&self) -> f64 {
        let (m, e) = self.to_parts();
        m * 2f64.powi(e.clamp(-1100, 1100) as i32)
    }
}

fn atanh_inv(k: i64, p: u32) -> Fx {
    // atanh(1/k) = Σ 1/((2j+1) k^{2j+1})
    let mut pow = Fx::int(1, p).div_i(k);
    let mut s = Fx::zero(p);
    let k2 = k * k;
    let mut j = 0i64;
    while !pow.v.is_zero() {
        s = s.add(&pow.div_i(2 * j + 1));
        pow = pow.div_i(k2);
        j += 1;
    }
    s
}

fn atan_inv(k: i64, p: u32) -> Fx {
    let mut pow = Fx::int(1, p).div_i(k);
    let mut s = Fx::zero(p);
    let k2 = k * k;
    let mut j = 0i64;
    while !pow.v.is_zero() {
        let t = pow.div_i(2 * j + 1);
        s = if j % 2 == 0 { s.add(&t) } else { s.sub(&t) };
        pow = pow.div_i(k2);
        j += 1;
    }
    s
}

pub fn pi(p: u32) -> Fx {
    atan_inv(5, p + 16).mul_i(16).sub(&atan_inv(239, p + 16).mul_i(4)).rescale(p)
}

pub fn ln2(p: u32) -> Fx {
    atanh_inv(3, p).mul_i(2)
}

impl Fx {
    fn rescale(&self, p: u32) -> Fx {
        if p >= self.p {
            Fx { v: &self.v << (p - self.p) as usize, p }
        } else {
            Fx { v: &self.v >> (self.p - p) as usize, p }
        }
    }
}

/// Natural log of a positive fixed-point number.
pub fn ln(x: &Fx) -> Fx {
    let p = x.p;
    // x = 2^b · f, f ∈ [1, 2)
    let b = x.v.bits() as i64 - 1 - p as i64;
    let f = if b >= 0 { Fx { v: &x.v >> b as usize, p } } else { Fx { v: &x.v << (-b) as usize, p } };
    let one = Fx::int(1, p);
    let u = f.sub(&one).div(&f.add(&one));
    let u2 = u.mul(&u);
    let mut pow = u.clone();
    let mut s = Fx::zero(p);
    let mut j = 0i64;
    while !pow.v.is_zero() {
        s = s.add(&pow.div_i(2 * j + 1));
        pow = pow.mul(&u2);
        j += 1;
    }
    s.mul_i(2).add(&ln2(p).mul_i(b))
}

pub fn euler_gamma(p: u32) -> Fx {
    let digits: BigInt = EULER_100.parse().unwrap();
    let ten100 = BigInt::from(10).pow(100);
    Fx { v: (digits << p as usize) / ten100, p }
}

fn precision_for(n: u32, x: f64) -> u32 {
    // Enough fractional bits to resolve tiny J_n and to absorb e^x cancellation.
    let nf = n.max(1) as f64;
    let small = if (x / 2.0) < nf { nf * ((2.0 * nf) / (std::f64::consts::E * x)).log2().max(0.0) } else { 0.0 };
    (256.0 + small + 1.5 * x / std::f64::consts::LN_2) as u32
}

/// `J_n(x)` by its power series; returns `(m, e)` with `J = m·2^e`.
pub fn j_oracle(n: u32, x: f64) -> (f64, i64) {
    let p = precision_for(n, x);
    let h = Fx::from_f64(x / 2.0, p);
    let h2 = h.mul(&h);
    // t0 = (x/2)^n / n!
    let mut t = Fx::int(1, p);
    for k in 1..=n as i64 {
        t = t.mul(&h).div_i(k);
    }
    let mut s = t.clone();
    let mut k = 1i64;
    loop {
        t = t.mul(&h2).div_i(k * (k + n as i64)).mul_i(-1);
        if t.v.is_zero() {
            break;
        }
        s = s.add(&t);
        k += 1;
    }
    s.to_parts()
}

pub fn j_oracle_f64(n: u32, x: f64) -> f64 {
    let (m, e) = j_oracle(n, x);
    m * 2f64.powi(e.clamp(-1100, 1100) as i32)
}

/// `Y_n(x)` by its series (intended for `n ≤ 60`, `x ≤ 40`).
pub fn y_oracle(n: u32, x: f64) -> f64 {
    let p = precision_for(n, x) + 64;
    let h = Fx::from_f64(x / 2.0, p);
    let h2 = h.mul(&h);
    let one = Fx::int(1, p);
    let ni = n as i64;
    // finite sum: Σ_{k<n} (n−k−1)!/k! · (x/2)^{2k−n}
    let mut fin = Fx::zero(p);
    if n > 0 {
        // term k = 0: (n−1)! (x/2)^{−n}
        let mut t = one.clone();
        for k in 1..ni {
            t = t.mul_i(k);
        }
        for _ in 0..ni {
            t = t.div(&h);
        }
        for k in 0..ni {
            fin = fin.add(&t);
            if k + 1 < ni {
                // ratio term_{k+1}/term_k = (x/2)² / ((k+1)(n−k−1))
                t = t.mul(&h2).div_i((k + 1) * (ni - k - 1));
            }
        }
    }
    // harmonic numbers H_k, H_{n+k}
    let gamma = euler_gamma(p);
    let mut hk = Fx::zero(p);
    let mut hnk = Fx::zero(p);
    for j in 1..=ni {
        hnk = hnk.add(&one.div_i(j));
    }
    let mut t = one.clone();
    for k in 1..=ni {
        t = t.mul(&h).div_i(k);
    }
    // t = (x/2)^n / n!, with sign (−1)^k folded in below
    let mut s = Fx::zero(p);
    let mut jser = Fx::zero(p);
    let mut k = 0i64;
    loop {
        let psi_sum = hk.add(&hnk).sub(&gamma.mul_i(2));
        s = s.add(&t.mul(&psi_sum));
        jser = jser.add(&t);
        k += 1;
        t = t.mul(&h2).div_i(k * (k + ni)).mul_i(-1);
        if t.v.is_zero() {
            break;
        }
        hk = hk.add(&one.div_i(k));
        hnk = hnk.add(&one.div_i(k + ni));
    }
    let pi = pi(p);
    let lnh = ln(&h);
    // Y = −fin/π + (2/π) ln(x/2) J − s/π
    let y = fin.mul_i(-1).add(&lnh.mul(&jser).mul_i(2)).sub(&s).div(&pi);
    y.to_f64()
}

/// Relative difference helper.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
