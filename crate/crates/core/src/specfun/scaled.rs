//! Numbers carried as `mantissa · 2^exp` so that products of Bessel values
//! of very different magnitudes (tiny `J_n`, huge `Y_n`) stay representable.

use num_complex::Complex64;

/// Real value `m · 2^e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub m: f64,
    pub e: i32,
}

/// Complex value `m · 2^e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledC {
    pub m: Complex64,
    pub e: i32,
}

const EXP_MASK: u64 = 0x7ff << 52;

#[inline]
fn frexp(x: f64) -> (f64, i32) {
    let bits = x.to_bits();
    let biased = ((bits & EXP_MASK) >> 52) as i32;
    if biased == 0 || biased == 0x7ff {
        // zero, subnormal or non-finite
        if x == 0.0 || !x.is_finite() {
            return (x, 0);
        }
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    (f64::from_bits((bits & !EXP_MASK) | (1023u64 << 52)), biased - 1023)
}

/// `2^e` as an f64, saturating to 0 / inf outside the exponent range.
#[inline]
pub fn pow2(e: i32) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e < -1022 {
        f64::from_bits(((e + 1022 + 200) as u64 + 1) << 52) * 2f64.powi(-200)
    } else {
        f64::from_bits(((e + 1023) as u64) << 52)
    }
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { m: 0.0, e: 0 };

    pub fn new(x: f64) -> Self {
        Scaled { m: x, e: 0 }.norm()
    }

    pub fn from_parts(m: f64, e: i32) -> Self {
        Scaled { m, e }.norm()
    }

    /// Renormalise so that `1 ≤ |m| < 2` (or `m = 0`).
    pub fn norm(self) -> Self {
        if self.m == 0.0 {
            return Scaled::ZERO;
        }
        let (m, de) = frexp(self.m);
        Scaled { m, e: self.e + de }
    }

    pub fn to_f64(self) -> f64 {
        if self.m == 0.0 {
            return 0.0;
        }
        // Split the exponent so intermediate powers never overflow.
        let half = self.e / 2;
        self.m * pow2(half) * pow2(self.e - half)
    }

    pub fn mul(self, o: Scaled) -> Scaled {
        Scaled { m: self.m * o.m, e: self.e + o.e }.norm()
    }

    pub fn div(self, o: Scaled) -> Scaled {
        Scaled { m: self.m / o.m, e: self.e - o.e }.norm()
    }

    pub fn scale(self, k: f64) -> Scaled {
        Scaled { m: self.m * k, e: self.e }.norm()
    }

    pub fn add(self, o: Scaled) -> Scaled {
        if self.m == 0.0 {
            return o;
        }
        if o.m == 0.0 {
            return self;
        }
        let e = self.e.max(o.e);
        Scaled { m: self.m * pow2(self.e - e) + o.m * pow2(o.e - e), e }.norm()
    }

    pub fn sub(self, o: Scaled) -> Scaled {
        self.add(o.scale(-1.0))
    }

    pub fn abs(self) -> Scaled {
        Scaled { m: self.m.abs(), e: self.e }
    }

    /// Natural logarithm of |value|.
    pub fn ln_abs(self) -> f64 {
        self.m.abs().ln() + self.e as f64 * std::f64::consts::LN_2
    }

    pub fn to_complex(self) -> ScaledC {
        ScaledC { m: Complex64::new(self.m, 0.0), e: self.e }
    }
}

impl ScaledC {
    pub const ZERO: ScaledC = ScaledC { m: Complex64 { re: 0.0, im: 0.0 }, e: 0 };

    pub fn new(z: Complex64) -> Self {
        ScaledC { m: z, e: 0 }.norm()
    }

    /// Complex value `re + i·im` from two scaled reals.
    pub fn from_re_im(re: Scaled, im: Scaled) -> Self {
        let e = if re.m == 0.0 {
            im.e
        } else if im.m == 0.0 {
            re.e
        } else {
            re.e.max(im.e)
        };
        ScaledC {
            m: Complex64::new(re.m * pow2(re.e - e), im.m * pow2(im.e - e)),
            e,
        }
        .norm()
    }

    pub fn norm(self) -> Self {
        let a = self.m.re.abs().max(self.m.im.abs());
        if a == 0.0 {
            return ScaledC::ZERO;
        }
        let (_, de) = frexp(a);
        ScaledC { m: self.m * pow2(-de), e: self.e + de }
    }

    pub fn to_c64(self) -> Complex64 {
        let half = self.e / 2;
        self.m * pow2(half) * pow2(self.e - half)
    }

    pub fn mul(self, o: ScaledC) -> ScaledC {
        ScaledC { m: self.m * o.m, e: self.e + o.e }.norm()
    }

    pub fn mul_real(self, o: Scaled) -> ScaledC {
        ScaledC { m: self.m * o.m, e: self.e + o.e }.norm()
    }

    pub fn div(self, o: ScaledC) -> ScaledC {
        ScaledC { m: self.m / o.m, e: self.e - o.e }.norm()
    }

    pub fn scale(self, k: Complex64) -> ScaledC {
        ScaledC { m: self.m * k, e: self.e }.norm()
    }

    pub fn add(self, o: ScaledC) -> ScaledC {
        if self.m.norm_sqr() == 0.0 {
            return o;
        }
        if o.m.norm_sqr() == 0.0 {
            return self;
        }
        let e = self.e.max(o.e);
        ScaledC { m: self.m * pow2(self.e - e) + o.m * pow2(o.e - e), e }.norm()
    }

    pub fn conj(self) -> ScaledC {
        ScaledC { m: self.m.conj(), e: self.e }
    }
}
