//! Exact elements of `Z[ζ_{2^L}][1/2]`.
//!
//! A value is `Σ c_i ζ^i / 2^k` over the basis `1, ζ, …, ζ^{2^{L-1}-1}`, using
//! `ζ^{2^{L-1}} = -1`. Values of different levels are compared and combined by
//! embedding into the larger cyclotomic ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct CycScalar {
    level: u32,
    coeffs: Vec<i128>,
    k: u32,
}

fn half_of(level: u32) -> usize {
    1usize << (level - 1)
}

impl CycScalar {
    pub fn zero(level: u32) -> Self {
        assert!(level >= 1, "level must be at least 1");
        CycScalar {
            level,
            coeffs: vec![0; half_of(level)],
            k: 0,
        }
    }

    pub fn from_int(level: u32, x: i128) -> Self {
        let mut s = Self::zero(level);
        s.coeffs[0] = x;
        s
    }

    /// `Σ coeffs[i] ζ^i` with `coeffs.len() == 2^{level-1}`.
    pub fn from_coeffs(level: u32, coeffs: Vec<i128>) -> Self {
        assert_eq!(coeffs.len(), half_of(level), "wrong coefficient count");
        CycScalar { level, coeffs, k: 0 }
    }

    pub fn one(level: u32) -> Self {
        Self::from_int(level, 1)
    }

    /// `ζ_{2^level}^e`.
    pub fn zeta(level: u32, e: i64) -> Self {
        let mut s = Self::zero(level);
        let n = 1i64 << level;
        let h = n / 2;
        let e = e.rem_euclid(n);
        if e < h {
            s.coeffs[e as usize] = 1;
        } else {
            s.coeffs[(e - h) as usize] = -1;
        }
        s
    }

    /// The imaginary unit (level at least 2).
    pub fn i(level: u32) -> Self {
        assert!(level >= 2);
        Self::zeta(level, 1 << (level - 2))
    }

    /// `√2 = ζ8 + ζ8^{-1}` embedded at `level >= 3`.
    pub fn sqrt2(level: u32) -> Self {
        assert!(level >= 3);
        let s = 1i64 << (level - 3);
        Self::zeta(level, s).add_ref(&Self::zeta(level, -s))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn dyadic_exp(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn canonical(mut self) -> Self {
        if self.is_zero() {
            self.k = 0;
            return self;
        }
        while self.k > 0 && self.coeffs.iter().all(|c| c % 2 == 0) {
            for c in &mut self.coeffs {
                *c /= 2;
            }
            self.k -= 1;
        }
        self
    }

    /// Embeds into `Z[ζ_{2^level}]`, `level >= self.level`.
    #[must_use]
    pub fn lift(&self, level: u32) -> Self {
        assert!(level >= self.level, "cannot lower the level");
        if level == self.level {
            return self.clone();
        }
        let step = 1usize << (level - self.level);
        let mut out = Self::zero(level);
        for (i, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[i * step] = c;
        }
        out.k = self.k;
        out
    }

    fn scaled_coeffs(&self, k: u32) -> Vec<i128> {
        let f = 1i128.checked_shl(k - self.k).expect("dyadic exponent too large");
        self.coeffs
            .iter()
            .map(|&c| c.checked_mul(f).expect("cyclotomic coefficient overflow"))
            .collect()
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let level = self.level.max(other.level);
        let (x, y) = (self.lift(level), other.lift(level));
        let k = x.k.max(y.k);
        let (cx, cy) = (x.scaled_coeffs(k), y.scaled_coeffs(k));
        let coeffs = cx
            .iter()
            .zip(&cy)
            .map(|(a, b)| a.checked_add(*b).expect("cyclotomic coefficient overflow"))
            .collect();
        CycScalar { level, coeffs, k }.canonical()
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let level = self.level.max(other.level);
        let (x, y) = (self.lift(level), other.lift(level));
        let h = half_of(level);
        let mut coeffs = vec![0i128; h];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let p = a.checked_mul(b).expect("cyclotomic coefficient overflow");
                let t = i + j;
                let slot = if t < h { &mut coeffs[t] } else { &mut coeffs[t - h] };
                let v = if t < h { p } else { -p };
                *slot = slot.checked_add(v).expect("cyclotomic coefficient overflow");
            }
        }
        CycScalar {
            level,
            coeffs,
            k: x.k + y.k,
        }
        .canonical()
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        CycScalar {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            k: self.k,
        }
    }

    #[must_use]
    pub fn mul_int(&self, m: i128) -> Self {
        CycScalar {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.checked_mul(m).expect("cyclotomic coefficient overflow"))
                .collect(),
            k: self.k,
        }
        .canonical()
    }

    /// Divides by `2^j`.
    #[must_use]
    pub fn div_pow2(&self, j: u32) -> Self {
        CycScalar {
            level: self.level,
            coeffs: self.coeffs.clone(),
            k: self.k + j,
        }
        .canonical()
    }

    /// Multiplies by `ζ_{2^level}^e`, lifting if needed.
    #[must_use]
    pub fn mul_zeta(&self, level: u32, e: i64) -> Self {
        self.mul_ref(&Self::zeta(level, e))
    }

    /// Complex conjugate (`ζ ↦ ζ^{-1}`).
    #[must_use]
    pub fn conj(&self) -> Self {
        let h = half_of(self.level);
        let mut out = Self::zero(self.level);
        out.coeffs[0] = self.coeffs[0];
        for i in 1..h {
            // ζ^{-i} = -ζ^{h-i}
            out.coeffs[h - i] = -self.coeffs[i];
        }
        out.k = self.k;
        out
    }

    #[must_use]
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.level);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }

    /// `|x|^2 = x · conj(x)`.
    pub fn norm_sq(&self) -> Self {
        self.mul_ref(&self.conj())
    }

    /// Floating-point value, for diagnostics only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = (1u64 << self.level) as f64;
        let scale = 0.5f64.powi(self.k as i32);
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += c as f64 * t.cos();
            im += c as f64 * t.sin();
        }
        (re * scale, im * scale)
    }

    /// Rational integer value, if the element is one.
    pub fn as_integer(&self) -> Option<i128> {
        (self.k == 0 && self.coeffs[1..].iter().all(|&c| c == 0)).then_some(self.coeffs[0])
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        let level = self.level.max(other.level);
        let (x, y) = (self.lift(level), other.lift(level));
        x.k == y.k && x.coeffs == y.coeffs
    }
}

impl Eq for CycScalar {}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        };
        let (re, im) = self.to_complex();
        if self.k == 0 {
            write!(f, "({body}) [z=ζ{}] ≈ {re:.6}{im:+.6}i", 1u64 << self.level)
        } else {
            write!(
                f,
                "({body})/2^{} [z=ζ{}] ≈ {re:.6}{im:+.6}i",
                self.k,
                1u64 << self.level
            )
        }
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        self.add_ref(rhs)
    }
}

impl Sub for &CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        self.add_ref(&rhs.neg())
    }
}

impl Mul for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        self.mul_ref(rhs)
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar::neg(self)
    }
}

fn check_trig_level(l: u32) -> Result<()> {
    if l < 3 {
        return Err(Error::DegenerateLevel(l));
    }
    Ok(())
}

/// `cos(2π/2^ℓ) = (ξ + ξ^{-1})/2` at level `ℓ`.
pub fn cos_const(l: u32) -> Result<CycScalar> {
    check_trig_level(l)?;
    Ok(CycScalar::zeta(l, 1).add_ref(&CycScalar::zeta(l, -1)).div_pow2(1))
}

/// `sec(2π/2^ℓ)`, which is an algebraic integer.
///
/// From `sin(2θ) = 2 sinθ cosθ` iterated up to `sin(π/2) = 1`:
/// `1/cosθ = 2 sinθ · Π_{j=1}^{ℓ-3} 2cos(2^j θ)`.
pub fn sec_const(l: u32) -> Result<CycScalar> {
    check_trig_level(l)?;
    // 2 sinθ = -i (ξ - ξ^{-1})
    let mut acc = CycScalar::zeta(l, 1)
        .add_ref(&CycScalar::zeta(l, -1).neg())
        .mul_ref(&CycScalar::i(l).neg());
    for j in 1..=(l - 3) {
        let e = 1i64 << j;
        acc = acc.mul_ref(&CycScalar::zeta(l, e).add_ref(&CycScalar::zeta(l, -e)));
    }
    Ok(acc)
}

/// `tan(2π/2^ℓ) = sinθ · secθ`.
pub fn tan_const(l: u32) -> Result<CycScalar> {
    let sin = CycScalar::zeta(l.max(3), 1)
        .add_ref(&CycScalar::zeta(l.max(3), -1).neg())
        .mul_ref(&CycScalar::i(l.max(3)).neg())
        .div_pow2(1);
    Ok(sin.mul_ref(&sec_const(l)?))
}

/// `2^{-w/2}` at level 3.
pub fn inv_sqrt2_pow(w: usize) -> CycScalar {
    let w = w as u32;
    if w % 2 == 0 {
        CycScalar::one(3).div_pow2(w / 2)
    } else {
        CycScalar::sqrt2(3).div_pow2(w / 2 + 1)
    }
}
