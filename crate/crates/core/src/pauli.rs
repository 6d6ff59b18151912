//! Hermitian Pauli operators `E(a, b) = i^{a·b} X(a) Z(b)` with an exact phase.
//!
//! The phase is an exponent of `ζ8 = e^{iπ/4}` so that conjugation factors such
//! as `e^{-iπ/4}` stay exact. Group elements have even exponents.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2core::BitVector;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOp {
    a: BitVector,
    b: BitVector,
    phase: u8,
}

impl PauliOp {
    pub fn new(a: BitVector, b: BitVector, phase: u8) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(PauliOp { a, b, phase: phase % 8 })
    }

    pub fn identity(n: usize) -> Self {
        PauliOp {
            a: BitVector::zeros(n),
            b: BitVector::zeros(n),
            phase: 0,
        }
    }

    /// `±E(a, 0)`.
    pub fn x_type(a: BitVector, negative: bool) -> Self {
        let n = a.len();
        PauliOp {
            a,
            b: BitVector::zeros(n),
            phase: if negative { 4 } else { 0 },
        }
    }

    /// `±E(0, b)`.
    pub fn z_type(b: BitVector, negative: bool) -> Self {
        let n = b.len();
        PauliOp {
            a: BitVector::zeros(n),
            b,
            phase: if negative { 4 } else { 0 },
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &BitVector {
        &self.a
    }

    pub fn b(&self) -> &BitVector {
        &self.b
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    #[must_use]
    pub fn with_phase(&self, phase: u8) -> Self {
        PauliOp {
            phase: phase % 8,
            ..self.clone()
        }
    }

    /// Multiplies by `ζ8^k`.
    #[must_use]
    pub fn times_zeta8(&self, k: i64) -> Self {
        self.with_phase(((self.phase as i64 + k).rem_euclid(8)) as u8)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase == 0 || self.phase == 4
    }

    /// `Some(+1)` or `Some(-1)` for Hermitian operators.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            4 => Some(-1),
            _ => None,
        }
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.a.or(&self.b).weight()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Symplectic product `a·d + b·c mod 2`; zero iff the operators commute.
    pub fn symplectic_inner(&self, other: &PauliOp) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.a.dot(&other.b) ^ self.b.dot(&other.a))
    }

    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        !self.symplectic_inner(other).unwrap_or(true)
    }

    /// Exact product `self · other`.
    ///
    /// Uses `E(a,b)E(c,d) = i^{b·c - a·d} E(a+c, b+d)` and folds the integer
    /// vectors back to binary with the `E(a, b+2x) = (-1)^{a·x} E(a,b)` rules.
    pub fn multiply(&self, other: &PauliOp) -> Result<PauliOp> {
        self.check_len(other)?;
        let bc = self.b.overlap(&other.a) as i64;
        let ad = self.a.overlap(&other.b) as i64;
        let mut k = self.phase as i64 + other.phase as i64 + 2 * (bc - ad);
        // a + c = (a xor c) + 2 (a*c); the b-part is still b + d here
        let ac = self.a.and(&other.a);
        let bd_sum_parity = self.b.xor(&other.b);
        if ac.dot(&bd_sum_parity) {
            k += 4;
        }
        let a = self.a.xor(&other.a);
        // b + d = (b xor d) + 2 (b*d)
        let bd = self.b.and(&other.b);
        if a.dot(&bd) {
            k += 4;
        }
        Ok(PauliOp {
            a,
            b: bd_sum_parity,
            phase: k.rem_euclid(8) as u8,
        })
    }

    fn check_len(&self, other: &PauliOp) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    /// Operator string without phase, e.g. `Z1Z2` or `I`.
    pub fn body_string(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n() {
            let c = match (self.a.get(i), self.b.get(i)) {
                (false, false) => continue,
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            s.push(c);
            s.push_str(&(i + 1).to_string());
        }
        if s.is_empty() {
            s.push('I');
        }
        s
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => String::new(),
            2 => "i".into(),
            4 => "-".into(),
            6 => "-i".into(),
            k => format!("w^{k} "),
        };
        write!(f, "{prefix}{}", self.body_string())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({self})")
    }
}

/// `ζ8^phase E(a, b)` with arbitrary integer vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPauli {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub phase: i64,
}

impl IntPauli {
    pub fn from_op(p: &PauliOp) -> Self {
        IntPauli {
            a: (0..p.n()).map(|i| p.a().get(i) as i64).collect(),
            b: (0..p.n()).map(|i| p.b().get(i) as i64).collect(),
            phase: p.phase() as i64,
        }
    }

    /// Unreduced product `i^{b·c - a·d} E(a+c, b+d)`.
    pub fn multiply(&self, other: &IntPauli) -> Result<IntPauli> {
        if self.a.len() != other.a.len() {
            return Err(Error::LengthMismatch {
                expected: self.a.len(),
                found: other.a.len(),
            });
        }
        let dot = |x: &[i64], y: &[i64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<i64>();
        let k = self.phase + other.phase + 2 * (dot(&self.b, &other.a) - dot(&self.a, &other.b));
        Ok(IntPauli {
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
            b: self.b.iter().zip(&other.b).map(|(x, y)| x + y).collect(),
            phase: k,
        })
    }

    /// Reduces `a`, `b` mod 2, moving the `(-1)^{a·x}` and `(-1)^{b·x}` factors into the phase.
    pub fn normalize(&self) -> Result<PauliOp> {
        let n = self.a.len();
        if self.b.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: self.b.len(),
            });
        }
        let mut k = self.phase;
        // b = b0 + 2x
        let mut b0 = BitVector::zeros(n);
        let mut sign = 0i64;
        for i in 0..n {
            let r = self.b[i].rem_euclid(2);
            let x = (self.b[i] - r) / 2;
            sign += self.a[i] * x;
            b0.set(i, r == 1);
        }
        // a = a0 + 2x, with b now binary
        let mut a0 = BitVector::zeros(n);
        for i in 0..n {
            let r = self.a[i].rem_euclid(2);
            let x = (self.a[i] - r) / 2;
            if b0.get(i) {
                sign += x;
            }
            a0.set(i, r == 1);
        }
        k += 4 * sign.rem_euclid(2);
        PauliOp::new(a0, b0, k.rem_euclid(8) as u8)
    }
}
