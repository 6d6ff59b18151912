//! Heisenberg conjugation of Paulis and code projectors by transversal diagonal gates.
//!
//! Closed forms: transversal `T`, `T`/`T†` patterns, arbitrary `Z8` powers of `T`,
//! `π/2^ℓ` Z-rotations and general quadratic-form diagonal (QFD) gates
//! `τ_R = Σ_v ξ^{vRv^T} |v⟩⟨v|`. [`dense_oracle`] recomputes every expansion from
//! the diagonal entries alone and serves as the reference.

use std::collections::{BTreeMap, HashMap};

use crate::csst::{complement_basis, StabilizerCode};
use crate::error::{check_cap, pow2, Error, Result};
use crate::gf2core::{BitVector, Subspace};
use crate::pauli::{IntPauli, PauliOp};
use crate::scalar::{cos_const, inv_sqrt2_pow, tan_const, CycScalar};

/// Largest qubit count accepted by [`dense_oracle`].
pub const ORACLE_MAX_N: usize = 5;

/// A transversal diagonal gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateSpec {
    /// `T^{t_i}` on qubit `i`, `t_i ∈ {0..7}`.
    TPattern(Vec<u8>),
    /// `diag(1, e^{2πi/2^ℓ})` on every qubit.
    ZRotation(u32),
    /// `τ_R^{(ℓ)}` for a symmetric integer matrix `R` over `Z_{2^ℓ}`.
    Qfd { r: Vec<Vec<u64>>, level: u32 },
}

impl GateSpec {
    pub fn transversal_t(n: usize) -> Self {
        GateSpec::TPattern(vec![1; n])
    }

    /// `T` on the support of `t1`, `T†` on the support of `t7`.
    pub fn t_pattern(t1: &BitVector, t7: &BitVector) -> Result<Self> {
        check_disjoint(t1, t7)?;
        Ok(GateSpec::TPattern(
            (0..t1.len())
                .map(|i| {
                    if t1.get(i) {
                        1
                    } else if t7.get(i) {
                        7
                    } else {
                        0
                    }
                })
                .collect(),
        ))
    }

    /// `τ_{D_t}^{(3)}` equivalent of a T pattern.
    pub fn diagonal_qfd(t: &[u8], level: u32) -> Self {
        let n = t.len();
        let mut r = vec![vec![0u64; n]; n];
        for i in 0..n {
            r[i][i] = t[i] as u64;
        }
        GateSpec::Qfd { r, level }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            GateSpec::TPattern(t) => {
                if t.len() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        found: t.len(),
                    });
                }
                if t.iter().any(|&x| x > 7) {
                    return Err(Error::Precondition("pattern entries must lie in 0..=7".into()));
                }
            }
            GateSpec::ZRotation(l) => {
                if *l < 2 {
                    return Err(Error::Precondition("rotation level must be at least 2".into()));
                }
            }
            GateSpec::Qfd { r, level } => {
                if *level < 2 {
                    return Err(Error::Precondition("QFD level must be at least 2".into()));
                }
                if r.len() != n || r.iter().any(|row| row.len() != n) {
                    return Err(Error::Precondition(format!("R must be {n}x{n}")));
                }
                for i in 0..n {
                    for j in 0..n {
                        if r[i][j] != r[j][i] {
                            return Err(Error::Precondition("R must be symmetric".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Level `L` such that every diagonal entry is a power of `ζ_{2^L}`.
    pub fn level(&self) -> u32 {
        match self {
            GateSpec::TPattern(_) => 3,
            GateSpec::ZRotation(l) => *l,
            GateSpec::Qfd { level, .. } => *level,
        }
    }

    /// Diagonal entry at basis state `v` as an exponent of `ζ_{2^level()}`.
    pub fn diag_exponent(&self, v: &[bool]) -> i64 {
        match self {
            GateSpec::TPattern(t) => v.iter().zip(t).filter(|(b, _)| **b).map(|(_, &x)| x as i64).sum(),
            GateSpec::ZRotation(_) => v.iter().filter(|b| **b).count() as i64,
            GateSpec::Qfd { r, level } => {
                let mut s: i64 = 0;
                for i in 0..v.len() {
                    for j in 0..v.len() {
                        if v[i] && v[j] {
                            s += r[i][j] as i64;
                        }
                    }
                }
                s.rem_euclid(1 << level)
            }
        }
    }
}

fn check_disjoint(t1: &BitVector, t7: &BitVector) -> Result<()> {
    if t1.len() != t7.len() {
        return Err(Error::LengthMismatch {
            expected: t1.len(),
            found: t7.len(),
        });
    }
    if t1.overlap(t7) != 0 {
        return Err(Error::Precondition(format!(
            "supports of t1 = {t1} and t7 = {t7} overlap"
        )));
    }
    Ok(())
}

/// `Σ c · E(a, b)` keyed on binary `(a, b)`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalPauliSum {
    n: usize,
    terms: BTreeMap<(BitVector, BitVector), CycScalar>,
}

impl DiagonalPauliSum {
    pub fn new(n: usize) -> Self {
        DiagonalPauliSum {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BitVector, &BitVector, &CycScalar)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn get(&self, a: &BitVector, b: &BitVector) -> Option<&CycScalar> {
        self.terms.get(&(a.clone(), b.clone()))
    }

    pub fn add_term(&mut self, a: BitVector, b: BitVector, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let sum = match self.terms.get(&key) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    /// Adds `c · p`, folding the phase of `p` into the coefficient.
    pub fn add_pauli(&mut self, p: &PauliOp, c: &CycScalar) {
        let c = c.mul_zeta(3, p.phase() as i64);
        self.add_term(p.a().clone(), p.b().clone(), &c);
    }

    pub fn add_sum(&mut self, other: &DiagonalPauliSum, scale: &CycScalar) {
        for ((a, b), c) in &other.terms {
            self.add_term(a.clone(), b.clone(), &(c * scale));
        }
    }

    /// `Σ |c|^2`.
    pub fn norm_sq_sum(&self) -> CycScalar {
        self.terms
            .values()
            .fold(CycScalar::zero(3), |acc, c| &acc + &c.norm_sq())
    }

    /// The sum is Hermitian (all terms Hermitian Paulis) iff every coefficient is real.
    pub fn is_self_adjoint(&self) -> bool {
        self.terms.values().all(|c| *c == c.conj())
    }

    /// Distinct X-parts appearing in the sum.
    pub fn x_parts(&self) -> Vec<BitVector> {
        let mut v: Vec<BitVector> = self.terms.keys().map(|(a, _)| a.clone()).collect();
        v.dedup();
        v
    }
}

fn phase_scalar(p: &PauliOp) -> CycScalar {
    CycScalar::zeta(3, p.phase() as i64)
}

/// Calls `f(y)` for every `y ⪯ s`, zero first.
fn for_each_subset(s: &BitVector, mut f: impl FnMut(&BitVector)) {
    let idx: Vec<usize> = s.iter_ones().collect();
    let mut y = BitVector::zeros(s.len());
    f(&y);
    for i in 1u64..(1u64 << idx.len()) {
        y.flip(idx[i.trailing_zeros() as usize]);
        f(&y);
    }
}

/// Transversal `T`: `2^{-w(a)/2} Σ_{y⪯a} (-1)^{b·y} E(a, b⊕y)`.
pub fn conj_transversal_t(p: &PauliOp) -> DiagonalPauliSum {
    let scale = &inv_sqrt2_pow(p.a().weight()) * &phase_scalar(p);
    let mut out = DiagonalPauliSum::new(p.n());
    for_each_subset(p.a(), |y| {
        let c = if p.b().dot(y) { scale.neg() } else { scale.clone() };
        out.add_term(p.a().clone(), p.b().xor(y), &c);
    });
    out
}

/// `T` on `t1`, `T†` on `t7`: `2^{-w(a*t')/2} Σ_{y⪯a*t'} (-1)^{(b+t7)·y} E(a, b⊕y)`.
pub fn conj_t_pattern(p: &PauliOp, t1: &BitVector, t7: &BitVector) -> Result<DiagonalPauliSum> {
    check_disjoint(t1, t7)?;
    let s = p.a().and(&t1.or(t7));
    let bt = p.b().xor(t7);
    let scale = &inv_sqrt2_pow(s.weight()) * &phase_scalar(p);
    let mut out = DiagonalPauliSum::new(p.n());
    for_each_subset(&s, |y| {
        let c = if bt.dot(y) { scale.neg() } else { scale.clone() };
        out.add_term(p.a().clone(), p.b().xor(y), &c);
    });
    Ok(out)
}

/// Digit decomposition of a `Z8` pattern: `(t̃1, t̃2, t̃3, t3+t4+t5+t6)`.
fn power_digits(t: &[u8]) -> [BitVector; 4] {
    let n = t.len();
    let pick = |set: &[u8]| BitVector::from_indices(n, (0..n).filter(|&i| set.contains(&(t[i] % 8))));
    [pick(&[1, 5]), pick(&[2, 6]), pick(&[3, 7]), pick(&[3, 4, 5, 6])]
}

/// Arbitrary powers `T^{t_i}`.
///
/// `(-1)^{a·(t3+t4+t5+t6)} 2^{-w(a*(t̃1+t̃3))/2} Σ_z (-1)^{(b+t̃3)·z} E(a, b⊕z)` over
/// `a*t̃2 ⪯ z ⪯ a*(t̃1+t̃2+t̃3)`.
pub fn conj_t_powers(p: &PauliOp, t: &[u8]) -> Result<DiagonalPauliSum> {
    if t.len() != p.n() {
        return Err(Error::LengthMismatch {
            expected: p.n(),
            found: t.len(),
        });
    }
    let [t1, t2, t3, t3456] = power_digits(t);
    let a = p.a();
    let free = a.and(&t1.or(&t3));
    let base = a.and(&t2);
    let bt = p.b().xor(&t3);
    let mut scale = &inv_sqrt2_pow(free.weight()) * &phase_scalar(p);
    if a.dot(&t3456) {
        scale = scale.neg();
    }
    let mut out = DiagonalPauliSum::new(p.n());
    for_each_subset(&free, |y| {
        let z = base.xor(y);
        let c = if bt.dot(&z) { scale.neg() } else { scale.clone() };
        out.add_term(a.clone(), p.b().xor(&z), &c);
    });
    Ok(out)
}

/// Transversal `diag(1, e^{2πi/2^ℓ})`.
///
/// For `ℓ >= 3`: `cos^{w(a)} Σ_{y⪯a} tan^{w(y)} (-1)^{b·y} E(a, b⊕y)` with
/// `θ = 2π/2^ℓ`. For `ℓ = 2` the gate is `S` and the exact Clifford action
/// `E(a,b) ↦ (-1)^{w(a*b)} E(a, b⊕a)` is used.
pub fn conj_z_rotation(p: &PauliOp, l: u32) -> Result<DiagonalPauliSum> {
    match l {
        0 | 1 => Err(Error::Precondition("rotation level must be at least 2".into())),
        2 => conj_t_powers(p, &vec![2; p.n()]),
        _ => {
            let w = p.a().weight();
            let cos_w = cos_const(l)?.pow(w as u32);
            let tan = tan_const(l)?;
            let tan_pows: Vec<CycScalar> = (0..=w).map(|k| tan.pow(k as u32)).collect();
            let scale = &cos_w * &phase_scalar(p);
            let mut out = DiagonalPauliSum::new(p.n());
            for_each_subset(p.a(), |y| {
                let mut c = &scale * &tan_pows[y.weight()];
                if p.b().dot(y) {
                    c = c.neg();
                }
                out.add_term(p.a().clone(), p.b().xor(y), &c);
            });
            Ok(out)
        }
    }
}

/// Fast Walsh-Hadamard transform over integer coefficient vectors, in place.
fn walsh_in_place(data: &mut [Vec<i128>]) {
    let len = data.len();
    let mut h = 1;
    while h < len {
        for i in (0..len).step_by(2 * h) {
            for j in i..i + h {
                let (lo, hi) = data.split_at_mut(j + h);
                let (x, y) = (&mut lo[j], &mut hi[0]);
                for k in 0..x.len() {
                    let (p, q) = (x[k], y[k]);
                    x[k] = p + q;
                    y[k] = p - q;
                }
            }
        }
        h *= 2;
    }
}

/// General QFD gate via `ξ^φ E(a, b + aR) τ_{R̃}^{(ℓ-1)}` with the Pauli expansion
/// of `τ_{R̃}^{(ℓ-1)}` computed by a Walsh transform.
pub fn qfd_conjugate(p: &PauliOp, r: &[Vec<u64>], l: u32, cap: u64) -> Result<DiagonalPauliSum> {
    let n = p.n();
    let gate = GateSpec::Qfd {
        r: r.to_vec(),
        level: l,
    };
    gate.validate(n)?;
    check_cap("QFD expansion", pow2(n) * (n as u128 + 1), cap)?;
    let modulus = 1i64 << l;
    let rm: Vec<Vec<i64>> = r
        .iter()
        .map(|row| row.iter().map(|&x| (x as i64).rem_euclid(modulus)).collect())
        .collect();
    let a: Vec<i64> = (0..n).map(|i| p.a().get(i) as i64).collect();
    let abar: Vec<i64> = a.iter().map(|x| 1 - x).collect();
    let ar: Vec<i64> = (0..n).map(|j| (0..n).map(|i| a[i] * rm[i][j]).sum()).collect();
    let ara: i64 = (0..n).map(|j| ar[j] * a[j]).sum();
    let q = 1i64 << (l - 2);
    let phi = ((1 - q) * ara).rem_euclid(modulus);
    let half_mod = 1i64 << (l - 1);
    // R̃ = (1+2^{ℓ-2}) D_{aR} - (D_ā R D_a + D_a R D_ā + 2 D_{aRD_a})
    let mut rt = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut x = -(abar[i] * rm[i][j] * a[j] + a[i] * rm[i][j] * abar[j]);
            if i == j {
                x += (1 + q) * ar[i] - 2 * ar[i] * a[i];
            }
            rt[i][j] = x.rem_euclid(half_mod);
        }
    }
    // Σ_v (-1)^{v·x} (ξ^2)^{v R̃ v^T}, as integer coefficient vectors at level ℓ
    let dim = 1usize << n;
    let h = 1usize << (l - 1);
    let mut data = vec![vec![0i128; h]; dim];
    for (v, slot) in data.iter_mut().enumerate() {
        let mut e: i64 = 0;
        for i in 0..n {
            if v >> i & 1 == 0 {
                continue;
            }
            for j in 0..n {
                if v >> j & 1 == 1 {
                    e += rt[i][j];
                }
            }
        }
        let e = (2 * e).rem_euclid(modulus) as usize;
        if e < h {
            slot[e] += 1;
        } else {
            slot[e - h] -= 1;
        }
    }
    walsh_in_place(&mut data);
    let base = CycScalar::zeta(l, phi).mul_ref(&phase_scalar(p)).div_pow2(n as u32);
    let i_level = l.max(2);
    let mut out = DiagonalPauliSum::new(n);
    for (x, coeffs) in data.into_iter().enumerate() {
        let c = CycScalar::from_coeffs(l, coeffs);
        if c.is_zero() {
            continue;
        }
        let ax = (0..n).filter(|&i| x >> i & 1 == 1 && a[i] == 1).count() as i64;
        let term = c.mul_ref(&base).mul_zeta(i_level, -ax * (1 << (i_level - 2)));
        // E(a, b + aR + x) with an integer second argument
        let ip = IntPauli {
            a: a.clone(),
            b: (0..n)
                .map(|i| p.b().get(i) as i64 + ar[i] + ((x >> i) & 1) as i64)
                .collect(),
            phase: 0,
        };
        let e = ip.normalize()?;
        out.add_pauli(&e, &term);
    }
    Ok(out)
}

/// Dispatches to the closed form matching `gate`.
pub fn conjugate(p: &PauliOp, gate: &GateSpec, cap: u64) -> Result<DiagonalPauliSum> {
    gate.validate(p.n())?;
    match gate {
        GateSpec::TPattern(t) => conj_t_powers(p, t),
        GateSpec::ZRotation(l) => conj_z_rotation(p, *l),
        GateSpec::Qfd { r, level } => qfd_conjugate(p, r, *level, cap),
    }
}

/// Reference expansion of `U p U†` from the diagonal entries of `U` alone.
///
/// With `f(v) = ⟨v⊕a| U p U† |v⟩`, the coefficient of `E(a, y)` is
/// `i^{-a·y} 2^{-n} Σ_v (-1)^{y·v} f(v)`, the trace formula
/// `Tr(E(a,y)† M) / 2^n`.
pub fn dense_oracle(p: &PauliOp, gate: &GateSpec) -> Result<DiagonalPauliSum> {
    let n = p.n();
    if n > ORACLE_MAX_N {
        return Err(Error::Precondition(format!(
            "dense oracle supports n <= {ORACLE_MAX_N}, got {n}"
        )));
    }
    gate.validate(n)?;
    let gl = gate.level();
    let level = gl.max(3);
    let dim = 1usize << n;
    let bits = |v: usize| -> Vec<bool> { (0..n).map(|i| v >> i & 1 == 1).collect() };
    let mask = |x: &BitVector| -> usize { (0..n).filter(|&i| x.get(i)).map(|i| 1 << i).sum() };
    let am = mask(p.a());
    let bm = mask(p.b());
    let ab = (am & bm).count_ones() as i64;
    let step = 1i64 << (level - gl);
    // f(v) as a ζ_{2^level} exponent
    let f: Vec<i64> = (0..dim)
        .map(|v| {
            let e_gate = gate.diag_exponent(&bits(v ^ am)) - gate.diag_exponent(&bits(v));
            let mut e = e_gate * step;
            e += (p.phase() as i64) << (level - 3);
            e += ab << (level - 2);
            if (bm & v).count_ones() % 2 == 1 {
                e += 1 << (level - 1);
            }
            e
        })
        .collect();
    let mut out = DiagonalPauliSum::new(n);
    for y in 0..dim {
        let mut acc = CycScalar::zero(level);
        for (v, &e) in f.iter().enumerate() {
            let term = CycScalar::zeta(level, e);
            acc = if (y & v).count_ones() % 2 == 1 {
                &acc - &term
            } else {
                &acc + &term
            };
        }
        let ay = (am & y).count_ones() as i64;
        let c = acc.mul_zeta(level, -(ay << (level - 2))).div_pow2(n as u32);
        out.add_term(p.a().clone(), BitVector::from_u64(n, y as u64), &c);
    }
    Ok(out)
}

/// [`dense_oracle`] applied to a linear combination of Paulis.
pub fn dense_oracle_sum(terms: &[(PauliOp, CycScalar)], gate: &GateSpec) -> Result<DiagonalPauliSum> {
    let n = terms.first().map_or(0, |(p, _)| p.n());
    let mut out = DiagonalPauliSum::new(n);
    for (p, c) in terms {
        out.add_sum(&dense_oracle(p, gate)?, c);
    }
    Ok(out)
}

/// Outcome of expanding `U Π_S U†` and comparing it termwise with `Π_S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectorVerdict {
    pub pass: bool,
    /// First term whose coefficient differs: `(a, b, collected - expected)`,
    /// both sides scaled by `2^r`.
    pub offending: Option<(BitVector, BitVector, CycScalar)>,
    pub fibers: usize,
    pub work: u128,
}

fn to_u128(v: &BitVector) -> u128 {
    let w = v.words();
    let lo = w.first().copied().unwrap_or(0) as u128;
    let hi = w.get(1).copied().unwrap_or(0) as u128;
    lo | hi << 64
}

fn from_u128(n: usize, x: u128) -> BitVector {
    BitVector::from_indices(n, (0..n).filter(|&i| x >> i & 1 == 1))
}

/// Terms produced per stabilizer element with X-part `a`.
fn terms_per_element(gate: &GateSpec, a: &BitVector) -> u128 {
    match gate {
        GateSpec::TPattern(t) => {
            let [t1, _, t3, _] = power_digits(t);
            pow2(a.and(&t1.or(&t3)).weight())
        }
        GateSpec::ZRotation(2) => 1,
        GateSpec::ZRotation(_) => pow2(a.weight()),
        GateSpec::Qfd { .. } => pow2(a.len()) * (a.len() as u128 + 1),
    }
}

/// Decides `U Π_S U† = Π_S` by expanding every stabilizer element.
///
/// Elements are grouped by X-part; each fiber is an independent comparison
/// because conjugation by a diagonal gate preserves the X-part.
pub fn projector_check(code: &StabilizerCode, gate: &GateSpec, cap: u64) -> Result<ProjectorVerdict> {
    let n = code.n();
    gate.validate(n)?;
    let xs = code.x_space();
    check_cap("X-space enumeration", pow2(xs.dim()), cap)?;
    let zdim = code.z_space().dim();
    let mut work: u128 = 0;
    let mut fibers = Vec::new();
    xs.for_each(cap, |a| fibers.push(a.clone()))?;
    let fast = n <= 128 && !matches!(gate, GateSpec::Qfd { .. });
    for a in &fibers {
        let w = if fast {
            fast_work(code, gate, a)?
        } else {
            pow2(zdim).saturating_mul(terms_per_element(gate, a))
        };
        work = work.saturating_add(w);
    }
    check_cap("projector expansion", work, cap)?;
    fibers.sort();
    for a in &fibers {
        let res = if fast {
            fiber_fast(code, gate, a)?
        } else {
            fiber_generic(code, gate, a, cap)?
        };
        if let Some((b, resid)) = res {
            return Ok(ProjectorVerdict {
                pass: false,
                offending: Some((a.clone(), b, resid)),
                fibers: fibers.len(),
                work,
            });
        }
    }
    Ok(ProjectorVerdict {
        pass: true,
        offending: None,
        fibers: fibers.len(),
        work,
    })
}

/// Stabilizer elements with X-part `a`, keyed by their Z-part, with sign `±1`.
fn fiber_elements(code: &StabilizerCode, a: &BitVector) -> Result<Vec<(BitVector, i8)>> {
    let rep = code
        .fiber_rep(a)
        .ok_or_else(|| Error::Inconsistent(format!("{a} is not an X-part of the group")))?;
    let mut out = Vec::new();
    let zs = code.z_space();
    let mut err = None;
    zs.for_each(u64::MAX, |z| {
        let zop = PauliOp::z_type(z.clone(), code.z_negative(z).unwrap_or(false));
        match rep.multiply(&zop) {
            Ok(e) => match e.sign() {
                Some(s) => out.push((e.b().clone(), s)),
                None => err = Some(Error::Inconsistent(format!("non-Hermitian element {e}"))),
            },
            Err(e) => err = Some(e),
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Compares collected coefficients against the expected signs; returns the
/// first mismatch in sorted order.
fn compare<K: Ord + Clone + std::hash::Hash>(
    collected: &HashMap<K, CycScalar>,
    expected: &HashMap<K, i8>,
    to_bv: impl Fn(&K) -> BitVector,
) -> Option<(BitVector, CycScalar)> {
    let mut keys: Vec<K> = collected.keys().chain(expected.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    for k in keys {
        let got = collected.get(&k).cloned().unwrap_or_else(|| CycScalar::zero(3));
        let want = CycScalar::from_int(3, expected.get(&k).copied().unwrap_or(0) as i128);
        if got != want {
            return Some((to_bv(&k), &got - &want));
        }
    }
    None
}

fn fiber_generic(
    code: &StabilizerCode,
    gate: &GateSpec,
    a: &BitVector,
    cap: u64,
) -> Result<Option<(BitVector, CycScalar)>> {
    let elems = fiber_elements(code, a)?;
    let mut acc = DiagonalPauliSum::new(code.n());
    for (b, s) in &elems {
        let p = PauliOp::new(a.clone(), b.clone(), if *s < 0 { 4 } else { 0 })?;
        acc.add_sum(&conjugate(&p, gate, cap)?, &CycScalar::one(3));
    }
    let collected: HashMap<BitVector, CycScalar> = acc.terms().map(|(_, b, c)| (b.clone(), c.clone())).collect();
    let expected: HashMap<BitVector, i8> = elems.into_iter().collect();
    Ok(compare(&collected, &expected, |k| k.clone()))
}

/// Free support, fixed shift and sign mask of the closed-form expansion of
/// `U E(a, b) U†`: terms sit at `b ⊕ base ⊕ y` for `y ⪯ free` with value
/// `(-1)^{(b ⊕ mask)·(base ⊕ y)} F(class(|y|))`.
struct FastShape {
    free: BitVector,
    base: BitVector,
    sign_mask: BitVector,
    class_values: Vec<CycScalar>,
    by_weight: bool,
}

fn fast_shape(gate: &GateSpec, a: &BitVector) -> Result<FastShape> {
    let n = a.len();
    Ok(match gate {
        GateSpec::TPattern(t) => {
            let [t1, t2, t3, t3456] = power_digits(t);
            let free = a.and(&t1.or(&t3));
            let mut f = inv_sqrt2_pow(free.weight());
            if a.dot(&t3456) {
                f = f.neg();
            }
            FastShape {
                free,
                base: a.and(&t2),
                sign_mask: t3,
                class_values: vec![f],
                by_weight: false,
            }
        }
        GateSpec::ZRotation(2) => FastShape {
            free: BitVector::zeros(n),
            base: a.clone(),
            sign_mask: BitVector::zeros(n),
            class_values: vec![CycScalar::one(3)],
            by_weight: false,
        },
        GateSpec::ZRotation(l) => {
            let w = a.weight();
            let cos_w = cos_const(*l)?.pow(w as u32);
            let tan = tan_const(*l)?;
            FastShape {
                free: a.clone(),
                base: BitVector::zeros(n),
                sign_mask: BitVector::zeros(n),
                class_values: (0..=w).map(|k| &cos_w * &tan.pow(k as u32)).collect(),
                by_weight: true,
            }
        }
        GateSpec::Qfd { .. } => return Err(Error::Precondition("QFD has no fast shape".into())),
    })
}

/// Coset representatives of `{y ⪯ free}` modulo the Z-stabilizers.
fn target_reps(code: &StabilizerCode, free: &BitVector) -> Result<Vec<BitVector>> {
    let n = code.n();
    let local = Subspace::span(n, free.iter_ones().map(|i| BitVector::from_indices(n, [i])).collect())?;
    Ok(complement_basis(&code.z_space().restrict_to_support(free), &local))
}

/// Work of one fiber on the fast path: targets times fiber size.
fn fast_work(code: &StabilizerCode, gate: &GateSpec, a: &BitVector) -> Result<u128> {
    let shape = fast_shape(gate, a)?;
    let reps = target_reps(code, &shape.free)?.len();
    Ok((pow2(reps) + 1).saturating_mul(pow2(code.z_space().dim())))
}

/// Exact comparison for T patterns and Z-rotations, `n <= 128`.
///
/// Both the conjugated fiber sum and the expected one are fixed by right
/// multiplication with every Z-stabilizer, so their difference vanishes iff
/// it vanishes at one target per coset of the Z-stabilizer space. Targets
/// met by the expansion are `b₀ ⊕ base ⊕ r` with `r` ranging over coset
/// representatives of `{y ⪯ free}`; the expected terms live on the coset of `b₀`.
fn fiber_fast(code: &StabilizerCode, gate: &GateSpec, a: &BitVector) -> Result<Option<(BitVector, CycScalar)>> {
    let n = code.n();
    let elems = fiber_elements(code, a)?;
    let expected: HashMap<u128, i8> = elems.iter().map(|(b, s)| (to_u128(b), *s)).collect();
    let shape = fast_shape(gate, a)?;
    let reps: Vec<u128> = target_reps(code, &shape.free)?.iter().map(to_u128).collect();
    let free_m = to_u128(&shape.free);
    let base_m = to_u128(&shape.base);
    let smask = to_u128(&shape.sign_mask);
    let elems_m: Vec<(u128, i64)> = elems.iter().map(|(b, s)| (to_u128(b), *s as i64)).collect();
    let b0 = elems_m[0].0;
    let nclass = shape.class_values.len();

    let mut targets = vec![b0];
    let mut r: u128 = 0;
    for i in 0..1u64 << reps.len() {
        if i > 0 {
            r ^= reps[i.trailing_zeros() as usize];
        }
        targets.push(b0 ^ base_m ^ r);
    }
    targets.sort_unstable();
    targets.dedup();

    let mut counts = vec![0i64; nclass];
    for t in targets {
        counts.iter_mut().for_each(|c| *c = 0);
        for &(b, s) in &elems_m {
            let y = t ^ b ^ base_m;
            if y & !free_m != 0 {
                continue;
            }
            let z = base_m ^ y;
            let neg = ((b ^ smask) & z).count_ones() % 2 == 1;
            let class = if shape.by_weight { y.count_ones() as usize } else { 0 };
            counts[class] += if neg { -s } else { s };
        }
        let mut got = CycScalar::zero(3);
        for (j, &m) in counts.iter().enumerate() {
            if m != 0 {
                got = &got + &shape.class_values[j].mul_int(m as i128);
            }
        }
        let want = CycScalar::from_int(3, expected.get(&t).copied().unwrap_or(0) as i128);
        if got != want {
            return Ok(Some((from_u128(n, t), &got - &want)));
        }
    }
    Ok(None)
}
