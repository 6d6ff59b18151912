//! Stabilizer and CSS code models, the finite-geometry transversal-T checkers,
//! CSS-T construction, CSS-ification and brute-force distance.

use std::fmt;

use crate::error::{check_cap, pow2, Error, Result};
use crate::gf2core::{for_each_in_span, min_weight, self_dual_certificate, BitMatrix, BitVector, Subspace};
use crate::pauli::PauliOp;

/// A stabilizer group given by signed Hermitian generators, with its
/// X-part/Z-part decomposition cached.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    generators: Vec<PauliOp>,
    logical_x: Vec<PauliOp>,
    logical_z: Vec<PauliOp>,
    /// Independent elements, RREF on their X-parts, Z-parts reduced by `z_rows`.
    x_rows: Vec<PauliOp>,
    x_pivots: Vec<usize>,
    x_space: Subspace,
    /// Pure Z-type elements, RREF on their Z-parts, phase 0 or 4.
    z_rows: Vec<PauliOp>,
    z_pivots: Vec<usize>,
    z_space: Subspace,
}

/// Gauss-Jordan elimination on rows of Paulis keyed on one of the two parts,
/// multiplying whole operators so that signs are tracked exactly.
fn eliminate(rows: &mut [PauliOp], use_a: bool, n: usize) -> Result<Vec<usize>> {
    let key = |p: &PauliOp, c: usize| if use_a { p.a().get(c) } else { p.b().get(c) };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(i) = (r..rows.len()).find(|&i| key(&rows[i], c)) else {
            continue;
        };
        rows.swap(r, i);
        for j in 0..rows.len() {
            if j != r && key(&rows[j], c) {
                rows[j] = rows[j].multiply(&rows[r])?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

impl StabilizerCode {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        generators: Vec<PauliOp>,
        logical_x: Vec<PauliOp>,
        logical_z: Vec<PauliOp>,
    ) -> Result<Self> {
        for g in generators.iter().chain(&logical_x).chain(&logical_z) {
            if g.n() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: g.n(),
                });
            }
        }
        for (i, g) in generators.iter().enumerate() {
            if !g.is_hermitian() {
                return Err(Error::InvalidStabilizer(format!(
                    "generator {} ({g}) is not Hermitian",
                    i + 1
                )));
            }
            for (j, h) in generators.iter().enumerate().skip(i + 1) {
                if !g.commutes_with(h) {
                    return Err(Error::InvalidStabilizer(format!(
                        "generators {} and {} anticommute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for l in logical_x.iter().chain(&logical_z) {
            if let Some(g) = generators.iter().find(|g| !g.commutes_with(l)) {
                return Err(Error::InvalidStabilizer(format!(
                    "logical operator {l} anticommutes with generator {g}"
                )));
            }
        }
        let mut rows = generators.clone();
        let x_pivots = eliminate(&mut rows, true, n)?;
        let rx = x_pivots.len();
        let mut z_rows: Vec<PauliOp> = rows.split_off(rx);
        let mut x_rows = rows;
        let z_pivots = eliminate(&mut z_rows, false, n)?;
        for extra in &z_rows[z_pivots.len()..] {
            if extra.phase() != 0 {
                return Err(Error::InvalidStabilizer(format!(
                    "the generators produce {} times the identity",
                    if extra.phase() == 4 {
                        "-1".to_string()
                    } else {
                        format!("w^{}", extra.phase())
                    }
                )));
            }
        }
        z_rows.truncate(z_pivots.len());
        for xr in &mut x_rows {
            for (zr, &p) in z_rows.iter().zip(&z_pivots) {
                if xr.b().get(p) {
                    *xr = xr.multiply(zr)?;
                }
            }
        }
        let x_space = Subspace::span(n, x_rows.iter().map(|p| p.a().clone()).collect())?;
        let z_space = Subspace::span(n, z_rows.iter().map(|p| p.b().clone()).collect())?;
        Ok(StabilizerCode {
            name: name.into(),
            n,
            generators,
            logical_x,
            logical_z,
            x_rows,
            x_pivots,
            x_space,
            z_rows,
            z_pivots,
            z_space,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOp] {
        &self.generators
    }

    pub fn logical_x(&self) -> &[PauliOp] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliOp] {
        &self.logical_z
    }

    /// Number of independent generators.
    pub fn rank(&self) -> usize {
        self.x_rows.len() + self.z_rows.len()
    }

    pub fn k(&self) -> usize {
        self.n - self.rank()
    }

    /// X-component space: X-parts of all group elements.
    pub fn x_space(&self) -> &Subspace {
        &self.x_space
    }

    /// `Z_S`: Z-parts of the pure Z-type elements.
    pub fn z_space(&self) -> &Subspace {
        &self.z_space
    }

    pub fn x_rows(&self) -> &[PauliOp] {
        &self.x_rows
    }

    pub fn z_rows(&self) -> &[PauliOp] {
        &self.z_rows
    }

    /// `Some(true)` iff `-E(0,z)` is in the group, `None` if `z ∉ Z_S`.
    pub fn z_negative(&self, z: &BitVector) -> Option<bool> {
        let mut cur = z.clone();
        let mut neg = false;
        for (row, &p) in self.z_rows.iter().zip(&self.z_pivots) {
            if cur.get(p) {
                cur.xor_assign(row.b());
                neg ^= row.phase() == 4;
            }
        }
        cur.is_zero().then_some(neg)
    }

    /// A vector `x0` with `(-1)^{z·x0} = ε_z` for every `z ∈ Z_S`.
    pub fn z_sign_shift(&self) -> BitVector {
        let mut x = BitVector::zeros(self.n);
        for (row, &p) in self.z_rows.iter().zip(&self.z_pivots) {
            if row.phase() == 4 {
                x.set(p, true);
            }
        }
        x
    }

    /// Some group element with X-part `a`.
    pub fn fiber_rep(&self, a: &BitVector) -> Option<PauliOp> {
        let mut cur = a.clone();
        let mut rep = PauliOp::identity(self.n);
        for (row, &p) in self.x_rows.iter().zip(&self.x_pivots) {
            if cur.get(p) {
                cur.xor_assign(row.a());
                rep = rep.multiply(row).expect("equal lengths");
            }
        }
        cur.is_zero().then_some(rep)
    }

    /// `Some(±1)` if `±p` (exactly) lies in the group, `None` otherwise.
    pub fn element_sign(&self, p: &PauliOp) -> Option<i8> {
        let rep = self.fiber_rep(p.a())?;
        let rest = rep.multiply(p).ok()?;
        if !rest.a().is_zero() {
            return None;
        }
        let neg = self.z_negative(rest.b())?;
        let s = rest.sign()?;
        Some(if neg { -s } else { s })
    }

    /// Conjugates every generator by `E(x, 0)`.
    pub fn conjugated_by_x(&self, x: &BitVector) -> Result<StabilizerCode> {
        let flip = |g: &PauliOp| {
            if g.b().dot(x) {
                g.times_zeta8(4)
            } else {
                g.clone()
            }
        };
        StabilizerCode::new(
            self.name.clone(),
            self.n,
            self.generators.iter().map(flip).collect(),
            self.logical_x.iter().map(flip).collect(),
            self.logical_z.clone(),
        )
    }
}

/// `CSS(X, C2; Z, C1^⊥)` with signed Z generators and logical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    name: String,
    n: usize,
    x_gens: Vec<BitVector>,
    z_gens: Vec<BitVector>,
    z_neg: Vec<bool>,
    logical_x: Vec<BitVector>,
    logical_z: Vec<BitVector>,
}

impl CssCode {
    /// Builds the code; missing logical bases are completed from the coset
    /// space `C1/C2` and the pairing with `C2^⊥/C1^⊥`.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        x_gens: Vec<BitVector>,
        z_gens: Vec<BitVector>,
        z_neg: Vec<bool>,
        logical_x: Vec<BitVector>,
        logical_z: Vec<BitVector>,
    ) -> Result<Self> {
        if z_neg.len() != z_gens.len() {
            return Err(Error::LengthMismatch {
                expected: z_gens.len(),
                found: z_neg.len(),
            });
        }
        for v in x_gens.iter().chain(&z_gens).chain(&logical_x).chain(&logical_z) {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        for x in &x_gens {
            if let Some(z) = z_gens.iter().find(|z| x.dot(z)) {
                return Err(Error::InvalidStabilizer(format!(
                    "X generator {x} anticommutes with Z generator {z}"
                )));
            }
        }
        let mut code = CssCode {
            name: name.into(),
            n,
            x_gens,
            z_gens,
            z_neg,
            logical_x,
            logical_z,
        };
        let c1 = code.c1();
        let c2 = code.c2();
        if !c1.contains_subspace(&c2) {
            return Err(Error::InvalidStabilizer("C2 is not contained in C1".into()));
        }
        let k = c1.dim() - c2.dim();
        if code.logical_x.is_empty() && k > 0 {
            code.logical_x = complement_basis(&c2, &c1);
        }
        let mut span = c2.clone();
        for x in &code.logical_x {
            if !c1.contains(x) || span.contains(x) {
                return Err(Error::InvalidStabilizer(format!(
                    "logical X {x} is not independent in C1/C2"
                )));
            }
            span = span.sum(&Subspace::span(n, vec![x.clone()])?);
        }
        if code.logical_x.len() != k {
            return Err(Error::InvalidStabilizer(format!(
                "expected {k} logical X operators, found {}",
                code.logical_x.len()
            )));
        }
        if code.logical_z.is_empty() && k > 0 {
            code.logical_z = pair_logical_z(&code.logical_x, &c2.dual())?;
        }
        code.check_logical_pairing()?;
        code.to_stabilizer()?;
        Ok(code)
    }

    fn check_logical_pairing(&self) -> Result<()> {
        if self.logical_z.len() != self.logical_x.len() {
            return Err(Error::InvalidStabilizer("logical X and Z counts differ".into()));
        }
        let c2 = self.c2();
        for (i, x) in self.logical_x.iter().enumerate() {
            for (j, z) in self.logical_z.iter().enumerate() {
                if x.dot(z) != (i == j) {
                    return Err(Error::InvalidStabilizer(format!(
                        "logical X{} and Z{} have the wrong commutation",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for z in &self.logical_z {
            if c2.basis().iter().any(|x| x.dot(z)) {
                return Err(Error::InvalidStabilizer(format!("logical Z {z} anticommutes with C2")));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_gens(&self) -> &[BitVector] {
        &self.x_gens
    }

    pub fn z_gens(&self) -> &[BitVector] {
        &self.z_gens
    }

    pub fn z_signs_negative(&self) -> &[bool] {
        &self.z_neg
    }

    pub fn logical_x(&self) -> &[BitVector] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[BitVector] {
        &self.logical_z
    }

    pub fn k(&self) -> usize {
        self.logical_x.len()
    }

    pub fn c2(&self) -> Subspace {
        Subspace::span(self.n, self.x_gens.clone()).expect("lengths validated")
    }

    /// `C1^⊥`, the Z-stabilizer space.
    pub fn cz(&self) -> Subspace {
        Subspace::span(self.n, self.z_gens.clone()).expect("lengths validated")
    }

    pub fn c1(&self) -> Subspace {
        self.cz().dual()
    }

    pub fn to_stabilizer(&self) -> Result<StabilizerCode> {
        let mut gens: Vec<PauliOp> = self.x_gens.iter().map(|x| PauliOp::x_type(x.clone(), false)).collect();
        gens.extend(
            self.z_gens
                .iter()
                .zip(&self.z_neg)
                .map(|(z, &neg)| PauliOp::z_type(z.clone(), neg)),
        );
        StabilizerCode::new(
            self.name.clone(),
            self.n,
            gens,
            self.logical_x
                .iter()
                .map(|x| PauliOp::x_type(x.clone(), false))
                .collect(),
            self.logical_z
                .iter()
                .map(|z| PauliOp::z_type(z.clone(), false))
                .collect(),
        )
    }

    /// Same code with every Z sign set from `neg(z)`.
    pub fn with_z_signs(&self, neg: impl Fn(&BitVector) -> bool) -> Result<CssCode> {
        let mut c = self.clone();
        c.z_neg = c.z_gens.iter().map(neg).collect();
        c.to_stabilizer()?;
        Ok(c)
    }

    /// `[[n, k, d]]` distance as `min(d_X, d_Z)`; `None` when `k = 0`.
    pub fn distance(&self, cap: u64) -> Result<Option<usize>> {
        let dx = min_weight(&self.c1(), &self.c2(), cap)?;
        let dz = min_weight(&self.c2().dual(), &self.cz(), cap)?;
        Ok(match (dx, dz) {
            (Some(x), Some(z)) => Some(x.min(z)),
            (x, z) => x.or(z),
        })
    }
}

/// Vectors of `big` completing a basis of `small` (in the order of `big`'s basis).
pub fn complement_basis(small: &Subspace, big: &Subspace) -> Vec<BitVector> {
    let mut span = small.clone();
    let mut out = Vec::new();
    for v in big.basis() {
        if !span.contains(v) {
            out.push(v.clone());
            span = span.sum(&Subspace::span(v.len(), vec![v.clone()]).expect("same length"));
        }
    }
    out
}

/// Vectors `z_j` of `space` with `x_i · z_j = δ_ij`.
fn pair_logical_z(xs: &[BitVector], space: &Subspace) -> Result<Vec<BitVector>> {
    let k = xs.len();
    let n = space.ambient();
    let rows: Vec<BitVector> = space
        .basis()
        .iter()
        .map(|u| {
            let p = BitVector::from_bools(&xs.iter().map(|x| x.dot(u)).collect::<Vec<_>>());
            p.concat(u)
        })
        .collect();
    let (rref, _, pivots) = BitMatrix::from_rows(k + n, rows)?.rref();
    let mut out = vec![None; k];
    for (row, &p) in rref.rows().iter().zip(&pivots) {
        if p < k {
            out[p] = Some(row.slice(k, n));
        }
    }
    out.into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidStabilizer("logical X operators cannot be paired".into()))
}

/// Why a fiber fails the transversal-T conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    OddWeight,
    NoSelfDual,
    WrongSign,
    NotTriorthogonal,
    MissingStabilizer,
    WrongPhase,
    WeightMismatch,
    NonzeroSum,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::OddWeight => "ODD_WEIGHT",
            Violation::NoSelfDual => "NO_SELF_DUAL",
            Violation::WrongSign => "WRONG_SIGN",
            Violation::NotTriorthogonal => "NOT_TRIORTHOGONAL",
            Violation::MissingStabilizer => "MISSING_STABILIZER",
            Violation::WrongPhase => "WRONG_PHASE",
            Violation::WeightMismatch => "WEIGHT_MISMATCH",
            Violation::NonzeroSum => "NONZERO_SUM",
        })
    }
}

/// Per-item outcome: a certificate when the item passes, a violation otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// The X-part (or row) the item refers to.
    pub a: BitVector,
    pub violation: Option<Violation>,
    /// Offending vector for a violation.
    pub vector: Option<BitVector>,
    /// Basis of the self-dual certificate, in full coordinates.
    pub certificate: Option<Vec<BitVector>>,
    pub detail: Option<String>,
}

impl Witness {
    pub fn ok(a: BitVector) -> Self {
        Witness {
            a,
            violation: None,
            vector: None,
            certificate: None,
            detail: None,
        }
    }

    pub fn fail(a: BitVector, v: Violation, vector: Option<BitVector>, detail: impl Into<String>) -> Self {
        Witness {
            a,
            violation: Some(v),
            vector,
            certificate: None,
            detail: Some(detail.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    /// False when only part of the quantified set was examined.
    pub complete: bool,
    pub checked: usize,
    pub witnesses: Vec<Witness>,
}

impl Verdict {
    pub fn from_witnesses(witnesses: Vec<Witness>, checked: usize, complete: bool) -> Self {
        Verdict {
            pass: witnesses.iter().all(|w| w.violation.is_none()),
            complete,
            checked,
            witnesses,
        }
    }

    pub fn first_violation(&self) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.violation.is_some())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Only test signs on `(Z̃_j)^⊥`, the necessary part of the condition.
    pub strict_signs: bool,
    /// Examine at most `cap` X-parts instead of failing when the space is larger.
    pub partial: bool,
    /// Build a sign-consistent self-dual certificate for every passing fiber.
    pub certificates: bool,
    pub cap: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            strict_signs: false,
            partial: false,
            certificates: false,
            cap: crate::DEFAULT_CAP,
        }
    }
}

/// Calls `f` on elements of `s` in Gray order, stopping after `limit` of them.
/// Returns whether the whole space was visited.
pub(crate) fn for_each_limited(
    s: &Subspace,
    limit: u64,
    mut f: impl FnMut(&BitVector) -> Result<bool>,
) -> Result<bool> {
    let total = pow2(s.dim());
    let mut cur = BitVector::zeros(s.ambient());
    if !f(&cur)? {
        return Ok(false);
    }
    let stop = total.min(limit as u128) as u64;
    for i in 1..stop {
        cur.xor_assign(&s.basis()[i.trailing_zeros() as usize]);
        if !f(&cur)? {
            return Ok(false);
        }
    }
    Ok(total <= limit as u128)
}

/// Transversal `T` on every qubit.
pub fn check_transversal_t(code: &StabilizerCode, opts: &CheckOptions) -> Result<Verdict> {
    check_transversal_pattern(code, &BitVector::ones(code.n()), &BitVector::zeros(code.n()), opts)
}

/// `T` on `t1`, `T†` on `t7`, identity elsewhere.
///
/// For each X-part `a` with `s = a*(t1+t7)`: `w(s)` even; `Z̃`, the puncture of
/// `{z ∈ Z_S : z ⪯ s}` to `s`, contains its dual `D`; every `d ∈ D` has
/// `ε_d = i^{w(d)}(-1)^{t7·d}`; and the coset weight `w(s*(x0⊕t7))` is
/// `w(s)/2 mod 4`, where `(-1)^{z·x0} = ε_z`. The last two say exactly that some
/// self-dual `A ⊆ Z̃` carries the signs `i^{w(z)+2t7·z}`, and the four together
/// are equivalent to `U Π_S U† = Π_S`.
pub fn check_transversal_pattern(
    code: &StabilizerCode,
    t1: &BitVector,
    t7: &BitVector,
    opts: &CheckOptions,
) -> Result<Verdict> {
    let n = code.n();
    for v in [t1, t7] {
        if v.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    if t1.overlap(t7) != 0 {
        return Err(Error::Precondition("t1 and t7 overlap".into()));
    }
    let xs = code.x_space();
    if !opts.partial {
        check_cap("X-component space", pow2(xs.dim()), opts.cap)?;
    }
    let tp = t1.or(t7);
    let x0 = code.z_sign_shift();
    let mut witnesses = Vec::new();
    let mut checked = 0usize;
    let complete = for_each_limited(xs, opts.cap, |a| {
        checked += 1;
        if a.is_zero() {
            return Ok(true);
        }
        let w = fiber_witness(code, a, &tp, t7, &x0, opts)?;
        let bad = w.violation.is_some();
        witnesses.push(w);
        Ok(!bad)
    })?;
    let failed = witnesses.iter().any(|w| w.violation.is_some());
    Ok(Verdict::from_witnesses(witnesses, checked, complete || failed))
}

fn fiber_witness(
    code: &StabilizerCode,
    a: &BitVector,
    tp: &BitVector,
    t7: &BitVector,
    x0: &BitVector,
    opts: &CheckOptions,
) -> Result<Witness> {
    let s = a.and(tp);
    let w = s.weight();
    if w % 2 == 1 {
        return Ok(Witness::fail(
            a.clone(),
            Violation::OddWeight,
            Some(s),
            format!("weight {w} is odd"),
        ));
    }
    if w == 0 {
        return Ok(Witness::ok(a.clone()));
    }
    let zj = code.z_space().restrict_to_support(&s);
    let zt = zj.puncture(&s)?;
    let d = zt.dual();
    if let Some(v) = d.basis().iter().find(|v| !zt.contains(v)) {
        return Ok(Witness::fail(
            a.clone(),
            Violation::NoSelfDual,
            Some(v.embed(&s)),
            format!(
                "Z_j has dimension {}, the dual of its restriction is not contained in it",
                zt.dim()
            ),
        ));
    }
    let c0 = s.and(&x0.xor(t7));
    let c0p = c0.restrict(&s);
    let q = |v: &BitVector| (v.weight() + 2 * (c0p.dot(v) as usize)) % 4;
    for v in d.basis() {
        if q(v) != 0 {
            return Ok(Witness::fail(
                a.clone(),
                Violation::WrongSign,
                Some(v.embed(&s)),
                "sign differs from i^{w(z)+2 t7.z}",
            ));
        }
    }
    if !opts.strict_signs && c0.weight() % 4 != (w / 2) % 4 {
        return Ok(Witness::fail(
            a.clone(),
            Violation::WrongSign,
            Some(c0.clone()),
            format!(
                "no self-dual subcode carries the required signs: coset weight {} vs {}",
                c0.weight(),
                w / 2
            ),
        ));
    }
    let mut out = Witness::ok(a.clone());
    if opts.certificates {
        out.certificate = signed_certificate(&d, &c0p, w, opts.cap)?.map(|c| c.lift(&s).basis().to_vec());
    }
    Ok(out)
}

/// Extends `d` (punctured coordinates, self-orthogonal) to a self-dual code on
/// which `w(v) + 2 c·v ≡ 0 mod 4`. `None` if the search budget runs out.
fn signed_certificate(d: &Subspace, c: &BitVector, w: usize, cap: u64) -> Result<Option<Subspace>> {
    let q = |v: &BitVector| (v.weight() + 2 * (c.dot(v) as usize)) % 4;
    let mut cert = d.clone();
    while cert.dim() < w / 2 {
        let quotient = Subspace::span(w, complement_basis(&cert, &cert.dual()))?;
        let mut found = None;
        let complete = for_each_limited(&quotient, cap, |v| {
            if !v.is_zero() && q(v) == 0 {
                found = Some(v.clone());
                return Ok(false);
            }
            Ok(true)
        })?;
        match found {
            Some(v) => {
                let mut rows = cert.basis().to_vec();
                rows.push(v);
                cert = Subspace::span(w, rows)?;
            }
            None if complete => {
                return Err(Error::Inconsistent(
                    "coset condition holds but no sign-consistent extension exists".into(),
                ))
            }
            None => return Ok(None),
        }
    }
    Ok(Some(cert))
}

/// Pauli `X(x)` that, applied before and after the gate, fixes the Z signs.
///
/// Picks a self-dual certificate per fiber and solves
/// `(-1)^{x·z} ε_z = i^{w(z)+2t7·z}` on its basis over GF(2). `None` when the
/// system has no solution.
pub fn pauli_sign_correction(
    code: &StabilizerCode,
    t1: &BitVector,
    t7: &BitVector,
    cap: u64,
) -> Result<Option<BitVector>> {
    let n = code.n();
    let tp = t1.or(t7);
    check_cap("X-component space", pow2(code.x_space().dim()), cap)?;
    let mut eqs: Vec<BitVector> = Vec::new();
    let mut err = None;
    code.x_space().for_each(cap, |a| {
        if err.is_some() || a.is_zero() {
            return;
        }
        let s = a.and(&tp);
        if s.weight() % 2 == 1 {
            err = Some(Error::Precondition(format!("weight of {s} is odd")));
            return;
        }
        if s.is_zero() {
            return;
        }
        let zj = code.z_space().restrict_to_support(&s);
        match self_dual_certificate(&zj, &s) {
            Ok(Some(cert)) => {
                for z in cert.basis() {
                    let neg = code.z_negative(z).expect("certificate lies in Z_S");
                    let want_neg = (z.weight() / 2 + t7.dot(z) as usize) % 2 == 1;
                    eqs.push(z.concat(&BitVector::from_bools(&[neg != want_neg])));
                }
            }
            Ok(None) => err = Some(Error::Precondition(format!("no self-dual code inside Z_S on {s}"))),
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let (rref, _, pivots) = BitMatrix::from_rows(n + 1, eqs)?.rref();
    let mut x = BitVector::zeros(n);
    for (row, &p) in rref.rows().iter().zip(&pivots) {
        if p == n {
            return Ok(None);
        }
        x.set(p, row.get(n));
    }
    Ok(Some(x))
}

/// CSS code `CSS(X, C2; Z, C1^⊥)` with Z signs `i^{w(z)+2t7·z}` on a basis of
/// `C1^⊥`, rejected unless `T^{t1} (T†)^{t7}` preserves it.
pub fn build_csst(
    name: &str,
    c1: &Subspace,
    c2: &Subspace,
    t1: &BitVector,
    t7: &BitVector,
    cap: u64,
) -> Result<CssCode> {
    if !c1.contains_subspace(c2) {
        return Err(Error::Precondition("C2 is not contained in C1".into()));
    }
    let cz = c1.dual();
    let z_neg = cz
        .basis()
        .iter()
        .map(|z| (z.weight() / 2 + t7.dot(z) as usize) % 2 == 1)
        .collect();
    let code = CssCode::new(
        name,
        c1.ambient(),
        c2.basis().to_vec(),
        cz.basis().to_vec(),
        z_neg,
        vec![],
        vec![],
    )?;
    let v = check_transversal_pattern(
        &code.to_stabilizer()?,
        t1,
        t7,
        &CheckOptions {
            cap,
            ..CheckOptions::default()
        },
    )?;
    if let Some(w) = v.first_violation() {
        return Err(Error::Precondition(format!(
            "pattern is not preserved: {} at X-part {}{}",
            w.violation.expect("violation"),
            w.a,
            w.vector.as_ref().map(|v| format!(", vector {v}")).unwrap_or_default()
        )));
    }
    Ok(code)
}

/// `C1 * C2 ⊆ C1^⊥`, checked on generator pairs.
pub fn star_condition(c1: &Subspace, c2: &Subspace) -> bool {
    let cz = c1.dual();
    c1.basis()
        .iter()
        .all(|u| c2.basis().iter().all(|v| cz.contains(&u.and(v))))
}

/// Drops the Z-parts of the mixed rows: `⟨A, C⟩` become X generators and the
/// pure Z-type rows `⟨D⟩` keep their signs.
pub fn cssify(code: &StabilizerCode) -> Result<CssCode> {
    let x_gens = code.x_rows().iter().map(|p| p.a().clone()).collect();
    let z_gens: Vec<BitVector> = code.z_rows().iter().map(|p| p.b().clone()).collect();
    let z_neg = code.z_rows().iter().map(|p| p.phase() == 4).collect();
    CssCode::new(
        format!("{}_css", code.name()),
        code.n(),
        x_gens,
        z_gens,
        z_neg,
        vec![],
        vec![],
    )
}

/// Symplectic vector `(a | b)` of a Pauli.
fn symplectic(p: &PauliOp) -> BitVector {
    p.a().concat(p.b())
}

/// Minimum weight of `N(S) \ S` by enumerating the normalizer; `None` when `k = 0`.
pub fn code_distance(code: &StabilizerCode, cap: u64) -> Result<Option<usize>> {
    let n = code.n();
    let s_rows: Vec<BitVector> = code.x_rows().iter().chain(code.z_rows()).map(symplectic).collect();
    let s = Subspace::span(2 * n, s_rows.clone())?;
    // (a,b) commutes with (c,d) iff (a,b)·(d,c) = 0
    let swapped: Vec<BitVector> = s_rows.iter().map(|v| v.slice(n, n).concat(&v.slice(0, n))).collect();
    let norm = Subspace::span(2 * n, swapped)?.dual();
    check_cap("normalizer enumeration", pow2(norm.dim()), cap)?;
    let comp = complement_basis(&s, &norm);
    if comp.is_empty() {
        return Ok(None);
    }
    let mut best = usize::MAX;
    let s_elems = s.elements(cap)?;
    for_each_in_span(&comp, 2 * n, |l| {
        if l.is_zero() {
            return;
        }
        for e in &s_elems {
            let v = l.xor(e);
            let w = v.slice(0, n).or(&v.slice(n, n)).weight();
            best = best.min(w);
        }
    });
    Ok(Some(best))
}

/// Every non-identity stabilizer element has weight at least `d`.
pub fn is_nondegenerate(code: &StabilizerCode, d: usize, cap: u64) -> Result<bool> {
    let n = code.n();
    let rows: Vec<BitVector> = code.x_rows().iter().chain(code.z_rows()).map(symplectic).collect();
    let s = Subspace::span(2 * n, rows)?;
    let mut ok = true;
    s.for_each(cap, |v| {
        if !v.is_zero() && v.slice(0, n).or(&v.slice(n, n)).weight() < d {
            ok = false;
        }
    })?;
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    fn code622(neg: bool) -> CssCode {
        CssCode::new(
            "622",
            6,
            vec![bv("111111")],
            vec![bv("110000"), bv("001100"), bv("000011")],
            vec![neg; 3],
            vec![bv("110000"), bv("001100")],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn structure_of_622() {
        let s = code622(true).to_stabilizer().unwrap();
        assert_eq!(s.k(), 2);
        assert_eq!(s.x_space().dim(), 1);
        assert_eq!(s.z_space().dim(), 3);
        assert_eq!(s.z_negative(&bv("111100")), Some(false));
        assert_eq!(s.z_negative(&bv("110000")), Some(true));
        assert_eq!(s.z_negative(&bv("100000")), None);
        assert_eq!(s.z_sign_shift(), bv("101010"));
        // Y^{⊗6} = i^6 X Z = -X..X Z..Z, in the group with sign -(-1)^3 = +1
        let y6 = PauliOp::new(bv("111111"), bv("111111"), 0).unwrap();
        assert_eq!(s.element_sign(&y6), Some(1));
    }

    #[test]
    fn minus_identity_rejected() {
        let gens = vec![PauliOp::z_type(bv("11"), false), PauliOp::z_type(bv("11"), true)];
        assert!(matches!(
            StabilizerCode::new("bad", 2, gens, vec![], vec![]),
            Err(Error::InvalidStabilizer(_))
        ));
    }

    #[test]
    fn anticommuting_rejected() {
        let gens = vec![PauliOp::z_type(bv("10"), false), PauliOp::x_type(bv("11"), false)];
        assert!(StabilizerCode::new("bad", 2, gens, vec![], vec![]).is_err());
    }

    #[test]
    fn t_checker_on_622() {
        let opts = CheckOptions {
            certificates: true,
            ..CheckOptions::default()
        };
        let good = check_transversal_t(&code622(true).to_stabilizer().unwrap(), &opts).unwrap();
        assert!(good.pass);
        assert_eq!(good.witnesses[0].certificate.as_ref().unwrap().len(), 3);
        let bad = check_transversal_t(&code622(false).to_stabilizer().unwrap(), &opts).unwrap();
        let w = bad.first_violation().unwrap();
        assert_eq!(w.violation, Some(Violation::WrongSign));
        assert_eq!(w.vector, Some(bv("110000")));
    }

    #[test]
    fn alternating_pattern_on_positive_622() {
        let code = code622(false).to_stabilizer().unwrap();
        let v = check_transversal_pattern(&code, &bv("101010"), &bv("010101"), &CheckOptions::default()).unwrap();
        assert!(v.pass);
    }

    #[test]
    fn sign_correction_on_622() {
        let code = code622(false).to_stabilizer().unwrap();
        let x = pauli_sign_correction(&code, &BitVector::ones(6), &BitVector::zeros(6), 1 << 20)
            .unwrap()
            .unwrap();
        for z in ["110000", "001100", "000011"] {
            assert!(x.dot(&bv(z)));
        }
        let fixed = code.conjugated_by_x(&x).unwrap();
        assert!(check_transversal_t(&fixed, &CheckOptions::default()).unwrap().pass);
        let ok = code622(true).to_stabilizer().unwrap();
        let x0 = pauli_sign_correction(&ok, &BitVector::ones(6), &BitVector::zeros(6), 1 << 20).unwrap();
        assert_eq!(x0, Some(BitVector::zeros(6)));
    }

    #[test]
    fn odd_weight_detected() {
        let code = CssCode::new(
            "rep",
            3,
            vec![bv("111")],
            vec![bv("110"), bv("011")],
            vec![false; 2],
            vec![],
            vec![],
        )
        .unwrap();
        let v = check_transversal_t(&code.to_stabilizer().unwrap(), &CheckOptions::default()).unwrap();
        assert_eq!(v.first_violation().unwrap().violation, Some(Violation::OddWeight));
    }

    #[test]
    fn no_self_dual_detected() {
        // X on all four qubits with only one Z check inside
        let code = CssCode::new("t", 4, vec![bv("1111")], vec![bv("1100")], vec![true], vec![], vec![]).unwrap();
        let v = check_transversal_t(&code.to_stabilizer().unwrap(), &CheckOptions::default()).unwrap();
        assert_eq!(v.first_violation().unwrap().violation, Some(Violation::NoSelfDual));
    }

    #[test]
    fn cssify_y_presentation() {
        let gens = vec![
            PauliOp::new(bv("111111"), bv("111111"), 0).unwrap(),
            PauliOp::z_type(bv("110000"), true),
            PauliOp::z_type(bv("001100"), true),
            PauliOp::z_type(bv("000011"), true),
        ];
        let code = StabilizerCode::new("622y", 6, gens, vec![], vec![]).unwrap();
        let css = cssify(&code).unwrap();
        assert_eq!(css.c2(), code622(true).c2());
        assert_eq!(css.cz(), code622(true).cz());
        assert!(
            check_transversal_t(&css.to_stabilizer().unwrap(), &CheckOptions::default())
                .unwrap()
                .pass
        );
    }

    #[test]
    fn distances() {
        let c = code622(true);
        assert_eq!(c.distance(1 << 20).unwrap(), Some(2));
        assert_eq!(code_distance(&c.to_stabilizer().unwrap(), 1 << 20).unwrap(), Some(2));
        assert!(is_nondegenerate(&c.to_stabilizer().unwrap(), 2, 1 << 20).unwrap());
    }

    #[test]
    fn logical_pairing() {
        let c = code622(true);
        assert_eq!(c.logical_z().len(), 2);
        for (i, x) in c.logical_x().iter().enumerate() {
            for (j, z) in c.logical_z().iter().enumerate() {
                assert_eq!(x.dot(z), i == j);
            }
        }
    }
}
