//! Which logical operator a transversal diagonal gate induces on a CSS code.

use std::collections::BTreeSet;
use std::fmt;

use crate::conjugation::{projector_check, GateSpec};
use crate::csst::{for_each_limited, CssCode, StabilizerCode, Verdict, Violation, Witness};
use crate::error::{check_cap, pow2, Error, Result};
use crate::gf2core::{for_each_in_span, BitMatrix, BitVector, Subspace};
use crate::rmcodes::{ev, monomials_of_degree, Monomial};
use crate::scalar::{sec_const, tan_const, CycScalar};

/// First pair or triple of rows (0-based) with odd overlap.
pub fn triorthogonality_violation(g: &BitMatrix) -> Option<Vec<usize>> {
    let rows = g.rows();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let ij = rows[i].and(&rows[j]);
            if ij.weight() % 2 == 1 {
                return Some(vec![i, j]);
            }
            for (l, r) in rows.iter().enumerate().skip(j + 1) {
                if ij.overlap(r) % 2 == 1 {
                    return Some(vec![i, j, l]);
                }
            }
        }
    }
    None
}

/// Every pair and every triple of rows has even overlap.
pub fn check_triorthogonal(g: &BitMatrix) -> bool {
    triorthogonality_violation(g).is_none()
}

/// `G1` = logical X rows stacked over the X generators.
pub fn g1_matrix(code: &CssCode) -> BitMatrix {
    let rows = code.logical_x().iter().chain(code.x_gens()).cloned().collect();
    BitMatrix::from_rows(code.n(), rows).expect("validated lengths")
}

/// Is `i^{w(z)} E(0, z)` in the group? Returns the violation otherwise.
fn signed_z_member(s: &StabilizerCode, z: &BitVector) -> Option<Violation> {
    let w = z.weight();
    match s.z_negative(z) {
        None => Some(Violation::MissingStabilizer),
        Some(_) if w % 2 == 1 => Some(Violation::WrongPhase),
        Some(neg) if neg != (w % 4 == 2) => Some(Violation::WrongPhase),
        Some(_) => None,
    }
}

/// Transversal `T` realizes the logical identity.
///
/// Needs `G1` triorthogonal and `i^{w(g*h)} E(0, g*h) ∈ S` for every pair of
/// rows `g, h` of `G1`, including `g = h`. The four element-wise conditions
/// follow because the cross terms of `(Σ c_p g_p) * (Σ d_q g_q)` pair up with
/// even overlap: triple overlaps by triorthogonality, four-fold overlaps
/// because they appear an even number of times.
pub fn check_logical_identity(code: &CssCode) -> Result<Verdict> {
    let s = code.to_stabilizer()?;
    let g = g1_matrix(code);
    let rows = g.rows();
    let mut witnesses = Vec::new();
    if let Some(idx) = triorthogonality_violation(&g) {
        let mut prod = BitVector::ones(code.n());
        for &i in &idx {
            prod = prod.and(&rows[i]);
        }
        witnesses.push(Witness::fail(
            rows[idx[0]].clone(),
            Violation::NotTriorthogonal,
            Some(prod),
            format!(
                "rows {:?} of G1 have odd overlap",
                idx.iter().map(|i| i + 1).collect::<Vec<_>>()
            ),
        ));
        return Ok(Verdict::from_witnesses(witnesses, 0, true));
    }
    let mut checked = 0;
    for p in 0..rows.len() {
        for q in p..rows.len() {
            checked += 1;
            let z = rows[p].and(&rows[q]);
            if let Some(v) = signed_z_member(&s, &z) {
                witnesses.push(Witness::fail(
                    rows[p].clone(),
                    v,
                    Some(z),
                    format!("i^w E(0, g{} * g{}) is not a stabilizer", p + 1, q + 1),
                ));
                return Ok(Verdict::from_witnesses(witnesses, checked, true));
            }
        }
    }
    Ok(Verdict::from_witnesses(witnesses, checked, true))
}

/// The four membership conditions checked element by element.
pub fn check_logical_identity_full(code: &CssCode, cap: u64) -> Result<Verdict> {
    let s = code.to_stabilizer()?;
    let lx = Subspace::span(code.n(), code.logical_x().to_vec())?;
    let c2 = code.c2();
    let (kx, k2) = (lx.dim(), c2.dim());
    let work = pow2(kx) + pow2(kx).saturating_mul(pow2(k2)) + pow2(2 * kx) + pow2(2 * k2);
    check_cap("logical identity enumeration", work, cap)?;
    let xs = lx.elements(cap)?;
    let als = c2.elements(cap)?;
    let mut failure = None;
    let mut checked = 0;
    let mut test = |z: BitVector, what: &str, a: &BitVector| {
        checked += 1;
        if failure.is_none() {
            if let Some(v) = signed_z_member(&s, &z) {
                failure = Some(Witness::fail(a.clone(), v, Some(z), what.to_string()));
            }
        }
    };
    for x in &xs {
        test(x.clone(), "logical x", x);
        for a in &als {
            test(x.and(a), "logical x * stabilizer a", x);
        }
        for y in &xs {
            test(x.and(y), "logical x * logical y", x);
        }
    }
    for a in &als {
        for b in &als {
            test(a.and(b), "stabilizer a * stabilizer b", a);
        }
    }
    Ok(Verdict::from_witnesses(failure.into_iter().collect(), checked, true))
}

/// Transversal `T` realizes logical transversal `T` with no correction:
/// `G1` triorthogonal and `w(x ⊕ a) ≡ w(c) mod 8` for `x = Σ c_i x_i`, `a ∈ C2`.
pub fn check_logical_transversal_t(code: &CssCode, cap: u64) -> Result<Verdict> {
    let g = g1_matrix(code);
    if let Some(idx) = triorthogonality_violation(&g) {
        let w = Witness::fail(
            g.rows()[idx[0]].clone(),
            Violation::NotTriorthogonal,
            None,
            format!(
                "rows {:?} of G1 have odd overlap",
                idx.iter().map(|i| i + 1).collect::<Vec<_>>()
            ),
        );
        return Ok(Verdict::from_witnesses(vec![w], 0, true));
    }
    let k = code.k();
    let c2 = code.c2();
    // single rows are instances of the condition and cost nothing
    let rows = code
        .logical_x()
        .iter()
        .map(|x| (x, 1))
        .chain(code.x_gens().iter().map(|a| (a, 0)));
    for (checked, (v, wc)) in rows.enumerate() {
        if v.weight() % 8 != wc {
            let w = Witness::fail(
                v.clone(),
                Violation::WeightMismatch,
                Some(v.clone()),
                format!("weight {} vs w(c) = {wc} mod 8", v.weight()),
            );
            return Ok(Verdict::from_witnesses(vec![w], checked + 1, true));
        }
    }
    check_cap("logical T enumeration", pow2(k).saturating_mul(pow2(c2.dim())), cap)?;
    let mut checked = 0;
    let mut x = BitVector::zeros(code.n());
    for i in 0..(1u64 << k) {
        if i > 0 {
            x.xor_assign(&code.logical_x()[i.trailing_zeros() as usize]);
        }
        let wc = (i ^ (i >> 1)).count_ones() as usize;
        let mut bad = None;
        for_each_in_span(c2.basis(), code.n(), |a| {
            checked += 1;
            if bad.is_none() {
                let v = x.xor(a);
                if v.weight() % 8 != wc % 8 {
                    bad = Some(v);
                }
            }
        });
        if let Some(v) = bad {
            let w = Witness::fail(
                x.clone(),
                Violation::WeightMismatch,
                Some(v.clone()),
                format!("weight {} vs w(c) = {wc} mod 8", v.weight()),
            );
            return Ok(Verdict::from_witnesses(vec![w], checked, true));
        }
    }
    Ok(Verdict::from_witnesses(vec![], checked, true))
}

/// Rows `y_i`: logical X rows then X generators.
fn bh_rows(code: &CssCode) -> Vec<BitVector> {
    code.logical_x().iter().chain(code.x_gens()).cloned().collect()
}

/// `Q(d) = Σ Γ_i d_i - 2 Σ_{i<j} Γ_ij d_i d_j mod 4` with `w(x_i) = 2Γ_i + 1`,
/// `w(a_j) = 2Γ_j` and `y_i·y_j = 2Γ_ij`.
pub fn bravyi_haah_q(code: &CssCode, d: &BitVector) -> Result<u8> {
    let rows = bh_rows(code);
    if d.len() != rows.len() {
        return Err(Error::LengthMismatch {
            expected: rows.len(),
            found: d.len(),
        });
    }
    let k = code.k();
    let mut gamma = Vec::with_capacity(rows.len());
    for (i, y) in rows.iter().enumerate() {
        let w = y.weight();
        let logical = i < k;
        if logical != (w % 2 == 1) {
            return Err(Error::Precondition(format!(
                "row {} has weight {w}; logical rows must be odd and stabilizer rows even",
                i + 1
            )));
        }
        gamma.push((w / 2) as i64);
    }
    let mut q: i64 = 0;
    let on: Vec<usize> = d.iter_ones().collect();
    for (a, &i) in on.iter().enumerate() {
        q += gamma[i];
        for &j in &on[a + 1..] {
            let o = rows[i].overlap(&rows[j]);
            if o % 2 == 1 {
                return Err(Error::Precondition(format!(
                    "rows {} and {} have odd overlap",
                    i + 1,
                    j + 1
                )));
            }
            q -= 2 * (o as i64 / 2);
        }
    }
    Ok(q.rem_euclid(4) as u8)
}

/// `w(x ⊕ a) ≡ w(c) mod 8` for the combination selected by `d`.
pub fn weight_congruence(code: &CssCode, d: &BitVector) -> Result<bool> {
    let rows = bh_rows(code);
    if d.len() != rows.len() {
        return Err(Error::LengthMismatch {
            expected: rows.len(),
            found: d.len(),
        });
    }
    let mut y = BitVector::zeros(code.n());
    for i in d.iter_ones() {
        y.xor_assign(&rows[i]);
    }
    let wc = d.iter_ones().filter(|&i| i < code.k()).count();
    Ok(y.weight() % 8 == wc % 8)
}

/// Residue `w(s ⊕ x_v ⊕ c) mod 2^ℓ` of each logical basis state, where `s`
/// absorbs the Z signs. Index bit `i` of `v` is logical qubit `i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseProfile {
    pub level: u32,
    pub k: usize,
    pub residues: Vec<u64>,
}

impl PhaseProfile {
    /// `(residue, count)` pairs in increasing residue order.
    pub fn histogram(&self) -> Vec<(u64, usize)> {
        let mut h = std::collections::BTreeMap::new();
        for &r in &self.residues {
            *h.entry(r).or_insert(0usize) += 1;
        }
        h.into_iter().collect()
    }

    /// Same residues shifted so that `v = 0` has residue 0.
    pub fn relative(&self) -> PhaseProfile {
        let m = 1u64 << self.level;
        let r0 = self.residues.first().copied().unwrap_or(0);
        PhaseProfile {
            level: self.level,
            k: self.k,
            residues: self.residues.iter().map(|r| (r + m - r0) % m).collect(),
        }
    }
}

/// Diagonal logical action of transversal `diag(1, ζ_{2^ℓ})` on the code.
pub fn coset_phase_profile(code: &CssCode, level: u32, cap: u64) -> Result<PhaseProfile> {
    if level == 0 || level > 62 {
        return Err(Error::Precondition(format!("level {level} out of range")));
    }
    let k = code.k();
    let c2 = code.c2();
    check_cap("coset phase profile", pow2(k).saturating_mul(pow2(c2.dim())), cap)?;
    let s = code.to_stabilizer()?.z_sign_shift();
    let modulus = 1u64 << level;
    let mut residues = vec![0u64; 1 << k];
    let mut base = s.clone();
    for i in 0..(1u64 << k) {
        if i > 0 {
            base.xor_assign(&code.logical_x()[i.trailing_zeros() as usize]);
        }
        let v = i ^ (i >> 1);
        let mut cur = base.clone();
        let r1 = cur.weight() as u64 % modulus;
        let total = 1u64 << c2.dim();
        for j in 1..total {
            cur.xor_assign(&c2.basis()[j.trailing_zeros() as usize]);
            let r = cur.weight() as u64 % modulus;
            if r != r1 {
                return Err(Error::NonConstantCoset {
                    v: BitVector::from_u64(k, v).to_string(),
                    w1: base.to_string(),
                    w2: cur.to_string(),
                    r1,
                    r2: r,
                });
            }
        }
        residues[v as usize] = r1;
    }
    Ok(PhaseProfile { level, k, residues })
}

/// Residues of the coset representatives `s ⊕ x_v` alone. Only meaningful
/// once the transversal rotation is known to be logical, since constancy
/// over `C2` is not checked; costs `2^k` instead of `2^{k + dim C2}`.
pub fn representative_phase_profile(code: &CssCode, level: u32, cap: u64) -> Result<PhaseProfile> {
    if level == 0 || level > 62 {
        return Err(Error::Precondition(format!("level {level} out of range")));
    }
    let k = code.k();
    check_cap("representative phase profile", pow2(k), cap)?;
    let modulus = 1u64 << level;
    let mut residues = vec![0u64; 1 << k];
    let mut base = code.to_stabilizer()?.z_sign_shift();
    for i in 0..(1u64 << k) {
        if i > 0 {
            base.xor_assign(&code.logical_x()[i.trailing_zeros() as usize]);
        }
        residues[(i ^ (i >> 1)) as usize] = base.weight() as u64 % modulus;
    }
    Ok(PhaseProfile { level, k, residues })
}

/// Polynomial over GF(2) in variables `v1..vk`; each term is a sorted list of
/// 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePolynomial {
    pub k: usize,
    pub terms: BTreeSet<Vec<usize>>,
}

impl PhasePolynomial {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn eval(&self, v: u64) -> bool {
        self.terms
            .iter()
            .filter(|t| t.iter().all(|&i| v >> (i - 1) & 1 == 1))
            .count()
            % 2
            == 1
    }
}

impl fmt::Display for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                if t.is_empty() {
                    "1".to_string()
                } else {
                    t.iter().map(|i| format!("v{i}")).collect::<Vec<_>>().join("*")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Möbius transform of `v ↦ residue / 2^{ℓ-1}` for a ±1 diagonal profile.
pub fn diag_to_anf(profile: &PhaseProfile) -> Result<PhasePolynomial> {
    let half = 1u64 << (profile.level - 1);
    let mut f: Vec<u8> = Vec::with_capacity(profile.residues.len());
    for (v, &r) in profile.residues.iter().enumerate() {
        match r {
            0 => f.push(0),
            r if r == half => f.push(1),
            _ => {
                return Err(Error::Precondition(format!(
                    "residue {r} at v = {v} is neither 0 nor {half}"
                )))
            }
        }
    }
    let k = profile.k;
    for i in 0..k {
        for v in 0..f.len() {
            if v >> i & 1 == 1 {
                f[v] ^= f[v ^ (1 << i)];
            }
        }
    }
    let terms = f
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 1)
        .map(|(v, _)| (0..k).filter(|i| v >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();
    Ok(PhasePolynomial { k, terms })
}

/// Unordered partitions of `{1..m}` into blocks of size `r`.
fn partitions(m: usize, r: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, r: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        let first = left.trailing_zeros();
        let rest: Vec<u32> = (0..32).filter(|&i| i != first && left >> i & 1 == 1).collect();
        let mut pick = Vec::new();
        choose(&rest, r - 1, 0, &mut pick, &mut |chosen| {
            let block = chosen.iter().fold(1u32 << first, |b, &i| b | 1 << i);
            cur.push(block);
            rec(left & !block, r, cur, out);
            cur.pop();
        });
    }
    fn choose(items: &[u32], t: usize, start: usize, pick: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if pick.len() == t {
            f(pick);
            return;
        }
        for i in start..items.len() {
            pick.push(items[i]);
            choose(items, t, i + 1, pick, f);
            pick.pop();
        }
    }
    let mut out = Vec::new();
    rec(((1u64 << m) - 1) as u32, r, &mut Vec::new(), &mut out);
    out
}

fn check_divides(m: usize, r: usize) -> Result<()> {
    if r == 0 || r > m || m % r != 0 || m > 32 {
        return Err(Error::Precondition(format!(
            "need 1 <= r, r | m and m <= 32, got m = {m}, r = {r}"
        )));
    }
    Ok(())
}

/// `q(v)`: one term per partition of the `m` variables into blocks of size
/// `r`, each block naming the logical qubit of its degree-`r` monomial.
pub fn qrm_logical_polynomial(m: usize, r: usize) -> Result<PhasePolynomial> {
    check_divides(m, r)?;
    let order = monomials_of_degree(m, r);
    let index = |block: u32| order.iter().position(|x| x.mask() == block).expect("degree r") + 1;
    let terms = partitions(m, r)
        .into_iter()
        .map(|p| {
            let mut t: Vec<usize> = p.into_iter().map(index).collect();
            t.sort_unstable();
            t
        })
        .collect();
    Ok(PhasePolynomial { k: order.len(), terms })
}

/// `m! / ((r!)^{m/r} (m/r)!)`.
pub fn partition_count(m: usize, r: usize) -> u128 {
    let fact = |x: usize| (1..=x as u128).product::<u128>();
    fact(m) / (fact(r).pow((m / r) as u32) * fact(m / r))
}

/// `w(ev(f)) mod 2^{m/r}` for `deg f <= r`, computed directly and as
/// `2^{m/r-1} q(f)`; the two must agree.
pub fn ax_weight_residue(f: &[Monomial], m: usize, r: usize) -> Result<u64> {
    check_divides(m, r)?;
    if r < 2 {
        return Err(Error::Precondition("need r >= 2".into()));
    }
    if let Some(x) = f.iter().find(|x| x.degree() > r || x.mask() >> m != 0) {
        return Err(Error::Precondition(format!(
            "monomial {x} exceeds degree {r} or {m} variables"
        )));
    }
    let modulus = 1u64 << (m / r);
    let direct = ev(f, m).weight() as u64 % modulus;
    let mut top = BTreeSet::new();
    for x in f.iter().filter(|x| x.degree() == r) {
        if !top.insert(x.mask()) {
            top.remove(&x.mask());
        }
    }
    let q = partitions(m, r)
        .iter()
        .filter(|p| p.iter().all(|b| top.contains(b)))
        .count()
        % 2;
    let via_q = (modulus / 2) * q as u64;
    if direct != via_q {
        return Err(Error::Inconsistent(format!(
            "weight residue {direct} differs from 2^(m/r-1) q(f) = {via_q}"
        )));
    }
    Ok(direct)
}

/// `2^ℓ | (m - 2 w(v))` for every codeword of a self-dual code of length `m`.
pub fn check_selfdual_divisibility(c: &Subspace, level: u32, cap: u64) -> Result<bool> {
    if !c.is_self_dual() {
        return Err(Error::Precondition("code is not self-dual".into()));
    }
    let m = c.ambient() as i64;
    let modulus = 1i64 << level;
    let mut ok = true;
    c.for_each(cap, |v| {
        if (m - 2 * v.weight() as i64).rem_euclid(modulus) != 0 {
            ok = false;
        }
    })?;
    Ok(ok)
}

/// Signed weight distribution `Σ ε_v [w(y ⊕ v) = j]` over `v ∈ Z_j`.
fn signed_weights(basis: &[BitVector], signs: &[bool], y: &BitVector, out: &mut [i64]) {
    out.iter_mut().for_each(|x| *x = 0);
    let mut cur = y.clone();
    let mut neg = false;
    out[cur.weight()] += 1;
    for i in 1u64..(1u64 << basis.len()) {
        let t = i.trailing_zeros() as usize;
        cur.xor_assign(&basis[t]);
        neg ^= signs[t];
        out[cur.weight()] += if neg { -1 } else { 1 };
    }
}

fn poly_value(counts: &[i64], pows: &[CycScalar]) -> CycScalar {
    counts
        .iter()
        .zip(pows)
        .filter(|(c, _)| **c != 0)
        .fold(CycScalar::zero(3), |acc, (&c, p)| &acc + &p.mul_int(c as i128))
}

/// Transversal `diag(1, e^{2πi/2^ℓ})` preserves the code space: for every
/// X-part `a`, `Σ_{v∈Z_j} ε_v (i tan θ)^{w(v)} = sec^{w(a)} θ` and, for every
/// `y ⪯ a` outside `Z_j`, `Σ_{v∈Z_j} ε_v (i tan θ)^{w(v⊕y)} = 0`.
///
/// `ℓ = 2` is the Clifford case and is decided by expanding the projector.
pub fn check_z_rotation_conditions(code: &StabilizerCode, level: u32, cap: u64) -> Result<Verdict> {
    match level {
        0 | 1 => return Err(Error::DegenerateLevel(level)),
        2 => {
            let pv = projector_check(code, &GateSpec::ZRotation(2), cap)?;
            let witnesses = match pv.offending {
                Some((a, b, resid)) => vec![Witness::fail(
                    a,
                    Violation::NonzeroSum,
                    Some(b),
                    format!("projector term differs by {resid}"),
                )],
                None => vec![],
            };
            return Ok(Verdict::from_witnesses(witnesses, pv.fibers, true));
        }
        _ => {}
    }
    let xs = code.x_space();
    check_cap("X-component space", pow2(xs.dim()), cap)?;
    let mut work: u128 = 0;
    xs.for_each(cap, |a| work = work.saturating_add(pow2(a.weight())))?;
    check_cap("rotation condition sums", work, cap)?;
    let itan = &tan_const(level)? * &CycScalar::i(level);
    let sec = sec_const(level)?;
    let n = code.n();
    let pows: Vec<CycScalar> = {
        let mut v = vec![CycScalar::one(level)];
        for j in 1..=n {
            let next = &v[j - 1] * &itan;
            v.push(next);
        }
        v
    };
    let mut witnesses = Vec::new();
    let mut checked = 0;
    let mut counts = vec![0i64; n + 1];
    for_each_limited(xs, cap, |a| {
        checked += 1;
        if a.is_zero() {
            return Ok(true);
        }
        let zj = code.z_space().restrict_to_support(a);
        let basis = zj.basis().to_vec();
        let signs: Vec<bool> = basis.iter().map(|z| code.z_negative(z).expect("in Z_S")).collect();
        signed_weights(&basis, &signs, &BitVector::zeros(n), &mut counts);
        let lhs = poly_value(&counts, &pows);
        let rhs = sec.pow(a.weight() as u32);
        if lhs != rhs {
            witnesses.push(Witness::fail(
                a.clone(),
                Violation::NonzeroSum,
                None,
                format!("signed sum over Z_j is {lhs}, expected sec^{} = {rhs}", a.weight()),
            ));
            return Ok(false);
        }
        // coset representatives of {y ⪯ a} modulo Z_j
        let local = Subspace::span(n, a.iter_ones().map(|i| BitVector::unit(n, i)).collect())?;
        let reps = crate::csst::complement_basis(&zj, &local);
        let mut bad = None;
        for_each_in_span(&reps, n, |y| {
            if bad.is_some() || y.is_zero() {
                return;
            }
            signed_weights(&basis, &signs, y, &mut counts);
            let v = poly_value(&counts, &pows);
            if !v.is_zero() {
                bad = Some((y.clone(), v));
            }
        });
        if let Some((y, v)) = bad {
            witnesses.push(Witness::fail(
                a.clone(),
                Violation::NonzeroSum,
                Some(y),
                format!("cancellation sum is {v}"),
            ));
            return Ok(false);
        }
        witnesses.push(Witness::ok(a.clone()));
        Ok(true)
    })?;
    Ok(Verdict::from_witnesses(witnesses, checked, true))
}
