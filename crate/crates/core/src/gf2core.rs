//! Bit-packed linear algebra over GF(2).
//!
//! Coordinates are 0-based in the API; coordinate `i` is qubit `i + 1` and the
//! `i`-th character of the textual form.

use std::fmt;

use crate::error::{check_cap, pow2, Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

fn nwords(n: usize) -> usize {
    n.div_ceil(64)
}

impl BitVector {
    #[must_use]
    pub fn zeros(n: usize) -> Self {
        BitVector {
            len: n,
            words: vec![0; nwords(n)],
        }
    }

    #[must_use]
    pub fn ones(n: usize) -> Self {
        let mut v = Self::zeros(n);
        for i in 0..n {
            v.set(i, true);
        }
        v
    }

    #[must_use]
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(n);
        for i in idx {
            v.set(i, true);
        }
        v
    }

    /// Low `n` bits of `x`, bit 0 first.
    pub fn from_u64(n: usize, x: u64) -> Self {
        let mut v = Self::zeros(n);
        if n > 0 {
            v.words[0] = if n >= 64 { x } else { x & ((1u64 << n) - 1) };
        }
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("bad character {c:?} at position {i} in bit string"),
                    })
                }
            }
        }
        Ok(Self::from_bools(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// First word of the packed representation (all bits when `len <= 64`).
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        if b {
            self.words[i >> 6] |= 1 << (i & 63);
        } else {
            self.words[i >> 6] &= !(1 << (i & 63));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i >> 6] ^= 1 << (i & 63);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of common ones, i.e. `weight(self * other)`.
    pub fn overlap(&self, other: &Self) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &Self) -> bool {
        self.overlap(other) & 1 == 1
    }

    #[must_use]
    pub fn xor(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    #[must_use]
    pub fn and(&self, other: &Self) -> Self {
        let mut v = self.clone();
        for (a, b) in v.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        v
    }

    #[must_use]
    pub fn or(&self, other: &Self) -> Self {
        let mut v = self.clone();
        for (a, b) in v.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        v
    }

    /// `self ⪯ other`: support of self inside support of other.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    /// Keeps only the coordinates in the support of `support`, in order.
    #[must_use]
    pub fn restrict(&self, support: &BitVector) -> BitVector {
        let w = support.weight();
        let mut out = BitVector::zeros(w);
        for (j, i) in support.iter_ones().enumerate() {
            if self.get(i) {
                out.set(j, true);
            }
        }
        out
    }

    /// Inverse of `restrict`: places the bits of `self` on the support.
    #[must_use]
    pub fn embed(&self, support: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(support.len());
        for (j, i) in support.iter_ones().enumerate() {
            if self.get(j) {
                out.set(i, true);
            }
        }
        out
    }

    #[must_use]
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Coordinates `[start, start + len)`.
    #[must_use]
    pub fn slice(&self, start: usize, len: usize) -> Self {
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Coordinatewise product `u * v`.
pub fn star(u: &BitVector, v: &BitVector) -> Result<BitVector> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(u.and(v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    ncols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn new(ncols: usize) -> Self {
        BitMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVector>) -> Result<Self> {
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::LengthMismatch {
                    expected: ncols,
                    found: r.len(),
                });
            }
        }
        Ok(BitMatrix { ncols, rows })
    }

    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let parsed = rows.iter().map(|s| BitVector::parse(s)).collect::<Result<Vec<_>>>()?;
        let n = parsed.first().map_or(0, BitVector::len);
        Self::from_rows(n, parsed)
    }

    pub fn push(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.ncols {
            return Err(Error::LengthMismatch {
                expected: self.ncols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    /// Reduced row-echelon form with zero rows dropped, the rank and the pivot columns.
    pub fn rref(&self) -> (BitMatrix, usize, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pr = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pr);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        (
            BitMatrix {
                ncols: self.ncols,
                rows,
            },
            r,
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    #[must_use]
    pub fn transpose(&self) -> BitMatrix {
        let mut rows = vec![BitVector::zeros(self.rows.len()); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                rows[j].set(i, true);
            }
        }
        BitMatrix {
            ncols: self.rows.len(),
            rows,
        }
    }
}

/// Calls `f` on every element of the span of `basis` (Gray-code order, zero first).
pub fn for_each_in_span(basis: &[BitVector], n: usize, mut f: impl FnMut(&BitVector)) {
    let mut cur = BitVector::zeros(n);
    f(&cur);
    let total: u64 = 1u64 << basis.len();
    for i in 1..total {
        cur.xor_assign(&basis[i.trailing_zeros() as usize]);
        f(&cur);
    }
}

/// A linear subspace of GF(2)^n stored by its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self::span(n, (0..n).map(|i| BitVector::unit(n, i)).collect()).expect("unit rows")
    }

    pub fn span(n: usize, rows: Vec<BitVector>) -> Result<Self> {
        let m = BitMatrix::from_rows(n, rows)?;
        Ok(Self::from_matrix(&m))
    }

    pub fn from_matrix(m: &BitMatrix) -> Self {
        let (r, _, pivots) = m.rref();
        Subspace {
            ambient: m.ncols(),
            basis: r.into_rows(),
            pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_matrix(&self) -> BitMatrix {
        BitMatrix {
            ncols: self.ambient,
            rows: self.basis.clone(),
        }
    }

    /// Residue of `v` after eliminating every pivot; zero iff `v` is in the space.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        v.len() == self.ambient && self.reduce(v).is_zero()
    }

    /// Indices of the basis rows summing to `v`, if `v` lies in the space.
    pub fn coordinates(&self, v: &BitVector) -> Option<Vec<usize>> {
        let mut r = v.clone();
        let mut used = Vec::new();
        for (i, (row, &p)) in self.basis.iter().zip(&self.pivots).enumerate() {
            if r.get(p) {
                r.xor_assign(row);
                used.push(i);
            }
        }
        r.is_zero().then_some(used)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// `{v : v·s = 0 for all s in self}`.
    #[must_use]
    pub fn dual(&self) -> Subspace {
        let n = self.ambient;
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut rows = Vec::with_capacity(n - self.dim());
        for f in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::unit(n, f);
            for (row, &p) in self.basis.iter().zip(&self.pivots) {
                if row.get(f) {
                    v.set(p, true);
                }
            }
            rows.push(v);
        }
        Subspace::span(n, rows).expect("consistent lengths")
    }

    #[must_use]
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, rows).expect("consistent lengths")
    }

    #[must_use]
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.dual().sum(&other.dual()).dual()
    }

    /// Vectors of the space whose support lies inside `support`.
    #[must_use]
    pub fn restrict_to_support(&self, support: &BitVector) -> Subspace {
        let mut rows = self.basis.clone();
        let mut alive = vec![true; rows.len()];
        for c in (0..self.ambient).filter(|&c| !support.get(c)) {
            let Some(p) = (0..rows.len()).find(|&i| alive[i] && rows[i].get(c)) else {
                continue;
            };
            alive[p] = false;
            let pr = rows[p].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if alive[i] && row.get(c) {
                    row.xor_assign(&pr);
                }
            }
        }
        let kept = rows
            .into_iter()
            .zip(alive)
            .filter_map(|(r, a)| a.then_some(r))
            .collect();
        Subspace::span(self.ambient, kept).expect("consistent lengths")
    }

    /// Drops every coordinate outside `a`; all basis vectors must lie inside `a`.
    pub fn puncture(&self, a: &BitVector) -> Result<Subspace> {
        if a.len() != self.ambient {
            return Err(Error::LengthMismatch {
                expected: self.ambient,
                found: a.len(),
            });
        }
        if let Some(v) = self.basis.iter().find(|v| !v.is_subset_of(a)) {
            return Err(Error::Precondition(format!(
                "basis vector {v} is not contained in the support of {a}"
            )));
        }
        let rows = self.basis.iter().map(|v| v.restrict(a)).collect();
        Subspace::span(a.weight(), rows)
    }

    /// Inverse of `puncture`: embeds into the ambient space of `a`.
    #[must_use]
    pub fn lift(&self, a: &BitVector) -> Subspace {
        let rows = self.basis.iter().map(|v| v.embed(a)).collect();
        Subspace::span(a.len(), rows).expect("consistent lengths")
    }

    /// `y·z = 0` for all `y, z` in the space, including `y = z`.
    pub fn is_self_orthogonal(&self) -> bool {
        for (i, u) in self.basis.iter().enumerate() {
            for v in &self.basis[i..] {
                if u.dot(v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dim() == self.ambient && self.is_self_orthogonal()
    }

    /// All elements, provided `2^dim <= cap`.
    pub fn elements(&self, cap: u64) -> Result<Vec<BitVector>> {
        check_cap("subspace enumeration", pow2(self.dim()), cap)?;
        let mut out = Vec::with_capacity(1 << self.dim());
        for_each_in_span(&self.basis, self.ambient, |v| out.push(v.clone()));
        Ok(out)
    }

    pub fn for_each(&self, cap: u64, f: impl FnMut(&BitVector)) -> Result<()> {
        check_cap("subspace enumeration", pow2(self.dim()), cap)?;
        for_each_in_span(&self.basis, self.ambient, f);
        Ok(())
    }
}

/// Self-dual subcode of `z` of dimension `weight(a)/2` supported on `a`.
///
/// Starts from the dual of the punctured space and adjoins one even-weight
/// vector of the orthogonal complement at a time. Returns `None` exactly when
/// the punctured space does not contain its own dual.
pub fn self_dual_certificate(z: &Subspace, a: &BitVector) -> Result<Option<Subspace>> {
    let w = a.weight();
    if w % 2 == 1 {
        return Err(Error::Precondition(format!("weight of {a} is odd")));
    }
    let zt = z.puncture(a)?;
    let mut cert = zt.dual();
    if !zt.contains_subspace(&cert) {
        return Ok(None);
    }
    while cert.dim() < w / 2 {
        let perp = cert.dual();
        let next = perp
            .basis()
            .iter()
            .chain(pair_sums(perp.basis()).iter())
            .find(|v| v.weight() % 2 == 0 && !cert.contains(v))
            .cloned();
        let v = next.ok_or_else(|| Error::Inconsistent("no even vector extends a self-orthogonal code".into()))?;
        let mut rows = cert.basis().to_vec();
        rows.push(v);
        cert = Subspace::span(w, rows)?;
    }
    Ok(Some(cert.lift(a)))
}

fn pair_sums(basis: &[BitVector]) -> Vec<BitVector> {
    let mut out = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            out.push(basis[i].xor(&basis[j]));
        }
    }
    out
}

/// Minimum Hamming weight over `s` minus `exclude`; `None` if that set is empty.
pub fn min_weight(s: &Subspace, exclude: &Subspace, cap: u64) -> Result<Option<usize>> {
    check_cap("minimum weight", pow2(s.dim()), cap)?;
    let mut best: Option<usize> = None;
    for_each_in_span(s.basis(), s.ambient(), |v| {
        if !v.is_zero() && !exclude.contains(v) {
            let w = v.weight();
            if best.is_none_or(|b| w < b) {
                best = Some(w);
            }
        }
    });
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    fn brute_span(rows: &[BitVector], n: usize) -> Vec<BitVector> {
        let mut out = Vec::new();
        for mask in 0u64..(1 << rows.len()) {
            let mut v = BitVector::zeros(n);
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(r);
                }
            }
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    fn rm14() -> Vec<BitVector> {
        // rows 1, x1..x4 over 16 points, x1 least significant
        let mut rows = vec![BitVector::ones(16)];
        for i in 0..4 {
            rows.push(BitVector::from_indices(16, (0..16).filter(|p| p >> i & 1 == 1)));
        }
        rows
    }

    #[test]
    fn rref_identity() {
        let m = BitMatrix::parse_rows(&["100", "010", "001"]).unwrap();
        let (r, rank, piv) = m.rref();
        assert_eq!(rank, 3);
        assert_eq!(r, m);
        assert_eq!(piv, vec![0, 1, 2]);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = BitMatrix::parse_rows(&["110", "011", "101"]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rm14_rank_matches_span_count() {
        let rows = rm14();
        let m = BitMatrix::from_rows(16, rows.clone()).unwrap();
        assert_eq!(m.rank(), 5);
        assert_eq!(brute_span(&rows, 16).len(), 32);
    }

    #[test]
    fn dual_of_full_is_zero() {
        assert_eq!(Subspace::full(7).dual().dim(), 0);
        assert_eq!(Subspace::zero(7).dual(), Subspace::full(7));
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(&bv("110"), &bv("101")).unwrap(), bv("100"));
        assert!(star(&bv("11"), &bv("101")).is_err());
        let v = bv("10110");
        assert_eq!(star(&v, &v).unwrap(), v);
    }

    #[test]
    fn restrict_to_support_finds_inner_vectors() {
        let s = Subspace::span(4, vec![bv("1100"), bv("0110")]).unwrap();
        let inner = s.restrict_to_support(&bv("1010"));
        assert_eq!(inner.basis(), &[bv("1010")]);
        let none = s.restrict_to_support(&bv("1000"));
        assert_eq!(none.dim(), 0);
    }

    #[test]
    fn puncture_rejects_outside_support() {
        let s = Subspace::span(4, vec![bv("1100")]).unwrap();
        assert!(s.puncture(&bv("1010")).is_err());
        let p = s.puncture(&bv("1101")).unwrap();
        assert_eq!(p.basis(), &[bv("110")]);
    }

    #[test]
    fn certificate_for_extended_hamming() {
        // RM(1,3) is self-dual; its certificate is itself
        let rows: Vec<_> = std::iter::once(BitVector::ones(8))
            .chain((0..3).map(|i| BitVector::from_indices(8, (0..8).filter(|p| p >> i & 1 == 1))))
            .collect();
        let z = Subspace::span(8, rows).unwrap();
        let a = BitVector::ones(8);
        let cert = self_dual_certificate(&z, &a).unwrap().unwrap();
        assert_eq!(cert, z);
    }

    #[test]
    fn certificate_absent_for_zero_space() {
        let z = Subspace::zero(4);
        assert_eq!(self_dual_certificate(&z, &bv("0011")).unwrap(), None);
        assert!(self_dual_certificate(&z, &bv("0111")).is_err());
    }

    #[test]
    fn min_weight_skips_excluded() {
        let s = Subspace::span(4, vec![bv("1100"), bv("1111")]).unwrap();
        let ex = Subspace::span(4, vec![bv("1100")]).unwrap();
        assert_eq!(min_weight(&s, &Subspace::zero(4), 100).unwrap(), Some(2));
        assert_eq!(min_weight(&s, &ex, 100).unwrap(), Some(2));
        let ex2 = Subspace::span(4, vec![bv("1100"), bv("0011")]).unwrap();
        assert_eq!(min_weight(&s, &ex2, 100).unwrap(), None);
        assert!(min_weight(&s, &ex, 2).is_err());
    }

    fn arb_rows(n: usize, max_rows: usize) -> impl Strategy<Value = Vec<BitVector>> {
        prop::collection::vec(prop::collection::vec(any::<bool>(), n), 0..=max_rows)
            .prop_map(|rows| rows.iter().map(|r| BitVector::from_bools(r)).collect())
    }

    proptest! {
        #[test]
        fn dual_is_involution(n in 1usize..=16, seed_rows in arb_rows(16, 10)) {
            let rows: Vec<_> = seed_rows.iter().map(|r| r.slice(0, n)).collect();
            let s = Subspace::span(n, rows).unwrap();
            let d = s.dual();
            prop_assert_eq!(s.dim() + d.dim(), n);
            prop_assert_eq!(d.dual(), s.clone());
            for u in s.basis() {
                for v in d.basis() {
                    prop_assert!(!u.dot(v));
                }
            }
        }

        #[test]
        fn rref_preserves_span(rows in arb_rows(8, 6)) {
            let s = Subspace::span(8, rows.clone()).unwrap();
            let a = brute_span(&rows, 8);
            let b = brute_span(s.basis(), 8);
            prop_assert_eq!(a.len(), b.len());
            for v in &a {
                prop_assert!(s.contains(v));
            }
        }

        #[test]
        fn star_laws(a in prop::collection::vec(any::<bool>(), 20),
                     b in prop::collection::vec(any::<bool>(), 20),
                     c in prop::collection::vec(any::<bool>(), 20)) {
            let (a, b, c) = (BitVector::from_bools(&a), BitVector::from_bools(&b), BitVector::from_bools(&c));
            prop_assert_eq!(star(&a, &b).unwrap(), star(&b, &a).unwrap());
            prop_assert_eq!(star(&star(&a, &b).unwrap(), &c).unwrap(), star(&a, &star(&b, &c).unwrap()).unwrap());
            prop_assert_eq!(star(&a, &a).unwrap(), a);
        }

        #[test]
        fn restrict_matches_brute_force(rows in arb_rows(8, 5), sup in prop::collection::vec(any::<bool>(), 8)) {
            let s = Subspace::span(8, rows.clone()).unwrap();
            let a = BitVector::from_bools(&sup);
            let inner = s.restrict_to_support(&a);
            let expect: Vec<_> = brute_span(&rows, 8).into_iter().filter(|v| v.is_subset_of(&a)).collect();
            prop_assert_eq!(pow2(inner.dim()) as usize, expect.len());
            for v in &expect {
                prop_assert!(inner.contains(v));
            }
        }

        // certificate exists iff the punctured space contains its dual
        #[test]
        fn certificate_iff_contains_dual(half in 1usize..=5, rows in arb_rows(10, 9)) {
            let w = 2 * half;
            let a = BitVector::ones(w);
            let z = Subspace::span(w, rows.iter().map(|r| r.slice(0, w)).collect()).unwrap();
            let zt = z.puncture(&a).unwrap();
            let contains = zt.contains_subspace(&zt.dual());
            let cert = self_dual_certificate(&z, &a).unwrap();
            prop_assert_eq!(cert.is_some(), contains);
            if let Some(c) = cert {
                prop_assert_eq!(c.dim(), half);
                prop_assert!(z.contains_subspace(&c));
                let elems = c.elements(1 << 12).unwrap();
                for x in &elems {
                    for y in &elems {
                        prop_assert!(!x.dot(y));
                    }
                }
            }
        }

        // for y outside a space containing its dual, y splits the space evenly
        #[test]
        fn balanced_inner_products(half in 1usize..=4, rows in arb_rows(8, 8)) {
            let w = 2 * half;
            let base = Subspace::span(w, rows.iter().map(|r| r.slice(0, w)).collect()).unwrap();
            // Z + Z^perp always contains its own dual
            let z = base.sum(&base.dual());
            prop_assert!(z.contains_subspace(&z.dual()));
            let elems = z.elements(1 << 12).unwrap();
            for y in 0u64..(1 << w) {
                let y = BitVector::from_u64(w, y);
                if z.contains(&y) {
                    continue;
                }
                let ones = elems.iter().filter(|x| x.dot(&y)).count();
                prop_assert_eq!(2 * ones, elems.len());
            }
        }
    }

    #[test]
    fn certificate_on_embedded_supports() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut found = 0;
        for _ in 0..200 {
            let n = rng.gen_range(8..=16);
            let pos: Vec<usize> = {
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p.truncate(8);
                p
            };
            let a = BitVector::from_indices(n, pos.iter().copied());
            // random even self-orthogonal code on the support, plus noise
            let mut rows = Vec::new();
            for _ in 0..rng.gen_range(1..=5) {
                let r = BitVector::from_bools(&(0..8).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
                rows.push(r.embed(&a));
            }
            let z = Subspace::span(n, rows).unwrap();
            if let Some(c) = self_dual_certificate(&z, &a).unwrap() {
                found += 1;
                let el = c.elements(1 << 10).unwrap();
                for x in &el {
                    assert!(x.is_subset_of(&a));
                    for y in &el {
                        assert!(!x.dot(y));
                    }
                }
                assert_eq!(c.dim(), 4);
            }
        }
        assert!(found > 0);
    }
}
