//! Monomials over GF(2), Reed-Muller and decreasing monomial codes, quantum
//! Reed-Muller codes and the named example codes.

use std::fmt;

use crate::csst::{complement_basis, CssCode};
use crate::error::{Error, Result};
use crate::gf2core::{BitMatrix, BitVector, Subspace};

/// `x_{i1} ⋯ x_{it}`, stored as a bit mask with bit `i-1` for `x_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    mask: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { mask: 0 };

    /// From 1-based variable indices.
    pub fn new(vars: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &v in vars {
            if v == 0 || v > 32 {
                return Err(Error::Precondition(format!("variable index {v} out of range 1..=32")));
            }
            mask |= 1 << (v - 1);
        }
        Ok(Monomial { mask })
    }

    pub fn from_mask(mask: u32) -> Self {
        Monomial { mask }
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// 1-based variable indices in increasing order.
    pub fn vars(&self) -> Vec<usize> {
        (0..32).filter(|i| self.mask >> i & 1 == 1).map(|i| i + 1).collect()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.mask & !other.mask == 0
    }

    /// Evaluation vector of length `2^m`; position `p` has `x_i = bit i-1 of p`.
    pub fn ev(&self, m: usize) -> BitVector {
        let mask = self.mask as usize;
        BitVector::from_indices(1 << m, (0..1usize << m).filter(|p| p & mask == mask))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mask == 0 {
            return f.write_str("1");
        }
        for v in self.vars() {
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

/// `ev(f)` for a polynomial given as a set of monomials.
pub fn ev(f: &[Monomial], m: usize) -> BitVector {
    let mut out = BitVector::zeros(1 << m);
    for mono in f {
        out.xor_assign(&mono.ev(m));
    }
    out
}

/// Degree-`d` monomials in `m` variables, lexicographic in the sorted index tuple.
pub fn monomials_of_degree(m: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (1..=d).collect();
    if d > m {
        return out;
    }
    loop {
        out.push(Monomial::new(&combo).expect("indices in range"));
        // next combination
        let mut i = d;
        while i > 0 && combo[i - 1] == m - d + i {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        combo[i - 1] += 1;
        for j in i..d {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Monomials of degree at most `r`, by degree then lexicographically.
pub fn monomials_up_to(m: usize, r: usize) -> Vec<Monomial> {
    (0..=r.min(m)).flat_map(|d| monomials_of_degree(m, d)).collect()
}

pub fn rm_generator(r: usize, m: usize) -> BitMatrix {
    let rows = monomials_up_to(m, r).iter().map(|x| x.ev(m)).collect();
    BitMatrix::from_rows(1 << m, rows).expect("equal lengths")
}

pub fn rm_space(r: usize, m: usize) -> Subspace {
    Subspace::span(1 << m, monomials_up_to(m, r).iter().map(|x| x.ev(m)).collect()).expect("equal lengths")
}

/// Monomials of degree at most 3 plus the first 35 degree-4 monomials of
/// `m = 8`: a self-dual code strictly between RM(3,8) and RM(4,8).
pub fn rm_three_and_a_half() -> Vec<Monomial> {
    let mut out = monomials_up_to(8, 3);
    out.extend(monomials_of_degree(8, 4).into_iter().take(35));
    out
}

/// `x_u ⪯ x_v` when `x_u` is obtained from a divisor of `x_v` by moving
/// variables to lower indices.
fn decreasing_violation(set: &[Monomial]) -> Option<(Monomial, Monomial)> {
    let has = |x: &Monomial| set.contains(x);
    for v in set {
        let vars = v.vars();
        // drop one variable
        for &x in &vars {
            let u = Monomial::from_mask(v.mask & !(1 << (x - 1)));
            if !has(&u) {
                return Some((*v, u));
            }
        }
        // move one variable to the next lower free index
        for &x in &vars {
            if x > 1 && v.mask >> (x - 2) & 1 == 0 {
                let u = Monomial::from_mask((v.mask & !(1 << (x - 1))) | 1 << (x - 2));
                if !has(&u) {
                    return Some((*v, u));
                }
            }
        }
    }
    None
}

/// Span of the evaluations of a decreasing monomial set.
pub fn decreasing_monomial_code(monomials: &[Monomial], m: usize) -> Result<Subspace> {
    if let Some(mono) = monomials.iter().find(|x| x.mask >> m != 0) {
        return Err(Error::Precondition(format!("{mono} uses more than {m} variables")));
    }
    if let Some((v, u)) = decreasing_violation(monomials) {
        return Err(Error::Precondition(format!(
            "set is not decreasing: contains {v} but not {u}"
        )));
    }
    Subspace::span(1 << m, monomials.iter().map(|x| x.ev(m)).collect())
}

/// Monomial set of the dual of a decreasing code: those whose complement is absent.
pub fn monomial_dual(monomials: &[Monomial], m: usize) -> Vec<Monomial> {
    let full = (1u32 << m) - 1;
    let mut out: Vec<Monomial> = (0..=full)
        .map(Monomial::from_mask)
        .filter(|x| !monomials.contains(&Monomial::from_mask(full & !x.mask)))
        .collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.vars().cmp(&b.vars())));
    out
}

/// `CSS(X, RM(r-1,m); Z, RM(m-r-1,m))` with logical X rows the degree-`r`
/// monomials in lexicographic order.
pub fn qrm_code(r: usize, m: usize) -> Result<CssCode> {
    if r == 0 || r > m {
        return Err(Error::Precondition(format!("QRM({r},{m}) needs 1 <= r <= m")));
    }
    let n = 1 << m;
    let x_gens: Vec<BitVector> = monomials_up_to(m, r - 1).iter().map(|x| x.ev(m)).collect();
    let z_gens: Vec<BitVector> = if r < m {
        monomials_up_to(m, m - r - 1).iter().map(|x| x.ev(m)).collect()
    } else {
        Vec::new()
    };
    let logical_x = monomials_of_degree(m, r).iter().map(|x| x.ev(m)).collect();
    let z_neg = vec![false; z_gens.len()];
    CssCode::new(format!("qrm_{r}_{m}"), n, x_gens, z_gens, z_neg, logical_x, vec![])
}

pub const CATALOG: [&str; 8] = [
    "622",
    "832",
    "1513",
    "1632_bacon_shor",
    "1632_monomial",
    "64154",
    "128214",
    "512848",
];

fn from_one_based(n: usize, idx: &[usize]) -> BitVector {
    BitVector::from_indices(n, idx.iter().map(|i| i - 1))
}

/// A named example code.
pub fn catalog(name: &str) -> Result<CssCode> {
    let code = match name {
        "622" => {
            let g = |s: &str| BitVector::parse(s).expect("literal");
            CssCode::new(
                "622",
                6,
                vec![g("111111")],
                vec![g("110000"), g("001100"), g("000011")],
                vec![true; 3],
                vec![g("110000"), g("001100")],
                vec![],
            )?
        }
        "832" => qrm_code(1, 3)?.with_name("832"),
        "1513" => code_15_1_3()?,
        "1632_bacon_shor" => bacon_shor_16()?,
        "1632_monomial" => {
            let m = 4;
            let mono = |v: &[usize]| Monomial::new(v).expect("literal");
            let g2 = vec![Monomial::ONE, mono(&[1]), mono(&[2])];
            let mut g1 = g2.clone();
            g1.extend([mono(&[3]), mono(&[4]), mono(&[1, 2])]);
            decreasing_monomial_code(&g1, m)?;
            let z = monomial_dual(&g1, m);
            CssCode::new(
                "1632_monomial",
                16,
                g2.iter().map(|x| x.ev(m)).collect(),
                z.iter().map(|x| x.ev(m)).collect(),
                vec![false; z.len()],
                [mono(&[3]), mono(&[4]), mono(&[1, 2])]
                    .iter()
                    .map(|x| x.ev(m))
                    .collect(),
                [mono(&[1, 2, 4]), mono(&[1, 2, 3]), mono(&[3, 4])]
                    .iter()
                    .map(|x| x.ev(m))
                    .collect(),
            )?
        }
        "64154" => qrm_code(2, 6)?.with_name("64154"),
        "128214" => qrm_code(2, 7)?.with_name("128214"),
        "512848" => qrm_code(3, 9)?.with_name("512848"),
        _ => {
            return Err(Error::Precondition(format!(
                "unknown catalog code {name}; known: {}",
                CATALOG.join(", ")
            )))
        }
    };
    Ok(code)
}

/// Shortened RM codes on 15 qubits: X checks from `x1..x4`, Z checks from
/// `x_i` and `x_i x_j`, coordinate 0 removed.
fn code_15_1_3() -> Result<CssCode> {
    let m = 4;
    let keep = BitVector::from_indices(16, 1..16);
    let short = |x: &Monomial| x.ev(m).restrict(&keep);
    let x_gens: Vec<BitVector> = monomials_of_degree(m, 1).iter().map(short).collect();
    let mut z_gens = x_gens.clone();
    z_gens.extend(monomials_of_degree(m, 2).iter().map(short));
    let ones = BitVector::ones(15);
    CssCode::new(
        "1513",
        15,
        x_gens,
        z_gens.clone(),
        vec![false; z_gens.len()],
        vec![ones.clone()],
        vec![ones],
    )
}

/// Bacon-Shor layout on a 4x4 grid, qubit `4*col + row + 1`.
fn bacon_shor_16() -> Result<CssCode> {
    let n = 16;
    let x_gens = vec![
        from_one_based(n, &[1, 2, 3, 4, 5, 6, 7, 8]),
        from_one_based(n, &[5, 6, 7, 8, 9, 10, 11, 12]),
        from_one_based(n, &[9, 10, 11, 12, 13, 14, 15, 16]),
    ];
    let mut z_gens = Vec::new();
    for c in 0..3 {
        for r in 0..3 {
            let q = 4 * c + r + 1;
            z_gens.push(from_one_based(n, &[q, q + 1, q + 4, q + 5]));
        }
    }
    z_gens.push(from_one_based(n, &[5, 6, 7, 8]));
    let logical_x = vec![
        from_one_based(n, &[1, 2, 3, 4]),
        from_one_based(n, &[1, 2, 5, 6, 9, 10, 13, 14]),
        from_one_based(n, &[2, 3, 6, 7, 10, 11, 14, 15]),
    ];
    let k = z_gens.len();
    CssCode::new("1632_bacon_shor", n, x_gens, z_gens, vec![false; k], logical_x, vec![])
}

/// Logical X rows of a CSS code as the coset basis `C1/C2`.
pub fn coset_basis(code: &CssCode) -> Vec<BitVector> {
    if code.logical_x().is_empty() {
        complement_basis(&code.c2(), &code.c1())
    } else {
        code.logical_x().to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ev_conventions() {
        assert_eq!(Monomial::ONE.ev(3), BitVector::ones(8));
        assert_eq!(Monomial::new(&[1]).unwrap().ev(2).to_string(), "0101");
        let x1 = Monomial::new(&[1]).unwrap();
        let x3 = Monomial::new(&[3]).unwrap();
        let x13 = Monomial::new(&[1, 3]).unwrap();
        assert_eq!(x13.ev(4), x1.ev(4).and(&x3.ev(4)));
    }

    #[test]
    fn lex_order() {
        let d2: Vec<String> = monomials_of_degree(6, 2).iter().map(|x| x.to_string()).collect();
        assert_eq!(d2.len(), 15);
        assert_eq!(d2[0], "x1x2");
        assert_eq!(d2[1], "x1x3");
        assert_eq!(d2[5], "x2x3");
        assert_eq!(d2[14], "x5x6");
    }

    #[test]
    fn rm_dimensions_and_distance() {
        assert_eq!(rm_generator(0, 3).nrows(), 1);
        let g = rm_generator(1, 4);
        assert_eq!(g.rank(), 5);
        let s = rm_space(1, 4);
        assert_eq!(
            crate::gf2core::min_weight(&s, &Subspace::zero(16), 1 << 20).unwrap(),
            Some(8)
        );
        assert_eq!(rm_space(2, 4), rm_space(1, 4).dual());
    }

    #[test]
    fn rm_duality() {
        for m in 1..=8 {
            for r in 0..m {
                assert_eq!(rm_space(r, m).dual(), rm_space(m - r - 1, m), "r={r} m={m}");
            }
        }
    }

    #[test]
    fn decreasing_sets() {
        let mono = |v: &[usize]| Monomial::new(v).unwrap();
        let g1 = vec![
            Monomial::ONE,
            mono(&[1]),
            mono(&[2]),
            mono(&[3]),
            mono(&[4]),
            mono(&[1, 2]),
        ];
        let dual = monomial_dual(&g1, 4);
        let names: Vec<String> = dual.iter().map(|x| x.to_string()).collect();
        assert_eq!(
            names,
            ["1", "x1", "x2", "x3", "x4", "x1x2", "x1x3", "x1x4", "x2x3", "x2x4"]
        );
        assert_eq!(
            decreasing_monomial_code(&dual, 4).unwrap(),
            decreasing_monomial_code(&g1, 4).unwrap().dual()
        );
        assert!(decreasing_monomial_code(&[Monomial::ONE, mono(&[2])], 4).is_err());
        assert_eq!(
            decreasing_monomial_code(&monomials_up_to(5, 2), 5).unwrap(),
            rm_space(2, 5)
        );
    }

    #[test]
    fn three_and_a_half_is_self_dual() {
        let c = decreasing_monomial_code(&rm_three_and_a_half(), 8).unwrap();
        assert_eq!(c.dim(), 128);
        assert!(c.is_self_dual());
        assert!(c.contains_subspace(&rm_space(3, 8)));
        assert!(rm_space(4, 8).contains_subspace(&c));
    }

    #[test]
    fn catalog_parameters() {
        let want = [
            ("622", 6, 2),
            ("832", 8, 3),
            ("1513", 15, 1),
            ("1632_bacon_shor", 16, 3),
            ("1632_monomial", 16, 3),
            ("64154", 64, 15),
            ("128214", 128, 21),
            ("512848", 512, 84),
        ];
        for (name, n, k) in want {
            let c = catalog(name).unwrap();
            assert_eq!((c.n(), c.k()), (n, k), "{name}");
        }
        assert!(catalog("nope").is_err());
    }

    #[test]
    fn small_catalog_distances() {
        for (name, d) in [
            ("622", 2),
            ("832", 2),
            ("1513", 3),
            ("1632_bacon_shor", 2),
            ("1632_monomial", 2),
        ] {
            assert_eq!(catalog(name).unwrap().distance(1 << 22).unwrap(), Some(d), "{name}");
        }
    }
}
