use csst_core::conjugation::{conj_t_powers, conjugate, projector_check, DiagonalPauliSum, GateSpec};
use csst_core::csst::{
    build_csst, check_transversal_pattern, check_transversal_t, code_distance, cssify, pauli_sign_correction,
    star_condition, CheckOptions, CssCode, StabilizerCode, Violation,
};
use csst_core::gf2core::{BitVector, Subspace};
use csst_core::logical::{check_logical_identity, check_logical_transversal_t, coset_phase_profile};
use csst_core::pauli::PauliOp;
use csst_core::rmcodes::{catalog, qrm_code, rm_space};
use csst_core::scalar::CycScalar;
use csst_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIG: u64 = 1 << 24;

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> BitVector {
    BitVector::from_u64(n, rng.gen_range(0..1u64 << n))
}

fn random_in(rng: &mut ChaCha8Rng, s: &Subspace) -> BitVector {
    let mut v = BitVector::zeros(s.ambient());
    for b in s.basis() {
        if rng.gen() {
            v.xor_assign(b);
        }
    }
    v
}

/// Random CSS code: X checks from a small random space, Z checks a random
/// subspace of its dual (sometimes all of it), random signs.
fn random_css(rng: &mut ChaCha8Rng, n: usize) -> CssCode {
    loop {
        let nx = rng.gen_range(1..=2);
        let xs: Vec<BitVector> = (0..nx).map(|_| random_vec(rng, n)).collect();
        let c2 = Subspace::span(n, xs).unwrap();
        if c2.dim() == 0 {
            continue;
        }
        let perp = c2.dual();
        if perp.dim() == 0 {
            continue;
        }
        let zs: Vec<BitVector> = if rng.gen_bool(0.4) {
            perp.basis().to_vec()
        } else {
            (0..rng.gen_range(1..=perp.dim()))
                .map(|_| random_in(rng, &perp))
                .collect()
        };
        let cz = Subspace::span(n, zs).unwrap();
        let signs: Vec<bool> = (0..cz.dim()).map(|_| rng.gen_bool(0.3)).collect();
        if let Ok(c) = CssCode::new(
            "rand",
            n,
            c2.basis().to_vec(),
            cz.basis().to_vec(),
            signs,
            vec![],
            vec![],
        ) {
            return c;
        }
    }
}

/// Conjugates every generator by `S` on `mask`, giving a non-CSS presentation.
fn apply_s(code: &StabilizerCode, mask: &BitVector) -> StabilizerCode {
    let t: Vec<u8> = (0..code.n()).map(|i| if mask.get(i) { 2 } else { 0 }).collect();
    let gens = code
        .generators()
        .iter()
        .map(|g| {
            let s = conj_t_powers(g, &t).unwrap();
            let (a, b, c) = s.terms().next().unwrap();
            let ph = if c.as_integer() == Some(1) { 0 } else { 4 };
            PauliOp::new(a.clone(), b.clone(), ph).unwrap()
        })
        .collect();
    StabilizerCode::new("s", code.n(), gens, vec![], vec![]).unwrap()
}

fn pattern(rng: &mut ChaCha8Rng, n: usize) -> (BitVector, BitVector) {
    let t: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    (
        BitVector::from_indices(n, (0..n).filter(|&i| t[i] == 1)),
        BitVector::from_indices(n, (0..n).filter(|&i| t[i] == 2)),
    )
}

fn gate_of(t1: &BitVector, t7: &BitVector) -> GateSpec {
    GateSpec::t_pattern(t1, t7).unwrap()
}

#[test]
fn checker_agrees_with_projector_on_random_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut passes, mut fails) = (0, 0);
    for i in 0..300 {
        let n = rng.gen_range(2..=8);
        let mut code = random_css(&mut rng, n).to_stabilizer().unwrap();
        if i % 3 == 0 {
            code = apply_s(&code, &random_vec(&mut rng, n));
        }
        let (t1, t7) = if i % 2 == 0 {
            (BitVector::ones(n), BitVector::zeros(n))
        } else {
            pattern(&mut rng, n)
        };
        let v = check_transversal_pattern(&code, &t1, &t7, &CheckOptions::default()).unwrap();
        let p = projector_check(&code, &gate_of(&t1, &t7), BIG).unwrap();
        assert_eq!(v.pass, p.pass, "code {:?} t1 {t1} t7 {t7}", code.generators());
        if v.pass {
            passes += 1;
        } else {
            fails += 1;
        }
    }
    assert!(passes > 20 && fails > 20, "passes {passes} fails {fails}");
}

/// CSS-T instances built so that the checker should pass.
#[test]
fn built_csst_codes_pass_both() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut built = 0;
    let mut tries = 0;
    while built < 100 && tries < 20000 {
        tries += 1;
        let n = rng.gen_range(4..=8);
        let c1 = Subspace::span(n, (0..rng.gen_range(1..n)).map(|_| random_vec(&mut rng, n)).collect()).unwrap();
        let c2 = Subspace::span(n, vec![random_in(&mut rng, &c1)]).unwrap();
        if c2.dim() == 0 {
            continue;
        }
        let (t1, t7) = (BitVector::ones(n), BitVector::zeros(n));
        let Ok(code) = build_csst("b", &c1, &c2, &t1, &t7, BIG) else {
            continue;
        };
        built += 1;
        assert!(star_condition(&c1, &c2));
        let p = projector_check(&code.to_stabilizer().unwrap(), &GateSpec::transversal_t(n), BIG).unwrap();
        assert!(p.pass);
    }
    assert_eq!(built, 100);
}

#[test]
fn catalog_checker_matches_projector() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for name in ["622", "832", "1513", "1632_bacon_shor", "1632_monomial"] {
        let code = catalog(name).unwrap().to_stabilizer().unwrap();
        let n = code.n();
        let mut patterns = vec![(BitVector::ones(n), BitVector::zeros(n))];
        patterns.extend((0..3).map(|_| pattern(&mut rng, n)));
        for (t1, t7) in patterns {
            let v = check_transversal_pattern(&code, &t1, &t7, &CheckOptions::default()).unwrap();
            let p = projector_check(&code, &gate_of(&t1, &t7), BIG).unwrap();
            assert_eq!(v.pass, p.pass, "{name} {t1} {t7}");
        }
    }
}

#[test]
fn catalog_passes_transversal_t() {
    let opts = CheckOptions {
        certificates: true,
        ..CheckOptions::default()
    };
    for name in [
        "622",
        "832",
        "1513",
        "1632_bacon_shor",
        "1632_monomial",
        "64154",
        "128214",
    ] {
        let code = catalog(name).unwrap().to_stabilizer().unwrap();
        let v = check_transversal_t(&code, &opts).unwrap();
        assert!(v.pass && v.complete, "{name}: {:?}", v.first_violation());
        for w in &v.witnesses {
            let cert = w.certificate.as_ref().expect("certificate");
            assert_eq!(2 * cert.len(), w.a.weight());
        }
    }
}

#[test]
fn certificates_of_1513_are_extended_hamming() {
    let code = catalog("1513").unwrap().to_stabilizer().unwrap();
    let opts = CheckOptions {
        certificates: true,
        ..CheckOptions::default()
    };
    let v = check_transversal_t(&code, &opts).unwrap();
    assert_eq!(v.witnesses.len(), 15);
    for w in &v.witnesses {
        let cert = Subspace::span(15, w.certificate.clone().unwrap()).unwrap();
        let a = &w.a;
        assert_eq!(cert.dim(), 4);
        let local = cert.puncture(a).unwrap();
        assert!(local.is_self_dual());
        // [8,4,4]: every nonzero word has weight 4 or 8
        for x in local.elements(1 << 10).unwrap() {
            assert!(x.is_zero() || x.weight() % 4 == 0);
        }
    }
}

#[test]
fn flipped_622_fails_then_is_repaired() {
    let flipped = catalog("622")
        .unwrap()
        .with_z_signs(|_| false)
        .unwrap()
        .to_stabilizer()
        .unwrap();
    let v = check_transversal_t(&flipped, &CheckOptions::default()).unwrap();
    assert_eq!(v.first_violation().unwrap().violation, Some(Violation::WrongSign));
    let x = pauli_sign_correction(&flipped, &BitVector::ones(6), &BitVector::zeros(6), BIG)
        .unwrap()
        .unwrap();
    let fixed = flipped.conjugated_by_x(&x).unwrap();
    assert!(check_transversal_t(&fixed, &CheckOptions::default()).unwrap().pass);
}

#[test]
fn sign_correction_repairs_random_flips() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for name in ["622", "832", "1513", "1632_bacon_shor", "1632_monomial"] {
        let base = catalog(name).unwrap();
        for _ in 0..5 {
            let flips: Vec<BitVector> = (0..2).map(|_| random_vec(&mut rng, base.n().min(63))).collect();
            let n = base.n();
            let f0 = BitVector::from_indices(n, flips[0].iter_ones().filter(|&i| i < n));
            let code = base.to_stabilizer().unwrap().conjugated_by_x(&f0).unwrap();
            let x = pauli_sign_correction(&code, &BitVector::ones(n), &BitVector::zeros(n), BIG)
                .unwrap()
                .expect("solvable");
            let fixed = code.conjugated_by_x(&x).unwrap();
            assert!(
                check_transversal_t(&fixed, &CheckOptions::default()).unwrap().pass,
                "{name}"
            );
        }
    }
}

#[test]
fn adding_z_generators_keeps_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for name in ["622", "832", "1632_monomial"] {
        let code = catalog(name).unwrap();
        let s = code.to_stabilizer().unwrap();
        let perp = code.c2().dual();
        for _ in 0..10 {
            let z = random_in(&mut rng, &perp);
            if s.z_space().contains(&z) {
                continue;
            }
            let mut gens = s.generators().to_vec();
            let neg = (z.weight() / 2 + s.z_sign_shift().dot(&z) as usize) % 2 == 1;
            gens.push(PauliOp::z_type(z, neg));
            let Ok(bigger) = StabilizerCode::new("z", code.n(), gens, vec![], vec![]) else {
                continue;
            };
            assert!(
                check_transversal_t(&bigger, &CheckOptions::default()).unwrap().pass,
                "{name}"
            );
        }
    }
}

#[test]
fn qrm_family_thresholds() {
    for m in 2..=7 {
        for r in 1..m {
            let code = qrm_code(r, m).unwrap();
            let s = code.to_stabilizer().unwrap();
            let opts = CheckOptions {
                partial: true,
                cap: 1 << 14,
                ..CheckOptions::default()
            };
            let v = check_transversal_t(&s, &opts).unwrap();
            let expect = 3 * r <= m;
            assert_eq!(v.pass, expect, "QRM({r},{m})");
            if expect {
                assert!(v.complete);
                let ident = check_logical_identity(&code).unwrap().pass;
                assert_eq!(ident, 3 * r < m, "identity QRM({r},{m})");
            }
        }
    }
}

#[test]
fn profile_matches_projector() {
    let mut codes: Vec<CssCode> = ["622", "832", "1513", "1632_bacon_shor", "1632_monomial"]
        .iter()
        .map(|n| catalog(n).unwrap())
        .collect();
    codes.push(qrm_code(2, 4).unwrap());
    for code in &codes {
        let s = code.to_stabilizer().unwrap();
        for level in [2, 3, 4] {
            let prof = match coset_phase_profile(code, level, BIG) {
                Ok(_) => true,
                Err(Error::NonConstantCoset { .. }) => false,
                Err(e) => panic!("{e}"),
            };
            let proj = projector_check(&s, &GateSpec::ZRotation(level), BIG).unwrap().pass;
            assert_eq!(prof, proj, "{} level {level}", code.name());
        }
    }
}

#[test]
fn cssify_presentations() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let names = ["622", "832", "1632_monomial"];
    for i in 0..30 {
        let base = catalog(names[i % names.len()]).unwrap();
        let s = base.to_stabilizer().unwrap();
        let n = s.n();
        // multiply X generators by random Z stabilizers
        let zs = s.z_space().clone();
        let mut gens: Vec<PauliOp> = Vec::new();
        for g in s.generators() {
            if g.a().is_zero() {
                gens.push(g.clone());
            } else {
                let z = random_in(&mut rng, &zs);
                let zop = PauliOp::z_type(z.clone(), s.z_negative(&z).unwrap());
                gens.push(g.multiply(&zop).unwrap());
            }
        }
        let mixed = StabilizerCode::new("mixed", n, gens, vec![], vec![]).unwrap();
        let out = cssify(&mixed).unwrap();
        assert!(
            check_transversal_t(&out.to_stabilizer().unwrap(), &CheckOptions::default())
                .unwrap()
                .pass
        );
        assert!(out.k() >= mixed.k());
        let d_in = code_distance(&mixed, BIG).unwrap();
        let d_out = out.distance(BIG).unwrap();
        assert!(d_out >= d_in, "{d_out:?} < {d_in:?}");
    }
}

#[test]
fn identity_and_logical_t_are_exclusive() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut codes: Vec<CssCode> = ["622", "832", "1513", "1632_bacon_shor", "1632_monomial", "64154"]
        .iter()
        .map(|n| catalog(n).unwrap())
        .collect();
    for _ in 0..200 {
        let n = rng.gen_range(4..=8);
        let c1 = Subspace::span(n, (0..rng.gen_range(1..n)).map(|_| random_vec(&mut rng, n)).collect()).unwrap();
        let c2 = Subspace::span(n, vec![random_in(&mut rng, &c1)]).unwrap();
        if let Ok(c) = build_csst("r", &c1, &c2, &BitVector::ones(n), &BitVector::zeros(n), BIG) {
            if c.k() >= 1 {
                codes.push(c);
            }
        }
    }
    for c in &codes {
        let ident = check_logical_identity(c).unwrap().pass;
        let lt = check_logical_transversal_t(c, BIG).unwrap().pass;
        assert!(!(ident && lt), "{}", c.name());
    }
}

#[test]
fn code_1632_presentations_agree() {
    let a = catalog("1632_monomial").unwrap();
    let b = catalog("1632_bacon_shor").unwrap();
    assert_eq!((a.n(), a.k()), (b.n(), b.k()));
    assert_eq!(a.distance(BIG).unwrap(), b.distance(BIG).unwrap());
}

#[test]
fn structural_512848() {
    let code = catalog("512848").unwrap();
    assert_eq!((code.n(), code.k()), (512, 84));
    assert_eq!(code.c2(), rm_space(2, 9));
    let s = code.to_stabilizer().unwrap();
    let opts = CheckOptions {
        partial: true,
        cap: 1 << 8,
        ..CheckOptions::default()
    };
    let v = check_transversal_t(&s, &opts).unwrap();
    assert!(v.pass);
    assert!(!v.complete);
    assert_eq!(v.checked, 1 << 8);
}

/// `2^r U Π_S U†` as a sum of Paulis, one closed-form conjugation per element.
fn conjugated_projector(code: &StabilizerCode, gate: &GateSpec) -> DiagonalPauliSum {
    let mut acc = DiagonalPauliSum::new(code.n());
    for a in code.x_space().elements(BIG).unwrap() {
        let rep = code.fiber_rep(&a).unwrap();
        for z in code.z_space().elements(BIG).unwrap() {
            let e = rep
                .multiply(&PauliOp::z_type(z.clone(), code.z_negative(&z).unwrap()))
                .unwrap();
            acc.add_sum(&conjugate(&e, gate, BIG).unwrap(), &CycScalar::one(3));
        }
    }
    acc
}

fn square(p: &DiagonalPauliSum) -> DiagonalPauliSum {
    let mut out = DiagonalPauliSum::new(p.n());
    for (a1, b1, c1) in p.terms() {
        for (a2, b2, c2) in p.terms() {
            let e = PauliOp::new(a1.clone(), b1.clone(), 0)
                .unwrap()
                .multiply(&PauliOp::new(a2.clone(), b2.clone(), 0).unwrap())
                .unwrap();
            let c = c1.mul_ref(c2).mul_zeta(3, e.phase() as i64);
            out.add_term(e.a().clone(), e.b().clone(), &c);
        }
    }
    out
}

#[test]
fn conjugated_projector_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut codes: Vec<StabilizerCode> = ["622", "832"]
        .iter()
        .map(|n| catalog(n).unwrap().to_stabilizer().unwrap())
        .collect();
    codes.push(
        catalog("622")
            .unwrap()
            .with_z_signs(|_| false)
            .unwrap()
            .to_stabilizer()
            .unwrap(),
    );
    for _ in 0..12 {
        let n = rng.gen_range(2..=5);
        codes.push(random_css(&mut rng, n).to_stabilizer().unwrap());
    }
    let (mut passed, mut failed) = (0, 0);
    for code in &codes {
        let n = code.n();
        let (t1, t7) = pattern(&mut rng, n);
        for gate in [GateSpec::transversal_t(n), gate_of(&t1, &t7), GateSpec::ZRotation(4)] {
            let p = conjugated_projector(code, &gate);
            let r = code.rank() as u32;
            // (2^r Π')² = 2^r (2^r Π')
            let lhs = square(&p);
            let mut rhs = DiagonalPauliSum::new(n);
            rhs.add_sum(&p, &CycScalar::from_int(3, 1 << r));
            assert_eq!(lhs, rhs, "{:?} {gate:?}", code.generators());
            let verdict = projector_check(code, &gate, BIG).unwrap().pass;
            if verdict {
                let mut plain = DiagonalPauliSum::new(n);
                for a in code.x_space().elements(BIG).unwrap() {
                    let rep = code.fiber_rep(&a).unwrap();
                    for z in code.z_space().elements(BIG).unwrap() {
                        let e = rep
                            .multiply(&PauliOp::z_type(z.clone(), code.z_negative(&z).unwrap()))
                            .unwrap();
                        let sign = CycScalar::from_int(3, e.sign().unwrap() as i128);
                        plain.add_term(e.a().clone(), e.b().clone(), &sign);
                    }
                }
                assert_eq!(p, plain);
                passed += 1;
            } else {
                failed += 1;
            }
        }
    }
    assert!(passed > 3 && failed > 3, "passed {passed} failed {failed}");
}
