use csst_core::conjugation::{
    conj_t_pattern, conj_t_powers, conj_transversal_t, conj_z_rotation, dense_oracle, qfd_conjugate, GateSpec,
};
use csst_core::gf2core::BitVector;
use csst_core::pauli::PauliOp;
use csst_core::scalar::CycScalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn paulis(n: usize) -> Vec<PauliOp> {
    let mut out = Vec::new();
    for a in 0..1u64 << n {
        for b in 0..1u64 << n {
            for ph in [0, 4] {
                out.push(PauliOp::new(BitVector::from_u64(n, a), BitVector::from_u64(n, b), ph).unwrap());
            }
        }
    }
    out
}

fn random_pauli(rng: &mut ChaCha8Rng, n: usize) -> PauliOp {
    let a = rng.gen_range(0..1u64 << n);
    let b = rng.gen_range(0..1u64 << n);
    PauliOp::new(
        BitVector::from_u64(n, a),
        BitVector::from_u64(n, b),
        if rng.gen() { 4 } else { 0 },
    )
    .unwrap()
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, level: u32) -> Vec<Vec<u64>> {
    let mut r = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(0..1u64 << level);
            r[i][j] = x;
            r[j][i] = x;
        }
    }
    r
}

fn split_pattern(t: &[u8]) -> (BitVector, BitVector) {
    let n = t.len();
    (
        BitVector::from_indices(n, (0..n).filter(|&i| t[i] == 1)),
        BitVector::from_indices(n, (0..n).filter(|&i| t[i] == 7)),
    )
}

#[test]
fn t_pattern_forms_match_oracle_exhaustively() {
    for n in 1..=3 {
        for p in paulis(n) {
            assert_eq!(
                conj_transversal_t(&p),
                dense_oracle(&p, &GateSpec::transversal_t(n)).unwrap()
            );
            // every {0,1,7} pattern
            for code in 0..3usize.pow(n as u32) {
                let t: Vec<u8> = (0..n).map(|i| [0, 1, 7][code / 3usize.pow(i as u32) % 3]).collect();
                let (t1, t7) = split_pattern(&t);
                let gate = GateSpec::TPattern(t.clone());
                let want = dense_oracle(&p, &gate).unwrap();
                assert_eq!(conj_t_pattern(&p, &t1, &t7).unwrap(), want, "{p} {t:?}");
            }
            for l in 2..=4 {
                assert_eq!(
                    conj_z_rotation(&p, l).unwrap(),
                    dense_oracle(&p, &GateSpec::ZRotation(l)).unwrap(),
                    "{p} l={l}"
                );
            }
        }
    }
}

#[test]
fn powers_match_oracle_exhaustively() {
    for n in 1..=3 {
        let ps = paulis(n);
        for code in 0..8usize.pow(n as u32) {
            let t: Vec<u8> = (0..n).map(|i| (code >> (3 * i) & 7) as u8).collect();
            let gate = GateSpec::TPattern(t.clone());
            for p in &ps {
                assert_eq!(
                    conj_t_powers(p, &t).unwrap(),
                    dense_oracle(p, &gate).unwrap(),
                    "{p} {t:?}"
                );
            }
        }
    }
}

#[test]
fn qfd_matches_oracle_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        for level in 2..=4 {
            for _ in 0..6 {
                let r = random_symmetric(&mut rng, n, level);
                let gate = GateSpec::Qfd { r: r.clone(), level };
                for p in paulis(n) {
                    assert_eq!(
                        qfd_conjugate(&p, &r, level, 1 << 20).unwrap(),
                        dense_oracle(&p, &gate).unwrap(),
                        "{p} R={r:?} l={level}"
                    );
                }
            }
        }
    }
}

#[test]
fn random_cases_at_n4() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 4;
    for _ in 0..500 {
        let p = random_pauli(&mut rng, n);
        let t: Vec<u8> = (0..n).map(|_| rng.gen_range(0..8)).collect();
        let t017: Vec<u8> = (0..n).map(|_| [0, 1, 7][rng.gen_range(0..3)]).collect();
        let (t1, t7) = split_pattern(&t017);
        let l = rng.gen_range(2..=4);
        let qlevel = rng.gen_range(2..=4);
        let r = random_symmetric(&mut rng, n, qlevel);
        assert_eq!(
            conj_transversal_t(&p),
            dense_oracle(&p, &GateSpec::transversal_t(n)).unwrap()
        );
        assert_eq!(
            conj_t_pattern(&p, &t1, &t7).unwrap(),
            dense_oracle(&p, &GateSpec::TPattern(t017.clone())).unwrap()
        );
        assert_eq!(
            conj_t_powers(&p, &t).unwrap(),
            dense_oracle(&p, &GateSpec::TPattern(t)).unwrap()
        );
        assert_eq!(
            conj_z_rotation(&p, l).unwrap(),
            dense_oracle(&p, &GateSpec::ZRotation(l)).unwrap()
        );
        assert_eq!(
            qfd_conjugate(&p, &r, qlevel, 1 << 20).unwrap(),
            dense_oracle(&p, &GateSpec::Qfd { r, level: qlevel }).unwrap()
        );
    }
}

#[test]
fn diagonal_qfd_reduces_to_patterns() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let p = random_pauli(&mut rng, n);
        let t: Vec<u8> = (0..n).map(|_| [0, 1, 7][rng.gen_range(0..3)]).collect();
        let (t1, t7) = split_pattern(&t);
        let GateSpec::Qfd { r, level } = GateSpec::diagonal_qfd(&t, 3) else {
            unreachable!()
        };
        assert_eq!(
            qfd_conjugate(&p, &r, level, 1 << 20).unwrap(),
            conj_t_pattern(&p, &t1, &t7).unwrap()
        );
    }
}

#[test]
fn norm_and_hermiticity_preserved() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let p = random_pauli(&mut rng, n);
        let t: Vec<u8> = (0..n).map(|_| rng.gen_range(0..8)).collect();
        let l = rng.gen_range(2..=6);
        for s in [
            conj_transversal_t(&p),
            conj_t_powers(&p, &t).unwrap(),
            conj_z_rotation(&p, l).unwrap(),
        ] {
            assert_eq!(s.norm_sq_sum(), CycScalar::one(3));
            assert!(s.is_self_adjoint());
            assert!(s.terms().all(|(a, _, _)| a == p.a()));
        }
    }
}
