use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use csst_cli::codefile::{load, serialize, CodeFile};
use csst_core::conjugation::{
    conj_t_pattern, conj_t_powers, conj_transversal_t, conj_z_rotation, dense_oracle, projector_check, qfd_conjugate,
    GateSpec,
};
use csst_core::csst::{
    check_transversal_pattern, code_distance, cssify, pauli_sign_correction, CheckOptions, CssCode, Verdict, Witness,
};
use csst_core::gf2core::BitVector;
use csst_core::logical::{
    check_logical_identity, check_logical_identity_full, check_logical_transversal_t, check_z_rotation_conditions,
    coset_phase_profile, diag_to_anf, g1_matrix, partition_count, qrm_logical_polynomial, triorthogonality_violation,
};
use csst_core::pauli::PauliOp;
use csst_core::rmcodes::{monomials_of_degree, qrm_code};
use csst_core::{Error, DEFAULT_CAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "csst",
    version,
    about = "Transversal diagonal gates on stabilizer and CSS codes"
)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Work budget for every exponential loop.
    #[arg(long = "max-enum", global = true, default_value_t = DEFAULT_CAP)]
    max_enum: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CodeArg {
    /// Code file, or a catalog name (622, 832, 1513, 1632_bacon_shor, ...).
    file: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether transversal T (or a T/T† pattern) preserves the code space.
    CheckTransversalT {
        #[command(flatten)]
        code: CodeArg,
        /// `T1,T7`: bit strings marking T and T† qubits.
        #[arg(long)]
        pattern: Option<String>,
        /// Only test signs on the dual of the local Z space.
        #[arg(long)]
        strict_signs: bool,
        /// Check at most --max-enum X-parts instead of failing.
        #[arg(long)]
        partial: bool,
        /// On failure, search for a Pauli X correction of the signs.
        #[arg(long)]
        repair: bool,
    },
    /// Decide whether transversal diag(1, exp(2πi/2^L)) preserves the code space.
    CheckZRotation {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        level: u32,
    },
    /// Diagonal logical action of transversal diag(1, exp(2πi/2^L)).
    LogicalAction {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        level: u32,
        /// Also print the phase polynomial of a ±1 action.
        #[arg(long)]
        anf: bool,
    },
    /// Rewrite a stabilizer code as a CSS code with the same T behaviour.
    Cssify {
        #[command(flatten)]
        code: CodeArg,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        /// Compare brute-force distances under this work budget.
        #[arg(long)]
        verify_distance: Option<u64>,
    },
    /// Quantum Reed-Muller code QRM(r, m) and its logical phase polynomial.
    Qrm {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        emit_code: Option<PathBuf>,
        #[arg(long)]
        polynomial: bool,
    },
    /// Triorthogonality of G1 = [logical X; X generators].
    Triortho(CodeArg),
    /// Whether transversal T acts as the logical identity.
    LogicalIdentity {
        #[command(flatten)]
        code: CodeArg,
        /// Check every element instead of the generator reduction.
        #[arg(long)]
        full: bool,
    },
    /// Whether transversal T acts as logical transversal T.
    LogicalT(CodeArg),
    /// Compare the closed-form conjugations against the dense oracle.
    VerifyOracles {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

struct Report {
    pass: bool,
    lines: Vec<String>,
    json: Value,
}

fn verdict_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn witness_json(w: &Witness) -> Value {
    json!({
        "a": w.a.to_string(),
        "violation": w.violation.map(|v| v.to_string()),
        "vector": w.vector.as_ref().map(BitVector::to_string),
        "certificate": w.certificate.as_ref().map(|c| c.iter().map(BitVector::to_string).collect::<Vec<_>>()),
        "detail": w.detail,
    })
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "pass": v.pass,
        "complete": v.complete,
        "checked": v.checked,
        "witnesses": v.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
    })
}

fn witness_line(w: &Witness) -> String {
    let mut s = format!("a={}", w.a);
    match w.violation {
        Some(v) => {
            s += &format!(" {v}");
            if let Some(x) = &w.vector {
                s += &format!(" vector={x}");
            }
        }
        None => s += " ok",
    }
    if let Some(c) = &w.certificate {
        s += &format!(
            " certificate=[{}]",
            c.iter().map(BitVector::to_string).collect::<Vec<_>>().join(" ")
        );
    }
    if let Some(d) = &w.detail {
        s += &format!(" ({d})");
    }
    s
}

fn verdict_lines(title: &str, v: &Verdict) -> Vec<String> {
    let mut lines = vec![format!(
        "{} {title}: checked {}{}",
        verdict_word(v.pass),
        v.checked,
        if v.complete { "" } else { " (partial)" }
    )];
    lines.extend(v.witnesses.iter().map(witness_line));
    lines
}

fn need_css<'a>(code: &'a CodeFile, what: &str) -> anyhow::Result<&'a CssCode> {
    code.as_css().ok_or_else(|| {
        anyhow!(
            "{what} needs a CSS code; convert {} with `csst cssify` first",
            code.name()
        )
    })
}

fn parse_pattern(s: &str, n: usize) -> anyhow::Result<(BitVector, BitVector)> {
    let (a, b) = s.split_once(',').ok_or_else(|| anyhow!("--pattern takes T1,T7"))?;
    let t1 = BitVector::parse(a.trim())?;
    let t7 = BitVector::parse(b.trim())?;
    if t1.len() != n || t7.len() != n {
        bail!("pattern vectors must have {n} bits");
    }
    Ok((t1, t7))
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let cap = cli.max_enum;
    match &cli.cmd {
        Cmd::CheckTransversalT {
            code,
            pattern,
            strict_signs,
            partial,
            repair,
        } => {
            let file = load(&code.file)?;
            let s = file.to_stabilizer()?;
            let n = s.n();
            let (t1, t7) = match pattern {
                Some(p) => parse_pattern(p, n)?,
                None => (BitVector::ones(n), BitVector::zeros(n)),
            };
            let opts = CheckOptions {
                strict_signs: *strict_signs,
                partial: *partial,
                certificates: true,
                cap,
            };
            let v = check_transversal_pattern(&s, &t1, &t7, &opts)?;
            let mut lines = verdict_lines(&format!("transversal T on {}", file.name()), &v);
            let mut j = json!({"command": "check-transversal-t", "code": file.name(), "verdict": verdict_json(&v)});
            if *repair && !v.pass {
                match pauli_sign_correction(&s, &t1, &t7, cap)? {
                    Some(x) => {
                        let fixed = s.conjugated_by_x(&x)?;
                        let v2 = check_transversal_pattern(&fixed, &t1, &t7, &opts)?;
                        lines.push(format!("repair: conjugate by X({x})"));
                        lines.extend(verdict_lines("after repair", &v2));
                        j["repair"] = json!({"x": x.to_string(), "verdict": verdict_json(&v2)});
                    }
                    None => {
                        lines.push("repair: no Pauli correction found".into());
                        j["repair"] = Value::Null;
                    }
                }
            }
            Ok(Report {
                pass: v.pass,
                lines,
                json: j,
            })
        }
        Cmd::CheckZRotation { code, level } => {
            let file = load(&code.file)?;
            let s = file.to_stabilizer()?;
            let v = check_z_rotation_conditions(&s, *level, cap)?;
            let mut lines = verdict_lines(&format!("transversal Z rotation level {level} on {}", file.name()), &v);
            let mut j = json!({"command": "check-z-rotation", "code": file.name(), "level": level, "verdict": verdict_json(&v)});
            if !v.pass {
                match projector_check(&s, &GateSpec::ZRotation(*level), cap) {
                    Ok(p) => {
                        if let Some((a, b, r)) = &p.offending {
                            lines.push(format!("residual at E({a}, {b}): {r}"));
                            j["residual"] = json!({"a": a.to_string(), "b": b.to_string(), "value": r.to_string()});
                        }
                    }
                    Err(Error::CapExceeded { .. }) => {
                        lines.push("residual: projector expansion exceeds the cap".into())
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(Report {
                pass: v.pass,
                lines,
                json: j,
            })
        }
        Cmd::LogicalAction { code, level, anf } => {
            let file = load(&code.file)?;
            let css = need_css(&file, "logical-action")?;
            let prof = coset_phase_profile(css, *level, cap)?.relative();
            let hist = prof.histogram();
            let half = 1u64 << (level - 1);
            let minus = prof.residues.iter().filter(|&&r| r == half).count();
            let mut lines = vec![format!(
                "{} logical states of {} at level {level}",
                prof.residues.len(),
                css.name()
            )];
            for (r, c) in &hist {
                lines.push(format!("residue {r}: {c}"));
            }
            lines.push(format!("minus-one entries: {minus}"));
            if prof.k <= 4 {
                for (v, r) in prof.residues.iter().enumerate() {
                    lines.push(format!("{} -> {r}", BitVector::from_u64(prof.k, v as u64)));
                }
            }
            let mut j = json!({
                "command": "logical-action",
                "code": css.name(),
                "level": level,
                "k": prof.k,
                "histogram": hist.iter().map(|(r, c)| json!([r, c])).collect::<Vec<_>>(),
                "minus_one": minus,
            });
            if prof.k <= 4 {
                j["residues"] = json!(prof.residues);
            }
            if *anf {
                let p = diag_to_anf(&prof)?;
                lines.push(format!("anf ({} terms, degree {}): {p}", p.len(), p.degree()));
                j["anf"] = json!(p.terms.iter().collect::<Vec<_>>());
            }
            Ok(Report {
                pass: true,
                lines,
                json: j,
            })
        }
        Cmd::Cssify {
            code,
            out,
            verify_distance,
        } => {
            let file = load(&code.file)?;
            let s = file.to_stabilizer()?;
            let css = cssify(&s)?;
            let text = serialize(&CodeFile::Css(css.clone()))?;
            std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
            let mut lines = vec![format!(
                "wrote {} to {}: n = {}, k = {} (input k = {})",
                css.name(),
                out.display(),
                css.n(),
                css.k(),
                s.k()
            )];
            let mut j = json!({"command": "cssify", "code": css.name(), "n": css.n(), "k": css.k(), "input_k": s.k()});
            let mut pass = css.k() >= s.k();
            if let Some(dcap) = verify_distance {
                let d_in = code_distance(&s, *dcap)?;
                let d_out = css.distance(*dcap)?;
                let ok = match (d_in, d_out) {
                    (Some(a), Some(b)) => b >= a,
                    (_, None) => true,
                    (None, Some(_)) => false,
                };
                pass &= ok;
                lines.push(format!("distance: input {d_in:?}, output {d_out:?}"));
                j["distance"] = json!({"input": d_in, "output": d_out});
            }
            lines.insert(0, verdict_word(pass).to_string());
            j["pass"] = json!(pass);
            Ok(Report { pass, lines, json: j })
        }
        Cmd::Qrm {
            m,
            r,
            emit_code,
            polynomial,
        } => {
            let mut lines = Vec::new();
            let mut j = json!({"command": "qrm", "m": m, "r": r});
            if let Some(path) = emit_code {
                let code = qrm_code(*r, *m)?;
                std::fs::write(path, serialize(&CodeFile::Css(code.clone()))?)
                    .with_context(|| format!("writing {}", path.display()))?;
                lines.push(format!(
                    "wrote {} to {}: n = {}, k = {}",
                    code.name(),
                    path.display(),
                    code.n(),
                    code.k()
                ));
                j["n"] = json!(code.n());
                j["k"] = json!(code.k());
            }
            if *r >= 1 && *r <= *m && m % r == 0 {
                let q = qrm_logical_polynomial(*m, *r)?;
                let names: Vec<String> = monomials_of_degree(*m, *r).iter().map(|x| x.to_string()).collect();
                lines.push(format!("terms: {} (closed form {})", q.len(), partition_count(*m, *r)));
                j["terms"] = json!(q.len());
                if *polynomial {
                    lines.push(format!("q = {q}"));
                    for t in &q.terms {
                        lines.push(
                            t.iter()
                                .map(|&i| format!("v{i}[{}]", names[i - 1]))
                                .collect::<Vec<_>>()
                                .join(" "),
                        );
                    }
                    j["polynomial"] = json!(q.terms.iter().collect::<Vec<_>>());
                }
            } else {
                lines.push(format!("r = {r} does not divide m = {m}; no phase polynomial"));
            }
            Ok(Report {
                pass: true,
                lines,
                json: j,
            })
        }
        Cmd::Triortho(code) => {
            let file = load(&code.file)?;
            let css = need_css(&file, "triortho")?;
            let bad = triorthogonality_violation(&g1_matrix(css));
            let pass = bad.is_none();
            let mut lines = vec![format!("{} G1 of {} triorthogonal", verdict_word(pass), css.name())];
            if let Some(idx) = &bad {
                lines.push(format!(
                    "odd overlap in rows {:?}",
                    idx.iter().map(|i| i + 1).collect::<Vec<_>>()
                ));
            }
            Ok(Report {
                pass,
                lines,
                json: json!({"command": "triortho", "code": css.name(), "pass": pass,
                    "rows": bad.map(|v| v.iter().map(|i| i + 1).collect::<Vec<_>>())}),
            })
        }
        Cmd::LogicalIdentity { code, full } => {
            let file = load(&code.file)?;
            let css = need_css(&file, "logical-identity")?;
            let v = if *full {
                check_logical_identity_full(css, cap)?
            } else {
                check_logical_identity(css)?
            };
            Ok(Report {
                pass: v.pass,
                lines: verdict_lines(&format!("transversal T is logical identity on {}", css.name()), &v),
                json: json!({"command": "logical-identity", "code": css.name(), "verdict": verdict_json(&v)}),
            })
        }
        Cmd::LogicalT(code) => {
            let file = load(&code.file)?;
            let css = need_css(&file, "logical-t")?;
            let v = check_logical_transversal_t(css, cap)?;
            Ok(Report {
                pass: v.pass,
                lines: verdict_lines(&format!("transversal T is logical transversal T on {}", css.name()), &v),
                json: json!({"command": "logical-t", "code": css.name(), "verdict": verdict_json(&v)}),
            })
        }
        Cmd::VerifyOracles { n_max, samples, seed } => verify_oracles(*n_max, *samples, *seed, cap),
    }
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

/// Exhaustive over Hermitian Paulis for `n <= 3`, random samples above.
fn verify_oracles(n_max: usize, samples: usize, seed: u64, cap: u64) -> anyhow::Result<Report> {
    if n_max > 5 {
        bail!("the dense oracle is limited to n <= 5");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: std::collections::BTreeMap<&str, usize> = Default::default();
    let mut mismatches = Vec::new();
    let mut one =
        |name: &'static str, p: &PauliOp, gate: GateSpec, rng_free: csst_core::Result<_>| -> anyhow::Result<()> {
            *counts.entry(name).or_default() += 1;
            let got = rng_free?;
            if got != dense_oracle(p, &gate)? {
                mismatches.push(format!("{name}: {p} under {gate:?}"));
            }
            Ok(())
        };
    for n in 1..=n_max.min(3) {
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                for ph in [0, 4] {
                    let p = PauliOp::new(BitVector::from_u64(n, a), BitVector::from_u64(n, b), ph)?;
                    one(
                        "transversal T",
                        &p,
                        GateSpec::transversal_t(n),
                        Ok(conj_transversal_t(&p)),
                    )?;
                    for code in 0..3usize.pow(n as u32) {
                        let t: Vec<u8> = (0..n).map(|i| [0, 1, 7][code / 3usize.pow(i as u32) % 3]).collect();
                        let t1 = BitVector::from_indices(n, (0..n).filter(|&i| t[i] == 1));
                        let t7 = BitVector::from_indices(n, (0..n).filter(|&i| t[i] == 7));
                        one("T/T† pattern", &p, GateSpec::TPattern(t), conj_t_pattern(&p, &t1, &t7))?;
                    }
                    for code in 0..8usize.pow(n as u32) {
                        let t: Vec<u8> = (0..n).map(|i| (code >> (3 * i) & 7) as u8).collect();
                        one("T powers", &p, GateSpec::TPattern(t.clone()), conj_t_powers(&p, &t))?;
                    }
                    for l in 2..=4 {
                        one("Z rotation", &p, GateSpec::ZRotation(l), conj_z_rotation(&p, l))?;
                        let r = random_symmetric(&mut rng, n, l);
                        one(
                            "QFD",
                            &p,
                            GateSpec::Qfd { r: r.clone(), level: l },
                            qfd_conjugate(&p, &r, l, cap),
                        )?;
                    }
                }
            }
        }
    }
    for n in 4..=n_max {
        for _ in 0..samples {
            let p = PauliOp::new(
                BitVector::from_u64(n, rng.gen_range(0..1u64 << n)),
                BitVector::from_u64(n, rng.gen_range(0..1u64 << n)),
                if rng.gen() { 4 } else { 0 },
            )?;
            let t: Vec<u8> = (0..n).map(|_| [0, 1, 7][rng.gen_range(0..3)]).collect();
            let t1 = BitVector::from_indices(n, (0..n).filter(|&i| t[i] == 1));
            let t7 = BitVector::from_indices(n, (0..n).filter(|&i| t[i] == 7));
            let pw: Vec<u8> = (0..n).map(|_| rng.gen_range(0..8)).collect();
            let l = rng.gen_range(2..=4);
            let r = random_symmetric(&mut rng, n, l);
            one(
                "transversal T",
                &p,
                GateSpec::transversal_t(n),
                Ok(conj_transversal_t(&p)),
            )?;
            one("T/T† pattern", &p, GateSpec::TPattern(t), conj_t_pattern(&p, &t1, &t7))?;
            one("T powers", &p, GateSpec::TPattern(pw.clone()), conj_t_powers(&p, &pw))?;
            one("Z rotation", &p, GateSpec::ZRotation(l), conj_z_rotation(&p, l))?;
            one(
                "QFD",
                &p,
                GateSpec::Qfd { r: r.clone(), level: l },
                qfd_conjugate(&p, &r, l, cap),
            )?;
        }
    }
    let pass = mismatches.is_empty();
    let mut lines = vec![format!(
        "{} closed forms against the dense oracle, n <= {n_max}",
        verdict_word(pass)
    )];
    lines.extend(counts.iter().map(|(k, c)| format!("{k}: {c} cases")));
    lines.extend(mismatches.iter().take(20).map(|m| format!("mismatch {m}")));
    Ok(Report {
        pass,
        lines,
        json: json!({"command": "verify-oracles", "pass": pass, "cases": counts, "mismatches": mismatches}),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not an error of the check itself
            let _ = if cli.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&rep.json).expect("serializable")
                )
            } else {
                rep.lines.iter().try_for_each(|l| writeln!(out, "{l}"))
            };
            ExitCode::from(if rep.pass { 0 } else { 1 })
        }
        Err(e) => {
            let cap_hit = matches!(e.downcast_ref::<Error>(), Some(Error::CapExceeded { .. }));
            if cli.json {
                println!("{}", json!({"error": e.to_string(), "cap_exceeded": cap_hit}));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(if cap_hit { 3 } else { 2 })
        }
    }
}
