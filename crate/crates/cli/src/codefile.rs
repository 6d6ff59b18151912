//! Line-oriented text format for stabilizer and CSS codes.
//!
//! ```text
//! # comment
//! name 622
//! n 6
//! kind css
//! x + 111111
//! z - 110000
//! z - 001100
//! z - 000011
//! lx 110000
//! lx 001100
//! lz 010001
//! lz 000101
//! ```
//!
//! Bit strings list qubits `1..n` left to right. CSS files use `x` and `z`
//! lines (X generators must carry `+`) and plain `lx`/`lz` vectors. Stabilizer
//! files use `g <sign> <xbits> <zbits>` for `±E(a, b) = ±i^{a·b} X(a) Z(b)`,
//! so `g + 1 1` is `+Y`; their logical lines take the same three fields.

use std::fmt::Write as _;
use std::path::Path;

use csst_core::csst::{CssCode, StabilizerCode};
use csst_core::gf2core::BitVector;
use csst_core::pauli::PauliOp;
use csst_core::rmcodes::catalog;
use csst_core::{Error, Result};

#[derive(Clone, Debug)]
pub enum CodeFile {
    Css(CssCode),
    Stabilizer(StabilizerCode),
}

impl CodeFile {
    pub fn name(&self) -> &str {
        match self {
            CodeFile::Css(c) => c.name(),
            CodeFile::Stabilizer(s) => s.name(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            CodeFile::Css(c) => c.n(),
            CodeFile::Stabilizer(s) => s.n(),
        }
    }

    pub fn to_stabilizer(&self) -> Result<StabilizerCode> {
        match self {
            CodeFile::Css(c) => c.to_stabilizer(),
            CodeFile::Stabilizer(s) => Ok(s.clone()),
        }
    }

    pub fn as_css(&self) -> Option<&CssCode> {
        match self {
            CodeFile::Css(c) => Some(c),
            CodeFile::Stabilizer(_) => None,
        }
    }
}

fn sign_char(neg: bool) -> char {
    if neg {
        '-'
    } else {
        '+'
    }
}

fn pauli_fields(p: &PauliOp) -> Result<String> {
    let neg = match p.sign() {
        Some(s) => s < 0,
        None => return Err(Error::Precondition(format!("{p} is not Hermitian"))),
    };
    Ok(format!("{} {} {}", sign_char(neg), p.a(), p.b()))
}

pub fn serialize(code: &CodeFile) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "name {}", code.name());
    let _ = writeln!(out, "n {}", code.n());
    match code {
        CodeFile::Css(c) => {
            out.push_str("kind css\n");
            for x in c.x_gens() {
                let _ = writeln!(out, "x + {x}");
            }
            for (z, &neg) in c.z_gens().iter().zip(c.z_signs_negative()) {
                let _ = writeln!(out, "z {} {z}", sign_char(neg));
            }
            for l in c.logical_x() {
                let _ = writeln!(out, "lx {l}");
            }
            for l in c.logical_z() {
                let _ = writeln!(out, "lz {l}");
            }
        }
        CodeFile::Stabilizer(s) => {
            out.push_str("kind stabilizer\n");
            for g in s.generators() {
                let _ = writeln!(out, "g {}", pauli_fields(g)?);
            }
            for l in s.logical_x() {
                let _ = writeln!(out, "lx {}", pauli_fields(l)?);
            }
            for l in s.logical_z() {
                let _ = writeln!(out, "lz {}", pauli_fields(l)?);
            }
        }
    }
    Ok(out)
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn bits(line: usize, s: &str, n: Option<usize>) -> Result<BitVector> {
    let n = n.ok_or_else(|| perr(line, "`n` must come before any vector"))?;
    let v = BitVector::parse(s).map_err(|e| perr(line, e.to_string()))?;
    if v.len() != n {
        return Err(perr(line, format!("expected {n} bits, found {}", v.len())));
    }
    Ok(v)
}

fn sign(line: usize, s: &str) -> Result<bool> {
    match s {
        "+" | "+1" => Ok(false),
        "-" | "-1" => Ok(true),
        _ => Err(perr(line, format!("bad sign `{s}`"))),
    }
}

pub fn parse(text: &str) -> Result<CodeFile> {
    let mut name = None;
    let mut n: Option<usize> = None;
    let mut kind = None;
    let (mut xs, mut zs, mut zneg) = (Vec::new(), Vec::new(), Vec::new());
    let mut gens = Vec::new();
    let (mut lx_v, mut lz_v) = (Vec::new(), Vec::new());
    let (mut lx_p, mut lz_p) = (Vec::new(), Vec::new());
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        let f: Vec<&str> = rest.split_whitespace().collect();
        match key {
            "name" => name = Some(rest.to_string()),
            "n" => n = Some(rest.parse().map_err(|_| perr(line, format!("bad length `{rest}`")))?),
            "kind" => match rest {
                "css" | "stabilizer" => kind = Some(rest.to_string()),
                _ => return Err(perr(line, format!("unknown kind `{rest}`"))),
            },
            "x" => {
                let [s, v] = f[..] else {
                    return Err(perr(line, "expected `x <sign> <bits>`"));
                };
                if sign(line, s)? {
                    return Err(perr(line, "X generators of a CSS file must be positive"));
                }
                xs.push(bits(line, v, n)?);
            }
            "z" => {
                let [s, v] = f[..] else {
                    return Err(perr(line, "expected `z <sign> <bits>`"));
                };
                zneg.push(sign(line, s)?);
                zs.push(bits(line, v, n)?);
            }
            "g" | "lx" | "lz" if f.len() == 3 => {
                let p = PauliOp::new(
                    bits(line, f[1], n)?,
                    bits(line, f[2], n)?,
                    if sign(line, f[0])? { 4 } else { 0 },
                )
                .map_err(|e| perr(line, e.to_string()))?;
                match key {
                    "g" => gens.push(p),
                    "lx" => lx_p.push(p),
                    _ => lz_p.push(p),
                }
            }
            "lx" | "lz" if f.len() == 1 => {
                let v = bits(line, f[0], n)?;
                if key == "lx" {
                    lx_v.push(v)
                } else {
                    lz_v.push(v)
                }
            }
            _ => return Err(perr(line, format!("unrecognised line `{body}`"))),
        }
    }
    let name = name.ok_or_else(|| perr(0, "missing `name`"))?;
    let n = n.ok_or_else(|| perr(0, "missing `n`"))?;
    match kind.as_deref() {
        Some("css") => {
            if !gens.is_empty() || !lx_p.is_empty() || !lz_p.is_empty() {
                return Err(perr(0, "CSS files take `x`, `z` and single-vector logical lines"));
            }
            Ok(CodeFile::Css(CssCode::new(name, n, xs, zs, zneg, lx_v, lz_v)?))
        }
        Some(_) => {
            if !xs.is_empty() || !zs.is_empty() || !lx_v.is_empty() || !lz_v.is_empty() {
                return Err(perr(0, "stabilizer files take `g` lines and three-field logical lines"));
            }
            Ok(CodeFile::Stabilizer(StabilizerCode::new(name, n, gens, lx_p, lz_p)?))
        }
        None => Err(perr(0, "missing `kind`")),
    }
}

/// Reads a code file, or a catalog entry when `source` names one and no file of
/// that name exists.
pub fn load(source: &str) -> Result<CodeFile> {
    let path = Path::new(source);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| perr(0, format!("{source}: {e}")))?;
        return parse(&text);
    }
    catalog(source).map(CodeFile::Css)
}
